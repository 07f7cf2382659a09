#include "losch/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "losch/local_ops.hpp"

namespace losch {

namespace {

// Matrix of a term embedded on a sorted site list (local index convention).
Eigen::MatrixXcd embed_on(const std::vector<int>& support, const LocalTerm& term) {
  std::vector<int> pos;
  for (int q : term.sites)
    pos.push_back(static_cast<int>(std::find(support.begin(), support.end(), q) - support.begin()));
  return embed_operator(static_cast<int>(support.size()), pos, term.matrix);
}

bool terms_commute(const LocalTerm& a, const LocalTerm& b) {
  std::set<int> s(a.sites.begin(), a.sites.end());
  bool overlap = false;
  for (int q : b.sites) {
    if (s.count(q)) overlap = true;
    s.insert(q);
  }
  if (!overlap) return true;
  std::vector<int> support(s.begin(), s.end());
  Eigen::MatrixXcd ma = embed_on(support, a), mb = embed_on(support, b);
  double scale = std::max(1.0, ma.cwiseAbs().maxCoeff() * mb.cwiseAbs().maxCoeff());
  return (ma * mb - mb * ma).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

std::vector<ScheduleEntry> second_order(int n_groups, double scale) {
  std::vector<ScheduleEntry> s;
  if (n_groups == 0) return s;
  for (int g = 0; g + 1 < n_groups; ++g) s.push_back({g, 0.5 * scale});
  s.push_back({n_groups - 1, scale});
  for (int g = n_groups - 2; g >= 0; --g) s.push_back({g, 0.5 * scale});
  return s;
}

void push_merged(std::vector<ScheduleEntry>& out, const ScheduleEntry& e) {
  if (!out.empty() && out.back().group == e.group)
    out.back().fraction += e.fraction;
  else
    out.push_back(e);
}

}  // namespace

TrotterPlan build_plan(const HamiltonianSpec& spec, double t, double tau, int order,
                       PlanOptions options) {
  spec.validate();
  if (order != 1 && order != 2 && order != 4)
    throw std::invalid_argument("unsupported Trotter order " + std::to_string(order));
  if (!(tau > 0.0)) throw std::invalid_argument("Trotter step must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be nonnegative");
  double ratio = t / tau;
  double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) throw std::invalid_argument("incommensurate step");

  TrotterPlan plan;
  plan.order_ = order;
  plan.tau_ = tau;
  plan.n_steps_ = static_cast<int>(n);
  plan.n_qubits_ = spec.n_sites;
  plan.options_ = options;

  // Groups in first-appearance order; greedy disjoint-support sublayers.
  std::vector<std::vector<LocalTerm>> groups;
  for (const auto& term : spec.terms) {
    if (term.matrix.cwiseAbs().maxCoeff() == 0.0) continue;
    auto it = std::find(plan.labels_.begin(), plan.labels_.end(), term.group);
    std::size_t gi = static_cast<std::size_t>(it - plan.labels_.begin());
    if (it == plan.labels_.end()) {
      plan.labels_.push_back(term.group);
      groups.emplace_back();
    }
    for (const auto& other : groups[gi])
      if (!terms_commute(other, term))
        throw std::invalid_argument("terms in Trotter group '" + term.group + "' do not commute");
    groups[gi].push_back(term);
  }
  for (const auto& terms : groups) {
    std::vector<std::vector<LocalTerm>> sub;
    std::vector<std::set<int>> used;
    for (const auto& term : terms) {
      std::size_t slot = 0;
      for (; slot < sub.size(); ++slot) {
        bool clash = false;
        for (int q : term.sites) clash = clash || used[slot].count(q);
        if (!clash) break;
      }
      if (slot == sub.size()) {
        sub.emplace_back();
        used.emplace_back();
      }
      sub[slot].push_back(term);
      used[slot].insert(term.sites.begin(), term.sites.end());
    }
    plan.sublayers_.push_back(std::move(sub));
  }

  const int ng = static_cast<int>(groups.size());
  std::vector<ScheduleEntry> step;
  if (order == 1) {
    for (int g = 0; g < ng; ++g) step.push_back({g, 1.0});
  } else if (order == 2) {
    step = second_order(ng, 1.0);
  } else {
    const double s = 1.0 / (4.0 - std::cbrt(4.0));
    for (double w : {s, s, 1.0 - 4.0 * s, s, s}) {
      auto part = second_order(ng, w);
      step.insert(step.end(), part.begin(), part.end());
    }
  }
  if (options.reverse) std::reverse(step.begin(), step.end());
  if (options.merge_half_layers) {
    std::vector<ScheduleEntry> merged;
    for (const auto& e : step) push_merged(merged, e);
    step = std::move(merged);
  }
  plan.step_ = step;

  for (const auto& e : step) {
    auto key = std::make_pair(e.group, e.fraction);
    if (!plan.entry_cache_.count(key)) plan.entry_cache_[key] = plan.entry_layers(e);
  }
  if (options.merge_half_layers && !step.empty() && step.front().group == step.back().group) {
    ScheduleEntry joined{step.back().group, step.back().fraction + step.front().fraction};
    plan.entry_cache_[{joined.group, joined.fraction}] = plan.entry_layers(joined);
  }
  for (const auto& e : step) {
    const auto& layers = plan.entry_cache_.at({e.group, e.fraction});
    plan.step_layers_.insert(plan.step_layers_.end(), layers.begin(), layers.end());
  }
  return plan;
}

std::vector<Layer> TrotterPlan::entry_layers(const ScheduleEntry& e) const {
  auto it = entry_cache_.find({e.group, e.fraction});
  if (it != entry_cache_.end()) return it->second;
  const cplx c{0.0, (options_.reverse ? 1.0 : -1.0) * e.fraction * tau_};
  std::vector<Layer> layers;
  const auto& subs = sublayers_.at(static_cast<std::size_t>(e.group));
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const auto& terms = options_.reverse ? subs[subs.size() - 1 - k] : subs[k];
    Layer layer;
    for (const auto& term : terms) {
      LocalGate g;
      g.sites = term.sites;
      g.matrix = expm_hermitian(term.matrix, c);
      layer.push_back(std::move(g));
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::vector<ScheduleEntry> TrotterPlan::schedule(int steps) const {
  std::vector<ScheduleEntry> out;
  for (int k = 0; k < steps; ++k)
    for (const auto& e : step_) {
      if (options_.merge_half_layers)
        push_merged(out, e);
      else
        out.push_back(e);
    }
  return out;
}

Circuit TrotterPlan::circuit(int steps) const {
  Circuit c;
  if (!options_.merge_half_layers) {
    for (int k = 0; k < steps; ++k)
      c.layers.insert(c.layers.end(), step_layers_.begin(), step_layers_.end());
    return c;
  }
  for (const auto& e : schedule(steps)) {
    auto layers = entry_layers(e);
    c.layers.insert(c.layers.end(), layers.begin(), layers.end());
  }
  return c;
}

StateVector evolve(const StateVector& state, const TrotterPlan& plan) {
  if (state.n_qubits() != plan.n_qubits()) throw std::invalid_argument("state size mismatch");
  TrotterStepper stepper(plan, state);
  for (int k = 0; k < plan.n_steps(); ++k) stepper.advance();
  return stepper.state();
}

TrotterStepper::TrotterStepper(const TrotterPlan& plan, StateVector initial)
    : plan_(&plan), open_(std::move(initial)) {
  if (open_.n_qubits() != plan.n_qubits()) throw std::invalid_argument("state size mismatch");
}

void TrotterStepper::apply_entry(StateVector& s, const ScheduleEntry& e) const {
  for (const auto& layer : plan_->entry_layers(e)) run_layer_inplace(s, layer);
}

void TrotterStepper::advance() {
  ++steps_;
  if (!plan_->merged()) {
    for (const auto& layer : plan_->step_layers()) run_layer_inplace(open_, layer);
    return;
  }
  auto step = plan_->schedule(1);
  if (step.empty()) return;
  std::size_t first = 0;
  if (pending_) {
    if (pending_->group == step.front().group) {
      step.front().fraction = pending_->fraction + step.front().fraction;
    } else {
      apply_entry(open_, *pending_);
    }
    pending_.reset();
  }
  for (std::size_t i = first; i + 1 < step.size(); ++i) apply_entry(open_, step[i]);
  pending_ = step.back();
}

StateVector TrotterStepper::state() const {
  StateVector s = open_;
  if (pending_) apply_entry(s, *pending_);
  return s;
}

}  // namespace losch

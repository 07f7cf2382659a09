#include "losch/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace losch {

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void Table::add_row(const std::vector<double>& values) {
  std::vector<std::string> row;
  row.reserve(values.size());
  for (double v : values) row.push_back(format_double(v));
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw std::logic_error("row width differs from header");
    line(r);
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!f) throw std::runtime_error("write failed for " + path);
}

void write_csv(const std::string& path, const Table& table) { write_file(path, to_csv(table)); }

Table phase_table(const PhaseTrace& tr, const std::string& time_column) {
  Table t;
  t.header = {time_column, "r", "p_plus", "p_minus", "dphi_dt", "phi", "re_g", "im_g"};
  if (tr.noise)
    for (const char* c : {"p_plus_raw", "p_minus_raw", "p_plus_mitigated", "p_minus_mitigated", "clamped"})
      t.header.push_back(c);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    std::vector<double> row{tr.times[k], tr.r[k],   tr.p_plus[k],     tr.p_minus[k],
                            tr.dphi_dt[k], tr.phi[k], tr.g[k].real(), tr.g[k].imag()};
    if (tr.noise) {
      const auto& n = *tr.noise;
      row.insert(row.end(), {n.p_plus_raw[k], n.p_minus_raw[k], n.p_plus_mitigated[k],
                             n.p_minus_mitigated[k], static_cast<double>(n.clamped[k])});
    }
    t.add_row(row);
  }
  return t;
}

Table ldos_table(const LdosSpectrum& s) {
  Table t;
  t.header = {"E", "d"};
  for (std::size_t j = 0; j < s.energies.size(); ++j) t.add_row({s.energies[j], s.densities[j]});
  return t;
}

}  // namespace losch

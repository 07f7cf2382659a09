#pragma once

#include <string>
#include <vector>

#include "losch/phase.hpp"
#include "losch/spectral.hpp"

namespace losch {

// Shortest form is not used: every value gets 17 significant digits so
// files compare byte-for-byte across runs.
std::string format_double(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
};

std::string to_csv(const Table& table);
// LF line endings regardless of platform.
void write_file(const std::string& path, const std::string& contents);
void write_csv(const std::string& path, const Table& table);

// t,r,p_plus,p_minus,dphi_dt,phi,re_g,im_g (+ noise columns when present).
Table phase_table(const PhaseTrace& trace, const std::string& time_column = "t");
Table ldos_table(const LdosSpectrum& spectrum);

}  // namespace losch

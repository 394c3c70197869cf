#pragma once

#include <string>
#include <vector>

#include "mb/grid.hpp"
#include "mb/minimize.hpp"
#include "mb/radial.hpp"

namespace mb {

// 17-significant-digit decimal, the bit-stable CSV number format.
std::string fmt17(double v);

std::string profile_csv(const RadialProfile& p);
std::string field_csv(const Field& f);
std::string mask_csv(const DomainMask& m);

// Constants report: scalars plus each derivation inequality with its status.
std::string constants_report(const RadialProfile& p, const ModelParams& mp);

std::string minimize_report(const MinimizeResult& r, const Configuration& config);

// Generic CSV round-trip support: header line plus numeric rows.
struct CsvTable {
  std::string header;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);
std::string csv_text(const CsvTable& t);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace mb

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mb/config.hpp"

namespace mb {

struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key = value run description with a pinned schema version. Parsing
// validates the command's key set (unknown keys are rejected by name) and
// fills defaults, so the resolved serialization is self-describing.
struct Manifest {
  std::string command;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  std::vector<double> num_list(const std::string& key) const;
  Configuration centers(const std::string& key, int dim) const;
};

Manifest parse_manifest(const std::string& text);
Manifest parse_manifest_file(const std::string& path);
std::string serialize_manifest(const Manifest& m);

}  // namespace mb

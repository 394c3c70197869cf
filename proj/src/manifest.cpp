#include "mb/manifest.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mb/io.hpp"

namespace mb {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::set<std::string> kCommands = {"ground-state", "minimize", "search",
                                         "sweep",        "verify",   "export"};

const std::set<std::string> kCommon = {"schema_version", "command", "seed", "threads", "out"};

const std::set<std::string> kProfile = {"q", "dim", "tol", "nodes_per_radius",
                                        "sigma0_init", "a1"};

const std::set<std::string> kSolver = {"potential", "alpha",        "centers",
                                       "d_frac",    "h_frac",       "eps_res",
                                       "max_iters", "penalty_weight", "support_tol",
                                       "cg_rtol"};

std::set<std::string> allowed_keys(const std::string& command) {
  std::set<std::string> keys = kCommon;
  if (command == "export") {
    keys.insert("in");
    keys.insert("out_name");
    return keys;
  }
  keys.insert(kProfile.begin(), kProfile.end());
  if (command == "ground-state") return keys;
  keys.insert(kSolver.begin(), kSolver.end());
  if (command == "search") {
    keys.insert("seeds");
    keys.insert("step0_frac");
    keys.insert("box_limit");
    keys.erase("centers");
  }
  if (command == "sweep") keys.insert("alphas");
  if (command == "verify") {
    keys.insert("checks");
    keys.insert("kappa_frac");
    keys.insert("annulus_R_frac");
    keys.insert("support_frac_tol");
  }
  return keys;
}

void fill_defaults(Manifest& m) {
  auto def = [&](const char* k, const char* v) {
    if (!m.has(k)) m.kv[k] = v;
  };
  def("seed", "0");
  def("threads", "1");
  def("out", "out");
  if (m.command == "export") {
    def("out_name", "export.csv");
    return;
  }
  def("tol", "1e-8");
  def("nodes_per_radius", "4096");
  def("sigma0_init", "0.05");
  def("a1", "auto");
  if (m.command == "ground-state") return;
  def("potential", "unit");
  def("alpha", "0");
  def("d_frac", "0.5");
  def("h_frac", "0.015625");
  def("eps_res", "0");
  def("max_iters", "50000");
  def("penalty_weight", "0");
  def("support_tol", "1e-6");
  def("cg_rtol", "1e-8");
  if (m.command == "search") {
    def("step0_frac", "0.25");
    def("box_limit", "0");
  }
  if (m.command == "verify") {
    def("checks", "support,residual,comparison,annulus");
    def("kappa_frac", "1");
    def("annulus_R_frac", "0.5");
    def("support_frac_tol", "1e-4");
  }
}

}  // namespace

const std::string& Manifest::str(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw ManifestError("missing manifest key: " + key);
  return it->second;
}

double Manifest::num(const std::string& key) const {
  try {
    return std::stod(str(key));
  } catch (const std::logic_error&) {
    throw ManifestError("manifest key is not a number: " + key);
  }
}

int Manifest::integer(const std::string& key) const {
  try {
    return std::stoi(str(key));
  } catch (const std::logic_error&) {
    throw ManifestError("manifest key is not an integer: " + key);
  }
}

std::vector<double> Manifest::num_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(str(key));
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    try {
      out.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      throw ManifestError("manifest list entry is not a number in key: " + key);
    }
  }
  if (out.empty()) throw ManifestError("manifest list is empty: " + key);
  return out;
}

Configuration Manifest::centers(const std::string& key, int dim) const {
  Configuration c;
  c.dim = dim;
  std::stringstream ss(str(key));
  std::string tuple;
  while (std::getline(ss, tuple, ';')) {
    tuple = trim(tuple);
    if (tuple.empty()) continue;
    Point p{};
    std::stringstream ts(tuple);
    std::string cell;
    int d = 0;
    while (std::getline(ts, cell, ',')) {
      if (d >= dim) throw ManifestError("too many coordinates in key: " + key);
      try {
        p[d++] = std::stod(trim(cell));
      } catch (const std::logic_error&) {
        throw ManifestError("bad coordinate in key: " + key);
      }
    }
    if (d != dim) throw ManifestError("wrong coordinate count in key: " + key);
    c.points.push_back(p);
  }
  if (c.points.empty()) throw ManifestError("no centres given in key: " + key);
  return c;
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ManifestError("manifest line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ManifestError("empty key on line " + std::to_string(lineno));
    if (m.kv.count(key)) throw ManifestError("duplicate manifest key: " + key);
    m.kv[key] = val;
  }
  if (!m.has("schema_version")) throw ManifestError("missing manifest key: schema_version");
  if (m.str("schema_version") != "1")
    throw ManifestError("unsupported schema_version: " + m.str("schema_version"));
  if (!m.has("command")) throw ManifestError("missing manifest key: command");
  m.command = m.str("command");
  if (!kCommands.count(m.command)) throw ManifestError("unknown command: " + m.command);

  const auto allowed = allowed_keys(m.command);
  for (const auto& [key, val] : m.kv)
    if (!allowed.count(key)) throw ManifestError("unknown manifest key: " + key);

  // Required keys per command.
  auto need = [&](const char* k) {
    if (!m.has(k)) throw ManifestError(std::string("missing manifest key: ") + k);
  };
  if (m.command == "export") {
    need("in");
  } else {
    need("q");
    need("dim");
    if (m.command == "minimize" || m.command == "sweep" || m.command == "verify")
      need("centers");
    if (m.command == "search") need("seeds");
    if (m.command == "sweep") need("alphas");
  }
  fill_defaults(m);
  return m;
}

Manifest parse_manifest_file(const std::string& path) { return parse_manifest(read_file(path)); }

std::string serialize_manifest(const Manifest& m) {
  std::ostringstream os;
  os << "schema_version = " << m.kv.at("schema_version") << "\n";
  os << "command = " << m.command << "\n";
  for (const auto& [key, val] : m.kv) {
    if (key == "schema_version" || key == "command") continue;
    os << key << " = " << val << "\n";
  }
  return os.str();
}

}  // namespace mb

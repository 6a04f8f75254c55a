#include "micromorphx/config.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

namespace mmx {

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(render(issues)), issues_(std::move(issues)) {}

std::string ConfigError::render(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  out << "config error";
  for (const auto& issue : issues) {
    out << "\n";
    if (issue.line > 0) out << "line " << issue.line << ": ";
    out << issue.message;
  }
  return out.str();
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

bool parse_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int& out) {
  try {
    size_t pos = 0;
    out = std::stoi(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "yes" || s == "1") return out = true, true;
  if (s == "false" || s == "no" || s == "0") return out = false, true;
  return false;
}

std::vector<std::string> split_any(const std::string& s, const char* seps) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (std::strchr(seps, c)) {
      if (!cur.empty()) parts.push_back(cur), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, bool validate_material) {
  std::map<std::string, Entry> entries;
  std::vector<ConfigIssue> issues;
  ScenarioConfig cfg;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({lineno, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      issues.push_back({lineno, "empty key"});
      continue;
    }
    if (entries.count(key)) {
      issues.push_back({lineno, "duplicate key '" + key + "'"});
      continue;
    }
    entries[key] = {value, lineno, false};
    cfg.raw.emplace_back(key, value);
  }

  auto take = [&](const std::string& key) -> Entry* {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  };
  auto bad = [&](const Entry* e, const std::string& what) {
    issues.push_back({e->line, what});
  };

  auto read_double = [&](const std::string& key, double& out) {
    if (Entry* e = take(key)) {
      if (!parse_double(e->value, out)) bad(e, "expected a number for '" + key + "'");
    }
  };
  auto read_int = [&](const std::string& key, int& out) {
    if (Entry* e = take(key)) {
      if (!parse_int(e->value, out)) bad(e, "expected an integer for '" + key + "'");
    }
  };
  auto read_bool = [&](const std::string& key, bool& out) {
    if (Entry* e = take(key)) {
      if (!parse_bool(e->value, out)) bad(e, "expected true/false for '" + key + "'");
    }
  };

  if (Entry* e = take("grid.n")) {
    auto parts = split_any(e->value, " ,\t");
    bool ok = parts.size() == 1 || parts.size() == 3;
    std::array<int, 3> n = cfg.grid_n;
    for (size_t i = 0; ok && i < parts.size(); ++i) {
      int v;
      if (!parse_int(parts[i], v)) ok = false;
      else if (parts.size() == 1) n = {v, v, v};
      else n[i] = v;
    }
    if (!ok) bad(e, "grid.n wants one or three integers");
    else cfg.grid_n = n;
  }
  if (Entry* e = take("grid.lengths")) {
    auto parts = split_any(e->value, " ,\t");
    bool ok = parts.size() == 1 || parts.size() == 3;
    std::array<double, 3> L = cfg.grid_lengths;
    for (size_t i = 0; ok && i < parts.size(); ++i) {
      double v;
      if (!parse_double(parts[i], v)) ok = false;
      else if (parts.size() == 1) L = {v, v, v};
      else L[i] = v;
    }
    if (!ok) bad(e, "grid.lengths wants one or three numbers");
    else cfg.grid_lengths = L;
  }
  for (int ax = 0; ax < 3; ++ax) {
    if (cfg.grid_n[ax] < 2)
      issues.push_back({0, "grid needs at least 2 cells per axis"});
    if (cfg.grid_lengths[ax] <= 0.0) issues.push_back({0, "grid lengths must be positive"});
  }

  if (Entry* e = take("material.variant")) {
    if (e->value == "full") cfg.material.variant = ModelVariant::Full;
    else if (e->value == "dev_dev") cfg.material.variant = ModelVariant::DevDev;
    else bad(e, "material.variant must be 'full' or 'dev_dev'");
  }
  read_double("material.mu_e", cfg.material.iso.mu_e);
  read_double("material.lambda_e", cfg.material.iso.lambda_e);
  read_double("material.mu_c", cfg.material.iso.mu_c);
  read_double("material.mu_h", cfg.material.iso.mu_h);
  read_double("material.lambda_h", cfg.material.iso.lambda_h);
  read_double("material.alpha_1", cfg.material.iso.alpha_1);
  read_double("material.alpha_2", cfg.material.iso.alpha_2);
  read_double("material.alpha_3", cfg.material.iso.alpha_3);

  read_double("time.dt", cfg.dt);
  read_double("time.T", cfg.T);
  if (Entry* e = take("time.scheme")) {
    if (e->value == "midpoint") cfg.scheme = Scheme::Midpoint;
    else if (e->value == "leapfrog") cfg.scheme = Scheme::Leapfrog;
    else bad(e, "time.scheme must be 'midpoint' or 'leapfrog'");
  }
  read_bool("time.allow_unstable", cfg.allow_unstable);
  if (cfg.dt <= 0.0) issues.push_back({0, "time.dt must be positive"});
  if (cfg.T <= 0.0) issues.push_back({0, "time.T must be positive"});

  if (Entry* e = take("ic.preset")) {
    if (e->value == "zero" || e->value == "random") cfg.ic_preset = e->value;
    else bad(e, "ic.preset must be 'zero' or 'random'");
  }
  read_double("ic.amplitude", cfg.ic_amplitude);

  if (Entry* e = take("output.directory")) cfg.out_dir = e->value;
  read_int("output.ledger_every", cfg.ledger_every);
  read_int("output.snapshot_every", cfg.snapshot_every);
  if (cfg.ledger_every < 0) issues.push_back({0, "output.ledger_every must be >= 0"});
  if (cfg.snapshot_every < 0) issues.push_back({0, "output.snapshot_every must be >= 0"});
  if (Entry* e = take("output.formats")) {
    cfg.write_csv = false;
    cfg.write_vtk = false;
    for (const std::string& f : split_any(e->value, " ,")) {
      if (f == "csv") cfg.write_csv = true;
      else if (f == "vtk") cfg.write_vtk = true;
      else bad(e, "unknown output format '" + f + "'");
    }
  }

  if (Entry* e = take("dispersion.path")) {
    std::vector<Vec3> path;
    for (const std::string& part : split_any(e->value, ",;")) {
      auto nums = split_any(part, " \t");
      Vec3 k;
      bool ok = nums.size() == 3;
      for (size_t i = 0; ok && i < 3; ++i) ok = parse_double(nums[i], k[i]);
      if (!ok) {
        bad(e, "dispersion.path wants comma-separated 'kx ky kz' triples");
        path.clear();
        break;
      }
      path.push_back(k);
    }
    if (path.size() >= 2) cfg.k_path = path;
    else if (!path.empty()) bad(e, "dispersion.path needs at least two points");
  }
  read_int("dispersion.samples", cfg.k_samples);
  if (cfg.k_samples < 2) issues.push_back({0, "dispersion.samples must be >= 2"});

  // load terms: loads.f<N>.* and loads.m<N>.*
  static const std::regex load_key(
      R"(^loads\.(f|m)(\d+)\.(component|amplitude|time|omega|power|px|py|pz)$)");
  std::map<std::pair<char, int>, LoadTerm> terms;
  for (auto& [key, entry] : entries) {
    std::smatch match;
    if (!std::regex_match(key, match, load_key)) continue;
    entry.used = true;
    const char target = match[1].str()[0];
    const int idx = std::stoi(match[2].str());
    const std::string field = match[3].str();
    LoadTerm& term = terms[{target, idx}];
    term.target = target == 'f' ? LoadTerm::Target::Force : LoadTerm::Target::Moment;
    if (field == "component") {
      int c;
      if (!parse_int(entry.value, c)) bad(&entry, "expected an integer for '" + key + "'");
      else term.component = c;
    } else if (field == "amplitude") {
      if (!parse_double(entry.value, term.amplitude))
        bad(&entry, "expected a number for '" + key + "'");
    } else if (field == "omega") {
      if (!parse_double(entry.value, term.omega))
        bad(&entry, "expected a number for '" + key + "'");
    } else if (field == "power") {
      if (!parse_int(entry.value, term.power))
        bad(&entry, "expected an integer for '" + key + "'");
    } else if (field == "time") {
      if (entry.value == "const") term.shape = LoadTerm::TimeShape::Constant;
      else if (entry.value == "sin") term.shape = LoadTerm::TimeShape::Sin;
      else if (entry.value == "cos") term.shape = LoadTerm::TimeShape::Cos;
      else if (entry.value == "poly") term.shape = LoadTerm::TimeShape::Poly;
      else bad(&entry, "'" + key + "' must be const, sin, cos, or poly");
    } else {
      const int ax = field == "px" ? 0 : field == "py" ? 1 : 2;
      int p;
      if (!parse_int(entry.value, p) || p < 0 || p > 3)
        bad(&entry, "'" + key + "' wants an exponent in 0..3");
      else term.space_pow[ax] = p;
    }
  }
  for (auto& [id, term] : terms) {
    const int ncomp = term.target == LoadTerm::Target::Force ? 3 : 9;
    if (term.component < 0 || term.component >= ncomp) {
      std::ostringstream msg;
      msg << "loads." << id.first << id.second << ".component out of range (0.."
          << ncomp - 1 << ")";
      issues.push_back({0, msg.str()});
    } else {
      cfg.loads.terms.push_back(term);
    }
  }

  for (const auto& [key, entry] : entries)
    if (!entry.used) issues.push_back({entry.line, "unknown key '" + key + "'"});

  auto report = cfg.material.validate();
  if (validate_material && !report.ok) {
    for (const auto& check : report.checks)
      if (!check.ok) {
        int at = 0;
        const std::string name = check.condition.substr(0, check.condition.find(' '));
        if (auto it = entries.find("material." + name); it != entries.end())
          at = it->second.line;
        issues.push_back({at, "parameter condition violated: " + check.condition});
      }
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path, bool validate_material) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{0, "cannot open config file '" + path + "'"}});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), validate_material);
}

}  // namespace mmx

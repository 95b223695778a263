#pragma once
// Flat key=value input files describing a Lie algebroid.
//
// The format is deliberately plain so that the inputs behind a verification
// claim stay auditable: every polynomial is spelled out as a string, there is
// no expression language beyond the polynomial parser, and unknown keys are
// an error rather than silently ignored.
//
//   # comment lines and trailing comments start with '#'
//   name = tangent1
//   m = 1                      # number of base variables
//   vars = y1                  # comma-separated, exactly m names
//   d = 1                      # frame rank
//   anchor[i][j] = <poly>      # 1-based: generator i, variable j; missing = 0
//   structure[i][j][k] = <poly># 1-based, i < j: coefficient of e_k in [e_i,e_j]
//   q = 4                      # default truncation order
//   N = 3                      # default cochain window bound
//   P = 3                      # default sweep arity bound
//   point = 0                  # comma-separated rationals, m entries
//
// Syntax problems throw ParseError; structural problems (wrong counts, bad
// index ranges) throw SpecError via AlgebroidSpec::validate.

#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "liejets/algebroid.hpp"

namespace liejets {

namespace detail {

inline std::string config_trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> config_split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(config_trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(config_trim(cur));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

inline int config_int(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    const int r = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return r;
  } catch (const std::exception&) {
    throw ParseError("config: key '" + key + "' needs an integer, got '" +
                     value + "'");
  }
}

inline Rational config_rational(const std::string& value,
                                const std::string& key) {
  const Polynomial p = parse_polynomial(value, {});
  if (!p.is_constant())
    throw ParseError("config: key '" + key + "' needs a rational constant");
  return p.constant_term();
}

}  // namespace detail

// Parse a config from text.  `origin` names the source in error messages.
inline AlgebroidSpec parse_spec_config(const std::string& text,
                                       const std::string& origin = "config") {
  std::map<std::string, std::string> raw;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::config_trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": expected 'key = value'");
    const std::string key = detail::config_trim(line.substr(0, eq));
    const std::string value = detail::config_trim(line.substr(eq + 1));
    if (key.empty())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!raw.emplace(key, value).second)
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": duplicate key '" + key + "'");
  }

  auto take = [&raw](const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end()) return std::pair<bool, std::string>{false, ""};
    std::pair<bool, std::string> out{true, it->second};
    raw.erase(it);
    return out;
  };
  auto require = [&](const std::string& key) {
    auto [found, value] = take(key);
    if (!found)
      throw ParseError(origin + ": missing required key '" + key + "'");
    return value;
  };

  AlgebroidSpec spec;
  if (auto [found, value] = take("name"); found) spec.name = value;
  spec.m = detail::config_int(require("m"), "m");
  spec.d = detail::config_int(require("d"), "d");
  spec.var_names = detail::config_split(require("vars"), ',');
  if (static_cast<int>(spec.var_names.size()) != spec.m)
    throw ParseError(origin + ": 'vars' lists " +
                     std::to_string(spec.var_names.size()) + " names but m = " +
                     std::to_string(spec.m));
  for (const std::string& v : spec.var_names)
    if (v.empty())
      throw ParseError(origin + ": empty variable name in 'vars'");

  if (auto [found, value] = take("q"); found)
    spec.q = detail::config_int(value, "q");
  if (auto [found, value] = take("N"); found)
    spec.N = detail::config_int(value, "N");
  if (auto [found, value] = take("P"); found)
    spec.P = detail::config_int(value, "P");

  spec.point.assign(static_cast<std::size_t>(spec.m), Rational(0));
  if (auto [found, value] = take("point"); found) {
    const std::vector<std::string> parts = detail::config_split(value, ',');
    if (static_cast<int>(parts.size()) != spec.m)
      throw ParseError(origin + ": 'point' needs " + std::to_string(spec.m) +
                       " entries, got " + std::to_string(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i)
      spec.point[i] = detail::config_rational(parts[i], "point");
  }

  spec.anchor.assign(static_cast<std::size_t>(spec.d),
                     derivation_zero(spec.m));

  const std::regex anchor_re(R"(^anchor\[(\d+)\]\[(\d+)\]$)");
  const std::regex structure_re(R"(^structure\[(\d+)\]\[(\d+)\]\[(\d+)\]$)");
  for (const auto& [key, value] : raw) {
    std::smatch mm;
    if (std::regex_match(key, mm, anchor_re)) {
      const int i = detail::config_int(mm[1].str(), key);
      const int j = detail::config_int(mm[2].str(), key);
      if (i < 1 || i > spec.d || j < 1 || j > spec.m)
        throw ParseError(origin + ": '" + key +
                         "' is out of range (1-based, i <= d, j <= m)");
      try {
        spec.anchor[static_cast<std::size_t>(i - 1)]
            .comps[static_cast<std::size_t>(j - 1)] =
            parse_polynomial(value, spec.var_names);
      } catch (const ParseError& e) {
        throw ParseError(origin + ": '" + key + "': " + e.what());
      }
    } else if (std::regex_match(key, mm, structure_re)) {
      const int i = detail::config_int(mm[1].str(), key);
      const int j = detail::config_int(mm[2].str(), key);
      const int k = detail::config_int(mm[3].str(), key);
      if (i < 1 || j < 1 || k < 1 || i >= j || j > spec.d || k > spec.d)
        throw ParseError(origin + ": '" + key +
                         "' is out of range (1-based, i < j <= d, k <= d)");
      auto& cs = spec.structure[{i - 1, j - 1}];
      if (cs.empty())
        cs.assign(static_cast<std::size_t>(spec.d), Polynomial(spec.m));
      try {
        cs[static_cast<std::size_t>(k - 1)] =
            parse_polynomial(value, spec.var_names);
      } catch (const ParseError& e) {
        throw ParseError(origin + ": '" + key + "': " + e.what());
      }
    } else {
      throw ParseError(origin + ": unknown key '" + key + "'");
    }
  }

  spec.validate();
  return spec;
}

// Load a config file from disk.  Unreadable files throw ParseError.
inline AlgebroidSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ParseError("config: cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_config(buf.str(), path);
}

// Serialize a spec back to the config format (canonical form: sorted keys,
// zero entries omitted).  parse_spec_config(spec_to_config(s)) reproduces s.
inline std::string spec_to_config(const AlgebroidSpec& spec) {
  std::ostringstream out;
  out << "name = " << spec.name << "\n";
  out << "m = " << spec.m << "\n";
  out << "vars = ";
  for (int j = 0; j < spec.m; ++j) {
    if (j) out << ",";
    out << spec.var_names[static_cast<std::size_t>(j)];
  }
  out << "\n";
  out << "d = " << spec.d << "\n";
  for (int i = 0; i < spec.d; ++i)
    for (int j = 0; j < spec.m; ++j) {
      const Polynomial& p = spec.anchor[static_cast<std::size_t>(i)]
                                .comps[static_cast<std::size_t>(j)];
      if (!p.is_zero())
        out << "anchor[" << (i + 1) << "][" << (j + 1)
            << "] = " << p.to_string(spec.var_names) << "\n";
    }
  for (const auto& [ij, cs] : spec.structure)
    for (int k = 0; k < spec.d; ++k) {
      const Polynomial& p = cs[static_cast<std::size_t>(k)];
      if (!p.is_zero())
        out << "structure[" << (ij.first + 1) << "][" << (ij.second + 1)
            << "][" << (k + 1) << "] = " << p.to_string(spec.var_names)
            << "\n";
    }
  out << "q = " << spec.q << "\n";
  out << "N = " << spec.N << "\n";
  out << "P = " << spec.P << "\n";
  out << "point = ";
  for (int j = 0; j < spec.m; ++j) {
    if (j) out << ",";
    out << rational_to_string(spec.point[static_cast<std::size_t>(j)]);
  }
  out << "\n";
  return out.str();
}

}  // namespace liejets

#pragma once

// Config parsing and table serialization for the command-line tool. The
// config format is plain key=value, one pair per line, '#' starts a comment;
// unknown keys are hard errors so typos cannot pass silently.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "squeezamp/metrology.hpp"
#include "squeezamp/protocol.hpp"

namespace squeezamp {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct RunConfig {
  std::string protocol = "single";  // single | msp | custom
  double alpha = 1.0;
  double eta = 0.01;
  double g = 0.5;
  double tau = 2.0;
  double T = 4.0;
  int dim = 0;           // 0 = auto via the oracle sizing rule
  int trotter_steps = 4096;
  std::string output_path;
  std::string format = "csv";
  std::vector<double> g_list;
  std::vector<double> T_list;
  std::string protocol_file;  // segment table for protocol = custom
};

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}
}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key == "protocol") cfg.protocol = val;
    else if (key == "alpha") cfg.alpha = detail::parse_double(key, val);
    else if (key == "eta") cfg.eta = detail::parse_double(key, val);
    else if (key == "g") cfg.g = detail::parse_double(key, val);
    else if (key == "tau") cfg.tau = detail::parse_double(key, val);
    else if (key == "T") cfg.T = detail::parse_double(key, val);
    else if (key == "dim") cfg.dim = detail::parse_int(key, val);
    else if (key == "trotter_steps") cfg.trotter_steps = detail::parse_int(key, val);
    else if (key == "out") cfg.output_path = val;
    else if (key == "format") cfg.format = val;
    else if (key == "g_list") cfg.g_list = detail::parse_list(key, val);
    else if (key == "T_list") cfg.T_list = detail::parse_list(key, val);
    else if (key == "protocol_file") cfg.protocol_file = val;
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (cfg.format != "csv" && cfg.format != "tsv")
    throw ConfigError("config: format must be csv or tsv");
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

/// Custom protocol table: one segment per line,
///   eta sdf_sign alpha pd_sign g duration
/// with '#' comments.
inline ProtocolSpec load_custom_protocol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open protocol file: " + path);
  ProtocolSpec spec;
  spec.name = "custom";
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    SegmentSpec seg;
    if (!(ss >> seg.eta >> seg.sdf_sign >> seg.alpha >> seg.pd_sign >> seg.g >> seg.duration))
      throw ConfigError("protocol file line " + std::to_string(lineno) +
                        ": expected 'eta sdf_sign alpha pd_sign g duration'");
    std::string rest;
    if (ss >> rest)
      throw ConfigError("protocol file line " + std::to_string(lineno) + ": trailing tokens");
    spec.segments.push_back(seg);
    spec.total_T += seg.duration;
  }
  if (spec.segments.empty()) throw ConfigError("protocol file has no segments: " + path);
  return spec;
}

/// Shortest representation capped at 9 significant digits.
inline std::string format_number(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline std::string serialize_sweep(const std::vector<SweepRow>& rows, const std::string& format) {
  const char sep = format == "tsv" ? '\t' : ',';
  std::string out = "protocol,alpha,eta,g,T,delta_eta,delta_beta,n_bar,sql,hl,gain_db,k,flags";
  if (sep != ',')
    for (auto& c : out)
      if (c == ',') c = sep;
  out += '\n';
  for (const auto& r : rows) {
    out += r.protocol;
    for (double v : {r.alpha, r.eta, r.g, r.T, r.delta_eta, r.delta_beta, r.n_bar, r.sql, r.hl,
                     r.gain_db}) {
      out += sep;
      out += format_number(v);
    }
    out += sep;
    if (r.k) out += format_number(*r.k);
    out += sep;
    out += r.flags;
    out += '\n';
  }
  return out;
}

}  // namespace squeezamp

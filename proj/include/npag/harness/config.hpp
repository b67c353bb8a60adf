#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "npag/core/types.hpp"

namespace npag::harness {

struct ProblemConfig {
  // logistic-difference | two-layer-nn | portfolio | synthetic-composition
  std::string benchmark = "synthetic-composition";
  std::string data;  // empty: generate synthetic data
  bool csv_header = false;
  std::optional<double> relabel_positive;
  std::optional<double> relabel_negative;
  std::optional<double> beta;  // unset: 1/N for classification, 0.01 for portfolio
  double lambda = 0.2;
  double radius = 1.0;
  Index samples = 1000;
  Index features = 20;
  double density = 0.1;
  std::uint64_t data_seed = 7;
  std::vector<Index> dims{5, 3, 1};
  std::vector<Index> components{50};
  Index hidden = 3;
};

struct MethodConfig {
  // npag-exact | prox-spider | prox-svrg | prox-saga | nested-spider
  std::string name = "prox-spider";
  // experiment: settings used in the experiments; theory: the analysed schedules.
  std::string preset = "experiment";
  std::optional<double> eta;
  // power | constant (experiment preset); the theory preset derives its own sequence.
  std::string epsilon_schedule = "power";
  std::optional<double> epsilon;
  double epsilon_scale = 10.0;
  double epsilon_power = 0.5;
  std::optional<Index> tau;
  std::optional<Index> big_batch;
  std::optional<Index> small_batch;
  std::optional<Index> map_batch;
  std::optional<Index> map_small_batch;
  // auto | expectation | finite-sum (theory preset of nested-spider)
  std::string nested_mode = "auto";
  double theta = 1.0;
  double gap = 1.0;
  bool constant_epsilon = false;
};

struct RunSection {
  Index iterations = 0;
  Index stages = 0;
  std::vector<std::uint64_t> seeds{1};
  Index diagnostic_cadence = 0;
  double stop_tolerance = 0.0;
  std::string output = "npag_out";
  Index workers = 0;  // 0: hardware concurrency
};

struct RunConfig {
  ProblemConfig problem;
  MethodConfig method;
  RunSection run;
};

namespace detail {

using boost::property_tree::ptree;

inline const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"problem",
       {"benchmark", "data", "csv_header", "relabel_positive", "relabel_negative", "beta", "lambda",
        "radius", "samples", "features", "density", "data_seed", "dims", "components", "hidden"}},
      {"method",
       {"name", "preset", "eta", "epsilon_schedule", "epsilon", "epsilon_scale", "epsilon_power", "tau",
        "big_batch", "small_batch", "map_batch", "map_small_batch", "nested_mode", "theta", "gap",
        "constant_epsilon"}},
      {"run", {"iterations", "stages", "seeds", "diagnostic_cadence", "stop_tolerance", "output", "workers"}},
  };
  return keys;
}

inline std::string field(const std::string& section, const std::string& key) {
  return section + "." + key;
}

inline double to_double(const std::string& name, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(name + ": expected a number, got '" + text + "'");
  }
}

inline std::uint64_t to_unsigned(const std::string& name, const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(name + ": expected a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ConfigError(name + ": integer out of range");
  }
}

inline bool to_bool(const std::string& name, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(name + ": expected true or false, got '" + text + "'");
}

inline std::string trimmed(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <class T>
std::vector<T> to_list(const std::string& name, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    if (item.empty()) throw ConfigError(name + ": empty list entry");
    out.push_back(static_cast<T>(to_unsigned(name, item)));
  }
  if (out.empty()) throw ConfigError(name + ": list must not be empty");
  return out;
}

// Seeds as "1,2,3" or a range "1-20".
inline std::vector<std::uint64_t> to_seeds(const std::string& name, const std::string& text) {
  const auto dash = text.find('-');
  if (dash != std::string::npos && text.find(',') == std::string::npos) {
    const std::uint64_t lo = to_unsigned(name, trimmed(text.substr(0, dash)));
    const std::uint64_t hi = to_unsigned(name, trimmed(text.substr(dash + 1)));
    if (hi < lo) throw ConfigError(name + ": empty seed range");
    if (hi - lo >= 100000) throw ConfigError(name + ": seed range too large");
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  return to_list<std::uint64_t>(name, text);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

// Shortest text that parses back to the same double.
inline std::string number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace detail

/// Reads the INI-style run configuration. Unknown sections or keys and malformed values
/// raise ConfigError naming the offending field.
inline RunConfig parse_config(std::istream& in) {
  using detail::field;
  detail::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config: " + std::string(e.message()) + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = detail::known_keys().find(section);
    if (it == detail::known_keys().end()) throw ConfigError("config: unknown section [" + section + "]");
    if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key " + field(section, key));
    }
  }

  RunConfig cfg;
  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    const auto v = tree.get_optional<std::string>(detail::ptree::path_type(section + "." + key, '.'));
    if (!v) return std::nullopt;
    return detail::trimmed(*v);
  };
  auto num = [&](const std::string& s, const std::string& k, auto& target) {
    if (auto v = get(s, k)) target = detail::to_double(field(s, k), *v);
  };
  auto count = [&](const std::string& s, const std::string& k, auto& target) {
    if (auto v = get(s, k)) target = static_cast<Index>(detail::to_unsigned(field(s, k), *v));
  };
  auto text = [&](const std::string& s, const std::string& k, std::string& target) {
    if (auto v = get(s, k)) target = *v;
  };
  auto flag = [&](const std::string& s, const std::string& k, bool& target) {
    if (auto v = get(s, k)) target = detail::to_bool(field(s, k), *v);
  };
  auto opt_num = [&](const std::string& s, const std::string& k, std::optional<double>& target) {
    if (auto v = get(s, k); v && *v != "auto") target = detail::to_double(field(s, k), *v);
  };
  auto opt_count = [&](const std::string& s, const std::string& k, std::optional<Index>& target) {
    if (auto v = get(s, k); v && *v != "auto") {
      target = static_cast<Index>(detail::to_unsigned(field(s, k), *v));
    }
  };

  ProblemConfig& p = cfg.problem;
  text("problem", "benchmark", p.benchmark);
  text("problem", "data", p.data);
  flag("problem", "csv_header", p.csv_header);
  opt_num("problem", "relabel_positive", p.relabel_positive);
  opt_num("problem", "relabel_negative", p.relabel_negative);
  opt_num("problem", "beta", p.beta);
  num("problem", "lambda", p.lambda);
  num("problem", "radius", p.radius);
  count("problem", "samples", p.samples);
  count("problem", "features", p.features);
  num("problem", "density", p.density);
  if (auto v = get("problem", "data_seed")) p.data_seed = detail::to_unsigned("problem.data_seed", *v);
  if (auto v = get("problem", "dims")) p.dims = detail::to_list<Index>("problem.dims", *v);
  if (auto v = get("problem", "components")) p.components = detail::to_list<Index>("problem.components", *v);
  count("problem", "hidden", p.hidden);

  MethodConfig& m = cfg.method;
  text("method", "name", m.name);
  text("method", "preset", m.preset);
  opt_num("method", "eta", m.eta);
  text("method", "epsilon_schedule", m.epsilon_schedule);
  opt_num("method", "epsilon", m.epsilon);
  num("method", "epsilon_scale", m.epsilon_scale);
  num("method", "epsilon_power", m.epsilon_power);
  opt_count("method", "tau", m.tau);
  opt_count("method", "big_batch", m.big_batch);
  opt_count("method", "small_batch", m.small_batch);
  opt_count("method", "map_batch", m.map_batch);
  opt_count("method", "map_small_batch", m.map_small_batch);
  text("method", "nested_mode", m.nested_mode);
  num("method", "theta", m.theta);
  num("method", "gap", m.gap);
  flag("method", "constant_epsilon", m.constant_epsilon);

  RunSection& r = cfg.run;
  count("run", "iterations", r.iterations);
  count("run", "stages", r.stages);
  if (auto v = get("run", "seeds")) r.seeds = detail::to_seeds("run.seeds", *v);
  count("run", "diagnostic_cadence", r.diagnostic_cadence);
  num("run", "stop_tolerance", r.stop_tolerance);
  text("run", "output", r.output);
  count("run", "workers", r.workers);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in);
}

/// Checks value ranges and method/problem compatibility.
inline void validate_config(const RunConfig& cfg) {
  static const std::set<std::string> benchmarks{"logistic-difference", "two-layer-nn", "portfolio",
                                                "synthetic-composition"};
  static const std::set<std::string> methods{"npag-exact", "prox-spider", "prox-svrg", "prox-saga",
                                             "nested-spider"};
  const auto& p = cfg.problem;
  const auto& m = cfg.method;
  const auto& r = cfg.run;
  if (!benchmarks.count(p.benchmark)) throw ConfigError("problem.benchmark: unknown benchmark '" + p.benchmark + "'");
  if (!methods.count(m.name)) throw ConfigError("method.name: unknown method '" + m.name + "'");
  if (m.preset != "experiment" && m.preset != "theory") {
    throw ConfigError("method.preset: expected experiment or theory");
  }
  if (m.epsilon_schedule != "power" && m.epsilon_schedule != "constant") {
    throw ConfigError("method.epsilon_schedule: expected power or constant");
  }
  if (m.nested_mode != "auto" && m.nested_mode != "expectation" && m.nested_mode != "finite-sum") {
    throw ConfigError("method.nested_mode: expected auto, expectation or finite-sum");
  }
  if (m.eta && !(*m.eta > 0.0)) throw ConfigError("method.eta: must be positive");
  if (m.epsilon && !(*m.epsilon > 0.0)) throw ConfigError("method.epsilon: must be positive");
  if (!(m.epsilon_scale > 0.0)) throw ConfigError("method.epsilon_scale: must be positive");
  if (!(m.epsilon_power >= 0.0)) throw ConfigError("method.epsilon_power: must be non-negative");
  if (!(m.theta > 0.0)) throw ConfigError("method.theta: must be positive");
  if (!(m.gap >= 0.0)) throw ConfigError("method.gap: must be non-negative");
  for (auto [name, v] : {std::pair{"method.tau", m.tau}, std::pair{"method.big_batch", m.big_batch},
                         std::pair{"method.small_batch", m.small_batch},
                         std::pair{"method.map_batch", m.map_batch},
                         std::pair{"method.map_small_batch", m.map_small_batch}}) {
    if (v && *v == 0) throw ConfigError(std::string(name) + ": must be >= 1");
  }
  if (p.beta && !(*p.beta >= 0.0)) throw ConfigError("problem.beta: must be non-negative");
  if (!(p.lambda >= 0.0)) throw ConfigError("problem.lambda: must be non-negative");
  if (!(p.radius > 0.0)) throw ConfigError("problem.radius: must be positive");
  if (p.samples == 0 || p.features == 0) throw ConfigError("problem.samples/features: must be >= 1");
  if (!(p.density > 0.0 && p.density <= 1.0)) throw ConfigError("problem.density: must lie in (0, 1]");
  if (p.relabel_positive.has_value() != p.relabel_negative.has_value()) {
    throw ConfigError("problem.relabel_positive/relabel_negative: set both or neither");
  }
  if (p.benchmark == "synthetic-composition") {
    if (p.dims.size() < 2 || p.dims.back() != 1) {
      throw ConfigError("problem.dims: need d_0,...,d_m with d_m = 1");
    }
    if (p.components.size() != 1 && p.components.size() != p.dims.size() - 1) {
      throw ConfigError("problem.components: one entry or one per level");
    }
  }
  const bool one_level = p.benchmark == "logistic-difference" || p.benchmark == "two-layer-nn" ||
                         (p.benchmark == "synthetic-composition" && p.dims.size() == 2);
  if ((m.name == "prox-spider" || m.name == "prox-svrg" || m.name == "prox-saga") && !one_level) {
    throw ConfigError("method.name: " + m.name + " requires a one-level problem");
  }
  if (r.seeds.empty()) throw ConfigError("run.seeds: at least one seed is required");
  if (!(r.stop_tolerance >= 0.0)) throw ConfigError("run.stop_tolerance: must be non-negative");
  if (r.output.empty()) throw ConfigError("run.output: must not be empty");
}

/// The configuration with every field spelled out, in the format parse_config reads.
inline std::string render_config(const RunConfig& cfg) {
  using detail::join;
  using detail::number;
  std::ostringstream os;
  const auto& p = cfg.problem;
  const auto& m = cfg.method;
  const auto& r = cfg.run;
  auto opt = [](const auto& v) { return v ? number(static_cast<double>(*v)) : std::string("auto"); };
  os << "[problem]\n"
     << "benchmark = " << p.benchmark << "\n"
     << "data = " << p.data << "\n"
     << "csv_header = " << (p.csv_header ? "true" : "false") << "\n"
     << "relabel_positive = " << opt(p.relabel_positive) << "\n"
     << "relabel_negative = " << opt(p.relabel_negative) << "\n"
     << "beta = " << opt(p.beta) << "\n"
     << "lambda = " << number(p.lambda) << "\n"
     << "radius = " << number(p.radius) << "\n"
     << "samples = " << p.samples << "\n"
     << "features = " << p.features << "\n"
     << "density = " << number(p.density) << "\n"
     << "data_seed = " << p.data_seed << "\n"
     << "dims = " << join(p.dims) << "\n"
     << "components = " << join(p.components) << "\n"
     << "hidden = " << p.hidden << "\n\n";
  os << "[method]\n"
     << "name = " << m.name << "\n"
     << "preset = " << m.preset << "\n"
     << "eta = " << opt(m.eta) << "\n"
     << "epsilon_schedule = " << m.epsilon_schedule << "\n"
     << "epsilon = " << opt(m.epsilon) << "\n"
     << "epsilon_scale = " << number(m.epsilon_scale) << "\n"
     << "epsilon_power = " << number(m.epsilon_power) << "\n"
     << "tau = " << opt(m.tau) << "\n"
     << "big_batch = " << opt(m.big_batch) << "\n"
     << "small_batch = " << opt(m.small_batch) << "\n"
     << "map_batch = " << opt(m.map_batch) << "\n"
     << "map_small_batch = " << opt(m.map_small_batch) << "\n"
     << "nested_mode = " << m.nested_mode << "\n"
     << "theta = " << number(m.theta) << "\n"
     << "gap = " << number(m.gap) << "\n"
     << "constant_epsilon = " << (m.constant_epsilon ? "true" : "false") << "\n\n";
  os << "[run]\n"
     << "iterations = " << r.iterations << "\n"
     << "stages = " << r.stages << "\n"
     << "seeds = " << join(r.seeds) << "\n"
     << "diagnostic_cadence = " << r.diagnostic_cadence << "\n"
     << "stop_tolerance = " << number(r.stop_tolerance) << "\n"
     << "output = " << r.output << "\n"
     << "workers = " << r.workers << "\n";
  return os.str();
}

}  // namespace npag::harness

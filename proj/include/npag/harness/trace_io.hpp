#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "npag/driver/npag.hpp"
#include "npag/schedules/nested_schedule.hpp"

namespace npag::harness {

// Shortest text that parses back to the same double.
inline std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

struct SeedResult {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunTrace trace;
  // |G(xbar)| at the output point; NaN when no exact oracle is available.
  double output_mapping_norm = std::numeric_limits<double>::quiet_NaN();
};

inline const char* kTraceHeader =
    "seed,t,stage,epsilon_t,gamma_t,step_len,samples_cumulative,grad_map_norm,objective,diagnostic_samples";

/// One row per iteration, ordered by (seed, t). Diagnostic columns are empty when not computed.
inline void write_trace(std::ostream& out, std::vector<const SeedResult*> results) {
  std::sort(results.begin(), results.end(),
            [](const SeedResult* a, const SeedResult* b) { return a->seed < b->seed; });
  out << kTraceHeader << '\n';
  for (const SeedResult* r : results) {
    if (!r->ok) continue;
    for (const IterationRecord& rec : r->trace.records) {
      out << r->seed << ',' << rec.t << ',' << rec.stage << ',' << fmt(rec.epsilon) << ','
          << fmt(rec.gamma) << ',' << fmt(rec.step_length) << ',' << rec.samples << ','
          << (rec.mapping_norm ? fmt(*rec.mapping_norm) : "") << ','
          << (rec.objective ? fmt(*rec.objective) : "") << ',' << rec.diagnostic_samples << '\n';
    }
  }
}

struct AggregatePoint {
  std::uint64_t budget = 0;
  Index seeds = 0;
  double mean_mapping_norm = 0.0;
  double mean_objective = 0.0;
};

/// Mean diagnostic curves on a common grid of sample budgets. A seed's value at budget B
/// is its last diagnostic taken with at most B samples consumed before that iteration.
/// The grid has `points` evenly spaced budgets up to the smallest final budget of any
/// seed. Seeds are summed in ascending seed order.
inline std::vector<AggregatePoint> aggregate(std::vector<const SeedResult*> results, Index points = 100) {
  std::sort(results.begin(), results.end(),
            [](const SeedResult* a, const SeedResult* b) { return a->seed < b->seed; });
  struct Curve {
    std::vector<std::uint64_t> budget;
    std::vector<double> g, obj;
  };
  std::vector<Curve> curves;
  std::uint64_t horizon = std::numeric_limits<std::uint64_t>::max();
  for (const SeedResult* r : results) {
    if (!r->ok) continue;
    Curve c;
    std::uint64_t before = 0;
    for (const IterationRecord& rec : r->trace.records) {
      if (rec.mapping_norm) {
        c.budget.push_back(before);
        c.g.push_back(*rec.mapping_norm);
        c.obj.push_back(rec.objective.value_or(std::numeric_limits<double>::quiet_NaN()));
      }
      before = rec.samples;
    }
    if (c.budget.empty()) continue;
    horizon = std::min(horizon, c.budget.back());
    curves.push_back(std::move(c));
  }
  std::vector<AggregatePoint> out;
  if (curves.empty() || points == 0) return out;
  for (Index k = 0; k < points; ++k) {
    const std::uint64_t b = points == 1 ? horizon
                                        : static_cast<std::uint64_t>(std::llround(
                                              static_cast<double>(horizon) * static_cast<double>(k) /
                                              static_cast<double>(points - 1)));
    AggregatePoint pt;
    pt.budget = b;
    for (const Curve& c : curves) {
      const auto it = std::upper_bound(c.budget.begin(), c.budget.end(), b);
      if (it == c.budget.begin()) continue;
      const std::size_t idx = static_cast<std::size_t>(it - c.budget.begin()) - 1;
      pt.mean_mapping_norm += c.g[idx];
      pt.mean_objective += c.obj[idx];
      ++pt.seeds;
    }
    if (pt.seeds == 0) continue;
    pt.mean_mapping_norm /= static_cast<double>(pt.seeds);
    pt.mean_objective /= static_cast<double>(pt.seeds);
    if (!out.empty() && out.back().budget == pt.budget) continue;
    out.push_back(pt);
  }
  return out;
}

inline void write_aggregate(std::ostream& out, const std::vector<AggregatePoint>& pts) {
  out << "samples,seeds,mean_grad_map_norm,mean_objective\n";
  for (const auto& p : pts) {
    out << p.budget << ',' << p.seeds << ',' << fmt(p.mean_mapping_norm) << ',' << fmt(p.mean_objective)
        << '\n';
  }
}

namespace detail {
template <class T>
std::string csv_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

inline std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    Index v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw ConfigError("schedule: bad integer list '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}
}  // namespace detail

/// Writes a nested schedule in the run-config format: a [schedule] header section and
/// one [stage.k] section per stage.
inline void write_schedule(std::ostream& out, const NestedSchedule& s) {
  out << "[schedule]\n"
      << "mode = " << to_string(s.mode) << "\n"
      << "levels = " << s.levels << "\n"
      << "stages = " << s.stages.size() << "\n"
      << "target_epsilon = " << fmt(s.target_epsilon) << "\n"
      << "theta = " << fmt(s.theta) << "\n"
      << "gap = " << fmt(s.gap) << "\n"
      << "constant_epsilon = " << (s.constant_epsilon ? "true" : "false") << "\n"
      << "fell_back = " << (s.fell_back ? "true" : "false") << "\n"
      << "ell_F = " << fmt(s.constants.ell_F) << "\n"
      << "L_F = " << fmt(s.constants.L_F) << "\n"
      << "sigma_F_sq = " << fmt(s.constants.sigma_F_sq) << "\n"
      << "delta_F_sq = " << fmt(s.constants.delta_F_sq) << "\n"
      << "predicted_samples = " << predicted_sample_count(s) << "\n";
  for (std::size_t k = 0; k < s.stages.size(); ++k) {
    const NestedStage& st = s.stages[k];
    out << "\n[stage." << (k + 1) << "]\n"
        << "epsilon = " << fmt(st.epsilon) << "\n"
        << "tau = " << st.tau << "\n"
        << "B = " << detail::csv_list(st.batches.B) << "\n"
        << "b = " << detail::csv_list(st.batches.b) << "\n"
        << "S = " << detail::csv_list(st.batches.S) << "\n"
        << "s = " << detail::csv_list(st.batches.s) << "\n";
  }
}

/// Reads a schedule written by write_schedule.
inline NestedSchedule read_schedule(std::istream& in) {
  using boost::property_tree::ptree;
  ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("schedule: " + std::string(e.message()));
  }
  auto section = [&](const std::string& name) -> const ptree& {
    const auto it = tree.find(name);
    if (it == tree.not_found()) throw ConfigError("schedule: missing section [" + name + "]");
    return it->second;
  };
  auto num = [](const ptree& p, const std::string& key) {
    const auto v = p.get_optional<std::string>(key);
    if (!v) throw ConfigError("schedule: missing key " + key);
    double d = 0.0;
    const auto r = std::from_chars(v->data(), v->data() + v->size(), d);
    if (r.ec != std::errc()) throw ConfigError("schedule: bad number for " + key);
    return d;
  };
  const ptree& head = section("schedule");
  NestedSchedule s;
  const std::string mode = head.get<std::string>("mode", "");
  if (mode == "expectation") {
    s.mode = ScheduleMode::kExpectation;
  } else if (mode == "finite-sum") {
    s.mode = ScheduleMode::kFiniteSum;
  } else if (mode == "practical") {
    s.mode = ScheduleMode::kPractical;
  } else {
    throw ConfigError("schedule: unknown mode '" + mode + "'");
  }
  s.levels = static_cast<Index>(num(head, "levels"));
  const Index stages = static_cast<Index>(num(head, "stages"));
  s.target_epsilon = num(head, "target_epsilon");
  s.theta = num(head, "theta");
  s.gap = num(head, "gap");
  s.constant_epsilon = head.get<std::string>("constant_epsilon", "false") == "true";
  s.fell_back = head.get<std::string>("fell_back", "false") == "true";
  s.constants.ell_F = num(head, "ell_F");
  s.constants.L_F = num(head, "L_F");
  s.constants.sigma_F_sq = num(head, "sigma_F_sq");
  s.constants.delta_F_sq = num(head, "delta_F_sq");
  for (Index k = 1; k <= stages; ++k) {
    const ptree& p = section("stage." + std::to_string(k));
    NestedStage st;
    st.epsilon = num(p, "epsilon");
    st.tau = static_cast<Index>(num(p, "tau"));
    st.batches.B = detail::parse_index_list(p.get<std::string>("B", ""));
    st.batches.b = detail::parse_index_list(p.get<std::string>("b", ""));
    st.batches.S = detail::parse_index_list(p.get<std::string>("S", ""));
    st.batches.s = detail::parse_index_list(p.get<std::string>("s", ""));
    s.stages.push_back(std::move(st));
  }
  validate_schedule(s);
  return s;
}

}  // namespace npag::harness

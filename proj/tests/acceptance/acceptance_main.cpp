#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "npag/harness/runner.hpp"
#include "support.hpp"

namespace npag {
namespace {

using testing::random_vector;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Wraps a gradient source and keeps every query point x^t.
template <class Inner>
struct Recording {
  Inner inner;
  std::vector<Vector> points;

  Vector estimate(const IterationContext& ctx, const Vector& x, SampleLedger& ledger) {
    points.push_back(x);
    return inner.estimate(ctx, x, ledger);
  }
};

template <class Inner>
Recording<Inner> recording(Inner inner) {
  return Recording<Inner>{std::move(inner), {}};
}

// Iterates x^0, ..., x^T of a run: the recorded query points plus the final point.
template <class Inner>
std::vector<Vector> iterates(const Recording<Inner>& rec, const RunTrace& trace) {
  std::vector<Vector> xs = rec.points;
  xs.push_back(trace.final_point);
  return xs;
}

std::shared_ptr<const SparseDataset> sparse_data(Index n, Index d, double density, std::uint64_t seed) {
  return std::make_shared<const SparseDataset>(make_sparse_dataset(n, d, density, seed));
}

std::vector<Index> component_counts(const CompositionProblem& p) {
  std::vector<Index> n;
  for (Index i = 0; i < p.levels(); ++i) n.push_back(p.level(i).oracle->component_count());
  return n;
}

// Largest |x^{t+1} - x^t| - eta eps_t over a run.
double worst_cap_excess(const std::vector<Vector>& xs, const RunTrace& trace, double eta) {
  double worst = -1e300;
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
    worst = std::max(worst, (xs[t + 1] - xs[t]).norm() - eta * trace.records[t].epsilon);
  }
  return worst;
}

// Step-cap law on every driver, iteration and seed.
TEST(Criterion01, StepCapLaw) {
  Stopwatch clock;
  const CompositionProblem logistic = logistic_difference_problem(sparse_data(300, 30, 0.2, 1), 1.0 / 300);
  const CompositionProblem twolayer = two_layer_nn_problem(sparse_data(300, 30, 0.2, 2), 1.0 / 300);
  const CompositionProblem portfolio =
      portfolio_problem(std::make_shared<const PayoffMatrix>(make_payoffs(200, 10, 3)), {});
  SyntheticOptions so;
  so.dims = {8, 5, 3, 1};
  so.components = {60};
  so.regularizer = l1_regularizer(0.01);
  const CompositionProblem synthetic = synthetic_composition(so, 4);

  std::size_t checked = 0;
  double worst = -1e300;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (const CompositionProblem* p : {&logistic, &twolayer}) {
      for (double eta : {1.0, 0.3}) {
        NpagConfig cfg;
        cfg.eta = eta;
        cfg.epsilon = EpsilonPlan::power(10.0, 0.5, 18);
        cfg.iterations = 300;
        cfg.seed = seed;
        auto check = [&](auto source) {
          auto rec = recording(std::move(source));
          const RunTrace tr = run_npag(*p, rec, cfg);
          worst = std::max(worst, worst_cap_excess(iterates(rec, tr), tr, eta));
          checked += tr.records.size();
        };
        check(ExactGradientSource(*p));
        check(SpiderSource(*p, 300, 18));
        check(SvrgSource(*p, 300, 45));
        check(SagaSource(*p, 45));
      }
    }
    for (const CompositionProblem* p : {&portfolio, &synthetic}) {
      const Index n = component_counts(*p)[0];
      const NestedSchedule s =
          nested_schedule_practical(compose_constants(*p), p->levels(), component_counts(*p), 20, 1.0, 0.5,
                                    ceil_count(std::sqrt(double(n))), 15, 15);
      for (double eta : {0.5, 0.1}) {
        NpagConfig cfg;
        cfg.eta = eta;
        cfg.epsilon = s.epsilon_plan();
        cfg.seed = seed;
        auto rec = recording(NestedSpiderSource(*p, s));
        const RunTrace tr = run_npag(*p, rec, cfg);
        worst = std::max(worst, worst_cap_excess(iterates(rec, tr), tr, eta));
        checked += tr.records.size();
        auto exact = recording(ExactGradientSource(*p));
        const RunTrace te = run_npag(*p, exact, cfg);
        worst = std::max(worst, worst_cap_excess(iterates(exact, te), te, eta));
        checked += te.records.size();
      }
    }
  }
  std::printf("  steps checked: %zu, max(|dx| - eta eps): %.3e\n", checked, worst);
  EXPECT_LE(worst, 1e-12);
  EXPECT_LT(clock.seconds(), 60.0);
}

template <class Inner>
void expect_same_trajectory(const CompositionProblem& p, Inner source, const NpagConfig& cfg,
                            const std::vector<Vector>& reference, Index reference_output, const char* name) {
  auto rec = recording(std::move(source));
  const RunTrace tr = run_npag(p, rec, cfg);
  const std::vector<Vector> xs = iterates(rec, tr);
  ASSERT_EQ(xs.size(), reference.size()) << name;
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < xs.size(); ++t) mismatches += xs[t] == reference[t] ? 0 : 1;
  EXPECT_EQ(mismatches, 0u) << name;
  EXPECT_EQ(tr.output_index, reference_output) << name;
  std::printf("  %-26s %zu iterates, %zu bitwise mismatches\n", name, xs.size(), mismatches);
}

// Full batches reproduce the exact-gradient trajectory bitwise.
TEST(Criterion02, FullBatchDegeneracy) {
  const Index n = 50;
  const CompositionProblem one = logistic_difference_problem(sparse_data(n, 10, 0.5, 5), 1.0 / n);
  NpagConfig cfg;
  cfg.eta = 1.0;
  cfg.epsilon = EpsilonPlan::power(10.0, 0.5, 8);
  cfg.iterations = 200;
  cfg.seed = 17;
  auto exact = recording(ExactGradientSource(one));
  const RunTrace ref = run_npag(one, exact, cfg);
  const std::vector<Vector> xs = iterates(exact, ref);
  expect_same_trajectory(one, SpiderSource(one, n, n), cfg, xs, ref.output_index, "prox-spider");
  expect_same_trajectory(one, SvrgSource(one, n, n), cfg, xs, ref.output_index, "prox-svrg");
  expect_same_trajectory(one, SagaSource(one, n), cfg, xs, ref.output_index, "prox-saga");
  const NestedSchedule s1 = nested_schedule_practical(compose_constants(one), 1, {n}, 25, 10.0, 0.5, 8, n, n);
  expect_same_trajectory(one, NestedSpiderSource(one, s1), cfg, xs, ref.output_index, "nested-spider (m = 1)");

  SyntheticOptions so;
  so.dims = {10, 4, 1};
  so.components = {n};
  so.regularizer = l1_regularizer(0.02);
  const CompositionProblem two = synthetic_composition(so, 6);
  const NestedSchedule s2 = nested_schedule_practical(compose_constants(two), 2, {n, n}, 25, 1.0, 0.5, 8, n, n);
  NpagConfig c2;
  c2.eta = 0.2;
  c2.epsilon = s2.epsilon_plan();
  c2.seed = 17;
  auto exact2 = recording(ExactGradientSource(two));
  const RunTrace ref2 = run_npag(two, exact2, c2);
  expect_same_trajectory(two, NestedSpiderSource(two, s2), c2, iterates(exact2, ref2), ref2.output_index,
                         "nested-spider (m = 2)");
}

// Monte-Carlo MSE of the SPIDER estimator along a path with steps of length eps/(2L).
TEST(Criterion03, SpiderMseBound) {
  Stopwatch clock;
  const CompositionProblem p = testing::mse_problem(200, 10, 7, SamplerKind::kFinite);
  const MappingFamily& fam = p.jacobian_family(0);
  const double L = p.level(0).smoothness.L;
  Rng rng(8);
  const Vector x0 = random_vector(10, rng);
  const double eps = 0.25 * std::sqrt(testing::max_variance(fam, {x0}));
  const double delta = step_cap(eps, L);

  // The variance bound must cover every path point, so it is taken over the path itself.
  const Index tau_guess = 64;
  const std::vector<Vector> long_path = testing::capped_path(x0, tau_guess, delta, rng);
  const double sigma = std::sqrt(testing::max_variance(fam, long_path));
  const Index tau = spider_expectation(sigma, eps).tau;
  ASSERT_LE(tau, tau_guess);
  const std::vector<Vector> path(long_path.begin(), long_path.begin() + static_cast<std::ptrdiff_t>(tau));
  const Index B = ceil_count(2.0 * sigma * sigma / (eps * eps));
  const Index b = ceil_count(2.0 * static_cast<double>(tau) * L * L * delta * delta / (eps * eps));

  std::vector<Matrix> exact;
  for (const Vector& x : path) exact.push_back(exact_average(fam, x));
  const int reps = 2000;
  std::vector<double> mse(path.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    SpiderEstimator est(fam);
    Rng draw = substream(99, 1, static_cast<std::uint64_t>(r), 1, DrawRole::kJacobian);
    SampleLedger ledger;
    mse[0] += (est.restart(path[0], B, draw, ledger) - exact[0]).squaredNorm();
    for (std::size_t t = 1; t < path.size(); ++t) {
      mse[t] += (est.step(path[t], b, draw, ledger) - exact[t]).squaredNorm();
    }
  }
  double worst = 0.0;
  for (double& v : mse) {
    v /= reps;
    worst = std::max(worst, v / (eps * eps));
  }
  std::printf("  eps = %.4g, sigma = %.4g, L = %.4g, tau = %llu, B = %llu, b = %llu\n", eps, sigma, L,
              static_cast<unsigned long long>(tau), static_cast<unsigned long long>(B),
              static_cast<unsigned long long>(b));
  std::printf("  max_t MSE / eps^2 = %.4f (limit 1.1)\n", worst);
  EXPECT_LE(worst, 1.1);
  EXPECT_LT(clock.seconds(), 300.0);
}

// Monte-Carlo MSE of the nested gradient estimate with the stage batch sizes and epoch length.
TEST(Criterion04, NestedMseBound) {
  Stopwatch clock;
  SyntheticOptions so;
  so.dims = {6, 4, 1};
  so.components = {100};
  so.offset_noise = 0.1;
  so.mix_noise = 0.1;
  so.sampler = SamplerKind::kStream;
  const CompositionProblem p = synthetic_composition(so, 5);
  const Index m = 2;
  const CompositeConstants c = compose_constants(p);
  const double eps = c.ell_F / (2.0 * static_cast<double>(m) * 6.0);
  const Index tau = detail::expectation_tau(c, m, eps);
  const StageBatches sb = detail::expectation_batches(c, m, eps);
  const double eta = 1.0 / (2.0 * c.L_F);

  Rng rng(10);
  const std::vector<Vector> path = testing::capped_path(random_vector(6, rng), tau - 1, eta * eps, rng);
  std::vector<Vector> exact;
  for (const Vector& x : path) exact.push_back(full_gradient(p, x));

  const int reps = 1000;
  std::vector<double> mse(path.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    NestedState st(p);
    SampleLedger ledger;
    const auto seed = static_cast<std::uint64_t>(1000 + r);
    mse[0] += (st.restart(path[0], sb, seed, 1, 0, ledger) - exact[0]).squaredNorm();
    for (std::size_t t = 1; t < path.size(); ++t) {
      mse[t] += (st.step(path[t], sb, seed, 1, t, ledger) - exact[t]).squaredNorm();
    }
  }
  double worst = 0.0;
  for (double& v : mse) {
    v /= reps;
    worst = std::max(worst, v / (eps * eps));
  }
  std::printf("  eps = %.4g, tau = %llu, B = %llu, b = %llu, S = %llu, s = %llu\n", eps,
              static_cast<unsigned long long>(tau), static_cast<unsigned long long>(sb.B[0]),
              static_cast<unsigned long long>(sb.b[0]), static_cast<unsigned long long>(sb.S[0]),
              static_cast<unsigned long long>(sb.s[0]));
  std::printf("  max_t MSE / eps^2 = %.4f (limit 1.1)\n", worst);
  EXPECT_LE(worst, 1.1);
  EXPECT_LT(clock.seconds(), 600.0);
}

// Samples consumed before the first diagnostic at or below the tolerance; 0 if never reached.
std::uint64_t samples_to_reach(const RunTrace& trace, double tol) {
  std::uint64_t before = 0;
  for (const IterationRecord& r : trace.records) {
    if (r.mapping_norm && *r.mapping_norm <= tol) return before;
    before = r.samples;
  }
  return 0;
}

// Prox-SPIDER reaches |G| <= 1e-2 within ten times n + sqrt(n) eps^-2 samples.
TEST(Criterion05, ProxSpiderConvergence) {
  Stopwatch clock;
  const Index n = 2000;
  const double tol = 1e-2;
  const CompositionProblem p = logistic_difference_problem(sparse_data(n, 100, 0.1, 21), 1.0 / n);
  const double budget = 10.0 * (static_cast<double>(n) + std::sqrt(static_cast<double>(n)) / (tol * tol));
  const Index root = ceil_count(std::sqrt(static_cast<double>(n)));
  OneLevelOptions opt;
  opt.eta = 1.0;
  opt.plan = EpsilonPlan::power(10.0, 0.5, root);
  opt.big_batch = n;
  opt.small_batch = root;
  opt.iterations = 4000;
  opt.diagnostic_cadence = 5;
  opt.stop_tolerance = tol;
  for (std::uint64_t seed : {1, 2, 3}) {
    opt.seed = seed;
    const OneLevelRun run = run_prox_spider(p, opt);
    const std::uint64_t used = samples_to_reach(run.trace, tol);
    std::printf("  seed %llu: |G| <= %.0e after %llu samples (budget %.0f)\n",
                static_cast<unsigned long long>(seed), tol, static_cast<unsigned long long>(used), budget);
    EXPECT_TRUE(run.trace.stopped_early);
    EXPECT_GT(used, 0u);
    EXPECT_LE(static_cast<double>(used), budget);
  }
  EXPECT_LT(clock.seconds(), 120.0);
}

// Nested-SPIDER on the portfolio problem: stationarity and an exact sample ledger.
TEST(Criterion06, NestedSpiderPortfolio) {
  Stopwatch clock;
  const Index n = 1000;
  PortfolioOptions po;
  po.lambda = 0.2;
  po.beta = 0.01;
  const CompositionProblem p = portfolio_problem(std::make_shared<const PayoffMatrix>(make_payoffs(n, 20, 11)), po);
  const Index root = ceil_count(std::sqrt(static_cast<double>(n)));
  const NestedSchedule s =
      nested_schedule_practical(compose_constants(p), 2, component_counts(p), 60, 1.0, 0.5, root, root, root);
  for (std::uint64_t seed : {1, 2, 3}) {
    NestedRunConfig cfg;
    cfg.eta = 0.5;
    cfg.seed = seed;
    cfg.diagnostic_cadence = root;
    const RunTrace tr = run_nested_spider(p, s, cfg);
    const double final_g = exact_gradient_mapping(p, tr.final_point, cfg.eta).mapping_norm;
    std::printf("  seed %llu: final |G| = %.3e, ledger %llu, predicted %llu\n",
                static_cast<unsigned long long>(seed), final_g, static_cast<unsigned long long>(tr.samples),
                static_cast<unsigned long long>(predicted_sample_count(s)));
    EXPECT_LE(final_g, 1e-2);
    EXPECT_EQ(tr.samples, predicted_sample_count(s));
  }
  EXPECT_LT(clock.seconds(), 120.0);
}

// The output index follows eps_{chi(t)} / sum_k tau_k eps_k.
TEST(Criterion07, OutputDistribution) {
  const CompositionProblem p = testing::quadratic_problem(5, 3, 1, zero_regularizer());
  const std::vector<double> eps{3.0, 2.0, 1.0};
  const std::vector<Index> lengths{2, 3, 4};
  std::vector<double> expected;
  double total = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    for (Index i = 0; i < lengths[k]; ++i) expected.push_back(eps[k]);
    total += eps[k] * static_cast<double>(lengths[k]);
  }
  for (double& e : expected) e /= total;
  NpagConfig cfg;
  cfg.epsilon = EpsilonPlan::stages(eps, lengths);
  const int reps = 20000;
  std::vector<double> freq(expected.size(), 0.0);
  for (int r = 0; r < reps; ++r) {
    cfg.seed = static_cast<std::uint64_t>(r) + 1;
    ExactGradientSource src(p);
    const RunTrace tr = run_npag(p, src, cfg);
    freq[tr.output_index] += 1.0 / reps;
  }
  double tv = 0.0;
  for (std::size_t t = 0; t < freq.size(); ++t) tv += std::abs(freq[t] - expected[t]);
  tv *= 0.5;
  std::printf("  total variation over %d replays: %.4f (limit 0.02)\n", reps, tv);
  EXPECT_LE(tv, 0.02);
}

// Formula audits for the composed constants and the finite-sum gate.
TEST(Criterion08, FormulaAudits) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  double worst_two = 0.0, worst_fold = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<LevelConstants> two{{u(gen), u(gen)}, {u(gen), u(gen)}};
    const double closed = two[1].ell * two[0].L + two[0].ell * two[0].ell * two[1].L;
    worst_two = std::max(worst_two, std::abs(compose_lipschitz(two).L_F - closed) / closed);
    for (std::size_t m = 1; m <= 5; ++m) {
      std::vector<LevelConstants> lv(m);
      for (auto& c : lv) c = {u(gen), u(gen)};
      double ell = lv[0].ell, L = lv[0].L;
      for (std::size_t i = 1; i < m; ++i) {
        L = lv[i].ell * L + ell * ell * lv[i].L;
        ell *= lv[i].ell;
      }
      const LipschitzPair p = compose_lipschitz(lv);
      worst_fold = std::max({worst_fold, std::abs(p.L_F - L) / L, std::abs(p.ell_F - ell) / ell});
    }
  }
  std::printf("  m = 2 closed form rel. error %.2e, fold vs closed form (m <= 5) rel. error %.2e\n", worst_two,
              worst_fold);
  EXPECT_LE(worst_two, 1e-12);
  EXPECT_LE(worst_fold, 1e-12);

  const CompositeConstants c{5.0, 1.0, 1.0, 1.0};
  ScheduleOptions opt;
  opt.max_stages = 1'000'000;
  const NestedSchedule at = nested_schedule_finite_sum(c, 2, {100, 100}, 0.125, opt);
  const NestedSchedule past = nested_schedule_finite_sum(c, 2, {101, 100}, 0.125, opt);
  std::printf("  gate at sqrt(N) = l_F/(2 m eps): N = 100 fell_back = %d, N = 101 fell_back = %d\n",
              int(at.fell_back), int(past.fell_back));
  EXPECT_FALSE(at.fell_back);
  EXPECT_TRUE(past.fell_back);
}

// Central finite differences for every benchmark and synthetic problem.
TEST(Criterion09, GradientAudits) {
  std::vector<std::pair<std::string, CompositionProblem>> problems;
  problems.emplace_back("logistic-difference", logistic_difference_problem(sparse_data(100, 20, 0.3, 31), 0.01));
  problems.emplace_back("two-layer-nn", two_layer_nn_problem(sparse_data(100, 20, 0.3, 32), 0.01));
  problems.emplace_back("portfolio", portfolio_problem(std::make_shared<const PayoffMatrix>(make_payoffs(100, 8, 33)), {}));
  for (Index m = 1; m <= 4; ++m) {
    SyntheticOptions so;
    so.dims.clear();
    for (Index i = 0; i <= m; ++i) so.dims.push_back(i == m ? 1 : 7 - i);
    problems.emplace_back("synthetic m=" + std::to_string(m), synthetic_composition(so, 34 + m));
  }
  Rng rng(35);
  for (const auto& [name, p] : problems) {
    const auto f = [&p = p](const Vector& x) { return evaluate_smooth(p, x); };
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const Vector x = random_vector(p.dimension(), rng, 0.5);
      worst = std::max(worst, testing::relative_error(full_gradient(p, x), testing::finite_difference(f, x)));
    }
    std::printf("  %-22s max relative error %.2e\n", name.c_str(), worst);
    EXPECT_LE(worst, 1e-4) << name;
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Identical config and seed give byte-identical trace files.
TEST(Criterion10, Determinism) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("npag_acceptance_" + std::to_string(::getpid()));
  const std::vector<std::string> configs{
      "[problem]\nbenchmark = logistic-difference\nsamples = 400\nfeatures = 30\n[method]\nname = prox-spider\n"
      "[run]\niterations = 400\nseeds = 1-4\ndiagnostic_cadence = 20\nworkers = 2\n",
      "[problem]\nbenchmark = two-layer-nn\nsamples = 300\nfeatures = 20\n[method]\nname = prox-saga\n"
      "[run]\niterations = 300\nseeds = 5,6\ndiagnostic_cadence = 15\nworkers = 2\n",
      "[problem]\nbenchmark = portfolio\nsamples = 300\nfeatures = 10\n[method]\nname = nested-spider\n"
      "eta = 0.5\nepsilon_scale = 1\n[run]\nstages = 20\nseeds = 1-3\ndiagnostic_cadence = 18\nworkers = 3\n",
      "[problem]\nbenchmark = synthetic-composition\ndims = 6,4,3,1\ncomponents = 40\n[method]\n"
      "name = nested-spider\nsmall_batch = 5\n[run]\nstages = 15\nseeds = 2,1\ndiagnostic_cadence = 7\n",
  };
  std::size_t identical = 0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    std::istringstream in(configs[k]);
    harness::RunConfig cfg = harness::parse_config(in);
    harness::validate_config(cfg);
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const harness::BuiltProblem built = harness::build_problem(cfg.problem);
      const harness::RunReport report = harness::run_experiment(cfg, built);
      ASSERT_EQ(report.failures(), 0u);
      const fs::path dir = root / ("run" + std::to_string(k));
      harness::write_outputs(dir.string(), cfg, report);
      const std::string trace = slurp(dir / "trace.csv");
      ASSERT_FALSE(trace.empty());
      fs::remove_all(dir);
      if (rep == 0) {
        first = trace;
      } else {
        EXPECT_EQ(trace, first) << configs[k];
        identical += trace == first ? 1 : 0;
      }
    }
  }
  fs::remove_all(root);
  std::printf("  %zu of %zu configurations produced byte-identical traces\n", identical, configs.size());
}

// Prints one pass/fail line per criterion after its test finishes.
class CriterionReporter : public ::testing::EmptyTestEventListener {
 public:
  void OnTestEnd(const ::testing::TestInfo& info) override {
    const std::string suite = info.test_suite_name();
    const int number = std::stoi(suite.substr(std::string("Criterion").size()));
    const bool ok = info.result()->Passed();
    std::printf("[criterion %d] %s: %s (%.1f s)\n", number, info.name(), ok ? "PASS" : "FAIL",
                static_cast<double>(info.result()->elapsed_time()) / 1000.0);
    std::fflush(stdout);
    results_[number] = ok;
  }

  void OnTestProgramEnd(const ::testing::UnitTest&) override {
    int passed = 0;
    for (const auto& [n, ok] : results_) passed += ok ? 1 : 0;
    std::printf("acceptance: %d of %zu criteria passed\n", passed, results_.size());
  }

 private:
  std::map<int, bool> results_;
};

}  // namespace
}  // namespace npag

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(new npag::CriterionReporter);
  return RUN_ALL_TESTS();
}

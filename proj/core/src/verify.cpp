#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "rwrs/estimators.hpp"
#include "rwrs/exponents.hpp"
#include "rwrs/green_kernel.hpp"
#include "rwrs/parallel.hpp"
#include "rwrs/silt.hpp"
#include "rwrs/verify.hpp"

namespace rwrs {

namespace {

std::string printf_string(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CriterionReport report(int id, std::string name) {
  CriterionReport r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

struct Count {
  std::uint64_t total = 0, bad = 0;
  void merge(const Count& o) {
    total += o.total;
    bad += o.bad;
  }
};

// 1. sum l^2 = n + 1 + 2 * (coincidence pairs) on every trajectory.
CriterionReport silt_identity(const VerifyOptions& o) {
  CriterionReport r = report(1, "silt identity");
  const std::int64_t offset = o.canary ? 0 : 1;
  Count all;
  for (int d : {3, 5})
    for (std::int64_t n : {100, 10000}) {
      Count c = replica_reduce<Count>(1000, [&](std::uint64_t i, Count& a) {
        Trajectory t = simulate_walk(d, n, derive_seed(o.seed, 100 + d, static_cast<std::uint64_t>(n) + i));
        std::int64_t lhs = silt(local_times(t));
        std::int64_t rhs = n + offset + 2 * coincidence_pairs_sorted(t);
        ++a.total;
        if (lhs != rhs) ++a.bad;
      });
      r.metrics[printf_string("violations_d%d_n%lld", d, static_cast<long long>(n))] = static_cast<double>(c.bad);
      all.merge(c);
    }
  r.metrics["trajectories"] = static_cast<double>(all.total);
  r.passed = all.bad == 0;
  r.detail = printf_string("%llu violations on %llu trajectories", static_cast<unsigned long long>(all.bad),
                           static_cast<unsigned long long>(all.total));
  return r;
}

struct Histograms {
  std::map<double, std::uint64_t> h[3];
  void merge(const Histograms& o) {
    for (int k = 0; k < 3; ++k)
      for (auto& [v, c] : o.h[k]) h[k][v] += c;
  }
};

// 2. d = 5, n = 6: enumeration against Monte Carlo at every atom >= 1e-3.
CriterionReport enumeration_oracle(const VerifyOptions& o) {
  CriterionReport r = report(2, "enumeration oracle");
  const int d = 5;
  const std::int64_t n = 6;
  const double level_lo = 0.3, level_hi = 0.8, z0_b = 0.5;
  std::vector<PathFunctional> fs = {
      [](const Trajectory&, const LocalTimeField& f) { return static_cast<double>(silt(f)); },
      [=](const Trajectory&, const LocalTimeField& f) {
        return static_cast<double>(level_set(f, level_lo, level_hi).size());
      },
      [=](const Trajectory&, const LocalTimeField& f) { return static_cast<double>(low_level_coincidences(f, z0_b)); },
  };
  const char* names[3] = {"silt", "level_set", "z0"};
  const std::uint64_t reps = 100000;
  Histograms mc = replica_reduce<Histograms>(reps, [&](std::uint64_t i, Histograms& a) {
    Trajectory t = simulate_walk(d, n, derive_seed(o.seed, 200, i));
    LocalTimeField f = local_times(t);
    for (int k = 0; k < 3; ++k) a.h[k][fs[k](t, f)] += 1;
  });
  int checked = 0, bad = 0;
  double worst = 0;
  for (int k = 0; k < 3; ++k) {
    ExactDistribution ex = enumerate_exact(d, n, fs[k]);
    for (auto& [v, c] : mc.h[k])
      if (!ex.counts.count(v)) ++bad;  // value outside the exact support
    for (auto& [v, c] : ex.counts) {
      double p = static_cast<double>(c) / static_cast<double>(ex.total);
      if (p < 1e-3) continue;
      double f = mc.h[k].count(v) ? static_cast<double>(mc.h[k].at(v)) / reps : 0.0;
      double z = std::abs(f - p) / std::sqrt(p * (1 - p) / reps);
      worst = std::max(worst, z);
      ++checked;
      if (z > 3) ++bad;
    }
    r.metrics[std::string("atoms_") + names[k]] = static_cast<double>(ex.counts.size());
  }
  r.metrics["atoms_checked"] = checked;
  r.metrics["worst_sigma"] = worst;
  r.passed = bad == 0 && checked > 0;
  r.detail = printf_string("%d atoms checked, %d outside 3 sigma, worst %.2f sigma", checked, bad, worst);
  return r;
}

// 3. Mean SILT / n against 2 G(0) - 1, and G(0) against MC E[l_inf(0)].
CriterionReport mean_silt(const VerifyOptions& o) {
  CriterionReport r = report(3, "mean silt constant");
  const int d = 5;
  const std::int64_t n = 10000;
  const double g0 = green_constants(d).g0;
  const double target = 2 * g0 - 1;
  MeanAccumulator s = replica_reduce<MeanAccumulator>(10000, [&](std::uint64_t i, MeanAccumulator& a) {
    a.add(static_cast<double>(silt_sorted(simulate_walk(d, n, derive_seed(o.seed, 300, i)))) / n);
  });
  const std::int64_t horizon = 1000000;
  const std::uint64_t walks = 80000;
  MeanAccumulator l = replica_reduce<MeanAccumulator>(walks, [&](std::uint64_t i, MeanAccumulator& a) {
    a.add(static_cast<double>(origin_local_time(d, horizon, derive_seed(o.seed, 301, i))));
  });
  double rel_silt = std::abs(s.mean - target) / target;
  double rel_g = std::abs(g0 - l.mean) / l.mean;
  r.metrics["g0"] = g0;
  r.metrics["target"] = target;
  r.metrics["silt_mean"] = s.mean;
  r.metrics["silt_se"] = s.std_err();
  r.metrics["silt_rel_error"] = rel_silt;
  r.metrics["origin_visits_mean"] = l.mean;
  r.metrics["origin_visits_se"] = l.std_err();
  r.metrics["g0_rel_error"] = rel_g;
  r.passed = rel_silt <= 0.02 && rel_g <= 0.005;
  r.detail = printf_string("mean silt/n %.5f vs %.5f (%.3f%%); G(0) %.6f vs MC %.6f +- %.6f (%.3f%%)", s.mean, target,
                           100 * rel_silt, g0, l.mean, l.std_err(), 100 * rel_g);
  return r;
}

// 4. Z0 <= Z1 + Z2 + J1 and strand time reversal on dyadic trajectories.
CriterionReport dyadic(const VerifyOptions& o) {
  CriterionReport r = report(4, "dyadic decomposition");
  const int d = 5;
  Count ineq, rev;
  for (int levels : {8, 12}) {
    const std::int64_t n = std::int64_t{1} << levels;
    const std::int64_t h = n / 2;
    struct Acc {
      Count ineq, rev;
      void merge(const Acc& x) {
        ineq.merge(x.ineq);
        rev.merge(x.rev);
      }
    };
    Acc a = replica_reduce<Acc>(1000, [&](std::uint64_t i, Acc& acc) {
      Trajectory t = simulate_walk(d, n, derive_seed(o.seed, 400 + levels, i));
      LocalTimeField first = local_times(t, 0, h), second = local_times(t, h, n);
      const Coord* mid = t.site(h);
      for (double b : {0.1, 0.3, 0.5}) {
        DyadicDecomposition dd = dyadic_decompose(t, b);
        ++acc.ineq.total;
        if (!(dd.z0 <= dd.z1 + dd.z2 + dd.j1) || dd.j1 != dd.j1_strands) ++acc.ineq.bad;
        ++acc.rev.total;
        bool ok = dd.strand1.range() == first.range() && dd.strand2.range() == second.range() &&
                  dd.strand1.mass() == h + 1 && dd.strand2.mass() == n - h + 1;
        std::vector<Coord> z(d);
        auto mirrored = [&](const LocalTimeField& half, const LocalTimeField& strand) {
          half.for_each([&](std::span<const Coord> x, std::int64_t l) {
            for (int k = 0; k < d; ++k) z[k] = mid[k] - x[k];
            if (strand.at(z.data()) != l) ok = false;
          });
        };
        mirrored(first, dd.strand1);
        mirrored(second, dd.strand2);
        if (!ok) ++acc.rev.bad;
      }
    });
    ineq.merge(a.ineq);
    rev.merge(a.rev);
  }
  r.metrics["checks"] = static_cast<double>(ineq.total);
  r.metrics["inequality_violations"] = static_cast<double>(ineq.bad);
  r.metrics["reversal_violations"] = static_cast<double>(rev.bad);
  r.passed = ineq.bad == 0 && rev.bad == 0;
  r.detail = printf_string("%llu (trajectory, b) checks: %llu inequality and %llu reversal violations",
                           static_cast<unsigned long long>(ineq.total), static_cast<unsigned long long>(ineq.bad),
                           static_cast<unsigned long long>(rev.bad));
  return r;
}

// 5. Mean two-walk intersection against m1 = sum_x G(x)^2.
CriterionReport intersection_mean(const VerifyOptions& o) {
  CriterionReport r = report(5, "two-walk intersection mean");
  const int d = 5;
  const std::int64_t n = 100000;
  GreenConstants gc = green_constants(d);
  MeanAccumulator m = replica_reduce<MeanAccumulator>(10000, [&](std::uint64_t i, MeanAccumulator& a) {
    a.add(static_cast<double>(two_walk_intersection(d, n, derive_seed(o.seed, 500, i), derive_seed(o.seed, 501, i))));
  });
  const double trunc = intersection_horizon_bound(d, n);
  const double tol = 3 * m.std_err() + trunc;
  const double gap = std::abs(m.mean - gc.m1);
  r.metrics["m1"] = gc.m1;
  r.metrics["mean"] = m.mean;
  r.metrics["se"] = m.std_err();
  r.metrics["horizon_bound"] = trunc;
  r.metrics["lattice_tail_bound"] = gc.m1_tail_bound;
  r.passed = gap <= tol;
  r.detail = printf_string("mean I %.5f +- %.5f vs m1 %.6f, |diff| %.5f <= %.5f", m.mean, m.std_err(), gc.m1, gap, tol);
  return r;
}

// 6. Boundary continuity over (alpha, d) and the reference classifications.
CriterionReport phase_diagram(const VerifyOptions&) {
  CriterionReport r = report(6, "phase diagram continuity");
  int combos = 0, bad = 0;
  double worst = 0;
  for (int i = 0; i < 40; ++i) {
    double alpha = 1.05 + 0.25 * i;
    for (int d = 3; d < 28; ++d) {
      ++combos;
      for (const auto& b : boundary_continuity(d, alpha)) {
        double diff = std::abs(b.zeta_below - b.zeta_above);
        worst = std::max(worst, diff);
        if (!(diff <= 1e-12)) ++bad;
      }
    }
  }
  struct Example {
    PhasePoint p;
    Region region;
    double zeta;
  };
  const Example examples[] = {
      {{2, 0.6, 5}, Region::I, 0.2},
      {{2, 1, 6}, Region::II, 2.0 / 3},
      {{4, 1, 5}, Region::III, 5.0 / 7},
      {{4, 1.1, 5}, Region::IV, 29.0 / 35},
  };
  int example_bad = 0;
  for (const auto& e : examples) {
    ExponentResult res = classify(e.p);
    if (res.region != e.region || !(std::abs(res.zeta - e.zeta) <= 1e-12)) ++example_bad;
  }
  r.metrics["combinations"] = combos;
  r.metrics["boundary_violations"] = bad;
  r.metrics["worst_gap"] = worst;
  r.metrics["example_failures"] = example_bad;
  r.passed = combos >= 1000 && bad == 0 && example_bad == 0;
  r.detail = printf_string("%d (alpha, d) combinations, worst boundary gap %.2e, %d of 4 examples wrong", combos,
                           worst, example_bad);
  return r;
}

// 7. Splitting log p against sqrt(n), and the return-chain bound below it.
CriterionReport silt_sqrt_scaling(const VerifyOptions& o) {
  CriterionReport r = report(7, "silt sqrt(n) scaling");
  const int d = 5;
  const double y = 1.2 * green_constants(d).y0_silt;
  std::vector<FitPoint> split, bound;
  int incoherent = 0;
  for (std::int64_t n : {256, 512, 1024, 2048, 4096}) {
    TailEstimate s = splitting_tail(d, n, static_cast<double>(n) * y, SplittingOptions{}, derive_seed(o.seed, 700, n));
    TailEstimate b = return_chain_lower_bound(d, n, y, 20000, derive_seed(o.seed, 701, n));
    split.push_back({static_cast<double>(n), s.log_p});
    bound.push_back({static_cast<double>(n), b.log_p});
    if (b.log_p > s.log_p + 3 * std::hypot(s.log_std_err, b.log_std_err)) ++incoherent;
    r.metrics[printf_string("log_p_split_n%lld", static_cast<long long>(n))] = s.log_p;
    r.metrics[printf_string("log_p_bound_n%lld", static_cast<long long>(n))] = b.log_p;
  }
  ExponentFit fs = fit_exponent(split, FitTransform::log_vs_sqrt);
  ExponentFit fb = fit_exponent(bound, FitTransform::log_vs_sqrt);
  r.metrics["y"] = y;
  r.metrics["split_slope"] = fs.slope;
  r.metrics["split_r2"] = fs.r_squared;
  r.metrics["bound_slope"] = fb.slope;
  r.metrics["bound_r2"] = fb.r_squared;
  r.metrics["bound_above_split"] = incoherent;
  r.passed = fs.slope < 0 && fs.r_squared >= 0.9 && fb.slope <= fs.slope && incoherent == 0;
  r.detail = printf_string("split slope %.4f (r2 %.4f), bound slope %.4f (r2 %.4f), %d points with bound above", fs.slope,
                           fs.r_squared, fb.slope, fb.r_squared, incoherent);
  return r;
}

// 8. Guided MC confinement against the spectral value and the spectral gap.
CriterionReport confinement(const VerifyOptions& o) {
  CriterionReport r = report(8, "confinement");
  int bad = 0;
  std::string detail;
  for (double side : {5.0, 9.0}) {
    const double gap = confinement_decay_rate(5, side);
    for (int mult : {10, 20}) {
      const std::int64_t T = static_cast<std::int64_t>(mult * side * side);
      TailEstimate ex = confinement_probability(5, side, T, ConfinementMethod::exact_spectral, 0, 0);
      TailEstimate mc = confinement_probability(5, side, T, ConfinementMethod::guided_mc, 20000,
                                                derive_seed(o.seed, 800 + mult, static_cast<std::uint64_t>(side)));
      double z = std::abs(mc.log_p - ex.log_p) / mc.log_std_err;
      double rate = -mc.log_p / static_cast<double>(T);
      double rel = std::abs(rate / gap - 1);
      bool ok = (mult != 10 || z <= 3) && rel <= 0.05;
      if (!ok) ++bad;
      std::string tag = printf_string("r%g_T%lld", side, static_cast<long long>(T));
      r.metrics["log_p_exact_" + tag] = ex.log_p;
      r.metrics["log_p_mc_" + tag] = mc.log_p;
      r.metrics["sigma_" + tag] = z;
      r.metrics["rate_rel_error_" + tag] = rel;
      detail += printf_string("%sr=%g T=%lld: %.2f sigma, rate off %.2f%%", detail.empty() ? "" : "; ", side,
                              static_cast<long long>(T), z, 100 * rel);
    }
  }
  r.passed = bad == 0;
  r.detail = detail;
  return r;
}

// 9. Region II exponent from the tilted pipeline at moderate y.
CriterionReport region_two(const VerifyOptions& o) {
  CriterionReport r = report(9, "region II desk-scale exponent");
  const int d = 5;
  const double alpha = 1.5, beta = 0.9;
  const SceneryModel m = SceneryModel::weibull(alpha, 1, derive_seed(o.seed, 900));
  const std::vector<std::int64_t> grid = {256, 512, 1024, 2048, 4096};
  const double target = classify({alpha, beta, d}).zeta;
  // y: the largest deviation with p >= 1e-4 at the top of the grid, found by
  // bisection on a fixed batch of walks (aimed at 1.5e-4 for headroom).
  std::vector<LocalTimeField> fields;
  for (std::uint64_t i = 0; i < 200; ++i) fields.push_back(simulate_local_times(d, grid.back(), derive_seed(o.seed, 901, i)));
  TiltOptions opts;
  const double aim = std::log(1.5e-4);
  double lo = 0.01, hi = 1.0;
  for (int it = 0; it < 14; ++it) {
    double mid = 0.5 * (lo + hi);
    TailEstimate e = tilted_scenery_tail(fields, m, beta, mid, opts, derive_seed(o.seed, 902, it));
    (e.log_p > aim ? lo : hi) = mid;
  }
  const double y = 0.5 * (lo + hi);
  std::vector<FitPoint> pts;
  double p_top = 0;
  for (std::int64_t n : grid) {
    TailEstimate e = rwrs_tail_tilted(d, n, beta, y, m, 400, opts, derive_seed(o.seed, 903, n));
    pts.push_back({static_cast<double>(n), e.log_p});
    r.metrics[printf_string("log_p_n%lld", static_cast<long long>(n))] = e.log_p;
    if (n == grid.back()) p_top = e.p_hat;
  }
  ExponentFit f = fit_exponent(pts, FitTransform::log_log);
  r.metrics["y"] = y;
  r.metrics["zeta_hat"] = f.zeta_hat;
  r.metrics["r2"] = f.r_squared;
  r.metrics["target"] = target;
  r.metrics["tolerance"] = o.zeta_tolerance;
  r.metrics["p_hat_top"] = p_top;
  r.passed = std::abs(f.zeta_hat - target) <= o.zeta_tolerance && p_top >= 1e-4;
  r.detail = printf_string("y %.4f, zeta_hat %.4f (r2 %.4f) vs %.4f +- %.2f, p_hat(n=%lld) %.2e", y, f.zeta_hat,
                           f.r_squared, target, o.zeta_tolerance, static_cast<long long>(grid.back()), p_top);
  return r;
}

// 10. Weightwise monotonicity for bell-shaped sceneries.
CriterionReport monotonicity(const VerifyOptions& o) {
  CriterionReport r = report(10, "bell-shaped monotonicity");
  const std::uint64_t draws = 1000000;
  SplitMix64 pick(derive_seed(o.seed, 1000));
  int bad = 0;
  double worst = -1e300;
  for (int k = 0; k < 20; ++k) {
    SceneryModel m = k % 3 == 0   ? SceneryModel::gaussian(1)
                     : k % 3 == 1 ? SceneryModel::bounded(1)
                                  : SceneryModel::weibull(0.7, 1);
    const int sites = 1 + static_cast<int>(pick.below(4));
    std::vector<double> a(sites), b(sites);
    for (int i = 0; i < sites; ++i) {
      a[i] = pick.uniform();
      b[i] = a[i] + pick.uniform();
    }
    const double y = 0.2 + 1.8 * pick.uniform();
    auto freq = [&](const std::vector<double>& w, std::uint64_t tag) {
      struct Acc {
        std::uint64_t hits = 0;
        void merge(const Acc& x) { hits += x.hits; }
      };
      Acc acc = replica_reduce<Acc>(draws, [&](std::uint64_t i, Acc& out) {
        SplitMix64 g(derive_seed(o.seed, tag, i));
        double s = 0;
        for (double wi : w) s += wi * scenery_quantile(m, g.uniform());
        if (s > y) ++out.hits;
      });
      return static_cast<double>(acc.hits) / draws;
    };
    double pa = freq(a, 1100 + 2 * k), pb = freq(b, 1101 + 2 * k);
    double se = std::sqrt((pa * (1 - pa) + pb * (1 - pb)) / draws);
    worst = std::max(worst, se > 0 ? (pa - pb) / se : (pa > pb ? 1e300 : 0.0));
    if (pa > pb + 3 * se) ++bad;
  }
  r.metrics["pairs"] = 20;
  r.metrics["violations"] = bad;
  r.metrics["worst_sigma"] = worst;
  r.passed = bad == 0;
  r.detail = printf_string("20 weight pairs, %d violations, largest (p_a - p_b)/sigma %.2f", bad, worst);
  return r;
}

// 11. Holder interpolation, power mean and Z1 >= sum l^2 / 4.
CriterionReport pathwise(const VerifyOptions& o) {
  CriterionReport r = report(11, "pathwise inequalities");
  struct Acc {
    Count holder, power, z1;
    void merge(const Acc& x) {
      holder.merge(x.holder);
      power.merge(x.power);
      z1.merge(x.z1);
    }
  };
  const int d = 5;
  const std::int64_t n = 1024;
  Acc a = replica_reduce<Acc>(1000, [&](std::uint64_t i, Acc& acc) {
    Trajectory t = simulate_walk(d, n, derive_seed(o.seed, 1200, i));
    LocalTimeField f = local_times(t);
    for (auto [p, q] : {std::pair{1.5, 2.0}, {2.0, 3.0}, {2.5, 4.0}}) {
      InterpolationCheck c = interpolation_check(f, p, q);
      ++acc.holder.total;
      ++acc.power.total;
      if (!c.mass_ok || !c.holder_ok) ++acc.holder.bad;
      if (!c.power_ok) ++acc.power.bad;
    }
    for (double b : {0.1, 0.3, 0.5}) {
      DyadicDecomposition dd = dyadic_decompose(t, b);
      ++acc.z1.total;
      if (4 * dd.z1 < dd.strand_square_sum) ++acc.z1.bad;
    }
  });
  r.metrics["holder_violations"] = static_cast<double>(a.holder.bad);
  r.metrics["power_mean_violations"] = static_cast<double>(a.power.bad);
  r.metrics["z1_violations"] = static_cast<double>(a.z1.bad);
  r.passed = a.holder.bad == 0 && a.power.bad == 0 && a.z1.bad == 0;
  r.detail = printf_string("1000 trajectories: holder %llu, power-mean %llu, Z1 %llu violations",
                           static_cast<unsigned long long>(a.holder.bad), static_cast<unsigned long long>(a.power.bad),
                           static_cast<unsigned long long>(a.z1.bad));
  return r;
}

}  // namespace

bool SuiteReport::passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return !criteria.empty();
}

std::string SuiteReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["passed"] = passed();
  j["criteria"] = nlohmann::json::array();
  for (const auto& c : criteria) {
    nlohmann::json m = nlohmann::json::object();
    for (auto& [k, v] : c.metrics) m[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
    j["criteria"].push_back(
        {{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}, {"metrics", m}});
  }
  return j.dump(2);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"identities", "oracles", "exponent-map", "desk-scale", "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "identities") return {1, 4, 11};
  if (suite == "oracles") return {2, 3, 5, 8, 10};
  if (suite == "exponent-map") return {6};
  if (suite == "desk-scale") return {7, 9};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

CriterionReport run_criterion(int id, const VerifyOptions& opts) {
  using Fn = CriterionReport (*)(const VerifyOptions&);
  static const Fn table[] = {silt_identity, enumeration_oracle, mean_silt,   dyadic,       intersection_mean, phase_diagram,
                             silt_sqrt_scaling, confinement,    region_two, monotonicity, pathwise};
  if (id < 1 || id > 11) throw std::invalid_argument("criterion id must be 1..11");
  auto start = std::chrono::steady_clock::now();
  CriterionReport r;
  try {
    r = table[id - 1](opts);
  } catch (const std::exception& e) {
    static const char* names[] = {"silt identity",         "enumeration oracle",
                                  "mean silt constant",    "dyadic decomposition",
                                  "two-walk intersection mean", "phase diagram continuity",
                                  "silt sqrt(n) scaling",  "confinement",
                                  "region II desk-scale exponent", "bell-shaped monotonicity",
                                  "pathwise inequalities"};
    r = report(id, names[id - 1]);
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SuiteReport run_suite(const std::string& suite, const VerifyOptions& opts) {
  SuiteReport s;
  s.suite = suite;
  s.seed = opts.seed;
  for (int id : suite_criteria(suite)) s.criteria.push_back(run_criterion(id, opts));
  return s;
}

}  // namespace rwrs

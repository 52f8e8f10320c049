#include "rwrs/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "rwrs/green_kernel.hpp"
#include "rwrs/parallel.hpp"
#include "rwrs/silt.hpp"

namespace rwrs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ignore {
  void merge(const Ignore&) {}
};

double threshold_of(std::int64_t n, double power, double y) { return std::pow(static_cast<double>(n), power) * y; }

bool stays_in_box(int d, std::int64_t horizon, int half, std::uint64_t seed) {
  if (half < 0) return false;
  WalkStepper w(d, seed);
  for (std::int64_t k = 0; k < horizon; ++k) {
    unsigned dir = w.step();
    Coord c = w.position()[dir >> 1];
    if (c > half || c < -half) return false;
  }
  return true;
}

bool event_holds(const EventSpec& event, const LocalTimeField& field, std::int64_t n, std::uint64_t scenery_seed) {
  if (const auto* e = std::get_if<SiltExceedance>(&event)) {
    double t = threshold_of(n, e->gamma, e->y);
    double v = e->p == 2 ? static_cast<double>(silt(field)) : silt_power(field, e->p);
    return v >= t;
  }
  if (const auto* e = std::get_if<LevelSetExceedance>(&event)) {
    return static_cast<double>(level_set(field, e->b_low, e->b_high).size()) >= e->size;
  }
  if (const auto* e = std::get_if<RwrsExceedance>(&event)) {
    SceneryModel m = e->scenery;
    m.seed_base = scenery_seed;
    return rwrs_value(field, SceneryField(m)) >= threshold_of(n, e->beta, e->y);
  }
  return false;
}

void check_walk_args(int d, std::int64_t n) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
}

double ols_r2(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept) {
  const double k = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit needs distinct abscissae");
  slope = sxy / sxx;
  intercept = my - slope * mx;
  return syy == 0 ? 1.0 : sxy * sxy / (sxx * syy);
}

}  // namespace

TailEstimate make_estimate(double p_hat, double std_err, std::uint64_t samples, std::string method) {
  TailEstimate t;
  t.p_hat = p_hat;
  t.std_err = std_err;
  t.log_p = p_hat > 0 ? std::log(p_hat) : -kInf;
  t.log_std_err = p_hat > 0 ? std_err / p_hat : kInf;
  t.n_samples = samples;
  t.method = std::move(method);
  return t;
}

TailEstimate make_log_estimate(double log_p, double log_std_err, std::uint64_t samples, std::string method) {
  TailEstimate t;
  t.log_p = log_p;
  t.log_std_err = log_std_err;
  t.p_hat = std::exp(log_p);
  t.std_err = t.p_hat > 0 ? t.p_hat * log_std_err : 0;
  t.n_samples = samples;
  t.method = std::move(method);
  return t;
}

TailEstimate naive_tail(const EventSpec& event, int d, std::int64_t n, std::uint64_t replicas, std::uint64_t seed) {
  check_walk_args(d, n);
  if (replicas < 2) throw std::invalid_argument("naive estimator needs at least 2 replicas");
  if (const auto* e = std::get_if<RwrsExceedance>(&event)) validate(e->scenery);
  int half = 0;
  if (const auto* e = std::get_if<ConfinementEvent>(&event)) half = box_half_width(e->r);
  const bool confinement = std::holds_alternative<ConfinementEvent>(event);
  MeanAccumulator acc = replica_reduce<MeanAccumulator>(replicas, [&](std::uint64_t i, MeanAccumulator& a) {
    std::uint64_t s = derive_seed(seed, i);
    bool hit;
    if (confinement) {
      hit = stays_in_box(d, n, half, s);
    } else {
      LocalTimeField f = simulate_local_times(d, n, s);
      hit = event_holds(event, f, n, derive_seed(seed, i, 0x5CE7E));
    }
    a.add(hit ? 1.0 : 0.0);
  });
  TailEstimate t = make_estimate(acc.mean, acc.std_err(), replicas, "naive");
  t.n = n;
  t.seed = seed;
  return t;
}

double ExactDistribution::prob_at_least(double v) const {
  std::uint64_t c = 0;
  for (auto it = counts.lower_bound(v); it != counts.end(); ++it) c += it->second;
  return static_cast<double>(c) / static_cast<double>(total);
}

double ExactDistribution::mean() const {
  double s = 0;
  for (const auto& [v, c] : counts) s += v * static_cast<double>(c);
  return s / static_cast<double>(total);
}

ExactDistribution enumerate_exact(int d, std::int64_t n, const PathFunctional& f) {
  check_walk_args(d, n);
  const double paths = std::pow(2.0 * d, static_cast<double>(n));
  if (paths > 1e7) throw std::invalid_argument("enumeration limited to (2d)^n <= 1e7 paths");
  ExactDistribution out;
  std::vector<unsigned> dirs(static_cast<std::size_t>(n), 0);
  const unsigned base = 2u * static_cast<unsigned>(d);
  for (;;) {
    Trajectory t = walk_from_directions(d, dirs);
    LocalTimeField field = local_times(t);
    out.counts[f(t, field)] += 1;
    ++out.total;
    std::size_t k = 0;
    while (k < dirs.size() && ++dirs[k] == base) dirs[k++] = 0;
    if (k == dirs.size()) break;
  }
  return out;
}

double exact_event_probability(const EventSpec& event, int d, std::int64_t n) {
  if (std::holds_alternative<RwrsExceedance>(event))
    throw std::invalid_argument("scenery events have no finite path enumeration");
  if (const auto* e = std::get_if<ConfinementEvent>(&event)) {
    int half = box_half_width(e->r);
    ExactDistribution dist = enumerate_exact(d, n, [&](const Trajectory& t, const LocalTimeField&) {
      for (std::int64_t k = 0; k <= t.steps; ++k)
        if (!inside_box(t.site(k), d, half)) return 0.0;
      return 1.0;
    });
    return dist.prob_at_least(1.0);
  }
  ExactDistribution dist = enumerate_exact(d, n, [&](const Trajectory&, const LocalTimeField& field) {
    return event_holds(event, field, n, 0) ? 1.0 : 0.0;
  });
  return dist.prob_at_least(1.0);
}

double conditional_gaussian_tail(const LocalTimeField& field, double variance, double threshold) {
  double s2 = variance * static_cast<double>(silt(field));
  return 0.5 * std::erfc(threshold / std::sqrt(2 * s2));
}

namespace {

// log P(N(0, 1) >= z); Mills ratio series where erfc underflows.
double log_normal_tail(double z) {
  if (z < 20) return std::log(0.5 * std::erfc(z / std::sqrt(2.0)));
  double r = 1 / (z * z);
  return -0.5 * z * z - std::log(z) - 0.5 * std::log(2 * M_PI) + std::log1p(-r + 3 * r * r - 15 * r * r * r);
}

// Mean of per-replica values given as logs, kept in log space.
struct LogMean {
  std::vector<double> logs;
  void add(double v) { logs.push_back(v); }
  void merge(const LogMean& o) { logs.insert(logs.end(), o.logs.begin(), o.logs.end()); }
  // (log mean, standard error of the log mean)
  std::pair<double, double> result() const {
    double top = -kInf;
    for (double v : logs) top = std::max(top, v);
    if (top == -kInf) return {-kInf, kInf};
    double s = 0, s2 = 0, n = static_cast<double>(logs.size());
    for (double v : logs) {
      double e = std::exp(v - top);
      s += e;
      s2 += e * e;
    }
    double mean = s / n;
    double var = n > 1 ? std::max(0.0, (s2 / n - mean * mean) * n / (n - 1)) : 0;
    return {top + std::log(mean), std::sqrt(var / n) / mean};
  }
};

struct TiltWork {
  std::vector<std::int64_t> levels;   // distinct local times
  std::vector<std::int64_t> counts;   // sites per level
};

TiltWork level_counts(const LocalTimeField& field) {
  std::map<std::int64_t, std::int64_t> m;
  field.for_each([&](std::span<const Coord>, std::int64_t l) { ++m[l]; });
  TiltWork w;
  for (auto [l, c] : m) {
    w.levels.push_back(l);
    w.counts.push_back(c);
  }
  return w;
}

// Largest attainable sum l(x) eta(x), +inf for unbounded sceneries.
double max_attainable(const SceneryModel& m, const TiltWork& w) {
  double top;
  if (m.family == SceneryFamily::symmetric_bounded) {
    top = std::sqrt(3 * m.variance);
  } else if (m.family == SceneryFamily::discrete) {
    top = m.atoms.back();
  } else {
    return kInf;
  }
  double s = 0;
  for (std::size_t i = 0; i < w.levels.size(); ++i) s += static_cast<double>(w.levels[i] * w.counts[i]) * top;
  return s;
}

double solve_tilt(const SceneryModel& m, const TiltWork& w, double target) {
  auto mean = [&](double t) {
    double s = 0;
    for (std::size_t i = 0; i < w.levels.size(); ++i) {
      double l = static_cast<double>(w.levels[i]);
      s += static_cast<double>(w.counts[i]) * l * log_laplace_slope(m, t * l);
    }
    return s;
  };
  double limit = kInf;
  if (m.family == SceneryFamily::symmetric_weibull && m.alpha <= 1) {
    if (m.alpha < 1) throw std::domain_error("tilting needs a finite log-Laplace transform (alpha >= 1)");
    limit = m.c / static_cast<double>(w.levels.back());
  }
  double lo = 0, hi = std::min(1.0, 0.5 * limit);
  while (mean(hi) < target) {
    lo = hi;
    if (std::isfinite(limit)) {
      hi = 0.5 * (hi + limit);
      if (limit - hi < 1e-9 * limit)
        throw std::domain_error("required tilt leaves the finite-variance region of the weights");
    } else {
      hi *= 2;
      if (hi > 1e6) throw std::domain_error("tilt solve diverged");
    }
  }
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (mean(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Log of the conditional estimate of P(sum l eta >= target | l) for one field.
double tilted_conditional(const LocalTimeField& field, const SceneryModel& m, double target, const TiltOptions& opts,
                          std::uint64_t seed, double& tilt_used) {
  TiltWork w = level_counts(field);
  if (target > max_attainable(m, w)) {
    tilt_used = 0;
    return -kInf;
  }
  double t = 0;
  if (opts.tilt) {
    t = *opts.tilt;
  } else if (target > 0) {
    t = solve_tilt(m, w, target);
  }
  tilt_used = t;
  std::map<std::int64_t, TiltedProposal> proposals;
  for (std::int64_t l : w.levels) proposals.emplace(l, TiltedProposal(m, t * static_cast<double>(l)));
  std::vector<const TiltedProposal*> per_site;
  std::vector<double> weight;
  per_site.reserve(field.range());
  field.for_each([&](std::span<const Coord>, std::int64_t l) {
    per_site.push_back(&proposals.at(l));
    weight.push_back(static_cast<double>(l));
  });
  LogMean hits;
  for (std::uint64_t j = 0; j < opts.draws; ++j) {
    SplitMix64 rng(derive_seed(seed, j));
    double x = 0, logw = 0;
    for (std::size_t s = 0; s < per_site.size(); ++s) {
      double eta = per_site[s]->sample(rng.uniform());
      logw += per_site[s]->log_weight(eta);
      x += weight[s] * eta;
    }
    hits.add(x >= target ? logw : -kInf);
  }
  return hits.result().first;
}

struct TiltAcc {
  LogMean p;
  MeanAccumulator tilt;
  void merge(const TiltAcc& o) {
    p.merge(o.p);
    tilt.merge(o.tilt);
  }
};

}  // namespace

TailEstimate tilted_scenery_tail(std::span<const LocalTimeField> fields, const SceneryModel& m, double beta, double y,
                                 const TiltOptions& opts, std::uint64_t seed) {
  validate(m);
  if (fields.empty()) throw std::invalid_argument("tilted estimator needs at least one trajectory");
  if (opts.draws == 0) throw std::invalid_argument("tilted estimator needs draws >= 1");
  const bool closed = opts.exact_gaussian && m.family == SceneryFamily::gaussian && !opts.tilt;
  TiltAcc acc = replica_reduce<TiltAcc>(fields.size(), [&](std::uint64_t i, TiltAcc& a) {
    const LocalTimeField& f = fields[i];
    double target = threshold_of(f.steps(), beta, y);
    if (closed) {
      a.p.add(log_normal_tail(target / std::sqrt(m.variance * static_cast<double>(silt(f)))));
      return;
    }
    double t = 0;
    a.p.add(tilted_conditional(f, m, target, opts, derive_seed(seed, i), t));
    a.tilt.add(t);
  });
  auto [log_p, log_se] = acc.p.result();
  TailEstimate out = make_log_estimate(log_p, log_se, fields.size(), "tilted-scenery");
  out.n = fields.front().steps();
  out.y = y;
  out.seed = seed;
  out.params["beta"] = beta;
  out.params["draws"] = static_cast<double>(closed ? 0 : opts.draws);
  out.params["exact_conditional"] = closed ? 1 : 0;
  if (!closed) out.params["mean_tilt"] = acc.tilt.mean;
  return out;
}

TailEstimate rwrs_tail_tilted(int d, std::int64_t n, double beta, double y, const SceneryModel& m,
                              std::uint64_t walks, const TiltOptions& opts, std::uint64_t seed) {
  check_walk_args(d, n);
  validate(m);
  if (walks < 2) throw std::invalid_argument("tilted estimator needs at least 2 walks");
  const bool closed = opts.exact_gaussian && m.family == SceneryFamily::gaussian && !opts.tilt;
  const double target = threshold_of(n, beta, y);
  TiltAcc acc = replica_reduce<TiltAcc>(walks, [&](std::uint64_t i, TiltAcc& a) {
    LocalTimeField f = simulate_local_times(d, n, derive_seed(seed, i));
    if (closed) {
      a.p.add(log_normal_tail(target / std::sqrt(m.variance * static_cast<double>(silt(f)))));
      return;
    }
    double t = 0;
    a.p.add(tilted_conditional(f, m, target, opts, derive_seed(seed, i, 0x7117), t));
    a.tilt.add(t);
  });
  auto [log_p, log_se] = acc.p.result();
  TailEstimate out = make_log_estimate(log_p, log_se, walks, "tilted-scenery");
  out.n = n;
  out.y = y;
  out.seed = seed;
  out.params["beta"] = beta;
  out.params["draws"] = static_cast<double>(closed ? 0 : opts.draws);
  out.params["exact_conditional"] = closed ? 1 : 0;
  if (!closed) out.params["mean_tilt"] = acc.tilt.mean;
  return out;
}

namespace {

// Prefix state rebuilt by replaying stored directions.
class PrefixWalker {
 public:
  PrefixWalker(int d, std::int64_t n) : d_(d), pos_(d, 0), table_(d, static_cast<std::size_t>(n + 1)) {}

  void reset() {
    std::fill(pos_.begin(), pos_.end(), 0);
    table_.clear();
    table_.increment(pos_.data());
    silt_ = 1;
    time_ = 0;
  }

  void apply(unsigned dir) {
    pos_[dir >> 1] += (dir & 1u) ? 1 : -1;
    std::int64_t l = table_.increment(pos_.data());
    silt_ += 2 * l - 1;
    ++time_;
  }

  std::int64_t silt() const { return silt_; }
  std::int64_t time() const { return time_; }

 private:
  int d_;
  std::vector<Coord> pos_;
  SiteTable table_;
  std::int64_t silt_ = 1;
  std::int64_t time_ = 0;
};

struct Particle {
  std::vector<std::uint8_t> dirs;  // prefix up to the entrance of the current level
};

struct RunResult {
  std::size_t prefix = 0;           // length of the stored prefix
  double entry = 0;                 // importance at the stored prefix
  double peak = 0;                  // max importance along the continuation
  std::vector<std::uint8_t> path;   // full path (pilot) or prefix to crossing (main)
  std::vector<double> score;        // importance after each step of path (pilot)
  bool crossed = false;
};

struct ImportanceFn {
  Importance kind = Importance::prefix_silt;
  std::int64_t n = 0;
  double drift = 0;  // 2 G(0) - 1

  double operator()(std::int64_t silt, std::int64_t k) const {
    const double s = static_cast<double>(silt), left = static_cast<double>(n - k);
    switch (kind) {
      case Importance::prefix_silt: return s;
      case Importance::projected_silt: return s + drift * left;
    }
    return s;
  }
};

std::vector<Particle> resample(const std::vector<Particle>& survivors, std::uint64_t count, std::uint64_t seed) {
  std::vector<Particle> out;
  out.reserve(count);
  const std::uint64_t s = survivors.size();
  for (std::uint64_t i = 0; i < count / s * s; ++i) out.push_back(survivors[i % s]);
  std::vector<std::uint64_t> idx(s);
  for (std::uint64_t i = 0; i < s; ++i) idx[i] = i;
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < count % s; ++i) {
    std::uint64_t j = i + rng.below(s - i);
    std::swap(idx[i], idx[j]);
    out.push_back(survivors[idx[i]]);
  }
  return out;
}

}  // namespace

TailEstimate splitting_tail(int d, std::int64_t n, double level, const SplittingOptions& opts, std::uint64_t seed) {
  check_walk_args(d, n);
  if (n > 1 << 20) throw std::invalid_argument("splitting stores paths; n limited to 2^20");
  if (opts.particles < 2 || opts.pilot_particles < 2) throw std::invalid_argument("splitting needs >= 2 particles");
  if (!(opts.survival > 0 && opts.survival < 1)) throw std::invalid_argument("survival fraction must be in (0, 1)");
  const unsigned dirs = 2u * static_cast<unsigned>(d);
  ImportanceFn importance{opts.importance, n, 0};
  if (opts.importance != Importance::prefix_silt)
    importance.drift = 2 * green_value(d, std::vector<Coord>(d, 0)).value - 1;
  const bool monotone = opts.importance == Importance::prefix_silt;

  // Continue a particle from its stored prefix. With a finite stop level the run
  // ends at the first step whose importance reaches it.
  auto run = [&](const Particle& p, std::uint64_t s, double stop, bool keep_scores, PrefixWalker& w) {
    RunResult r;
    w.reset();
    for (std::uint8_t dir : p.dirs) w.apply(dir);
    r.path = p.dirs;
    double cur = importance(w.silt(), w.time());
    r.prefix = p.dirs.size();
    r.entry = cur;
    r.peak = cur;
    if (keep_scores) r.score.assign(p.dirs.size(), -kInf);
    if (cur >= stop) {
      r.crossed = true;
      return r;
    }
    DigitSource digits(s, dirs);
    while (w.time() < n) {
      unsigned dir = digits.draw();
      w.apply(dir);
      r.path.push_back(static_cast<std::uint8_t>(dir));
      cur = importance(w.silt(), w.time());
      if (keep_scores) r.score.push_back(cur);
      r.peak = std::max(r.peak, cur);
      if (cur >= stop) {
        r.crossed = true;
        break;
      }
    }
    return r;
  };

  auto final_hit = [&](const RunResult& r) {
    if (monotone) return r.crossed;
    PrefixWalker w(d, n);
    w.reset();
    for (std::uint8_t dir : r.path) w.apply(dir);
    return static_cast<double>(w.silt()) >= level;
  };

  struct Adaptive {
    std::vector<double> levels;
    double log_p = 0, rel_var = 0;
    std::vector<double> fractions;
    bool reached = false;  // the next quantile passed the target level
    std::vector<RunResult> last;
  };
  // Levels at the (1 - survival) quantile of the running population's peaks;
  // the product of the kept fractions estimates the probability of the last level.
  auto adaptive = [&](std::uint64_t count, std::uint64_t tag) {
    Adaptive a;
    std::vector<Particle> parts(count);
    double current = -kInf;
    for (int stage = 0;; ++stage) {
      if (stage >= opts.max_levels) throw SplittingExtinction(stage, "splitting exceeded the level budget");
      std::vector<RunResult> res(parts.size());
      const std::uint64_t stage_seed = derive_seed(seed, tag, static_cast<std::uint64_t>(stage));
      replica_reduce<Ignore>(parts.size(), [&](std::uint64_t i, Ignore&) {
        thread_local std::unique_ptr<PrefixWalker> w;
        thread_local int wd = 0;
        thread_local std::int64_t wn = -1;
        if (!w || wd != d || wn != n) {
          w = std::make_unique<PrefixWalker>(d, n);
          wd = d;
          wn = n;
        }
        res[i] = run(parts[i], derive_seed(stage_seed, i), monotone ? level : kInf, true, *w);
      });
      std::vector<double> peaks;
      for (const auto& r : res) peaks.push_back(r.peak);
      std::sort(peaks.begin(), peaks.end(), std::greater<double>());
      std::size_t keep = static_cast<std::size_t>(std::ceil(opts.survival * static_cast<double>(peaks.size())));
      double next = peaks[std::max<std::size_t>(keep, 1) - 1];
      if (monotone) next = std::floor(next);
      if (next <= current) {
        // ties at the current level: move to the smallest peak above it
        next = kInf;
        for (double p : peaks)
          if (p > current) next = std::min(next, p);
      }
      if (next >= level) {
        a.reached = true;
        a.last = std::move(res);
        return a;
      }
      std::vector<Particle> survivors;
      for (const auto& r : res) {
        if (r.peak < next) continue;
        if (r.entry >= next) {
          survivors.push_back({std::vector<std::uint8_t>(r.path.begin(), r.path.begin() + static_cast<long>(r.prefix))});
          continue;
        }
        std::size_t k = r.prefix;
        while (k < r.score.size() && r.score[k] < next) ++k;
        survivors.push_back({std::vector<std::uint8_t>(r.path.begin(), r.path.begin() + static_cast<long>(k) + 1)});
      }
      if (survivors.empty()) {
        a.last = std::move(res);
        return a;
      }
      double frac = static_cast<double>(survivors.size()) / static_cast<double>(parts.size());
      a.fractions.push_back(frac);
      a.log_p += std::log(frac);
      a.rel_var += (1 - frac) / (frac * static_cast<double>(parts.size()));
      a.levels.push_back(next);
      current = next;
      parts = resample(survivors, count, derive_seed(seed, tag + 1, static_cast<std::uint64_t>(stage)));
    }
  };

  if (opts.adaptive) {
    Adaptive a = adaptive(opts.particles, 5);
    std::uint64_t hits = 0;
    for (const auto& r : a.last) hits += final_hit(r) ? 1 : 0;
    const std::size_t stages = a.levels.size() + 1;
    if (hits == 0)
      throw SplittingExtinction(static_cast<int>(stages - 1), "splitting extinction at level " +
                                                                  std::to_string(stages - 1) + " of " +
                                                                  std::to_string(stages));
    double frac = static_cast<double>(hits) / static_cast<double>(a.last.size());
    a.fractions.push_back(frac);
    a.log_p += std::log(frac);
    a.rel_var += (1 - frac) / (frac * static_cast<double>(a.last.size()));
    TailEstimate out = make_log_estimate(a.log_p, std::sqrt(a.rel_var), opts.particles * stages, "splitting");
    out.n = n;
    out.y = level / static_cast<double>(n);
    out.seed = seed;
    out.params["levels"] = static_cast<double>(stages);
    out.params["particles"] = static_cast<double>(opts.particles);
    out.params["min_fraction"] = *std::min_element(a.fractions.begin(), a.fractions.end());
    out.params["adaptive"] = 1;
    return out;
  }

  // Pilot run for the levels.
  std::vector<double> levels = adaptive(opts.pilot_particles, 1).levels;

  // Main run with fixed levels and fresh randomness.
  std::vector<Particle> parts(opts.particles);
  double log_p = 0, rel_var = 0;
  std::vector<double> fractions;
  const std::size_t stages = levels.size() + 1;
  for (std::size_t stage = 0; stage < stages; ++stage) {
    const bool last = stage == levels.size();
    const double stop = last ? (monotone ? level : kInf) : levels[stage];
    std::vector<RunResult> res(parts.size());
    const std::uint64_t stage_seed = derive_seed(seed, 3, stage);
    replica_reduce<Ignore>(parts.size(), [&](std::uint64_t i, Ignore&) {
      thread_local std::unique_ptr<PrefixWalker> w;
      thread_local int wd = 0;
      thread_local std::int64_t wn = -1;
      if (!w || wd != d || wn != n) {
        w = std::make_unique<PrefixWalker>(d, n);
        wd = d;
        wn = n;
      }
      res[i] = run(parts[i], derive_seed(stage_seed, i), stop, false, *w);
    });
    std::vector<Particle> survivors;
    for (auto& r : res) {
      bool ok = last ? final_hit(r) : r.crossed;
      if (ok) survivors.push_back({std::move(r.path)});
    }
    double frac = static_cast<double>(survivors.size()) / static_cast<double>(parts.size());
    fractions.push_back(frac);
    if (survivors.empty()) {
      throw SplittingExtinction(static_cast<int>(stage), "splitting extinction at level " + std::to_string(stage) +
                                                             " of " + std::to_string(stages));
    }
    log_p += std::log(frac);
    rel_var += (1 - frac) / (frac * static_cast<double>(parts.size()));
    if (!last) parts = resample(survivors, opts.particles, derive_seed(seed, 4, stage));
  }
  TailEstimate out = make_log_estimate(log_p, std::sqrt(rel_var), opts.particles * stages, "splitting");
  out.n = n;
  out.y = level / static_cast<double>(n);
  out.seed = seed;
  out.params["levels"] = static_cast<double>(stages);
  out.params["particles"] = static_cast<double>(opts.particles);
  out.params["min_fraction"] = *std::min_element(fractions.begin(), fractions.end());
  return out;
}

TailEstimate return_cdf(int d, std::int64_t m, std::uint64_t replicas, std::uint64_t seed) {
  check_walk_args(d, m);
  MeanAccumulator acc = replica_reduce<MeanAccumulator>(replicas, [&](std::uint64_t i, MeanAccumulator& a) {
    WalkStepper w(d, derive_seed(seed, i));
    int nonzero = 0;
    bool back = false;
    for (std::int64_t k = 0; k < m && !back; ++k) {
      unsigned dir = w.step();
      Coord c = w.position()[dir >> 1];
      Coord before = (dir & 1u) ? c - 1 : c + 1;
      nonzero += (c != 0) - (before != 0);
      back = nonzero == 0;
    }
    a.add(back ? 1.0 : 0.0);
  });
  TailEstimate t = make_estimate(acc.mean, acc.std_err(), replicas, "naive");
  t.n = m;
  t.seed = seed;
  return t;
}

TailEstimate return_chain_lower_bound(int d, std::int64_t n, double y, std::uint64_t replicas, std::uint64_t seed) {
  check_walk_args(d, n);
  if (!(y > 0)) throw std::invalid_argument("return chain needs y > 0");
  std::int64_t k = static_cast<std::int64_t>(std::ceil(std::sqrt(static_cast<double>(n) * y))) - 1;
  if (k < 1) k = 1;
  std::int64_t m = n / k;
  TailEstimate q = return_cdf(d, m, replicas, seed);
  double kk = static_cast<double>(k);
  TailEstimate out = q.p_hat > 0 ? make_log_estimate(kk * q.log_p, kk * q.std_err / q.p_hat, replicas,
                                                     "strategy-lower-bound")
                                 : make_log_estimate(-kInf, kInf, replicas, "strategy-lower-bound");
  out.n = n;
  out.y = y;
  out.seed = seed;
  out.params["returns"] = kk;
  out.params["window"] = static_cast<double>(m);
  out.params["return_cdf"] = q.p_hat;
  out.params["return_cdf_se"] = q.std_err;
  return out;
}

std::string confinement_method_name(ConfinementMethod m) {
  switch (m) {
    case ConfinementMethod::naive_mc: return "naive";
    case ConfinementMethod::guided_mc: return "guided";
    case ConfinementMethod::exact_spectral: return "exact-spectral";
  }
  return "?";
}

double confinement_decay_rate(int d, double r) {
  int half = box_half_width(r);
  if (half < 0) return kInf;
  (void)d;
  return -std::log(std::cos(std::numbers::pi / (2.0 * half + 2)));
}

TailEstimate confinement_probability(int d, double r, std::int64_t horizon, ConfinementMethod method,
                                     std::uint64_t replicas, std::uint64_t seed) {
  check_walk_args(d, horizon);
  const int half = box_half_width(r);
  const double pi = std::numbers::pi;
  TailEstimate out;
  if (half < 0) {
    out = make_estimate(0, 0, 0, confinement_method_name(method));
  } else if (method == ConfinementMethod::exact_spectral) {
    // Killed walk on the box = average of commuting path-graph operators, one per
    // axis; eigenvectors sin(pi k i / (L + 1)), i = 1..L.
    const int L = 2 * half + 1;
    std::vector<double> coef, eig;  // odd k only; even modes vanish at the centre
    for (int k = 1; k <= L; k += 2) {
      double norm = 2.0 / (L + 1), sum = 0;
      for (int i = 1; i <= L; ++i) sum += std::sin(pi * k * i / (L + 1));
      coef.push_back(norm * std::sin(pi * k * (half + 1) / (L + 1)) * sum);
      eig.push_back(std::cos(pi * k / (L + 1)));
    }
    const std::size_t modes = coef.size();
    std::vector<std::size_t> idx(d, 0);
    double total = 0;
    const double T = static_cast<double>(horizon);
    // log-shift by the top mode to keep tiny survivals accurate
    const double top = eig[0];
    for (;;) {
      double c = 1, lam = 0;
      for (int j = 0; j < d; ++j) {
        c *= coef[idx[j]];
        lam += eig[idx[j]];
      }
      lam /= d;
      double ratio = lam / top;
      double term = c * (ratio < 0 ? ((horizon % 2) ? -1.0 : 1.0) : 1.0) * std::pow(std::abs(ratio), T);
      total += term;
      int j = 0;
      while (j < d && ++idx[j] == modes) idx[j++] = 0;
      if (j == d) break;
    }
    double log_p = total > 0 ? T * std::log(top) + std::log(total) : -kInf;
    out = make_log_estimate(log_p, 0, 0, "exact-spectral");
  } else if (method == ConfinementMethod::naive_mc) {
    MeanAccumulator acc = replica_reduce<MeanAccumulator>(replicas, [&](std::uint64_t i, MeanAccumulator& a) {
      a.add(stays_in_box(d, horizon, half, derive_seed(seed, i)) ? 1.0 : 0.0);
    });
    out = make_estimate(acc.mean, acc.std_err(), replicas, "naive");
  } else {
    // h(x) = prod_j sin(pi (x_j + half + 1) / (L + 1)) vanishes just outside the
    // box, so the h-transform never leaves it.
    const int L = 2 * half + 1;
    const double lambda = std::cos(pi / (L + 1));
    std::vector<double> s(static_cast<std::size_t>(L + 2));
    for (int i = 0; i <= L + 1; ++i) s[i] = std::sin(pi * i / (L + 1));
    const double log_h0 = d * std::log(s[half + 1]);
    MeanAccumulator acc = replica_reduce<MeanAccumulator>(replicas, [&](std::uint64_t i, MeanAccumulator& a) {
      SplitMix64 rng(derive_seed(seed, i));
      std::vector<int> x(d, half + 1);  // shifted coordinates in 1..L
      std::vector<double> cum(2 * d);
      for (std::int64_t k = 0; k < horizon; ++k) {
        double acc_w = 0;
        for (int j = 0; j < d; ++j) {
          double here = s[x[j]];
          acc_w += s[x[j] - 1] / here;
          cum[2 * j] = acc_w;
          acc_w += s[x[j] + 1] / here;
          cum[2 * j + 1] = acc_w;
        }
        double u = rng.uniform() * acc_w;
        int pick = 0;
        while (pick < 2 * d - 1 && u >= cum[pick]) ++pick;
        x[pick >> 1] += (pick & 1) ? 1 : -1;
      }
      double log_h = 0;
      for (int j = 0; j < d; ++j) log_h += std::log(s[x[j]]);
      a.add(std::exp(log_h0 - log_h));
    });
    double log_p = static_cast<double>(horizon) * std::log(lambda) + std::log(acc.mean);
    out = make_log_estimate(log_p, acc.std_err() / acc.mean, replicas, "guided");
  }
  out.n = horizon;
  out.seed = seed;
  out.params["r"] = r;
  out.params["half_width"] = half;
  out.params["decay_rate"] = confinement_decay_rate(d, r);
  return out;
}

TailEstimate localization_lower_bound(const PhasePoint& phase, std::int64_t n, double y, double eps,
                                      const SceneryModel& m, std::uint64_t replicas, std::uint64_t seed) {
  validate(m);
  const int d = phase.dimension;
  check_walk_args(d, n);
  if (!(eps > 0 && eps < 1)) throw std::invalid_argument("epsilon must be in (0, 1)");
  const std::int64_t T = static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(n), phase.beta)));
  if (T < 1) throw std::invalid_argument("n^beta must be >= 1");
  const double r = std::pow(static_cast<double>(T), 1.0 / (d + 2));
  const double volume = std::pow(r, d);
  const double log_tail = std::log(scenery_tail(m, y));
  TailEstimate conf = confinement_probability(d, r, T, ConfinementMethod::exact_spectral, 0, seed);
  const double small = eps * volume;
  MeanAccumulator range = replica_reduce<MeanAccumulator>(replicas, [&](std::uint64_t i, MeanAccumulator& a) {
    LocalTimeField f = simulate_local_times(d, T, derive_seed(seed, i));
    a.add(static_cast<double>(f.range()) <= small ? 1.0 : 0.0);
  });
  double walk_part = conf.p_hat - range.mean;
  double log_walk;
  if (conf.p_hat > 0 && range.mean == 0) {
    log_walk = conf.log_p;
  } else {
    log_walk = walk_part > 0 ? std::log(walk_part) : -kInf;
  }
  double log_bound = volume * log_tail + log_walk;
  TailEstimate out = make_log_estimate(log_bound, walk_part > 0 ? range.std_err() / walk_part : kInf, replicas,
                                       "strategy-lower-bound");
  out.n = n;
  out.y = y;
  out.seed = seed;
  out.params["horizon"] = static_cast<double>(T);
  out.params["r"] = r;
  out.params["half_width"] = box_half_width(r);
  out.params["eta_log_cost"] = volume * log_tail;
  out.params["eta_log_cost_eps_volume"] = eps * volume * log_tail;
  out.params["log_confinement"] = conf.log_p;
  out.params["small_range_prob"] = range.mean;
  return out;
}

std::string transform_name(FitTransform t) {
  switch (t) {
    case FitTransform::log_log: return "log-log";
    case FitTransform::log_vs_power: return "log-vs-n^zeta";
    case FitTransform::log_vs_sqrt: return "log-vs-sqrt-n";
  }
  return "?";
}

ExponentFit fit_exponent(std::span<const FitPoint> points, FitTransform transform, double zeta) {
  if (points.size() < 4) throw std::invalid_argument("exponent fit needs at least 4 points");
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (!(p.n > 0) || !std::isfinite(p.log_p)) throw std::invalid_argument("fit points need n > 0 and finite log p");
    if (transform == FitTransform::log_log) {
      if (!(p.log_p < 0)) throw std::invalid_argument("log-log fit needs p < 1");
      x.push_back(std::log(p.n));
      y.push_back(std::log(-p.log_p));
    } else {
      double z = transform == FitTransform::log_vs_sqrt ? 0.5 : zeta;
      x.push_back(std::pow(p.n, z));
      y.push_back(p.log_p);
    }
  }
  ExponentFit f;
  f.transform = transform;
  f.points = points.size();
  f.r_squared = ols_r2(x, y, f.slope, f.intercept);
  if (transform == FitTransform::log_log) {
    f.zeta_hat = f.slope;
    f.c_hat = std::exp(f.intercept);
  } else {
    f.zeta_hat = transform == FitTransform::log_vs_sqrt ? 0.5 : zeta;
    f.c_hat = -f.slope;
  }
  return f;
}

namespace {

struct DecompAcc {
  MeanAccumulator whole, high, low;
  void merge(const DecompAcc& o) {
    whole.merge(o.whole);
    high.merge(o.high);
    low.merge(o.low);
  }
};

}  // namespace

DecompositionEstimate decomposition_tail(int d, std::int64_t n, double beta, double y_high, double y_low, double b,
                                         const SceneryModel& m, std::uint64_t replicas, std::uint64_t seed) {
  check_walk_args(d, n);
  validate(m);
  const double scale = std::pow(static_cast<double>(n), beta);
  const double cut = std::pow(static_cast<double>(n), b);
  DecompAcc acc = replica_reduce<DecompAcc>(replicas, [&](std::uint64_t i, DecompAcc& a) {
    LocalTimeField f = simulate_local_times(d, n, derive_seed(seed, i));
    SceneryModel sm = m;
    sm.seed_base = derive_seed(seed, i, 0x5CE7E);
    SceneryField eta(sm);
    double hi = 0, lo = 0;
    f.for_each([&](std::span<const Coord> s, std::int64_t l) {
      double v = static_cast<double>(l) * eta.at(s);
      (static_cast<double>(l) >= cut ? hi : lo) += v;
    });
    a.whole.add(hi + lo >= scale * (y_high + y_low) ? 1.0 : 0.0);
    a.high.add(hi >= scale * y_high ? 1.0 : 0.0);
    a.low.add(lo >= scale * y_low ? 1.0 : 0.0);
  });
  DecompositionEstimate out;
  out.whole = make_estimate(acc.whole.mean, acc.whole.std_err(), replicas, "naive");
  out.high = make_estimate(acc.high.mean, acc.high.std_err(), replicas, "naive");
  out.low = make_estimate(acc.low.mean, acc.low.std_err(), replicas, "naive");
  for (TailEstimate* t : {&out.whole, &out.high, &out.low}) {
    t->n = n;
    t->seed = seed;
  }
  out.whole.y = y_high + y_low;
  out.high.y = y_high;
  out.low.y = y_low;
  return out;
}

}  // namespace rwrs

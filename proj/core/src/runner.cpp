#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rwrs/experiments.hpp"
#include "rwrs/green_kernel.hpp"

namespace rwrs {

using json = nlohmann::json;

namespace {

struct Task {
  std::int64_t n = 0;
  double y = 0;
  std::string method;
  std::function<TailEstimate(std::uint64_t seed)> run;
};

double param(const ExperimentConfig& c, const std::string& key, double fallback) {
  auto it = c.estimator.find(key);
  return it == c.estimator.end() ? fallback : it->second;
}

SplittingOptions splitting_options(const ExperimentConfig& c) {
  SplittingOptions o;
  o.particles = static_cast<std::uint64_t>(param(c, "particles", static_cast<double>(o.particles)));
  o.pilot_particles = static_cast<std::uint64_t>(param(c, "pilot_particles", static_cast<double>(o.pilot_particles)));
  o.survival = param(c, "survival", o.survival);
  o.max_levels = static_cast<int>(param(c, "max_levels", o.max_levels));
  if (param(c, "prefix_importance", 0) != 0) o.importance = Importance::prefix_silt;
  o.adaptive = param(c, "adaptive", 1) != 0;
  return o;
}

std::vector<Task> build_tasks(const ExperimentConfig& c) {
  std::vector<Task> tasks;
  const int d = c.dimension;
  double y_unit = 1;
  if (c.y_in_y0_units) y_unit = green_constants(d).y0_silt;
  switch (c.kind) {
    case ExperimentKind::exponent_map:
      break;
    case ExperimentKind::silt_sqrt_n: {
      SplittingOptions opts = splitting_options(c);
      bool with_bound = param(c, "lower_bound", 1) != 0;
      for (double yv : c.y_grid) {
        double y = yv * y_unit;
        for (std::int64_t n : c.n_grid) {
          tasks.push_back({n, y, "splitting", [=](std::uint64_t s) {
                             return splitting_tail(d, n, static_cast<double>(n) * y, opts, s);
                           }});
          if (with_bound)
            tasks.push_back({n, y, "strategy-lower-bound", [=, reps = c.replicas](std::uint64_t s) {
                               return return_chain_lower_bound(d, n, y, reps, s);
                             }});
        }
      }
      break;
    }
    case ExperimentKind::return_chain:
      for (double yv : c.y_grid)
        for (std::int64_t n : c.n_grid) {
          double y = yv * y_unit;
          tasks.push_back({n, y, "strategy-lower-bound", [=, reps = c.replicas](std::uint64_t s) {
                             return return_chain_lower_bound(d, n, y, reps, s);
                           }});
        }
      break;
    case ExperimentKind::rwrs_tail: {
      const double beta = *c.beta;
      const SceneryModel m = *c.scenery;
      const bool naive = c.method == "naive";
      TiltOptions opts;
      opts.draws = static_cast<std::uint64_t>(param(c, "draws", static_cast<double>(opts.draws)));
      opts.exact_gaussian = param(c, "exact_gaussian", 1) != 0;
      if (c.estimator.count("tilt")) opts.tilt = c.estimator.at("tilt");
      for (double y : c.y_grid)
        for (std::int64_t n : c.n_grid) {
          if (naive)
            tasks.push_back({n, y, "naive", [=, reps = c.replicas](std::uint64_t s) {
                               return naive_tail(RwrsExceedance{beta, y, m}, d, n, reps, s);
                             }});
          else
            tasks.push_back({n, y, "tilted-scenery", [=, reps = c.replicas](std::uint64_t s) {
                               return rwrs_tail_tilted(d, n, beta, y, m, reps, opts, s);
                             }});
        }
      break;
    }
    case ExperimentKind::confinement: {
      auto method = c.method == "naive" ? ConfinementMethod::naive_mc : ConfinementMethod::guided_mc;
      for (double r : c.r_grid)
        for (std::int64_t t : c.n_grid) {
          tasks.push_back({t, r, "exact-spectral", [=](std::uint64_t) {
                             return confinement_probability(d, r, t, ConfinementMethod::exact_spectral, 0, 0);
                           }});
          tasks.push_back({t, r, confinement_method_name(method), [=, reps = c.replicas](std::uint64_t s) {
                             return confinement_probability(d, r, t, method, reps, s);
                           }});
        }
      break;
    }
  }
  return tasks;
}

void add_fits(const ExperimentConfig& c, ResultRecord& out) {
  std::vector<std::pair<std::string, double>> groups;
  for (const auto& g : out.grid) {
    std::pair<std::string, double> key{g.method, g.y};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  for (const auto& [method, y] : groups) {
    std::vector<FitPoint> pts;
    for (const auto& g : out.grid)
      if (g.method == method && g.y == y && g.estimate && g.estimate->p_hat > 0 && std::isfinite(g.estimate->log_p))
        pts.push_back({static_cast<double>(g.n), g.estimate->log_p});
    FitRecord f;
    char label[96];
    const char* var = c.kind == ExperimentKind::confinement ? "r" : "y";
    std::snprintf(label, sizeof label, "%s %s=%.6g", method.c_str(), var, y);
    f.label = label;
    FitTransform t = FitTransform::log_log;
    double zeta = 0.5;
    switch (c.kind) {
      case ExperimentKind::silt_sqrt_n:
      case ExperimentKind::return_chain:
        t = FitTransform::log_vs_sqrt;
        break;
      case ExperimentKind::confinement:
        t = FitTransform::log_vs_power;
        zeta = 1;
        f.target = confinement_decay_rate(c.dimension, y);
        break;
      case ExperimentKind::rwrs_tail: {
        double a = c.alpha ? *c.alpha : tail_exponent(*c.scenery);
        double z = classify({a, *c.beta, c.dimension}).zeta;
        if (std::isfinite(z)) f.target = z;
        break;
      }
      case ExperimentKind::exponent_map:
        break;
    }
    if (pts.size() < 4) {
      f.error = "needs at least 4 grid points with p_hat > 0, have " + std::to_string(pts.size());
    } else {
      try {
        f.fit = fit_exponent(pts, t, zeta);
      } catch (const std::exception& e) {
        f.error = e.what();
      }
    }
    out.fits.push_back(f);
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_stamp() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

}  // namespace

ResultRecord run_experiment(const ExperimentConfig& c, unsigned workers) {
  auto start = std::chrono::steady_clock::now();
  ResultRecord out;
  out.config_hash = config_hash(c);
  out.kind = kind_name(c.kind);

  if (c.kind == ExperimentKind::exponent_map) {
    for (double b : c.beta_grid) {
      PhasePoint p{*c.alpha, b, c.dimension};
      out.zeta.push_back({p.alpha, p.beta, p.dimension, classify(p)});
    }
  } else {
    std::vector<Task> tasks = build_tasks(c);
    out.grid.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
        GridRecord& g = out.grid[i];
        g.n = tasks[i].n;
        g.y = tasks[i].y;
        g.method = tasks[i].method;
        g.seed = derive_seed(c.seed, i);
        try {
          g.estimate = tasks[i].run(g.seed);
        } catch (const std::exception& e) {
          g.error = e.what();
        }
      }
    };
    unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
    if (n_threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    add_fits(c, out);
  }
  out.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string results_csv(const ResultRecord& r) {
  std::ostringstream os;
  if (r.kind == "exponent-map") {
    os << "alpha,beta,dimension,region,zeta,on_boundary,neighbour,needs_y0\n";
    for (const auto& z : r.zeta)
      os << fmt(z.alpha) << ',' << fmt(z.beta) << ',' << z.dimension << ',' << region_name(z.result.region) << ','
         << fmt(z.result.zeta) << ',' << (z.result.on_boundary ? 1 : 0) << ','
         << (z.result.on_boundary ? region_name(z.result.neighbour) : "") << ',' << (z.result.needs_y0 ? 1 : 0)
         << '\n';
    return os.str();
  }
  os << "n,y,p_hat,std_err,log_p,method,seed\n";
  const double nan = std::nan("");
  for (const auto& g : r.grid) {
    const TailEstimate* e = g.estimate ? &*g.estimate : nullptr;
    os << g.n << ',' << fmt(g.y) << ',' << fmt(e ? e->p_hat : nan) << ',' << fmt(e ? e->std_err : nan) << ','
       << fmt(e ? e->log_p : nan) << ',' << g.method << ',' << g.seed << '\n';
  }
  return os.str();
}

std::string results_json(const ResultRecord& r, const ExperimentConfig& c) {
  auto num = [](double v) -> json { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["config_hash"] = r.config_hash;
  j["config"] = json::parse(canonical_config(c));
  j["kind"] = r.kind;
  j["version"] = r.version;
  j["wall_clock_seconds"] = r.wall_clock;
  j["grid"] = json::array();
  for (const auto& g : r.grid) {
    json row;
    row["n"] = g.n;
    row["y"] = g.y;
    row["method"] = g.method;
    row["seed"] = g.seed;
    if (g.estimate) {
      const auto& e = *g.estimate;
      row["p_hat"] = num(e.p_hat);
      row["std_err"] = num(e.std_err);
      row["log_p"] = num(e.log_p);
      row["log_std_err"] = num(e.log_std_err);
      row["n_samples"] = e.n_samples;
      json p = json::object();
      for (auto& [k, v] : e.params) p[k] = num(v);
      row["params"] = p;
    }
    if (!g.error.empty()) row["error"] = g.error;
    j["grid"].push_back(row);
  }
  j["fits"] = json::array();
  for (const auto& f : r.fits) {
    json row;
    row["label"] = f.label;
    if (f.fit) {
      row["transform"] = transform_name(f.fit->transform);
      row["zeta_hat"] = num(f.fit->zeta_hat);
      row["c_hat"] = num(f.fit->c_hat);
      row["slope"] = num(f.fit->slope);
      row["intercept"] = num(f.fit->intercept);
      row["r_squared"] = num(f.fit->r_squared);
      row["points"] = f.fit->points;
    }
    if (f.target) row["target"] = *f.target;
    if (!f.error.empty()) row["error"] = f.error;
    j["fits"].push_back(row);
  }
  if (!r.zeta.empty()) {
    j["zeta"] = json::array();
    for (const auto& z : r.zeta)
      j["zeta"].push_back({{"alpha", z.alpha},
                           {"beta", z.beta},
                           {"dimension", z.dimension},
                           {"region", region_name(z.result.region)},
                           {"zeta", num(z.result.zeta)},
                           {"formula", z.result.formula},
                           {"on_boundary", z.result.on_boundary},
                           {"needs_y0", z.result.needs_y0}});
  }
  return j.dump(2);
}

WrittenFiles write_results(const ResultRecord& r, const ExperimentConfig& c) {
  namespace fs = std::filesystem;
  fs::path dir(c.output);
  fs::create_directories(dir);
  std::string stem = r.kind + "-" + r.config_hash.substr(0, 8) + "-" + utc_stamp();
  WrittenFiles w;
  for (int k = 0;; ++k) {
    std::string s = k == 0 ? stem : stem + "-" + std::to_string(k);
    w.csv = dir / (s + ".csv");
    w.json = dir / (s + ".json");
    if (!fs::exists(w.csv) && !fs::exists(w.json)) break;
  }
  std::ofstream(w.csv) << results_csv(r);
  std::ofstream(w.json) << results_json(r, c) << '\n';
  return w;
}

}  // namespace rwrs

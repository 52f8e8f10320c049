#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwrs/estimators.hpp"
#include "rwrs/experiments.hpp"
#include "rwrs/exponents.hpp"
#include "rwrs/green_kernel.hpp"
#include "rwrs/parallel.hpp"
#include "rwrs/silt.hpp"
#include "rwrs/verify.hpp"

using json = nlohmann::json;
using namespace rwrs;

namespace {

constexpr int kOk = 0, kFail = 1, kConfigError = 2;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json estimate_json(const TailEstimate& e) {
  json j{{"method", e.method},   {"n", e.n},           {"y", e.y},
         {"p_hat", num(e.p_hat)}, {"std_err", num(e.std_err)}, {"log_p", num(e.log_p)},
         {"log_std_err", num(e.log_std_err)}, {"n_samples", e.n_samples}, {"seed", e.seed}};
  json p = json::object();
  for (auto& [k, v] : e.params) p[k] = num(v);
  j["params"] = p;
  return j;
}

SceneryModel scenery_from(const std::string& family, double alpha, double variance) {
  switch (parse_family(family)) {
    case SceneryFamily::symmetric_weibull: return SceneryModel::weibull(alpha, 1);
    case SceneryFamily::gaussian: return SceneryModel::gaussian(variance);
    case SceneryFamily::symmetric_bounded: return SceneryModel::bounded(variance);
    case SceneryFamily::discrete: return SceneryModel::discrete({-1, 1}, {0.5, 0.5});
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walk in random scenery and self-intersection local time lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kLibraryVersion);

  // exponent
  PhasePoint phase{2, 1, 5};
  auto* exponent = app.add_subcommand("exponent", "classify (alpha, beta, d) and give the deviation exponent");
  exponent->add_option("--alpha", phase.alpha, "scenery tail exponent")->required();
  exponent->add_option("--beta", phase.beta, "deviation scale n^beta")->required();
  exponent->add_option("-d,--dimension", phase.dimension, "lattice dimension")->required();

  // simulate
  int sim_d = 5;
  std::int64_t sim_n = 1000;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "simulate one walk and summarize its occupation field");
  simulate->add_option("-d,--dimension", sim_d)->check(CLI::Range(1, 64));
  simulate->add_option("-n,--steps", sim_n)->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim_seed);
  simulate->add_option("--path-csv", sim_out, "write the positions S_0..S_n as CSV");

  // estimate
  std::string est_event = "silt", est_method = "naive", est_family = "gaussian";
  int est_d = 5;
  std::int64_t est_n = 256;
  double est_y = 1, est_beta = 1, est_p = 2, est_gamma = 1, est_r = 5, est_alpha = 2, est_variance = 1;
  double est_b_low = 0.3, est_b_high = 1;
  std::uint64_t est_replicas = 10000, est_seed = 1, est_particles = 1000;
  auto* estimate = app.add_subcommand("estimate", "estimate a tail probability");
  estimate->add_option("--event", est_event, "silt | rwrs | level-set | confinement | return-chain")
      ->check(CLI::IsMember({"silt", "rwrs", "level-set", "confinement", "return-chain"}));
  estimate->add_option("--method", est_method, "naive | tilted | splitting | exact | enumeration | guided")
      ->check(CLI::IsMember({"naive", "tilted", "splitting", "exact", "enumeration", "guided"}));
  estimate->add_option("-d,--dimension", est_d);
  estimate->add_option("-n,--steps", est_n);
  estimate->add_option("-y,--y", est_y, "threshold (level-set: minimum size)");
  estimate->add_option("--beta", est_beta);
  estimate->add_option("--p", est_p, "silt power");
  estimate->add_option("--gamma", est_gamma, "silt scale n^gamma");
  estimate->add_option("--r", est_r, "confinement box side");
  estimate->add_option("--b-low", est_b_low);
  estimate->add_option("--b-high", est_b_high);
  estimate->add_option("--family", est_family, "scenery family");
  estimate->add_option("--alpha", est_alpha, "weibull tail exponent");
  estimate->add_option("--variance", est_variance);
  estimate->add_option("--replicas", est_replicas);
  estimate->add_option("--particles", est_particles, "splitting particles");
  estimate->add_option("--seed", est_seed);

  // green
  int green_d = 5, green_radius = 8;
  std::vector<int> green_x;
  std::string green_table;
  auto* green = app.add_subcommand("green", "Green kernel values and constants");
  green->add_option("-d,--dimension", green_d)->check(CLI::Range(3, 32));
  green->add_option("--x", green_x, "site, one coordinate per value")->delimiter(',');
  green->add_option("--radius", green_radius, "box radius of the lattice sum / table");
  green->add_option("--table", green_table, "write the symmetry-reduced table as JSON");

  // verify
  std::string suite;
  VerifyOptions vopts;
  std::string report_path;
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "identities | oracles | exponent-map | desk-scale | all")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", vopts.seed);
  verify->add_flag("--canary", vopts.canary, "inject an off-by-one into a fixture; the suite must fail");
  verify->add_option("--zeta-tolerance", vopts.zeta_tolerance, "desk-scale exponent tolerance");
  verify->add_option("--report", report_path, "write the JSON report here");

  // run
  std::string config_path;
  unsigned workers = default_workers();
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "JSON experiment config")->required();
  run->add_option("--workers", workers, "grid-point workers (default RWRS_WORKERS or hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*exponent) {
      ExponentResult r = classify(phase);
      json j{{"alpha", phase.alpha}, {"beta", phase.beta}, {"dimension", phase.dimension},
             {"region", region_name(r.region)}, {"zeta", num(r.zeta)}, {"formula", r.formula},
             {"on_boundary", r.on_boundary}, {"needs_y0", r.needs_y0}};
      if (r.on_boundary) j["neighbour"] = region_name(r.neighbour);
      std::cout << j.dump(2) << '\n';
      return kOk;
    }
    if (*simulate) {
      Trajectory t = simulate_walk(sim_d, sim_n, sim_seed);
      LocalTimeField f = local_times(t);
      std::int64_t origin = f.at(std::vector<Coord>(sim_d, 0));
      json end = json::array();
      for (Coord c : t.at(sim_n)) end.push_back(c);
      std::cout << json{{"dimension", sim_d},   {"steps", sim_n},
                        {"seed", sim_seed},     {"range", f.range()},
                        {"silt", silt(f)},      {"coincidence_pairs", coincidence_pairs(f)},
                        {"origin_local_time", origin}, {"endpoint", end}}
                       .dump(2)
                << '\n';
      if (!sim_out.empty()) {
        std::ofstream out(sim_out);
        for (int i = 0; i < sim_d; ++i) out << (i ? "," : "") << "x" << i;
        out << '\n';
        for (std::int64_t k = 0; k <= sim_n; ++k) {
          auto s = t.at(k);
          for (int i = 0; i < sim_d; ++i) out << (i ? "," : "") << s[i];
          out << '\n';
        }
      }
      return kOk;
    }
    if (*estimate) {
      TailEstimate e;
      if (est_event == "return-chain") {
        e = return_chain_lower_bound(est_d, est_n, est_y, est_replicas, est_seed);
      } else if (est_event == "confinement") {
        ConfinementMethod m = est_method == "exact"    ? ConfinementMethod::exact_spectral
                              : est_method == "guided" ? ConfinementMethod::guided_mc
                                                       : ConfinementMethod::naive_mc;
        e = confinement_probability(est_d, est_r, est_n, m, est_replicas, est_seed);
      } else if (est_event == "rwrs") {
        SceneryModel m = scenery_from(est_family, est_alpha, est_variance);
        if (est_method == "tilted")
          e = rwrs_tail_tilted(est_d, est_n, est_beta, est_y, m, est_replicas, TiltOptions{}, est_seed);
        else
          e = naive_tail(RwrsExceedance{est_beta, est_y, m}, est_d, est_n, est_replicas, est_seed);
      } else {
        EventSpec ev = est_event == "silt" ? EventSpec{SiltExceedance{est_p, est_gamma, est_y}}
                                           : EventSpec{LevelSetExceedance{est_b_low, est_b_high, est_y}};
        if (est_method == "splitting") {
          if (est_event != "silt" || est_p != 2) throw std::invalid_argument("splitting supports sum l^2 only");
          SplittingOptions o;
          o.particles = est_particles;
          e = splitting_tail(est_d, est_n, std::pow(static_cast<double>(est_n), est_gamma) * est_y, o, est_seed);
        } else if (est_method == "enumeration") {
          double p = exact_event_probability(ev, est_d, est_n);
          e = make_estimate(p, 0, 0, "enumeration");
        } else {
          e = naive_tail(ev, est_d, est_n, est_replicas, est_seed);
        }
      }
      std::cout << estimate_json(e).dump(2) << '\n';
      return kOk;
    }
    if (*green) {
      if (!green_x.empty()) {
        if (static_cast<int>(green_x.size()) != green_d) throw std::invalid_argument("--x needs d coordinates");
        std::vector<Coord> x(green_x.begin(), green_x.end());
        GreenValue g = green_value(green_d, x);
        std::cout << json{{"dimension", green_d}, {"x", green_x}, {"value", g.value}, {"error", g.error}}.dump(2)
                  << '\n';
        return kOk;
      }
      GreenConstants c = green_constants(green_d, green_radius);
      std::cout << json{{"dimension", c.dimension},       {"g0", c.g0},
                        {"return_prob", c.return_prob},   {"m1", num(c.m1)},
                        {"y0_silt", num(c.y0_silt)},      {"quadrature_error", c.quadrature_error},
                        {"radius", c.radius},             {"m1_truncated", num(c.m1_truncated)},
                        {"m1_tail_bound", num(c.m1_tail_bound)}}
                       .dump(2)
                << '\n';
      if (!green_table.empty()) std::ofstream(green_table) << build_green_table(green_d, green_radius).to_json();
      return kOk;
    }
    if (*verify) {
      SuiteReport rep = run_suite(suite, vopts);
      for (const auto& c : rep.criteria)
        std::printf("[%s] %2d %-32s %7.1fs  %s\n", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(), c.seconds,
                    c.detail.c_str());
      std::printf("suite %s: %s\n", suite.c_str(), rep.passed() ? "PASS" : "FAIL");
      if (!report_path.empty()) std::ofstream(report_path) << rep.to_json() << '\n';
      return rep.passed() ? kOk : kFail;
    }
    if (*run) {
      ExperimentConfig c;
      try {
        c = load_config(config_path);
      } catch (const ConfigError& e) {
        std::cerr << json{{"error", "config"}, {"path", e.path()}, {"message", e.what()}}.dump() << '\n';
        return kConfigError;
      }
      ResultRecord r = run_experiment(c, workers);
      WrittenFiles w = write_results(r, c);
      std::size_t failed = 0;
      for (const auto& g : r.grid) failed += g.error.empty() ? 0 : 1;
      std::cout << json{{"config_hash", r.config_hash}, {"csv", w.csv.string()}, {"json", w.json.string()},
                        {"grid_points", r.grid.size()}, {"zeta_rows", r.zeta.size()}, {"failed_points", failed}, {"seconds", r.wall_clock}}
                       .dump(2)
                << '\n';
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kOk;
}

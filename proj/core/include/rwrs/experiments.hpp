#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwrs/estimators.hpp"
#include "rwrs/scenery.hpp"

namespace rwrs {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Schema violation; `path` is a JSON pointer to the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class ExperimentKind { exponent_map, silt_sqrt_n, rwrs_tail, confinement, return_chain };

std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::exponent_map;
  std::string name;
  std::uint64_t seed = 0;
  int dimension = 5;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::vector<double> beta_grid;  // exponent-map
  std::vector<std::int64_t> n_grid;
  std::vector<double> y_grid;
  bool y_in_y0_units = false;     // silt-sqrt-n, return-chain: y = value * y0_silt
  std::vector<double> r_grid;     // confinement box sides
  std::uint64_t replicas = 1000;
  std::optional<SceneryModel> scenery;
  std::map<std::string, double> estimator;
  std::string method;             // rwrs-tail: tilted | naive; confinement: guided | naive
  std::string output = "results";
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
// Canonical JSON of the semantic fields (output excluded), used for hashing.
std::string canonical_config(const ExperimentConfig& c);
// FNV-1a of the canonical form, 16 hex digits.
std::string config_hash(const ExperimentConfig& c);

struct GridRecord {
  std::int64_t n = 0;
  double y = 0;
  std::uint64_t seed = 0;
  std::optional<TailEstimate> estimate;
  std::string method;
  std::string error;  // set when the grid point failed
};

struct FitRecord {
  std::string label;
  std::optional<ExponentFit> fit;
  std::optional<double> target;
  std::string error;  // set when too few usable grid points
};

struct ZetaRow {
  double alpha = 0, beta = 0;
  int dimension = 0;
  ExponentResult result;
};

struct ResultRecord {
  std::string config_hash;
  std::string kind;
  std::string version = kLibraryVersion;
  double wall_clock = 0;
  std::vector<GridRecord> grid;
  std::vector<FitRecord> fits;
  std::vector<ZetaRow> zeta;  // exponent-map only
};

// Deterministic given the config; grid points run on `workers` threads.
ResultRecord run_experiment(const ExperimentConfig& c, unsigned workers);

// CSV header n,y,p_hat,std_err,log_p,method,seed (exponent-map: alpha,beta,
// dimension,region,zeta,on_boundary,neighbour,needs_y0).
std::string results_csv(const ResultRecord& r);
std::string results_json(const ResultRecord& r, const ExperimentConfig& c);

struct WrittenFiles {
  std::filesystem::path csv, json;
};

// New timestamped files under c.output; existing files are never replaced.
WrittenFiles write_results(const ResultRecord& r, const ExperimentConfig& c);

}  // namespace rwrs

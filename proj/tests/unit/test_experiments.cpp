#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwrs/experiments.hpp"
#include "rwrs/verify.hpp"

using namespace rwrs;

namespace {

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

const char* kReturnChain = R"({"kind": "return-chain", "seed": 5, "dimension": 5, "n_grid": [64, 128, 256, 512],
  "y_grid": [1.2], "y_units": "y0", "replicas": 2000})";

}  // namespace

TEST(Config, ErrorsCarryPaths) {
  EXPECT_EQ(error_path("{"), "");
  EXPECT_EQ(error_path(R"({"seed": 1})"), "/kind");
  EXPECT_EQ(error_path(R"({"kind": "silt-sqrt-n"})"), "/seed");
  EXPECT_EQ(error_path(R"({"kind": "nope", "seed": 1})"), "/kind");
  EXPECT_EQ(error_path(R"({"kind": "silt-sqrt-n", "seed": 1, "n_grid": [64, "x"], "y_grid": [1]})"), "/n_grid/1");
  EXPECT_EQ(error_path(R"({"kind": "silt-sqrt-n", "seed": 1, "n_grid": [64], "y_grid": []})"), "/y_grid");
  EXPECT_EQ(error_path(R"({"kind": "silt-sqrt-n", "seed": 1, "n_grid": [64]})"), "/y_grid");
  EXPECT_EQ(error_path(R"({"kind": "exponent-map", "seed": 1, "bogus": 3})"), "/bogus");
  EXPECT_EQ(error_path(R"({"kind": "rwrs-tail", "seed": 1, "phase": {"beta": 1}, "n_grid": [8], "y_grid": [1],
    "scenery": {"family": "symmetric-weibull"}})"),
            "/scenery/alpha");
  EXPECT_EQ(error_path(R"({"kind": "confinement", "seed": 1, "n_grid": [8], "r_grid": [1]})"), "/r_grid/0");
  EXPECT_EQ(error_path(R"({"kind": "exponent-map", "seed": 1, "phase": {"alpha": 2}, "beta_grid": [1],
    "dimension": 0})"),
            "/dimension");
}

TEST(Config, HashIgnoresKeyOrderAndOutput) {
  ExperimentConfig a = parse_config(kReturnChain);
  ExperimentConfig b = parse_config(R"({"replicas": 2000, "y_units": "y0", "y_grid": [1.2],
    "n_grid": [64, 128, 256, 512], "dimension": 5, "seed": 5, "kind": "return-chain", "output": "elsewhere"})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 6;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, CanonicalFormReparses) {
  ExperimentConfig a = parse_config(kReturnChain);
  ExperimentConfig b = parse_config(canonical_config(a));
  EXPECT_EQ(canonical_config(a), canonical_config(b));
}

TEST(Runner, CsvIsByteIdenticalOnRerun) {
  ExperimentConfig c = parse_config(kReturnChain);
  std::string first = results_csv(run_experiment(c, 1));
  std::string second = results_csv(run_experiment(c, 2));
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.substr(0, first.find('\n')), "n,y,p_hat,std_err,log_p,method,seed");
}

TEST(Runner, ExponentMapRows) {
  ExperimentConfig c = parse_config(
      R"({"kind": "exponent-map", "seed": 1, "dimension": 5, "phase": {"alpha": 2}, "beta_grid": [0.7, 1.2, 1.6]})");
  ResultRecord r = run_experiment(c, 1);
  ASSERT_EQ(r.zeta.size(), 3u);
  EXPECT_EQ(r.zeta[1].result.region, Region::II);
  std::string csv = results_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha,beta,dimension,region,zeta,on_boundary,neighbour,needs_y0");
}

TEST(Runner, ReturnChainFitIsNegative) {
  ResultRecord r = run_experiment(parse_config(kReturnChain), 1);
  ASSERT_FALSE(r.fits.empty());
  ASSERT_TRUE(r.fits[0].fit.has_value());
  EXPECT_LT(r.fits[0].fit->slope, 0);
}

TEST(Runner, OutputsNeverOverwrite) {
  auto dir = std::filesystem::temp_directory_path() / "rwrs_unit_out";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = parse_config(
      R"({"kind": "exponent-map", "seed": 1, "phase": {"alpha": 2}, "beta_grid": [1.2]})");
  c.output = dir.string();
  ResultRecord r = run_experiment(c, 1);
  WrittenFiles a = write_results(r, c), b = write_results(r, c);
  EXPECT_NE(a.csv, b.csv);
  EXPECT_NE(a.json, b.json);
  EXPECT_TRUE(std::filesystem::exists(a.csv));
  EXPECT_TRUE(std::filesystem::exists(b.json));
  std::filesystem::remove_all(dir);
}

TEST(Verify, SuitesAndCanary) {
  EXPECT_EQ(suite_criteria("identities"), (std::vector<int>{1, 4, 11}));
  EXPECT_EQ(suite_criteria("all").size(), 11u);
  EXPECT_THROW(suite_criteria("nope"), std::invalid_argument);
  VerifyOptions o;
  EXPECT_TRUE(run_criterion(1, o).passed);
  o.canary = true;
  EXPECT_FALSE(run_criterion(1, o).passed);
  EXPECT_THROW(run_criterion(12, o), std::invalid_argument);
}

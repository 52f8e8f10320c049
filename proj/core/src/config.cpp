#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rwrs/experiments.hpp"

namespace rwrs {

using json = nlohmann::json;

namespace {

const std::vector<std::pair<ExperimentKind, const char*>> kKinds = {
    {ExperimentKind::exponent_map, "exponent-map"},
    {ExperimentKind::silt_sqrt_n, "silt-sqrt-n"},
    {ExperimentKind::rwrs_tail, "rwrs-tail"},
    {ExperimentKind::confinement, "confinement"},
    {ExperimentKind::return_chain, "return-chain"},
};

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

void only_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(child(path, it.key()), "unknown field");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ConfigError(path, "expected a non-negative integer");
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

template <class T, class F>
std::vector<T> list(const json& j, const std::string& path, F&& item) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  if (j.empty()) throw ConfigError(path, "grid must be nonempty");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], path + "/" + std::to_string(i)));
  return out;
}

SceneryModel parse_scenery(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  only_keys(j, path, {"family", "alpha", "c", "variance", "atoms", "probs", "seed"});
  if (!j.contains("family")) throw ConfigError(child(path, "family"), "required");
  SceneryFamily f;
  try {
    f = parse_family(text(j["family"], child(path, "family")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(child(path, "family"), e.what());
  }
  std::uint64_t seed = j.contains("seed") ? unsigned_integer(j["seed"], child(path, "seed")) : 0;
  auto get = [&](const char* key, double fallback) {
    return j.contains(key) ? number(j[key], child(path, key)) : fallback;
  };
  try {
    switch (f) {
      case SceneryFamily::symmetric_weibull:
        if (!j.contains("alpha")) throw ConfigError(child(path, "alpha"), "required for symmetric-weibull");
        return SceneryModel::weibull(get("alpha", 0), get("c", 1), seed);
      case SceneryFamily::gaussian:
        return SceneryModel::gaussian(get("variance", 1), seed);
      case SceneryFamily::symmetric_bounded:
        return SceneryModel::bounded(get("variance", 1), seed);
      case SceneryFamily::discrete: {
        if (!j.contains("atoms")) throw ConfigError(child(path, "atoms"), "required for discrete");
        if (!j.contains("probs")) throw ConfigError(child(path, "probs"), "required for discrete");
        auto atoms = list<double>(j["atoms"], child(path, "atoms"), number);
        auto probs = list<double>(j["probs"], child(path, "probs"), number);
        return SceneryModel::discrete(atoms, probs, seed);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(child(path, "family"), "unsupported family");
}

json scenery_json(const SceneryModel& m) {
  json j;
  j["family"] = family_name(m.family);
  j["seed"] = m.seed_base;
  switch (m.family) {
    case SceneryFamily::symmetric_weibull:
      j["alpha"] = m.alpha;
      j["c"] = m.c;
      break;
    case SceneryFamily::gaussian:
    case SceneryFamily::symmetric_bounded:
      j["variance"] = m.variance;
      break;
    case SceneryFamily::discrete:
      j["atoms"] = m.atoms;
      j["probs"] = m.probs;
      break;
  }
  return j;
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

}  // namespace

std::string kind_name(ExperimentKind k) {
  for (auto& [kind, name] : kKinds)
    if (kind == k) return name;
  return "?";
}

ExperimentKind parse_kind(const std::string& s) {
  for (auto& [kind, name] : kKinds)
    if (s == name) return kind;
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "config must be an object");
  only_keys(j, "", {"kind", "name", "seed", "dimension", "phase", "beta_grid", "n_grid", "y_grid", "y_units", "r_grid",
                    "replicas", "scenery", "estimator", "output"});

  ExperimentConfig c;
  require(j.contains("kind"), "/kind", "required");
  try {
    c.kind = parse_kind(text(j["kind"], "/kind"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/kind", e.what());
  }
  require(j.contains("seed"), "/seed", "master seed is mandatory");
  c.seed = unsigned_integer(j["seed"], "/seed");
  if (j.contains("name")) c.name = text(j["name"], "/name");
  if (j.contains("output")) c.output = text(j["output"], "/output");
  if (j.contains("dimension")) c.dimension = static_cast<int>(integer(j["dimension"], "/dimension"));
  require(c.dimension >= 1 && c.dimension <= 32, "/dimension", "must be in 1..32");
  if (j.contains("phase")) {
    const json& p = j["phase"];
    require(p.is_object(), "/phase", "expected an object");
    only_keys(p, "/phase", {"alpha", "beta"});
    if (p.contains("alpha")) c.alpha = number(p["alpha"], "/phase/alpha");
    if (p.contains("beta")) c.beta = number(p["beta"], "/phase/beta");
  }
  if (j.contains("beta_grid")) c.beta_grid = list<double>(j["beta_grid"], "/beta_grid", number);
  if (j.contains("n_grid")) {
    c.n_grid = list<std::int64_t>(j["n_grid"], "/n_grid", integer);
    for (std::size_t i = 0; i < c.n_grid.size(); ++i)
      require(c.n_grid[i] >= 0, "/n_grid/" + std::to_string(i), "must be non-negative");
  }
  if (j.contains("y_grid")) c.y_grid = list<double>(j["y_grid"], "/y_grid", number);
  if (j.contains("y_units")) {
    std::string u = text(j["y_units"], "/y_units");
    require(u == "absolute" || u == "y0", "/y_units", "must be 'absolute' or 'y0'");
    c.y_in_y0_units = u == "y0";
  }
  if (j.contains("r_grid")) c.r_grid = list<double>(j["r_grid"], "/r_grid", number);
  if (j.contains("replicas")) c.replicas = unsigned_integer(j["replicas"], "/replicas");
  require(c.replicas >= 1, "/replicas", "must be at least 1");
  if (j.contains("scenery")) c.scenery = parse_scenery(j["scenery"], "/scenery");
  if (j.contains("estimator")) {
    const json& e = j["estimator"];
    require(e.is_object(), "/estimator", "expected an object");
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (it.key() == "method")
        c.method = text(it.value(), "/estimator/method");
      else
        c.estimator[it.key()] = number(it.value(), "/estimator/" + it.key());
    }
  }

  auto need = [&](bool ok, const std::string& path) { require(ok, path, "required for kind " + kind_name(c.kind)); };
  switch (c.kind) {
    case ExperimentKind::exponent_map:
      need(c.alpha.has_value(), "/phase/alpha");
      need(!c.beta_grid.empty(), "/beta_grid");
      break;
    case ExperimentKind::silt_sqrt_n:
    case ExperimentKind::return_chain:
      need(!c.n_grid.empty(), "/n_grid");
      need(!c.y_grid.empty(), "/y_grid");
      require(c.dimension >= 3, "/dimension", "needs d >= 3");
      if (c.y_in_y0_units) require(c.dimension >= 5, "/y_units", "y0 units need d >= 5");
      break;
    case ExperimentKind::rwrs_tail:
      need(c.beta.has_value(), "/phase/beta");
      need(c.scenery.has_value(), "/scenery");
      need(!c.n_grid.empty(), "/n_grid");
      need(!c.y_grid.empty(), "/y_grid");
      require(c.method.empty() || c.method == "tilted" || c.method == "naive", "/estimator/method",
              "must be 'tilted' or 'naive'");
      break;
    case ExperimentKind::confinement:
      need(!c.r_grid.empty(), "/r_grid");
      need(!c.n_grid.empty(), "/n_grid");
      for (std::size_t i = 0; i < c.r_grid.size(); ++i)
        require(c.r_grid[i] >= 2, "/r_grid/" + std::to_string(i), "box side must be at least 2");
      require(c.method.empty() || c.method == "guided" || c.method == "naive", "/estimator/method",
              "must be 'guided' or 'naive'");
      break;
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_config(const ExperimentConfig& c) {
  json j;
  j["kind"] = kind_name(c.kind);
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["dimension"] = c.dimension;
  if (c.alpha) j["phase"]["alpha"] = *c.alpha;
  if (c.beta) j["phase"]["beta"] = *c.beta;
  if (!c.beta_grid.empty()) j["beta_grid"] = c.beta_grid;
  if (!c.n_grid.empty()) j["n_grid"] = c.n_grid;
  if (!c.y_grid.empty()) j["y_grid"] = c.y_grid;
  j["y_units"] = c.y_in_y0_units ? "y0" : "absolute";
  if (!c.r_grid.empty()) j["r_grid"] = c.r_grid;
  j["replicas"] = c.replicas;
  if (c.scenery) j["scenery"] = scenery_json(*c.scenery);
  json e = json::object();
  for (auto& [k, v] : c.estimator) e[k] = v;
  if (!c.method.empty()) e["method"] = c.method;
  j["estimator"] = e;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rwrs

#include "coverage/config.hpp"

#include <fstream>
#include <sstream>

namespace coverage {

using nlohmann::json;

namespace {

const json* child(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  const json* v = child(obj, key);
  if (v == nullptr) throw ConfigError(path + "." + key, "missing");
  return *v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  const json* v = child(obj, key);
  return v ? number(*v, path + "." + key) : fallback;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> number_list_or_empty(const json& obj, const char* key,
                                         const std::string& path) {
  const json* v = child(obj, key);
  return v ? number_list(*v, path + "." + key) : std::vector<double>{};
}

PolarCurve parse_curve(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  return PolarCurve{number(require(v, "mean", path), path + ".mean"),
                    number_list_or_empty(v, "cos", path), number_list_or_empty(v, "sin", path)};
}

json curve_to_json(const PolarCurve& c) {
  return json{{"mean", c.mean}, {"cos", c.cosine_coeffs}, {"sin", c.sine_coeffs}};
}

DensityField parse_density(const json& v) {
  const std::string path = "density";
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  const json& kind = require(v, "kind", path);
  if (!kind.is_string()) throw ConfigError("density.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "uniform") return DensityField::uniform(number_or(v, "value", 1.0, path));
  if (k == "paper_case_study") {
    return DensityField::case_study(number_or(v, "scale", 1.0, path),
                                    number_or(v, "radial_coeff", 0.01, path));
  }
  if (k == "radial_polynomial_times_angular") {
    std::vector<double> radial = number_list(require(v, "radial", path), "density.radial");
    if (radial.empty()) throw ConfigError("density.radial", "needs at least one coefficient");
    return DensityField::radial_times_angular(
        std::move(radial), parse_curve(require(v, "angular", path), "density.angular"));
  }
  throw ConfigError("density.kind", "unknown kind '" + k + "'");
}

json density_to_json(const DensityField& d) {
  const auto& p = d.parameters();
  switch (d.kind()) {
    case DensityField::Kind::kUniform:
      return json{{"kind", "uniform"}, {"value", p[0]}};
    case DensityField::Kind::kPaperCaseStudy:
      return json{{"kind", "paper_case_study"}, {"scale", p[0]}, {"radial_coeff", p[1]}};
    case DensityField::Kind::kRadialPolynomialTimesAngular:
      return json{{"kind", "radial_polynomial_times_angular"},
                  {"radial", p},
                  {"angular", curve_to_json(d.angular())}};
  }
  return json{};
}

CostModel parse_cost(const json& v) {
  if (!v.is_object()) throw ConfigError("cost", "expected an object");
  const json& kind = require(v, "kind", "cost");
  if (!kind.is_string()) throw ConfigError("cost.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "squared_distance") return CostModel::squared_distance();
  if (k != "generic_builtin") throw ConfigError("cost.kind", "unknown kind '" + k + "'");
  const json* form = child(v, "form");
  const std::string f = form && form->is_string() ? form->get<std::string>() : "squared";
  const double delta = number_or(v, "delta", 1.0, "cost");
  if (!(delta > 0.0)) throw ConfigError("cost.delta", "must be positive");
  if (f == "squared") return CostModel::generic(CostModel::Form::kSquared, delta);
  if (f == "quartic") return CostModel::generic(CostModel::Form::kQuartic, delta);
  if (f == "pseudo_huber") return CostModel::generic(CostModel::Form::kPseudoHuber, delta);
  throw ConfigError("cost.form", "unknown form '" + f + "'");
}

json cost_to_json(const CostModel& c) {
  if (c.kind() == CostModel::Kind::kSquaredDistance) return json{{"kind", "squared_distance"}};
  return json{{"kind", "generic_builtin"}, {"form", to_string(c.form())}, {"delta", c.delta()}};
}

std::uint64_t parse_seed(const json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && !v.is_number_unsigned())) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  ScenarioConfig c;

  const json& region = require(doc, "region", "config");
  c.inner = parse_curve(require(region, "inner", "region"), "region.inner");
  c.outer = parse_curve(require(region, "outer", "region"), "region.outer");
  c.validation_grid = static_cast<int>(number_or(region, "validation_grid", kDefaultGridSize, "region"));
  c.density = parse_density(require(doc, "density", "config"));

  const json& agents = require(doc, "agents", "config");
  const double count = number(require(agents, "count", "agents"), "agents.count");
  if (count < 1 || count != static_cast<double>(static_cast<long>(count))) {
    throw ConfigError("agents.count", "must be a positive integer");
  }
  c.agent_count = static_cast<std::size_t>(count);
  if (const json* v = child(agents, "initial_phases")) {
    c.initial_phases = number_list(*v, "agents.initial_phases");
  }
  if (const json* v = child(agents, "initial_positions")) {
    if (!v->is_array()) throw ConfigError("agents.initial_positions", "expected [[x, y], ...]");
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "agents.initial_positions[" + std::to_string(i) + "]";
      const std::vector<double> xy = number_list((*v)[i], path);
      if (xy.size() != 2) throw ConfigError(path, "expected [x, y]");
      pts.emplace_back(xy[0], xy[1]);
    }
    c.initial_positions = std::move(pts);
  }
  if (const json* v = child(doc, "seed")) c.seed = parse_seed(*v, "seed");

  if (const json* gains = child(doc, "gains")) {
    c.kappa_phi = number_or(*gains, "kappa_phi", c.kappa_phi, "gains");
    c.kappa_p = number_or(*gains, "kappa_p", c.kappa_p, "gains");
  }
  if (const json* integ = child(doc, "integrator")) {
    c.dt = number_or(*integ, "dt", c.dt, "integrator");
    c.t_end = number_or(*integ, "t_end", c.t_end, "integrator");
    const double stride = number_or(*integ, "log_stride", c.log_stride, "integrator");
    if (stride < 1 || stride != static_cast<double>(static_cast<long>(stride))) {
      throw ConfigError("integrator.log_stride", "must be a positive integer");
    }
    c.log_stride = static_cast<int>(stride);
  }
  if (const json* cost = child(doc, "cost")) c.cost = parse_cost(*cost);
  if (const json* search = child(doc, "search")) {
    SearchConfig s;
    if (const json* v = child(*search, "epsilon_p")) s.epsilon_p = number(*v, "search.epsilon_p");
    if (const json* v = child(*search, "K_star")) {
      const double k = number(*v, "search.K_star");
      if (k < 1 || k != static_cast<double>(static_cast<long>(k))) {
        throw ConfigError("search.K_star", "must be a positive integer");
      }
      s.k_star = static_cast<int>(k);
    }
    s.t_epsilon = number_or(*search, "T_epsilon", s.t_epsilon, "search");
    s.rng_seed = c.seed;
    if (const json* v = child(*search, "rng_seed")) s.rng_seed = parse_seed(*v, "search.rng_seed");
    c.search = s;
  }
  if (const json* out = child(doc, "output")) {
    c.snapshot_times = number_list_or_empty(*out, "snapshot_times", "output");
  }

  try {
    (void)c.region();
  } catch (const InvalidGeometry& e) {
    throw ConfigError("region", e.what());
  }
  validate(c);
  return c;
}

ScenarioConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

json config_to_json(const ScenarioConfig& c) {
  json doc;
  doc["region"] = {{"inner", curve_to_json(c.inner)},
                   {"outer", curve_to_json(c.outer)},
                   {"validation_grid", c.validation_grid}};
  doc["density"] = density_to_json(c.density);
  json agents{{"count", c.agent_count}};
  if (c.initial_phases) agents["initial_phases"] = *c.initial_phases;
  if (c.initial_positions) {
    json pts = json::array();
    for (const Vec2& p : *c.initial_positions) pts.push_back({p.x(), p.y()});
    agents["initial_positions"] = pts;
  }
  doc["agents"] = agents;
  doc["seed"] = c.seed;
  doc["gains"] = {{"kappa_phi", c.kappa_phi}, {"kappa_p", c.kappa_p}};
  doc["integrator"] = {{"dt", c.dt}, {"t_end", c.t_end}, {"log_stride", c.log_stride}};
  doc["cost"] = cost_to_json(c.cost);
  if (c.search) {
    json s{{"T_epsilon", c.search->t_epsilon}, {"rng_seed", c.search->rng_seed}};
    if (c.search->epsilon_p) s["epsilon_p"] = *c.search->epsilon_p;
    if (c.search->k_star) s["K_star"] = *c.search->k_star;
    doc["search"] = s;
  }
  doc["output"] = {{"snapshot_times", c.snapshot_times}};
  return doc;
}

}  // namespace coverage

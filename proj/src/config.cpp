#include "berry_ring/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "berry_ring/error.hpp"

namespace berry_ring {

using nlohmann::json;

const char* to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::trajectory: return "trajectory";
    case Scenario::sweep_alpha: return "sweep-alpha";
    case Scenario::sweep_lambda: return "sweep-lambda";
    case Scenario::spectrum: return "spectrum";
    case Scenario::broadening: return "broadening";
    case Scenario::frenet_demo: return "frenet-demo";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::trajectory, Scenario::sweep_alpha, Scenario::sweep_lambda, Scenario::spectrum,
                     Scenario::broadening, Scenario::frenet_demo}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

json defaults() {
  const RunConfig d;
  json j;
  j["scenario"] = to_string(d.scenario);
  j["ring"] = {{"beta", d.ring.beta},       {"lambda1", d.ring.lambda1}, {"gamma", d.ring.gamma},
               {"a_sharp", d.ring.a_sharp}, {"b_width", d.ring.b_width}, {"k0", d.ring.k0}};
  j["coupler"] = {{"xi_c", d.coupler.xi_c}, {"xi_l", d.coupler.xi_l}, {"theta_t", nullptr}, {"alpha_res", nullptr}};
  j["integration"] = {{"steps_per_unit_length", d.integration.steps_per_unit_length}};
  j["sweep"] = {{"threads", d.threads}};
  j["sweep_alpha"] = {{"min", d.sweep_alpha.min},
                      {"max", d.sweep_alpha.max},
                      {"count", d.sweep_alpha.count},
                      {"fwhm_window", d.sweep_alpha.fwhm_window},
                      {"fwhm_points", d.sweep_alpha.fwhm_points},
                      {"phase_probe", d.sweep_alpha.phase_probe}};
  j["sweep_lambda"] = {{"min", d.sweep_lambda.min},
                       {"max", d.sweep_lambda.max},
                       {"step", d.sweep_lambda.step},
                       {"method", to_string(d.sweep_lambda.method)},
                       {"zeros", d.sweep_lambda.zeros},
                       {"zero_resolution", d.sweep_lambda.zero_resolution},
                       {"zero_tolerance", d.sweep_lambda.zero_tolerance}};
  j["trajectory"] = {{"lambda", d.trajectory.lambda},
                     {"samples", d.trajectory.samples},
                     {"ring_alpha", d.trajectory.ring_alpha},
                     {"ring_samples", d.trajectory.ring_samples}};
  j["spectrum"] = {{"alpha", d.spectrum.alpha}, {"min", d.spectrum.min}, {"max", d.spectrum.max},
                   {"count", d.spectrum.count}};
  j["broadening"] = {{"q", d.broadening.q},
                     {"delta_vartheta", d.broadening.delta_vartheta},
                     {"min", d.broadening.min},
                     {"max", d.broadening.max},
                     {"count", d.broadening.count}};
  j["frenet"] = {{"curve_csv", nullptr},
                 {"radius", d.frenet.radius},
                 {"pitch", d.frenet.pitch},
                 {"turns", d.frenet.turns},
                 {"samples", d.frenet.samples}};
  j["output"] = {{"dir", d.output_dir}};
  return j;
}

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  fail(ErrorCode::config, "config '" + path + "': " + what);
}

// Keys with a null default accept null or a value of the listed kind.
bool nullable(const std::string& path) {
  return path == "coupler.theta_t" || path == "coupler.alpha_res" || path == "frenet.curve_csv";
}

void merge(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) config_error(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) config_error(path, "unknown key");
    json& slot = base[it.key()];
    if (slot.is_object()) {
      merge(slot, it.value(), path);
    } else {
      slot = it.value();
    }
  }
}

void apply_override(json& root, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) fail(ErrorCode::config, "override '" + text + "' is not key=value");
  const std::string key = text.substr(0, eq);
  const std::string raw = text.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &root;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty() || !node->is_object() || !node->contains(part)) config_error(key, "unknown key");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) config_error(key, "cannot override a section");
  *node = value;
}

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json& at(const std::string& path) const {
    const json* node = &root_;
    std::size_t start = 0;
    for (;;) {
      const auto dot = path.find('.', start);
      node = &(*node)[path.substr(start, dot == std::string::npos ? std::string::npos : dot - start)];
      if (dot == std::string::npos) return *node;
      start = dot + 1;
    }
  }

  double number(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_number()) config_error(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) config_error(path, "must be finite");
    return d;
  }

  std::optional<double> optional_number(const std::string& path) const {
    if (at(path).is_null()) return std::nullopt;
    return number(path);
  }

  double positive(const std::string& path) const {
    const double d = number(path);
    if (!(d > 0.0)) config_error(path, "must be positive");
    return d;
  }

  double non_negative(const std::string& path) const {
    const double d = number(path);
    if (!(d >= 0.0)) config_error(path, "must be non-negative");
    return d;
  }

  std::size_t count(const std::string& path, std::size_t min) const {
    const json& v = at(path);
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
      config_error(path, "expected an integer >= " + std::to_string(min));
    }
    return v.get<std::size_t>();
  }

  std::string text(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_string()) config_error(path, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_array() || v.empty()) config_error(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) config_error(path, "expected finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  const json& root_;
};

RunConfig extract(const json& root) {
  // Nullable keys must be null or of the right kind; everything else keeps its default's type.
  const Reader r(root);
  RunConfig c;
  const std::string scen = r.text("scenario");
  const auto s = parse_scenario(scen);
  if (!s) config_error("scenario", "unknown scenario '" + scen + "'");
  c.scenario = *s;

  c.ring.beta = r.positive("ring.beta");
  c.ring.lambda1 = r.positive("ring.lambda1");
  c.ring.gamma = r.positive("ring.gamma");
  c.ring.a_sharp = r.non_negative("ring.a_sharp");
  c.ring.b_width = r.non_negative("ring.b_width");
  c.ring.k0 = r.number("ring.k0");

  c.coupler.xi_c = r.number("coupler.xi_c");
  c.coupler.xi_l = r.number("coupler.xi_l");
  for (const char* key : {"coupler.xi_c", "coupler.xi_l"}) {
    const double v = r.number(key);
    if (!(v >= 0.0 && v < 1.0)) config_error(key, "must be in [0, 1)");
  }
  c.coupler.theta_t = r.optional_number("coupler.theta_t");
  c.coupler.alpha_res = r.optional_number("coupler.alpha_res");

  const std::size_t spu = r.count("integration.steps_per_unit_length", 1);
  if (spu > 10'000'000) config_error("integration.steps_per_unit_length", "is unreasonably large");
  c.integration.steps_per_unit_length = static_cast<int>(spu);
  c.threads = static_cast<unsigned>(r.count("sweep.threads", 0));

  c.sweep_alpha.min = r.number("sweep_alpha.min");
  c.sweep_alpha.max = r.number("sweep_alpha.max");
  if (!(c.sweep_alpha.max > c.sweep_alpha.min)) config_error("sweep_alpha.max", "must exceed sweep_alpha.min");
  c.sweep_alpha.count = r.count("sweep_alpha.count", 3);
  c.sweep_alpha.fwhm_window = r.positive("sweep_alpha.fwhm_window");
  c.sweep_alpha.fwhm_points = r.count("sweep_alpha.fwhm_points", 5);
  c.sweep_alpha.phase_probe = r.positive("sweep_alpha.phase_probe");

  c.sweep_lambda.min = r.non_negative("sweep_lambda.min");
  c.sweep_lambda.max = r.positive("sweep_lambda.max");
  if (!(c.sweep_lambda.max > c.sweep_lambda.min)) config_error("sweep_lambda.max", "must exceed sweep_lambda.min");
  c.sweep_lambda.step = r.positive("sweep_lambda.step");
  const std::string method = r.text("sweep_lambda.method");
  if (method == to_string(ZenerMethod::numeric_monodromy)) {
    c.sweep_lambda.method = ZenerMethod::numeric_monodromy;
  } else if (method == to_string(ZenerMethod::perturbative_integral)) {
    c.sweep_lambda.method = ZenerMethod::perturbative_integral;
  } else if (method == to_string(ZenerMethod::closed_form)) {
    c.sweep_lambda.method = ZenerMethod::closed_form;
  } else {
    config_error("sweep_lambda.method", "unknown method '" + method + "'");
  }
  c.sweep_lambda.zeros = r.count("sweep_lambda.zeros", 0);
  c.sweep_lambda.zero_resolution = r.positive("sweep_lambda.zero_resolution");
  c.sweep_lambda.zero_tolerance = r.positive("sweep_lambda.zero_tolerance");

  c.trajectory.lambda = r.non_negative("trajectory.lambda");
  c.trajectory.samples = r.count("trajectory.samples", 2);
  c.trajectory.ring_alpha = r.number("trajectory.ring_alpha");
  if (c.trajectory.ring_alpha == 0.0) config_error("trajectory.ring_alpha", "must be non-zero (alpha = 0 crosses the degeneracy)");
  c.trajectory.ring_samples = r.count("trajectory.ring_samples", 2);

  c.spectrum.alpha = r.number("spectrum.alpha");
  c.spectrum.min = r.number("spectrum.min");
  c.spectrum.max = r.number("spectrum.max");
  if (!(c.spectrum.max > c.spectrum.min)) config_error("spectrum.max", "must exceed spectrum.min");
  c.spectrum.count = r.count("spectrum.count", 2);

  c.broadening.q = r.positive("broadening.q");
  c.broadening.delta_vartheta = r.numbers("broadening.delta_vartheta");
  for (double d : c.broadening.delta_vartheta) {
    if (d < 0.0) config_error("broadening.delta_vartheta", "entries must be non-negative");
  }
  c.broadening.min = r.number("broadening.min");
  c.broadening.max = r.number("broadening.max");
  if (!(c.broadening.max > c.broadening.min)) config_error("broadening.max", "must exceed broadening.min");
  c.broadening.count = r.count("broadening.count", 2);

  if (!r.at("frenet.curve_csv").is_null()) c.frenet.curve_csv = r.text("frenet.curve_csv");
  c.frenet.radius = r.positive("frenet.radius");
  c.frenet.pitch = r.number("frenet.pitch");
  c.frenet.turns = r.positive("frenet.turns");
  c.frenet.samples = r.count("frenet.samples", 8);

  c.output_dir = r.text("output.dir");
  if (c.output_dir.empty()) config_error("output.dir", "must not be empty");
  return c;
}

void check_types(const json& reference, const json& value, const std::string& prefix) {
  for (auto it = reference.begin(); it != reference.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    const json& v = value.at(it.key());
    if (it.value().is_object()) {
      if (!v.is_object()) config_error(path, "expected a section");
      check_types(it.value(), v, path);
    } else if (v.is_null() && !nullable(path)) {
      config_error(path, "must not be null");
    }
  }
}

// Integer literals in real-valued fields, so that 4 and 4.0 hash alike.
void normalize_numbers(const json& reference, json& value) {
  if (reference.is_object() && value.is_object()) {
    for (auto it = reference.begin(); it != reference.end(); ++it) {
      if (value.contains(it.key())) normalize_numbers(it.value(), value[it.key()]);
    }
  } else if (reference.is_array() && value.is_array() && !reference.empty()) {
    for (auto& e : value) normalize_numbers(reference.front(), e);
  } else if (reference.is_number_float() && value.is_number_integer()) {
    value = value.get<double>();
  }
}

RunConfig finish(json merged) {
  check_types(defaults(), merged, "");
  normalize_numbers(defaults(), merged);
  RunConfig c = extract(merged);
  // Neither where results land nor how many threads compute them changes the results.
  merged.erase("output");
  merged["sweep"].erase("threads");
  if (merged["sweep"].empty()) merged.erase("sweep");
  c.canonical = merged.dump();
  c.hash = fnv1a64(c.canonical);
  return c;
}

json parse_document(std::string_view text, const std::string& origin) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false, true);
  if (doc.is_discarded()) fail(ErrorCode::config, origin + ": not valid JSON");
  return doc;
}

}  // namespace

std::string default_config_text() { return defaults().dump(2); }

RunConfig load_config(const ConfigSource& src) {
  json merged = defaults();
  if (src.default_output_dir) merged["output"]["dir"] = *src.default_output_dir;
  if (src.file) {
    std::ifstream in(*src.file);
    if (!in) fail(ErrorCode::io, "cannot read config file " + src.file->string());
    std::stringstream ss;
    ss << in.rdbuf();
    merge(merged, parse_document(ss.str(), src.file->string()), "");
  }
  if (src.scenario) merged["scenario"] = *src.scenario;
  for (const std::string& o : src.overrides) apply_override(merged, o);
  if (src.output_dir) merged["output"]["dir"] = *src.output_dir;
  return finish(std::move(merged));
}

RunConfig load_config_text(std::string_view text, std::span<const std::string> overrides) {
  json merged = defaults();
  merge(merged, parse_document(text, "<config>"), "");
  for (const std::string& o : overrides) apply_override(merged, o);
  return finish(std::move(merged));
}

}  // namespace berry_ring

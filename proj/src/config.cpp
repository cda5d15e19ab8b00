#include "swblow/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "swblow/errors.hpp"
#include "swblow/format.hpp"

extern char** environ;

namespace swblow {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == key.size()) return false;
  if (key.find('.', dot + 1) != std::string_view::npos) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
           c == '.';
  });
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!valid_key(key)) {
      throw ConfigError("line " + std::to_string(line_no) + ": malformed key '" + key + "'");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

std::string serialize_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string env_name_to_key(std::string_view name) {
  if (name.substr(0, kEnvPrefix.size()) != kEnvPrefix) return {};
  std::string rest(name.substr(kEnvPrefix.size()));
  const auto us = rest.find('_');
  if (us == std::string::npos || us == 0 || us + 1 == rest.size()) return {};
  rest[us] = '.';
  std::transform(rest.begin(), rest.end(), rest.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return rest;
}

void apply_env_overrides(KeyValues& kv, const std::vector<std::string>& environment) {
  for (const auto& entry : environment) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = env_name_to_key(std::string_view(entry).substr(0, eq));
    if (!key.empty()) kv[key] = std::string(trim(std::string_view(entry).substr(eq + 1)));
  }
}

void apply_process_env_overrides(KeyValues& kv) {
  std::vector<std::string> env;
  for (char** e = environ; e && *e; ++e) env.emplace_back(*e);
  apply_env_overrides(kv, env);
}

// ---------------------------------------------------------------------------

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Rest: return "rest";
    case InitialKind::Wave: return "wave";
    case InitialKind::Random: return "random";
    case InitialKind::DrySpot: return "dryspot";
    case InitialKind::SignChange: return "sign_change";
    case InitialKind::Theorem3: return "theorem3";
  }
  return "unknown";
}

InitialKind parse_initial_kind(std::string_view name) {
  for (InitialKind k : {InitialKind::Rest, InitialKind::Wave, InitialKind::Random, InitialKind::DrySpot,
                        InitialKind::SignChange, InitialKind::Theorem3}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown initial.kind '" + std::string(name) +
                    "' (expected rest, wave, random, dryspot, sign_change or theorem3)");
}

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Theorem2: return "theorem2";
    case ScenarioKind::Theorem3: return "theorem3";
    case ScenarioKind::DrySpot: return "dryspot";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (ScenarioKind k : {ScenarioKind::Theorem2, ScenarioKind::Theorem3, ScenarioKind::DrySpot}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown scenario.name '" + std::string(name) + "' (expected theorem2, theorem3 or dryspot)");
}

std::string_view to_string(SweepMode m) { return m == SweepMode::Simulate ? "simulate" : "reduce"; }

namespace {

SweepMode parse_sweep_mode(std::string_view name) {
  if (name == "simulate") return SweepMode::Simulate;
  if (name == "reduce") return SweepMode::Reduce;
  throw ConfigError("unknown sweep.mode '" + std::string(name) + "' (expected simulate or reduce)");
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("config key " + std::string(key) + ": cannot read '" + std::string(value) + "' as " +
                    std::string(expected));
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    if constexpr (std::is_floating_point_v<T>) {
      if (v == "inf") return std::numeric_limits<T>::infinity();
      if (v == "-inf") return -std::numeric_limits<T>::infinity();
    }
    bad_value(key, v, std::is_floating_point_v<T> ? "a number" : "an integer");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "a boolean");
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view v) {
  std::vector<T> out;
  v = trim(v);
  if (v.empty()) return out;
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse_number<T>(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v = v.substr(comma + 1);
  }
  return out;
}

template <class T>
std::string render(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return format_number(v);
  } else if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else {
    return std::to_string(v);
  }
}

template <class T>
std::string render_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + render(v[i]);
  return out;
}

struct Binding {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <class Acc>
Binding scalar(std::string key, Acc acc) {
  using T = std::remove_cvref_t<decltype(acc(std::declval<RunConfig&>()))>;
  Binding b;
  b.key = key;
  b.get = [acc](const RunConfig& c) { return render(acc(const_cast<RunConfig&>(c))); };
  b.set = [acc, key](RunConfig& c, std::string_view v) {
    if constexpr (std::is_same_v<T, bool>) {
      acc(c) = parse_bool(key, v);
    } else if constexpr (std::is_same_v<T, std::string>) {
      acc(c) = std::string(v);
    } else {
      acc(c) = parse_number<T>(key, v);
    }
  };
  return b;
}

template <class Acc>
Binding list(std::string key, Acc acc) {
  using T = typename std::remove_cvref_t<decltype(acc(std::declval<RunConfig&>()))>::value_type;
  return {key, [acc](const RunConfig& c) { return render_list(acc(const_cast<RunConfig&>(c))); },
          [acc, key](RunConfig& c, std::string_view v) { acc(c) = parse_list<T>(key, v); }};
}

template <class Acc>
Binding optional_number(std::string key, Acc acc) {
  return {key,
          [acc](const RunConfig& c) {
            const auto& o = acc(const_cast<RunConfig&>(c));
            return o ? format_number(*o) : std::string("none");
          },
          [acc, key](RunConfig& c, std::string_view v) {
            if (v == "none" || v.empty()) {
              acc(c).reset();
            } else {
              acc(c) = parse_number<double>(key, v);
            }
          }};
}

template <class Acc, class Parse>
Binding named(std::string key, Acc acc, Parse parse) {
  return {key, [acc](const RunConfig& c) { return std::string(to_string(acc(const_cast<RunConfig&>(c)))); },
          [acc, parse](RunConfig& c, std::string_view v) { acc(c) = parse(v); }};
}

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> t;
    t.push_back(named("model.variant", [](RunConfig& c) -> auto& { return c.model.variant; }, parse_model_variant));
    t.push_back(scalar("model.a", [](RunConfig& c) -> auto& { return c.model.a; }));
    t.push_back(scalar("model.b", [](RunConfig& c) -> auto& { return c.model.b; }));
    t.push_back(scalar("model.c", [](RunConfig& c) -> auto& { return c.model.c; }));
    t.push_back(scalar("model.d", [](RunConfig& c) -> auto& { return c.model.d; }));
    t.push_back(scalar("model.epsilon", [](RunConfig& c) -> auto& { return c.model.epsilon; }));
    t.push_back(scalar("model.mu", [](RunConfig& c) -> auto& { return c.model.mu; }));
    t.push_back(scalar("model.h_min", [](RunConfig& c) -> auto& { return c.model.h_min; }));
    t.push_back(scalar("model.solver_tol", [](RunConfig& c) -> auto& { return c.model.solver_tol; }));
    t.push_back(scalar("model.solver_max_iters", [](RunConfig& c) -> auto& { return c.model.solver_max_iters; }));
    t.push_back(scalar("grid.n", [](RunConfig& c) -> auto& { return c.n; }));
    t.push_back(scalar("integrator.dt", [](RunConfig& c) -> auto& { return c.integrator.dt; }));
    t.push_back(scalar("integrator.t_end", [](RunConfig& c) -> auto& { return c.integrator.t_end; }));
    t.push_back(scalar("integrator.record_every", [](RunConfig& c) -> auto& { return c.integrator.record_every; }));
    t.push_back(scalar("integrator.blowup_norm_threshold",
                       [](RunConfig& c) -> auto& { return c.integrator.blowup_norm_threshold; }));
    t.push_back(scalar("integrator.dt_min", [](RunConfig& c) -> auto& { return c.integrator.dt_min; }));
    t.push_back(scalar("integrator.symmetry_projection",
                       [](RunConfig& c) -> auto& { return c.integrator.symmetry_projection; }));
    t.push_back(scalar("integrator.rel_tol", [](RunConfig& c) -> auto& { return c.integrator.rel_tol; }));
    t.push_back(scalar("integrator.analyticity_detector",
                       [](RunConfig& c) -> auto& { return c.integrator.analyticity_detector; }));
    t.push_back(scalar("integrator.analyticity_floor",
                       [](RunConfig& c) -> auto& { return c.integrator.analyticity_floor; }));
    t.push_back(scalar("integrator.max_steps", [](RunConfig& c) -> auto& { return c.integrator.max_steps; }));
    t.push_back(scalar("diagnostics.jets", [](RunConfig& c) -> auto& { return c.diagnostics.jets; }));
    t.push_back(scalar("diagnostics.energies", [](RunConfig& c) -> auto& { return c.diagnostics.energies; }));
    t.push_back(scalar("diagnostics.analyticity", [](RunConfig& c) -> auto& { return c.diagnostics.analyticity; }));
    t.push_back(scalar("diagnostics.functionals", [](RunConfig& c) -> auto& { return c.diagnostics.functionals; }));
    t.push_back(scalar("diagnostics.hamiltonian", [](RunConfig& c) -> auto& { return c.diagnostics.hamiltonian; }));
    t.push_back(scalar("diagnostics.lambda", [](RunConfig& c) -> auto& { return c.diagnostics.lambda; }));
    t.push_back(optional_number("diagnostics.omega", [](RunConfig& c) -> auto& { return c.diagnostics.omega; }));
    t.push_back(optional_number("diagnostics.sigma", [](RunConfig& c) -> auto& { return c.diagnostics.sigma; }));
    t.push_back(scalar("diagnostics.analyticity_floor",
                       [](RunConfig& c) -> auto& { return c.diagnostics.analyticity_floor; }));
    t.push_back(scalar("diagnostics.quadrature_cells",
                       [](RunConfig& c) -> auto& { return c.diagnostics.quadrature_cells; }));
    t.push_back(named("initial.kind", [](RunConfig& c) -> auto& { return c.initial.kind; }, parse_initial_kind));
    t.push_back(scalar("initial.amplitude", [](RunConfig& c) -> auto& { return c.initial.amplitude; }));
    t.push_back(scalar("initial.velocity", [](RunConfig& c) -> auto& { return c.initial.velocity; }));
    t.push_back(scalar("initial.mode", [](RunConfig& c) -> auto& { return c.initial.mode; }));
    t.push_back(scalar("initial.steepness", [](RunConfig& c) -> auto& { return c.initial.steepness; }));
    t.push_back(scalar("initial.sigma", [](RunConfig& c) -> auto& { return c.initial.sigma; }));
    t.push_back(scalar("initial.beta", [](RunConfig& c) -> auto& { return c.initial.beta; }));
    t.push_back(scalar("initial.gamma", [](RunConfig& c) -> auto& { return c.initial.gamma; }));
    t.push_back(scalar("initial.random_scale", [](RunConfig& c) -> auto& { return c.initial.random_scale; }));
    t.push_back(named("scenario.name", [](RunConfig& c) -> auto& { return c.scenario.kind; }, parse_scenario_kind));
    t.push_back(scalar("scenario.delta", [](RunConfig& c) -> auto& { return c.scenario.delta; }));
    t.push_back(scalar("scenario.horizon", [](RunConfig& c) -> auto& { return c.scenario.horizon; }));
    t.push_back(scalar("scenario.max_halvings", [](RunConfig& c) -> auto& { return c.scenario.max_halvings; }));
    t.push_back(named("reduce.system", [](RunConfig& c) -> auto& { return c.reduce.system; }, parse_jet_system));
    t.push_back(scalar("reduce.alpha2", [](RunConfig& c) -> auto& { return c.reduce.alpha2; }));
    t.push_back(scalar("reduce.beta1", [](RunConfig& c) -> auto& { return c.reduce.beta1; }));
    t.push_back(scalar("reduce.t_end", [](RunConfig& c) -> auto& { return c.reduce.t_end; }));
    t.push_back(scalar("reduce.dt", [](RunConfig& c) -> auto& { return c.reduce.dt; }));
    t.push_back(named("sweep.mode", [](RunConfig& c) -> auto& { return c.sweep.mode; }, parse_sweep_mode));
    t.push_back(scalar("sweep.workers", [](RunConfig& c) -> auto& { return c.sweep.workers; }));
    t.push_back(list("sweep.a", [](RunConfig& c) -> auto& { return c.sweep.a; }));
    t.push_back(list("sweep.b", [](RunConfig& c) -> auto& { return c.sweep.b; }));
    t.push_back(list("sweep.c", [](RunConfig& c) -> auto& { return c.sweep.c; }));
    t.push_back(list("sweep.d", [](RunConfig& c) -> auto& { return c.sweep.d; }));
    t.push_back(list("sweep.steepness", [](RunConfig& c) -> auto& { return c.sweep.steepness; }));
    t.push_back(list("sweep.n", [](RunConfig& c) -> auto& { return c.sweep.n; }));
    t.push_back(list("sweep.alpha2", [](RunConfig& c) -> auto& { return c.sweep.alpha2; }));
    t.push_back(list("sweep.beta1", [](RunConfig& c) -> auto& { return c.sweep.beta1; }));
    t.push_back(scalar("output.dir", [](RunConfig& c) -> auto& { return c.output_dir; }));
    t.push_back(list("output.modes", [](RunConfig& c) -> auto& { return c.output_modes; }));
    t.push_back(scalar("run.seed", [](RunConfig& c) -> auto& { return c.seed; }));
    return t;
  }();
  return table;
}

}  // namespace

KeyValues RunConfig::to_key_values() const {
  KeyValues kv;
  for (const auto& b : bindings()) kv[b.key] = b.get(*this);
  return kv;
}

RunConfig RunConfig::from_key_values(const KeyValues& kv) {
  RunConfig c;
  for (const auto& [key, value] : kv) {
    const auto& table = bindings();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return b.key == key; });
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->set(c, value);
  }
  return c;
}

void RunConfig::validate() const {
  model.validate();
  validate_grid_size(n);
  integrator.validate();
  if (!(diagnostics.lambda > 0.0 && diagnostics.lambda < 0.5)) {
    throw ConfigError("diagnostics.lambda must lie strictly between 0 and 1/2");
  }
  if (diagnostics.omega && !(*diagnostics.omega > 0.0 && *diagnostics.omega <= std::numbers::pi)) {
    throw ConfigError("diagnostics.omega must lie in (0, pi]");
  }
  if (diagnostics.sigma && !(*diagnostics.sigma > 0.0)) throw ConfigError("diagnostics.sigma must be positive");
  if (!(diagnostics.analyticity_floor > 0.0)) throw ConfigError("diagnostics.analyticity_floor must be positive");
  if (diagnostics.quadrature_cells < 1) throw ConfigError("diagnostics.quadrature_cells must be at least 1");
  if (initial.mode < 1 || initial.mode > n / 2 - 1) {
    throw ConfigError("initial.mode must lie in [1, grid.n/2 - 1]");
  }
  if (!(initial.steepness > 0.0)) throw ConfigError("initial.steepness must be positive");
  if (!(initial.sigma > 0.0)) throw ConfigError("initial.sigma must be positive");
  if (!(scenario.delta > 0.0)) throw ConfigError("scenario.delta must be positive");
  if (!(scenario.horizon > 0.0)) throw ConfigError("scenario.horizon must be positive");
  if (scenario.max_halvings < 0) throw ConfigError("scenario.max_halvings must be nonnegative");
  if (!(reduce.dt > 0.0)) throw ConfigError("reduce.dt must be positive");
  if (!(reduce.t_end > 0.0)) throw ConfigError("reduce.t_end must be positive");
  if (sweep.workers < 0) throw ConfigError("sweep.workers must be nonnegative");
  for (int m : sweep.n) validate_grid_size(m);
  for (int m : output_modes) {
    if (m < 0) throw ConfigError("output.modes entries must be nonnegative");
  }
  if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
}

RunConfig load_run_config(const std::string& path, bool env_overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  KeyValues kv = parse_key_values(buf.str());
  if (env_overrides) apply_process_env_overrides(kv);
  return RunConfig::from_key_values(kv);
}

}  // namespace swblow

#pragma once

// Run configuration as flat "section.key = value" text.
//
//   # comment
//   model.variant = abcd
//   model.a = -1
//   integrator.t_end = 0.5
//
// Any key can be overridden from the environment: SWBLOW_INTEGRATOR_T_END=2
// sets integrator.t_end (the first underscore after the prefix becomes the dot).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "swblow/diagnostics.hpp"
#include "swblow/models.hpp"
#include "swblow/reduction.hpp"
#include "swblow/timestepping.hpp"

namespace swblow {

using KeyValues = std::map<std::string, std::string>;

// Throws ConfigError with the line number on malformed input or duplicate keys.
KeyValues parse_key_values(std::string_view text);
std::string serialize_key_values(const KeyValues& kv);

inline constexpr std::string_view kEnvPrefix = "SWBLOW_";

// "SWBLOW_MODEL_H_MIN" -> "model.h_min"; empty for names without the prefix.
std::string env_name_to_key(std::string_view name);

// Applies NAME=value entries that carry the prefix.
void apply_env_overrides(KeyValues& kv, const std::vector<std::string>& environment);
// Same, reading the process environment.
void apply_process_env_overrides(KeyValues& kv);

enum class InitialKind { Rest, Wave, Random, DrySpot, SignChange, Theorem3 };
std::string_view to_string(InitialKind k);
InitialKind parse_initial_kind(std::string_view name);

struct InitialConfig {
  InitialKind kind = InitialKind::Wave;
  double amplitude = 0.1;  // wave: h = 1 + amplitude cos(mode x)
  double velocity = 0.1;   // wave: u = velocity sin(mode x)
  int mode = 1;
  double steepness = 1.0;  // dryspot
  double sigma = 0.1;      // sign_change
  double beta = 0.5;       // theorem3
  double gamma = 0.5;      // theorem3
  double random_scale = 0.05;
};

enum class ScenarioKind { Theorem2, Theorem3, DrySpot };
std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Theorem2;
  double delta = 0.1;
  double horizon = 0.25;
  int max_halvings = 8;
};

struct ReduceConfig {
  JetSystem system = JetSystem::Full;
  double alpha2 = 0.0;
  double beta1 = -1.0;
  double t_end = 2.0;
  double dt = 1e-3;
};

enum class SweepMode { Simulate, Reduce };
std::string_view to_string(SweepMode m);

struct SweepConfig {
  SweepMode mode = SweepMode::Simulate;
  int workers = 0;  // 0: hardware concurrency
  // Parameter axes; empty means "use the base value".
  std::vector<double> a, b, c, d, steepness, alpha2, beta1;
  std::vector<int> n;
};

struct RunConfig {
  ModelParams model;
  int n = 128;
  IntegratorConfig integrator;
  DiagnosticsConfig diagnostics;
  InitialConfig initial;
  ScenarioConfig scenario;
  ReduceConfig reduce;
  SweepConfig sweep;
  std::string output_dir = "out";
  std::vector<int> output_modes{1, 2, 4, 8, 16};
  std::uint64_t seed = 12345;

  // Every key with its current value, in a fixed order.
  KeyValues to_key_values() const;
  // Unknown keys and unparsable values raise ConfigError.
  static RunConfig from_key_values(const KeyValues& kv);
  // Cross-field checks; throws ConfigError naming the violated condition.
  void validate() const;
};

RunConfig load_run_config(const std::string& path, bool env_overrides = true);

}  // namespace swblow

#pragma once

#include "ocular/sim/config.hpp"
#include "ocular/sim/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ocular::io {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs besides the experiment name.
struct AppConfig {
  sim::SimConfig sim;
  double noise_px = 1.0;
  std::uint64_t seed = 1;
  double settle_band = 0.05;
  sim::SaccadeParams saccade;
  sim::PursuitParams pursuit;
  sim::VergenceParams vergence;
  sim::VorParams vor;
};

/// Keys absent from the text keep their defaults. Unknown keys, wrong types
/// and values violating invariants raise ConfigError.
AppConfig parse_config(std::string_view text, std::string_view source = "<config>");
AppConfig load_config(const std::filesystem::path& path);

inline constexpr std::string_view kExperiments[] = {"saccade", "pursuit", "vergence", "vor"};

bool is_experiment(std::string_view name);

/// Scenario for one of kExperiments with the config's noise and the given seed.
/// Throws std::invalid_argument for an unknown name.
sim::Scenario build_scenario(const AppConfig& cfg, std::string_view experiment, std::uint64_t seed,
                             bool vor_disabled = false);

}  // namespace ocular::io

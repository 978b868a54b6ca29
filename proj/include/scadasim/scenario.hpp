#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scadasim/attacker.hpp"
#include "scadasim/detector.hpp"
#include "scadasim/state_space.hpp"
#include "scadasim/watermark.hpp"

namespace scadasim {

// Everything a run needs, loadable from a flat `key = value` file (see
// scenario_file_format() for the documented key list). The six
// attack-detector combinations of the experiment matrix are pure config.
struct ScenarioConfig {
    std::string name = "default";

    // plant
    StateSpaceModel plant;
    Vector initial_state;
    Vector reference;

    // watermark
    WatermarkMode watermark_mode = WatermarkMode::kStationary;
    double watermark_power_fraction = 32.0;  // base variance = fraction * Var(u*)
    std::optional<double> watermark_base_variance;  // explicit override
    double watermark_switch_probability = 0.02;
    double watermark_scale_low = 0.5;
    double watermark_scale_high = 2.0;
    Tick watermark_calibration_ticks = 2000;

    // detector
    int detector_window = 5;
    int detector_gwindow = 10;
    double detector_target_fp = 0.01;
    Tick detector_calibration_ticks = 10000;
    std::optional<double> detector_threshold;  // explicit override

    // attack
    AttackStrategy strategy = AttackStrategy::kNone;
    Tick attack_start_tick = 600;
    int fir_taps = 20;
    double fir_mu = 0.05;
    int arx_na = 2, arx_nb = 2, arx_nk = 1;
    int armax_nc = 1;

    // topology
    int plc_count = 1;
    Tick latency_ticks = 0;
    Tick controller_period_ticks = 1;
    Tick sensor_period_ticks = 1;
    Tick timeout_ticks = 10;
    std::size_t register_count = 16;
    bool real_socket = false;

    // registers
    RegisterCodec distance_codec{100.0, 0.0};
    RegisterCodec command_codec{1000.0, -32.768};

    // run
    Tick round_ticks = 1200;
    int rounds = 75;
    std::uint64_t root_seed = 42;

    void validate() const;
};

ScenarioConfig default_scenario();

// Parse `key = value` lines ('#' comments, blank lines ignored) on top of
// the defaults. Unknown keys are errors. Throws IoError with key context.
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

// Serialize a config back into the same flat format (re-parsable echo;
// resolved calibration values can be appended by the caller).
std::string scenario_to_text(const ScenarioConfig& config);

// Human-readable description of every accepted key.
std::string scenario_file_format();

// The six attack-detector combinations of the experiment matrix, derived
// from a base config (typically default_scenario()).
std::vector<ScenarioConfig> scenario_matrix(const ScenarioConfig& base);

const char* to_string(AttackStrategy s);
const char* to_string(WatermarkMode m);

}  // namespace scadasim

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scadasim/nodes.hpp"
#include "scadasim/scenario.hpp"

namespace scadasim {

struct RoundResult {
    int round_index = 0;
    std::vector<TraceRow> gt_trace;      // one row per detector update
    Tick attack_start_tick = -1;         // -1 when no attack ran
    std::optional<Tick> first_alert_tick;
    double threshold = 0.0;
    std::uint64_t fault_count = 0;
    std::uint64_t saturation_count = 0;
    bool attacker_aborted = false;
    bool aborted = false;
    std::string diagnostic;
};

// Calibration resolved once per scenario before any round runs.
struct ResolvedScenario {
    ScenarioConfig config;
    double watermark_variance = 0.0;  // base_covariance (scalar command channel)
    double threshold = 0.0;
    double control_variance = 0.0;    // Var(u*) measured attack-free
};

// Var(u*) over the steady-state half of an attack-free, watermark-disabled
// closed-loop run (seed child "wm-calib").
double calibrate_watermark_power(const ScenarioConfig& config);

// Empirical (1 - target_fp) quantile of g_t over an attack-free run with
// the configured watermark (seed child "thr-calib"). Throws when
// calibration_ticks < 100 / target_fp.
double calibrate_scenario_threshold(const ScenarioConfig& config,
                                    double watermark_variance);

// Both calibrations (explicit config overrides short-circuit them).
ResolvedScenario resolve_scenario(const ScenarioConfig& config);

// One full seeded round: fabric build, passive phase, attack, teardown.
// Round seed = child(root_seed, "round-<index>"). Module errors mark the
// round aborted with a diagnostic instead of propagating.
RoundResult run_round(const ResolvedScenario& scenario, int round_index);

// Internals shared with the harness and tests: a fully wired fabric.
struct WiredFabric {
    std::unique_ptr<Fabric> fabric;
    std::shared_ptr<ControllerNode> controller;
    std::shared_ptr<RtuNode> rtu;
    std::vector<std::shared_ptr<PlcNode>> plcs;
    std::shared_ptr<AttackerNode> attacker;  // null when strategy == none
};

WiredFabric build_fabric(const ResolvedScenario& scenario, std::uint64_t round_seed,
                         bool record_u_star = false,
                         std::optional<double> threshold_override = std::nullopt);

}  // namespace scadasim

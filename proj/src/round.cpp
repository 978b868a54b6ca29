#include "scadasim/round.hpp"

#include <cmath>
#include <limits>

#include "scadasim/errors.hpp"
#include "scadasim/riccati.hpp"

namespace scadasim {

namespace {

std::string plc_label(int index) { return "plc-" + std::to_string(index); }

}  // namespace

WiredFabric build_fabric(const ResolvedScenario& scenario, std::uint64_t round_seed,
                         bool record_u_star, std::optional<double> threshold_override) {
    const ScenarioConfig& c = scenario.config;
    c.validate();

    WiredFabric wired;
    wired.fabric = std::make_unique<Fabric>();

    const Matrix L = lqr_gain(c.plant.A, c.plant.B, c.plant.W, c.plant.U);
    const KalmanGain gain = steady_kalman_gain(c.plant.A, c.plant.C, c.plant.Q, c.plant.R);

    WatermarkConfig wm;
    wm.mode = c.watermark_mode;
    wm.base_covariance = Matrix::Constant(c.plant.m(), c.plant.m(), scenario.watermark_variance);
    wm.switch_probability = c.watermark_switch_probability;
    wm.variance_scale_low = c.watermark_scale_low;
    wm.variance_scale_high = c.watermark_scale_high;
    wm.seed = child_seed(round_seed, "watermark");

    DetectorConfig det;
    det.window = c.detector_window;
    det.gwindow = c.detector_gwindow;
    det.threshold = threshold_override.value_or(scenario.threshold);

    ControllerOptions opt;
    opt.initial_estimate = c.initial_state;
    opt.reference = c.reference;
    opt.write_period_ticks = c.controller_period_ticks;
    opt.read_period_ticks = c.sensor_period_ticks;
    opt.timeout_ticks = c.timeout_ticks;
    opt.distance_codec = c.distance_codec;
    opt.command_codec = c.command_codec;
    opt.record_u_star = record_u_star;

    wired.controller = std::make_shared<ControllerNode>(
        "controller", "rtu-0", c.plant, L, gain, wm, det, opt);
    wired.fabric->add_node(wired.controller);

    std::vector<std::string> plc_labels;
    for (int i = 0; i < c.plc_count; ++i) plc_labels.push_back(plc_label(i));
    wired.rtu = std::make_shared<RtuNode>("rtu-0", "controller", plc_labels,
                                          c.register_count);
    wired.fabric->add_node(wired.rtu);

    for (int i = 0; i < c.plc_count; ++i) {
        auto plc = std::make_shared<PlcNode>(
            plc_labels[static_cast<std::size_t>(i)], c.plant, c.initial_state,
            child_seed(round_seed, plc_labels[static_cast<std::size_t>(i)]),
            c.distance_codec, c.command_codec, c.register_count);
        wired.plcs.push_back(plc);
        wired.fabric->add_node(plc);
    }

    wired.fabric->add_channel({"controller", "rtu-0", c.latency_ticks, std::nullopt});
    // One endpoint per PLC: the per-PLC port isolation of the testbed.
    for (int i = 0; i < c.plc_count; ++i) {
        wired.fabric->add_channel(
            {"rtu-0", plc_labels[static_cast<std::size_t>(i)], c.latency_ticks, std::nullopt});
    }

    if (c.strategy != AttackStrategy::kNone) {
        AttackerConfig ac;
        ac.strategy = c.strategy;
        ac.attack_start_tick = c.attack_start_tick;
        ac.fir_taps = c.fir_taps;
        ac.fir_mu = c.fir_mu;
        ac.arx_na = c.arx_na;
        ac.arx_nb = c.arx_nb;
        ac.arx_nk = c.arx_nk;
        ac.armax_nc = c.armax_nc;
        ac.distance_codec = c.distance_codec;
        ac.command_codec = c.command_codec;
        wired.attacker = std::make_shared<AttackerNode>("attacker", ac);
        wired.fabric->add_node(wired.attacker);
        // MiM interposition on the Modbus segment of PLC 0.
        hijack(*wired.fabric, "attacker", {{"rtu-0", plc_label(0)}});
    }
    return wired;
}

double calibrate_watermark_power(const ScenarioConfig& config) {
    ScenarioConfig calib = config;
    calib.strategy = AttackStrategy::kNone;
    calib.watermark_mode = WatermarkMode::kDisabled;

    ResolvedScenario rs;
    rs.config = calib;
    rs.watermark_variance = 0.0;
    rs.threshold = std::numeric_limits<double>::infinity();

    WiredFabric wired = build_fabric(rs, child_seed(config.root_seed, "wm-calib"),
                                     /*record_u_star=*/true,
                                     std::numeric_limits<double>::infinity());
    wired.fabric->run_until(config.watermark_calibration_ticks - 1);

    const auto& u = wired.controller->u_star_history();
    if (u.size() < 4) throw ContractViolation("watermark calibration run too short");
    // Steady-state half only, skipping any regulation transient.
    const std::size_t from = u.size() / 2;
    double mean = 0.0;
    for (std::size_t i = from; i < u.size(); ++i) mean += u[i];
    mean /= static_cast<double>(u.size() - from);
    double var = 0.0;
    for (std::size_t i = from; i < u.size(); ++i) {
        var += (u[i] - mean) * (u[i] - mean);
    }
    var /= static_cast<double>(u.size() - from);
    return var;
}

double calibrate_scenario_threshold(const ScenarioConfig& config,
                                    double watermark_variance) {
    if (static_cast<double>(config.detector_calibration_ticks) <
        100.0 / config.detector_target_fp) {
        throw ContractViolation(
            "calibrate_threshold: calibration_ticks < 100/target_fp (insufficient data)");
    }
    ScenarioConfig calib = config;
    calib.strategy = AttackStrategy::kNone;

    ResolvedScenario rs;
    rs.config = calib;
    rs.watermark_variance = watermark_variance;
    rs.threshold = std::numeric_limits<double>::infinity();

    WiredFabric wired = build_fabric(rs, child_seed(config.root_seed, "thr-calib"),
                                     false, std::numeric_limits<double>::infinity());
    wired.fabric->run_until(config.detector_calibration_ticks - 1);

    std::vector<double> samples;
    samples.reserve(wired.controller->trace().size());
    for (const auto& row : wired.controller->trace()) samples.push_back(row.g);
    return calibrate_threshold(std::move(samples), config.detector_target_fp);
}

ResolvedScenario resolve_scenario(const ScenarioConfig& config) {
    config.validate();
    ResolvedScenario rs;
    rs.config = config;
    rs.control_variance = calibrate_watermark_power(config);
    if (config.watermark_mode == WatermarkMode::kDisabled) {
        rs.watermark_variance = 0.0;
    } else if (config.watermark_base_variance) {
        rs.watermark_variance = *config.watermark_base_variance;
    } else {
        rs.watermark_variance = config.watermark_power_fraction * rs.control_variance;
    }
    rs.threshold = config.detector_threshold
                       ? *config.detector_threshold
                       : calibrate_scenario_threshold(config, rs.watermark_variance);
    return rs;
}

RoundResult run_round(const ResolvedScenario& scenario, int round_index) {
    RoundResult result;
    result.round_index = round_index;
    result.threshold = scenario.threshold;
    const ScenarioConfig& c = scenario.config;
    const std::uint64_t round_seed =
        child_seed(c.root_seed, "round-" + std::to_string(round_index));
    try {
        WiredFabric wired = build_fabric(scenario, round_seed);
        wired.fabric->run_until(c.round_ticks - 1);

        result.gt_trace = wired.controller->trace();
        result.first_alert_tick = wired.controller->first_alert_tick();
        result.fault_count = wired.controller->fault_count();
        for (const auto& plc : wired.plcs) {
            result.saturation_count += plc->saturation_count();
        }
        if (c.strategy != AttackStrategy::kNone) {
            result.attack_start_tick = c.attack_start_tick;
            result.attacker_aborted = wired.attacker->aborted_to_passive();
        }
    } catch (const std::exception& e) {
        result.aborted = true;
        result.diagnostic = e.what();
    }
    return result;
}

}  // namespace scadasim

#include "scadasim/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "scadasim/errors.hpp"

namespace scadasim {

const char* to_string(AttackStrategy s) {
    switch (s) {
        case AttackStrategy::kNone: return "none";
        case AttackStrategy::kReplay: return "replay";
        case AttackStrategy::kFir: return "fir";
        case AttackStrategy::kArx: return "arx";
        case AttackStrategy::kArmax: return "armax";
    }
    return "?";
}

const char* to_string(WatermarkMode m) {
    switch (m) {
        case WatermarkMode::kDisabled: return "disabled";
        case WatermarkMode::kStationary: return "stationary";
        case WatermarkMode::kNonStationary: return "non_stationary";
    }
    return "?";
}

namespace {

AttackStrategy strategy_from(const std::string& s) {
    if (s == "none") return AttackStrategy::kNone;
    if (s == "replay") return AttackStrategy::kReplay;
    if (s == "fir") return AttackStrategy::kFir;
    if (s == "arx") return AttackStrategy::kArx;
    if (s == "armax") return AttackStrategy::kArmax;
    throw IoError("scenario: unknown attack.strategy '" + s + "'");
}

WatermarkMode mode_from(const std::string& s) {
    if (s == "disabled") return WatermarkMode::kDisabled;
    if (s == "stationary") return WatermarkMode::kStationary;
    if (s == "non_stationary") return WatermarkMode::kNonStationary;
    throw IoError("scenario: unknown watermark.mode '" + s + "'");
}

std::vector<double> parse_reals(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    double v = 0.0;
    while (in >> v) out.push_back(v);
    if (out.empty() || (!in.eof() && in.fail())) {
        throw IoError("scenario: key '" + key + "' needs space-separated numbers");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& value) {
    const auto vals = parse_reals(key, value);
    if (vals.size() != 1) throw IoError("scenario: key '" + key + "' needs one number");
    return vals[0];
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    const double v = parse_real(key, value);
    const auto i = static_cast<std::int64_t>(v);
    if (static_cast<double>(i) != v) {
        throw IoError("scenario: key '" + key + "' needs an integer");
    }
    return i;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_vec(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt(v(i));
    }
    return out;
}

std::string fmt_mat(const Matrix& m) {
    std::string out;
    bool first = true;
    for (double v : matrix_to_rows(m)) {
        if (!first) out += ' ';
        out += fmt(v);
        first = false;
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void ScenarioConfig::validate() const {
    plant.validate();
    if (initial_state.size() != plant.n() || reference.size() != plant.n()) {
        throw ContractViolation("scenario: initial_state/reference must have length n");
    }
    if (rounds < 1) throw ContractViolation("scenario: rounds must be >= 1");
    if (round_ticks < 2) throw ContractViolation("scenario: round_ticks must be >= 2");
    if (strategy != AttackStrategy::kNone && attack_start_tick >= round_ticks) {
        throw ContractViolation("scenario: attack_start_tick must be < round_ticks");
    }
    if (attack_start_tick < 0) throw ContractViolation("scenario: attack_start_tick must be >= 0");
    if (plc_count < 1) throw ContractViolation("scenario: plc_count must be >= 1");
    if (controller_period_ticks < 1 || sensor_period_ticks < 1) {
        throw ContractViolation("scenario: sampling periods must be >= 1");
    }
    if (watermark_power_fraction < 0.0) {
        throw ContractViolation("scenario: watermark.power_fraction must be >= 0");
    }
    if (detector_target_fp <= 0.0 || detector_target_fp >= 1.0) {
        throw ContractViolation("scenario: detector.target_fp must lie in (0,1)");
    }
}

ScenarioConfig default_scenario() {
    ScenarioConfig c;
    c.plant = default_model();
    c.initial_state = Vector::Zero(2);
    c.initial_state << 2.0, 0.0;
    c.reference = c.initial_state;
    return c;
}

ScenarioConfig parse_scenario_text(const std::string& text) {
    ScenarioConfig c = default_scenario();
    // Plant matrices need dimensions first; collect raw entries, shape last.
    std::map<std::string, std::vector<double>> plant_raw;
    Eigen::Index n = 2, m = 1, p = 1;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw IoError("scenario: line " + std::to_string(lineno) + " is not 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw IoError("scenario: line " + std::to_string(lineno) + " is not 'key = value'");
        }

        if (key == "scenario.name") c.name = value;
        else if (key == "plant.n") n = parse_int(key, value);
        else if (key == "plant.m") m = parse_int(key, value);
        else if (key == "plant.p") p = parse_int(key, value);
        else if (key == "plant.a" || key == "plant.b" || key == "plant.c" ||
                 key == "plant.q" || key == "plant.r" || key == "plant.w" ||
                 key == "plant.u" || key == "plant.initial_state" ||
                 key == "plant.reference") {
            plant_raw[key] = parse_reals(key, value);
        }
        else if (key == "plant.tick_seconds") c.plant.tick_seconds = parse_real(key, value);
        else if (key == "watermark.mode") c.watermark_mode = mode_from(value);
        else if (key == "watermark.power_fraction") c.watermark_power_fraction = parse_real(key, value);
        else if (key == "watermark.base_variance") c.watermark_base_variance = parse_real(key, value);
        else if (key == "watermark.switch_probability") c.watermark_switch_probability = parse_real(key, value);
        else if (key == "watermark.scale_low") c.watermark_scale_low = parse_real(key, value);
        else if (key == "watermark.scale_high") c.watermark_scale_high = parse_real(key, value);
        else if (key == "watermark.calibration_ticks") c.watermark_calibration_ticks = parse_int(key, value);
        else if (key == "detector.window") c.detector_window = static_cast<int>(parse_int(key, value));
        else if (key == "detector.gwindow") c.detector_gwindow = static_cast<int>(parse_int(key, value));
        else if (key == "detector.target_fp") c.detector_target_fp = parse_real(key, value);
        else if (key == "detector.calibration_ticks") c.detector_calibration_ticks = parse_int(key, value);
        else if (key == "detector.threshold") c.detector_threshold = parse_real(key, value);
        else if (key == "attack.strategy") c.strategy = strategy_from(value);
        else if (key == "attack.start_tick") c.attack_start_tick = parse_int(key, value);
        else if (key == "attack.fir_taps") c.fir_taps = static_cast<int>(parse_int(key, value));
        else if (key == "attack.fir_mu") c.fir_mu = parse_real(key, value);
        else if (key == "attack.arx_na") c.arx_na = static_cast<int>(parse_int(key, value));
        else if (key == "attack.arx_nb") c.arx_nb = static_cast<int>(parse_int(key, value));
        else if (key == "attack.arx_nk") c.arx_nk = static_cast<int>(parse_int(key, value));
        else if (key == "attack.armax_nc") c.armax_nc = static_cast<int>(parse_int(key, value));
        else if (key == "topology.plc_count") c.plc_count = static_cast<int>(parse_int(key, value));
        else if (key == "topology.latency_ticks") c.latency_ticks = parse_int(key, value);
        else if (key == "topology.controller_period_ticks") c.controller_period_ticks = parse_int(key, value);
        else if (key == "topology.sensor_period_ticks") c.sensor_period_ticks = parse_int(key, value);
        else if (key == "topology.timeout_ticks") c.timeout_ticks = parse_int(key, value);
        else if (key == "topology.register_count") c.register_count = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "topology.real_socket") c.real_socket = (value == "true" || value == "1");
        else if (key == "registers.distance_scale") c.distance_codec.scale = parse_real(key, value);
        else if (key == "registers.distance_offset") c.distance_codec.offset = parse_real(key, value);
        else if (key == "registers.command_scale") c.command_codec.scale = parse_real(key, value);
        else if (key == "registers.command_offset") c.command_codec.offset = parse_real(key, value);
        else if (key == "run.round_ticks") c.round_ticks = parse_int(key, value);
        else if (key == "run.rounds") c.rounds = static_cast<int>(parse_int(key, value));
        else if (key == "run.root_seed") c.root_seed = static_cast<std::uint64_t>(parse_int(key, value));
        else throw IoError("scenario: unknown key '" + key + "'");
    }

    const auto shape = [&](const char* key, Eigen::Index r, Eigen::Index cc, Matrix& out) {
        const auto it = plant_raw.find(key);
        if (it == plant_raw.end()) return;
        if (static_cast<Eigen::Index>(it->second.size()) != r * cc) {
            throw IoError(std::string("scenario: '") + key + "' needs " +
                          std::to_string(r * cc) + " row-major entries");
        }
        out = matrix_from_rows(r, cc, it->second);
    };
    shape("plant.a", n, n, c.plant.A);
    shape("plant.b", n, m, c.plant.B);
    shape("plant.c", p, n, c.plant.C);
    shape("plant.q", n, n, c.plant.Q);
    shape("plant.r", p, p, c.plant.R);
    shape("plant.w", n, n, c.plant.W);
    shape("plant.u", m, m, c.plant.U);
    if (const auto it = plant_raw.find("plant.initial_state"); it != plant_raw.end()) {
        c.initial_state = Eigen::Map<const Vector>(it->second.data(),
                                                   static_cast<Eigen::Index>(it->second.size()));
    }
    if (const auto it = plant_raw.find("plant.reference"); it != plant_raw.end()) {
        c.reference = Eigen::Map<const Vector>(it->second.data(),
                                               static_cast<Eigen::Index>(it->second.size()));
    }

    c.validate();
    return c;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string scenario_to_text(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "scenario.name = " << c.name << "\n";
    out << "plant.n = " << c.plant.n() << "\n";
    out << "plant.m = " << c.plant.m() << "\n";
    out << "plant.p = " << c.plant.p() << "\n";
    out << "plant.a = " << fmt_mat(c.plant.A) << "\n";
    out << "plant.b = " << fmt_mat(c.plant.B) << "\n";
    out << "plant.c = " << fmt_mat(c.plant.C) << "\n";
    out << "plant.q = " << fmt_mat(c.plant.Q) << "\n";
    out << "plant.r = " << fmt_mat(c.plant.R) << "\n";
    out << "plant.w = " << fmt_mat(c.plant.W) << "\n";
    out << "plant.u = " << fmt_mat(c.plant.U) << "\n";
    out << "plant.tick_seconds = " << fmt(c.plant.tick_seconds) << "\n";
    out << "plant.initial_state = " << fmt_vec(c.initial_state) << "\n";
    out << "plant.reference = " << fmt_vec(c.reference) << "\n";
    out << "watermark.mode = " << to_string(c.watermark_mode) << "\n";
    out << "watermark.power_fraction = " << fmt(c.watermark_power_fraction) << "\n";
    if (c.watermark_base_variance) {
        out << "watermark.base_variance = " << fmt(*c.watermark_base_variance) << "\n";
    }
    out << "watermark.switch_probability = " << fmt(c.watermark_switch_probability) << "\n";
    out << "watermark.scale_low = " << fmt(c.watermark_scale_low) << "\n";
    out << "watermark.scale_high = " << fmt(c.watermark_scale_high) << "\n";
    out << "watermark.calibration_ticks = " << c.watermark_calibration_ticks << "\n";
    out << "detector.window = " << c.detector_window << "\n";
    out << "detector.gwindow = " << c.detector_gwindow << "\n";
    out << "detector.target_fp = " << fmt(c.detector_target_fp) << "\n";
    out << "detector.calibration_ticks = " << c.detector_calibration_ticks << "\n";
    if (c.detector_threshold) {
        out << "detector.threshold = " << fmt(*c.detector_threshold) << "\n";
    }
    out << "attack.strategy = " << to_string(c.strategy) << "\n";
    out << "attack.start_tick = " << c.attack_start_tick << "\n";
    out << "attack.fir_taps = " << c.fir_taps << "\n";
    out << "attack.fir_mu = " << fmt(c.fir_mu) << "\n";
    out << "attack.arx_na = " << c.arx_na << "\n";
    out << "attack.arx_nb = " << c.arx_nb << "\n";
    out << "attack.arx_nk = " << c.arx_nk << "\n";
    out << "attack.armax_nc = " << c.armax_nc << "\n";
    out << "topology.plc_count = " << c.plc_count << "\n";
    out << "topology.latency_ticks = " << c.latency_ticks << "\n";
    out << "topology.controller_period_ticks = " << c.controller_period_ticks << "\n";
    out << "topology.sensor_period_ticks = " << c.sensor_period_ticks << "\n";
    out << "topology.timeout_ticks = " << c.timeout_ticks << "\n";
    out << "topology.register_count = " << c.register_count << "\n";
    out << "topology.real_socket = " << (c.real_socket ? "true" : "false") << "\n";
    out << "registers.distance_scale = " << fmt(c.distance_codec.scale) << "\n";
    out << "registers.distance_offset = " << fmt(c.distance_codec.offset) << "\n";
    out << "registers.command_scale = " << fmt(c.command_codec.scale) << "\n";
    out << "registers.command_offset = " << fmt(c.command_codec.offset) << "\n";
    out << "run.round_ticks = " << c.round_ticks << "\n";
    out << "run.rounds = " << c.rounds << "\n";
    out << "run.root_seed = " << c.root_seed << "\n";
    return out.str();
}

std::string scenario_file_format() {
    return
        "Scenario files are flat 'key = value' text; '#' starts a comment.\n"
        "Matrices are space-separated row-major entries shaped by plant.n/m/p\n"
        "(declare dimensions before or alongside the matrices; defaults 2/1/1).\n"
        "Accepted keys and defaults: see the output of scenario_to_text() on\n"
        "the default configuration (every key shown there is accepted).\n";
}

std::vector<ScenarioConfig> scenario_matrix(const ScenarioConfig& base) {
    std::vector<ScenarioConfig> out;
    const auto add = [&](const char* name, AttackStrategy s, WatermarkMode m) {
        ScenarioConfig c = base;
        c.name = name;
        c.strategy = s;
        c.watermark_mode = m;
        out.push_back(std::move(c));
    };
    add("replay_watermark_disabled", AttackStrategy::kReplay, WatermarkMode::kDisabled);
    add("replay_watermark_stationary", AttackStrategy::kReplay, WatermarkMode::kStationary);
    add("nonparametric_stationary", AttackStrategy::kFir, WatermarkMode::kStationary);
    add("nonparametric_non_stationary", AttackStrategy::kFir, WatermarkMode::kNonStationary);
    add("parametric_stationary", AttackStrategy::kArx, WatermarkMode::kStationary);
    add("parametric_non_stationary", AttackStrategy::kArx, WatermarkMode::kNonStationary);
    return out;
}

}  // namespace scadasim

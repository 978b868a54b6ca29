#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "scadasim/detector.hpp"
#include "scadasim/fabric.hpp"
#include "scadasim/kalman.hpp"
#include "scadasim/registers.hpp"
#include "scadasim/rtu.hpp"
#include "scadasim/watermark.hpp"

namespace scadasim {

inline constexpr std::uint16_t kControllerAddress = 0xF0;

struct TraceRow {
    Tick t;
    double g;
    std::int64_t risk;
    std::int64_t alert;
};

// PLC: owns the true plant, its registers and the Modbus slave behavior.
// Physics advance at tick end: the standing command register drives one
// plant step, then the fresh measurement lands in the distance register.
// Slaves never initiate traffic.
class PlcNode : public Node {
 public:
    PlcNode(std::string label, const StateSpaceModel& model, Vector initial_state,
            std::uint64_t seed, RegisterCodec distance_codec, RegisterCodec command_codec,
            std::size_t register_count = 16);

    const NodeId& id() const override { return id_; }
    void on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) override;
    void on_tick_end(Fabric& fabric, Tick t) override;

    const RegisterMap& registers() const { return registers_; }
    const PlantState& plant_state() const { return state_; }
    std::uint64_t saturation_count() const { return saturation_count_; }
    std::uint64_t dropped_frames() const { return dropped_frames_; }

 private:
    NodeId id_;
    StateSpaceModel model_;
    PlantState state_;
    GaussianSource process_noise_;
    GaussianSource measure_noise_;
    RegisterMap registers_;
    RegisterCodec distance_codec_;
    RegisterCodec command_codec_;
    std::uint64_t saturation_count_ = 0;
    std::uint64_t dropped_frames_ = 0;
};

// RTU: proxy between the controller's DNP3 leg and per-PLC Modbus legs.
// Holds the configured point map of each PLC (the register span), assigns
// Modbus transaction ids and translates responses back.
class RtuNode : public Node {
 public:
    RtuNode(std::string label, std::string controller_label,
            std::vector<std::string> plc_labels, std::size_t register_count = 16);

    const NodeId& id() const override { return id_; }
    void on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) override;

    std::uint64_t dropped_frames() const { return dropped_frames_; }

 private:
    struct PendingRequest {
        std::uint16_t transaction_id;
        std::uint16_t dnp3_destination;  // original request destination (PLC address)
        std::uint16_t dnp3_source;       // original request source (controller)
    };

    NodeId id_;
    std::string controller_label_;
    std::vector<std::string> plc_labels_;
    RegisterMap point_map_;   // RTU's knowledge of each PLC's register span
    std::uint16_t next_tx_ = 1;
    std::deque<PendingRequest> pending_;
    std::uint64_t dropped_frames_ = 0;
};

struct ControllerOptions {
    Vector initial_estimate;        // x̂ at tick 0
    Vector reference;               // regulation setpoint
    Tick write_period_ticks = 1;    // controller_period
    Tick read_period_ticks = 1;     // sensor_period
    Tick timeout_ticks = 10;
    RegisterCodec distance_codec;
    RegisterCodec command_codec;
    bool record_u_star = false;     // capture the feedback command (calibration)
};

// MTU/controller: runs the master-slave poll cycle (reads on sensor ticks,
// watermarked writes on controller ticks), the steady-state Kalman filter
// and the χ² detector. All its randomness is the watermark stream.
class ControllerNode : public Node {
 public:
    ControllerNode(std::string label, std::string rtu_label,
                   const StateSpaceModel& model, Matrix lqr_gain, KalmanGain kalman,
                   const WatermarkConfig& watermark, DetectorConfig detector,
                   ControllerOptions options);

    const NodeId& id() const override { return id_; }
    void on_tick_start(Fabric& fabric, Tick t) override;
    void on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) override;

    const std::vector<TraceRow>& trace() const { return trace_; }
    const std::vector<double>& u_star_history() const { return u_star_history_; }
    std::optional<Tick> first_alert_tick() const { return first_alert_tick_; }
    std::uint64_t fault_count() const { return fault_count_; }
    std::uint64_t slave_initiated_frames() const { return unsolicited_; }
    std::int64_t detector_updates() const { return detector_updates_; }

 private:
    void send_read(Fabric& fabric, Tick t);
    void send_write(Fabric& fabric, Tick t);
    void handle_read_values(const std::vector<std::uint16_t>& values, Tick t_meas);
    const Vector& u_eff_at(Tick t) const;

    NodeId id_;
    std::string rtu_label_;
    StateSpaceModel model_;
    Matrix lqr_gain_;
    KalmanGain kalman_;
    WatermarkConfig wm_config_;
    WatermarkState wm_state_;
    DetectorConfig det_config_;
    DetectorState det_state_;
    ControllerOptions opt_;

    Vector x_hat_;
    Tick t_ref_ = 0;                 // tick x_hat_ refers to
    Vector u_standing_;
    std::vector<Vector> u_eff_by_tick_;

    struct PendingPoll {
        Dnp3Function kind;
        Tick sent_tick;
    };
    std::deque<PendingPoll> pending_;

    std::vector<TraceRow> trace_;
    std::vector<double> u_star_history_;
    std::optional<Tick> first_alert_tick_;
    std::uint64_t fault_count_ = 0;
    std::uint64_t unsolicited_ = 0;
    std::int64_t detector_updates_ = 0;
};

}  // namespace scadasim

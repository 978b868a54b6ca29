#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scadasim/fabric.hpp"
#include "scadasim/modbus.hpp"
#include "scadasim/registers.hpp"
#include "scadasim/state_space.hpp"

namespace scadasim {

enum class AttackStrategy { kNone, kReplay, kFir, kArx, kArmax };
enum class CaptureDirection { kToPlant, kToController };

struct CaptureEntry {
    Tick tick;
    CaptureDirection direction;
    double value;        // decoded u (to_plant) or y (to_controller)
    std::uint16_t reg;   // raw register value as it rode the wire
    Bytes raw_frame;
};

// Eavesdropped traffic, ordered by capture time. The tick-indexed views are
// what the identification routines consume.
class CaptureLog {
 public:
    void record(CaptureEntry entry);

    const std::vector<CaptureEntry>& entries() const { return entries_; }
    // u_t / y_t keyed by tick (one sample per tick under mono-rate polling).
    const std::map<Tick, double>& commands() const { return commands_; }
    const std::map<Tick, double>& measurements() const { return measurements_; }

 private:
    std::vector<CaptureEntry> entries_;
    std::map<Tick, double> commands_;
    std::map<Tick, double> measurements_;
};

// ------------------------------------------------------------ FIR / LMS

struct FirModel {
    std::vector<double> taps;          // impulse-response estimate, length T
    double mu = 0.05;                  // LMS step
    std::deque<double> input_history;  // u_{t-1} .. u_{t-T} (front = newest)
    double tap_norm_cap = 1e3;
    int mu_halvings = 0;               // divergence-guard activations

    explicit FirModel(int taps_count = 20, double mu_step = 0.05);

    double predict() const;  // taps · input_history
};

// One LMS step on the (u_t, y_t) pair: ŷ = taps·history (history holds
// u_{t-1}..u_{t-T}), e = y_observed - ŷ, taps += mu·e·history; afterwards
// u_observed enters the history. Updates are skipped until the history is
// full. If ||taps|| exceeds the cap, mu is halved (guard counter increments).
void fir_identify_step(FirModel& model, double u_observed, double y_observed);

// ------------------------------------------------------------ ARX / ARMAX

struct ArxModel {
    int na = 2, nb = 1, nk = 1;
    Vector theta;  // [a_1..a_na, b_1..b_nb]
};

struct ArmaxModel {
    int na = 2, nb = 1, nc = 1, nk = 1;
    Vector theta;  // [a_1..a_na, b_1..b_nb, c_1..c_nc]
    bool fell_back_to_arx = false;  // ELS failed to converge
};

// Least squares over φ_t = [-y_{t-1..t-na}, u_{t-nk..t-nk-nb+1}] with ridge
// 1e-9. Throws IdentificationError on insufficient data or a regressor with
// no excitation.
ArxModel arx_fit(const std::vector<double>& u, const std::vector<double>& y,
                 int na, int nb, int nk);

// Extended least squares: noise regressors re-estimated from residuals until
// the estimate moves < 1e-8 or 100 passes; falls back to the ARX estimate
// (flagged) when the iteration does not settle. nc = 0 reduces to arx_fit.
ArmaxModel armax_fit(const std::vector<double>& u, const std::vector<double>& y,
                     int na, int nb, int nc, int nk);

// CaptureLog fronts for the same fits (series are the tick-aligned u/y).
ArxModel arx_identify(const CaptureLog& capture, int na, int nb, int nk);
ArmaxModel armax_identify(const CaptureLog& capture, int na, int nb, int nc, int nk);

// ------------------------------------------------------------ attacker node

struct AttackerConfig {
    AttackStrategy strategy = AttackStrategy::kReplay;
    Tick attack_start_tick = 600;
    int fir_taps = 20;
    double fir_mu = 0.05;
    int arx_na = 2, arx_nb = 2, arx_nk = 1;
    int armax_nc = 1;
    RegisterCodec distance_codec;
    RegisterCodec command_codec;
};

// Man-in-the-middle on the Modbus segment. Passive until attack_start_tick:
// forwards every frame byte-identical while eavesdropping u (write requests)
// and y (read responses). Active: forges the measurement payload per the
// strategy and holds the plant-side command at the last pre-attack value.
// Session fields (transaction id, unit) of forged frames always mirror the
// live frame so they validate at the receiver.
class AttackerNode : public Node {
 public:
    AttackerNode(std::string label, AttackerConfig config);

    const NodeId& id() const override { return id_; }
    void on_tick_start(Fabric& fabric, Tick t) override;
    void on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) override;
    void on_tapped_frame(Fabric& fabric, const std::string& src, const std::string& dst,
                         const Bytes& bytes) override;

    // Forged replacement for a live read response, or nullopt to pass the
    // frame through unchanged. Exposed for direct testing.
    std::optional<ModbusFrame> forge_read_response(const ModbusFrame& live, Tick t);

    bool active() const { return active_; }
    const CaptureLog& capture() const { return capture_; }
    std::uint64_t forwarded_frames() const { return forwarded_; }
    std::uint64_t undecodable_frames() const { return undecodable_; }
    bool aborted_to_passive() const { return aborted_to_passive_; }
    const FirModel& fir() const { return fir_; }
    const std::optional<ArxModel>& arx() const { return arx_; }
    const std::optional<ArmaxModel>& armax() const { return armax_; }

 private:
    void activate();
    double live_command(Tick t) const;

    NodeId id_;
    AttackerConfig cfg_;
    bool active_ = false;
    bool aborted_to_passive_ = false;
    CaptureLog capture_;
    FirModel fir_;
    std::optional<ArxModel> arx_;
    std::optional<ArmaxModel> armax_;

    std::map<Tick, double> live_u_;       // all commands seen, passive and active
    std::vector<double> forge_centered_;  // AR feedback of own forged outputs
    std::optional<double> pending_u_;     // this tick's command, awaiting its y
    double y_mean_ = 0.0, u_mean_ = 0.0;
    double sum_y_ = 0.0, sum_u_ = 0.0;
    std::size_t n_y_ = 0, n_u_ = 0;
    std::uint16_t last_command_reg_ = 0;  // raw register of the newest command
    std::vector<Bytes> replay_payloads_;  // captured response payloads, tick order
    std::size_t replay_cursor_ = 0;
    std::uint64_t forwarded_ = 0;
    std::uint64_t undecodable_ = 0;
};

// ARP-poisoning stand-in: route both directions of the listed channels
// through the attacker; the attacker starts (or stays) passive.
void hijack(Fabric& fabric, const std::string& attacker_label,
            const std::vector<std::pair<std::string, std::string>>& channels);

}  // namespace scadasim

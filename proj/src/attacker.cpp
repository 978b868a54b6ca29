#include "scadasim/attacker.hpp"

#include <algorithm>
#include <cmath>

#include "scadasim/errors.hpp"

namespace scadasim {

// ------------------------------------------------------------ CaptureLog

void CaptureLog::record(CaptureEntry entry) {
    if (!entries_.empty() && entry.tick < entries_.back().tick) {
        throw ContractViolation("capture: ticks must be non-decreasing");
    }
    if (entry.direction == CaptureDirection::kToPlant) {
        commands_[entry.tick] = entry.value;
    } else {
        measurements_[entry.tick] = entry.value;
    }
    entries_.push_back(std::move(entry));
}

// ------------------------------------------------------------ FIR / LMS

FirModel::FirModel(int taps_count, double mu_step) : mu(mu_step) {
    if (taps_count < 1) throw ContractViolation("fir: need at least one tap");
    if (mu_step < 0.0) throw ContractViolation("fir: mu must be >= 0");
    taps.assign(static_cast<std::size_t>(taps_count), 0.0);
}

double FirModel::predict() const {
    double acc = 0.0;
    const std::size_t n = std::min(taps.size(), input_history.size());
    for (std::size_t k = 0; k < n; ++k) {
        acc += taps[k] * input_history[k];
    }
    return acc;
}

void fir_identify_step(FirModel& model, double u_observed, double y_observed) {
    if (model.input_history.size() >= model.taps.size()) {
        const double error = y_observed - model.predict();
        for (std::size_t k = 0; k < model.taps.size(); ++k) {
            model.taps[k] += model.mu * error * model.input_history[k];
        }
        double norm_sq = 0.0;
        for (double tap : model.taps) norm_sq += tap * tap;
        if (std::sqrt(norm_sq) > model.tap_norm_cap) {
            model.mu *= 0.5;
            ++model.mu_halvings;
        }
    }
    model.input_history.push_front(u_observed);
    if (model.input_history.size() > model.taps.size()) {
        model.input_history.pop_back();
    }
}

// ------------------------------------------------------------ ARX / ARMAX

namespace {

constexpr double kRidge = 1e-9;

Vector solve_normal_equations(const std::vector<std::vector<double>>& rows,
                              const std::vector<double>& targets) {
    const auto dim = static_cast<Eigen::Index>(rows.front().size());
    Matrix gram = Matrix::Zero(dim, dim);
    Vector rhs = Vector::Zero(dim);
    double excitation = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Eigen::Map<const Vector> phi(rows[i].data(), dim);
        gram.noalias() += phi * phi.transpose();
        rhs.noalias() += phi * targets[i];
        excitation += phi.squaredNorm();
    }
    if (excitation / static_cast<double>(rows.size()) < 1e-20) {
        throw IdentificationError("identify: regressor carries no excitation");
    }
    gram += kRidge * Matrix::Identity(dim, dim);
    const Vector theta = gram.ldlt().solve(rhs);
    if (!theta.allFinite()) {
        throw IdentificationError("identify: rank-deficient regressor beyond ridge rescue");
    }
    return theta;
}

void check_fit_preconditions(const std::vector<double>& u, const std::vector<double>& y,
                             int na, int nb, int nk, int nc) {
    if (na < 0 || nb < 0 || nk < 0 || nc < 0 || na + nb + nc < 1) {
        throw ContractViolation("identify: invalid model orders");
    }
    if (u.size() != y.size()) {
        throw ContractViolation("identify: u and y series must be aligned");
    }
    const std::size_t need = 10 * static_cast<std::size_t>(na + nb + nc);
    if (y.size() < std::max<std::size_t>(need, 2)) {
        throw IdentificationError("identify: capture too short for requested orders");
    }
}

}  // namespace

ArxModel arx_fit(const std::vector<double>& u, const std::vector<double>& y,
                 int na, int nb, int nk) {
    check_fit_preconditions(u, y, na, nb, nk, 0);
    const std::size_t start = static_cast<std::size_t>(std::max(na, nb + nk - 1));
    if (y.size() <= start) {
        throw IdentificationError("identify: capture too short for requested orders");
    }
    std::vector<std::vector<double>> rows;
    std::vector<double> targets;
    for (std::size_t i = start; i < y.size(); ++i) {
        std::vector<double> phi;
        phi.reserve(static_cast<std::size_t>(na + nb));
        for (int j = 1; j <= na; ++j) phi.push_back(-y[i - static_cast<std::size_t>(j)]);
        for (int j = 0; j < nb; ++j) phi.push_back(u[i - static_cast<std::size_t>(nk + j)]);
        rows.push_back(std::move(phi));
        targets.push_back(y[i]);
    }
    ArxModel model;
    model.na = na;
    model.nb = nb;
    model.nk = nk;
    model.theta = solve_normal_equations(rows, targets);
    return model;
}

ArmaxModel armax_fit(const std::vector<double>& u, const std::vector<double>& y,
                     int na, int nb, int nc, int nk) {
    check_fit_preconditions(u, y, na, nb, nk, nc);
    const ArxModel arx = arx_fit(u, y, na, nb, nk);
    ArmaxModel model;
    model.na = na;
    model.nb = nb;
    model.nc = nc;
    model.nk = nk;
    if (nc == 0) {
        model.theta = arx.theta;
        return model;
    }

    const std::size_t start = static_cast<std::size_t>(std::max({na, nb + nk - 1, nc}));
    if (y.size() <= start) {
        throw IdentificationError("identify: capture too short for requested orders");
    }

    // Residuals of a candidate theta; noise regressors taken from `resid`.
    std::vector<double> resid(y.size(), 0.0);
    const auto residuals_of = [&](const Vector& theta, bool with_noise_terms) {
        std::vector<double> out(y.size(), 0.0);
        for (std::size_t i = start; i < y.size(); ++i) {
            double pred = 0.0;
            int idx = 0;
            for (int j = 1; j <= na; ++j) {
                pred += theta(idx++) * -y[i - static_cast<std::size_t>(j)];
            }
            for (int j = 0; j < nb; ++j) {
                pred += theta(idx++) * u[i - static_cast<std::size_t>(nk + j)];
            }
            if (with_noise_terms) {
                for (int j = 1; j <= nc; ++j) {
                    pred += theta(idx++) * resid[i - static_cast<std::size_t>(j)];
                }
            }
            out[i] = y[i] - pred;
        }
        return out;
    };
    resid = residuals_of(arx.theta, false);

    Vector theta = Vector::Zero(na + nb + nc);
    theta.head(na + nb) = arx.theta;
    bool converged = false;
    for (int pass = 0; pass < 100; ++pass) {
        std::vector<std::vector<double>> rows;
        std::vector<double> targets;
        for (std::size_t i = start; i < y.size(); ++i) {
            std::vector<double> phi;
            phi.reserve(static_cast<std::size_t>(na + nb + nc));
            for (int j = 1; j <= na; ++j) phi.push_back(-y[i - static_cast<std::size_t>(j)]);
            for (int j = 0; j < nb; ++j) phi.push_back(u[i - static_cast<std::size_t>(nk + j)]);
            for (int j = 1; j <= nc; ++j) phi.push_back(resid[i - static_cast<std::size_t>(j)]);
            rows.push_back(std::move(phi));
            targets.push_back(y[i]);
        }
        Vector next;
        try {
            next = solve_normal_equations(rows, targets);
        } catch (const IdentificationError&) {
            break;  // fall back to the ARX estimate below
        }
        const double delta = (next - theta).norm();
        theta = next;
        resid = residuals_of(theta, true);
        if (delta < 1e-8) {
            converged = true;
            break;
        }
    }
    if (!converged || !theta.allFinite()) {
        model.theta = Vector::Zero(na + nb + nc);
        model.theta.head(na + nb) = arx.theta;
        model.fell_back_to_arx = true;
        return model;
    }
    model.theta = theta;
    return model;
}

namespace {

// Aligned (u, y) series from a tick-indexed capture: ticks present in both.
std::pair<std::vector<double>, std::vector<double>> aligned_series(const CaptureLog& capture) {
    std::vector<double> u;
    std::vector<double> y;
    for (const auto& [tick, yv] : capture.measurements()) {
        const auto it = capture.commands().find(tick);
        if (it != capture.commands().end()) {
            y.push_back(yv);
            u.push_back(it->second);
        }
    }
    return {std::move(u), std::move(y)};
}

}  // namespace

ArxModel arx_identify(const CaptureLog& capture, int na, int nb, int nk) {
    auto [u, y] = aligned_series(capture);
    return arx_fit(u, y, na, nb, nk);
}

ArmaxModel armax_identify(const CaptureLog& capture, int na, int nb, int nc, int nk) {
    auto [u, y] = aligned_series(capture);
    return armax_fit(u, y, na, nb, nc, nk);
}

// ---------------------------------------------------------- AttackerNode

AttackerNode::AttackerNode(std::string label, AttackerConfig config)
    : id_{std::move(label), NodeRole::kAttacker},
      cfg_(config),
      fir_(config.fir_taps, config.fir_mu) {}

void AttackerNode::on_tick_start(Fabric&, Tick t) {
    if (!active_ && !aborted_to_passive_ && cfg_.strategy != AttackStrategy::kNone &&
        t == cfg_.attack_start_tick) {
        activate();
    }
}

void AttackerNode::on_frame(Fabric&, const std::string&, const Bytes&) {
    // Nothing addresses the attacker directly; interposition only.
}

void AttackerNode::activate() {
    if (capture_.measurements().empty() || capture_.commands().empty()) {
        aborted_to_passive_ = true;  // nothing captured to work with
        return;
    }
    y_mean_ = sum_y_ / static_cast<double>(n_y_);
    u_mean_ = sum_u_ / static_cast<double>(n_u_);

    switch (cfg_.strategy) {
        case AttackStrategy::kReplay:
            if (replay_payloads_.empty()) {
                aborted_to_passive_ = true;
                return;
            }
            replay_cursor_ = 0;
            break;
        case AttackStrategy::kArx:
        case AttackStrategy::kArmax: {
            std::vector<double> u_c;
            std::vector<double> y_c;
            for (const auto& [tick, yv] : capture_.measurements()) {
                const auto it = capture_.commands().find(tick);
                if (it == capture_.commands().end()) continue;
                y_c.push_back(yv - y_mean_);
                u_c.push_back(it->second - u_mean_);
            }
            try {
                if (cfg_.strategy == AttackStrategy::kArx) {
                    arx_ = arx_fit(u_c, y_c, cfg_.arx_na, cfg_.arx_nb, cfg_.arx_nk);
                } else {
                    const ArmaxModel m =
                        armax_fit(u_c, y_c, cfg_.arx_na, cfg_.arx_nb, cfg_.armax_nc, cfg_.arx_nk);
                    armax_ = m;
                    // Forging runs the deterministic part of the model; future
                    // noise innovations are unknowable to the attacker.
                    arx_ = ArxModel{m.na, m.nb, m.nk, m.theta.head(m.na + m.nb)};
                }
            } catch (const IdentificationError&) {
                aborted_to_passive_ = true;
                return;
            }
            // Seed the AR feedback with the freshest real outputs.
            std::vector<double> tail;
            auto it = capture_.measurements().rbegin();
            for (int i = 0; i < std::max(cfg_.arx_na, 1) &&
                            it != capture_.measurements().rend();
                 ++i, ++it) {
                tail.push_back(it->second - y_mean_);
            }
            forge_centered_.assign(tail.rbegin(), tail.rend());
            break;
        }
        case AttackStrategy::kFir:
        case AttackStrategy::kNone:
            break;
    }
    active_ = true;
}

double AttackerNode::live_command(Tick t) const {
    // Most recent command at or before tick t.
    auto it = live_u_.upper_bound(t);
    if (it == live_u_.begin()) return u_mean_;
    --it;
    return it->second;
}

std::optional<ModbusFrame> AttackerNode::forge_read_response(const ModbusFrame& live, Tick t) {
    const auto values = parse_read_response(live);
    if (!values || values.value().size() <= kDistanceRegister) return std::nullopt;

    switch (cfg_.strategy) {
        case AttackStrategy::kReplay: {
            ModbusFrame out = live;  // live session header, captured payload
            out.payload = replay_payloads_[replay_cursor_ % replay_payloads_.size()];
            ++replay_cursor_;
            return out;
        }
        case AttackStrategy::kFir: {
            double acc = 0.0;
            for (std::size_t k = 0; k < fir_.taps.size(); ++k) {
                acc += fir_.taps[k] * (live_command(t - 1 - static_cast<Tick>(k)) - u_mean_);
            }
            std::vector<std::uint16_t> forged = values.value();
            forged[kDistanceRegister] = cfg_.distance_codec.encode(y_mean_ + acc);
            return make_read_response(live.transaction_id, live.unit_id, forged);
        }
        case AttackStrategy::kArx:
        case AttackStrategy::kArmax: {
            if (!arx_) return std::nullopt;
            double acc = 0.0;
            int idx = 0;
            for (int j = 1; j <= arx_->na; ++j) {
                const auto k = static_cast<std::ptrdiff_t>(forge_centered_.size()) - j;
                acc += arx_->theta(idx++) *
                       -(k >= 0 ? forge_centered_[static_cast<std::size_t>(k)] : 0.0);
            }
            for (int j = 0; j < arx_->nb; ++j) {
                acc += arx_->theta(idx++) * (live_command(t - (arx_->nk + j)) - u_mean_);
            }
            forge_centered_.push_back(acc);
            std::vector<std::uint16_t> forged = values.value();
            forged[kDistanceRegister] = cfg_.distance_codec.encode(y_mean_ + acc);
            return make_read_response(live.transaction_id, live.unit_id, forged);
        }
        case AttackStrategy::kNone:
            return std::nullopt;
    }
    return std::nullopt;
}

void AttackerNode::on_tapped_frame(Fabric& fabric, const std::string& src,
                                   const std::string& dst, const Bytes& bytes) {
    const Tick t = fabric.now();
    const bool to_plant = fabric.node(dst).id().role == NodeRole::kPlc;

    const auto decoded = decode_modbus(bytes);
    if (!decoded) {
        ++undecodable_;
        ++forwarded_;
        fabric.deliver_direct(src, dst, bytes);
        return;
    }
    const ModbusFrame& frame = decoded.value();

    if (to_plant && frame.function_code == modbus_fc::kWriteMultiple) {
        const auto write = parse_write_request(frame);
        const bool covers_command =
            write && write.value().address <= kCommandRegister &&
            write.value().address + write.value().values.size() > kCommandRegister;
        if (covers_command) {
            const std::size_t offset = kCommandRegister - write.value().address;
            const std::uint16_t reg = write.value().values[offset];
            const double u = cfg_.command_codec.decode(reg);
            live_u_[t] = u;
            if (active_) {
                // Plant side: hold the last pre-attack command.
                std::vector<std::uint16_t> held = write.value().values;
                held[offset] = last_command_reg_;
                const ModbusFrame out = make_write_request(frame.transaction_id, frame.unit_id,
                                                           write.value().address, held);
                ++forwarded_;
                fabric.deliver_direct(src, dst, encode_modbus(out));
                return;
            }
            capture_.record({t, CaptureDirection::kToPlant, u, reg, bytes});
            last_command_reg_ = reg;
            sum_u_ += u;
            ++n_u_;
            pending_u_ = u;
        }
        ++forwarded_;
        fabric.deliver_direct(src, dst, bytes);
        return;
    }

    if (!to_plant && frame.function_code == modbus_fc::kReadHolding) {
        const auto values = parse_read_response(frame);
        if (values && values.value().size() > kDistanceRegister) {
            if (active_) {
                const auto forged = forge_read_response(frame, t);
                if (forged) {
                    ++forwarded_;
                    fabric.deliver_direct(src, dst, encode_modbus(*forged));
                    return;
                }
            } else {
                const std::uint16_t reg = values.value()[kDistanceRegister];
                const double y = cfg_.distance_codec.decode(reg);
                capture_.record({t, CaptureDirection::kToController, y, reg, bytes});
                replay_payloads_.push_back(frame.payload);
                sum_y_ += y;
                ++n_y_;
                if (cfg_.strategy == AttackStrategy::kFir && pending_u_) {
                    fir_identify_step(fir_, *pending_u_ - sum_u_ / static_cast<double>(n_u_),
                                      y - sum_y_ / static_cast<double>(n_y_));
                    pending_u_.reset();
                }
            }
        }
        ++forwarded_;
        fabric.deliver_direct(src, dst, bytes);
        return;
    }

    // Read requests, write acknowledgements, exceptions: pass through.
    ++forwarded_;
    fabric.deliver_direct(src, dst, bytes);
}

void hijack(Fabric& fabric, const std::string& attacker_label,
            const std::vector<std::pair<std::string, std::string>>& channels) {
    for (const auto& [a, b] : channels) {
        fabric.attach_tap(a, b, attacker_label);
    }
}

}  // namespace scadasim

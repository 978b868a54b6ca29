#include "scadasim/nodes.hpp"

#include "scadasim/errors.hpp"

namespace scadasim {

// ---------------------------------------------------------------- PlcNode

PlcNode::PlcNode(std::string label, const StateSpaceModel& model, Vector initial_state,
                 std::uint64_t seed, RegisterCodec distance_codec,
                 RegisterCodec command_codec, std::size_t register_count)
    : id_{std::move(label), NodeRole::kPlc},
      model_(model),
      state_{std::move(initial_state), 0},
      process_noise_(GaussianSource::zero_mean(model.Q, child_seed(seed, "plant-process"))),
      measure_noise_(GaussianSource::zero_mean(model.R, child_seed(seed, "plant-measure"))),
      registers_(register_count),
      distance_codec_(distance_codec),
      command_codec_(command_codec) {
    model_.validate();
    if (state_.x.size() != model_.n()) {
        throw ContractViolation("plc: initial state has wrong length");
    }
    // Neutral command, initial measurement available before the first poll.
    registers_.write(kCommandRegister, command_codec_.encode(0.0));
    const Vector y0 = measure(model_, state_, measure_noise_);
    registers_.write(kDistanceRegister, distance_codec_.encode(y0(0), &saturation_count_));
}

void PlcNode::on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) {
    const auto decoded = decode_modbus(bytes);
    if (!decoded) {
        ++dropped_frames_;  // garbage on the wire; a slave stays silent
        return;
    }
    const ModbusFrame& req = decoded.value();
    if (req.function_code == modbus_fc::kReadHolding) {
        const auto read = parse_read_request(req);
        if (!read || !registers_.in_range(read.value().address, read.value().quantity)) {
            fabric.send(id_.label, from,
                        encode_modbus(make_exception(req.transaction_id, req.unit_id,
                                                     req.function_code, 0x02)));
            return;
        }
        const auto values = registers_.read_span(read.value().address, read.value().quantity);
        fabric.send(id_.label, from,
                    encode_modbus(make_read_response(req.transaction_id, req.unit_id, values)));
        return;
    }
    if (req.function_code == modbus_fc::kWriteMultiple) {
        const auto write = parse_write_request(req);
        if (!write ||
            !registers_.in_range(write.value().address,
                                 static_cast<std::uint16_t>(write.value().values.size()))) {
            fabric.send(id_.label, from,
                        encode_modbus(make_exception(req.transaction_id, req.unit_id,
                                                     req.function_code, 0x02)));
            return;
        }
        for (std::size_t i = 0; i < write.value().values.size(); ++i) {
            registers_.write(static_cast<std::uint16_t>(write.value().address + i),
                             write.value().values[i]);
        }
        fabric.send(id_.label, from,
                    encode_modbus(make_write_response(
                        req.transaction_id, req.unit_id, write.value().address,
                        static_cast<std::uint16_t>(write.value().values.size()))));
        return;
    }
    ++dropped_frames_;
}

void PlcNode::on_tick_end(Fabric&, Tick) {
    Vector u(model_.m());
    u(0) = command_codec_.decode(registers_.read(kCommandRegister));
    state_ = step_plant(model_, state_, u, process_noise_);
    const Vector y = measure(model_, state_, measure_noise_);
    registers_.write(kDistanceRegister, distance_codec_.encode(y(0), &saturation_count_));
}

// ---------------------------------------------------------------- RtuNode

RtuNode::RtuNode(std::string label, std::string controller_label,
                 std::vector<std::string> plc_labels, std::size_t register_count)
    : id_{std::move(label), NodeRole::kRtu},
      controller_label_(std::move(controller_label)),
      plc_labels_(std::move(plc_labels)),
      point_map_(register_count) {
    if (plc_labels_.empty()) throw ContractViolation("rtu: needs at least one PLC");
}

void RtuNode::on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) {
    if (from == controller_label_) {
        const auto decoded = decode_dnp3(bytes);
        if (!decoded) {
            ++dropped_frames_;
            return;
        }
        const Dnp3Frame& req = decoded.value();
        if (req.destination >= plc_labels_.size()) {
            fabric.send(id_.label, controller_label_,
                        encode_dnp3(make_unsupported_response(req.source, req.destination)));
            return;
        }
        const auto frames = rtu_translate(req, point_map_, next_tx_);
        if (frames.empty()) {
            fabric.send(id_.label, controller_label_,
                        encode_dnp3(make_unsupported_response(req.source, req.destination)));
            return;
        }
        for (const auto& mb : frames) {
            pending_.push_back({next_tx_, req.destination, req.source});
            ++next_tx_;
            if (next_tx_ == 0) next_tx_ = 1;
            fabric.send(id_.label, plc_labels_[req.destination], encode_modbus(mb));
        }
        return;
    }

    // Modbus leg: match the PLC response against the pending queue.
    const auto decoded = decode_modbus(bytes);
    if (!decoded) {
        ++dropped_frames_;
        return;
    }
    const ModbusFrame& resp = decoded.value();
    for (auto it = pending_.begin(); it != pending_.end(); ++it) {
        if (it->transaction_id == resp.transaction_id) {
            const Dnp3Frame out = rtu_translate_response(resp, it->dnp3_source, it->dnp3_destination);
            pending_.erase(it);
            fabric.send(id_.label, controller_label_, encode_dnp3(out));
            return;
        }
    }
    ++dropped_frames_;  // response without a matching request
}

// ---------------------------------------------------------- ControllerNode

ControllerNode::ControllerNode(std::string label, std::string rtu_label,
                               const StateSpaceModel& model, Matrix lqr_gain,
                               KalmanGain kalman, const WatermarkConfig& watermark,
                               DetectorConfig detector, ControllerOptions options)
    : id_{std::move(label), NodeRole::kMtu},
      rtu_label_(std::move(rtu_label)),
      model_(model),
      lqr_gain_(std::move(lqr_gain)),
      kalman_(std::move(kalman)),
      wm_config_(watermark),
      wm_state_(watermark),
      det_config_(detector),
      det_state_(kalman_.sigma_inv, detector.gwindow),
      opt_(std::move(options)),
      x_hat_(opt_.initial_estimate),
      u_standing_(Vector::Zero(model.m())) {
    det_config_.validate();
    if (x_hat_.size() != model_.n() || opt_.reference.size() != model_.n()) {
        throw ContractViolation("controller: estimate/reference dimension mismatch");
    }
    if (opt_.write_period_ticks < 1 || opt_.read_period_ticks < 1) {
        throw ContractViolation("controller: sampling periods must be >= 1");
    }
}

const Vector& ControllerNode::u_eff_at(Tick t) const {
    if (t < 0 || static_cast<std::size_t>(t) >= u_eff_by_tick_.size()) {
        throw ContractViolation("controller: u_eff history miss");
    }
    return u_eff_by_tick_[static_cast<std::size_t>(t)];
}

void ControllerNode::on_tick_start(Fabric& fabric, Tick t) {
    // Poll timeout: a read gone unanswered counts as a fault sample; the
    // detector simply keeps its stale g_t for those ticks.
    while (!pending_.empty() && t - pending_.front().sent_tick >= opt_.timeout_ticks) {
        if (pending_.front().kind == Dnp3Function::kReadIntegrity) ++fault_count_;
        pending_.pop_front();
    }

    if (t % opt_.read_period_ticks == 0) {
        send_read(fabric, t);
    }
    if (t % opt_.write_period_ticks == 0) {
        send_write(fabric, t);
    }

    // Record the command standing during this tick's plant step.
    u_eff_by_tick_.push_back(u_standing_);
}

void ControllerNode::send_read(Fabric& fabric, Tick t) {
    pending_.push_back({Dnp3Function::kReadIntegrity, t});
    fabric.send(id_.label, rtu_label_, encode_dnp3(make_read_integrity(0, kControllerAddress)));
}

void ControllerNode::send_write(Fabric& fabric, Tick t) {
    // Control from the estimate advanced to the current tick. The filter
    // state itself moves only on measurements.
    Vector x_ctrl = x_hat_;
    for (Tick s = t_ref_; s < t; ++s) {
        x_ctrl = kalman_predict(x_ctrl, model_, u_eff_at(s));
    }
    const Vector u_star = -lqr_gain_ * (x_ctrl - opt_.reference);
    if (opt_.record_u_star) u_star_history_.push_back(u_star(0));
    const Vector delta_u = wm_state_.next(wm_config_);
    const Vector u = apply_watermark(u_star, delta_u);
    u_standing_ = u;

    const std::uint16_t reg = opt_.command_codec.encode(u(0));
    pending_.push_back({Dnp3Function::kDirectOperate, t});
    fabric.send(id_.label, rtu_label_,
                encode_dnp3(make_direct_operate(0, kControllerAddress, kCommandRegister, reg)));
}

void ControllerNode::on_frame(Fabric&, const std::string& from, const Bytes& bytes) {
    if (from != rtu_label_) {
        ++unsolicited_;
        return;
    }
    const auto decoded = decode_dnp3(bytes);
    if (!decoded) {
        ++fault_count_;
        return;
    }
    const auto resp = parse_response(decoded.value());
    if (!resp) {
        ++fault_count_;
        return;
    }
    if (pending_.empty()) {
        ++unsolicited_;
        return;
    }
    const PendingPoll poll = pending_.front();
    pending_.pop_front();
    if (resp->status != dnp3_status::kOk) {
        ++fault_count_;
        return;
    }
    if (poll.kind == Dnp3Function::kReadIntegrity) {
        if (resp->values.size() <= kDistanceRegister) {
            ++fault_count_;
            return;
        }
        handle_read_values(resp->values, poll.sent_tick);
    }
    // Write acknowledgements carry no data.
}

void ControllerNode::handle_read_values(const std::vector<std::uint16_t>& values, Tick t_meas) {
    Vector y(model_.p());
    y(0) = opt_.distance_codec.decode(values[kDistanceRegister]);

    if (t_meas < t_ref_) return;  // stale response, already superseded
    if (t_meas == t_ref_) {
        // First poll of the round: measurement of the initial state, no
        // plant step to fold in yet.
        const Vector r = y - model_.C * x_hat_;
        x_hat_ = x_hat_ + kalman_.K * r;
        det_state_.gt_update(r);
    } else {
        for (Tick s = t_ref_; s < t_meas - 1; ++s) {
            x_hat_ = kalman_predict(x_hat_, model_, u_eff_at(s));
        }
        const KalmanStep step = kalman_step(x_hat_, kalman_, model_, u_eff_at(t_meas - 1), y);
        x_hat_ = step.x_next;
        det_state_.gt_update(step.residual);
    }
    t_ref_ = t_meas;
    ++detector_updates_;

    const std::int64_t alerts_before = det_state_.alert();
    det_state_.alert_step(det_config_, det_state_.g());
    if (det_state_.alert() > 0 && alerts_before == 0) {
        first_alert_tick_ = t_meas;
    }
    trace_.push_back({t_meas, det_state_.g(), det_state_.risk(), det_state_.alert()});
}

}  // namespace scadasim

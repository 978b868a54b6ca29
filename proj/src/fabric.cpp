#include "scadasim/fabric.hpp"

#include <algorithm>

#include "scadasim/errors.hpp"

namespace scadasim {

namespace {
char hex_digit(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }
}  // namespace

void Node::on_tapped_frame(Fabric& fabric, const std::string& src,
                           const std::string& dst, const Bytes& bytes) {
    fabric.deliver_direct(src, dst, bytes);
}

void Fabric::add_node(std::shared_ptr<Node> node) {
    const std::string label = node->id().label;
    if (nodes_.contains(label)) {
        throw ContractViolation("fabric: duplicate node label '" + label + "'");
    }
    nodes_[label] = node;
    order_.push_back(std::move(node));
}

void Fabric::add_channel(Channel channel) {
    if (!nodes_.contains(channel.endpoint_a) || !nodes_.contains(channel.endpoint_b)) {
        throw ContractViolation("fabric: channel endpoint unknown");
    }
    if (channel.latency_ticks < 0) {
        throw ContractViolation("fabric: negative latency");
    }
    channels_.push_back(std::move(channel));
}

Node& Fabric::node(const std::string& label) {
    auto it = nodes_.find(label);
    if (it == nodes_.end()) throw ContractViolation("fabric: unknown node '" + label + "'");
    return *it->second;
}

bool Fabric::has_node(const std::string& label) const { return nodes_.contains(label); }

Channel& Fabric::channel_between(const std::string& a, const std::string& b) {
    for (auto& ch : channels_) {
        if (ch.connects(a, b)) return ch;
    }
    throw ContractViolation("fabric: no channel between '" + a + "' and '" + b + "'");
}

void Fabric::schedule(Event ev) {
    if (ev.due < now_) {
        throw ContractViolation("fabric: scheduling in the past");
    }
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
}

void Fabric::send(const std::string& from, const std::string& to, Bytes bytes) {
    Channel& ch = channel_between(from, to);
    Event ev;
    ev.due = now_ + ch.latency_ticks;
    ev.from = from;
    ev.to = to;
    ev.bytes = std::move(bytes);
    if (ch.tap && *ch.tap != from) {
        ev.tapped_delivery = true;
        ev.tap_label = *ch.tap;
    } else {
        ev.tapped_delivery = false;
    }
    schedule(std::move(ev));
}

void Fabric::deliver_direct(const std::string& from, const std::string& to, Bytes bytes) {
    if (!nodes_.contains(to)) throw ContractViolation("fabric: unknown delivery target");
    Event ev;
    ev.due = now_;
    ev.from = from;
    ev.to = to;
    ev.bytes = std::move(bytes);
    ev.tapped_delivery = false;
    schedule(std::move(ev));
}

void Fabric::attach_tap(const std::string& endpoint_a, const std::string& endpoint_b,
                        const std::string& attacker) {
    Channel& ch = channel_between(endpoint_a, endpoint_b);
    if (ch.tap) {
        throw ContractViolation("fabric: channel already tapped");
    }
    Node& tap_node = node(attacker);
    if (tap_node.id().role != NodeRole::kAttacker) {
        throw ContractViolation("fabric: tap node must have the attacker role");
    }
    ch.tap = attacker;
}

void Fabric::log_frame(const std::string& src, const std::string& dst, const Bytes& bytes) {
    if (!log_enabled_) return;
    EventLogRow row;
    row.tick = now_;
    row.src = src;
    row.dst = dst;
    row.byte_length = bytes.size();
    const std::size_t head = std::min<std::size_t>(16, bytes.size());
    row.head_hex.reserve(head * 2);
    for (std::size_t i = 0; i < head; ++i) {
        row.head_hex.push_back(hex_digit(bytes[i] >> 4));
        row.head_hex.push_back(hex_digit(bytes[i] & 0xF));
    }
    log_.push_back(std::move(row));
}

void Fabric::drain_due() {
    while (!queue_.empty() && queue_.top().due <= now_) {
        Event ev = queue_.top();
        queue_.pop();
        log_frame(ev.from, ev.to, ev.bytes);
        if (ev.tapped_delivery) {
            node(ev.tap_label).on_tapped_frame(*this, ev.from, ev.to, ev.bytes);
        } else {
            node(ev.to).on_frame(*this, ev.from, ev.bytes);
        }
    }
}

void Fabric::run_until(Tick end_tick) {
    if (end_tick < now_) {
        throw ContractViolation("fabric: run_until into the past");
    }
    // First call starts at tick 0; later calls resume after the last tick.
    Tick t = started_ ? now_ + 1 : now_;
    started_ = true;
    for (; t <= end_tick; ++t) {
        now_ = t;
        for (auto& n : order_) n->on_tick_start(*this, t);
        drain_due();
        for (auto& n : order_) n->on_tick_end(*this, t);
        drain_due();
    }
}

}  // namespace scadasim

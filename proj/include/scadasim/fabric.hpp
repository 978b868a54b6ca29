#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "scadasim/modbus.hpp"  // Bytes
#include "scadasim/state_space.hpp"  // Tick

namespace scadasim {

enum class NodeRole { kMtu, kRtu, kPlc, kAttacker };

struct NodeId {
    std::string label;
    NodeRole role = NodeRole::kPlc;

    bool operator==(const NodeId&) const = default;
};

class Fabric;

// A node owns its state and interacts with the world only through frames
// and the two tick hooks. Handlers must not touch other nodes directly.
class Node {
 public:
    virtual ~Node() = default;
    virtual const NodeId& id() const = 0;

    virtual void on_frame(Fabric& fabric, const std::string& from, const Bytes& bytes) = 0;

    // Tap interposition: src/dst are the channel endpoints the frame was
    // travelling between. Only attacker nodes override this.
    virtual void on_tapped_frame(Fabric& fabric, const std::string& src,
                                 const std::string& dst, const Bytes& bytes);

    virtual void on_tick_start(Fabric&, Tick) {}
    virtual void on_tick_end(Fabric&, Tick) {}
};

struct Channel {
    std::string endpoint_a;
    std::string endpoint_b;
    Tick latency_ticks = 0;
    std::optional<std::string> tap;  // attacker label, both directions

    bool connects(const std::string& x, const std::string& y) const {
        return (endpoint_a == x && endpoint_b == y) ||
               (endpoint_a == y && endpoint_b == x);
    }
};

struct EventLogRow {
    Tick tick;
    std::string src;
    std::string dst;
    std::size_t byte_length;
    std::string head_hex;  // first 16 payload bytes
};

// Deterministic discrete-event loop: events fire in (due_tick, sequence)
// order; equal ticks resolve by insertion. Time is integer ticks only.
class Fabric {
 public:
    Fabric() = default;

    void add_node(std::shared_ptr<Node> node);
    void add_channel(Channel channel);

    Node& node(const std::string& label);
    bool has_node(const std::string& label) const;

    // Send bytes across the channel connecting from->to. If the channel is
    // tapped, the frame is routed to the tap's handler instead (which may
    // forward with deliver_direct). Throws if no such channel exists.
    void send(const std::string& from, const std::string& to, Bytes bytes);

    // Delivery that bypasses any tap; used by the tap itself to forward.
    void deliver_direct(const std::string& from, const std::string& to, Bytes bytes);

    // Route all future frames on the channel through the attacker node.
    // Frames already in flight are unaffected. Double-tapping is an error.
    void attach_tap(const std::string& endpoint_a, const std::string& endpoint_b,
                    const std::string& attacker);

    // Run ticks now..end_tick inclusive. Per tick: every node's
    // on_tick_start (registration order), then the event queue drains all
    // events due this tick (handlers may append same-tick events), then
    // on_tick_end hooks, then a final same-tick drain.
    void run_until(Tick end_tick);

    Tick now() const { return now_; }

    void enable_event_log(bool on) { log_enabled_ = on; }
    const std::vector<EventLogRow>& event_log() const { return log_; }

 private:
    struct Event {
        Tick due;
        std::uint64_t seq;
        std::string from;
        std::string to;
        Bytes bytes;
        bool tapped_delivery;  // deliver to tap handler of channel(from,to)
        std::string tap_label;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const {
            if (a.due != b.due) return a.due > b.due;
            return a.seq > b.seq;
        }
    };

    Channel& channel_between(const std::string& a, const std::string& b);
    void schedule(Event ev);
    void drain_due();
    void log_frame(const std::string& src, const std::string& dst, const Bytes& bytes);

    std::vector<std::shared_ptr<Node>> order_;
    std::map<std::string, std::shared_ptr<Node>> nodes_;
    std::vector<Channel> channels_;
    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::uint64_t next_seq_ = 0;
    Tick now_ = 0;
    bool started_ = false;
    bool log_enabled_ = false;
    std::vector<EventLogRow> log_;
};

}  // namespace scadasim

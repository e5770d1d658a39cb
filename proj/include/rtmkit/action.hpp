#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace rtmkit {

// Frontier is internal to the bisimulation checker: it marks truncated
// exploration and never appears in files or user-visible labels.
enum class ActionKind : std::uint8_t { Tau = 0, Plain = 1, Send = 2, Recv = 3, Frontier = 4 };

struct Action {
    ActionKind kind = ActionKind::Tau;
    std::string channel;  // Plain: the action name; Send/Recv: the channel
    std::string datum;    // Send/Recv payload, ranges over Dable symbols incl. blank

    static Action tau() { return {}; }
    static Action plain(std::string name) {
        return {ActionKind::Plain, std::move(name), {}};
    }
    static Action send(std::string chan, std::string datum) {
        return {ActionKind::Send, std::move(chan), std::move(datum)};
    }
    static Action recv(std::string chan, std::string datum) {
        return {ActionKind::Recv, std::move(chan), std::move(datum)};
    }
    static Action frontier_probe() { return {ActionKind::Frontier, {}, {}}; }

    bool is_tau() const { return kind == ActionKind::Tau; }
    bool is_comm() const { return kind == ActionKind::Send || kind == ActionKind::Recv; }

    // Kind-major ordering gives the canonical transition order used everywhere.
    auto operator<=>(const Action&) const = default;

    // "tau", a plain name, "c!d" or "c?d".
    std::string label() const;

    // Inverse of label(); throws std::runtime_error on malformed labels.
    static Action parse_label(const std::string& text);
};

}  // namespace rtmkit

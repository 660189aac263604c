#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "crossbell/bell.hpp"
#include "crossbell/error.hpp"
#include "crossbell/statevec.hpp"

namespace crossbell {

/// Qubit id assignment for an n-slot teleportation:
///   Bob                1 .. n
///   Alice (channel)    n+1 .. 2n
///   client (to send)   2n+1 .. 3n
/// Slot m (0-based) shares pair (m+1, n+m+1) and measures (n+m+1, 2n+m+1).
/// For n = 2 that is channel pairs (1,3),(2,4) and measurements (3,5),(4,6).
class ProtocolLayout {
public:
    explicit ProtocolLayout(std::size_t n) : n_(n) {
        if (n == 0) throw Error(ErrorCode::InvalidArgument, "layout needs at least one slot");
    }

    std::size_t n() const noexcept { return n_; }

    QubitId bob(std::size_t slot) const { return id(slot + 1); }
    QubitId alice(std::size_t slot) const { return id(n_ + slot + 1); }
    QubitId client(std::size_t slot) const { return id(2 * n_ + slot + 1); }

    std::vector<QubitId> bob_ids() const { return range(1); }
    std::vector<QubitId> alice_ids() const { return range(n_ + 1); }
    std::vector<QubitId> client_ids() const { return range(2 * n_ + 1); }

    std::vector<QubitPair> channel_pairs() const {
        std::vector<QubitPair> out;
        for (std::size_t m = 0; m < n_; ++m) out.emplace_back(bob(m), alice(m));
        return out;
    }

    std::vector<QubitPair> measure_pairs() const {
        std::vector<QubitPair> out;
        for (std::size_t m = 0; m < n_; ++m) out.emplace_back(alice(m), client(m));
        return out;
    }

    /// client(m) -> bob(m), for comparing Bob's qubits with the client state.
    std::vector<std::pair<QubitId, QubitId>> client_to_bob() const {
        std::vector<std::pair<QubitId, QubitId>> out;
        for (std::size_t m = 0; m < n_; ++m) out.emplace_back(client(m), bob(m));
        return out;
    }

private:
    static QubitId id(std::size_t v) { return QubitId{static_cast<std::uint32_t>(v)}; }
    std::vector<QubitId> range(std::size_t first) const {
        std::vector<QubitId> out;
        for (std::size_t i = 0; i < n_; ++i) out.push_back(id(first + i));
        return out;
    }

    std::size_t n_;
};

/// The shared entangled state on ids 1..2n.
inline PureState prepare_channel(const ChannelSpec& spec) {
    const ProtocolLayout layout(spec.n());
    const auto pairs = layout.channel_pairs();
    return cross_bell_state(spec, pairs);
}

/// Channel (on 1..2n) joined with the client (on 2n+1..3n), canonical order.
inline PureState total_state(const PureState& channel, const PureState& client) {
    PureState joined = cross(channel, client);
    if (channel.num_qubits() % 2 != 0)
        throw Error(ErrorCode::QubitSetMismatch, "channel must hold an even number of qubits");
    const ProtocolLayout layout(channel.num_qubits() / 2);
    auto expected = layout.client_ids();
    auto have = canonicalize(client).qubits();
    if (have != expected)
        throw Error(ErrorCode::QubitSetMismatch, "client must occupy qubits " + to_string(expected.front()) + ".." +
                                                     to_string(expected.back()));
    return joined;
}

} // namespace crossbell

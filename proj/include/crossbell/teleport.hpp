#pragma once

// End-to-end teleportation of an n-qubit client state through a cross-Bell
// channel: preparation, Alice's pairwise Bell measurements, Bob's correction.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "crossbell/bell.hpp"
#include "crossbell/channel.hpp"
#include "crossbell/error.hpp"
#include "crossbell/measure.hpp"
#include "crossbell/oracle.hpp"
#include "crossbell/statevec.hpp"

namespace crossbell {

struct TeleportReport {
    std::vector<BellKind> outcome;
    double probability;
    PureState bob_pre_state; // Bob's qubits right after Alice's measurements
    PureState bob_corrected;
    double fidelity_vs_client;
};

/// Per-slot corrections U_m such that Bob holds (U_0 (x) ... (x) U_{n-1}) applied
/// to the client after the outcome. Each slot of a cross-Bell channel is an
/// independent one-qubit teleportation, so slot m's factor is the one-slot
/// oracle derivation for (kinds[m], outcome[m]); the 16 possible factors are
/// derived once and cached. Every factor carries its exact sign, so the
/// product equals the full transfer matrix entrywise.
///
/// For channel (phi+, phi-) this returns the published matrices verbatim,
/// with the (4,6)-row matrices on slot 0 and the (3,5)-row on slot 1.
inline std::vector<Unitary2> corrections_for(const ChannelSpec& spec, std::span<const BellKind> outcome) {
    oracle::require_arity(spec, outcome);
    static const std::vector<Unitary2> cache = [] {
        std::vector<Unitary2> out;
        for (auto channel_kind : kBellKinds)
            for (auto measured : kBellKinds)
                out.push_back(oracle::derive_correction(ChannelSpec({channel_kind}), {measured}).front());
        return out;
    }();
    std::vector<Unitary2> out;
    out.reserve(spec.n());
    for (std::size_t m = 0; m < spec.n(); ++m) out.push_back(cache[4 * index_of(spec[m]) + index_of(outcome[m])]);
    return out;
}

inline std::vector<Unitary2> corrections_for(const ChannelSpec& spec, std::initializer_list<BellKind> outcome) {
    return corrections_for(spec, std::span<const BellKind>(outcome.begin(), outcome.size()));
}

/// Undoes the corrections: applies U_m^dagger to Bob's qubit m+1.
inline PureState recover(const PureState& bob_pre, std::span<const Unitary2> corrections) {
    const ProtocolLayout layout(corrections.size());
    std::vector<LocalOp> ops;
    for (std::size_t m = 0; m < corrections.size(); ++m) ops.push_back({layout.bob(m), corrections[m].adjoint()});
    return apply_local(bob_pre, ops);
}

/// Every branch, in lexicographic outcome order.
struct Enumerate {};
/// One branch drawn with the given seed.
struct Sample {
    std::uint64_t seed;
};
using ProtocolMode = std::variant<Enumerate, Sample>;

/// What Alice's measurements leave behind.
struct MeasuredBranch {
    std::vector<BellKind> outcome;
    double probability;
    PureState bob_state;
};

inline void require_client_layout(const ProtocolLayout& layout, const PureState& client) {
    if (canonicalize(client).qubits() != layout.client_ids())
        throw Error(ErrorCode::QubitSetMismatch, "client state must occupy qubits " + to_string(layout.client(0)) + ".." +
                                                     to_string(layout.client(layout.n() - 1)));
}

/// Alice's sequential measurements, slot 0 first. Slot m's measurement seed
/// is the m-th output of Rng(seed).
inline MeasuredBranch sample_measurements(const PureState& total, const ProtocolLayout& layout, std::uint64_t seed) {
    Rng seeds(seed);
    const auto pairs = layout.measure_pairs();
    std::vector<BellKind> outcome;
    double probability = 1.0;
    PureState state = total;
    for (std::size_t m = 0; m < layout.n(); ++m) {
        auto rec = bell_measure(state, pairs[m], seeds());
        outcome.push_back(rec.outcome.kind);
        probability *= rec.probability;
        state = std::move(*rec.residual);
    }
    return {std::move(outcome), probability, std::move(state)};
}

inline double fidelity_with_client(const ProtocolLayout& layout, const PureState& bob_state, const PureState& client) {
    const auto mapping = layout.client_to_bob();
    return fidelity(bob_state, relabel(client, mapping));
}

namespace detail {

inline void enumerate_branches(const PureState& state, const ProtocolLayout& layout, std::size_t slot,
                               std::vector<BellKind>& prefix, double probability,
                               const std::function<void(const MeasuredBranch&)>& sink) {
    if (slot == layout.n()) {
        sink(MeasuredBranch{prefix, probability, state});
        return;
    }
    const auto pair = layout.measure_pairs()[slot];
    const auto probs = bell_probabilities(state, pair);
    for (auto k : kBellKinds) {
        if (probs[index_of(k)] <= kZeroProbability) continue;
        auto rec = bell_collapse(state, pair, k);
        prefix.push_back(k);
        enumerate_branches(*rec.residual, layout, slot + 1, prefix, probability * rec.probability, sink);
        prefix.pop_back();
    }
}

} // namespace detail

/// Bob's side for one branch plus the fidelity check against the client.
inline TeleportReport complete_branch(const ChannelSpec& spec, const PureState& client, const MeasuredBranch& branch) {
    const ProtocolLayout layout(spec.n());
    const auto corr = corrections_for(spec, branch.outcome);
    PureState corrected = recover(branch.bob_state, corr);
    const double f = fidelity_with_client(layout, corrected, client);
    return {branch.outcome, branch.probability, branch.bob_state, std::move(corrected), f};
}

/// Runs the protocol. Enumerate returns every branch with nonzero probability
/// (all 4^n of them for a normalized client); Sample returns exactly one.
inline std::vector<TeleportReport> run_protocol(const ChannelSpec& spec, const PureState& client, const ProtocolMode& mode) {
    const ProtocolLayout layout(spec.n());
    require_client_layout(layout, client);
    const PureState total = total_state(prepare_channel(spec), client);

    std::vector<TeleportReport> reports;
    if (const auto* sample = std::get_if<Sample>(&mode)) {
        reports.push_back(complete_branch(spec, client, sample_measurements(total, layout, sample->seed)));
        return reports;
    }
    std::vector<BellKind> prefix;
    detail::enumerate_branches(total, layout, 0, prefix, 1.0,
                               [&](const MeasuredBranch& b) { reports.push_back(complete_branch(spec, client, b)); });
    return reports;
}

} // namespace crossbell

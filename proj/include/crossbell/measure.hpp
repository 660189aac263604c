#pragma once

// Projective Bell measurement on one qubit pair of a larger pure state.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "crossbell/bell.hpp"
#include "crossbell/error.hpp"
#include "crossbell/statevec.hpp"

namespace crossbell {

/// Outcomes at or below this probability cannot be collapsed onto.
inline constexpr double kZeroProbability = 1e-12;

/// Generator behind every seeded draw in the library. std::mt19937_64 has a
/// standardized output sequence, so a seed pins the outcome on any platform
/// with a conforming std::uniform_real_distribution.
using Rng = std::mt19937_64;

/// Indexed by static_cast<std::size_t>(BellKind).
using BellProbabilities = std::array<double, 4>;

inline std::size_t index_of(BellKind k) { return static_cast<std::size_t>(k); }

struct MeasurementRecord {
    BellOutcome outcome;
    double probability;
    /// State of the unmeasured qubits; empty when the pair was the whole state.
    std::optional<PureState> residual;
};

namespace detail {

/// Unnormalized (<bell_kind|_pair (x) I) applied to an amplitude vector.
struct Projection {
    std::vector<QubitId> qubits;
    std::vector<Amplitude> amps;
};

inline Projection project_pair(const std::vector<QubitId>& qubits, std::span<const Amplitude> amps, QubitPair pair,
                               BellKind kind) {
    auto find = [&](QubitId q) {
        auto it = std::find(qubits.begin(), qubits.end(), q);
        if (it == qubits.end()) throw Error(ErrorCode::MissingQubit, "qubit " + to_string(q) + " not in state");
        return static_cast<std::size_t>(it - qubits.begin());
    };
    if (pair.first == pair.second) throw Error(ErrorCode::DuplicateQubit, "Bell pair needs two distinct qubits");
    const std::size_t n = qubits.size();
    const std::size_t bit_a = n - 1 - find(pair.first);
    const std::size_t bit_b = n - 1 - find(pair.second);
    const std::size_t lo = std::min(bit_a, bit_b);
    const std::size_t hi = std::max(bit_a, bit_b);
    const std::size_t mid_mask = (std::size_t{1} << (hi - lo - 1)) - 1;
    const std::size_t low_mask = (std::size_t{1} << lo) - 1;

    Projection out;
    for (const auto& q : qubits)
        if (q != pair.first && q != pair.second) out.qubits.push_back(q);
    out.amps.assign(std::size_t{1} << out.qubits.size(), 0.0);

    const auto bell = bell_amplitudes(kind);
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const std::size_t a = (k >> bit_a) & 1U;
        const std::size_t b = (k >> bit_b) & 1U;
        const double c = bell[2 * a + b];
        if (c == 0.0) continue;
        const std::size_t rest = ((k >> (hi + 1)) << (hi - 1)) | (((k >> (lo + 1)) & mid_mask) << lo) | (k & low_mask);
        out.amps[rest] += c * amps[k]; // Bell amplitudes are real, so conj(c) == c.
    }
    return out;
}

} // namespace detail

/// Born-rule probabilities of the four Bell outcomes on `pair`.
inline BellProbabilities bell_probabilities(const PureState& s, QubitPair pair) {
    if (s.num_qubits() < 2) throw Error(ErrorCode::MissingQubit, "Bell measurement needs two qubits");
    BellProbabilities p{};
    for (auto k : kBellKinds) {
        const auto proj = detail::project_pair(s.qubits(), s.amplitudes(), pair, k);
        p[index_of(k)] = crossbell::detail::norm_squared(proj.amps);
    }
    return p;
}

/// Collapses onto `kind` and returns the normalized residual.
inline MeasurementRecord bell_collapse(const PureState& s, QubitPair pair, BellKind kind) {
    if (s.num_qubits() < 2) throw Error(ErrorCode::MissingQubit, "Bell measurement needs two qubits");
    auto proj = detail::project_pair(s.qubits(), s.amplitudes(), pair, kind);
    const double p = crossbell::detail::norm_squared(proj.amps);
    if (p <= kZeroProbability)
        throw Error(ErrorCode::ZeroProbabilityOutcome,
                    std::string("outcome ") + std::string(to_string(kind)) + " has probability " + std::to_string(p));
    MeasurementRecord rec{BellOutcome(pair, kind), p, std::nullopt};
    if (!proj.qubits.empty()) {
        const double scale = 1.0 / std::sqrt(p);
        for (auto& a : proj.amps) a *= scale;
        rec.residual = PureState(std::move(proj.qubits), std::move(proj.amps));
    }
    return rec;
}

/// Picks an outcome index from probabilities using one uniform draw.
/// Zero-probability outcomes are never selected.
inline BellKind sample_kind(const BellProbabilities& p, double u) {
    double acc = 0.0;
    std::optional<BellKind> last;
    for (auto k : kBellKinds) {
        if (p[index_of(k)] <= kZeroProbability) continue;
        acc += p[index_of(k)];
        last = k;
        if (u < acc) return k;
    }
    if (!last) throw Error(ErrorCode::ZeroProbabilityOutcome, "all outcomes have zero probability");
    return *last;
}

/// Seeded Bell measurement: the seed alone determines the outcome.
inline MeasurementRecord bell_measure(const PureState& s, QubitPair pair, std::uint64_t seed) {
    const auto p = bell_probabilities(s, pair);
    Rng rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    return bell_collapse(s, pair, sample_kind(p, uniform(rng)));
}

} // namespace crossbell

#pragma once

// Dense state vectors over labelled qubits.
//
// Index convention: amplitude index k of a state whose qubit list is
// (q_0, q_1, ..., q_{n-1}) assigns bit (n-1-p) of k to q_p, so the first
// listed qubit is the most significant bit. For canonical (ascending) states
// this means the smallest id is the MSB and |0_1 0_2 1_3 1_4> sits at 0b0011.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crossbell/error.hpp"

namespace crossbell {

using Amplitude = std::complex<double>;

/// Tolerance for quantities that are exact up to rounding (norms, unitarity).
inline constexpr double kNormTolerance = 1e-12;
/// Tolerance for results of chained floating-point pipelines.
inline constexpr double kPipelineTolerance = 1e-9;

struct QubitId {
    std::uint32_t value = 0;

    auto operator<=>(const QubitId&) const = default;
};

using QubitPair = std::pair<QubitId, QubitId>;

namespace literals {
constexpr QubitId operator""_q(unsigned long long v) { return QubitId{static_cast<std::uint32_t>(v)}; }
} // namespace literals

inline std::string to_string(QubitId q) { return std::to_string(q.value); }

/// The bit complement x -> 1 - x.
constexpr int flip(int bit) noexcept { return 1 - bit; }

namespace detail {

inline bool is_finite(Amplitude a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

inline double norm_squared(std::span<const Amplitude> amps) {
    double total = 0.0;
    for (const auto& a : amps) total += std::norm(a);
    return total;
}

inline void require_distinct(const std::vector<QubitId>& qubits, ErrorCode code) {
    auto sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    auto dup = std::adjacent_find(sorted.begin(), sorted.end());
    if (dup != sorted.end()) throw Error(code, "qubit " + to_string(*dup) + " appears more than once");
}

inline int bit_of(std::size_t index, std::size_t position, std::size_t num_qubits) {
    return static_cast<int>((index >> (num_qubits - 1 - position)) & 1U);
}

} // namespace detail

/// A normalized pure state over an ordered list of distinct qubits.
///
/// Construction validates the invariants (distinct ids, 2^n amplitudes, all
/// finite, unit norm within kNormTolerance) and rejects violations instead
/// of renormalizing; use renormalized() when rescaling is intended.
class PureState {
public:
    PureState(std::vector<QubitId> qubits, std::vector<Amplitude> amps)
        : qubits_(std::move(qubits)), amps_(std::move(amps)) {
        validate_shape();
        const double norm = detail::norm_squared(amps_);
        if (std::abs(norm - 1.0) > kNormTolerance)
            throw Error(ErrorCode::NotNormalized, "squared norm is " + std::to_string(norm));
    }

    static PureState renormalized(std::vector<QubitId> qubits, std::vector<Amplitude> amps) {
        const double norm = detail::norm_squared(amps);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw Error(ErrorCode::NotNormalized, "cannot renormalize a zero or non-finite vector");
        const double scale = 1.0 / std::sqrt(norm);
        for (auto& a : amps) a *= scale;
        return PureState(std::move(qubits), std::move(amps));
    }

    const std::vector<QubitId>& qubits() const noexcept { return qubits_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    Amplitude amplitude(std::size_t index) const { return amps_.at(index); }
    std::size_t num_qubits() const noexcept { return qubits_.size(); }
    std::size_t dimension() const noexcept { return amps_.size(); }
    double norm_squared() const { return detail::norm_squared(amps_); }

    bool is_canonical() const { return std::is_sorted(qubits_.begin(), qubits_.end()); }

    std::optional<std::size_t> position(QubitId q) const {
        auto it = std::find(qubits_.begin(), qubits_.end(), q);
        if (it == qubits_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - qubits_.begin());
    }

    bool contains(QubitId q) const { return position(q).has_value(); }

    /// Exact equality of labels, order and amplitudes.
    friend bool operator==(const PureState&, const PureState&) = default;

private:
    void validate_shape() const {
        if (qubits_.empty()) throw Error(ErrorCode::InvalidArgument, "a state needs at least one qubit");
        if (qubits_.size() >= 8 * sizeof(std::size_t) - 1)
            throw Error(ErrorCode::InvalidArgument, "too many qubits");
        detail::require_distinct(qubits_, ErrorCode::DuplicateQubit);
        if (amps_.size() != (std::size_t{1} << qubits_.size()))
            throw Error(ErrorCode::InvalidArgument,
                        "expected " + std::to_string(std::size_t{1} << qubits_.size()) + " amplitudes, got " +
                            std::to_string(amps_.size()));
        for (const auto& a : amps_)
            if (!detail::is_finite(a)) throw Error(ErrorCode::NonFinite, "amplitude is not finite");
    }

    std::vector<QubitId> qubits_;
    std::vector<Amplitude> amps_;
};

/// 2x2 unitary, row-major. Construction checks U U^dagger = I within kNormTolerance.
class Unitary2 {
public:
    Unitary2(Amplitude u00, Amplitude u01, Amplitude u10, Amplitude u11) : m_{u00, u01, u10, u11} {
        for (const auto& a : m_)
            if (!detail::is_finite(a)) throw Error(ErrorCode::NonFinite, "matrix entry is not finite");
        const auto p = product(*this, adjoint_unchecked());
        const std::array<Amplitude, 4> id{1.0, 0.0, 0.0, 1.0};
        for (std::size_t i = 0; i < 4; ++i)
            if (std::abs(p[i] - id[i]) > kNormTolerance) throw Error(ErrorCode::NotUnitary, "U U^dagger != I");
    }

    Amplitude operator()(std::size_t row, std::size_t col) const { return m_[2 * row + col]; }
    const std::array<Amplitude, 4>& entries() const noexcept { return m_; }

    Unitary2 adjoint() const {
        return Unitary2(std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3]));
    }
    Unitary2 transpose() const { return Unitary2(m_[0], m_[2], m_[1], m_[3]); }

    /// Multiplies by a unit-modulus phase.
    Unitary2 scaled(Amplitude phase) const {
        return Unitary2(phase * m_[0], phase * m_[1], phase * m_[2], phase * m_[3]);
    }

    bool is_real(double tol = 0.0) const {
        return std::all_of(m_.begin(), m_.end(), [tol](Amplitude a) { return std::abs(a.imag()) <= tol; });
    }

    friend Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
        const auto p = product(a, b);
        return Unitary2(p[0], p[1], p[2], p[3]);
    }

    friend Unitary2 operator-(const Unitary2& a) { return a.scaled(-1.0); }

    friend bool operator==(const Unitary2&, const Unitary2&) = default;

private:
    std::array<Amplitude, 4> adjoint_unchecked() const {
        return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
    }

    static std::array<Amplitude, 4> product(const Unitary2& a, const std::array<Amplitude, 4>& b) {
        return {a.m_[0] * b[0] + a.m_[1] * b[2], a.m_[0] * b[1] + a.m_[1] * b[3],
                a.m_[2] * b[0] + a.m_[3] * b[2], a.m_[2] * b[1] + a.m_[3] * b[3]};
    }
    static std::array<Amplitude, 4> product(const Unitary2& a, const Unitary2& b) { return product(a, b.m_); }

    std::array<Amplitude, 4> m_;
};

inline bool approx_equal(const Unitary2& a, const Unitary2& b, double tol) {
    for (std::size_t i = 0; i < 4; ++i)
        if (std::abs(a.entries()[i] - b.entries()[i]) > tol) return false;
    return true;
}

enum class Pauli { I, X, Y, Z };

/// sigma_0, sigma_x, sigma_y, sigma_z.
inline Unitary2 pauli(Pauli p) {
    using namespace std::complex_literals;
    switch (p) {
    case Pauli::I: return Unitary2(1.0, 0.0, 0.0, 1.0);
    case Pauli::X: return Unitary2(0.0, 1.0, 1.0, 0.0);
    case Pauli::Y: return Unitary2(0.0, -1i, 1i, 0.0);
    case Pauli::Z: return Unitary2(1.0, 0.0, 0.0, -1.0);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown Pauli");
}

// --- construction -----------------------------------------------------------

/// Computational basis state; qubits are sorted ascending.
inline PureState ket(std::span<const std::pair<QubitId, int>> assignments) {
    if (assignments.empty()) throw Error(ErrorCode::InvalidArgument, "ket needs at least one qubit");
    std::vector<std::pair<QubitId, int>> sorted(assignments.begin(), assignments.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<QubitId> qubits;
    std::size_t index = 0;
    for (const auto& [q, bit] : sorted) {
        if (bit != 0 && bit != 1) throw Error(ErrorCode::InvalidArgument, "bit values must be 0 or 1");
        if (!qubits.empty() && qubits.back() == q)
            throw Error(ErrorCode::DuplicateQubit, "qubit " + to_string(q) + " assigned twice");
        qubits.push_back(q);
        index = (index << 1) | static_cast<std::size_t>(bit);
    }
    std::vector<Amplitude> amps(std::size_t{1} << qubits.size());
    amps[index] = 1.0;
    return PureState(std::move(qubits), std::move(amps));
}

inline PureState ket(std::initializer_list<std::pair<QubitId, int>> assignments) {
    return ket(std::span<const std::pair<QubitId, int>>(assignments.begin(), assignments.size()));
}

/// Normalized complex Gaussian amplitudes (unitarily invariant distribution).
template <class Rng>
PureState random_state(std::vector<QubitId> qubits, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Amplitude> amps(std::size_t{1} << qubits.size());
    for (auto& a : amps) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        a = {re, im};
    }
    return PureState::renormalized(std::move(qubits), std::move(amps));
}

// --- products and reordering ------------------------------------------------

/// Plain tensor product: the result keeps a's qubits followed by b's, in
/// that order, without sorting. Use cross() for the reordered product.
inline PureState tensor(const PureState& a, const PureState& b) {
    for (const auto& q : b.qubits())
        if (a.contains(q)) throw Error(ErrorCode::QubitCollision, "qubit " + to_string(q) + " is in both factors");
    std::vector<QubitId> qubits = a.qubits();
    qubits.insert(qubits.end(), b.qubits().begin(), b.qubits().end());
    std::vector<Amplitude> amps;
    amps.reserve(a.dimension() * b.dimension());
    for (const auto& x : a.amplitudes())
        for (const auto& y : b.amplitudes()) amps.push_back(x * y);
    return PureState(std::move(qubits), std::move(amps));
}

/// Reorders the qubits ascending and permutes amplitudes to match.
inline PureState canonicalize(const PureState& s) {
    if (s.is_canonical()) return s;
    const std::size_t n = s.num_qubits();
    std::vector<QubitId> sorted = s.qubits();
    std::sort(sorted.begin(), sorted.end());
    // shift[p]: where old position p's bit lands in the new index.
    std::vector<std::size_t> shift(n);
    for (std::size_t p = 0; p < n; ++p) {
        const auto newpos = static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), s.qubits()[p]) - sorted.begin());
        shift[p] = n - 1 - newpos;
    }
    std::vector<Amplitude> amps(s.dimension());
    const auto src = s.amplitudes();
    for (std::size_t k = 0; k < src.size(); ++k) {
        std::size_t target = 0;
        for (std::size_t p = 0; p < n; ++p)
            target |= static_cast<std::size_t>(detail::bit_of(k, p, n)) << shift[p];
        amps[target] = src[k];
    }
    return PureState(std::move(sorted), std::move(amps));
}

/// Cross product: tensor product returned to ascending qubit order.
inline PureState cross(const PureState& a, const PureState& b) { return canonicalize(tensor(a, b)); }

/// n-ary cross product as a left fold.
inline PureState cross(std::span<const PureState> factors) {
    if (factors.empty()) throw Error(ErrorCode::InvalidArgument, "cross of zero factors");
    PureState acc = canonicalize(factors.front());
    for (std::size_t i = 1; i < factors.size(); ++i) acc = cross(acc, factors[i]);
    return acc;
}

/// Renames qubits; ids absent from the mapping are kept. Result is canonical.
inline PureState relabel(const PureState& s, std::span<const std::pair<QubitId, QubitId>> mapping) {
    std::vector<QubitId> qubits = s.qubits();
    for (auto& q : qubits) {
        auto it = std::find_if(mapping.begin(), mapping.end(), [q](const auto& m) { return m.first == q; });
        if (it != mapping.end()) q = it->second;
    }
    detail::require_distinct(qubits, ErrorCode::QubitCollision);
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    return canonicalize(PureState(std::move(qubits), std::move(amps)));
}

// --- overlaps ---------------------------------------------------------------

/// <a|b>. Both states are brought to canonical order first.
inline Amplitude inner(const PureState& a, const PureState& b) {
    const PureState ca = canonicalize(a);
    const PureState cb = canonicalize(b);
    if (ca.qubits() != cb.qubits()) throw Error(ErrorCode::QubitSetMismatch, "inner product of states on different qubits");
    Amplitude total = 0.0;
    const auto x = ca.amplitudes();
    const auto y = cb.amplitudes();
    for (std::size_t k = 0; k < x.size(); ++k) total += std::conj(x[k]) * y[k];
    return total;
}

/// |<a|b>|^2, clamped to [0,1]. Insensitive to global phase.
inline double fidelity(const PureState& a, const PureState& b) {
    return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

// --- local operations -------------------------------------------------------

struct LocalOp {
    QubitId target;
    Unitary2 op;
};

/// Applies the tensor product of single-qubit unitaries on the listed targets.
inline PureState apply_local(const PureState& s, std::span<const LocalOp> ops) {
    std::vector<QubitId> seen;
    for (const auto& o : ops) {
        if (!s.contains(o.target)) throw Error(ErrorCode::MissingQubit, "qubit " + to_string(o.target) + " not in state");
        seen.push_back(o.target);
    }
    detail::require_distinct(seen, ErrorCode::DuplicateQubit);

    const std::size_t n = s.num_qubits();
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    for (const auto& o : ops) {
        const std::size_t mask = std::size_t{1} << (n - 1 - *s.position(o.target));
        for (std::size_t i0 = 0; i0 < amps.size(); ++i0) {
            if (i0 & mask) continue;
            const std::size_t i1 = i0 | mask;
            const Amplitude a0 = amps[i0];
            const Amplitude a1 = amps[i1];
            amps[i0] = o.op(0, 0) * a0 + o.op(0, 1) * a1;
            amps[i1] = o.op(1, 0) * a0 + o.op(1, 1) * a1;
        }
    }
    return PureState(s.qubits(), std::move(amps));
}

inline PureState apply_local(const PureState& s, std::initializer_list<LocalOp> ops) {
    return apply_local(s, std::span<const LocalOp>(ops.begin(), ops.size()));
}

} // namespace crossbell

#pragma once

// Brute-force derivations used as ground truth.
//
// The correction for an outcome is derived from scratch: every client basis
// state is pushed through channel preparation and the projections onto the
// measured kinds, which yields the linear map (transfer matrix) from client
// coefficients to Bob's unnormalized coefficients. That map, scaled by 2^n,
// must be unitary and equal (up to one phase) to a product of signed Paulis.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "crossbell/bell.hpp"
#include "crossbell/channel.hpp"
#include "crossbell/error.hpp"
#include "crossbell/measure.hpp"
#include "crossbell/statevec.hpp"

namespace crossbell::oracle {

struct TransferMatrix {
    std::size_t n = 0;
    std::vector<Amplitude> entries; // row-major, dim x dim

    std::size_t dim() const noexcept { return std::size_t{1} << n; }
    Amplitude operator()(std::size_t row, std::size_t col) const { return entries[row * dim() + col]; }

    /// True when 2^n * T is unitary within tol.
    bool scaled_is_unitary(double tol) const {
        const std::size_t d = dim();
        const double scale = static_cast<double>(d) * static_cast<double>(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                Amplitude acc = 0.0;
                for (std::size_t k = 0; k < d; ++k) acc += (*this)(i, k) * std::conj((*this)(j, k));
                acc *= scale;
                if (std::abs(acc - (i == j ? 1.0 : 0.0)) > tol) return false;
            }
        return true;
    }
};

inline void require_arity(const ChannelSpec& spec, std::span<const BellKind> outcome) {
    if (outcome.size() != spec.n())
        throw Error(ErrorCode::ArityError, "outcome has " + std::to_string(outcome.size()) + " kinds for a " +
                                               std::to_string(spec.n()) + "-slot channel");
}

/// Column j holds Bob's unnormalized coefficients when the client is basis state j.
inline TransferMatrix transfer_matrix(const ChannelSpec& spec, std::span<const BellKind> outcome) {
    require_arity(spec, outcome);
    const std::size_t n = spec.n();
    const ProtocolLayout layout(n);
    const PureState channel = prepare_channel(spec);
    const auto measured = layout.measure_pairs();

    TransferMatrix t{n, std::vector<Amplitude>(std::size_t{1} << (2 * n))};
    const std::size_t d = t.dim();
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<std::pair<QubitId, int>> bits;
        for (std::size_t m = 0; m < n; ++m) bits.emplace_back(layout.client(m), static_cast<int>((j >> (n - 1 - m)) & 1U));
        const PureState total = total_state(channel, ket(bits));

        detail::Projection p{total.qubits(), {total.amplitudes().begin(), total.amplitudes().end()}};
        for (std::size_t m = 0; m < n; ++m) p = detail::project_pair(p.qubits, p.amps, measured[m], outcome[m]);
        if (p.qubits != layout.bob_ids()) throw Error(ErrorCode::FactorizationFailure, "unexpected residual qubits");
        for (std::size_t r = 0; r < d; ++r) t.entries[r * d + j] = p.amps[r];
    }
    return t;
}

/// sigma_0, sigma_x, i*sigma_y, sigma_z: the real Pauli representatives.
inline std::array<Unitary2, 4> pauli_candidates() {
    return {pauli(Pauli::I), pauli(Pauli::X), i_sigma_y(), pauli(Pauli::Z)};
}

/// Factors 2^n * T as phase * (P_0 (x) ... (x) P_{n-1}) by exhaustive search over
/// signed Pauli products. Slot 0 carries the phase; the other slots are the
/// unsigned representatives from pauli_candidates().
inline std::vector<Unitary2> factorize_transfer(const TransferMatrix& t, double tol = kPipelineTolerance) {
    if (!t.scaled_is_unitary(tol)) throw Error(ErrorCode::FactorizationFailure, "scaled transfer matrix is not unitary");
    const std::size_t n = t.n;
    const std::size_t d = t.dim();
    const double scale = static_cast<double>(d);
    const auto cands = pauli_candidates();
    const std::array<Amplitude, 4> phases{1.0, -1.0, Amplitude(0.0, 1.0), Amplitude(0.0, -1.0)};

    auto entry = [&](const std::vector<std::size_t>& choice, std::size_t r, std::size_t c) {
        Amplitude v = 1.0;
        for (std::size_t m = 0; m < n; ++m) {
            const std::size_t shift = n - 1 - m;
            v *= cands[choice[m]]((r >> shift) & 1U, (c >> shift) & 1U);
        }
        return v;
    };

    const std::size_t total = std::size_t{1} << (2 * n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<std::size_t> choice(n);
        for (std::size_t m = 0; m < n; ++m) choice[m] = (idx >> (2 * (n - 1 - m))) & 3U;
        for (const auto& phase : phases) {
            bool ok = true;
            for (std::size_t r = 0; r < d && ok; ++r)
                for (std::size_t c = 0; c < d && ok; ++c)
                    ok = std::abs(scale * t(r, c) - phase * entry(choice, r, c)) <= tol;
            if (!ok) continue;
            std::vector<Unitary2> out;
            for (std::size_t m = 0; m < n; ++m) out.push_back(cands[choice[m]]);
            out[0] = out[0].scaled(phase);
            return out;
        }
    }
    throw Error(ErrorCode::FactorizationFailure, "no signed Pauli product matches the transfer matrix");
}

/// Per-slot U_m with 2^n * T = U_0 (x) ... (x) U_{n-1}.
inline std::vector<Unitary2> derive_correction(const ChannelSpec& spec, std::span<const BellKind> outcome) {
    return factorize_transfer(transfer_matrix(spec, outcome));
}

inline std::vector<Unitary2> derive_correction(const ChannelSpec& spec, std::initializer_list<BellKind> outcome) {
    return derive_correction(spec, std::span<const BellKind>(outcome.begin(), outcome.size()));
}

// --- two-qubit entanglement -------------------------------------------------

/// [[alpha, beta], [gamma, delta]] for alpha|00> + beta|01> + gamma|10> + delta|11>.
inline std::array<Amplitude, 4> coefficient_matrix(const PureState& s) {
    if (s.num_qubits() != 2)
        throw Error(ErrorCode::ArityError, "expected a two-qubit state, got " + std::to_string(s.num_qubits()));
    const PureState c = canonicalize(s);
    return {c.amplitude(0), c.amplitude(1), c.amplitude(2), c.amplitude(3)};
}

/// Rank of the coefficient matrix by elimination with full pivoting.
inline int coefficient_rank(const PureState& s, double tol = kNormTolerance) {
    const auto m = coefficient_matrix(s);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (std::abs(m[i]) > std::abs(m[pivot])) pivot = i;
    if (std::abs(m[pivot]) <= tol) return 0;
    const std::size_t pr = pivot / 2, pc = pivot % 2;
    const std::size_t or_ = 1 - pr, oc = 1 - pc;
    const Amplitude residual = m[2 * or_ + oc] - m[2 * or_ + pc] * m[2 * pr + oc] / m[pivot];
    return std::abs(residual) > tol ? 2 : 1;
}

struct EntanglementCheck {
    bool entangled;
    Amplitude determinant; // alpha*delta - beta*gamma
    int rank;
};

inline EntanglementCheck is_entangled(const PureState& s, double tol = kNormTolerance) {
    const auto m = coefficient_matrix(s);
    const Amplitude det = m[0] * m[3] - m[1] * m[2];
    return {std::abs(det) > tol, det, coefficient_rank(s, tol)};
}

/// Singular values of the coefficient matrix, descending (the Schmidt coefficients).
inline std::array<double, 2> coefficient_singular_values(const PureState& s) {
    const auto m = coefficient_matrix(s);
    double frob = 0.0;
    for (const auto& a : m) frob += std::norm(a);
    const double det2 = std::norm(m[0] * m[3] - m[1] * m[2]);
    const double disc = std::sqrt(std::max(0.0, frob * frob - 4.0 * det2));
    const double big = std::sqrt(std::max(0.0, (frob + disc) / 2.0));
    const double small = big > 0.0 ? std::sqrt(det2) / big : 0.0;
    return {big, small};
}

/// Splits a product two-qubit state into its single-qubit factors (first,
/// second qubit). Fails with InvalidArgument when the state is entangled.
inline std::pair<PureState, PureState> factorize_product(const PureState& s, double tol = kPipelineTolerance) {
    const PureState c = canonicalize(s);
    const auto m = coefficient_matrix(c);
    const std::size_t row = std::norm(m[0]) + std::norm(m[1]) >= std::norm(m[2]) + std::norm(m[3]) ? 0 : 1;
    const double row_norm = std::sqrt(std::norm(m[2 * row]) + std::norm(m[2 * row + 1]));
    const std::array<Amplitude, 2> v{m[2 * row] / row_norm, m[2 * row + 1] / row_norm};
    std::array<Amplitude, 2> u{};
    for (std::size_t i = 0; i < 2; ++i) u[i] = m[2 * i] * std::conj(v[0]) + m[2 * i + 1] * std::conj(v[1]);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (std::abs(m[2 * i + j] - u[i] * v[j]) > tol)
                throw Error(ErrorCode::InvalidArgument, "state is entangled; no product factorization");
    return {PureState::renormalized({c.qubits()[0]}, {u[0], u[1]}), PureState::renormalized({c.qubits()[1]}, {v[0], v[1]})};
}

} // namespace crossbell::oracle

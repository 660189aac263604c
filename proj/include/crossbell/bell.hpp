#pragma once

// Bell states, cross-Bell bases and the correction-matrix table.
//
// Naming follows this project's convention, which is swapped relative to a
// large part of the literature:
//
//   PsiPlus  = (|00> + |11>) / sqrt2      PhiPlus  = (|01> + |10>) / sqrt2
//   PsiMinus = (|00> - |11>) / sqrt2      PhiMinus = (|01> - |10>) / sqrt2
//
// For a pair (a, b) the first ket digit belongs to a.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crossbell/error.hpp"
#include "crossbell/statevec.hpp"

namespace crossbell {

enum class BellKind { PsiPlus = 0, PsiMinus = 1, PhiPlus = 2, PhiMinus = 3 };

/// Lexicographic order used for bases, expansions and wire codes.
inline constexpr std::array<BellKind, 4> kBellKinds{BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus,
                                                    BellKind::PhiMinus};

inline std::string_view to_string(BellKind k) {
    switch (k) {
    case BellKind::PsiPlus: return "psi+";
    case BellKind::PsiMinus: return "psi-";
    case BellKind::PhiPlus: return "phi+";
    case BellKind::PhiMinus: return "phi-";
    }
    return "?";
}

inline BellKind parse_bell_kind(std::string_view text) {
    for (auto k : kBellKinds)
        if (to_string(k) == text) return k;
    throw Error(ErrorCode::ParseError, "unknown Bell kind '" + std::string(text) + "' (expected psi+, psi-, phi+ or phi-)");
}

/// Amplitudes over |00>,|01>,|10>,|11> of the pair.
inline std::array<double, 4> bell_amplitudes(BellKind k) {
    const double h = 1.0 / std::sqrt(2.0);
    switch (k) {
    case BellKind::PsiPlus: return {h, 0.0, 0.0, h};
    case BellKind::PsiMinus: return {h, 0.0, 0.0, -h};
    case BellKind::PhiPlus: return {0.0, h, h, 0.0};
    case BellKind::PhiMinus: return {0.0, h, -h, 0.0};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown Bell kind");
}

struct BellOutcome {
    QubitPair pair;
    BellKind kind;

    BellOutcome(QubitPair p, BellKind k) : pair(p), kind(k) {
        if (p.first == p.second) throw Error(ErrorCode::DuplicateQubit, "Bell pair needs two distinct qubits");
    }
    friend bool operator==(const BellOutcome&, const BellOutcome&) = default;
};

/// One Bell kind per teleported qubit (slot).
class ChannelSpec {
public:
    explicit ChannelSpec(std::vector<BellKind> kinds) : kinds_(std::move(kinds)) {
        if (kinds_.empty()) throw Error(ErrorCode::InvalidArgument, "channel needs at least one pair");
    }

    /// Parses "phi+,phi-".
    static ChannelSpec parse(std::string_view text) {
        std::vector<BellKind> kinds;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            kinds.push_back(parse_bell_kind(token));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return ChannelSpec(std::move(kinds));
    }

    std::size_t n() const noexcept { return kinds_.size(); }
    const std::vector<BellKind>& kinds() const noexcept { return kinds_; }
    BellKind operator[](std::size_t slot) const { return kinds_.at(slot); }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < kinds_.size(); ++i) {
            if (i) out += ',';
            out += crossbell::to_string(kinds_[i]);
        }
        return out;
    }

    friend auto operator<=>(const ChannelSpec&, const ChannelSpec&) = default;

private:
    std::vector<BellKind> kinds_;
};

/// All 4^n kind tuples in lexicographic order (slot 0 varies slowest).
inline std::vector<std::vector<BellKind>> all_kind_tuples(std::size_t n) {
    std::vector<std::vector<BellKind>> out;
    const std::size_t total = std::size_t{1} << (2 * n);
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::vector<BellKind> t(n);
        for (std::size_t m = 0; m < n; ++m) t[m] = kBellKinds[(idx >> (2 * (n - 1 - m))) & 3U];
        out.push_back(std::move(t));
    }
    return out;
}

inline PureState bell_state(BellKind kind, QubitPair pair) {
    if (pair.first == pair.second) throw Error(ErrorCode::DuplicateQubit, "Bell pair needs two distinct qubits");
    const auto a = bell_amplitudes(kind);
    return canonicalize(PureState({pair.first, pair.second}, {a[0], a[1], a[2], a[3]}));
}

namespace detail {
inline void require_disjoint_pairs(std::span<const QubitPair> pairs) {
    std::vector<QubitId> ids;
    for (const auto& [a, b] : pairs) {
        ids.push_back(a);
        ids.push_back(b);
    }
    require_distinct(ids, ErrorCode::QubitCollision);
}
} // namespace detail

/// Cross product of bell_state(kinds[m], pairs[m]) over all slots.
inline PureState cross_bell_state(const ChannelSpec& spec, std::span<const QubitPair> pairs) {
    if (pairs.size() != spec.n())
        throw Error(ErrorCode::ArityError, "channel has " + std::to_string(spec.n()) + " slots but " +
                                               std::to_string(pairs.size()) + " pairs were given");
    detail::require_disjoint_pairs(pairs);
    std::vector<PureState> factors;
    factors.reserve(pairs.size());
    for (std::size_t m = 0; m < pairs.size(); ++m) factors.push_back(bell_state(spec[m], pairs[m]));
    return cross(factors);
}

/// The 4^n cross-Bell states on the given pairs, ordered as all_kind_tuples().
inline std::vector<PureState> cross_bell_basis(std::span<const QubitPair> pairs) {
    if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "basis needs at least one pair");
    detail::require_disjoint_pairs(pairs);
    std::vector<PureState> out;
    for (auto& kinds : all_kind_tuples(pairs.size())) out.push_back(cross_bell_state(ChannelSpec(kinds), pairs));
    return out;
}

using CrossBellExpansion = std::map<std::vector<BellKind>, Amplitude>;

/// Coefficients <basis_T|s> for every kind tuple T. The state must live on
/// exactly the qubits covered by the pairs.
inline CrossBellExpansion expand_in_cross_bell(const PureState& s, std::span<const QubitPair> pairs) {
    std::vector<QubitId> covered;
    for (const auto& [a, b] : pairs) {
        covered.push_back(a);
        covered.push_back(b);
    }
    std::sort(covered.begin(), covered.end());
    auto have = s.qubits();
    std::sort(have.begin(), have.end());
    if (covered != have) throw Error(ErrorCode::QubitSetMismatch, "state qubits differ from the union of pairs");

    const auto basis = cross_bell_basis(pairs);
    const auto tuples = all_kind_tuples(pairs.size());
    CrossBellExpansion out;
    for (std::size_t i = 0; i < basis.size(); ++i) out.emplace(tuples[i], inner(basis[i], s));
    return out;
}

/// Per-slot correction matrices keyed by (slot, measured kind).
class CorrectionTable {
public:
    void set(std::size_t slot, BellKind kind, Unitary2 u) { table_.insert_or_assign({slot, kind}, std::move(u)); }
    const Unitary2& at(std::size_t slot, BellKind kind) const { return table_.at({slot, kind}); }
    std::size_t size() const noexcept { return table_.size(); }
    const auto& entries() const noexcept { return table_; }

private:
    std::map<std::pair<std::size_t, BellKind>, Unitary2> table_;
};

/// i*sigma_y = [[0, 1], [-1, 0]].
inline Unitary2 i_sigma_y() { return Unitary2(0.0, 1.0, -1.0, 0.0); }

/// The eight published correction matrices. Slot 0 is indexed by the kind
/// measured on pair (3,5), slot 1 by the kind measured on pair (4,6).
///
/// Note: the matrices of slot 0 are the exact corrections for a PhiMinus
/// channel pair and those of slot 1 for a PhiPlus pair (see
/// corrections_for() in teleport.hpp for how they are placed).
inline CorrectionTable reference_correction_table() {
    CorrectionTable t;
    t.set(0, BellKind::PsiPlus, i_sigma_y());
    t.set(0, BellKind::PsiMinus, -pauli(Pauli::X));
    t.set(0, BellKind::PhiPlus, pauli(Pauli::Z));
    t.set(0, BellKind::PhiMinus, -pauli(Pauli::I));
    t.set(1, BellKind::PsiPlus, pauli(Pauli::X));
    t.set(1, BellKind::PsiMinus, -i_sigma_y());
    t.set(1, BellKind::PhiPlus, pauli(Pauli::I));
    t.set(1, BellKind::PhiMinus, -pauli(Pauli::Z));
    return t;
}

} // namespace crossbell

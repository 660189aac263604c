#pragma once

// Diffs the published tables (checked in as data/reference_tables.json)
// against brute-force derivations and classifies each printed entry.
//
// Location tags:
//   channel-expansion          expanded channel state
//   branch-table/channel       channel the branch table was computed for
//   branch/NN                  one line of the 16-branch expansion
//   correction/slotS/KIND      one of the eight correction matrices
//   basis-change/N             one line of the natural -> cross-Bell identities
//   recovery-order             operator order of Bob's inverse
//   entanglement-criterion     two-qubit entanglement test

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "crossbell/bell.hpp"
#include "crossbell/channel.hpp"
#include "crossbell/error.hpp"
#include "crossbell/oracle.hpp"
#include "crossbell/serialize.hpp"
#include "crossbell/statevec.hpp"
#include "crossbell/version.hpp"

namespace crossbell::oracle {

enum class Verdict { Match, SignMismatch, LabelMismatch, PrefactorMismatch, ValueMismatch };

inline constexpr std::array<Verdict, 5> kVerdicts{Verdict::Match, Verdict::SignMismatch, Verdict::LabelMismatch,
                                                  Verdict::PrefactorMismatch, Verdict::ValueMismatch};

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Match: return "match";
    case Verdict::SignMismatch: return "sign-mismatch";
    case Verdict::LabelMismatch: return "label-mismatch";
    case Verdict::PrefactorMismatch: return "prefactor-mismatch";
    case Verdict::ValueMismatch: return "value-mismatch";
    }
    return "?";
}

inline Verdict parse_verdict(std::string_view text) {
    for (auto v : kVerdicts)
        if (to_string(v) == text) return v;
    throw Error(ErrorCode::ParseError, "unknown verdict '" + std::string(text) + "'");
}

struct DivergenceEntry {
    std::string location;
    std::string expected; // derived
    std::string printed;
    Verdict verdict;
};

struct DivergenceReport {
    std::vector<DivergenceEntry> entries;

    const DivergenceEntry* find(std::string_view location) const {
        for (const auto& e : entries)
            if (e.location == location) return &e;
        return nullptr;
    }

    std::size_t count(Verdict v, std::string_view prefix = "") const {
        std::size_t c = 0;
        for (const auto& e : entries)
            if (e.verdict == v && std::string_view(e.location).substr(0, prefix.size()) == prefix) ++c;
        return c;
    }
};

// --- printed tables ---------------------------------------------------------

inline constexpr std::array<std::string_view, 4> kSymbols{"alpha", "beta", "gamma", "delta"};

struct SignedSymbol {
    int sign;
    std::size_t symbol;
};

struct PrintedBranch {
    int line;
    std::array<BellKind, 2> label;
    double prefactor;
    std::array<SignedSymbol, 4> coefficients;
};

struct PrintedCorrection {
    std::size_t slot;
    BellKind kind;
    std::string expression;
    Unitary2 matrix;
};

struct PrintedBasisChange {
    int line;
    std::string source;
    std::array<bool, 2> flip; // complement the bit of qubit 3 / qubit 4
    std::vector<char> sign_exponent; // 'i' and/or 'r'
    double prefactor;
    std::vector<BellKind> first;  // summed kinds on pair (1,3)
    std::vector<BellKind> second; // summed kinds on pair (2,4)
};

struct PrintedKetTerm {
    int sign;
    std::string ket;
};

struct PrintedPolynomialTerm {
    int sign;
    std::vector<std::size_t> symbols;
};

struct ReferenceTables {
    ChannelSpec stated_channel;
    double channel_prefactor;
    std::vector<PrintedKetTerm> channel_terms;
    std::vector<PrintedBasisChange> basis_change;
    std::vector<PrintedBranch> branches;
    std::vector<PrintedCorrection> corrections;
    std::array<char, 2> recovery_factors; // 'K' or 'L' acting on qubit 1, qubit 2
    bool recovery_transpose;
    std::vector<PrintedPolynomialTerm> entanglement_criterion;
};

inline std::size_t parse_symbol(std::string_view s) {
    for (std::size_t i = 0; i < kSymbols.size(); ++i)
        if (kSymbols[i] == s) return i;
    throw Error(ErrorCode::ParseError, "unknown coefficient symbol '" + std::string(s) + "'");
}

inline SignedSymbol parse_signed_symbol(std::string_view s) {
    int sign = 1;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        sign = s[0] == '-' ? -1 : 1;
        s.remove_prefix(1);
    }
    return {sign, parse_symbol(s)};
}

/// "[+|-][i*]sigma_{0,x,y,z}"
inline Unitary2 parse_matrix_expression(std::string_view s) {
    const std::string original(s);
    double sign = 1.0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        sign = s[0] == '-' ? -1.0 : 1.0;
        s.remove_prefix(1);
    }
    bool imaginary = false;
    if (s.substr(0, 2) == "i*") {
        imaginary = true;
        s.remove_prefix(2);
    }
    std::optional<Pauli> p;
    if (s == "sigma_0") p = Pauli::I;
    if (s == "sigma_x") p = Pauli::X;
    if (s == "sigma_y") p = Pauli::Y;
    if (s == "sigma_z") p = Pauli::Z;
    if (!p) throw Error(ErrorCode::ParseError, "cannot parse matrix expression '" + original + "'");
    return pauli(*p).scaled(imaginary ? Amplitude(0.0, sign) : Amplitude(sign, 0.0));
}

inline std::vector<BellKind> parse_kinds(const nlohmann::json& arr) {
    std::vector<BellKind> out;
    for (const auto& k : arr) out.push_back(parse_bell_kind(k.get<std::string>()));
    return out;
}

inline ReferenceTables reference_tables_from_json(const nlohmann::json& doc) {
    try {
        const auto& ch = doc.at("stated_channel");
        ChannelSpec stated(parse_kinds(ch.at("kinds")));
        std::vector<QubitPair> pairs;
        for (const auto& p : ch.at("pairs"))
            pairs.emplace_back(QubitId{p.at(0).get<std::uint32_t>()}, QubitId{p.at(1).get<std::uint32_t>()});
        if (pairs != ProtocolLayout(stated.n()).channel_pairs())
            throw Error(ErrorCode::ParseError, "stated channel pairs do not follow the protocol layout");

        const auto& ex = doc.at("channel_expansion");
        std::vector<PrintedKetTerm> terms;
        for (const auto& t : ex.at("terms")) terms.push_back({t.at("sign").get<int>(), t.at("ket").get<std::string>()});

        std::vector<PrintedBasisChange> basis;
        for (const auto& b : doc.at("basis_change")) {
            PrintedBasisChange line{b.at("line").get<int>(), b.value("source", ""),
                                    {b.at("flip").at(0).get<bool>(), b.at("flip").at(1).get<bool>()},
                                    {}, b.at("prefactor").get<double>(), parse_kinds(b.at("first")),
                                    parse_kinds(b.at("second"))};
            for (const auto& e : b.at("sign_exponent")) {
                const auto name = e.get<std::string>();
                if (name != "i" && name != "r") throw Error(ErrorCode::ParseError, "sign exponent must be i or r");
                line.sign_exponent.push_back(name[0]);
            }
            basis.push_back(std::move(line));
        }

        std::vector<PrintedBranch> branches;
        for (const auto& b : doc.at("branches")) {
            const auto label = parse_kinds(b.at("label"));
            if (label.size() != 2) throw Error(ErrorCode::ParseError, "branch label needs two kinds");
            const auto& coeffs = b.at("coefficients");
            if (coeffs.size() != 4) throw Error(ErrorCode::ParseError, "branch needs four coefficients");
            PrintedBranch pb{b.at("line").get<int>(), {label[0], label[1]}, b.at("prefactor").get<double>(), {}};
            for (std::size_t i = 0; i < 4; ++i) pb.coefficients[i] = parse_signed_symbol(coeffs[i].get<std::string>());
            branches.push_back(pb);
        }

        std::vector<PrintedCorrection> corrections;
        for (const auto& c : doc.at("corrections")) {
            const auto expr = c.at("matrix").get<std::string>();
            corrections.push_back({c.at("slot").get<std::size_t>(), parse_bell_kind(c.at("kind").get<std::string>()), expr,
                                   parse_matrix_expression(expr)});
        }

        const auto& rec = doc.at("recovery");
        std::array<char, 2> factors{};
        for (std::size_t i = 0; i < 2; ++i) {
            const auto f = rec.at("factors").at(i).get<std::string>();
            if (f != "K" && f != "L") throw Error(ErrorCode::ParseError, "recovery factors must be K or L");
            factors[i] = f[0];
        }

        std::vector<PrintedPolynomialTerm> poly;
        for (const auto& t : doc.at("entanglement_criterion").at("terms")) {
            PrintedPolynomialTerm term{t.at("sign").get<int>(), {}};
            for (const auto& s : t.at("symbols")) term.symbols.push_back(parse_symbol(s.get<std::string>()));
            poly.push_back(std::move(term));
        }

        return ReferenceTables{std::move(stated),          ex.at("prefactor").get<double>(),
                               std::move(terms),           std::move(basis),
                               std::move(branches),        std::move(corrections),
                               factors,                    rec.at("transpose").get<bool>(),
                               std::move(poly)};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("reference tables: ") + e.what());
    }
}

inline ReferenceTables load_reference_tables(const std::filesystem::path& path) {
    return reference_tables_from_json(read_json_file(path));
}

// --- formatting helpers -----------------------------------------------------

namespace detail {

inline std::string format_real(double x) {
    static const std::array<std::pair<double, const char*>, 6> known{
        {{1.0, "1"}, {0.5, "1/2"}, {0.25, "1/4"}, {0.125, "1/8"}, {1.0 / std::sqrt(2.0), "1/sqrt2"}, {0.0, "0"}}};
    for (const auto& [v, name] : known) {
        if (std::abs(std::abs(x) - v) < 1e-12) return (x < 0 ? "-" : "+") + std::string(name);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.12g", x);
    return buf;
}

/// Names a matrix as [+|-][i*]sigma_p when it is a phase times a Pauli.
inline std::string describe_unitary(const Unitary2& u) {
    const std::array<std::pair<Pauli, const char*>, 4> names{
        {{Pauli::I, "sigma_0"}, {Pauli::X, "sigma_x"}, {Pauli::Y, "sigma_y"}, {Pauli::Z, "sigma_z"}}};
    const std::array<std::pair<Amplitude, const char*>, 4> phases{
        {{1.0, ""}, {-1.0, "-"}, {Amplitude(0, 1), "i*"}, {Amplitude(0, -1), "-i*"}}};
    for (const auto& [p, pname] : names)
        for (const auto& [phase, prefix] : phases)
            if (approx_equal(u, pauli(p).scaled(phase), kNormTolerance)) return std::string(prefix) + pname;
    std::ostringstream out;
    out << "[[" << u(0, 0) << ", " << u(0, 1) << "], [" << u(1, 0) << ", " << u(1, 1) << "]]";
    return out.str();
}

using Matrix4 = std::array<Amplitude, 16>;

inline Matrix4 kron(const Unitary2& a, const Unitary2& b) {
    Matrix4 out{};
    for (std::size_t a1 = 0; a1 < 2; ++a1)
        for (std::size_t b1 = 0; b1 < 2; ++b1)
            for (std::size_t a2 = 0; a2 < 2; ++a2)
                for (std::size_t b2 = 0; b2 < 2; ++b2) out[(2 * a1 + b1) * 4 + 2 * a2 + b2] = a(a1, a2) * b(b1, b2);
    return out;
}

inline Matrix4 to_matrix4(const TransferMatrix& t, double scale) {
    Matrix4 out{};
    for (std::size_t i = 0; i < 16; ++i) out[i] = scale * t.entries[i];
    return out;
}

inline bool close(const Matrix4& a, const Matrix4& b, double tol = kNormTolerance) {
    for (std::size_t i = 0; i < 16; ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

inline bool close_in_magnitude(const Matrix4& a, const Matrix4& b, double tol = kNormTolerance) {
    for (std::size_t i = 0; i < 16; ++i)
        if (std::abs(std::abs(a[i]) - std::abs(b[i])) > tol) return false;
    return true;
}

/// Signed symbol matrix of a printed branch (no prefactor): row = Bob index.
inline Matrix4 branch_matrix(const PrintedBranch& b) {
    Matrix4 out{};
    for (std::size_t r = 0; r < 4; ++r) out[4 * r + b.coefficients[r].symbol] = static_cast<double>(b.coefficients[r].sign);
    return out;
}

/// "(+delta, -gamma, ...)" for a signed-permutation matrix, numeric otherwise.
inline std::string describe_coefficients(const Matrix4& m) {
    std::string out = "(";
    for (std::size_t r = 0; r < 4; ++r) {
        if (r) out += ", ";
        std::string cell;
        int nonzero = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            if (std::abs(m[4 * r + c]) < 1e-12) continue;
            ++nonzero;
            const auto v = m[4 * r + c];
            if (std::abs(v.imag()) < 1e-12 && std::abs(std::abs(v.real()) - 1.0) < 1e-12)
                cell += (v.real() < 0 ? "-" : "+") + std::string(kSymbols[c]);
            else
                cell += format_real(v.real()) + "*" + std::string(kSymbols[c]);
        }
        out += nonzero ? cell : "0";
    }
    return out + ")";
}

inline std::string kinds_label(std::span<const BellKind> kinds) {
    std::string out;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (i) out += ",";
        out += crossbell::to_string(kinds[i]);
    }
    return out;
}

inline std::string two_digit(int v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d", v);
    return buf;
}

inline std::vector<PureState> fixed_two_qubit_clients(std::vector<QubitId> qubits, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<PureState> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_state(qubits, rng));
    return out;
}

} // namespace detail

// --- derivations ------------------------------------------------------------

/// The sixteen 2-slot transfer matrices of a channel, in all_kind_tuples order.
inline std::vector<TransferMatrix> branch_table(const ChannelSpec& channel) {
    std::vector<TransferMatrix> out;
    for (const auto& outcome : all_kind_tuples(channel.n())) out.push_back(transfer_matrix(channel, outcome));
    return out;
}

inline std::size_t tuple_index(std::span<const BellKind> kinds) {
    std::size_t idx = 0;
    for (auto k : kinds) idx = 4 * idx + index_of(k);
    return idx;
}

/// Channel whose derived branch vectors agree with the most printed lines
/// (prefactors ignored). Ties keep `preferred`.
inline ChannelSpec best_fit_channel(const std::vector<PrintedBranch>& branches, const ChannelSpec& preferred) {
    auto score = [&](const ChannelSpec& c) {
        const auto table = branch_table(c);
        std::size_t hits = 0;
        for (const auto& b : branches)
            if (detail::close(detail::branch_matrix(b), detail::to_matrix4(table[tuple_index(b.label)], 4.0))) ++hits;
        return hits;
    };
    ChannelSpec best = preferred;
    std::size_t best_score = score(preferred);
    for (const auto& kinds : all_kind_tuples(2)) {
        ChannelSpec c(kinds);
        const auto s = score(c);
        if (s > best_score) {
            best = c;
            best_score = s;
        }
    }
    return best;
}

namespace detail {

inline DivergenceEntry check_channel_expansion(const ReferenceTables& t) {
    const auto pairs = ProtocolLayout(t.stated_channel.n()).channel_pairs();
    const PureState derived = cross_bell_state(t.stated_channel, pairs);
    std::vector<Amplitude> amps(derived.dimension(), 0.0);
    std::string printed = format_real(t.channel_prefactor) + " (";
    for (const auto& term : t.channel_terms) {
        if (term.ket.size() != derived.num_qubits())
            throw Error(ErrorCode::ParseError, "ket '" + term.ket + "' has the wrong length");
        amps[std::stoul(term.ket, nullptr, 2)] += t.channel_prefactor * term.sign;
        printed += (term.sign < 0 ? " -|" : " +|") + term.ket + ">";
    }
    printed += " )";
    std::string expected = "(";
    for (std::size_t k = 0; k < derived.dimension(); ++k) {
        if (std::abs(derived.amplitude(k)) < 1e-12) continue;
        std::string ket;
        for (std::size_t p = 0; p < derived.num_qubits(); ++p) ket += ((k >> (derived.num_qubits() - 1 - p)) & 1U) ? '1' : '0';
        expected += " " + format_real(derived.amplitude(k).real()) + "|" + ket + ">";
    }
    expected += " )";

    bool exact = true, magnitude = true;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        exact = exact && std::abs(amps[k] - derived.amplitude(k)) <= kNormTolerance;
        magnitude = magnitude && std::abs(std::abs(amps[k]) - std::abs(derived.amplitude(k))) <= kNormTolerance;
    }
    const Verdict v = exact ? Verdict::Match : magnitude ? Verdict::SignMismatch : Verdict::ValueMismatch;
    return {"channel-expansion", expected, printed, v};
}

inline std::vector<DivergenceEntry> check_branches(const ReferenceTables& t, const ChannelSpec& effective) {
    std::vector<DivergenceEntry> out;
    const auto table = branch_table(effective);
    const auto tuples = all_kind_tuples(2);
    for (const auto& b : t.branches) {
        const Matrix4 printed = branch_matrix(b);
        Matrix4 printed_scaled{};
        for (std::size_t i = 0; i < 16; ++i) printed_scaled[i] = b.prefactor * printed[i];
        const Matrix4 derived = to_matrix4(table[tuple_index(b.label)], 1.0);
        const Matrix4 derived4 = to_matrix4(table[tuple_index(b.label)], 4.0);

        DivergenceEntry e{"branch/" + two_digit(b.line),
                          kinds_label(b.label) + ": 1/4 " + describe_coefficients(derived4),
                          kinds_label(b.label) + ": " + format_real(b.prefactor).substr(1) + " " + describe_coefficients(printed),
                          Verdict::ValueMismatch};
        if (close(printed_scaled, derived)) {
            e.verdict = Verdict::Match;
        } else if (close(printed, derived4)) {
            e.verdict = Verdict::PrefactorMismatch;
        } else {
            // A vector that is exactly some other branch is a mislabel, even
            // when it also agrees with its own branch up to signs.
            for (std::size_t i = 0; i < tuples.size(); ++i) {
                if (i == tuple_index(b.label)) continue;
                if (close(printed, to_matrix4(table[i], 4.0))) {
                    e.verdict = Verdict::LabelMismatch;
                    e.expected = kinds_label(tuples[i]) + ": 1/4 " + describe_coefficients(printed);
                    break;
                }
            }
            if (e.verdict == Verdict::ValueMismatch && close_in_magnitude(printed, derived4)) e.verdict = Verdict::SignMismatch;
        }
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<DivergenceEntry> check_corrections(const ReferenceTables& t, const ChannelSpec& effective) {
    std::vector<DivergenceEntry> out;
    // Exact one-slot factors: slot m of a cross-Bell channel is an independent
    // one-qubit teleportation, so its factor carries a well-defined sign.
    auto one_slot = [](BellKind channel_kind, BellKind measured) {
        return derive_correction(ChannelSpec({channel_kind}), {measured}).front();
    };
    const auto table = branch_table(effective);
    for (const auto& c : t.corrections) {
        if (c.slot >= effective.n()) throw Error(ErrorCode::ParseError, "correction slot out of range");
        const Unitary2 exact = one_slot(effective[c.slot], c.kind);
        const Unitary2 other_role = one_slot(effective[1 - c.slot], c.kind);
        DivergenceEntry e{"correction/slot" + std::to_string(c.slot) + "/" + std::string(crossbell::to_string(c.kind)),
                          describe_unitary(exact), c.expression, Verdict::ValueMismatch};
        if (approx_equal(c.matrix, exact, kNormTolerance)) {
            // Tie the one-slot factor back to the two-slot brute force.
            bool consistent = true;
            for (auto other : kBellKinds) {
                const Unitary2 partner = one_slot(effective[1 - c.slot], other);
                std::array<BellKind, 2> outcome{};
                outcome[c.slot] = c.kind;
                outcome[1 - c.slot] = other;
                const Matrix4 product = c.slot == 0 ? kron(c.matrix, partner) : kron(partner, c.matrix);
                consistent = consistent && close(product, to_matrix4(table[tuple_index(outcome)], 4.0));
            }
            e.verdict = consistent ? Verdict::Match : Verdict::ValueMismatch;
        } else if (approx_equal(c.matrix, -exact, kNormTolerance)) {
            e.verdict = Verdict::SignMismatch;
        } else if (approx_equal(c.matrix, other_role, kNormTolerance) || approx_equal(c.matrix, -other_role, kNormTolerance)) {
            e.verdict = Verdict::LabelMismatch;
        }
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<DivergenceEntry> check_basis_change(const ReferenceTables& t) {
    using namespace crossbell::literals;
    const std::array<QubitPair, 2> pairs{QubitPair{1_q, 3_q}, QubitPair{2_q, 4_q}};
    std::vector<DivergenceEntry> out;
    for (const auto& line : t.basis_change) {
        bool exact = true, magnitude = true, scaled = true;
        std::optional<double> ratio;
        std::string expected;
        for (int i = 0; i <= 1; ++i) {
            for (int r = 0; r <= 1; ++r) {
                const PureState lhs = ket({{1_q, i}, {2_q, r}, {3_q, line.flip[0] ? flip(i) : i}, {4_q, line.flip[1] ? flip(r) : r}});
                const auto derived = expand_in_cross_bell(lhs, pairs);
                int exponent = 0;
                for (char e : line.sign_exponent) exponent += e == 'i' ? i : r;
                const double sign = exponent % 2 ? -1.0 : 1.0;
                expected += (expected.empty() ? "" : "; ") + std::string("i=") + std::to_string(i) + ",r=" + std::to_string(r) + ":";
                for (const auto& [kinds, coeff] : derived) {
                    const bool in_first = std::find(line.first.begin(), line.first.end(), kinds[0]) != line.first.end();
                    const bool in_second = std::find(line.second.begin(), line.second.end(), kinds[1]) != line.second.end();
                    const double printed = in_first && in_second ? line.prefactor * sign : 0.0;
                    if (std::abs(coeff) > 1e-12) expected += " " + format_real(coeff.real()) + "[" + kinds_label(kinds) + "]";
                    exact = exact && std::abs(coeff - printed) <= kNormTolerance;
                    magnitude = magnitude && std::abs(std::abs(coeff) - std::abs(printed)) <= kNormTolerance;
                    if (std::abs(coeff) > 1e-12) {
                        const double q = printed / coeff.real();
                        if (!ratio) ratio = q;
                        scaled = scaled && std::abs(q - *ratio) <= kNormTolerance;
                    } else {
                        scaled = scaled && std::abs(printed) <= kNormTolerance;
                    }
                }
            }
        }
        std::string printed = format_real(line.prefactor).substr(1);
        if (!line.sign_exponent.empty()) {
            printed += " (-1)^(";
            for (std::size_t k = 0; k < line.sign_exponent.size(); ++k) printed += (k ? "+" : "") + std::string(1, line.sign_exponent[k]);
            printed += ")";
        }
        printed += " (" + kinds_label(line.first) + " summed)_13 x (" + kinds_label(line.second) + " summed)_24 for " + line.source;
        Verdict v = Verdict::ValueMismatch;
        if (exact) v = Verdict::Match;
        else if (magnitude) v = Verdict::SignMismatch;
        else if (scaled) v = Verdict::PrefactorMismatch;
        out.push_back({"basis-change/" + std::to_string(line.line), expected, printed, v});
    }
    return out;
}

inline DivergenceEntry check_recovery(const ReferenceTables& t, const ChannelSpec& effective) {
    using namespace crossbell::literals;
    CorrectionTable printed;
    for (const auto& c : t.corrections) printed.set(c.slot, c.kind, c.matrix);
    const auto clients = fixed_two_qubit_clients({5_q, 6_q}, 4, 20240611);
    const std::array<std::pair<QubitId, QubitId>, 2> to_bob{{{5_q, 1_q}, {6_q, 2_q}}};

    // factors[q] names which printed row acts on Bob's qubit q+1.
    auto works = [&](std::array<char, 2> factors) {
        for (const auto& outcome : all_kind_tuples(2)) {
            const auto tm = transfer_matrix(effective, outcome);
            for (const auto& client : clients) {
                std::vector<Amplitude> amps(4, 0.0);
                for (std::size_t r = 0; r < 4; ++r)
                    for (std::size_t c = 0; c < 4; ++c) amps[r] += tm(r, c) * client.amplitude(c);
                const PureState bob = PureState::renormalized({1_q, 2_q}, std::move(amps));
                std::vector<LocalOp> ops;
                for (std::size_t q = 0; q < 2; ++q) {
                    const std::size_t row = factors[q] == 'K' ? 0 : 1;
                    const Unitary2& u = printed.at(row, outcome[row]);
                    ops.push_back({QubitId{static_cast<std::uint32_t>(q + 1)}, t.recovery_transpose ? u.transpose() : u.adjoint()});
                }
                if (fidelity(apply_local(bob, ops), relabel(client, to_bob)) < 1.0 - kPipelineTolerance) return false;
            }
        }
        return true;
    };
    auto describe = [&](std::array<char, 2> f) {
        const char* op = t.recovery_transpose ? "^T" : "^dagger";
        return std::string("U_") + f[0] + op + " (x) U_" + f[1] + op;
    };
    const std::array<char, 2> swapped{t.recovery_factors[1], t.recovery_factors[0]};
    Verdict v = Verdict::ValueMismatch;
    std::string expected = "no factor order recovers the client";
    if (works(t.recovery_factors)) {
        v = Verdict::Match;
        expected = describe(t.recovery_factors);
    } else if (works(swapped)) {
        v = Verdict::LabelMismatch;
        expected = describe(swapped);
    }
    return {"recovery-order", expected, describe(t.recovery_factors), v};
}

inline DivergenceEntry check_entanglement_criterion(const ReferenceTables& t) {
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<std::array<Amplitude, 4>> samples{
        {1.0, 0.0, 0.0, 0.0}, {h, 0.0, 0.0, h}, {0.0, h, h, 0.0}, {0.0, h, -h, 0.0}, {h, 0.0, h, 0.0}};
    using namespace crossbell::literals;
    for (const auto& s : fixed_two_qubit_clients({1_q, 2_q}, 6, 424242))
        samples.push_back({s.amplitude(0), s.amplitude(1), s.amplitude(2), s.amplitude(3)});

    auto eval = [&](const std::array<Amplitude, 4>& c) {
        Amplitude total = 0.0;
        for (const auto& term : t.entanglement_criterion) {
            Amplitude p = static_cast<double>(term.sign);
            for (auto s : term.symbols) p *= c[s];
            total += p;
        }
        return total;
    };
    bool agrees = true;
    for (const auto& c : samples) {
        const Amplitude det = c[0] * c[3] - c[1] * c[2];
        agrees = agrees && std::abs(eval(c) - det) <= kNormTolerance;
    }

    std::string printed;
    for (const auto& term : t.entanglement_criterion) {
        printed += term.sign < 0 ? " - " : (printed.empty() ? "" : " + ");
        for (std::size_t i = 0; i < term.symbols.size(); ++i) printed += (i ? "*" : "") + std::string(kSymbols[term.symbols[i]]);
    }

    // Determinant-shaped (two degree-2 terms of opposite sign covering each
    // symbol once) but paired differently: the symbols are mislabelled.
    bool determinant_shaped = t.entanglement_criterion.size() == 2 &&
                              t.entanglement_criterion[0].sign == -t.entanglement_criterion[1].sign;
    std::array<int, 4> uses{};
    for (const auto& term : t.entanglement_criterion) {
        determinant_shaped = determinant_shaped && term.symbols.size() == 2;
        for (auto s : term.symbols) ++uses[s];
    }
    for (int u : uses) determinant_shaped = determinant_shaped && u == 1;

    const Verdict v = agrees ? Verdict::Match : determinant_shaped ? Verdict::LabelMismatch : Verdict::ValueMismatch;
    return {"entanglement-criterion", "alpha*delta - beta*gamma", printed, v};
}

} // namespace detail

/// Checks every printed entry. Branch lines, correction matrices and the
/// recovery order are judged against the channel that best explains the
/// branch table; the branch-table/channel entry records whether that is the
/// channel the tables claim to use.
inline DivergenceReport verify_reference_tables(const ReferenceTables& t) {
    if (t.stated_channel.n() != 2) throw Error(ErrorCode::ArityError, "reference tables describe a two-slot channel");
    DivergenceReport report;
    report.entries.push_back(detail::check_channel_expansion(t));

    const ChannelSpec effective = best_fit_channel(t.branches, t.stated_channel);
    report.entries.push_back({"branch-table/channel", effective.to_string(), t.stated_channel.to_string(),
                              effective == t.stated_channel ? Verdict::Match : Verdict::LabelMismatch});
    for (auto& e : detail::check_branches(t, effective)) report.entries.push_back(std::move(e));
    for (auto& e : detail::check_corrections(t, effective)) report.entries.push_back(std::move(e));
    for (auto& e : detail::check_basis_change(t)) report.entries.push_back(std::move(e));
    report.entries.push_back(detail::check_recovery(t, effective));
    report.entries.push_back(detail::check_entanglement_criterion(t));
    return report;
}

// --- output and golden comparison -------------------------------------------

inline nlohmann::json report_to_json(const DivergenceReport& r) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"location", e.location},
                           {"verdict", std::string(to_string(e.verdict))},
                           {"expected", e.expected},
                           {"printed", e.printed}});
    nlohmann::json summary = nlohmann::json::object();
    for (auto v : kVerdicts) summary[std::string(to_string(v))] = r.count(v);
    return {{"tool_version", kToolVersion}, {"schema_version", kSchemaVersion}, {"entries", std::move(entries)},
            {"summary", std::move(summary)}};
}

inline DivergenceReport report_from_json(const nlohmann::json& doc) {
    try {
        DivergenceReport r;
        for (const auto& e : doc.at("entries"))
            r.entries.push_back({e.at("location").get<std::string>(), e.at("expected").get<std::string>(),
                                 e.at("printed").get<std::string>(), parse_verdict(e.at("verdict").get<std::string>())});
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline std::string report_to_text(const DivergenceReport& r) {
    std::ostringstream out;
    for (const auto& e : r.entries) {
        out << e.location << "  [" << to_string(e.verdict) << "]\n";
        if (e.verdict != Verdict::Match) {
            out << "    printed:  " << e.printed << "\n";
            out << "    expected: " << e.expected << "\n";
        }
    }
    out << "summary:";
    for (auto v : kVerdicts) out << " " << to_string(v) << "=" << r.count(v);
    out << "\n";
    return out.str();
}

using GoldenVerdicts = std::map<std::string, Verdict>;

inline nlohmann::json golden_to_json(const DivergenceReport& r) {
    nlohmann::json verdicts = nlohmann::json::object();
    for (const auto& e : r.entries) verdicts[e.location] = std::string(to_string(e.verdict));
    return {{"schema_version", kSchemaVersion}, {"verdicts", std::move(verdicts)}};
}

inline GoldenVerdicts golden_from_json(const nlohmann::json& doc) {
    try {
        GoldenVerdicts out;
        for (const auto& [loc, v] : doc.at("verdicts").items()) out.emplace(loc, parse_verdict(v.get<std::string>()));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

/// Human-readable differences between the report and the golden verdicts;
/// empty when they agree exactly.
inline std::vector<std::string> golden_mismatches(const DivergenceReport& r, const GoldenVerdicts& golden) {
    std::vector<std::string> out;
    for (const auto& e : r.entries) {
        auto it = golden.find(e.location);
        if (it == golden.end())
            out.push_back(e.location + ": not in golden file");
        else if (it->second != e.verdict)
            out.push_back(e.location + ": golden " + std::string(to_string(it->second)) + ", got " + std::string(to_string(e.verdict)));
    }
    for (const auto& [loc, v] : golden)
        if (!r.find(loc)) out.push_back(loc + ": missing from report");
    return out;
}

} // namespace crossbell::oracle

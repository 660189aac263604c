#pragma once

// Subcommand implementations for the crossbell tool. Each returns the
// process exit code: 0 ok, 1 check failed, 2 bad configuration.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "crossbell/crossbell.hpp"

namespace crossbell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;

inline constexpr std::size_t kMaxTeleportSlots = 7;
inline constexpr std::size_t kMaxBasisSlots = 5;
inline constexpr std::size_t kMaxExpandSlots = 5;

struct RunConfig {
    std::string subcommand;
    std::size_t n = 0; // 0: take it from --channel
    std::string channel;
    std::string client = "random";
    std::uint64_t seed = 0;
    std::string mode = "enumerate";
    std::size_t trials = 1;
    bool session = false;
    std::string out;
    std::string format = "json";
    std::string tables;
    std::string golden;
};

inline nlohmann::json config_echo(const RunConfig& c) {
    nlohmann::json j{{"subcommand", c.subcommand}, {"seed", c.seed}, {"format", c.format}};
    if (c.subcommand == "teleport") {
        j.update({{"n", c.n}, {"channel", c.channel}, {"client", c.client}, {"mode", c.mode}, {"trials", c.trials},
                  {"session", c.session}});
    } else if (c.subcommand == "verify") {
        j.update({{"tables", c.tables}, {"golden", c.golden}});
    } else {
        j.update({{"n", c.n}, {"client", c.client}});
    }
    return j;
}

inline nlohmann::json envelope(const RunConfig& c) {
    return {{"tool_version", kToolVersion}, {"schema_version", kSchemaVersion}, {"config_echo", config_echo(c)}};
}

/// Named states on the given ids: zero, plus, ghz, w.
inline PureState preset_state(const std::string& name, const std::vector<QubitId>& ids) {
    const std::size_t dim = std::size_t{1} << ids.size();
    std::vector<Amplitude> amps(dim, 0.0);
    if (name == "zero") {
        amps[0] = 1.0;
    } else if (name == "plus") {
        for (auto& a : amps) a = 1.0;
    } else if (name == "ghz") {
        amps[0] = amps[dim - 1] = 1.0;
    } else if (name == "w") {
        for (std::size_t q = 0; q < ids.size(); ++q) amps[std::size_t{1} << q] = 1.0;
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown preset '" + name + "' (zero, plus, ghz, w)");
    }
    return PureState::renormalized(ids, std::move(amps));
}

/// random | file:PATH | preset:NAME. File states keep their own ids and are
/// checked against `ids` by the caller's layout validation.
inline PureState load_client(const std::string& source, const std::vector<QubitId>& ids, Rng& rng) {
    if (source == "random") return random_state(ids, rng);
    if (source.rfind("file:", 0) == 0) return read_state_file(source.substr(5));
    if (source.rfind("preset:", 0) == 0) return preset_state(source.substr(7), ids);
    throw Error(ErrorCode::InvalidArgument, "client must be random, file:PATH or preset:NAME");
}

inline void emit(const RunConfig& c, const nlohmann::json& doc, const std::string& text, std::ostream& out) {
    const std::string body = c.format == "json" ? doc.dump(2) + "\n" : text;
    if (c.out.empty()) {
        out << body;
    } else {
        std::ofstream file(c.out);
        if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + c.out);
        file << body;
    }
}

inline void require_format(const RunConfig& c) {
    if (c.format != "json" && c.format != "text") throw Error(ErrorCode::InvalidArgument, "format must be json or text");
}

inline int cmd_teleport(RunConfig c, std::ostream& out) {
    require_format(c);
    const ChannelSpec spec = ChannelSpec::parse(c.channel);
    if (c.n == 0) c.n = spec.n();
    if (c.n != spec.n())
        throw Error(ErrorCode::ArityError, "--n " + std::to_string(c.n) + " but channel has " + std::to_string(spec.n()) + " kinds");
    if (c.n > kMaxTeleportSlots) throw Error(ErrorCode::InvalidArgument, "teleport supports n <= 7");
    if (c.mode != "enumerate" && c.mode != "sample") throw Error(ErrorCode::InvalidArgument, "mode must be enumerate or sample");
    if (c.trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
    if (c.mode == "enumerate" && (c.trials != 1 || c.session))
        throw Error(ErrorCode::InvalidArgument, "--trials and --session apply to sample mode only");

    const ProtocolLayout layout(c.n);
    Rng master(c.seed);
    const PureState client = load_client(c.client, layout.client_ids(), master);
    require_client_layout(layout, client);

    std::vector<std::pair<std::optional<std::uint64_t>, TeleportReport>> runs;
    if (c.mode == "enumerate") {
        for (auto& r : run_protocol(spec, client, Enumerate{})) runs.emplace_back(std::nullopt, std::move(r));
    } else {
        for (std::size_t t = 0; t < c.trials; ++t) {
            const std::uint64_t seed = master();
            if (c.session) {
                auto [alice_end, bob_end] = make_pipe();
                runs.emplace_back(seed, run_session(spec, client, alice_end, bob_end, seed));
            } else {
                runs.emplace_back(seed, run_protocol(spec, client, Sample{seed}).front());
            }
        }
    }

    const double uniform = std::pow(4.0, -static_cast<double>(c.n));
    double min_fidelity = 1.0;
    double max_dev = 0.0;
    nlohmann::json branches = nlohmann::json::array();
    std::ostringstream text;
    for (const auto& [seed, r] : runs) {
        min_fidelity = std::min(min_fidelity, r.fidelity_vs_client);
        max_dev = std::max(max_dev, std::abs(r.probability - uniform));
        nlohmann::json b{{"outcome", kinds_to_json(r.outcome)}, {"probability", r.probability}, {"fidelity", r.fidelity_vs_client}};
        if (seed) b["seed"] = *seed;
        branches.push_back(std::move(b));
        text << ChannelSpec(r.outcome).to_string() << "  p=" << r.probability << "  F=" << r.fidelity_vs_client << "\n";
    }
    const bool ok = min_fidelity >= 1.0 - kPipelineTolerance;
    text << "branches=" << runs.size() << " min_fidelity=" << min_fidelity << " max_prob_deviation=" << max_dev
         << (ok ? "  OK\n" : "  FIDELITY FAILURE\n");

    auto doc = envelope(c);
    doc["client_state"] = state_to_json(client);
    doc["branches"] = std::move(branches);
    doc["aggregate"] = {{"min_fidelity", min_fidelity}, {"max_prob_deviation", max_dev}, {"ok", ok}};
    emit(c, doc, text.str(), out);
    return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_verify(RunConfig c, std::ostream& out, std::ostream& err) {
    require_format(c);
    const auto tables = oracle::load_reference_tables(c.tables);
    const auto golden = oracle::golden_from_json(read_json_file(c.golden));
    const auto report = oracle::verify_reference_tables(tables);
    const auto mismatches = oracle::golden_mismatches(report, golden);

    auto doc = envelope(c);
    doc.update(oracle::report_to_json(report));
    doc["golden_mismatches"] = mismatches;
    std::string text = oracle::report_to_text(report);
    text += mismatches.empty() ? "golden: agree\n" : "golden: " + std::to_string(mismatches.size()) + " mismatch(es)\n";
    emit(c, doc, text, out);
    for (const auto& m : mismatches) err << "golden mismatch: " << m << "\n";
    return mismatches.empty() ? kExitOk : kExitCheckFailed;
}

inline int cmd_basis(RunConfig c, std::ostream& out) {
    require_format(c);
    if (c.n == 0 || c.n > kMaxBasisSlots) throw Error(ErrorCode::InvalidArgument, "basis needs 1 <= n <= 5");
    const auto basis = cross_bell_basis(ProtocolLayout(c.n).channel_pairs());
    double max_dev = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i; j < basis.size(); ++j)
            max_dev = std::max(max_dev, std::abs(inner(basis[i], basis[j]) - Amplitude(i == j ? 1.0 : 0.0)));
    const bool ok = max_dev < kNormTolerance;
    auto doc = envelope(c);
    doc["basis_size"] = basis.size();
    doc["max_deviation"] = max_dev;
    doc["ok"] = ok;
    std::ostringstream text;
    text << "basis_size=" << basis.size() << " max_deviation=" << max_dev << (ok ? "  OK\n" : "  NOT ORTHONORMAL\n");
    emit(c, doc, text.str(), out);
    return ok ? kExitOk : kExitCheckFailed;
}

/// Expands a 2n-qubit state on ids 1..2n over the cross-Bell basis of pairs
/// (m+1, n+m+1).
inline int cmd_expand(RunConfig c, std::ostream& out) {
    require_format(c);
    if (c.n == 0 || c.n > kMaxExpandSlots) throw Error(ErrorCode::InvalidArgument, "expand needs 1 <= n <= 5");
    const ProtocolLayout layout(c.n);
    std::vector<QubitId> ids = layout.bob_ids();
    for (auto q : layout.alice_ids()) ids.push_back(q);
    Rng master(c.seed);
    const PureState s = load_client(c.client, ids, master);
    if (canonicalize(s).qubits() != ids)
        throw Error(ErrorCode::QubitSetMismatch, "expand needs a state on qubits 1.." + std::to_string(2 * c.n));

    const auto expansion = expand_in_cross_bell(s, layout.channel_pairs());
    nlohmann::json terms = nlohmann::json::array();
    std::ostringstream text;
    double total = 0.0;
    for (const auto& [kinds, a] : expansion) {
        total += std::norm(a);
        if (std::abs(a) <= kNormTolerance) continue;
        terms.push_back({{"kinds", kinds_to_json(kinds)}, {"amplitude", {a.real(), a.imag()}}, {"weight", std::norm(a)}});
        text << ChannelSpec(kinds).to_string() << "  " << a << "\n";
    }
    text << "terms=" << terms.size() << " total_weight=" << total << "\n";
    auto doc = envelope(c);
    doc["state"] = state_to_json(s);
    doc["terms"] = std::move(terms);
    doc["total_weight"] = total;
    emit(c, doc, text.str(), out);
    return kExitOk;
}

} // namespace crossbell::cli

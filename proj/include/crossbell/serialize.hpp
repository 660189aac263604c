#pragma once

// JSON forms of states and reports, plus the state file format:
//
//   {"qubits": [5, 6], "amplitudes": [[re, im], [re, im], [re, im], [re, im]]}
//
// qubits ascending, amplitudes in index order (first qubit = MSB). Doubles are
// written in shortest round-trip form, so write -> read is bit-exact.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "crossbell/bell.hpp"
#include "crossbell/error.hpp"
#include "crossbell/statevec.hpp"
#include "crossbell/teleport.hpp"

namespace crossbell {

inline nlohmann::json state_to_json(const PureState& s) {
    const PureState c = canonicalize(s);
    nlohmann::json qubits = nlohmann::json::array();
    for (const auto& q : c.qubits()) qubits.push_back(q.value);
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : c.amplitudes()) amps.push_back({a.real(), a.imag()});
    return {{"qubits", std::move(qubits)}, {"amplitudes", std::move(amps)}};
}

/// Parses the state file document. Rejects non-ascending ids, wrong lengths
/// and unnormalized vectors (no silent renormalization).
inline PureState state_from_json(const nlohmann::json& doc) {
    try {
        std::vector<QubitId> qubits;
        for (const auto& q : doc.at("qubits")) {
            const auto v = q.get<long long>();
            if (v <= 0) throw Error(ErrorCode::ParseError, "qubit ids must be positive");
            qubits.push_back(QubitId{static_cast<std::uint32_t>(v)});
        }
        if (!std::is_sorted(qubits.begin(), qubits.end()))
            throw Error(ErrorCode::ParseError, "qubit ids must be listed in ascending order");
        std::vector<Amplitude> amps;
        for (const auto& pair : doc.at("amplitudes")) {
            if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::ParseError, "amplitude must be [re, im]");
            amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        return PureState(std::move(qubits), std::move(amps));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

inline PureState read_state_file(const std::filesystem::path& path) { return state_from_json(read_json_file(path)); }

inline void write_state_file(const std::filesystem::path& path, const PureState& s) { write_json_file(path, state_to_json(s)); }

inline nlohmann::json kinds_to_json(const std::vector<BellKind>& kinds) {
    nlohmann::json out = nlohmann::json::array();
    for (auto k : kinds) out.push_back(std::string(to_string(k)));
    return out;
}

inline nlohmann::json report_to_json(const TeleportReport& r) {
    return {{"outcome", kinds_to_json(r.outcome)},
            {"probability", r.probability},
            {"bob_pre_state", state_to_json(r.bob_pre_state)},
            {"bob_corrected", state_to_json(r.bob_corrected)},
            {"fidelity", r.fidelity_vs_client}};
}

} // namespace crossbell

// Teleports a random two-qubit state through the (phi+, phi-) channel, once
// through run_protocol and once as an Alice/Bob session over a byte pipe.

#include <iostream>

#include "crossbell/crossbell.hpp"

int main() {
    using namespace crossbell;
    const auto spec = ChannelSpec::parse("phi+,phi-");
    const ProtocolLayout layout(spec.n());
    Rng rng(2024);
    const PureState client = random_state(layout.client_ids(), rng);

    for (const auto& r : run_protocol(spec, client, Enumerate{}))
        std::cout << ChannelSpec(r.outcome).to_string() << "  p=" << r.probability << "  F=" << r.fidelity_vs_client << "\n";

    auto [alice, bob] = make_pipe();
    const auto r = run_session(spec, client, alice, bob, 99);
    std::cout << "session outcome " << ChannelSpec(r.outcome).to_string() << ", fidelity " << r.fidelity_vs_client << "\n";
    for (const auto& u : corrections_for(spec, r.outcome)) std::cout << "  correction " << oracle::detail::describe_unitary(u) << "\n";
}

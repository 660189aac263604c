#include <cmath>

#include "brute_force.hpp"
#include "test_support.hpp"

using namespace test;

namespace {
const std::vector<BellKind> kPP{BellKind::PsiPlus, BellKind::PsiPlus};
}

TEST(ProtocolLayout, Ids) {
    const ProtocolLayout l(2);
    EXPECT_EQ(l.bob_ids(), (std::vector<QubitId>{1_q, 2_q}));
    EXPECT_EQ(l.alice_ids(), (std::vector<QubitId>{3_q, 4_q}));
    EXPECT_EQ(l.client_ids(), (std::vector<QubitId>{5_q, 6_q}));
    EXPECT_EQ(l.channel_pairs(), (std::vector<QubitPair>{{1_q, 3_q}, {2_q, 4_q}}));
    EXPECT_EQ(l.measure_pairs(), (std::vector<QubitPair>{{3_q, 5_q}, {4_q, 6_q}}));
}

TEST(PrepareChannel, Shapes) {
    EXPECT_EQ(prepare_channel(ChannelSpec::parse("psi+")), bell_state(BellKind::PsiPlus, {1_q, 2_q}));
    const PureState s3 = prepare_channel(ChannelSpec::parse("phi+,phi+,phi+"));
    EXPECT_EQ(s3.dimension(), 64u);
    EXPECT_NEAR(s3.norm_squared(), 1.0, 1e-12);
}

TEST(TotalState, DisplayedProduct) {
    const auto spec = ChannelSpec::parse("phi+,phi-");
    const PureState client = generic_client();
    const PureState t = total_state(prepare_channel(spec), client);
    const auto ch = bf::channel(spec.kinds());
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(t.amplitude(4 * i + j) - ch[i] * client.amplitude(j)), 0.0, 1e-15);
}

TEST(TotalState, WrongClientIds) {
    expect_error(ErrorCode::QubitSetMismatch,
                 [] { total_state(prepare_channel(ChannelSpec::parse("phi+,phi-")), generic_client(5_q, 7_q)); });
}

TEST(CorrectionsFor, PsiPlusPsiPlusOnStatedChannel) {
    const auto c = corrections_for(ChannelSpec::parse("phi+,phi-"), kPP);
    expect_unitary_eq(c[0], pauli(Pauli::X));
    expect_unitary_eq(c[1], i_sigma_y());
}

TEST(CorrectionsFor, PhiPlusPhiPlusOnStatedChannel) {
    const auto c = corrections_for(ChannelSpec::parse("phi+,phi-"), {BellKind::PhiPlus, BellKind::PhiPlus});
    expect_unitary_eq(c[0], pauli(Pauli::I));
    expect_unitary_eq(c[1], pauli(Pauli::Z));
}

TEST(CorrectionsFor, PsiPlusChannelFixedPoint) {
    for (const auto& u : corrections_for(ChannelSpec::parse("psi+,psi+"), kPP)) {
        EXPECT_TRUE(approx_equal(u, pauli(Pauli::I), 1e-12) || approx_equal(u, -pauli(Pauli::I), 1e-12));
    }
}

TEST(CorrectionsFor, PublishedMatricesInPhysicalSlots) {
    // Channel (phi+, phi-): slot 0 uses the row indexed by pair (4,6) of the
    // published table, slot 1 the row indexed by pair (3,5), each verbatim.
    const auto table = reference_correction_table();
    const auto spec = ChannelSpec::parse("phi+,phi-");
    for (auto k0 : kBellKinds)
        for (auto k1 : kBellKinds) {
            const auto c = corrections_for(spec, {k0, k1});
            expect_unitary_eq(c[0], table.at(1, k0));
            expect_unitary_eq(c[1], table.at(0, k1));
        }
}

TEST(CorrectionsFor, ProductEqualsTransferMatrix) {
    for (const auto& kinds : all_kind_tuples(2)) {
        const ChannelSpec spec(kinds);
        for (const auto& outcome : all_kind_tuples(2)) {
            const auto c = corrections_for(spec, outcome);
            const auto t = oracle::transfer_matrix(spec, outcome);
            const auto k = oracle::detail::kron(c[0], c[1]);
            for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(std::abs(4.0 * t.entries[i] - k[i]), 0.0, 1e-12);
        }
    }
}

TEST(CorrectionsFor, Arity) {
    expect_error(ErrorCode::ArityError, [] { corrections_for(ChannelSpec::parse("phi+,phi-"), {BellKind::PsiPlus}); });
}

TEST(Recover, Identity) {
    const PureState s = generic_client(1_q, 2_q);
    const std::array<Unitary2, 2> id{pauli(Pauli::I), pauli(Pauli::I)};
    EXPECT_EQ(recover(s, id), s);
}

TEST(Recover, UndoesFirstBranch) {
    const PureState client = generic_client(1_q, 2_q);
    const auto [a, b, c, d] = std::array<Amplitude, 4>{client.amplitude(0), client.amplitude(1), client.amplitude(2), client.amplitude(3)};
    const PureState pre({1_q, 2_q}, {d, c, -b, -a});
    const std::array<Unitary2, 2> corr{i_sigma_y(), pauli(Pauli::X)};
    expect_amps(recover(pre, corr), {a, b, c, d});
}

TEST(RunProtocol, EnumerateTwoSlots) {
    const auto spec = ChannelSpec::parse("phi+,phi-");
    const auto reports = run_protocol(spec, generic_client(), Enumerate{});
    ASSERT_EQ(reports.size(), 16u);
    const auto tuples = all_kind_tuples(2);
    for (std::size_t i = 0; i < 16; ++i) {
        EXPECT_EQ(reports[i].outcome, tuples[i]);
        EXPECT_NEAR(reports[i].probability, 1.0 / 16.0, 1e-12);
        EXPECT_NEAR(reports[i].fidelity_vs_client, 1.0, 1e-12);
        const auto expected = bf::bob_unnormalized(spec.kinds(), tuples[i], amps_of(generic_client()));
        EXPECT_NEAR(bf::overlap(amps_of(reports[i].bob_pre_state), expected), 1.0, 1e-12);
    }
}

TEST(RunProtocol, SampleMatchesEnumeratedBranch) {
    const auto spec = ChannelSpec::parse("psi-,phi+");
    const auto all = run_protocol(spec, generic_client(), Enumerate{});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto r = run_protocol(spec, generic_client(), Sample{seed});
        ASSERT_EQ(r.size(), 1u);
        const auto& branch = all[oracle::tuple_index(r[0].outcome)];
        EXPECT_NEAR(r[0].probability, branch.probability, 1e-12);
        EXPECT_NEAR(fidelity(r[0].bob_pre_state, branch.bob_pre_state), 1.0, 1e-12);
    }
}

TEST(RunProtocol, ClientLayoutChecked) {
    expect_error(ErrorCode::QubitSetMismatch,
                 [] { run_protocol(ChannelSpec::parse("phi+,phi-"), generic_client(1_q, 2_q), Enumerate{}); });
}

TEST(RunProtocol, ProductClientTeleportsPerSlot) {
    // A product client goes through as two independent one-qubit teleportations.
    const PureState q0 = PureState::renormalized({5_q}, {{0.3, 0.1}, {-0.2, 0.9}});
    const PureState q1 = PureState::renormalized({6_q}, {{0.7, 0.0}, {0.1, -0.4}});
    const auto spec = ChannelSpec::parse("phi+,phi-");
    for (const auto& r : run_protocol(spec, cross(q0, q1), Enumerate{})) {
        const auto [f0, f1] = oracle::factorize_product(r.bob_corrected);
        EXPECT_NEAR(fidelity(f0, relabel(q0, std::array<std::pair<QubitId, QubitId>, 1>{{{5_q, 1_q}}})), 1.0, 1e-9);
        EXPECT_NEAR(fidelity(f1, relabel(q1, std::array<std::pair<QubitId, QubitId>, 1>{{{6_q, 2_q}}})), 1.0, 1e-9);
    }
}

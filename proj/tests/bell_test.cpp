#include <cmath>

#include "brute_force.hpp"
#include "test_support.hpp"

using namespace test;

namespace {
const double h = 1.0 / std::sqrt(2.0);
}

TEST(BellKind, NamesRoundTrip) {
    for (auto k : kBellKinds) EXPECT_EQ(parse_bell_kind(to_string(k)), k);
    expect_error(ErrorCode::ParseError, [] { parse_bell_kind("psi"); });
    expect_error(ErrorCode::ParseError, [] { parse_bell_kind("PHI+"); });
}

TEST(BellState, Convention) {
    expect_amps(bell_state(BellKind::PsiPlus, {1_q, 3_q}), {h, 0, 0, h});
    expect_amps(bell_state(BellKind::PsiMinus, {1_q, 3_q}), {h, 0, 0, -h});
    expect_amps(bell_state(BellKind::PhiPlus, {1_q, 3_q}), {0, h, h, 0});
    expect_amps(bell_state(BellKind::PhiMinus, {2_q, 4_q}), {0, h, -h, 0});
}

TEST(BellState, FirstIdOfPairIsFirstKetDigit) {
    // (4,2): qubit 4 carries the first digit, so after sorting the sign moves.
    expect_amps(bell_state(BellKind::PhiMinus, {4_q, 2_q}), {0, -h, h, 0});
}

TEST(BellState, LabelMagnitudeIrrelevant) {
    for (auto k : kBellKinds) EXPECT_EQ(amps_of(bell_state(k, {1_q, 3_q})), amps_of(bell_state(k, {7_q, 9_q})));
}

TEST(BellState, DuplicateQubit) {
    expect_error(ErrorCode::DuplicateQubit, [] { bell_state(BellKind::PsiPlus, {2_q, 2_q}); });
}

TEST(ChannelSpec, Parse) {
    const auto s = ChannelSpec::parse("phi+,phi-");
    EXPECT_EQ(s.n(), 2u);
    EXPECT_EQ(s[0], BellKind::PhiPlus);
    EXPECT_EQ(s[1], BellKind::PhiMinus);
    EXPECT_EQ(s.to_string(), "phi+,phi-");
    expect_error(ErrorCode::ParseError, [] { ChannelSpec::parse("phi+,"); });
    expect_error(ErrorCode::ParseError, [] { ChannelSpec::parse(""); });
    expect_error(ErrorCode::InvalidArgument, [] { ChannelSpec(std::vector<BellKind>{}); });
}

TEST(CrossBellState, ChannelMatchesBruteForce) {
    const auto spec = ChannelSpec::parse("phi+,phi-");
    expect_amps(cross_bell_state(spec, ProtocolLayout(2).channel_pairs()), bf::channel(spec.kinds()));
}

TEST(CrossBellState, SinglePairIsBellState) {
    const std::array<QubitPair, 1> p{QubitPair{1_q, 2_q}};
    EXPECT_EQ(cross_bell_state(ChannelSpec({BellKind::PsiPlus}), p), bell_state(BellKind::PsiPlus, {1_q, 2_q}));
}

TEST(CrossBellState, ThreeSlots) {
    const auto spec = ChannelSpec::parse("psi+,psi+,psi-");
    const PureState s = cross_bell_state(spec, ProtocolLayout(3).channel_pairs());
    EXPECT_EQ(s.dimension(), 64u);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
    expect_amps(s, bf::channel(spec.kinds()));
}

TEST(CrossBellState, Errors) {
    const std::array<QubitPair, 1> one{QubitPair{1_q, 3_q}};
    expect_error(ErrorCode::ArityError, [&] { cross_bell_state(ChannelSpec::parse("phi+,phi-"), one); });
    const std::array<QubitPair, 2> overlap{QubitPair{1_q, 3_q}, QubitPair{3_q, 4_q}};
    expect_error(ErrorCode::QubitCollision, [&] { cross_bell_state(ChannelSpec::parse("phi+,phi-"), overlap); });
}

TEST(CrossBellBasis, SinglePairIsBellBasis) {
    const std::array<QubitPair, 1> p{QubitPair{1_q, 2_q}};
    const auto basis = cross_bell_basis(p);
    ASSERT_EQ(basis.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(basis[i], bell_state(kBellKinds[i], {1_q, 2_q}));
}

TEST(CrossBellBasis, TupleOrder) {
    const auto t = all_kind_tuples(2);
    ASSERT_EQ(t.size(), 16u);
    EXPECT_EQ(t[1], (std::vector<BellKind>{BellKind::PsiPlus, BellKind::PsiMinus}));
    EXPECT_EQ(t[4], (std::vector<BellKind>{BellKind::PsiMinus, BellKind::PsiPlus}));
}

TEST(ExpandInCrossBell, AllZeros) {
    const auto e = expand_in_cross_bell(ket({{1_q, 0}, {2_q, 0}, {3_q, 0}, {4_q, 0}}), ProtocolLayout(2).channel_pairs());
    for (const auto& [kinds, c] : e) {
        const bool psi = (kinds[0] == BellKind::PsiPlus || kinds[0] == BellKind::PsiMinus) &&
                         (kinds[1] == BellKind::PsiPlus || kinds[1] == BellKind::PsiMinus);
        EXPECT_NEAR(std::abs(c - (psi ? 0.5 : 0.0)), 0.0, 1e-12) << ChannelSpec(kinds).to_string();
    }
}

TEST(ExpandInCrossBell, BasisElement) {
    const auto spec = ChannelSpec::parse("phi+,phi-");
    const auto pairs = ProtocolLayout(2).channel_pairs();
    for (const auto& [kinds, c] : expand_in_cross_bell(cross_bell_state(spec, pairs), pairs))
        EXPECT_NEAR(std::abs(c - (kinds == spec.kinds() ? 1.0 : 0.0)), 0.0, 1e-12);
}

TEST(ExpandInCrossBell, QubitSetMismatch) {
    expect_error(ErrorCode::QubitSetMismatch, [] {
        expand_in_cross_bell(ket({{1_q, 0}, {2_q, 0}, {3_q, 0}, {5_q, 0}}), ProtocolLayout(2).channel_pairs());
    });
}

TEST(ReferenceCorrectionTable, Entries) {
    const auto t = reference_correction_table();
    EXPECT_EQ(t.size(), 8u);
    expect_unitary_eq(t.at(0, BellKind::PsiPlus), i_sigma_y());
    expect_unitary_eq(t.at(0, BellKind::PhiMinus), -pauli(Pauli::I));
    expect_unitary_eq(t.at(1, BellKind::PsiMinus), -i_sigma_y());
    expect_unitary_eq(t.at(1, BellKind::PhiMinus), -pauli(Pauli::Z));
    for (const auto& [key, u] : t.entries()) EXPECT_TRUE(u.is_real(1e-15));
}

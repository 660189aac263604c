#include <thread>

#include "test_support.hpp"

using namespace test;

namespace {

/// Endpoint that forwards to a pipe but can corrupt or truncate the frame.
class TamperingEndpoint {
public:
    TamperingEndpoint(PipeEndpoint inner, std::function<void(std::vector<std::uint8_t>&)> edit)
        : inner_(std::move(inner)), edit_(std::move(edit)) {}
    void send(std::span<const std::uint8_t> data) {
        std::vector<std::uint8_t> copy(data.begin(), data.end());
        edit_(copy);
        inner_.send(copy);
    }
    bool receive(std::span<std::uint8_t> buffer) { return inner_.receive(buffer); }
    void close() { inner_.close(); }

private:
    PipeEndpoint inner_;
    std::function<void(std::vector<std::uint8_t>&)> edit_;
};

} // namespace

TEST(ClassicalMessage, EncodeLayout) {
    const ClassicalMessage m{{BellKind::PsiMinus, BellKind::PhiMinus, BellKind::PhiPlus}};
    const auto f = m.encode();
    ASSERT_EQ(f.size(), 7u);
    EXPECT_EQ(std::string(f.begin(), f.begin() + 4), "XBTP");
    EXPECT_EQ(f[4], 1);
    EXPECT_EQ(f[5], 3);
    EXPECT_EQ(f[6], 0b01111000);
    EXPECT_EQ(ClassicalMessage::frame_size(4), 7u);
    EXPECT_EQ(ClassicalMessage::frame_size(5), 8u);
    EXPECT_EQ(ClassicalMessage::decode(f), m);
}

TEST(ClassicalMessage, RoundTripAllLengths) {
    Rng rng(8);
    for (std::size_t n = 1; n <= 9; ++n) {
        ClassicalMessage m;
        for (std::size_t i = 0; i < n; ++i) m.outcomes.push_back(kBellKinds[rng() % 4]);
        EXPECT_EQ(ClassicalMessage::decode(m.encode(), n), m);
        EXPECT_EQ(ClassicalMessage::from_bits(m.bits(), n), m);
    }
}

TEST(ClassicalMessage, ThreeBitsForTwoSlots) {
    expect_error(ErrorCode::ProtocolViolation, [] { ClassicalMessage::from_bits({true, false, true}, 2); });
}

TEST(ClassicalMessage, MalformedFrames) {
    const auto good = ClassicalMessage{{BellKind::PhiPlus}}.encode();
    auto bad_magic = good;
    bad_magic[0] = 'Y';
    auto bad_version = good;
    bad_version[4] = 2;
    auto zero_n = good;
    zero_n[5] = 0;
    auto padding = good;
    padding[6] |= 0x01;
    auto longer = good;
    longer.push_back(0);
    for (const auto& f : {bad_magic, bad_version, zero_n, padding, longer})
        expect_error(ErrorCode::ProtocolViolation, [&] { ClassicalMessage::decode(f); });
    expect_error(ErrorCode::ProtocolViolation, [&] { ClassicalMessage::decode(std::span(good).first(3)); });
    expect_error(ErrorCode::ProtocolViolation, [&] { ClassicalMessage::decode(good, 2); });
}

TEST(Pipe, ReceiveAfterClose) {
    auto [a, b] = make_pipe();
    const std::array<std::uint8_t, 3> data{1, 2, 3};
    a.send(data);
    a.close();
    std::array<std::uint8_t, 2> two{};
    EXPECT_TRUE(b.receive(two));
    EXPECT_EQ(two[1], 2);
    EXPECT_FALSE(b.receive(two));
}

TEST(RunSession, MatchesSampleMode) {
    const auto spec = ChannelSpec::parse("phi+,phi-");
    Rng rng(77);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const PureState client = random_state({5_q, 6_q}, rng);
        auto [a, b] = make_pipe();
        const auto s = run_session(spec, client, a, b, seed);
        const auto p = run_protocol(spec, client, Sample{seed}).front();
        EXPECT_EQ(report_to_json(s).dump(), report_to_json(p).dump());
        EXPECT_NEAR(s.fidelity_vs_client, 1.0, 1e-9);
    }
}

TEST(RunSession, CorruptedFrame) {
    auto [a, b] = make_pipe();
    TamperingEndpoint alice(std::move(a), [](auto& f) { f[6] |= 0x0F; }); // padding bits for n=2
    expect_error(ErrorCode::ProtocolViolation, [&] { run_session(ChannelSpec::parse("phi+,phi-"), generic_client(), alice, b, 1); });
}

TEST(RunSession, WrongSlotCount) {
    auto [a, b] = make_pipe();
    TamperingEndpoint alice(std::move(a), [](auto& f) { f[5] = 3; });
    expect_error(ErrorCode::ProtocolViolation, [&] { run_session(ChannelSpec::parse("phi+,phi-"), generic_client(), alice, b, 1); });
}

TEST(RunSession, TruncatedFrame) {
    auto [a, b] = make_pipe();
    TamperingEndpoint alice(std::move(a), [](auto& f) { f.resize(4); });
    expect_error(ErrorCode::SessionAborted, [&] { run_session(ChannelSpec::parse("phi+,phi-"), generic_client(), alice, b, 1); });
}

TEST(RunSession, AliceErrorSurfaces) {
    auto [a, b] = make_pipe();
    expect_error(ErrorCode::QubitSetMismatch,
                 [&] { run_session(ChannelSpec::parse("phi+,phi-"), generic_client(1_q, 2_q), a, b, 1); });
}

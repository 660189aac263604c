#pragma once

// Two-actor realization of the protocol. Alice and Bob share nothing but a
// reliable in-order byte stream; Alice runs on her own thread.
//
// The simulation still needs Bob's post-measurement qubits, which in a real
// deployment would already sit in Bob's lab. That state crosses over through
// a Handoff promise that Alice fulfils before she sends her frame.

#include <condition_variable>
#include <concepts>
#include <cstdint>
#include <deque>
#include <exception>
#include <future>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "crossbell/channel.hpp"
#include "crossbell/error.hpp"
#include "crossbell/message.hpp"
#include "crossbell/teleport.hpp"

namespace crossbell {

/// One end of a duplex byte stream. receive() fills the whole buffer or
/// returns false if the peer closed first.
template <class T>
concept ByteEndpoint = requires(T& t, std::span<const std::uint8_t> out, std::span<std::uint8_t> in) {
    t.send(out);
    { t.receive(in) } -> std::same_as<bool>;
    t.close();
};

namespace detail {
struct ByteQueue {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<std::uint8_t> bytes;
    bool closed = false;
};
} // namespace detail

/// In-process duplex pipe endpoint; see make_pipe().
class PipeEndpoint {
public:
    PipeEndpoint(std::shared_ptr<detail::ByteQueue> inbox, std::shared_ptr<detail::ByteQueue> outbox)
        : inbox_(std::move(inbox)), outbox_(std::move(outbox)) {}

    void send(std::span<const std::uint8_t> data) {
        {
            std::lock_guard lock(outbox_->mutex);
            if (outbox_->closed) throw Error(ErrorCode::SessionAborted, "send on closed pipe");
            outbox_->bytes.insert(outbox_->bytes.end(), data.begin(), data.end());
        }
        outbox_->ready.notify_all();
    }

    bool receive(std::span<std::uint8_t> buffer) {
        std::unique_lock lock(inbox_->mutex);
        inbox_->ready.wait(lock, [&] { return inbox_->bytes.size() >= buffer.size() || inbox_->closed; });
        if (inbox_->bytes.size() < buffer.size()) return false;
        std::copy_n(inbox_->bytes.begin(), buffer.size(), buffer.begin());
        inbox_->bytes.erase(inbox_->bytes.begin(), inbox_->bytes.begin() + static_cast<std::ptrdiff_t>(buffer.size()));
        return true;
    }

    /// Ends this side's outgoing direction; buffered bytes stay readable.
    void close() {
        {
            std::lock_guard lock(outbox_->mutex);
            outbox_->closed = true;
        }
        outbox_->ready.notify_all();
    }

private:
    std::shared_ptr<detail::ByteQueue> inbox_;
    std::shared_ptr<detail::ByteQueue> outbox_;
};

static_assert(ByteEndpoint<PipeEndpoint>);

inline std::pair<PipeEndpoint, PipeEndpoint> make_pipe() {
    auto a_to_b = std::make_shared<detail::ByteQueue>();
    auto b_to_a = std::make_shared<detail::ByteQueue>();
    return {PipeEndpoint(b_to_a, a_to_b), PipeEndpoint(a_to_b, b_to_a)};
}

using Handoff = MeasuredBranch;

/// Holds qubits n+1..3n: prepares the total state, measures, sends the outcome.
class AliceActor {
public:
    AliceActor(ChannelSpec spec, PureState client, std::uint64_t seed)
        : spec_(std::move(spec)), client_(std::move(client)), seed_(seed) {}

    template <ByteEndpoint Endpoint>
    void run(Endpoint& endpoint, std::promise<Handoff>& handoff) {
        std::vector<std::uint8_t> frame;
        try {
            const ProtocolLayout layout(spec_.n());
            require_client_layout(layout, client_);
            const PureState total = total_state(prepare_channel(spec_), client_);
            MeasuredBranch branch = sample_measurements(total, layout, seed_);
            frame = ClassicalMessage{branch.outcome}.encode();
            handoff.set_value(std::move(branch));
        } catch (...) {
            handoff.set_exception(std::current_exception());
            endpoint.close();
            throw;
        }
        endpoint.send(frame);
        endpoint.close();
    }

private:
    ChannelSpec spec_;
    PureState client_;
    std::uint64_t seed_;
};

struct BobResult {
    std::vector<BellKind> outcome;
    double probability;
    PureState bob_pre_state;
    PureState bob_corrected;
};

/// Holds qubits 1..n: reads one frame, applies the inverse corrections.
class BobActor {
public:
    explicit BobActor(ChannelSpec spec) : spec_(std::move(spec)) {}

    template <ByteEndpoint Endpoint>
    BobResult run(Endpoint& endpoint, std::future<Handoff> handoff) {
        const std::size_t n = spec_.n();
        std::vector<std::uint8_t> frame(ClassicalMessage::kHeaderSize);
        if (!endpoint.receive(frame)) throw Error(ErrorCode::SessionAborted, "channel closed before header");
        if (frame[5] != n)
            throw Error(ErrorCode::ProtocolViolation,
                        "frame announces n=" + std::to_string(frame[5]) + ", session expects " + std::to_string(n));
        frame.resize(ClassicalMessage::frame_size(n));
        if (!endpoint.receive(std::span(frame).subspan(ClassicalMessage::kHeaderSize)))
            throw Error(ErrorCode::SessionAborted, "channel closed inside frame");
        const auto msg = ClassicalMessage::decode(frame, n);

        Handoff local = handoff.get();
        const auto corr = corrections_for(spec_, msg.outcomes);
        PureState corrected = recover(local.bob_state, corr);
        return {msg.outcomes, local.probability, std::move(local.bob_state), std::move(corrected)};
    }

private:
    ChannelSpec spec_;
};

/// Runs Alice on a worker thread and Bob on the caller's thread. The result
/// matches run_protocol(spec, client, Sample{seed}).front() exactly.
template <ByteEndpoint AliceEnd, ByteEndpoint BobEnd>
TeleportReport run_session(const ChannelSpec& spec, const PureState& client, AliceEnd& alice_end, BobEnd& bob_end,
                           std::uint64_t seed) {
    std::promise<Handoff> handoff;
    auto bob_view = handoff.get_future();
    std::exception_ptr alice_error;
    AliceActor alice(spec, client, seed);
    std::thread worker([&] {
        try {
            alice.run(alice_end, handoff);
        } catch (...) {
            alice_error = std::current_exception();
        }
    });

    BobResult bob_result = [&]() -> BobResult {
        try {
            return BobActor(spec).run(bob_end, std::move(bob_view));
        } catch (...) {
            bob_end.close();
            worker.join();
            if (alice_error) std::rethrow_exception(alice_error);
            throw;
        }
    }();
    worker.join();
    if (alice_error) std::rethrow_exception(alice_error);

    const ProtocolLayout layout(spec.n());
    const double f = fidelity_with_client(layout, bob_result.bob_corrected, client);
    return {std::move(bob_result.outcome), bob_result.probability, std::move(bob_result.bob_pre_state),
            std::move(bob_result.bob_corrected), f};
}

} // namespace crossbell

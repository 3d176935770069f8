#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace vage {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of 64-bit words into one key.
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);

/// Stable 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a(const void* data, std::size_t size);

/// Identifies an independent random stream. Streams with different
/// (key, stream_id) pairs never share counter space.
struct StreamKey {
    std::uint64_t key = 0;
    std::uint64_t stream_id = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Key for replication `index` under `master_seed`.
std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t index);

/// Counter-based random stream. The state is (key, stream_id, block counter,
/// lane), so a stream can be reconstructed anywhere from its identity alone.
/// Single-owner: never share one instance across threads.
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream() = default;
    explicit RngStream(StreamKey id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();

    /// Uniform draw on the open interval (0, 1); never returns 0 or 1.
    double uniform();

    StreamKey id() const { return id_; }
    std::uint64_t blocks_used() const { return counter_; }

private:
    void refill();

    StreamKey id_{};
    std::uint64_t counter_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int lane_ = 2;
};

} // namespace vage

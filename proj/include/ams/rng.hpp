#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include <boost/random/normal_distribution.hpp>

namespace ams {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// A block is a pure function of (counter, key), so any draw can be
/// regenerated without replaying the stream.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }
};

/// What a substream is used for. Distinct purposes never share counters.
enum class StreamPurpose : std::uint32_t {
  Dynamics = 0,
  InitialCondition = 1,
  Selection = 2,
  Bridge = 3,
};

/// Identifies one substream under a master seed.
struct StreamKey {
  std::uint32_t realization = 0;
  std::uint32_t index = 0;  // trajectory id, or iteration for selection streams
  StreamPurpose purpose = StreamPurpose::Dynamics;
};

/// Sequential view over one Philox substream. Counter word 0 is the block
/// index, words 1..3 carry (purpose, index, realization).
class RandomStream {
 public:
  RandomStream(std::uint64_t masterSeed, StreamKey key) noexcept
      : key_{static_cast<std::uint32_t>(masterSeed), static_cast<std::uint32_t>(masterSeed >> 32)},
        ctr_{0u, static_cast<std::uint32_t>(key.purpose), key.index, key.realization} {}

  /// Uniform on the open interval (0,1) with 53-bit resolution.
  double uniform() noexcept {
    const std::uint64_t bits = next_u64();
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal (ziggurat).
  double normal() { return boost::random::normal_distribution<double>()(*this); }

  /// Uniform integer in [0, n).
  std::uint64_t index_below(std::uint64_t n) noexcept {
    const unsigned __int128 wide = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

  // UniformRandomBitGenerator interface, so standard and Boost distributions accept a stream.
  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    if (used_ == 4) refill();
    const std::uint64_t lo = buf_[used_];
    const std::uint64_t hi = buf_[used_ + 1];
    used_ += 2;
    return (hi << 32) | lo;
  }

 private:
  void refill() noexcept {
    buf_ = Philox4x32::block(ctr_, key_);
    ++ctr_[0];
    used_ = 0;
  }

  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter buf_{};
  int used_ = 4;
};

}  // namespace ams

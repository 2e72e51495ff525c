#ifndef ALPHAHASH_UTIL_HPP
#define ALPHAHASH_UTIL_HPP

#include <cstdint>
#include <functional>
#include <string>

namespace alphahash {

// 64-bit finalizer (splitmix64). Bijective, good avalanche down to the low bits,
// which matters because hash codes get truncated to widths as small as 8.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Deterministic RNG used by the expression generators and experiments.
// splitmix64 stream: identical output for identical seeds on every platform,
// unlike <random> distributions whose mapping is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in [0, bound), bound > 0. Lemire's multiply-shift reduction.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  bool coin() { return (next() & 1) != 0; }

private:
  std::uint64_t state_;
};

// Runs fn on a thread with the given stack size and waits for it.
// Expression trees can be as deep as their node count, so the recursive
// algorithms need far more than the default 8 MiB main stack.
void call_with_stack(std::size_t stack_bytes, const std::function<void()>& fn);

inline constexpr std::size_t kBigStack = 512u * 1024u * 1024u;

// Zero-padded lowercase hex, width_bits/4 digits.
std::string to_hex(std::uint64_t value, int width_bits);

}  // namespace alphahash

#endif

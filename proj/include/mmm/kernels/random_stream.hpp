#pragma once

#include <cstdint>
#include <limits>

namespace mmm {

// Counter-based pseudo-random stream. The pair (master_seed, stream_id)
// fixes the whole sequence; the counter is the position within it. Output k
// is a keyed hash of k, so a stream can be copied, replayed, or positioned
// without touching any other stream.
//
// Satisfies UniformRandomBitGenerator, so the <random> distributions accept
// it directly.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream() : RandomStream(0, 0) {}
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id,
               std::uint64_t counter = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Stream for the index-th child of this stream. Children of distinct
  // indices (and of distinct parents) are distinct streams.
  RandomStream split(std::uint64_t index) const;

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double normal(double mean, double sd);
  double exponential(double rate);
  double gamma(double shape, double scale = 1.0);
  double beta(double a, double b);
  std::uint64_t poisson(double mean);
  bool bernoulli(double p);
  std::uint64_t uniform_index(std::uint64_t n);

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
  std::uint64_t key_lo_;
  std::uint64_t key_hi_;
};

// 64-bit finalizer (SplitMix64 / Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b + 0x632BE59BD9B4E019ULL));
}

// The randomness handed to one chain. Event-driven kernels draw event times
// and event types from `clock` and event marks (shock values) from `marks`;
// other kernels draw only from `marks`. Splitting the two lets a coupling
// share the clock while keeping the marks independent.
struct Noise {
  RandomStream clock;
  RandomStream marks;

  Noise() = default;
  Noise(std::uint64_t master_seed, std::uint64_t stream_id);

  // Noise for the index-th child (e.g. one replication or sample point).
  Noise split(std::uint64_t index) const;

  friend bool operator==(const Noise&, const Noise&) = default;
};

}  // namespace mmm

#include "mmm/kernels/random_stream.hpp"

#include <cmath>
#include <random>

namespace mmm {

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id,
                           std::uint64_t counter)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      counter_(counter),
      key_lo_(hash_combine(master_seed, stream_id)),
      key_hi_(hash_combine(stream_id ^ 0xD1B54A32D192ED03ULL, master_seed)) {}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t c = counter_++;
  return mix64(mix64(c * 0x9E3779B97F4A7C15ULL + key_lo_) ^ key_hi_);
}

RandomStream RandomStream::split(std::uint64_t index) const {
  return RandomStream(master_seed_, hash_combine(stream_id_, index));
}

double RandomStream::uniform() {
  // 53 random bits, centred in their cell: never 0 or 1.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  // Box-Muller, both uniforms consumed, second variate discarded, so each
  // call advances the counter by exactly two.
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double RandomStream::normal(double mean, double sd) { return mean + sd * normal(); }

double RandomStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double RandomStream::gamma(double shape, double scale) {
  std::gamma_distribution<double> dist(shape, scale);
  return dist(*this);
}

double RandomStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

std::uint64_t RandomStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(*this);
}

bool RandomStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t RandomStream::uniform_index(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(*this);
}

Noise::Noise(std::uint64_t master_seed, std::uint64_t stream_id)
    : clock(RandomStream(master_seed, stream_id).split(0)),
      marks(RandomStream(master_seed, stream_id).split(1)) {}

Noise Noise::split(std::uint64_t index) const {
  Noise out;
  out.clock = clock.split(index);
  out.marks = marks.split(index);
  return out;
}

}  // namespace mmm

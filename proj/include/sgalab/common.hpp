#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sgalab {

using complexd = std::complex<double>;

// Domain failure of a locally-defined groupoid operation (Newton escape,
// guard violation). The CLI maps this to exit code 2.
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Structural misuse: bad dimensions, singular input, violated precondition.
class invalid_input : public std::runtime_error {
 public:
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

// splitmix64; used to derive independent per-sample streams from one seed.
inline std::uint64_t split_mix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic RNG with identical output on every platform. std::mt19937
// plus std:: distributions would tie report bytes to the standard library
// implementation, so the distributions are hand-rolled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // decorrelate trivially related seeds
    for (int i = 0; i < 4; ++i) (void)split_mix64(state_);
  }

  std::uint64_t next_u64() { return split_mix64(state_); }

  // uniform in [0,1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one value per call, no cached spare (determinism over speed).
  double gaussian() {
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  // Stream for sample `index` of a named check; independent of evaluation
  // order so concurrent sampling stays reproducible.
  static Rng for_sample(std::uint64_t seed, const std::string& check,
                        std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : check) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    std::uint64_t s = seed;
    (void)split_mix64(s);
    return Rng(s ^ h ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  }

 private:
  std::uint64_t state_;
};

// Thread cap from SGALAB_THREADS; defaults to 1 (sequential).
int max_threads();

// Runs fn(i) for i in [0,count); results must be written to preallocated
// slots indexed by i so the outcome is independent of scheduling.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace sgalab

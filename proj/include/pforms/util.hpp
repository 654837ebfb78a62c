#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pforms {

struct math_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw math_error(msg);
}

// Deterministic RNG for property tests and seeded CLI runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }
  double real_in(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
 private:
  std::mt19937_64 eng_;
};

}  // namespace pforms

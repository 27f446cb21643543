#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "polylab/lattice.hpp"

namespace polylab {

// Per-check seed: master seed mixed with an FNV-1a hash of the check name.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

// Deterministic across platforms: the engine output is fixed by the standard and
// the conversion to doubles is done here rather than by a distribution object.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Point with lattice coordinates drawn from [lo, hi)^2.
  cplx lattice_point(const Lattice& L, double lo = 0.0, double hi = 1.0) {
    const double s = uniform(lo, hi);
    const double t = uniform(lo, hi);
    return L.point(s, t);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace polylab

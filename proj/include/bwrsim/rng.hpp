#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>

#include "bwrsim/sim_time.hpp"

namespace bwrsim {

// One named random stream. Streams with distinct labels are seeded
// independently from the master seed, so adding draws to one stream
// never perturbs another (enables common-random-numbers comparisons
// across scheduler modes). All transforms are written out explicitly
// so the byte-for-byte sequence does not depend on the standard
// library's distribution implementations.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, const std::string& name)
      : name_(name), engine_(mix(master_seed ^ fnv1a(name))) {}

  const std::string& name() const { return name_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double u01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) {
    if (p < 0.0 || p > 1.0) {
      throw ModelError("bernoulli: p out of [0,1]: " + std::to_string(p));
    }
    return u01() < p;
  }

  double uniform(double a, double b) {
    if (!(a <= b)) {
      throw ModelError("uniform: empty interval");
    }
    return a + (b - a) * u01();
  }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw ModelError("uniform_int: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // Normal(mu, sigma) clamped to [lo, hi]. Box-Muller, one value per
  // call (the paired value is discarded to keep draw counts simple).
  double normal_clipped(double mu, double sigma, double lo, double hi) {
    if (sigma < 0.0) throw ModelError("normal: sigma < 0");
    if (lo > hi) throw ModelError("normal: lo > hi");
    double x = mu;
    if (sigma > 0.0) {
      double u1 = u01();
      double u2 = u01();
      while (u1 <= 0.0) u1 = u01();
      double z = std::sqrt(-2.0 * std::log(u1)) *
                 std::cos(2.0 * 3.14159265358979323846 * u2);
      x = mu + sigma * z;
    }
    if (x < lo) x = lo;
    if (x > hi) x = hi;
    return x;
  }

 private:
  static std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }
  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::string name_;
  std::mt19937_64 engine_;
};

// Lazily creates named streams from one master seed.
class RngRegistry {
 public:
  explicit RngRegistry(std::uint64_t master_seed) : seed_(master_seed) {}

  RngStream& stream(const std::string& name) {
    auto it = streams_.find(name);
    if (it == streams_.end()) {
      it = streams_.emplace(name, std::make_unique<RngStream>(seed_, name)).first;
    }
    return *it->second;
  }

  std::uint64_t master_seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::map<std::string, std::unique_ptr<RngStream>> streams_;
};

}  // namespace bwrsim

#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scholarmatch {

// FNV-1a, used for file checksums in the run manifest. Stable across
// platforms, unlike std::hash.
uint64_t fnv1a64(std::string_view data);
uint64_t fnv1a64_file(const std::string& path);

std::string to_hex(uint64_t v);

std::string_view trim(std::string_view s);
std::string lower_ascii(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);

// Deterministic RNG: mt19937_64 raw output with explicit reductions, so
// streams do not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(splitmix(seed)) {}

  uint64_t next();
  // Uniform in [0, n). n must be > 0.
  uint64_t bounded(uint64_t n);
  // Uniform in [lo, hi] inclusive.
  uint64_t range(uint64_t lo, uint64_t hi) { return lo + bounded(hi - lo + 1); }
  double real();  // [0, 1)
  bool chance(double p) { return real() < p; }

 private:
  static uint64_t splitmix(uint64_t x);
  uint64_t state_;
};

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace scholarmatch

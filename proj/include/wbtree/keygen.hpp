#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace wbtree {

/// SplitMix64 (Steele, Lea, Flood 2014; reference code by Vigna). A
/// counter-based 64-bit generator: output i is a fixed mix of
/// seed + (i+1)·0x9e3779b97f4a7c15, so every platform produces the same
/// stream for the same seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, bound), bound >= 1. Lemire's multiply-and-reject, exact.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Deterministic seed for a sub-stream identified by parts.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

enum class Distribution { Uniform, Zipf, Skewed, PreSorted };

std::string_view to_string(Distribution d);
/// Accepts uniform, zipf, skewed, presorted (also pre-sorted). Throws
/// std::invalid_argument otherwise.
Distribution parse_distribution(std::string_view text);

/// Windows for the skewed distribution as fractions of the key space.
struct SkewWindows {
  double a_lo = 0.15;
  double a_hi = 0.25;
  double b_lo = 0.70;
  double b_hi = 0.80;
};

struct KeyWorkload {
  Distribution distribution = Distribution::Uniform;
  std::uint64_t count = 0;
  std::uint64_t universe = 1;
  std::uint64_t seed = 0;
  double zipf_s = 1.0;
  std::vector<std::int64_t> keys;
};

/// Largest universe for which the Zipf sampler uses an inverse-CDF table.
inline constexpr std::uint64_t kZipfTableLimit = 10'000'000;

/// Largest universe accepted by the generators (keys are signed 64-bit).
inline constexpr std::uint64_t kMaxUniverse = std::uint64_t{1} << 63;

/// Ranks 1..universe with P(r) proportional to r^-s.
class ZipfSampler {
 public:
  enum class Method { Auto, InverseCdf, Rejection };

  ZipfSampler(std::uint64_t universe, double s, Method method = Method::Auto);

  std::uint64_t rank(SplitMix64& rng) const;
  Method method() const { return method_; }

 private:
  std::uint64_t rank_from_table(SplitMix64& rng) const;
  std::uint64_t rank_by_rejection(SplitMix64& rng) const;

  double h(double x) const;
  double h_integral(double x) const;
  double h_integral_inverse(double x) const;

  std::uint64_t universe_;
  double s_;
  Method method_;
  std::vector<double> cdf_;
  double h_integral_x1_ = 0.0;
  double h_integral_n_ = 0.0;
  double squeeze_ = 0.0;
};

/// n independent uniform draws from [0, universe). Rejects universe 0.
KeyWorkload gen_uniform(std::uint64_t n, std::uint64_t universe, std::uint64_t seed);

/// Key = rank - 1 with rank Zipf(s) over 1..universe. Rejects s <= 0.
KeyWorkload gen_zipf(std::uint64_t n, std::uint64_t universe, double s, std::uint64_t seed);

/// Index i mod 3 == 0 draws from the whole space, 1 from window A, 2 from
/// window B. Rejects universe < 10.
KeyWorkload gen_skewed(std::uint64_t n, std::uint64_t universe, std::uint64_t seed,
                       const SkewWindows& windows = {});

/// 0..n-1 in order, then a uniformly chosen floor(n/2) positions have their
/// values shuffled among themselves.
KeyWorkload gen_presorted(std::uint64_t n, std::uint64_t seed);

struct WorkloadConfig {
  Distribution distribution = Distribution::Uniform;
  std::uint64_t universe = std::uint64_t{1} << 62;
  double zipf_s = 1.0;
  SkewWindows windows{};
};

/// Dispatches on the configured distribution. Pre-sorted ignores universe.
KeyWorkload generate(const WorkloadConfig& config, std::uint64_t n, std::uint64_t seed);

/// `# dist=<name> n=<n> U=<U> seed=<seed> s=<s>` then one decimal key per line.
void write_workload(std::ostream& os, const KeyWorkload& workload);
/// Throws std::runtime_error on malformed input.
KeyWorkload read_workload(std::istream& is);

}  // namespace wbtree

#include "wbtree/keygen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace wbtree {

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  SplitMix64 mix(base);
  std::uint64_t h = mix.next();
  for (std::uint64_t p : parts) {
    SplitMix64 step(h ^ (p * 0xd1342543de82ef95ULL));
    h = step.next();
  }
  return h;
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::Uniform: return "uniform";
    case Distribution::Zipf: return "zipf";
    case Distribution::Skewed: return "skewed";
    case Distribution::PreSorted: return "presorted";
  }
  return "?";
}

Distribution parse_distribution(std::string_view text) {
  if (text == "uniform") return Distribution::Uniform;
  if (text == "zipf") return Distribution::Zipf;
  if (text == "skewed") return Distribution::Skewed;
  if (text == "presorted" || text == "pre-sorted") return Distribution::PreSorted;
  throw std::invalid_argument("unknown distribution '" + std::string(text) + "'");
}

namespace {

void check_universe(std::uint64_t universe) {
  if (universe == 0) throw std::invalid_argument("universe must be >= 1");
  if (universe > kMaxUniverse) throw std::invalid_argument("universe must be <= 2^63");
}

// helper1(x) = log1p(x)/x, helper2(x) = expm1(x)/x, both continuous at 0.
double helper1(double x) {
  if (std::abs(x) > 1e-8) return std::log1p(x) / x;
  return 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x));
}

double helper2(double x) {
  if (std::abs(x) > 1e-8) return std::expm1(x) / x;
  return 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x));
}

std::uint64_t window_bound(std::uint64_t universe, double fraction) {
  return static_cast<std::uint64_t>(std::floor(static_cast<long double>(universe) * fraction));
}

}  // namespace

// Inverse-CDF over a prefix table for small universes; otherwise
// rejection-inversion (Hörmann & Derflinger 1996), whose envelope is the
// integral of x^-s and which handles s = 1 without special cases.
ZipfSampler::ZipfSampler(std::uint64_t universe, double s, Method method)
    : universe_(universe), s_(s), method_(method) {
  check_universe(universe);
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("zipf exponent must be > 0");
  if (method_ == Method::Auto) {
    method_ = universe <= kZipfTableLimit ? Method::InverseCdf : Method::Rejection;
  }
  if (method_ == Method::InverseCdf) {
    if (universe > kZipfTableLimit) throw std::invalid_argument("zipf table universe too large");
    cdf_.resize(universe);
    double acc = 0.0;
    for (std::uint64_t r = 1; r <= universe; ++r) {
      acc += std::pow(static_cast<double>(r), -s);
      cdf_[r - 1] = acc;
    }
  } else {
    h_integral_x1_ = h_integral(1.5) - 1.0;
    h_integral_n_ = h_integral(static_cast<double>(universe) + 0.5);
    squeeze_ = 2.0 - h_integral_inverse(h_integral(2.5) - h(2.0));
  }
}

std::uint64_t ZipfSampler::rank(SplitMix64& rng) const {
  return method_ == Method::InverseCdf ? rank_from_table(rng) : rank_by_rejection(rng);
}

std::uint64_t ZipfSampler::rank_from_table(SplitMix64& rng) const {
  const double u = rng.unit() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = static_cast<std::uint64_t>(it - cdf_.begin());
  return std::min(idx, universe_ - 1) + 1;
}

std::uint64_t ZipfSampler::rank_by_rejection(SplitMix64& rng) const {
  for (;;) {
    const double u = h_integral_n_ + rng.unit() * (h_integral_x1_ - h_integral_n_);
    const double x = h_integral_inverse(u);
    double kd = std::floor(x + 0.5);
    kd = std::clamp(kd, 1.0, static_cast<double>(universe_));
    auto k = static_cast<std::uint64_t>(kd);
    if (k > universe_) k = universe_;
    if (kd - x <= squeeze_ || u >= h_integral(kd + 0.5) - h(kd)) return k;
  }
}

double ZipfSampler::h(double x) const { return std::exp(-s_ * std::log(x)); }

double ZipfSampler::h_integral(double x) const {
  const double log_x = std::log(x);
  return helper2((1.0 - s_) * log_x) * log_x;
}

double ZipfSampler::h_integral_inverse(double x) const {
  double t = x * (1.0 - s_);
  if (t < -1.0) t = -1.0;
  return std::exp(helper1(t) * x);
}

KeyWorkload gen_uniform(std::uint64_t n, std::uint64_t universe, std::uint64_t seed) {
  check_universe(universe);
  KeyWorkload w{Distribution::Uniform, n, universe, seed, 0.0, {}};
  w.keys.reserve(n);
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) w.keys.push_back(static_cast<std::int64_t>(rng.below(universe)));
  return w;
}

KeyWorkload gen_zipf(std::uint64_t n, std::uint64_t universe, double s, std::uint64_t seed) {
  const ZipfSampler sampler(universe, s);
  KeyWorkload w{Distribution::Zipf, n, universe, seed, s, {}};
  w.keys.reserve(n);
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    w.keys.push_back(static_cast<std::int64_t>(sampler.rank(rng) - 1));
  }
  return w;
}

KeyWorkload gen_skewed(std::uint64_t n, std::uint64_t universe, std::uint64_t seed,
                       const SkewWindows& windows) {
  check_universe(universe);
  if (universe < 10) throw std::invalid_argument("skewed distribution needs universe >= 10");
  const std::uint64_t a_lo = window_bound(universe, windows.a_lo);
  const std::uint64_t a_hi = window_bound(universe, windows.a_hi);
  const std::uint64_t b_lo = window_bound(universe, windows.b_lo);
  const std::uint64_t b_hi = window_bound(universe, windows.b_hi);
  if (a_hi <= a_lo || b_hi <= b_lo || a_hi > universe || b_hi > universe) {
    throw std::invalid_argument("skew windows must be non-empty and inside the key space");
  }

  KeyWorkload w{Distribution::Skewed, n, universe, seed, 0.0, {}};
  w.keys.reserve(n);
  SplitMix64 rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t k;
    switch (i % 3) {
      case 0: k = rng.below(universe); break;
      case 1: k = a_lo + rng.below(a_hi - a_lo); break;
      default: k = b_lo + rng.below(b_hi - b_lo); break;
    }
    w.keys.push_back(static_cast<std::int64_t>(k));
  }
  return w;
}

KeyWorkload gen_presorted(std::uint64_t n, std::uint64_t seed) {
  KeyWorkload w{Distribution::PreSorted, n, std::max<std::uint64_t>(n, 1), seed, 0.0, {}};
  w.keys.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) w.keys[i] = static_cast<std::int64_t>(i);

  SplitMix64 rng(seed);
  const std::uint64_t m = n / 2;
  std::vector<std::uint64_t> positions(n);
  for (std::uint64_t i = 0; i < n; ++i) positions[i] = i;
  for (std::uint64_t i = 0; i < m; ++i) {
    std::swap(positions[i], positions[i + rng.below(n - i)]);
  }
  positions.resize(m);

  std::vector<std::int64_t> values;
  values.reserve(m);
  for (auto p : positions) values.push_back(w.keys[p]);
  for (std::uint64_t i = m; i > 1; --i) std::swap(values[i - 1], values[rng.below(i)]);
  for (std::uint64_t i = 0; i < m; ++i) w.keys[positions[i]] = values[i];
  return w;
}

KeyWorkload generate(const WorkloadConfig& config, std::uint64_t n, std::uint64_t seed) {
  switch (config.distribution) {
    case Distribution::Uniform: return gen_uniform(n, config.universe, seed);
    case Distribution::Zipf: return gen_zipf(n, config.universe, config.zipf_s, seed);
    case Distribution::Skewed: return gen_skewed(n, config.universe, seed, config.windows);
    case Distribution::PreSorted: return gen_presorted(n, seed);
  }
  throw std::invalid_argument("unknown distribution");
}

void write_workload(std::ostream& os, const KeyWorkload& workload) {
  char sbuf[64];
  auto res = std::to_chars(sbuf, sbuf + sizeof sbuf, workload.zipf_s);
  os << "# dist=" << to_string(workload.distribution) << " n=" << workload.count
     << " U=" << workload.universe << " seed=" << workload.seed << " s="
     << std::string_view(sbuf, static_cast<std::size_t>(res.ptr - sbuf)) << '\n';
  for (auto k : workload.keys) os << k << '\n';
}

namespace {

template <typename T>
T parse_number(std::string_view text, const char* field) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::runtime_error(std::string("workload: bad value for ") + field);
  }
  return value;
}

}  // namespace

KeyWorkload read_workload(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error("workload: missing header line");
  }
  KeyWorkload w;
  bool seen_dist = false, seen_n = false;
  std::istringstream header(line.substr(2));
  std::string field;
  while (header >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw std::runtime_error("workload: malformed header field");
    const std::string_view name(field.data(), eq);
    const std::string_view value(field.data() + eq + 1, field.size() - eq - 1);
    if (name == "dist") {
      w.distribution = parse_distribution(value);
      seen_dist = true;
    } else if (name == "n") {
      w.count = parse_number<std::uint64_t>(value, "n");
      seen_n = true;
    } else if (name == "U") {
      w.universe = parse_number<std::uint64_t>(value, "U");
    } else if (name == "seed") {
      w.seed = parse_number<std::uint64_t>(value, "seed");
    } else if (name == "s") {
      w.zipf_s = parse_number<double>(value, "s");
    }
  }
  if (!seen_dist || !seen_n) throw std::runtime_error("workload: header lacks dist or n");

  w.keys.reserve(w.count);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    w.keys.push_back(parse_number<std::int64_t>(line, "key"));
  }
  if (w.keys.size() != w.count) throw std::runtime_error("workload: key count does not match header");
  return w;
}

}  // namespace wbtree

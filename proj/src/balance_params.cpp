#include "wbtree/balance_params.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wbtree {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kClassicDelta = 1.0 + kSqrt2;

Ratio normalize(Ratio r, const char* what) {
  if (r.den == 0) {
    throw std::invalid_argument(std::string(what) + ": zero denominator");
  }
  if (r.num < r.den) {
    throw std::invalid_argument(std::string(what) + " must be >= 1");
  }
  const std::uint64_t g = std::gcd(r.num, r.den);
  return {r.num / g, r.den / g};
}

double checked_real(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
  if (v < 1.0) {
    throw std::invalid_argument(std::string(what) + " must be >= 1");
  }
  return v;
}

double as_real(const ParamValue& v) {
  if (const auto* r = std::get_if<Ratio>(&v)) return r->value();
  return std::get<double>(v);
}

ParamPreset detect_preset(const BalanceParams& p) {
  if (p.mode() == ArithmeticMode::Real) {
    if (p.delta() == kClassicDelta && p.gamma() == kSqrt2) return ParamPreset::Classic;
    return ParamPreset::Custom;
  }
  const Ratio d = p.delta_ratio();
  const Ratio g = p.gamma_ratio();
  if (d == Ratio{3, 1} && g == Ratio{2, 1}) return ParamPreset::Integral;
  if (d == Ratio{3, 1} && g == Ratio{4, 3}) return ParamPreset::TopDown;
  if (d == Ratio{2, 1} && g == Ratio{3, 2}) return ParamPreset::Tight;
  if (d == Ratio{3, 2} && g == Ratio{5, 4}) return ParamPreset::Overtight;
  return ParamPreset::Custom;
}

std::uint64_t parse_u64(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw std::invalid_argument("malformed parameter set '" + std::string(whole) + "'");
  }
  return v;
}

Ratio parse_ratio(std::string_view s, std::string_view whole) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return {parse_u64(s, whole), 1};
  return {parse_u64(s.substr(0, slash), whole), parse_u64(s.substr(slash + 1), whole)};
}

}  // namespace

BalanceParams make_params(ParamValue delta, ParamValue gamma) {
  BalanceParams p;
  const auto* dq = std::get_if<Ratio>(&delta);
  const auto* gq = std::get_if<Ratio>(&gamma);
  if (dq && gq) {
    p.mode_ = ArithmeticMode::Rational;
    p.delta_q_ = normalize(*dq, "delta");
    p.gamma_q_ = normalize(*gq, "gamma");
    p.delta_ = p.delta_q_.value();
    p.gamma_ = p.gamma_q_.value();
  } else {
    if (dq) normalize(*dq, "delta");
    if (gq) normalize(*gq, "gamma");
    p.mode_ = ArithmeticMode::Real;
    p.delta_ = checked_real(as_real(delta), "delta");
    p.gamma_ = checked_real(as_real(gamma), "gamma");
  }
  p.preset_ = detect_preset(p);
  return p;
}

bool operator==(const BalanceParams& a, const BalanceParams& b) {
  if (a.mode_ != b.mode_) return false;
  if (a.mode_ == ArithmeticMode::Rational) {
    return a.delta_q_ == b.delta_q_ && a.gamma_q_ == b.gamma_q_;
  }
  return a.delta_ == b.delta_ && a.gamma_ == b.gamma_;
}

BalanceParams classic_params() { return make_params(kClassicDelta, kSqrt2); }
BalanceParams integral_params() { return make_params(Ratio{3, 1}, Ratio{2, 1}); }
BalanceParams top_down_params() { return make_params(Ratio{3, 1}, Ratio{4, 3}); }
BalanceParams tight_params() { return make_params(Ratio{2, 1}, Ratio{3, 2}); }
BalanceParams overtight_params() { return make_params(Ratio{3, 2}, Ratio{5, 4}); }

std::string BalanceParams::name() const {
  switch (preset_) {
    case ParamPreset::Classic: return "classic";
    case ParamPreset::Integral: return "integral";
    case ParamPreset::TopDown: return "topdown";
    case ParamPreset::Tight: return "tight";
    case ParamPreset::Overtight: return "overtight";
    case ParamPreset::Custom: break;
  }
  if (mode_ == ArithmeticMode::Rational) {
    return "custom:" + std::to_string(delta_q_.num) + "/" + std::to_string(delta_q_.den) + ":" +
           std::to_string(gamma_q_.num) + "/" + std::to_string(gamma_q_.den);
  }
  return "custom-real:" + std::to_string(delta_) + ":" + std::to_string(gamma_);
}

BalanceParams parse_params(std::string_view text) {
  if (text == "classic") return classic_params();
  if (text == "integral") return integral_params();
  if (text == "topdown") return top_down_params();
  if (text == "tight") return tight_params();
  if (text == "overtight") return overtight_params();

  constexpr std::string_view prefix = "custom:";
  if (text.substr(0, prefix.size()) != prefix) {
    throw std::invalid_argument("unknown parameter set '" + std::string(text) + "'");
  }
  const std::string_view body = text.substr(prefix.size());
  const auto colon = body.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("malformed parameter set '" + std::string(text) + "'");
  }
  return make_params(parse_ratio(body.substr(0, colon), text),
                     parse_ratio(body.substr(colon + 1), text));
}

std::pair<double, double> delta_gamma_from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("alpha must lie in (0, 1/2)");
  }
  return {(1.0 - alpha) / alpha, 1.0 / (1.0 - alpha)};
}

double alpha_from_delta(double delta) { return 1.0 / (1.0 + delta); }

Feasibility classify_feasibility(const BalanceParams& params) {
  switch (params.preset()) {
    case ParamPreset::Classic:
    case ParamPreset::Integral:
      return {true, false};
    case ParamPreset::TopDown:
      return {false, true};
    case ParamPreset::Tight:
    case ParamPreset::Overtight:
    case ParamPreset::Custom:
      break;
  }
  return {false, false};
}

}  // namespace wbtree

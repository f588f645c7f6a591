#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace wbtree {

/// Subtree weight: number of nodes in the subtree plus one. An empty
/// subtree weighs 1, a leaf weighs 2.
using Weight = std::uint64_t;

struct Ratio {
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// A parameter value given either as an exact fraction or as a real number.
using ParamValue = std::variant<Ratio, double>;

enum class ArithmeticMode { Rational, Real };

/// Which subtree is too heavy at a node, if any.
enum class Side { None, Left, Right };

enum class ParamPreset { Classic, Integral, TopDown, Tight, Overtight, Custom };

struct Feasibility {
  bool bottom_up_feasible = false;
  bool top_down_feasible = false;
  friend bool operator==(const Feasibility&, const Feasibility&) = default;
};

/// The pair <Delta, Gamma>. Delta bounds the ratio between sibling weights,
/// Gamma picks single vs. double rotation. Immutable once built.
///
/// In Rational mode all predicates are evaluated by exact integer
/// cross-multiplication (128-bit products, so no weight can overflow).
/// In Real mode they use plain double comparisons.
class BalanceParams {
 public:
  ArithmeticMode mode() const { return mode_; }
  ParamPreset preset() const { return preset_; }

  /// Exact values; meaningful in Rational mode only.
  Ratio delta_ratio() const { return delta_q_; }
  Ratio gamma_ratio() const { return gamma_q_; }

  double delta() const { return delta_; }
  double gamma() const { return gamma_; }

  /// CLI spelling: classic, integral, topdown, tight, overtight or
  /// custom:<dn>/<dd>:<gn>/<gd>.
  std::string name() const;

  /// heavy > light * Delta
  bool exceeds_delta(Weight heavy, Weight light) const noexcept {
    if (mode_ == ArithmeticMode::Rational) {
      return static_cast<unsigned __int128>(heavy) * delta_q_.den >
             static_cast<unsigned __int128>(light) * delta_q_.num;
    }
    return static_cast<double>(heavy) > static_cast<double>(light) * delta_;
  }

  /// inner > outer * Gamma
  bool exceeds_gamma(Weight inner, Weight outer) const noexcept {
    if (mode_ == ArithmeticMode::Rational) {
      return static_cast<unsigned __int128>(inner) * gamma_q_.den >
             static_cast<unsigned __int128>(outer) * gamma_q_.num;
    }
    return static_cast<double>(inner) > static_cast<double>(outer) * gamma_;
  }

  /// inner >= outer * Gamma
  bool reaches_gamma(Weight inner, Weight outer) const noexcept {
    if (mode_ == ArithmeticMode::Rational) {
      return static_cast<unsigned __int128>(inner) * gamma_q_.den >=
             static_cast<unsigned __int128>(outer) * gamma_q_.num;
    }
    return static_cast<double>(inner) >= static_cast<double>(outer) * gamma_;
  }

  friend bool operator==(const BalanceParams& a, const BalanceParams& b);

 private:
  friend BalanceParams make_params(ParamValue delta, ParamValue gamma);

  ArithmeticMode mode_ = ArithmeticMode::Rational;
  ParamPreset preset_ = ParamPreset::Custom;
  Ratio delta_q_{};
  Ratio gamma_q_{};
  double delta_ = 1.0;
  double gamma_ = 1.0;
};

/// Validates and normalizes. Rational mode iff both inputs are fractions.
/// Throws std::invalid_argument for values below 1, zero denominators or
/// non-finite reals.
BalanceParams make_params(ParamValue delta, ParamValue gamma);

BalanceParams classic_params();    // <1+sqrt2, sqrt2>
BalanceParams integral_params();   // <3, 2>
BalanceParams top_down_params();   // <3, 4/3>
BalanceParams tight_params();      // <2, 3/2>
BalanceParams overtight_params();  // <3/2, 5/4>

/// Parses a CLI parameter name (see BalanceParams::name). Throws
/// std::invalid_argument on unknown or malformed input.
BalanceParams parse_params(std::string_view text);

/// |L|·Δ ≥ |R| and |R|·Δ ≥ |L|.
inline bool is_balanced(Weight left, Weight right, const BalanceParams& p) noexcept {
  return !p.exceeds_delta(right, left) && !p.exceeds_delta(left, right);
}

inline Side overhang_side(Weight left, Weight right, const BalanceParams& p) noexcept {
  if (p.exceeds_delta(right, left)) return Side::Right;
  if (p.exceeds_delta(left, right)) return Side::Left;
  return Side::None;
}

/// inner is the heavy child's subtree nearer to the rotation pivot.
inline bool needs_double_rotation(Weight inner, Weight outer, const BalanceParams& p) noexcept {
  return p.exceeds_gamma(inner, outer);
}

/// inner < outer·Γ. The bottom-up rotation choice: a tie inner = outer·Γ
/// takes the double rotation, which only differs from needs_double_rotation
/// when outer·Γ is an integer (e.g. Γ = 2). With the strict test, <3,2>
/// leaves (1, 4) after deleting the left leaf of a node with |L| = 2 and
/// |R| = 6 split (4, 2).
inline bool single_rotation_suffices(Weight inner, Weight outer, const BalanceParams& p) noexcept {
  return !p.reaches_gamma(inner, outer);
}

/// alpha in (0, 1/2) -> (Delta, Gamma) = ((1-alpha)/alpha, 1/(1-alpha)).
std::pair<double, double> delta_gamma_from_alpha(double alpha);

/// Inverse of the Delta half of the conversion: alpha = 1/(1+Delta).
double alpha_from_delta(double delta);

/// Only the five canonical sets are classified; everything else is reported
/// infeasible for both schemes.
Feasibility classify_feasibility(const BalanceParams& params);

}  // namespace wbtree

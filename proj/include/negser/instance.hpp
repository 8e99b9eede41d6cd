#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <negser/numeric.hpp>

namespace negser {

enum class InstanceErrc {
  malformed_rational = 10,
  empty = 11,
  length_mismatch = 12,
  ordering_violated = 13,
  nonpositive_c = 14,
  nonpositive_mu = 15,
  rho_exceeds_one = 16,
  gap_too_small = 17,
  schema = 18,
};

inline std::string_view to_string(InstanceErrc e) {
  switch (e) {
  case InstanceErrc::malformed_rational: return "malformed_rational";
  case InstanceErrc::empty: return "empty";
  case InstanceErrc::length_mismatch: return "length_mismatch";
  case InstanceErrc::ordering_violated: return "ordering_violated";
  case InstanceErrc::nonpositive_c: return "nonpositive_c";
  case InstanceErrc::nonpositive_mu: return "nonpositive_mu";
  case InstanceErrc::rho_exceeds_one: return "rho_exceeds_one";
  case InstanceErrc::gap_too_small: return "gap_too_small";
  case InstanceErrc::schema: return "schema";
  }
  return "unknown";
}

/// Invalid problem instance; `index` is 1-based (0 when not index-specific).
struct instance_error : std::invalid_argument {
  instance_error(InstanceErrc code, std::size_t index, const std::string& what)
      : std::invalid_argument(what), code(code), index(index) {}
  InstanceErrc code;
  std::size_t index;
};

/// Minimum gap between consecutive c values in float-mode instances.
inline const Rational float_min_gap = Rational(1, 1000000000000LL);

/// The data (c_1 > ... > c_n > 0, mu_k > 0, rho = sum mu_k <= 1) of
/// prod_k (1 - c_k t)^{mu_k}.
template <Field T>
class ProblemInstance {
public:
  /// Validates and builds. Float instances get an ulp-scale slack on rho <= 1
  /// and must keep consecutive c values at least `float_min_gap` apart.
  static ProblemInstance make(std::vector<T> c, std::vector<T> mu, std::string label = {}) {
    if (c.empty()) throw instance_error(InstanceErrc::empty, 0, "instance needs at least one factor");
    if (c.size() != mu.size())
      throw instance_error(InstanceErrc::length_mismatch, 0,
                           "c has " + std::to_string(c.size()) + " entries but mu has " +
                               std::to_string(mu.size()));
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (sign(c[k]) <= 0)
        throw instance_error(InstanceErrc::nonpositive_c, k + 1,
                             "c must be positive: c_" + std::to_string(k + 1) + " = " + to_string(c[k]));
      if (sign(mu[k]) <= 0)
        throw instance_error(InstanceErrc::nonpositive_mu, k + 1,
                             "mu must be positive: mu_" + std::to_string(k + 1) + " = " + to_string(mu[k]));
      if (k > 0 && !(c[k - 1] > c[k]))
        throw instance_error(InstanceErrc::ordering_violated, k + 1,
                             "ordering violated at index " + std::to_string(k + 1) + ": c_" +
                                 std::to_string(k) + " = " + to_string(c[k - 1]) + " is not > c_" +
                                 std::to_string(k + 1) + " = " + to_string(c[k]));
      if constexpr (!is_exact_v<T>) {
        if (k > 0 && c[k - 1] - c[k] < from_rational<T>(float_min_gap))
          throw instance_error(InstanceErrc::gap_too_small, k + 1,
                               "float instance: c_" + std::to_string(k) + " - c_" + std::to_string(k + 1) +
                                   " is below the minimum gap 1e-12");
      }
    }
    T rho = from_int<T>(0);
    for (const auto& m : mu) rho += m;
    T limit = from_int<T>(1);
    if constexpr (!is_exact_v<T>) limit += rounding_slack(mu.size(), rho.precision_bits());
    if (rho > limit)
      throw instance_error(InstanceErrc::rho_exceeds_one, 0, "rho = " + to_string(rho) + " > 1");
    return ProblemInstance(std::move(c), std::move(mu), std::move(rho), std::move(label));
  }

  std::size_t size() const { return c_.size(); }
  const std::vector<T>& c() const { return c_; }
  const std::vector<T>& mu() const { return mu_; }
  const T& rho() const { return rho_; }
  const std::string& label() const { return label_; }

  /// 1-based accessors matching c_k, mu_k.
  const T& c_at(std::size_t k) const { return c_.at(k - 1); }
  const T& mu_at(std::size_t k) const { return mu_.at(k - 1); }

  /// n >= 2, or n = 1 with mu_1 < 1.
  bool theorem_applicable() const { return size() >= 2 || mu_[0] < from_int<T>(1); }

  /// Exact equality for rationals; float sums may sit a few ulps off 1.
  bool rho_is_one() const {
    if constexpr (is_exact_v<T>)
      return rho_ == from_int<T>(1);
    else
      return abs(rho_ - from_int<T>(1)) <= rounding_slack(size(), rho_.precision_bits());
  }

  ProblemInstance with_label(std::string label) const {
    ProblemInstance out = *this;
    out.label_ = std::move(label);
    return out;
  }

  friend bool operator==(const ProblemInstance& a, const ProblemInstance& b) {
    return a.c_ == b.c_ && a.mu_ == b.mu_;
  }

private:
  static Float rounding_slack(std::size_t n, long bits) {
    return ldexp(Float::from_rational(Rational(static_cast<long>(n)), bits), 4 - bits);
  }

  ProblemInstance(std::vector<T> c, std::vector<T> mu, T rho, std::string label)
      : c_(std::move(c)), mu_(std::move(mu)), rho_(std::move(rho)), label_(std::move(label)) {}

  std::vector<T> c_;
  std::vector<T> mu_;
  T rho_;
  std::string label_;
};

using ExactInstance = ProblemInstance<Rational>;
using FloatInstance = ProblemInstance<Float>;

/// Float copy of an exact instance at `bits` precision. The caller's thread
/// precision should match `bits` for later arithmetic.
inline FloatInstance widen(const ExactInstance& inst, long bits) {
  PrecisionScope scope(bits);
  std::vector<Float> c, mu;
  for (const auto& x : inst.c()) c.push_back(Float::from_rational(x, bits));
  for (const auto& x : inst.mu()) mu.push_back(Float::from_rational(x, bits));
  return FloatInstance::make(std::move(c), std::move(mu), inst.label());
}

/// Same instance with every mu_k multiplied by `factor`.
template <Field T>
ProblemInstance<T> scale_mu(const ProblemInstance<T>& inst, const T& factor) {
  std::vector<T> mu = inst.mu();
  for (auto& m : mu) m *= factor;
  return ProblemInstance<T>::make(inst.c(), std::move(mu), inst.label());
}

} // namespace negser

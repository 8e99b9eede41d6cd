#pragma once

// Truncated formal power series in t, kept through t^N.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <negser/numeric.hpp>

namespace negser {

inline constexpr std::size_t default_order = 64;

template <Field T>
class TruncatedSeries {
public:
  /// Zero series of the given order.
  explicit TruncatedSeries(std::size_t order) : coeffs_(checked_size(order), from_int<T>(0)) {}

  /// Coefficients a_0..a_N; the order is size() - 1.
  explicit TruncatedSeries(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) throw usage_error("a truncated series needs order >= 1");
  }

  TruncatedSeries(std::initializer_list<T> coeffs) : TruncatedSeries(std::vector<T>(coeffs)) {}

  /// The series 1 + 0 t + ... + 0 t^N.
  static TruncatedSeries one(std::size_t order) {
    TruncatedSeries s(order);
    s.coeffs_[0] = from_int<T>(1);
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }

  const T& operator[](std::size_t k) const { return coeffs_[k]; }
  T& operator[](std::size_t k) { return coeffs_[k]; }

  std::span<const T> coeffs() const { return coeffs_; }

  friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

private:
  static std::size_t checked_size(std::size_t order) {
    if (order < 1) throw usage_error("truncation order must be >= 1");
    return order + 1;
  }

  std::vector<T> coeffs_;
};

namespace detail {
template <Field T>
void require_compatible(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  if (a.order() != b.order())
    throw usage_error("series orders differ (" + std::to_string(a.order()) + " vs " +
                      std::to_string(b.order()) + ")");
}

template <Field T>
void require_unit_constant(const TruncatedSeries<T>& a, const char* op) {
  if (a[0] != from_int<T>(1)) throw usage_error(std::string(op) + " requires constant term 1");
}

/// (1 - c t)^mu without the c > 0, mu > 0 checks; c = 0 gives the unit series.
template <Field T>
TruncatedSeries<T> raw_binomial_factor(const T& c, const T& mu, std::size_t order) {
  TruncatedSeries<T> out(order);
  out[0] = from_int<T>(1);
  const T minus_c = -c;
  for (std::size_t k = 0; k < order; ++k) {
    T next = out[k] * minus_c;
    next *= mu - from_int<T>(static_cast<long>(k));
    next /= from_int<T>(static_cast<long>(k + 1));
    out[k + 1] = std::move(next);
  }
  return out;
}
} // namespace detail

/// {A}_k, the coefficient of t^k.
template <Field T>
const T& coefficient(const TruncatedSeries<T>& a, std::size_t k) {
  if (k > a.order())
    throw std::out_of_range("coefficient index " + std::to_string(k) + " exceeds order " +
                            std::to_string(a.order()));
  return a[k];
}

/// Expansion of (1 - c t)^mu by a_{k+1} = a_k (-c) (mu - k) / (k + 1).
template <Field T>
TruncatedSeries<T> binomial_factor(const T& c, const T& mu, std::size_t order) {
  if (sign(c) <= 0) throw usage_error("binomial_factor needs c > 0");
  if (sign(mu) <= 0) throw usage_error("binomial_factor needs mu > 0");
  return detail::raw_binomial_factor(c, mu, order);
}

/// 1 / (1 - c t).
template <Field T>
TruncatedSeries<T> geometric(const T& c, std::size_t order) {
  TruncatedSeries<T> out(order);
  out[0] = from_int<T>(1);
  for (std::size_t k = 1; k <= order; ++k) out[k] = out[k - 1] * c;
  return out;
}

/// Cauchy product truncated at the common order.
template <Field T>
TruncatedSeries<T> mul(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::require_compatible(a, b);
  const std::size_t n = a.order();
  TruncatedSeries<T> out(n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (sign(a[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= n; ++j) {
      if (sign(b[j]) == 0) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

template <Field T>
TruncatedSeries<T> operator*(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  return mul(a, b);
}

template <Field T>
TruncatedSeries<T> operator+(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::require_compatible(a, b);
  TruncatedSeries<T> out = a;
  for (std::size_t k = 0; k <= a.order(); ++k) out[k] += b[k];
  return out;
}

template <Field T>
TruncatedSeries<T> operator-(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  detail::require_compatible(a, b);
  TruncatedSeries<T> out = a;
  for (std::size_t k = 0; k <= a.order(); ++k) out[k] -= b[k];
  return out;
}

template <Field T>
TruncatedSeries<T> scale(const TruncatedSeries<T>& a, const T& s) {
  TruncatedSeries<T> out = a;
  for (std::size_t k = 0; k <= a.order(); ++k) out[k] *= s;
  return out;
}

/// t * A, dropping the coefficient pushed past the order.
template <Field T>
TruncatedSeries<T> shift(const TruncatedSeries<T>& a) {
  TruncatedSeries<T> out(a.order());
  for (std::size_t k = a.order(); k >= 1; --k) out[k] = a[k - 1];
  return out;
}

/// A^rho for A_0 = 1, from B'A = rho A'B:
///   b_k = (1/k) sum_{i=1}^{k} (i (rho + 1) - k) a_i b_{k-i}.
template <Field T>
TruncatedSeries<T> pow(const TruncatedSeries<T>& a, const T& rho) {
  detail::require_unit_constant(a, "pow");
  const std::size_t n = a.order();
  TruncatedSeries<T> b(n);
  b[0] = from_int<T>(1);
  const T rho1 = rho + from_int<T>(1);
  for (std::size_t k = 1; k <= n; ++k) {
    T acc = from_int<T>(0);
    for (std::size_t i = 1; i <= k; ++i) {
      if (sign(a[i]) == 0) continue;
      T w = from_int<T>(static_cast<long>(i)) * rho1 - from_int<T>(static_cast<long>(k));
      acc += w * a[i] * b[k - i];
    }
    b[k] = acc / from_int<T>(static_cast<long>(k));
  }
  return b;
}

/// log A for A_0 = 1: l_k = a_k - (1/k) sum_{i=1}^{k-1} i l_i a_{k-i}.
template <Field T>
TruncatedSeries<T> log_series(const TruncatedSeries<T>& a) {
  detail::require_unit_constant(a, "log_series");
  const std::size_t n = a.order();
  TruncatedSeries<T> l(n);
  for (std::size_t k = 1; k <= n; ++k) {
    T acc = from_int<T>(0);
    for (std::size_t i = 1; i < k; ++i) acc += from_int<T>(static_cast<long>(i)) * l[i] * a[k - i];
    l[k] = a[k] - acc / from_int<T>(static_cast<long>(k));
  }
  return l;
}

/// exp A for A_0 = 0: e_k = (1/k) sum_{i=1}^{k} i a_i e_{k-i}.
template <Field T>
TruncatedSeries<T> exp_series(const TruncatedSeries<T>& a) {
  if (sign(a[0]) != 0) throw usage_error("exp_series requires constant term 0");
  const std::size_t n = a.order();
  TruncatedSeries<T> e(n);
  e[0] = from_int<T>(1);
  for (std::size_t k = 1; k <= n; ++k) {
    T acc = from_int<T>(0);
    for (std::size_t i = 1; i <= k; ++i) acc += from_int<T>(static_cast<long>(i)) * a[i] * e[k - i];
    e[k] = acc / from_int<T>(static_cast<long>(k));
  }
  return e;
}

/// Widens every coefficient at `bits` precision.
inline TruncatedSeries<Float> widen(const TruncatedSeries<Rational>& a, long bits) {
  std::vector<Float> out;
  out.reserve(a.order() + 1);
  for (const auto& x : a.coeffs()) out.push_back(Float::from_rational(x, bits));
  return TruncatedSeries<Float>(std::move(out));
}

/// JSON-ready text form: rational strings or decimal strings.
template <Field T>
std::vector<std::string> to_strings(const TruncatedSeries<T>& a) {
  std::vector<std::string> out;
  out.reserve(a.order() + 1);
  for (const auto& x : a.coeffs()) out.push_back(to_string(x));
  return out;
}

} // namespace negser

#pragma once

// D_m as a function of the last base x = c_n with everything else frozen:
// its exact polynomial form, endpoint signs on [0, c_{n-1}], root
// isolation, the c_n-derivative of L_n and the first-order perturbation
// bound mu_n c_n^{m-2} (D_1 - c_n).

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <negser/theorem.hpp>

namespace negser {

/// D_m(x) = sum_k coeffs[k] x^k for the instance (prefix, x) with exponent mu_n on x.
template <Field T>
struct CnPolynomial {
  std::vector<T> coeffs;
  std::size_t m = 0;
  ProblemInstance<T> prefix;
  T mu_n;

  std::size_t degree_bound() const { return coeffs.size() - 1; }

  T operator()(const T& x) const {
    T acc = from_int<T>(0);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      acc *= x;
      acc += coeffs[k];
    }
    return acc;
  }

  /// Coefficients of d/dx D_m(x).
  std::vector<T> derivative() const {
    std::vector<T> out;
    for (std::size_t k = 1; k < coeffs.size(); ++k) out.push_back(coeffs[k] * from_int<T>(static_cast<long>(k)));
    if (out.empty()) out.push_back(from_int<T>(0));
    return out;
  }
};

template <Field T>
T evaluate(const std::vector<T>& coeffs, const T& x) {
  T acc = from_int<T>(0);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc *= x;
    acc += coeffs[k];
  }
  return acc;
}

/// D_m(x) = -sum_{k=0}^{m} {L_{n-1}}_{m-k} binom(mu_n, k) (-x)^k.
template <Field T>
CnPolynomial<T> dm_polynomial(const ProblemInstance<T>& prefix, const T& mu_n, std::size_t m,
                              std::size_t order = default_order) {
  if (m < 1) throw usage_error("dm_polynomial: D_m is defined for m >= 1");
  if (m > order) throw usage_error("dm_polynomial: m = " + std::to_string(m) + " exceeds order " + std::to_string(order));
  if (sign(mu_n) <= 0) throw usage_error("dm_polynomial needs mu_n > 0");
  const auto prefix_product = partial_product(prefix, prefix.size(), order);
  CnPolynomial<T> poly{std::vector<T>(m + 1, from_int<T>(0)), m, prefix, mu_n};
  T b = from_int<T>(1); // binom(mu_n, k) (-1)^k
  for (std::size_t k = 0; k <= m; ++k) {
    if (k > 0) {
      b *= -(mu_n - from_int<T>(static_cast<long>(k - 1)));
      b /= from_int<T>(static_cast<long>(k));
    }
    poly.coeffs[k] = -(prefix_product[m - k] * b);
  }
  return poly;
}

/// Splits an n >= 2 instance into its (n-1)-factor prefix and mu_n.
template <Field T>
std::pair<ProblemInstance<T>, T> split_last(const ProblemInstance<T>& inst) {
  return {reduce_drop_zero(inst), inst.mu().back()};
}

/// Signs of -D_m at x = 0 and x = c_prev.
struct EndpointSigns {
  int at_zero = 0;
  int at_prev = 0;
};

template <Field T>
EndpointSigns endpoint_signs(const CnPolynomial<T>& poly, const T& c_prev, double tol = 0.0) {
  return {sign_of(T(-poly(from_int<T>(0))), tol), sign_of(T(-poly(c_prev)), tol)};
}

template <Field T>
struct RootBracket {
  T lo;
  T hi;
  /// The polynomial vanishes exactly at a grid point (lo == hi).
  bool exact_zero = false;
};

inline constexpr std::size_t default_root_grid = 1024;
inline constexpr long root_bracket_width_log2 = 40;

/// Rightmost sign change of `poly` on [lo, hi], scanning a uniform grid from
/// hi downward, then bisecting to width < 2^-40 (hi - lo). Exact zeros at
/// interior grid points are returned as degenerate brackets; zeros sitting on
/// the interval ends are ignored (those are the reduction cases).
template <Field T>
std::optional<RootBracket<T>> isolate_largest_root(const std::vector<T>& poly, const T& lo, const T& hi,
                                                   std::size_t grid = default_root_grid) {
  if (!(lo < hi)) throw usage_error("isolate_largest_root needs lo < hi");
  if (sign(lo) < 0) throw usage_error("isolate_largest_root needs lo >= 0");
  if (grid < 1) throw usage_error("isolate_largest_root needs grid >= 1");
  const T width = hi - lo;
  const T step = width / from_int<T>(static_cast<long>(grid));
  auto point = [&](std::size_t i) { return lo + step * from_int<T>(static_cast<long>(i)); };

  std::optional<T> right; // last grid point with a nonzero value
  int right_sign = 0;
  for (std::size_t i = grid + 1; i-- > 0;) {
    const T x = i == grid ? hi : point(i);
    const int s = sign(evaluate(poly, x));
    if (s == 0) {
      if (i != 0 && i != grid) return RootBracket<T>{x, x, true};
      continue;
    }
    if (right && s != right_sign) {
      T a = x, b = *right;
      int sa = s;
      T target = width;
      for (long e = 0; e < root_bracket_width_log2; ++e) target /= from_int<T>(2);
      while (!(b - a < target)) {
        T mid = (a + b) / from_int<T>(2);
        const int sm = sign(evaluate(poly, mid));
        if (sm == 0) return RootBracket<T>{mid, mid, true};
        if (sm == sa) {
          a = std::move(mid);
        } else {
          b = std::move(mid);
        }
      }
      return RootBracket<T>{std::move(a), std::move(b), false};
    }
    right = x;
    right_sign = s;
  }
  return std::nullopt;
}

template <Field T>
std::optional<RootBracket<T>> isolate_largest_root(const CnPolynomial<T>& poly, const T& lo, const T& hi,
                                                   std::size_t grid = default_root_grid) {
  return isolate_largest_root(poly.coeffs, lo, hi, grid);
}

/// dL_n/dc_n = -mu_n t/(1 - c_n t) L_n; coefficient k is
/// -mu_n sum_{i=0}^{k-1} c_n^i {L_n}_{k-1-i}.
template <Field T>
TruncatedSeries<T> dcn_derivative_series(const ProblemInstance<T>& inst, std::size_t order = default_order) {
  const auto product = partial_product(inst, inst.size(), order);
  const auto kernel = shift(geometric(inst.c().back(), order));
  return scale(mul(kernel, product), T(-inst.mu().back()));
}

template <Field T>
struct PerturbationRecord {
  std::size_t m = 0;
  T c_point;
  T epsilon;
  /// mu_n * epsilon
  T epsilon_star;
  /// epsilon * d(-D_m)/dc_n, the first-order change of -D_m.
  T lhs_increment;
  /// epsilon_star * c_n^{m-2} (D_1 - c_n).
  T bound_term;
  bool satisfied = false;
  /// d(-D_m)/dc_n and mu_n c_n^{m-2} (D_1 - c_n).
  T rate;
  T bound_rate;
  /// -D_m(c_n + epsilon) - (-D_m(c_n)), including higher orders.
  T actual_increment;
};

/// First-order rate of -D_m in c_n against the retained bound term. Needs
/// m >= 2 and D_1..D_{m-1} > 0.
template <Field T>
PerturbationRecord<T> rm_bound_check(const ProblemInstance<T>& inst, std::size_t m, const T& epsilon,
                                     double tol = 0.0) {
  if (m < 2) throw usage_error("rm_bound_check needs m >= 2");
  if (inst.size() < 1) throw usage_error("rm_bound_check needs a factor");
  if (sign(epsilon) <= 0) throw usage_error("rm_bound_check needs epsilon > 0");
  const auto d = d_series(inst, m);
  for (std::size_t j = 1; j < m; ++j)
    if (sign_of(d.at(j), tol) <= 0)
      throw usage_error("rm_bound_check precondition: D_" + std::to_string(j) + " = " + to_string(d.at(j)) +
                        " is not positive");
  const T& c = inst.c().back();
  const T& mu_n = inst.mu().back();

  // sum_{k=0}^{m-2} c^k D_{m-1-k} - c^{m-1}
  T bracket = from_int<T>(0);
  T ck = from_int<T>(1);
  for (std::size_t k = 0; k + 2 <= m; ++k) {
    bracket += ck * d.at(m - 1 - k);
    ck *= c;
  }
  bracket -= ck;

  PerturbationRecord<T> rec;
  rec.m = m;
  rec.c_point = c;
  rec.epsilon = epsilon;
  rec.epsilon_star = mu_n * epsilon;
  rec.rate = mu_n * bracket;
  rec.bound_rate = mu_n * ipow(c, m - 2) * (d.at(1) - c);
  rec.lhs_increment = epsilon * rec.rate;
  rec.bound_term = rec.epsilon_star * ipow(c, m - 2) * (d.at(1) - c);
  rec.satisfied = rec.lhs_increment >= rec.bound_term;
  const auto shifted = product_with_last_c(inst, T(c + epsilon), m);
  const auto base = partial_product(inst, inst.size(), m);
  rec.actual_increment = shifted[m] - base[m];
  return rec;
}

template <Field T>
PerturbationRecord<T> rm_bound_check(const ProblemInstance<T>& inst, std::size_t m) {
  return rm_bound_check(inst, m, from_int<T>(1));
}

/// One rung of a central-difference ladder.
template <Field T>
struct DifferenceRung {
  T epsilon;
  /// |central difference - analytic derivative| of {L_n}_m.
  T error;
  /// error(previous rung) / error(this rung); absent on the first rung.
  std::optional<double> ratio;
};

/// Central differences (L(c_n + e) - L(c_n - e)) / 2e against the analytic
/// derivative for e = eps0, eps0/2, ..., eps0/2^{steps-1}.
template <Field T>
std::vector<DifferenceRung<T>> central_difference_ladder(const ProblemInstance<T>& inst, std::size_t m,
                                                         const T& eps0, std::size_t steps) {
  if (m < 1) throw usage_error("central_difference_ladder needs m >= 1");
  const auto analytic = dcn_derivative_series(inst, m);
  const T& c = inst.c().back();
  std::vector<DifferenceRung<T>> out;
  T eps = eps0;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto up = product_with_last_c(inst, T(c + eps), m);
    const auto down = product_with_last_c(inst, T(c - eps), m);
    T diff = (up[m] - down[m]) / (from_int<T>(2) * eps);
    T err = abs_value(T(diff - analytic[m]));
    std::optional<double> ratio;
    if (!out.empty() && sign(err) != 0) {
      if constexpr (is_exact_v<T>)
        ratio = static_cast<double>(out.back().error / err);
      else
        ratio = (out.back().error / err).to_double();
    }
    out.push_back({eps, std::move(err), ratio});
    eps /= from_int<T>(2);
  }
  return out;
}

/// One analyze-cn row for index m of an n >= 2 instance.
template <Field T>
struct CnAnalysisRow {
  std::size_t m = 0;
  EndpointSigns endpoints;
  std::optional<RootBracket<T>> root;
  T rate;
  std::optional<T> bound_term;
  std::optional<bool> satisfied;
};

template <Field T>
std::vector<CnAnalysisRow<T>> analyze_cn(const ProblemInstance<T>& inst, std::size_t m_lo, std::size_t m_hi,
                                         std::size_t grid = default_root_grid, double tol = 0.0) {
  if (inst.size() < 2) throw usage_error("c_n analysis needs n >= 2");
  if (m_lo < 1 || m_lo > m_hi) throw usage_error("bad m range");
  const auto [prefix, mu_n] = split_last(inst);
  const T& c_prev = prefix.c().back();
  const auto derivative = dcn_derivative_series(inst, m_hi);
  std::vector<CnAnalysisRow<T>> rows;
  for (std::size_t m = m_lo; m <= m_hi; ++m) {
    const auto poly = dm_polynomial(prefix, mu_n, m, m_hi);
    CnAnalysisRow<T> row;
    row.m = m;
    row.endpoints = endpoint_signs(poly, c_prev, tol);
    row.root = isolate_largest_root(poly, from_int<T>(0), c_prev, grid);
    row.rate = derivative[m];
    if (m >= 2) {
      const auto rec = rm_bound_check(inst, m, from_int<T>(1), tol);
      row.bound_term = rec.bound_term;
      row.satisfied = rec.satisfied;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace negser

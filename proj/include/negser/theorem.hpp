#pragma once

// The product L_n = prod_{j<=n} (1 - c_j t)^{mu_j} = 1 - sum_j D_j t^j and
// the exact checks around it: positivity of D_j, the D_1 closed form, the
// rho-scaling map and the two factor-count reductions.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <negser/instance.hpp>
#include <negser/series.hpp>

namespace negser {

/// D_1..D_N of one instance; d()[j - 1] holds D_j.
template <Field T>
class DCoefficients {
public:
  DCoefficients(std::vector<T> d, ProblemInstance<T> source)
      : d_(std::move(d)), source_(std::move(source)) {
    if (d_.empty()) throw usage_error("DCoefficients needs order >= 1");
  }

  std::size_t order() const { return d_.size(); }
  const std::vector<T>& d() const { return d_; }
  const ProblemInstance<T>& source() const { return source_; }

  /// D_j, 1-based.
  const T& at(std::size_t j) const {
    if (j < 1 || j > d_.size())
      throw std::out_of_range("D index " + std::to_string(j) + " outside 1.." + std::to_string(d_.size()));
    return d_[j - 1];
  }

  /// Test hook: replaces D_j.
  void override_at(std::size_t j, T value) {
    at(j);
    d_[j - 1] = std::move(value);
  }

  /// 1 - sum_j D_j t^j.
  TruncatedSeries<T> as_series() const {
    TruncatedSeries<T> s = TruncatedSeries<T>::one(order());
    for (std::size_t j = 1; j <= order(); ++j) s[j] = -d_[j - 1];
    return s;
  }

  friend bool operator==(const DCoefficients& a, const DCoefficients& b) { return a.d_ == b.d_; }

private:
  std::vector<T> d_;
  ProblemInstance<T> source_;
};

template <Field T>
struct Verdict {
  bool all_positive = false;
  /// Smallest m with D_m not positive.
  std::optional<std::size_t> first_failure;
  std::size_t min_index = 0;
  T min_value;
  std::size_t order = 0;
};

/// L_1, ..., L_n, each L_k = L_{k-1} (1 - c_k t)^{mu_k}.
template <Field T>
std::vector<TruncatedSeries<T>> partial_products(const ProblemInstance<T>& inst, std::size_t order) {
  std::vector<TruncatedSeries<T>> out;
  out.reserve(inst.size());
  for (std::size_t k = 1; k <= inst.size(); ++k) {
    auto factor = binomial_factor(inst.c_at(k), inst.mu_at(k), order);
    out.push_back(k == 1 ? std::move(factor) : mul(out.back(), factor));
  }
  return out;
}

/// L_k for 1 <= k <= n.
template <Field T>
TruncatedSeries<T> partial_product(const ProblemInstance<T>& inst, std::size_t k, std::size_t order) {
  if (k < 1 || k > inst.size())
    throw std::out_of_range("partial product index " + std::to_string(k) + " outside 1.." +
                            std::to_string(inst.size()));
  TruncatedSeries<T> acc = binomial_factor(inst.c_at(1), inst.mu_at(1), order);
  for (std::size_t j = 2; j <= k; ++j) acc = mul(acc, binomial_factor(inst.c_at(j), inst.mu_at(j), order));
  return acc;
}

/// L_n with the last base c_n replaced by `x` (x = 0 allowed).
template <Field T>
TruncatedSeries<T> product_with_last_c(const ProblemInstance<T>& inst, const T& x, std::size_t order) {
  const std::size_t n = inst.size();
  auto last = detail::raw_binomial_factor(x, inst.mu_at(n), order);
  if (n == 1) return last;
  return mul(partial_product(inst, n - 1, order), last);
}

/// exp(sum_j mu_j log(1 - c_j t)), an independent route to L_n.
template <Field T>
TruncatedSeries<T> exp_log_product(const ProblemInstance<T>& inst, std::size_t order) {
  TruncatedSeries<T> sum(order);
  for (std::size_t j = 1; j <= inst.size(); ++j) {
    TruncatedSeries<T> lin = TruncatedSeries<T>::one(order);
    lin[1] = -inst.c_at(j);
    sum = sum + scale(log_series(lin), inst.mu_at(j));
  }
  return exp_series(sum);
}

template <Field T>
DCoefficients<T> d_from_series(const TruncatedSeries<T>& product, const ProblemInstance<T>& source) {
  std::vector<T> d;
  d.reserve(product.order());
  for (std::size_t j = 1; j <= product.order(); ++j) d.push_back(-product[j]);
  return DCoefficients<T>(std::move(d), source);
}

template <Field T>
DCoefficients<T> d_series(const ProblemInstance<T>& inst, std::size_t order = default_order) {
  return d_from_series(partial_product(inst, inst.size(), order), inst);
}

template <Field T>
Verdict<T> verify_positivity(const DCoefficients<T>& d, double tol = 0.0) {
  Verdict<T> v;
  v.order = d.order();
  v.min_index = 1;
  v.min_value = d.at(1);
  for (std::size_t j = 1; j <= d.order(); ++j) {
    if (!v.first_failure && sign_of(d.at(j), tol) <= 0) v.first_failure = j;
    if (d.at(j) < v.min_value) {
      v.min_value = d.at(j);
      v.min_index = j;
    }
  }
  v.all_positive = !v.first_failure;
  return v;
}

/// sum_j c_j mu_j.
template <Field T>
T d1_closed_form(const ProblemInstance<T>& inst) {
  T acc = from_int<T>(0);
  for (std::size_t j = 1; j <= inst.size(); ++j) acc += inst.c_at(j) * inst.mu_at(j);
  return acc;
}

/// Coefficients of (1 - sum_j D_j t^j)^{rho'} for a rho = 1 source and 0 < rho' < 1.
template <Field T>
DCoefficients<T> scale_rho(const DCoefficients<T>& d, const T& rho_prime) {
  if (!d.source().rho_is_one()) throw usage_error("scale_rho needs a source instance with rho = 1");
  if (sign(rho_prime) <= 0 || !(rho_prime < from_int<T>(1)))
    throw usage_error("scale_rho needs 0 < rho' < 1, got " + to_string(rho_prime));
  auto scaled = pow(d.as_series(), rho_prime);
  return d_from_series(scaled, scale_mu(d.source(), rho_prime));
}

/// Drops the last factor, the c_n = 0 case.
template <Field T>
ProblemInstance<T> reduce_drop_zero(const ProblemInstance<T>& inst) {
  if (inst.size() < 2) throw usage_error("reduce_drop_zero needs n >= 2");
  std::vector<T> c(inst.c().begin(), inst.c().end() - 1);
  std::vector<T> mu(inst.mu().begin(), inst.mu().end() - 1);
  return ProblemInstance<T>::make(std::move(c), std::move(mu), inst.label());
}

/// Folds factor n into factor n-1, the c_n = c_{n-1} case.
template <Field T>
ProblemInstance<T> reduce_merge_equal(const ProblemInstance<T>& inst) {
  if (inst.size() < 2) throw usage_error("reduce_merge_equal needs n >= 2");
  std::vector<T> c(inst.c().begin(), inst.c().end() - 1);
  std::vector<T> mu(inst.mu().begin(), inst.mu().end() - 1);
  mu.back() += inst.mu().back();
  return ProblemInstance<T>::make(std::move(c), std::move(mu), inst.label());
}

} // namespace negser

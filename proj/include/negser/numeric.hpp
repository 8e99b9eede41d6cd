#pragma once

// Scalar arithmetic shared by every negser module: exact GMP rationals and
// MPFR floats at a context-fixed binary precision.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>

#include <boost/multiprecision/gmp.hpp>
#include <mpfr.h>

namespace negser {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Caller broke an operation's contract (bad tolerance, bad index, ...).
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Exact and float values, or floats of different precision, were combined.
struct domain_mismatch : std::logic_error {
  using std::logic_error::logic_error;
};

/// Malformed numeric text.
struct parse_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Domain { exact, floating };

inline constexpr long default_precision_bits = 128;
inline constexpr double default_float_tolerance = 1e-25;

inline std::string_view to_string(Domain d) { return d == Domain::exact ? "rational" : "float"; }

// ---------------------------------------------------------------------------
// Float context

namespace detail {
inline long& context_precision_ref() {
  thread_local long bits = default_precision_bits;
  return bits;
}
} // namespace detail

/// Precision (bits) used for every Float created on this thread.
inline long context_precision() { return detail::context_precision_ref(); }

/// Sets the calling thread's Float precision for the lifetime of the scope.
class PrecisionScope {
public:
  explicit PrecisionScope(long bits) : saved_(context_precision()) {
    if (bits < 53)
      throw usage_error("float precision must be at least 53 bits, got " + std::to_string(bits));
    detail::context_precision_ref() = bits;
  }
  ~PrecisionScope() { detail::context_precision_ref() = saved_; }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
  long saved_;
};

/// MPFR value with round-to-nearest-even arithmetic. Operands must share
/// one precision; mixing precisions throws domain_mismatch.
class Float {
public:
  Float() : Float(0L) {}

  explicit Float(long v) {
    mpfr_init2(v_, context_precision());
    mpfr_set_si(v_, v, MPFR_RNDN);
  }
  explicit Float(int v) : Float(static_cast<long>(v)) {}
  explicit Float(unsigned long v) {
    mpfr_init2(v_, context_precision());
    mpfr_set_ui(v_, v, MPFR_RNDN);
  }

  Float(const Float& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Float(Float&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Float& operator=(const Float& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Float& operator=(Float&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Float() { mpfr_clear(v_); }

  /// Nearest float to `r` at `bits` precision.
  static Float from_rational(const Rational& r, long bits) {
    Float f(NoInit{}, bits);
    mpfr_set_q(f.v_, r.backend().data(), MPFR_RNDN);
    return f;
  }

  static Float from_double(double d) {
    Float f(NoInit{}, context_precision());
    mpfr_set_d(f.v_, d, MPFR_RNDN);
    return f;
  }

  long precision_bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Decimal scientific notation with enough digits to round-trip.
  std::string str() const {
    const long digits = 2 + static_cast<long>(std::ceil(precision_bits() * 0.30102999566398120));
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", static_cast<int>(digits - 1), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  Float operator-() const {
    Float r(NoInit{}, precision_bits());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Float& operator+=(const Float& o) { return apply(o, mpfr_add); }
  Float& operator-=(const Float& o) { return apply(o, mpfr_sub); }
  Float& operator*=(const Float& o) { return apply(o, mpfr_mul); }
  Float& operator/=(const Float& o) { return apply(o, mpfr_div); }

  friend Float operator+(Float a, const Float& b) { return a += b; }
  friend Float operator-(Float a, const Float& b) { return a -= b; }
  friend Float operator*(Float a, const Float& b) { return a *= b; }
  friend Float operator/(Float a, const Float& b) { return a /= b; }

  friend bool operator==(const Float& a, const Float& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator<(const Float& a, const Float& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Float& a, const Float& b) { return b < a; }
  friend bool operator<=(const Float& a, const Float& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Float& a, const Float& b) { return b <= a; }

  friend Float abs(const Float& a) {
    Float r(NoInit{}, a.precision_bits());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  /// a * 2^e, exact.
  friend Float ldexp(const Float& a, long e) {
    Float r(NoInit{}, a.precision_bits());
    mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
    return r;
  }

  const __mpfr_struct* raw() const { return v_; }

private:
  struct NoInit {};
  Float(NoInit, long bits) { mpfr_init2(v_, bits); }

  using BinaryFn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  Float& apply(const Float& o, BinaryFn fn) {
    if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
      throw domain_mismatch("float operands have different precisions (" +
                            std::to_string(precision_bits()) + " vs " +
                            std::to_string(o.precision_bits()) + " bits)");
    fn(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

// ---------------------------------------------------------------------------
// Uniform helpers for the templated engine

template <typename T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

template <typename T>
concept Field = std::is_same_v<T, Rational> || std::is_same_v<T, Float>;

template <Field T>
inline constexpr Domain domain_of_v = is_exact_v<T> ? Domain::exact : Domain::floating;

inline int sign(const Rational& r) { return r.sign(); }
inline int sign(const Float& f) { return f.sign(); }

inline Rational abs_value(const Rational& r) { return boost::multiprecision::abs(r); }
inline Float abs_value(const Float& f) { return abs(f); }

/// Converts an exact value into T (identity for Rational, widening at the
/// context precision for Float).
template <Field T>
T from_rational(const Rational& r) {
  if constexpr (is_exact_v<T>)
    return r;
  else
    return Float::from_rational(r, context_precision());
}

template <Field T>
T from_int(long v) {
  if constexpr (is_exact_v<T>)
    return Rational(v);
  else
    return Float(v);
}

/// Integer power with non-negative exponent.
template <Field T>
T ipow(const T& base, std::size_t e) {
  T result = from_int<T>(1);
  T b = base;
  while (e) {
    if (e & 1u) result *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Rational text format: "p/q" or "p", optional leading '-' (ASCII or U+2212).

namespace detail {
inline std::string_view strip_minus(std::string_view s, bool& negative) {
  negative = false;
  if (!s.empty() && s.front() == '-') {
    negative = true;
    s.remove_prefix(1);
  } else if (s.starts_with("\xE2\x88\x92")) {
    negative = true;
    s.remove_prefix(3);
  }
  return s;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (ch < '0' || ch > '9') return false;
  return true;
}

/// Decimal digit string to Integer (leading zeros would otherwise read as octal).
inline Integer decimal_integer(std::string_view digits) {
  const auto first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? Integer(0) : Integer(std::string(digits.substr(first)));
}
} // namespace detail

inline Rational parse_rational(std::string_view text) {
  bool negative = false;
  std::string_view s = detail::strip_minus(text, negative);
  const auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den))
    throw parse_error("malformed rational '" + std::string(text) + "'");
  const Integer p = detail::decimal_integer(num), q = detail::decimal_integer(den);
  if (q == 0) throw parse_error("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  return negative ? Rational(-r) : r;
}

/// Exact value of a decimal literal such as "0.125", "-3", "2.5e-7".
inline Rational parse_decimal(std::string_view text) {
  bool negative = false;
  std::string_view s = detail::strip_minus(text, negative);
  std::string_view mantissa = s, exponent;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = s.substr(0, e);
    exponent = s.substr(e + 1);
  }
  std::string_view ipart = mantissa, fpart;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    ipart = mantissa.substr(0, dot);
    fpart = mantissa.substr(dot + 1);
  }
  const bool ok = (ipart.empty() || detail::all_digits(ipart)) && (fpart.empty() || detail::all_digits(fpart)) &&
                  !(ipart.empty() && fpart.empty());
  long exp10 = 0;
  bool exp_ok = true;
  if (!exponent.empty() || mantissa.size() != s.size()) {
    bool eneg = false;
    std::string_view ed = exponent;
    if (!ed.empty() && (ed.front() == '+' || ed.front() == '-')) {
      eneg = ed.front() == '-';
      ed.remove_prefix(1);
    }
    exp_ok = detail::all_digits(ed) && ed.size() <= 6;
    if (exp_ok) exp10 = std::stol(std::string(ed)) * (eneg ? -1 : 1);
  }
  if (!ok || !exp_ok) throw parse_error("malformed decimal '" + std::string(text) + "'");
  const Integer digits = detail::decimal_integer(std::string(ipart) + std::string(fpart));
  exp10 -= static_cast<long>(fpart.size());
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exp10)));
  Rational r = exp10 >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  return negative ? Rational(-r) : r;
}

/// Rational text, falling back to a decimal literal when `allow_decimal`.
inline Rational parse_number(std::string_view text, bool allow_decimal) {
  if (text.find_first_of(".eE") != std::string_view::npos) {
    if (!allow_decimal) throw parse_error("decimal literal '" + std::string(text) + "' needs float domain");
    return parse_decimal(text);
  }
  return parse_rational(text);
}

inline std::string to_string(const Rational& r) {
  const Integer& p = boost::multiprecision::numerator(r);
  const Integer& q = boost::multiprecision::denominator(r);
  return q == 1 ? p.str() : p.str() + "/" + q.str();
}

inline std::string to_string(const Float& f) { return f.str(); }

// ---------------------------------------------------------------------------
// Scalar: runtime-tagged value used at I/O boundaries.

class Scalar {
public:
  Scalar(Rational r) : v_(std::move(r)) {}
  Scalar(Float f) : v_(std::move(f)) {}

  Domain domain() const { return std::holds_alternative<Rational>(v_) ? Domain::exact : Domain::floating; }
  bool is_exact() const { return domain() == Domain::exact; }

  const Rational& rational() const {
    if (auto* r = std::get_if<Rational>(&v_)) return *r;
    throw domain_mismatch("scalar is not exact");
  }
  const Float& floating() const {
    if (auto* f = std::get_if<Float>(&v_)) return *f;
    throw domain_mismatch("scalar is not a float");
  }

  template <typename Fn>
  decltype(auto) visit(Fn&& fn) const { return std::visit(std::forward<Fn>(fn), v_); }

  std::string str() const {
    return visit([](const auto& x) { return to_string(x); });
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return combine(a, b, [](auto x, const auto& y) { return x + y; }); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return combine(a, b, [](auto x, const auto& y) { return x - y; }); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return combine(a, b, [](auto x, const auto& y) { return x * y; }); }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (b.visit([](const auto& y) { return sign(y); }) == 0) throw std::domain_error("division by zero");
    return combine(a, b, [](auto x, const auto& y) { return x / y; });
  }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.domain() != b.domain()) throw domain_mismatch("comparing exact and float scalars");
    return a.v_ == b.v_;
  }
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.domain() != b.domain()) throw domain_mismatch("comparing exact and float scalars");
    if (a.is_exact()) return a.rational() < b.rational();
    return a.floating() < b.floating();
  }

private:
  template <typename Op>
  static Scalar combine(const Scalar& a, const Scalar& b, Op op) {
    if (a.domain() != b.domain())
      throw domain_mismatch("mixing exact and float scalars; widen explicitly first");
    if (a.is_exact()) return Scalar(op(a.rational(), b.rational()));
    return Scalar(op(a.floating(), b.floating()));
  }

  std::variant<Rational, Float> v_;
};

/// Nearest float to `r` at `precision_bits` (round-to-nearest-even).
inline Scalar widen(const Rational& r, long precision_bits) {
  if (precision_bits < 53) throw usage_error("precision_bits must be >= 53");
  return Scalar(Float::from_rational(r, precision_bits));
}

inline Scalar widen(const Scalar& s, long precision_bits) {
  if (!s.is_exact()) throw domain_mismatch("widen expects an exact scalar");
  return widen(s.rational(), precision_bits);
}

/// Sign with a zero band of half-width `tol`. Exact values require tol == 0.
inline int sign_of(const Rational& r, double tol = 0.0) {
  if (tol != 0.0) throw usage_error("nonzero tolerance given for an exact value");
  return r.sign();
}

inline int sign_of(const Float& f, double tol = 0.0) {
  if (!(tol >= 0.0)) throw usage_error("tolerance must be nonnegative");
  if (tol > 0.0 && abs(f) <= Float::from_rational(Rational(tol), f.precision_bits())) return 0;
  return f.sign();
}

inline int sign_of(const Scalar& s, double tol = 0.0) {
  return s.visit([tol](const auto& x) { return sign_of(x, tol); });
}

/// Generalized binomial coefficient mu (mu-1) ... (mu-k+1) / k!.
template <Field T>
T binom_real(const T& mu, std::size_t k) {
  T result = from_int<T>(1);
  for (std::size_t i = 0; i < k; ++i) {
    result *= mu - from_int<T>(static_cast<long>(i));
    result /= from_int<T>(static_cast<long>(i + 1));
  }
  return result;
}

inline Scalar binom_real(const Scalar& mu, std::size_t k) {
  return mu.visit([k](const auto& x) { return Scalar(binom_real(x, k)); });
}

} // namespace negser

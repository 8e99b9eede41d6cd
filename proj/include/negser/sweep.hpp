#pragma once

// Seeded random instances, bulk verification and report files.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include <negser/io.hpp>
#include <negser/theorem.hpp>

namespace negser {

enum class RhoMode { exactly_one, strict_less, random };

struct SweepConfig {
  std::size_t n_min = 2;
  std::size_t n_max = 6;
  RhoMode rho_mode = RhoMode::exactly_one;
  /// Used with RhoMode::strict_less.
  Rational rho_value = 1;
  std::size_t order = 40;
  std::size_t count = 100;
  std::uint64_t seed = 7;
  Domain domain = Domain::exact;
  long precision_bits = default_precision_bits;

  void validate() const {
    if (n_min < 1 || n_max < n_min) throw usage_error("sweep n range must satisfy 1 <= min <= max");
    if (count < 1) throw usage_error("sweep count must be >= 1");
    if (order < 1) throw usage_error("sweep order must be >= 1");
    if (rho_mode == RhoMode::strict_less && (rho_value <= 0 || rho_value >= 1))
      throw usage_error("strict_less rho must lie in (0, 1)");
    if (precision_bits < 53) throw usage_error("precision must be >= 53 bits");
  }
};

/// Portable stream for one instance: mt19937_64 seeded through seed_seq from
/// (sweep seed, instance id), with rejection sampling for bounded draws.
class InstanceRng {
public:
  InstanceRng(std::uint64_t seed, std::uint64_t instance_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(instance_id), static_cast<std::uint32_t>(instance_id >> 32)};
    engine_.seed(seq);
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return engine_();
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + x % span;
  }

private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t c_numerator_max = 10000;
inline constexpr std::uint64_t c_denominator = 1000;
inline constexpr std::uint64_t weight_max = 1000;

/// c_k = (distinct integers in [1, 10^4], descending) / 10^3;
/// mu_k = rho w_k / sum w with integer weights w_k in [1, 10^3].
inline ExactInstance random_instance(InstanceRng& rng, const SweepConfig& config) {
  const auto n = static_cast<std::size_t>(rng.uniform(config.n_min, config.n_max));
  std::vector<std::uint64_t> picks;
  while (picks.size() < n) {
    const auto v = rng.uniform(1, c_numerator_max);
    if (std::find(picks.begin(), picks.end(), v) == picks.end()) picks.push_back(v);
  }
  std::sort(picks.begin(), picks.end(), std::greater<>());
  std::vector<std::uint64_t> w(n);
  std::uint64_t total = 0;
  for (auto& x : w) total += (x = rng.uniform(1, weight_max));

  Rational rho = 1;
  if (config.rho_mode == RhoMode::strict_less) rho = config.rho_value;
  if (config.rho_mode == RhoMode::random) rho = Rational(static_cast<long>(rng.uniform(1, weight_max)), 1000);

  std::vector<Rational> c, mu;
  for (auto p : picks) c.emplace_back(static_cast<long>(p), static_cast<long>(c_denominator));
  for (auto x : w) mu.push_back(rho * Rational(static_cast<long>(x), static_cast<long>(total)));
  return ExactInstance::make(std::move(c), std::move(mu));
}

inline ExactInstance random_instance(const SweepConfig& config, std::uint64_t instance_id) {
  InstanceRng rng(config.seed, instance_id);
  return random_instance(rng, config);
}

struct SweepRecord {
  std::uint64_t instance_id = 0;
  ExactInstance instance = ExactInstance::make({Rational(1)}, {Rational(1, 2)});
  bool theorem_applicable = true;
  bool all_positive = false;
  std::optional<std::size_t> first_failure;
  std::size_t min_index = 0;
  std::optional<Scalar> min_value;
  bool lemma2_ok = false;
  /// Set only for rho < 1 instances.
  std::optional<bool> lemma1_ok;
  std::int64_t elapsed_micros = 0;
  std::string error;

  bool counts_as_failure() const { return theorem_applicable && error.empty() && !all_positive; }
};

struct SweepSummary {
  std::size_t instances = 0;
  std::size_t applicable = 0;
  std::size_t excluded = 0;
  std::size_t failures = 0;
  std::size_t lemma2_failures = 0;
  std::size_t lemma1_checked = 0;
  std::size_t lemma1_failures = 0;
  std::size_t errors = 0;
  bool halted = false;
  std::optional<std::uint64_t> first_failure_instance;
  std::optional<std::uint64_t> global_min_instance;
  std::size_t global_min_index = 0;
  std::optional<Scalar> global_min_value;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> records;
  SweepSummary summary;
};

namespace detail {

/// |a - b| <= tol * max(1, |b|)
template <Field T>
bool close_relative(const T& a, const T& b, double tol) {
  if constexpr (is_exact_v<T>) {
    return tol == 0.0 ? a == b : abs_value(T(a - b)) <= Rational(tol) * std::max(Rational(1), abs_value(b));
  } else {
    Float scale = abs(b);
    if (scale < Float(1)) scale = Float(1);
    return abs(a - b) <= Float::from_double(tol) * scale;
  }
}

template <Field T>
void evaluate_into(SweepRecord& rec, const ExactInstance& exact, const SweepConfig& config) {
  const double sign_tol = is_exact_v<T> ? 0.0 : default_float_tolerance;
  const double equal_tol = is_exact_v<T> ? 0.0 : 1e-20;
  ProblemInstance<T> inst = [&] {
    if constexpr (is_exact_v<T>)
      return exact;
    else
      return widen(exact, config.precision_bits);
  }();
  const auto d = d_series(inst, config.order);
  const auto verdict = verify_positivity(d, sign_tol);
  rec.all_positive = verdict.all_positive;
  rec.first_failure = verdict.first_failure;
  rec.min_index = verdict.min_index;
  rec.min_value = Scalar(verdict.min_value);

  const T d1 = d1_closed_form(inst);
  rec.lemma2_ok = close_relative(d.at(1), d1, equal_tol);
  if (exact.rho_is_one()) rec.lemma2_ok = rec.lemma2_ok && sign_of(T(d.at(1) - inst.c().back()), sign_tol) > 0;

  if (!exact.rho_is_one()) {
    const auto base_exact = scale_mu(exact, Rational(1 / exact.rho()));
    ProblemInstance<T> base = [&] {
      if constexpr (is_exact_v<T>)
        return base_exact;
      else
        return widen(base_exact, config.precision_bits);
    }();
    const auto scaled = scale_rho(d_series(base, config.order), from_rational<T>(exact.rho()));
    bool ok = true;
    for (std::size_t j = 1; j <= config.order && ok; ++j) ok = close_relative(scaled.at(j), d.at(j), equal_tol);
    rec.lemma1_ok = ok;
  }
}

} // namespace detail

/// Runs every check on one instance. Never throws; failures land in `error`.
inline SweepRecord evaluate_instance(const ExactInstance& exact, std::uint64_t instance_id, const SweepConfig& config) {
  SweepRecord rec;
  rec.instance_id = instance_id;
  rec.instance = exact;
  rec.theorem_applicable = exact.theorem_applicable();
  const auto start = std::chrono::steady_clock::now();
  try {
    if (config.domain == Domain::exact) {
      detail::evaluate_into<Rational>(rec, exact, config);
    } else {
      PrecisionScope scope(config.precision_bits);
      detail::evaluate_into<Float>(rec, exact, config);
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.elapsed_micros =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

/// Worker count: NEGSER_THREADS when set (>= 1), else hardware concurrency.
inline std::size_t sweep_threads() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NEGSER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  return hw;
}

/// Evaluates config.count instances in parallel. Records come back in
/// instance_id order. An exact-mode counterexample stops the sweep; records
/// past the first failing id are dropped so the output does not depend on
/// scheduling.
inline SweepResult run_sweep(const SweepConfig& config, std::size_t threads = sweep_threads()) {
  config.validate();
  SweepResult result;
  result.config = config;
  std::vector<std::optional<SweepRecord>> slots(config.count);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> stop_after{std::numeric_limits<std::uint64_t>::max()};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t id = next.fetch_add(1);
      if (id >= config.count || id > stop_after.load()) return;
      SweepRecord rec;
      try {
        rec = evaluate_instance(random_instance(config, id), id, config);
      } catch (const std::exception& e) {
        rec.instance_id = id;
        rec.error = e.what();
      }
      if (config.domain == Domain::exact && rec.counts_as_failure()) {
        std::uint64_t cur = stop_after.load();
        while (id < cur && !stop_after.compare_exchange_weak(cur, id)) {
        }
      }
      slots[id] = std::move(rec);
    }
  };
  threads = std::clamp<std::size_t>(threads, 1, config.count);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::uint64_t last = std::min<std::uint64_t>(stop_after.load(), config.count - 1);
  auto& s = result.summary;
  for (std::uint64_t id = 0; id <= last; ++id) {
    auto& rec = *slots[id];
    ++s.instances;
    if (!rec.error.empty()) {
      ++s.errors;
    } else {
      if (rec.theorem_applicable)
        ++s.applicable;
      else
        ++s.excluded;
      if (rec.counts_as_failure()) {
        ++s.failures;
        if (!s.first_failure_instance) s.first_failure_instance = id;
      }
      if (!rec.lemma2_ok) ++s.lemma2_failures;
      if (rec.lemma1_ok) {
        ++s.lemma1_checked;
        if (!*rec.lemma1_ok) ++s.lemma1_failures;
      }
      if (rec.min_value && (!s.global_min_value || *rec.min_value < *s.global_min_value)) {
        s.global_min_value = rec.min_value;
        s.global_min_instance = id;
        s.global_min_index = rec.min_index;
      }
    }
    result.records.push_back(std::move(rec));
  }
  s.halted = config.domain == Domain::exact && s.failures > 0;
  return result;
}

// ---------------------------------------------------------------------------
// Reports

inline std::string report_csv(const SweepResult& result, bool include_timings) {
  std::ostringstream out;
  out << "instance_id,n,rho,order,domain,min_D_index,min_D_value,all_positive,lemma2_ok,lemma1_ok,elapsed_micros\n";
  auto b = [](bool v) { return v ? "true" : "false"; };
  for (const auto& r : result.records) {
    out << r.instance_id << ',' << r.instance.size() << ',' << to_string(r.instance.rho()) << ','
        << result.config.order << ',' << to_string(result.config.domain) << ',';
    if (r.error.empty()) {
      out << r.min_index << ',' << r.min_value->str() << ',' << b(r.all_positive) << ',' << b(r.lemma2_ok) << ',';
    } else {
      out << ",,error,,";
    }
    if (r.lemma1_ok) out << b(*r.lemma1_ok);
    out << ',';
    if (include_timings) out << r.elapsed_micros;
    out << '\n';
  }
  return out.str();
}

inline nlohmann::json summary_json(const SweepResult& result) {
  const auto& s = result.summary;
  const auto& c = result.config;
  nlohmann::json j;
  j["config"] = {{"seed", c.seed},
                 {"count", c.count},
                 {"order", c.order},
                 {"n_min", c.n_min},
                 {"n_max", c.n_max},
                 {"domain", std::string(to_string(c.domain))},
                 {"rho_mode", c.rho_mode == RhoMode::exactly_one   ? "exactly_one"
                              : c.rho_mode == RhoMode::strict_less ? "strict_less"
                                                                   : "random"}};
  if (c.rho_mode == RhoMode::strict_less) j["config"]["rho"] = to_string(c.rho_value);
  if (c.domain == Domain::floating) j["config"]["precision_bits"] = c.precision_bits;
  j["instances"] = s.instances;
  j["applicable"] = s.applicable;
  j["excluded"] = s.excluded;
  j["failures"] = s.failures;
  j["lemma2_failures"] = s.lemma2_failures;
  j["lemma1_checked"] = s.lemma1_checked;
  j["lemma1_failures"] = s.lemma1_failures;
  j["errors"] = s.errors;
  j["halted"] = s.halted;
  j["first_failure_instance"] = s.first_failure_instance ? nlohmann::json(*s.first_failure_instance) : nlohmann::json();
  if (s.global_min_value)
    j["global_min_D"] = {{"instance_id", *s.global_min_instance},
                         {"index", s.global_min_index},
                         {"value", s.global_min_value->str()}};
  else
    j["global_min_D"] = nullptr;
  return j;
}

/// Instance JSON for a failing record, replayable with `negser verify`.
inline nlohmann::json reproducer_json(const SweepResult& result, const SweepRecord& rec) {
  const auto& c = result.config;
  auto inst = rec.instance.with_label("sweep seed=" + std::to_string(c.seed) + " id=" + std::to_string(rec.instance_id));
  return instance_to_json(inst, c.order, c.domain,
                          c.domain == Domain::floating ? std::optional<long>(c.precision_bits) : std::nullopt);
}

// ---------------------------------------------------------------------------
// Boundary stress set

enum class ReductionKind { merge_equal, drop_zero, rho_one };

inline std::string_view to_string(ReductionKind k) {
  switch (k) {
  case ReductionKind::merge_equal: return "merge_equal";
  case ReductionKind::drop_zero: return "drop_zero";
  case ReductionKind::rho_one: return "rho_one";
  }
  return "unknown";
}

/// A near-degenerate instance and the reduced instance it approaches.
struct BoundaryPair {
  std::string label;
  ExactInstance near;
  ExactInstance reduced;
  ReductionKind kind;
};

inline std::vector<BoundaryPair> boundary_suite() {
  const Rational tiny(1, 1000000);
  const Rational third(1, 3);
  auto make = [](std::vector<Rational> c, std::vector<Rational> mu, std::string label) {
    return ExactInstance::make(std::move(c), std::move(mu), std::move(label));
  };
  std::vector<BoundaryPair> out;

  {
    auto near = make({1 + 2 * tiny, 1 + tiny, Rational(1)}, {third, third, third}, "gap-1e-6");
    out.push_back({near.label(), near, reduce_merge_equal(near), ReductionKind::merge_equal});
  }
  {
    auto near = make({Rational(3), Rational(2), Rational(1)}, {Rational(1, 2), Rational(1, 2) - tiny, tiny}, "mu_n-1e-6");
    out.push_back({near.label(), near, reduce_drop_zero(near), ReductionKind::drop_zero});
  }
  {
    const Rational rho = 1 - tiny;
    auto base = make({Rational(3), Rational(2), Rational(1)}, {third, third, third}, "rho-1-1e-6");
    out.push_back({base.label(), scale_mu(base, rho), base, ReductionKind::rho_one});
  }
  {
    auto near = make({1 + tiny, Rational(1)}, {Rational(1, 2), Rational(1, 2)}, "n2-near-merge");
    out.push_back({near.label(), near, reduce_merge_equal(near), ReductionKind::merge_equal});
  }
  {
    auto near = make({1 + tiny, Rational(1)}, {Rational(1, 2), Rational(1, 4)}, "n2-near-merge-rho-3/4");
    out.push_back({near.label(), near, reduce_merge_equal(near), ReductionKind::merge_equal});
  }
  {
    auto near = make({Rational(2), Rational(1)}, {1 - tiny, tiny}, "n2-mu_n-1e-6");
    out.push_back({near.label(), near, reduce_drop_zero(near), ReductionKind::drop_zero});
  }
  {
    auto near = make({Rational(5), Rational(4), Rational(3), 3 - tiny}, {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)},
                     "n4-near-merge");
    out.push_back({near.label(), near, reduce_merge_equal(near), ReductionKind::merge_equal});
  }
  return out;
}

} // namespace negser

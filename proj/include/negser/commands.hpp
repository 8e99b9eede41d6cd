#pragma once

// Library side of the `negser` command-line tool. Each command takes parsed
// inputs, writes its report to streams and returns the process exit code.

#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <negser/cn_analysis.hpp>
#include <negser/io.hpp>
#include <negser/sweep.hpp>
#include <negser/theorem.hpp>

namespace negser::cli {

enum ExitCode : int { exit_ok = 0, exit_theorem_failure = 1, exit_usage = 2, exit_io = 3 };

/// Command-line overrides applied on top of an instance file.
struct RunOverrides {
  std::optional<std::size_t> order;
  std::optional<Domain> domain;
  std::optional<long> precision_bits;
};

inline InstanceSpec apply(InstanceSpec spec, const RunOverrides& o) {
  if (o.order) spec.order = *o.order;
  if (o.domain) spec.domain = *o.domain;
  if (o.precision_bits) spec.precision_bits = *o.precision_bits;
  if (spec.order < 1) throw usage_error("--order must be >= 1");
  if (spec.precision_bits < 53) throw usage_error("--precision must be >= 53");
  return spec;
}

/// Runs `fn(instance)` with the instance in the requested domain.
template <typename Fn>
decltype(auto) with_domain(const InstanceSpec& spec, Fn&& fn) {
  if (spec.domain == Domain::exact) return fn(spec.instance);
  PrecisionScope scope(spec.precision_bits);
  return fn(widen(spec.instance, spec.precision_bits));
}

inline double sign_tolerance(Domain d) { return d == Domain::exact ? 0.0 : default_float_tolerance; }

// ---------------------------------------------------------------------------

/// CSV "j,D_j" for j = 1..N.
inline int cmd_coeffs(const InstanceSpec& spec, std::ostream& out) {
  with_domain(spec, [&](const auto& inst) {
    const auto d = d_series(inst, spec.order);
    out << "j,D_j\n";
    for (std::size_t j = 1; j <= d.order(); ++j) out << j << ',' << to_string(d.at(j)) << '\n';
    return 0;
  });
  return exit_ok;
}

/// Replacement for D_j applied after computation (test hook).
struct DOverride {
  std::size_t index = 0;
  Rational value;
};

inline int cmd_verify(const InstanceSpec& spec, std::ostream& out, std::ostream& err,
                      const std::vector<DOverride>& overrides = {}) {
  return with_domain(spec, [&](const auto& inst) {
    using T = std::decay_t<decltype(inst.c().front())>;
    const double tol = sign_tolerance(spec.domain);
    auto d = d_series(inst, spec.order);
    for (const auto& o : overrides) d.override_at(o.index, from_rational<T>(o.value));
    const auto v = verify_positivity(d, tol);

    std::string status = v.all_positive ? "pass" : "fail";
    if (!inst.theorem_applicable()) {
      bool zero_tail = true;
      for (std::size_t j = 2; j <= d.order(); ++j) zero_tail = zero_tail && sign_of(d.at(j), tol) == 0;
      if (zero_tail && sign_of(d.at(1), tol) > 0) status = "excluded case";
    }

    nlohmann::json j;
    j["status"] = status;
    j["order"] = d.order();
    j["domain"] = std::string(to_string(spec.domain));
    j["theorem_applicable"] = inst.theorem_applicable();
    j["all_positive"] = v.all_positive;
    j["first_failure"] = v.first_failure ? nlohmann::json(*v.first_failure) : nlohmann::json();
    j["min_D"] = {{"index", v.min_index}, {"value", to_string(v.min_value)}};
    out << j.dump(2) << '\n';

    if (status == "excluded case") {
      err << "warning: n = 1 with mu_1 = 1 is outside the theorem; D_j = 0 for j >= 2\n";
      return int(exit_ok);
    }
    if (!v.all_positive) {
      err << "D_" << *v.first_failure << " = " << to_string(d.at(*v.first_failure)) << " is not positive\n";
      return int(exit_theorem_failure);
    }
    return int(exit_ok);
  });
}

struct SweepOutputs {
  std::filesystem::path dir = ".";
  bool timings = false;
};

/// Writes sweep_report.csv, sweep_summary.json and reproducer_<id>.json for
/// every counterexample into `outputs.dir`.
inline int cmd_sweep(const SweepConfig& config, const SweepOutputs& outputs, std::ostream& log) {
  const auto result = run_sweep(config);
  std::filesystem::create_directories(outputs.dir);
  write_file(outputs.dir / "sweep_report.csv", report_csv(result, outputs.timings));
  const auto summary = summary_json(result);
  write_file(outputs.dir / "sweep_summary.json", summary.dump(2) + "\n");
  for (const auto& rec : result.records) {
    if (!rec.counts_as_failure()) continue;
    const auto path = outputs.dir / ("reproducer_" + std::to_string(rec.instance_id) + ".json");
    write_file(path, reproducer_json(result, rec).dump(2) + "\n");
    log << "counterexample: instance " << rec.instance_id << " D_" << *rec.first_failure
        << " not positive; reproducer " << path.string() << '\n';
  }
  log << "instances=" << result.summary.instances << " failures=" << result.summary.failures
      << " lemma2_failures=" << result.summary.lemma2_failures
      << " lemma1_failures=" << result.summary.lemma1_failures << " errors=" << result.summary.errors << '\n';
  const auto& s = result.summary;
  return s.failures + s.lemma2_failures + s.lemma1_failures + s.errors == 0 ? exit_ok : exit_theorem_failure;
}

inline std::string sign_text(int s) { return std::to_string(s); }

/// CSV columns: instance_id, m, endpoint_sign_0, endpoint_sign_prev,
/// root_found, rate, bound_term, satisfied. Endpoint signs are those of -D_m.
inline int cmd_analyze_cn(const InstanceSpec& spec, std::size_t m_lo, std::size_t m_hi, std::ostream& out,
                          std::size_t grid = default_root_grid) {
  if (m_hi > spec.order) throw usage_error("--m-range upper end exceeds --order");
  const std::string id = spec.instance.label().empty() ? "0" : spec.instance.label();
  bool root_seen = false;
  with_domain(spec, [&](const auto& inst) {
    const auto rows = analyze_cn(inst, m_lo, m_hi, grid, sign_tolerance(spec.domain));
    out << "instance_id,m,endpoint_sign_0,endpoint_sign_prev,root_found,rate,bound_term,satisfied\n";
    for (const auto& r : rows) {
      out << id << ',' << r.m << ',' << sign_text(r.endpoints.at_zero) << ',' << sign_text(r.endpoints.at_prev)
          << ',' << (r.root ? "true" : "false") << ',' << to_string(r.rate) << ',';
      if (r.bound_term) out << to_string(*r.bound_term);
      out << ',';
      if (r.satisfied) out << (*r.satisfied ? "true" : "false");
      out << '\n';
      root_seen = root_seen || r.root.has_value();
    }
    return 0;
  });
  return root_seen ? exit_theorem_failure : exit_ok;
}

/// CSV of PerturbationRecord rows, one per epsilon rung (eps0, eps0/2, ...).
inline int cmd_perturb(const InstanceSpec& spec, std::size_t m, const Rational& eps0, std::size_t steps,
                       std::ostream& out) {
  if (sign(eps0) <= 0) throw usage_error("--eps-ladder start must be positive");
  if (steps < 1) throw usage_error("--eps-ladder needs at least one step");
  const std::string id = spec.instance.label().empty() ? "0" : spec.instance.label();
  bool all_ok = true;
  with_domain(spec, [&](const auto& inst) {
    using T = std::decay_t<decltype(inst.c().front())>;
    out << "instance_id,m,c_point,epsilon,epsilon_star,lhs_increment,bound_term,satisfied,actual_increment\n";
    Rational eps = eps0;
    for (std::size_t s = 0; s < steps; ++s, eps /= 2) {
      const auto rec = rm_bound_check(inst, m, from_rational<T>(eps), sign_tolerance(spec.domain));
      out << id << ',' << rec.m << ',' << to_string(rec.c_point) << ',' << to_string(rec.epsilon) << ','
          << to_string(rec.epsilon_star) << ',' << to_string(rec.lhs_increment) << ',' << to_string(rec.bound_term)
          << ',' << (rec.satisfied ? "true" : "false") << ',' << to_string(rec.actual_increment) << '\n';
      all_ok = all_ok && rec.satisfied;
    }
    return 0;
  });
  return all_ok ? exit_ok : exit_theorem_failure;
}

// ---------------------------------------------------------------------------
// Flag value parsers shared by the tool and its tests.

/// "A..B" (or a single "A").
inline std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  auto to_index = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw usage_error("bad range '" + text + "', expected A..B");
    return static_cast<std::size_t>(std::stoull(s));
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = to_index(text);
    return {v, v};
  }
  const auto a = to_index(text.substr(0, dots));
  const auto b = to_index(text.substr(dots + 2));
  if (a > b) throw usage_error("bad range '" + text + "': start exceeds end");
  return {a, b};
}

/// "START,STEPS": first epsilon (rational or decimal) and rung count.
inline std::pair<Rational, std::size_t> parse_eps_ladder(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw usage_error("bad --eps-ladder '" + text + "', expected START,STEPS");
  Rational start;
  try {
    start = parse_number(text.substr(0, comma), true);
  } catch (const parse_error& e) {
    throw usage_error(e.what());
  }
  const auto steps_text = text.substr(comma + 1);
  if (steps_text.empty() || steps_text.find_first_not_of("0123456789") != std::string::npos)
    throw usage_error("bad --eps-ladder step count '" + steps_text + "'");
  return {start, static_cast<std::size_t>(std::stoull(steps_text))};
}

inline Domain parse_domain(const std::string& text) {
  if (text == "rational") return Domain::exact;
  if (text == "float") return Domain::floating;
  throw usage_error("--domain must be rational or float");
}

} // namespace negser::cli

// negser: coefficients, verification, sweeps and c_n analysis for
// prod_j (1 - c_j t)^{mu_j} = 1 - sum_j D_j t^j.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <negser/negser.hpp>

namespace {

using namespace negser;
using namespace negser::cli;

struct SharedFlags {
  std::optional<std::size_t> order;
  std::string domain;
  std::optional<long> precision;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("--order", order, "truncation order N");
    app->add_option("--domain", domain, "rational | float")->check(CLI::IsMember({"rational", "float"}));
    app->add_option("--precision", precision, "float precision in bits (>= 53)");
    app->add_option("--out", out, "output path (stdout when omitted)");
  }

  RunOverrides overrides() const {
    RunOverrides o;
    o.order = order;
    if (!domain.empty()) o.domain = parse_domain(domain);
    o.precision_bits = precision;
    return o;
  }
};

/// Output stream for --out, or stdout.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw io_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig c;
  if (j.contains("n_min")) c.n_min = j.at("n_min").get<std::size_t>();
  if (j.contains("n_max")) c.n_max = j.at("n_max").get<std::size_t>();
  if (j.contains("order")) c.order = j.at("order").get<std::size_t>();
  if (j.contains("count")) c.count = j.at("count").get<std::size_t>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("domain")) c.domain = parse_domain(j.at("domain").get<std::string>());
  if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<long>();
  if (j.contains("rho_mode")) {
    const auto m = j.at("rho_mode").get<std::string>();
    if (m == "exactly_one")
      c.rho_mode = RhoMode::exactly_one;
    else if (m == "strict_less")
      c.rho_mode = RhoMode::strict_less;
    else if (m == "random")
      c.rho_mode = RhoMode::random;
    else
      throw usage_error("rho_mode must be exactly_one, strict_less or random");
  }
  if (j.contains("rho")) c.rho_value = parse_rational(j.at("rho").get<std::string>());
  return c;
}

void apply_rho_flag(SweepConfig& c, const std::string& rho) {
  if (rho == "random") {
    c.rho_mode = RhoMode::random;
    return;
  }
  const Rational r = parse_rational(rho);
  if (r == 1) {
    c.rho_mode = RhoMode::exactly_one;
  } else {
    c.rho_mode = RhoMode::strict_less;
    c.rho_value = r;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated power-series checks for products of (1 - c_j t)^{mu_j}"};
  app.require_subcommand(1, 1);

  SharedFlags coeffs_flags, verify_flags, analyze_flags, perturb_flags;
  std::string coeffs_path, verify_path, analyze_path, perturb_path;

  auto* coeffs = app.add_subcommand("coeffs", "write D_1..D_N as CSV");
  coeffs->add_option("instance", coeffs_path, "instance JSON file")->required();
  coeffs_flags.attach(coeffs);

  auto* verify = app.add_subcommand("verify", "check D_j > 0 for j <= N; exit 1 on a counterexample");
  verify->add_option("instance", verify_path, "instance JSON file")->required();
  verify_flags.attach(verify);
  std::vector<std::string> override_specs;
  verify->add_option("--override-d", override_specs, "test hook: replace D_J by VALUE (J=VALUE)")
      ->group("");

  auto* sweep = app.add_subcommand("sweep", "randomized bulk verification");
  std::string sweep_config_path, n_range, rho_flag, sweep_domain, sweep_out = ".";
  std::optional<std::size_t> sweep_order, sweep_count;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<long> sweep_precision;
  bool timings = false;
  sweep->add_option("--config", sweep_config_path, "sweep config JSON");
  sweep->add_option("--seed", sweep_seed, "64-bit seed");
  sweep->add_option("--count", sweep_count, "number of instances");
  sweep->add_option("--order", sweep_order, "truncation order N");
  sweep->add_option("--n-range", n_range, "factor count range A..B");
  sweep->add_option("--rho", rho_flag, "1, a rational in (0,1), or random");
  sweep->add_option("--domain", sweep_domain, "rational | float")->check(CLI::IsMember({"rational", "float"}));
  sweep->add_option("--precision", sweep_precision, "float precision in bits");
  sweep->add_option("--out", sweep_out, "output directory for report files");
  sweep->add_flag("--timings", timings, "fill the elapsed_micros column (breaks byte determinism)");

  auto* analyze = app.add_subcommand("analyze-cn", "D_m as a polynomial in c_n: endpoints, roots, bound");
  analyze->add_option("instance", analyze_path, "instance JSON file")->required();
  analyze_flags.attach(analyze);
  std::string m_range;
  std::size_t grid = default_root_grid;
  analyze->add_option("--m-range", m_range, "coefficient range A..B (default 2..N)");
  analyze->add_option("--grid", grid, "sign-grid resolution for root isolation");

  auto* perturb = app.add_subcommand("perturb", "first-order c_n perturbation bound per epsilon rung");
  perturb->add_option("instance", perturb_path, "instance JSON file")->required();
  perturb_flags.attach(perturb);
  std::size_t perturb_m = 2;
  std::string eps_ladder = "1/1024,11";
  perturb->add_option("--m", perturb_m, "coefficient index m >= 2");
  perturb->add_option("--eps-ladder", eps_ladder, "START,STEPS: epsilon START halved STEPS-1 times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*coeffs) {
      const auto spec = apply(parse_instance_file(coeffs_path), coeffs_flags.overrides());
      Output out(coeffs_flags.out);
      return cmd_coeffs(spec, out.stream());
    }
    if (*verify) {
      const auto spec = apply(parse_instance_file(verify_path), verify_flags.overrides());
      std::vector<DOverride> overrides;
      for (const auto& s : override_specs) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw usage_error("--override-d expects J=VALUE");
        overrides.push_back({parse_range(s.substr(0, eq)).first, parse_number(s.substr(eq + 1), true)});
      }
      Output out(verify_flags.out);
      return cmd_verify(spec, out.stream(), std::cerr, overrides);
    }
    if (*sweep) {
      SweepConfig config;
      if (!sweep_config_path.empty()) {
        try {
          config = sweep_config_from_json(nlohmann::json::parse(read_file(sweep_config_path)));
        } catch (const nlohmann::json::exception& e) {
          throw usage_error(std::string("bad sweep config: ") + e.what());
        }
      }
      if (sweep_seed) config.seed = *sweep_seed;
      if (sweep_count) config.count = *sweep_count;
      if (sweep_order) config.order = *sweep_order;
      if (sweep_precision) config.precision_bits = *sweep_precision;
      if (!sweep_domain.empty()) config.domain = parse_domain(sweep_domain);
      if (!n_range.empty()) std::tie(config.n_min, config.n_max) = parse_range(n_range);
      if (!rho_flag.empty()) apply_rho_flag(config, rho_flag);
      config.validate();
      return cmd_sweep(config, {sweep_out, timings}, std::cerr);
    }
    if (*analyze) {
      const auto spec = apply(parse_instance_file(analyze_path), analyze_flags.overrides());
      auto [lo, hi] = m_range.empty() ? std::pair<std::size_t, std::size_t>{std::min<std::size_t>(2, spec.order), spec.order}
                                      : parse_range(m_range);
      Output out(analyze_flags.out);
      return cmd_analyze_cn(spec, lo, hi, out.stream(), grid);
    }
    if (*perturb) {
      const auto spec = apply(parse_instance_file(perturb_path), perturb_flags.overrides());
      const auto [eps0, steps] = parse_eps_ladder(eps_ladder);
      Output out(perturb_flags.out);
      return cmd_perturb(spec, perturb_m, eps0, steps, out.stream());
    }
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const instance_error& e) {
    std::cerr << "error [" << to_string(e.code) << "]: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

#pragma once

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "truncmom/asymptotics.hpp"
#include "truncmom/records.hpp"
#include "truncmom/sampling.hpp"
#include "truncmom/series.hpp"
#include "truncmom/validation.hpp"

namespace truncmom {

namespace cli_detail {

// Accepts "a", "a+bi", "a-bi", "bi", "i", "-i".
inline std::complex<double> parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw invalid_parameter("empty complex literal");
  if (s.back() != 'i') return {std::stod(s), 0.0};
  s.pop_back();
  // Locate the sign separating real and imaginary parts (not a leading sign
  // and not part of an exponent).
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E')
      split = i;
  }
  auto parse_imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return std::stod(t);
  };
  if (split == std::string::npos) return {0.0, parse_imag(s)};
  return {std::stod(s.substr(0, split)), parse_imag(s.substr(split))};
}

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

struct Emitter {
  std::ostream& out;
  bool csv = false;
  bool timing = false;
  bool header_written = false;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();

  void start_clock() { started = std::chrono::steady_clock::now(); }

  void emit(QueryRecord rec) {
    if (timing) {
      rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    }
    if (csv) {
      if (!header_written) {
        out << QueryRecord::csv_header() << "\n";
        header_written = true;
      }
      out << rec.to_csv() << "\n";
    } else {
      out << rec.to_json() << "\n";
    }
    start_clock();
  }
};

}  // namespace cli_detail

// Command-line front end. Returns the process exit code: 0 success, 1
// validation failure, 2 argument/domain errors.
inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{
      "moments of characteristic polynomials of truncated Haar matrices"};
  app.require_subcommand(1);

  std::string format = "jsonl";
  bool timing = false;
  int threads = 0;
  if (const char* env = std::getenv("TRUNCMOM_THREADS")) threads = std::atoi(env);
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_flag("--timing", timing,
               "report wall-clock runtime_ms (breaks byte-identical output)");
  app.add_option("--threads", threads,
                 "worker threads for Monte Carlo (0 = hardware)");

  // Shared ensemble options.
  int beta = 2, n_total = 4, m_trunc = 2;
  auto add_ensemble = [&](CLI::App* cmd) {
    cmd->add_option("--beta", beta, "Dyson index")
        ->check(CLI::IsMember({1, 2, 4}));
    cmd->add_option("--n", n_total, "Haar matrix size N")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--m", m_trunc, "truncation size M")
        ->check(CLI::PositiveNumber);
  };

  // ---- exact ----
  auto* exact = app.add_subcommand("exact", "terminating partition series");
  add_ensemble(exact);
  int k = 1;
  std::string x_str = "0";
  double x_mod = -1.0, x_arg = 0.0;
  bool print_coeffs = false;
  exact->add_option("-k,--k", k, "half moment order (exponent 2k)")
      ->check(CLI::NonNegativeNumber);
  exact->add_option("--x", x_str, "evaluation point, e.g. 0.5+0.2i");
  exact->add_option("--x-mod", x_mod, "evaluation point modulus");
  exact->add_option("--x-arg", x_arg, "evaluation point argument");
  exact->add_flag("--coeffs", print_coeffs, "also emit every coefficient");

  // ---- duality ----
  auto* duality = app.add_subcommand("duality", "k-fold duality integrals");
  add_ensemble(duality);
  std::string sigma_str;
  bool odd = false;
  int nodes = 0;
  long mc_samples = 200000;
  std::string rule = "gauss_jacobi";
  std::uint64_t quad_seed = 0x5eed;
  duality->add_option("-k,--k", k, "half moment order")
      ->check(CLI::NonNegativeNumber);
  duality->add_option("--x", x_str, "evaluation point");
  duality->add_option("--x-mod", x_mod, "evaluation point modulus");
  duality->add_option("--x-arg", x_arg, "evaluation point argument");
  duality->add_option("--sigma", sigma_str,
                      "comma list of Sigma eigenvalues (general average)");
  duality->add_flag("--odd", odd, "odd moments det^{2k+1} (beta=1 only)");
  duality->add_option("--nodes", nodes, "quadrature nodes per dimension");
  duality->add_option("--rule", rule, "quadrature rule")
      ->check(CLI::IsMember({"gauss_jacobi", "gauss_legendre",
                             "ordered_simplex_mc"}));
  duality->add_option("--mc-samples", mc_samples,
                      "samples for the stochastic rule");
  duality->add_option("--quad-seed", quad_seed, "seed for the stochastic rule");

  // ---- mc ----
  auto* mc = app.add_subcommand("mc", "Monte Carlo moment estimation");
  add_ensemble(mc);
  std::string sampler = "haar";
  std::string form = "m";
  double gamma = 2.0;
  long samples = 200000;
  std::uint64_t seed = 1;
  bool k_given = false, gamma_given = false;
  mc->add_option("-k,--k", k, "half moment order (gamma = 2k)")
      ->check(CLI::NonNegativeNumber)
      ->each([&](const std::string&) { k_given = true; });
  mc->add_option("--gamma", gamma, "real moment exponent")
      ->each([&](const std::string&) { gamma_given = true; });
  mc->add_option("--x", x_str, "evaluation point (haar sampler)");
  mc->add_option("--x-mod", x_mod, "evaluation point modulus");
  mc->add_option("--x-arg", x_arg, "evaluation point argument");
  mc->add_option("--sampler", sampler, "sampling engine")
      ->check(CLI::IsMember({"haar", "bhny", "beta-product"}));
  mc->add_option("--form", form, "beta-product form")
      ->check(CLI::IsMember({"m", "kappa"}));
  mc->add_option("--samples", samples, "number of samples")
      ->check(CLI::Range(2l, 1000000000l));
  mc->add_option("--seed", seed, "base RNG seed");

  // ---- boundary ----
  auto* boundary = app.add_subcommand("boundary", "closed-form Gamma products");
  add_ensemble(boundary);
  double theta = 0.0;
  std::string group;
  int group_dim = 1;
  boundary->add_option("--gamma", gamma, "moment exponent")->required();
  boundary->add_option("--theta", theta, "boundary angle");
  boundary->add_option("--group", group,
                       "full-group moment instead of a truncation")
      ->check(CLI::IsMember({"U", "SO_even", "Sp", "O_even"}));
  boundary->add_option("--dim", group_dim, "group size parameter n")
      ->check(CLI::PositiveNumber);

  // ---- asympt ----
  auto* asympt = app.add_subcommand("asympt", "asymptotic approximations");
  add_ensemble(asympt);
  std::string regime = "weak";
  double u = 1.0;
  int kappa = 1;
  asympt->add_option("--regime", regime, "asymptotic regime")
      ->required()
      ->check(CLI::IsMember({"weak", "strong"}));
  asympt->add_option("-k,--k", k, "half moment order")
      ->check(CLI::PositiveNumber);
  asympt->add_option("--u", u, "weak-regime scale, |x|^2 = 1 - 2u/M");
  asympt->add_option("--kappa", kappa, "fixed N - M (weak regime)")
      ->check(CLI::NonNegativeNumber);
  asympt->add_option("--x", x_str, "evaluation point (strong regime)");
  asympt->add_option("--x-mod", x_mod, "evaluation point modulus");
  asympt->add_option("--x-arg", x_arg, "evaluation point argument");

  // ---- clt ----
  auto* clt = app.add_subcommand("clt", "limit-theorem parameter tables");
  add_ensemble(clt);
  std::string clt_regime = "weak";
  double mu_tilde = 0.5;
  bool mu_given = false;
  int cumulant_order = 0;
  bool at_boundary = false;
  std::string m_list_str;
  clt->add_option("--regime", clt_regime, "limit regime")
      ->check(CLI::IsMember({"weak", "strong", "origin"}));
  clt->add_option("--mu-tilde", mu_tilde, "limiting ratio M/N")
      ->each([&](const std::string&) { mu_given = true; });
  clt->add_option("--cumulant-order", cumulant_order,
                  "sweep an exact cumulant over M instead of a table")
      ->check(CLI::Range(1, 3));
  clt->add_flag("--boundary", at_boundary,
                "cumulants of log|det(e^{i theta} I - A)| instead of log|det A|");
  clt->add_option("--kappa", kappa, "fixed N - M for sweeps")
      ->check(CLI::NonNegativeNumber);
  clt->add_option("--m-list", m_list_str, "comma list of M values for sweeps");

  // ---- validate ----
  auto* validate = app.add_subcommand("validate", "run the acceptance grid");
  int only_val = 0;
  auto* only_opt =
      validate->add_option("--only", only_val, "run a single criterion (1-9)")
          ->check(CLI::Range(1, 9));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "argument error: " << e.what() << "\n";
    return 2;
  }

  cli_detail::Emitter emit{out, format == "csv", timing};

  try {
    const std::complex<double> x =
        x_mod >= 0.0 ? std::polar(x_mod, x_arg) : cli_detail::parse_complex(x_str);

    if (*exact) {
      const EnsembleSpec spec(beta, n_total, m_trunc);
      emit.start_clock();
      const SeriesPolynomial poly = exact_moment(spec, k);
      QueryRecord rec;
      rec.command = "exact";
      rec.set("beta", beta);
      rec.set("n", n_total);
      rec.set("m", m_trunc);
      rec.set("order", k);
      rec.set("x_re", x.real());
      rec.set("x_im", x.imag());
      rec.value = poly.evaluate(x);
      rec.method = "partition_series";
      emit.emit(rec);
      if (print_coeffs) {
        for (int p = 0; p <= poly.degree(); ++p) {
          QueryRecord c;
          c.command = "exact.coeff";
          c.set("beta", beta);
          c.set("n", n_total);
          c.set("m", m_trunc);
          c.set("order", k);
          c.set("power", p);
          c.value = poly.coeffs[p];
          c.method = "partition_series";
          emit.emit(c);
        }
      }
    } else if (*duality) {
      const EnsembleSpec spec(beta, n_total, m_trunc);
      QuadratureSpec q;
      q.nodes_per_dim = nodes;
      q.mc_samples = mc_samples;
      q.mc_seed = quad_seed;
      if (rule == "gauss_legendre") q.rule = QuadRuleKind::gauss_legendre;
      if (rule == "ordered_simplex_mc")
        q.rule = QuadRuleKind::ordered_simplex_mc;
      emit.start_clock();
      QuadResult r;
      std::string method = rule;
      if (odd) {
        if (x.imag() != 0.0)
          throw domain_error("odd moments require real x");
        const std::vector<double> sigma =
            sigma_str.empty() ? std::vector<double>(m_trunc, 1.0)
                              : cli_detail::parse_double_list(sigma_str);
        r = odd_moment_real(spec, k, x.real(), sigma, q);
        method = "odd_" + method;
      } else if (!sigma_str.empty()) {
        r = duality_moment_general(
            spec, k, x, cli_detail::parse_double_list(sigma_str), q);
      } else {
        r = duality_moment(spec, k, x, q);
      }
      QueryRecord rec;
      rec.command = "duality";
      rec.set("beta", beta);
      rec.set("n", n_total);
      rec.set("m", m_trunc);
      rec.set("order", odd ? 2 * k + 1 : 2 * k);
      rec.set("x_re", x.real());
      rec.set("x_im", x.imag());
      rec.value = r.value;
      if (r.stochastic) rec.stderr_est = r.stderr_est;
      rec.method = method;
      emit.emit(rec);
    } else if (*mc) {
      const EnsembleSpec spec(beta, n_total, m_trunc);
      if (gamma_given && k_given)
        throw invalid_parameter("mc: give either -k or --gamma, not both");
      const double g = gamma_given ? gamma : 2.0 * k;
      emit.start_clock();
      MCEstimate est;
      if (sampler == "haar") {
        est = mc_moment(spec, {g, x}, samples, seed, threads);
      } else if (sampler == "bhny") {
        est = mc_estimate(
            samples, seed,
            [&spec, g](RngStream& rng) {
              return std::pow(bhny_boundary_sample(spec, rng), g);
            },
            threads);
      } else {
        const auto bform =
            form == "m" ? BetaProductForm::m_fold : BetaProductForm::kappa_fold;
        est = mc_estimate(
            samples, seed,
            [&spec, g, bform](RngStream& rng) {
              return std::exp(
                  g * beta_product_logdet_sample(spec, bform, rng));
            },
            threads);
      }
      QueryRecord rec;
      rec.command = "mc";
      rec.set("beta", beta);
      rec.set("n", n_total);
      rec.set("m", m_trunc);
      rec.set("order", g);
      rec.set("x_re", sampler == "haar" ? x.real() : (sampler == "bhny" ? 1.0 : 0.0));
      rec.set("x_im", sampler == "haar" ? x.imag() : 0.0);
      rec.set("seed", static_cast<double>(seed));
      rec.set("samples", static_cast<double>(samples));
      rec.value = est.mean;
      rec.stderr_est = est.stderr_est;
      rec.method = "mc_" + sampler;
      emit.emit(rec);
    } else if (*boundary) {
      emit.start_clock();
      QueryRecord rec;
      rec.command = "boundary";
      if (!group.empty()) {
        HaarGroup gr = HaarGroup::U;
        if (group == "SO_even") gr = HaarGroup::SO_even;
        if (group == "Sp") gr = HaarGroup::Sp;
        if (group == "O_even") gr = HaarGroup::O_even;
        rec.set("n", group_dim);
        rec.set("order", gamma);
        rec.value = haar_group_moment(gr, group_dim, gamma).value();
        rec.method = "gamma_product_" + group;
      } else {
        const EnsembleSpec spec(beta, n_total, m_trunc);
        rec.set("beta", beta);
        rec.set("n", n_total);
        rec.set("m", m_trunc);
        rec.set("order", gamma);
        rec.set("theta", theta);
        rec.value = boundary_moment(spec, gamma, theta).value();
        rec.method = "gamma_product";
      }
      emit.emit(rec);
    } else if (*asympt) {
      emit.start_clock();
      QueryRecord rec;
      rec.command = "asympt";
      rec.set("beta", beta);
      if (regime == "weak") {
        rec.set("m", m_trunc);
        rec.set("order", k);
        rec.set("kappa", kappa);
        rec.set("u", u);
        rec.value = weak_approx(beta, kappa, k, u, m_trunc);
        rec.method = "weak_laguerre";
      } else {
        const EnsembleSpec spec(beta, n_total, m_trunc);
        rec.set("n", n_total);
        rec.set("m", m_trunc);
        rec.set("order", k);
        rec.set("x_re", x.real());
        rec.set("x_im", x.imag());
        rec.value = strong_approx(spec, k, x);
        rec.method = "strong_gaussian";
      }
      emit.emit(rec);
    } else if (*clt) {
      emit.start_clock();
      if (cumulant_order > 0) {
        const std::vector<int> ms = m_list_str.empty()
                                        ? std::vector<int>{100, 1000, 10000}
                                        : cli_detail::parse_int_list(m_list_str);
        for (int m : ms) {
          const EnsembleSpec spec(beta, m + kappa, m);
          QueryRecord rec;
          rec.command = "clt";
          rec.set("beta", beta);
          rec.set("n", m + kappa);
          rec.set("m", m);
          rec.set("order", cumulant_order);
          rec.value = logdet_cumulant(spec, cumulant_order, at_boundary);
          rec.method = at_boundary ? "polygamma_boundary" : "polygamma_origin";
          emit.emit(rec);
        }
      } else {
        std::vector<std::pair<std::string, double>> table;
        if (clt_regime == "origin") {
          const EnsembleSpec spec(beta, n_total, m_trunc);
          const CLTParams p = clt_params_origin(spec);
          table = {{"centering", p.mean},
                   {"variance", p.variance},
                   {"log_m_centering_coeff", p.e_beta},
                   {"log_m_variance_coeff", p.v_beta}};
        } else {
          const CLTParams p = clt_params_boundary(
              beta, clt_regime == "weak" ? CLTRegime::weak : CLTRegime::strong,
              clt_regime == "strong" ? std::optional<double>(mu_tilde)
                                     : std::nullopt);
          table = {{"e_beta", p.e_beta},
                   {"v_beta", p.v_beta},
                   {"mean", p.mean},
                   {"variance", p.variance}};
        }
        for (const auto& [name, value] : table) {
          QueryRecord rec;
          rec.command = "clt";
          rec.set("beta", beta);
          if (clt_regime == "origin") {
            rec.set("n", n_total);
            rec.set("m", m_trunc);
          }
          if (clt_regime == "strong" && mu_given) rec.set("mu_tilde", mu_tilde);
          rec.value = value;
          rec.method = name;
          emit.emit(rec);
        }
      }
    } else if (*validate) {
      std::optional<int> only;
      if (only_opt->count() > 0) only = only_val;
      const auto results = run_acceptance(threads, only);
      bool all_pass = true;
      for (const auto& r : results) {
        out << format_criterion_line(r) << "\n";
        all_pass = all_pass && r.pass;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const invalid_parameter& e) {
    err << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace truncmom

// censfit: fit parametric conditional distributions to right-censored
// regression data, run Monte Carlo accuracy studies and evaluate
// Kullback-Leibler diagnostics.

#include "censfit/inference.hpp"
#include "censfit/io.hpp"
#include "censfit/kl.hpp"
#include "censfit/optimize.hpp"
#include "censfit/simulation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

// Exit codes, one per error category (documented in the README).
enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kFileError = 2,
  kSchemaError = 3,
  kIdentifiabilityError = 4,
  kNonConvergence = 5,
  kInitializationError = 6,
  kQuadratureError = 7,
  kUsage = 64,
};

[[noreturn]] void die(ExitCode code, const std::string& category, const std::string& message) {
  std::cerr << "censfit: error: " << category << ": " << message << "\n";
  std::exit(code);
}

Eigen::VectorXd parse_vector(const std::string& text, const std::string& flag) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      die(kUsage, "usage", flag + ": cannot parse '" + item + "' as a number");
    }
  }
  if (vals.empty()) die(kUsage, "usage", flag + ": empty value list");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
}

censfit::CensoringLaw parse_censoring(const std::string& text) {
  if (text == "none" || text == "infinity")
    return censfit::CensoringLaw::point_mass_at_infinity();
  if (text.rfind("normal:", 0) == 0) {
    const Eigen::VectorXd v = parse_vector(text.substr(7), "--censoring");
    if (v.size() != 2) die(kUsage, "usage", "--censoring normal:MU,SD needs two numbers");
    return censfit::CensoringLaw::normal(v[0], v[1]);
  }
  die(kUsage, "usage", "--censoring must be 'none' or 'normal:MU,SD'");
}

censfit::CovariateLaw parse_covariate_law(const std::string& text) {
  if (text.rfind("uniform:", 0) == 0) {
    const Eigen::VectorXd v = parse_vector(text.substr(8), "--covariate-law");
    if (v.size() != 2) die(kUsage, "usage", "--covariate-law uniform:A,B needs two numbers");
    return censfit::CovariateLaw::intercept_plus_uniform(v[0], v[1]);
  }
  if (text.rfind("point:", 0) == 0) {
    const Eigen::VectorXd v = parse_vector(text.substr(6), "--covariate-law");
    return censfit::CovariateLaw::finite_points({{v, 1.0}});
  }
  die(kUsage, "usage", "--covariate-law must be 'uniform:A,B' or 'point:X1,X2,...'");
}

int default_threads() {
  if (const char* env = std::getenv("CENSFIT_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------

int cmd_fit(const std::string& family_name, const std::string& data_path,
            const std::vector<std::string>& covariates, const std::string& time_col,
            const std::string& status_col, double level, const std::string& init_text,
            censfit::FitConfig config) {
  censfit::Dataset data;
  try {
    data = censfit::read_csv(data_path, {covariates, time_col, status_col});
  } catch (const censfit::SchemaError& e) {
    die(kSchemaError, "schema", e.what());
  } catch (const std::exception& e) {
    die(kFileError, "io", e.what());
  }

  std::unique_ptr<censfit::Family> fam;
  try {
    fam = censfit::Family::create(family_name, data.p);
  } catch (const std::exception& e) {
    die(kUsage, "usage", e.what());
  }
  if (!init_text.empty()) {
    const Eigen::VectorXd init = parse_vector(init_text, "--init");
    if (init.size() != fam->param_dim())
      die(kUsage, "usage",
          "--init needs " + std::to_string(fam->param_dim()) + " values for " + family_name);
    config.init = init;
  }

  censfit::FitResult fr;
  censfit::InferenceReport inf;
  try {
    fr = censfit::fit(*fam, data, config);
    inf = censfit::make_inference_report(*fam, fr.theta_hat, data, level);
  } catch (const censfit::IdentifiabilityError& e) {
    die(kIdentifiabilityError, "identifiability", e.what());
  } catch (const censfit::InitializationError& e) {
    die(kInitializationError, "initialization", e.what());
  } catch (const std::exception& e) {
    die(kInternal, "internal", e.what());
  }

  censfit::ReportDoc doc;
  doc.add("command", "fit");
  doc.add("family", fam->name());
  doc.add("n", static_cast<long long>(data.size()));
  doc.add("p", static_cast<long long>(data.p));
  doc.add("q", static_cast<long long>(fam->param_dim()));
  doc.add("converged", static_cast<long long>(fr.converged ? 1 : 0));
  doc.add("iterations", static_cast<long long>(fr.iterations));
  doc.add("loglik", fr.loglik);
  doc.add("gradient-norm", fr.gradient_norm);
  doc.add("theta-hat", fr.theta_hat);
  doc.add("sigma-hat", inf.sigma_hat);
  doc.add("sigma-spd", static_cast<long long>(inf.spd_failure ? 0 : 1));
  doc.add("sigma-condition", inf.condition);
  if (!inf.spd_failure) {
    doc.add("cov-theta", inf.cov_theta);
    doc.add("std-errors", inf.std_errors);
    doc.add("ci-level", inf.level);
    doc.add("ci-lower", inf.ci_lower);
    doc.add("ci-upper", inf.ci_upper);
  }
  std::cout << doc.str();
  if (inf.ill_conditioned)
    std::cerr << "censfit: warning: information matrix condition number "
              << censfit::ReportDoc::format(inf.condition) << " exceeds 1e10\n";

  if (!fr.converged)
    die(kNonConvergence, "non-convergence",
        "fit did not converge in " + std::to_string(fr.iterations) + " iterations (gradient norm " +
            censfit::ReportDoc::format(fr.gradient_norm) + ")");
  return kOk;
}

// ---------------------------------------------------------------------------

void print_study_table(std::ostream& os, const censfit::Scenario& base,
                       const std::vector<censfit::Scenario>& scenarios,
                       const std::vector<censfit::ReplicationReport>& reports) {
  os << "family " << base.family << "   beta0 (";
  for (int i = 0; i < base.beta0.size(); ++i) os << (i ? ", " : "") << base.beta0[i];
  os << ")   sigma0 " << base.sigma0 << "   mu_c " << base.mu_c << "   censoring_sd "
     << base.censoring_sd << "\n";
  os << "replications " << base.replications << "   seed " << base.seed << "\n\n";

  const int q = static_cast<int>(base.beta0.size()) + 1;
  std::vector<std::string> names;
  for (int i = 0; i + 1 < q; ++i) names.push_back("beta" + std::to_string(i + 1));
  names.push_back("sigma");

  char line[160];
  std::snprintf(line, sizeof line, "%-7s %6s %6s %12s %12s %12s %12s\n", "param", "true", "n",
                "Mean Est.", "Bias", "Std. Dev.", "MSE");
  os << line;
  for (int k = 0; k < q; ++k) {
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
      const auto& par = reports[s].parameters[k];
      std::snprintf(line, sizeof line, "%-7s %6g %6d %12.5f %12.5f %12.5f %12.5f\n",
                    names[k].c_str(), par.true_value, scenarios[s].n, par.mean_estimate,
                    par.bias, par.std_dev, par.mse);
      os << line;
    }
  }
  os << "\n";
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    std::snprintf(line, sizeof line,
                  "n %-6d mean censoring rate %6.2f%%   non-converged fits %d\n",
                  scenarios[s].n, 100.0 * reports[s].mean_censoring_rate,
                  reports[s].failures);
    os << line;
  }
}

std::string study_machine_doc(const censfit::Scenario& base,
                              const std::vector<censfit::Scenario>& scenarios,
                              const std::vector<censfit::ReplicationReport>& reports) {
  censfit::ReportDoc doc;
  doc.add("command", "simulate");
  doc.add("family", base.family);
  doc.add("beta0", base.beta0);
  doc.add("sigma0", base.sigma0);
  doc.add("mu-c", base.mu_c);
  doc.add("censoring-sd", base.censoring_sd);
  doc.add("replications", static_cast<long long>(base.replications));
  doc.add("seed", static_cast<long long>(base.seed));
  Eigen::VectorXd sizes(scenarios.size());
  for (std::size_t s = 0; s < scenarios.size(); ++s) sizes[s] = scenarios[s].n;
  doc.add("sizes", sizes);
  const int q = static_cast<int>(base.beta0.size()) + 1;
  Eigen::VectorXd truth(q);
  for (int k = 0; k < q; ++k) truth[k] = reports.front().parameters[k].true_value;
  doc.add("true-theta", truth);
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const std::string suffix = ":" + std::to_string(scenarios[s].n);
    Eigen::VectorXd mean(q), bias(q), sd(q), mse(q);
    for (int k = 0; k < q; ++k) {
      mean[k] = reports[s].parameters[k].mean_estimate;
      bias[k] = reports[s].parameters[k].bias;
      sd[k] = reports[s].parameters[k].std_dev;
      mse[k] = reports[s].parameters[k].mse;
    }
    doc.add("mean-estimate" + suffix, mean);
    doc.add("bias" + suffix, bias);
    doc.add("std-dev" + suffix, sd);
    doc.add("mse" + suffix, mse);
    doc.add("mean-censoring-rate" + suffix, reports[s].mean_censoring_rate);
    doc.add("failures" + suffix, static_cast<long long>(reports[s].failures));
  }
  return doc.str();
}

int cmd_simulate(const std::string& scenario_path, int threads, bool machine,
                 const std::string& out_path) {
  std::vector<censfit::Scenario> scenarios;
  try {
    scenarios = censfit::parse_scenario_file(scenario_path);
  } catch (const std::invalid_argument& e) {
    die(kSchemaError, "scenario", e.what());
  } catch (const std::exception& e) {
    const std::string what = e.what();
    die(what.find("cannot open") != std::string::npos ? kFileError : kSchemaError, "scenario",
        what);
  }

  std::vector<censfit::ReplicationReport> reports;
  reports.reserve(scenarios.size());
  for (const auto& sc : scenarios) reports.push_back(censfit::run_study(sc, threads));

  const std::string doc = study_machine_doc(scenarios.front(), scenarios, reports);
  if (machine)
    std::cout << doc;
  else
    print_study_table(std::cout, scenarios.front(), scenarios, reports);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) die(kFileError, "io", "cannot open '" + out_path + "' for writing");
    out << doc;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

int cmd_kl(const std::string& family_name, const std::string& theta1_text,
           const std::string& theta2_text, const std::string& censoring_text,
           const std::string& covariate_text, censfit::QuadConfig quad) {
  const censfit::CensoringLaw censoring = parse_censoring(censoring_text);
  const censfit::CovariateLaw covariates = parse_covariate_law(covariate_text);

  std::unique_ptr<censfit::Family> fam;
  try {
    fam = censfit::Family::create(family_name, covariates.p);
  } catch (const std::exception& e) {
    die(kUsage, "usage", e.what());
  }
  const Eigen::VectorXd theta1 = parse_vector(theta1_text, "--theta1");
  const Eigen::VectorXd theta2 = parse_vector(theta2_text, "--theta2");
  if (theta1.size() != fam->param_dim() || theta2.size() != fam->param_dim())
    die(kUsage, "usage",
        "--theta1/--theta2 need " + std::to_string(fam->param_dim()) + " values");

  try {
    const censfit::KlEvaluation kl =
        censfit::kl_extended_detail(*fam, theta1, theta2, censoring, covariates, quad);
    const censfit::KlEvaluation l11 =
        censfit::expected_loglik_detail(*fam, theta1, theta1, censoring, covariates, quad);
    const censfit::KlEvaluation l12 =
        censfit::expected_loglik_detail(*fam, theta1, theta2, censoring, covariates, quad);
    if ((!kl.converged && std::isfinite(kl.value)) || !l11.converged || !l12.converged)
      die(kQuadratureError, "quadrature",
          "integration did not reach the requested tolerance (error estimate " +
              censfit::ReportDoc::format(kl.error_estimate) + ")");

    censfit::ReportDoc doc;
    doc.add("command", "kl");
    doc.add("family", fam->name());
    doc.add("theta1", theta1);
    doc.add("theta2", theta2);
    doc.add("kl", kl.value);
    doc.add("kl-error-estimate", kl.error_estimate);
    doc.add("expected-loglik-theta1", l11.value);
    doc.add("expected-loglik-theta1-error", l11.error_estimate);
    doc.add("expected-loglik-theta2", l12.value);
    doc.add("expected-loglik-theta2-error", l12.error_estimate);
    std::cout << doc.str();
  } catch (const censfit::QuadratureError& e) {
    die(kQuadratureError, "quadrature", e.what());
  } catch (const std::exception& e) {
    die(kInternal, "internal", e.what());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum likelihood for right-censored distributional regression"};
  app.require_subcommand(1);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a family to a CSV dataset");
  std::string family = "normal-linear", data_path, time_col = "z", status_col = "delta";
  std::vector<std::string> covariate_cols;
  std::string init_text;
  double level = 0.95;
  censfit::FitConfig config;
  fit_cmd->add_option("--family", family, "normal-linear or weibull-aft");
  fit_cmd->add_option("--data", data_path, "CSV file with a header row")->required();
  fit_cmd->add_option("--covariates", covariate_cols, "covariate column names")
      ->required()
      ->delimiter(',');
  fit_cmd->add_option("--time", time_col, "observed-time column (default z)");
  fit_cmd->add_option("--status", status_col, "censoring indicator column (default delta)");
  fit_cmd->add_option("--level", level, "confidence level (default 0.95)");
  fit_cmd->add_option("--init", init_text, "comma-separated initial parameter values");
  fit_cmd->add_option("--max-iterations", config.max_iterations);
  fit_cmd->add_option("--grad-tolerance", config.grad_tolerance);
  fit_cmd->add_option("--step-tolerance", config.step_tolerance);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run a Monte Carlo accuracy study");
  std::string scenario_path, out_path;
  int threads = default_threads();
  bool machine = false;
  sim_cmd->add_option("--scenario", scenario_path, "scenario file")->required();
  sim_cmd->add_option("--threads", threads, "worker threads (default CENSFIT_THREADS or all cores)");
  sim_cmd->add_flag("--machine", machine, "print the machine-readable document instead of the table");
  sim_cmd->add_option("--out", out_path, "also write the machine-readable document to this file");

  // kl
  auto* kl_cmd = app.add_subcommand("kl", "extended Kullback-Leibler diagnostics");
  std::string kl_family = "normal-linear", theta1_text, theta2_text;
  std::string censoring_text = "none", covariate_text;
  censfit::QuadConfig quad;
  kl_cmd->add_option("--family", kl_family, "normal-linear or weibull-aft");
  kl_cmd->add_option("--theta1", theta1_text, "reference parameter (comma-separated)")->required();
  kl_cmd->add_option("--theta2", theta2_text, "compared parameter (comma-separated)")->required();
  kl_cmd->add_option("--censoring", censoring_text, "'none' or 'normal:MU,SD'");
  kl_cmd->add_option("--covariate-law", covariate_text, "'uniform:A,B' or 'point:X1,...'")
      ->required();
  kl_cmd->add_option("--tolerance", quad.abs_tolerance, "absolute quadrature tolerance");
  kl_cmd->add_option("--tail-cut", quad.tail_cut, "tail truncation in standard deviations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "censfit: error: usage: " << e.what() << "\n";
    return kUsage;
  }

  if (fit_cmd->parsed())
    return cmd_fit(family, data_path, covariate_cols, time_col, status_col, level, init_text,
                   config);
  if (sim_cmd->parsed()) return cmd_simulate(scenario_path, threads, machine, out_path);
  if (kl_cmd->parsed())
    return cmd_kl(kl_family, theta1_text, theta2_text, censoring_text, covariate_text, quad);
  return kUsage;
}

#include "censfit/simulation.hpp"

#include "censfit/rng.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace censfit {

void Scenario::validate() const {
  if (family != "normal-linear")
    throw std::invalid_argument("scenario: family must be normal-linear (got '" + family + "')");
  if (beta0.size() != 2)
    throw std::invalid_argument("scenario: beta0 must have two components (intercept, slope)");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("scenario: sigma0 must be positive");
  if (!(censoring_sd > 0.0))
    throw std::invalid_argument("scenario: censoring_sd must be positive");
  const int q = static_cast<int>(beta0.size()) + 1;
  if (n < q + 1) throw std::invalid_argument("scenario: n must be at least q+1");
  if (replications < 1) throw std::invalid_argument("scenario: replications must be >= 1");
}

ParamVector Scenario::theta0() const {
  ParamVector theta(beta0.size() + 1);
  theta.head(beta0.size()) = beta0;
  theta[beta0.size()] = sigma0;
  return theta;
}

Dataset generate(const Scenario& scenario, int replication_index) {
  scenario.validate();
  if (replication_index < 0) throw std::invalid_argument("replication index must be >= 0");
  const std::uint64_t stream =
      (static_cast<std::uint64_t>(scenario.n) << 32) |
      static_cast<std::uint64_t>(static_cast<std::uint32_t>(replication_index));
  RngStream rng(scenario.seed, stream);

  Dataset data;
  data.p = 2;
  data.observations.reserve(scenario.n);
  for (int i = 0; i < scenario.n; ++i) {
    Eigen::VectorXd x(2);
    x[0] = 1.0;
    x[1] = rng.uniform(-5.0, 5.0);
    const double y = rng.normal(scenario.beta0.dot(x), scenario.sigma0);
    const double c = rng.normal(scenario.mu_c, scenario.censoring_sd);
    Observation obs;
    obs.x = std::move(x);
    obs.z = std::min(y, c);
    obs.delta = y <= c ? 1 : 0;  // ties count as uncensored
    data.observations.push_back(std::move(obs));
  }
  return data;
}

ReplicationReport run_study(const Scenario& scenario, int threads) {
  scenario.validate();
  const int reps = scenario.replications;
  const int q = static_cast<int>(scenario.beta0.size()) + 1;

  struct RepOutcome {
    ParamVector theta;
    double censoring_rate = 0.0;
    bool converged = false;
  };
  std::vector<RepOutcome> outcomes(reps);

  auto run_one = [&](int r) {
    const Dataset data = generate(scenario, r);
    outcomes[r].censoring_rate = data.censoring_rate();
    NormalLinearFamily fam(2);
    try {
      const FitResult fr = fit(fam, data, FitConfig{});
      outcomes[r].converged = fr.converged;
      outcomes[r].theta = fr.theta_hat;
    } catch (const std::exception&) {
      outcomes[r].converged = false;  // counted, never aborts the study
    }
  };

  threads = std::max(1, threads);
  if (threads == 1 || reps == 1) {
    for (int r = 0; r < reps; ++r) run_one(r);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int workers = std::min(threads, reps);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) run_one(r);
      });
    for (auto& t : pool) t.join();
  }

  // ordered reduction over replication index
  ReplicationReport report;
  report.replications = reps;
  const ParamVector truth = scenario.theta0();
  report.parameters.assign(q, ParameterSummary{});
  for (int r = 0; r < q; ++r) report.parameters[r].true_value = truth[r];

  KahanSum cens;
  for (const auto& o : outcomes) cens.add(o.censoring_rate);
  report.mean_censoring_rate = cens.value() / reps;

  int converged = 0;
  for (const auto& o : outcomes) converged += o.converged;
  report.failures = reps - converged;
  if (converged == 0) return report;

  for (int k = 0; k < q; ++k) {
    KahanSum sum, sq_err;
    for (const auto& o : outcomes) {
      if (!o.converged) continue;
      sum.add(o.theta[k]);
      const double d = o.theta[k] - truth[k];
      sq_err.add(d * d);
    }
    auto& par = report.parameters[k];
    par.mean_estimate = sum.value() / converged;
    par.bias = par.mean_estimate - truth[k];
    par.mse = sq_err.value() / converged;
    if (converged > 1) {
      KahanSum sq_dev;
      for (const auto& o : outcomes) {
        if (!o.converged) continue;
        const double d = o.theta[k] - par.mean_estimate;
        sq_dev.add(d * d);
      }
      par.std_dev = std::sqrt(sq_dev.value() / (converged - 1));
    } else {
      par.std_dev = 0.0;  // single-replication convention
    }
  }
  return report;
}

std::vector<Scenario> parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");

  Scenario base;
  std::vector<int> sizes;
  bool saw_beta0 = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;

    auto fail = [&](const std::string& what) {
      throw std::runtime_error("scenario file " + path + ":" + std::to_string(lineno) +
                               ": " + what);
    };
    auto read_double = [&](double& out) {
      if (!(ss >> out)) fail("key '" + key + "' needs a numeric value");
    };

    if (key == "family") {
      if (!(ss >> base.family)) fail("key 'family' needs a value");
    } else if (key == "beta0") {
      std::vector<double> vals;
      double v;
      while (ss >> v) vals.push_back(v);
      if (vals.empty()) fail("key 'beta0' needs numeric values");
      base.beta0 = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
      saw_beta0 = true;
    } else if (key == "sigma0") {
      read_double(base.sigma0);
    } else if (key == "mu_c") {
      read_double(base.mu_c);
    } else if (key == "censoring_sd") {
      read_double(base.censoring_sd);
    } else if (key == "n") {
      sizes.clear();
      int v;
      while (ss >> v) sizes.push_back(v);
      if (sizes.empty()) fail("key 'n' needs integer values");
    } else if (key == "replications") {
      if (!(ss >> base.replications)) fail("key 'replications' needs an integer value");
    } else if (key == "seed") {
      if (!(ss >> base.seed)) fail("key 'seed' needs an unsigned integer value");
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!saw_beta0) throw std::runtime_error("scenario file " + path + ": missing key 'beta0'");
  if (sizes.empty()) throw std::runtime_error("scenario file " + path + ": missing key 'n'");

  std::vector<Scenario> out;
  for (int n : sizes) {
    Scenario s = base;
    s.n = n;
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace censfit

// Command-line front end: simulate paths, fit by maximum likelihood, run
// replicate studies, print transition rows, evaluate forecasts, and benchmark
// the closed-form transition against the generating-function inversion.
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid flags or inputs,
// 3 numerical non-convergence.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nbmc/csv.hpp"
#include "nbmc/forecast.hpp"
#include "nbmc/inference.hpp"
#include "nbmc/inversion.hpp"
#include "nbmc/process.hpp"
#include "nbmc/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nbmc::ModelParams checked_params(double r, double q, double c) {
  if (!(r > 0.0)) throw ValidationError("r must be > 0");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("q must lie in (0,1)");
  if (!(c > 0.0)) throw ValidationError("c must be > 0");
  return nbmc::ModelParams(r, q, c);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::cout << "seed = " << drawn << "\n";
  return drawn;
}

nbmc::SampleSchedule make_schedule(const std::string& kind, std::optional<double> dt,
                                   std::optional<double> rate, long n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (kind == "equal") {
    if (!dt) throw ValidationError("schedule 'equal' requires --dt");
    if (rate) throw ValidationError("--rate does not apply to schedule 'equal'");
    if (!(*dt > 0.0)) throw ValidationError("dt must be > 0");
    return nbmc::EqualSpacing{*dt, n};
  }
  if (kind == "exponential") {
    if (!rate) throw ValidationError("schedule 'exponential' requires --rate");
    if (dt) throw ValidationError("--dt does not apply to schedule 'exponential'");
    if (!(*rate > 0.0)) throw ValidationError("rate must be > 0");
    return nbmc::ExponentialArrivals{*rate, n};
  }
  throw ValidationError("schedule must be 'equal' or 'exponential'");
}

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + " must be a comma list of positive integers");
    }
  }
  if (out.empty()) throw ValidationError(std::string(what) + " is empty");
  return out;
}

void print_fit(const nbmc::FitResult& fit) {
  std::cout << "r_hat = " << nbmc::format_double(fit.params_hat.r) << "\n"
            << "q_hat = " << nbmc::format_double(fit.params_hat.q) << "\n"
            << "c_hat = " << nbmc::format_double(fit.params_hat.c) << "\n"
            << "loglik = " << nbmc::format_double(fit.loglik) << "\n"
            << "converged = " << (fit.converged ? "true" : "false") << "\n";
  if (fit.degenerate_data) {
    std::cerr << "warning: constant counts, fit is best-effort\n";
  }
}

int run_simulate(double r, double q, double c, long n, const std::string& schedule,
                 std::optional<double> dt, std::optional<double> rate,
                 std::optional<std::uint64_t> seed, const std::string& out) {
  const nbmc::ModelParams params = checked_params(r, q, c);
  const nbmc::SampleSchedule sched = make_schedule(schedule, dt, rate, n);
  // Replicate 0 of the seed, so `study --reps 1` reproduces `simulate`.
  nbmc::RandomStream rng = nbmc::RandomStream::substream(resolve_seed(seed), 0);
  const nbmc::TimeSeries series = nbmc::simulate_path(rng, params, sched);
  nbmc::write_series_csv(out, series);
  std::cout << "wrote " << series.size() << " observations to " << out << "\n";
  return kExitOk;
}

int run_fit(const std::string& input, bool no_initial, int starts,
            const std::string& out) {
  const nbmc::TimeSeries series = nbmc::read_series_csv(input);
  if (series.size() < 2) throw ValidationError("need at least 2 observations");
  nbmc::FitOptions options;
  options.include_initial = !no_initial;
  if (starts < 1) throw ValidationError("--starts must be >= 1");
  options.n_starts = starts;
  nbmc::FitResult fit = [&] {
    try {
      return nbmc::fit_mle(series, options);
    } catch (const std::invalid_argument& err) {
      throw ValidationError(err.what());
    }
  }();
  print_fit(fit);
  if (!out.empty()) {
    nbmc::write_fit_file(out, fit);
  }
  return fit.converged ? kExitOk : kExitNonConvergence;
}

int run_study(double r, double q, double c, int reps, long n, const std::string& sizes,
              const std::string& schedule, std::optional<double> dt,
              std::optional<double> rate, std::optional<std::uint64_t> seed,
              const std::string& out) {
  const nbmc::ModelParams params = checked_params(r, q, c);
  const nbmc::SampleSchedule sched = make_schedule(schedule, dt, rate, n);
  if (reps < 1) throw ValidationError("--reps must be >= 1");
  std::vector<Eigen::Index> subsizes;
  for (int s : parse_int_list(sizes, "--sizes")) {
    if (s > n) throw ValidationError("--sizes entries must not exceed --n");
    subsizes.push_back(s);
  }
  const std::uint64_t master = resolve_seed(seed);
  const nbmc::StudySummary summary =
      nbmc::run_simulation_study(master, params, sched, reps, subsizes);
  for (const nbmc::StudyRow& row : summary.rows) {
    std::cout << "size " << row.size << ": mean(r,q,c) = (" << row.mean_r << ", "
              << row.mean_q << ", " << row.mean_c << "), sd = (" << row.sd_r << ", "
              << row.sd_q << ", " << row.sd_c << ")";
    if (row.n_failed > 0) std::cout << ", excluded " << row.n_failed;
    std::cout << "\n";
  }
  if (!out.empty()) {
    nbmc::write_study_csv(out, summary);
  }
  return kExitOk;
}

int run_transition(double r, double q, double c, double t, long x0, double eps,
                   const std::string& out) {
  const nbmc::ModelParams params = checked_params(r, q, c);
  if (!(t >= 0.0)) throw ValidationError("t must be >= 0");
  if (x0 < 0) throw ValidationError("x0 must be >= 0");
  if (!(eps > 0.0 && eps <= 1e-4)) throw ValidationError("eps must lie in (0, 1e-4]");
  const nbmc::TransitionRow row = nbmc::transition_row(params, t, x0, eps);
  if (!out.empty()) {
    nbmc::write_transition_csv(out, row);
  } else {
    std::cout << "x1,prob\n";
    for (Eigen::Index j = 0; j < row.probs.size(); ++j) {
      std::cout << j << ',' << nbmc::format_double(row.probs[j]) << "\n";
    }
    std::cout << "# truncation_mass = " << nbmc::format_double(row.truncation_mass)
              << "\n";
  }
  return kExitOk;
}

int run_forecast(const std::string& input, long train, const std::string& horizons,
                 bool refit, const std::string& fit_file, const std::string& out) {
  const nbmc::TimeSeries series = nbmc::read_series_csv(input);
  const std::vector<int> hs = parse_int_list(horizons, "--horizons");
  int max_h = 0;
  for (int h : hs) max_h = std::max(max_h, h);
  if (train < 2) throw ValidationError("--train must be >= 2");
  if (train + max_h > series.size()) {
    throw ValidationError("--train plus the largest horizon exceeds the series length");
  }
  nbmc::ForecastEval eval = [&] {
    if (!fit_file.empty()) {
      if (refit) {
        throw ValidationError("--fit-file requires --no-refit (parameters are pinned)");
      }
      const nbmc::FitFile fit = nbmc::read_fit_file(fit_file);
      return nbmc::evaluate_rolling_fixed(series, train, hs,
                                          checked_params(fit.r_hat, fit.q_hat, fit.c_hat));
    }
    return nbmc::evaluate_rolling(series, train, hs, refit);
  }();
  std::cout << "horizon,mse,pl\n";
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::cout << hs[i] << ',' << nbmc::format_double(eval.mse_per_h[i]) << ','
              << nbmc::format_double(eval.pl_per_h[i]) << "\n";
  }
  if (eval.n_refit_failures > 0) {
    std::cerr << "warning: " << eval.n_refit_failures
              << " refits did not converge; previous fits reused\n";
  }
  if (!out.empty()) {
    nbmc::write_forecast_csv(out, eval);
  }
  return kExitOk;
}

int run_bench(const std::string& preset, int reps, const std::string& out) {
  if (reps < 1) throw ValidationError("--reps must be >= 1");
  std::vector<nbmc::BenchCell> grid;
  if (preset == "small") {
    grid = {
        {nbmc::ModelParams(2.0, 0.5, 0.5), 1.0, 240},
        {nbmc::ModelParams(5.0, 0.7, 0.5), 1.0, 240},
    };
  } else if (preset == "paper-like") {
    grid = {
        {nbmc::ModelParams(2.0, 0.3, 0.5), 1.0, 240},
        {nbmc::ModelParams(2.0, 0.5, 0.5), 1.0, 240},
        {nbmc::ModelParams(2.0, 0.7, 1.0), 1.0, 240},
        {nbmc::ModelParams(5.0, 0.5, 0.5), 1.0, 240},
        {nbmc::ModelParams(5.0, 0.7, 1.0), 1.0, 240},
        {nbmc::ModelParams(6.0, 0.6, 0.7), 1.0, 240},
    };
  } else {
    throw ValidationError("--grid-preset must be 'small' or 'paper-like'");
  }
  const nbmc::BenchReport report = nbmc::bench_compare(grid, reps);
  std::cout << "cell,exact_seconds,inversion_seconds,ratio,max_abs_diff\n";
  for (const nbmc::BenchCellResult& res : report.cells) {
    std::cout << "r=" << res.cell.params.r << ";q=" << res.cell.params.q
              << ";c=" << res.cell.params.c << ";dt=" << res.cell.dt
              << ";n=" << res.cell.n_obs << ',' << res.exact_seconds << ','
              << res.inversion_seconds << ',' << res.ratio << ',' << res.max_abs_diff
              << "\n";
  }
  if (!out.empty()) {
    nbmc::write_bench_csv(out, report);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary negative-binomial Markov process toolkit"};
  app.require_subcommand(1);

  double r = 0, q = 0, c = 0, t = 0, eps = 1e-10;
  long n = 0, x0 = 0, train = 0;
  int reps = 5, starts = 5;
  std::optional<double> dt, rate;
  std::optional<std::uint64_t> seed;
  std::string schedule = "equal", input, out, sizes, horizons = "1,2,3,4";
  std::string fit_file, preset = "small";
  bool no_initial = false;
  bool refit = true;

  auto* sim = app.add_subcommand("simulate", "Simulate a path to a CSV file");
  sim->add_option("--r", r)->required();
  sim->add_option("--q", q)->required();
  sim->add_option("--c", c)->required();
  sim->add_option("--n", n)->required();
  sim->add_option("--schedule", schedule);
  sim->add_option("--dt", dt);
  sim->add_option("--rate", rate);
  sim->add_option("--seed", seed);
  sim->add_option("--out", out)->required();

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of a series");
  fit->add_option("--input", input)->required();
  fit->add_flag("--no-initial", no_initial, "drop the stationary term of the first observation");
  fit->add_option("--starts", starts);
  fit->add_option("--out", out);

  auto* study = app.add_subcommand("study", "Replicate estimation study");
  study->add_option("--r", r)->required();
  study->add_option("--q", q)->required();
  study->add_option("--c", c)->required();
  study->add_option("--reps", reps)->required();
  study->add_option("--n", n)->required();
  study->add_option("--sizes", sizes)->required();
  study->add_option("--schedule", schedule);
  study->add_option("--dt", dt);
  study->add_option("--rate", rate);
  study->add_option("--seed", seed);
  study->add_option("--out", out);

  auto* trans = app.add_subcommand("transition", "Print one transition row");
  trans->add_option("--r", r)->required();
  trans->add_option("--q", q)->required();
  trans->add_option("--c", c)->required();
  trans->add_option("--t", t)->required();
  trans->add_option("--x0", x0)->required();
  trans->add_option("--eps", eps);
  trans->add_option("--out", out);

  auto* fc = app.add_subcommand("forecast", "Rolling out-of-sample evaluation");
  fc->add_option("--input", input)->required();
  fc->add_option("--train", train)->required();
  fc->add_option("--horizons", horizons);
  fc->add_flag("--refit,!--no-refit", refit, "refit on the expanding window (default)");
  fc->add_option("--fit-file", fit_file, "pinned parameters (requires --no-refit)");
  fc->add_option("--out", out);

  auto* bench = app.add_subcommand("bench", "Exact-vs-inversion timing comparison");
  bench->add_option("--grid-preset", preset);
  bench->add_option("--reps", reps);
  bench->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*sim) return run_simulate(r, q, c, n, schedule, dt, rate, seed, out);
    if (*fit) return run_fit(input, no_initial, starts, out);
    if (*study) return run_study(r, q, c, reps, n, sizes, schedule, dt, rate, seed, out);
    if (*trans) return run_transition(r, q, c, t, x0, eps, out);
    if (*fc) return run_forecast(input, train, horizons, refit, fit_file, out);
    if (*bench) return run_bench(preset, reps, out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nbmc::ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << "\n";
    return kExitIo;
  } catch (const nbmc::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

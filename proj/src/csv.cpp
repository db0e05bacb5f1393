#include "nbmc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace nbmc {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path + " for reading");
  }
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, long line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last) {
    throw ParseError("not a number: '" + s + "'", line);
  }
  return v;
}

long parse_count(const std::string& s, long line) {
  long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last) {
    throw ParseError("count must be an integer, got '" + s + "'", line);
  }
  if (v < 0) {
    throw ParseError("count must be non-negative, got '" + s + "'", line);
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

TimeSeries read_series_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(origin + ": empty file", 0);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time,count") {
    throw ParseError(origin + ": expected header 'time,count', got '" + line + "'", 1);
  }
  std::vector<double> times;
  std::vector<int> counts;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) {
      throw ParseError(origin + ": expected 2 fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    const double t = parse_double(fields[0], line_no);
    if (!times.empty() && !(t > times.back())) {
      throw ParseError(origin + ": times not strictly increasing", line_no);
    }
    times.push_back(t);
    counts.push_back(static_cast<int>(parse_count(fields[1], line_no)));
  }
  if (times.empty()) {
    throw ParseError(origin + ": no observations", line_no);
  }
  Eigen::ArrayXd t = Eigen::Map<const Eigen::ArrayXd>(times.data(), times.size());
  Eigen::ArrayXi x = Eigen::Map<const Eigen::ArrayXi>(counts.data(), counts.size());
  return TimeSeries(std::move(t), std::move(x));
}

TimeSeries read_series_csv(const std::string& path) {
  auto in = open_in(path);
  return read_series_csv(in, path);
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
  auto out = open_out(path);
  out << "time,count\n";
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    out << format_double(series.times[i]) << ',' << series.counts[i] << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

void write_fit_file(const std::string& path, const FitResult& fit) {
  auto out = open_out(path);
  out << "r_hat = " << format_double(fit.params_hat.r) << '\n'
      << "q_hat = " << format_double(fit.params_hat.q) << '\n'
      << "c_hat = " << format_double(fit.params_hat.c) << '\n'
      << "loglik = " << format_double(fit.loglik) << '\n'
      << "converged = " << (fit.converged ? "true" : "false") << '\n';
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

FitFile read_fit_file(const std::string& path) {
  auto in = open_in(path);
  FitFile file{};
  bool have_r = false, have_q = false, have_c = false, have_ll = false,
       have_conv = false;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) {
      throw ParseError(path + ": expected 'key = value'", line_no);
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "r_hat") {
      file.r_hat = parse_double(value, line_no);
      have_r = true;
    } else if (key == "q_hat") {
      file.q_hat = parse_double(value, line_no);
      have_q = true;
    } else if (key == "c_hat") {
      file.c_hat = parse_double(value, line_no);
      have_c = true;
    } else if (key == "loglik") {
      file.loglik = parse_double(value, line_no);
      have_ll = true;
    } else if (key == "converged") {
      if (value != "true" && value != "false") {
        throw ParseError(path + ": converged must be true or false", line_no);
      }
      file.converged = value == "true";
      have_conv = true;
    }  // unknown keys are ignored
  }
  if (!(have_r && have_q && have_c && have_ll && have_conv)) {
    throw ParseError(path + ": missing required keys", 0);
  }
  return file;
}

void write_study_csv(const std::string& path, const StudySummary& summary) {
  auto out = open_out(path);
  out << "size,mean_r,sd_r,mean_q,sd_q,mean_c,sd_c\n";
  for (const StudyRow& row : summary.rows) {
    out << row.size << ',' << format_double(row.mean_r) << ',' << format_double(row.sd_r)
        << ',' << format_double(row.mean_q) << ',' << format_double(row.sd_q) << ','
        << format_double(row.mean_c) << ',' << format_double(row.sd_c) << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

std::vector<StudyRow> read_study_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line).size() != 7) {
    throw ParseError(path + ": bad study header", 1);
  }
  std::vector<StudyRow> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) {
      throw ParseError(path + ": expected 7 fields", line_no);
    }
    StudyRow row;
    row.size = static_cast<Eigen::Index>(parse_count(f[0], line_no));
    row.mean_r = parse_double(f[1], line_no);
    row.sd_r = parse_double(f[2], line_no);
    row.mean_q = parse_double(f[3], line_no);
    row.sd_q = parse_double(f[4], line_no);
    row.mean_c = parse_double(f[5], line_no);
    row.sd_c = parse_double(f[6], line_no);
    rows.push_back(row);
  }
  return rows;
}

void write_forecast_csv(const std::string& path, const ForecastEval& eval) {
  auto out = open_out(path);
  out << "horizon,mse,pl\n";
  for (std::size_t i = 0; i < eval.horizons.size(); ++i) {
    out << eval.horizons[i] << ',' << format_double(eval.mse_per_h[i]) << ','
        << format_double(eval.pl_per_h[i]) << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

ForecastEval read_forecast_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line).size() != 3) {
    throw ParseError(path + ": bad forecast header", 1);
  }
  std::vector<int> horizons;
  std::vector<double> mse, pl;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3) {
      throw ParseError(path + ": expected 3 fields", line_no);
    }
    horizons.push_back(static_cast<int>(parse_count(f[0], line_no)));
    mse.push_back(parse_double(f[1], line_no));
    pl.push_back(parse_double(f[2], line_no));
  }
  ForecastEval eval;
  eval.horizons = horizons;
  eval.mse_per_h = Eigen::Map<const Eigen::ArrayXd>(mse.data(), mse.size());
  eval.pl_per_h = Eigen::Map<const Eigen::ArrayXd>(pl.data(), pl.size());
  eval.n_origins_per_h = Eigen::ArrayXi::Zero(static_cast<Eigen::Index>(horizons.size()));
  return eval;
}

void write_transition_csv(const std::string& path, const TransitionRow& row) {
  auto out = open_out(path);
  out << "x1,prob\n";
  for (Eigen::Index j = 0; j < row.probs.size(); ++j) {
    out << j << ',' << format_double(row.probs[j]) << '\n';
  }
  out << "# truncation_mass = " << format_double(row.truncation_mass) << '\n';
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

TransitionRow read_transition_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line).size() != 2) {
    throw ParseError(path + ": bad transition header", 1);
  }
  std::vector<double> probs;
  TransitionRow row;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("# truncation_mass = ", 0) == 0) {
      row.truncation_mass = parse_double(line.substr(20), line_no);
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 2) {
      throw ParseError(path + ": expected 2 fields", line_no);
    }
    const long j = parse_count(f[0], line_no);
    if (j != static_cast<long>(probs.size())) {
      throw ParseError(path + ": x1 indices must run 0,1,2,...", line_no);
    }
    probs.push_back(parse_double(f[1], line_no));
  }
  row.probs = Eigen::Map<const Eigen::ArrayXd>(probs.data(), probs.size());
  return row;
}

void write_bench_csv(const std::string& path, const BenchReport& report) {
  auto out = open_out(path);
  out << "cell,exact_seconds,inversion_seconds,ratio,max_abs_diff\n";
  for (const BenchCellResult& res : report.cells) {
    out << "r=" << format_double(res.cell.params.r) << ";q="
        << format_double(res.cell.params.q) << ";c=" << format_double(res.cell.params.c)
        << ";dt=" << format_double(res.cell.dt) << ";n=" << res.cell.n_obs << ','
        << format_double(res.exact_seconds) << ',' << format_double(res.inversion_seconds)
        << ',' << format_double(res.ratio) << ',' << format_double(res.max_abs_diff)
        << '\n';
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

BenchReport read_bench_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line).size() != 5) {
    throw ParseError(path + ": bad bench header", 1);
  }
  BenchReport report;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) {
      throw ParseError(path + ": expected 5 fields", line_no);
    }
    double r = 0, q = 0, c = 0, dt = 0;
    int n = 0;
    if (std::sscanf(f[0].c_str(), "r=%lf;q=%lf;c=%lf;dt=%lf;n=%d", &r, &q, &c, &dt,
                    &n) != 5) {
      throw ParseError(path + ": bad cell descriptor '" + f[0] + "'", line_no);
    }
    report.cells.push_back({BenchCell{ModelParams(r, q, c), dt, n},
                            parse_double(f[1], line_no), parse_double(f[2], line_no),
                            parse_double(f[3], line_no), parse_double(f[4], line_no)});
  }
  return report;
}

}  // namespace nbmc

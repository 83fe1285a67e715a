#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/problem.hpp"
#include "splitpar/steppers.hpp"

namespace splitpar {

/// Discrete l-infinity(l2) norm: max_n sqrt(sum_ij (e^n_ij)^2 h^2).
inline double error_norm(const std::vector<Vector>& errors, double h) {
  if (errors.empty()) throw InvalidInput("error_norm: empty error series");
  double r = 0.0;
  for (const auto& e : errors) r = std::max(r, discrete_l2(e, h));
  return r;
}

namespace detail {

inline void check_rate_input(const std::vector<std::pair<int, double>>& series) {
  if (series.size() < 2) throw InvalidInput("a convergence rate needs at least two grid levels");
  for (const auto& [M, e] : series) {
    if (!(e > 0.0)) throw InvalidInput("convergence rate needs positive errors; got " + std::to_string(e) +
                                       " at M = " + std::to_string(M));
    if (M <= 0) throw InvalidInput("grid levels must be positive");
  }
}

}  // namespace detail

/// Mean of the pairwise observed orders log(e_i / e_{i+1}) / log(M_{i+1} / M_i)
/// over consecutive levels; for M doubling this is the mean log2 ratio.
inline double mean_rate(const std::vector<std::pair<int, double>>& series) {
  detail::check_rate_input(series);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < series.size(); ++k)
    sum += std::log(series[k].second / series[k + 1].second) /
           std::log(static_cast<double>(series[k + 1].first) / series[k].first);
  return sum / static_cast<double>(series.size() - 1);
}

/// Slope of the least-squares line through (log M, -log e).
inline double least_squares_rate(const std::vector<std::pair<int, double>>& series) {
  detail::check_rate_input(series);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(series.size());
  for (const auto& [M, e] : series) {
    const double x = std::log(static_cast<double>(M)), y = -std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Parses "0.125", "1/8" or "3/16".
inline double parse_fraction(const std::string& s) {
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw InvalidInput("cannot parse '" + s + "' as a number or fraction");
    }
    if (used != t.size()) throw InvalidInput("cannot parse '" + s + "' as a number or fraction");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return number(s);
  const double den = number(s.substr(slash + 1));
  if (den == 0.0) throw InvalidInput("zero denominator in '" + s + "'");
  return number(s.substr(0, slash)) / den;
}

/// Short label for dyadic fractions (1/8, 3/16); decimal otherwise.
inline std::string format_fraction(double v) {
  for (int den = 1; den <= 1024; den *= 2) {
    const double num = v * den;
    if (num == std::round(num)) {
      std::ostringstream os;
      if (den == 1)
        os << static_cast<long>(num);
      else
        os << static_cast<long>(num) << '/' << den;
      return os.str();
    }
  }
  std::ostringstream os;
  os << v;
  return os.str();
}

enum class Experiment { table1, table2, table3, table4, custom };
enum class Axis { M, coefficient, xi, q };

struct ExperimentConfig {
  Experiment id = Experiment::custom;
  std::vector<Method> methods;
  std::vector<int> Ms;
  std::vector<Coefficient> coefficients;
  std::vector<double> xis{0.125};
  std::vector<int> qs{4};
  std::optional<double> theta;
  SolverSettings solver;
  Axis columns = Axis::M;
  std::string output;
};

inline ExperimentConfig preset(int table) {
  using enum Method;
  ExperimentConfig c;
  switch (table) {
    case 1:
      c.id = Experiment::table1;
      c.methods = {cn, dg_adi, dk_adi, dg_dd, dk_dd};
      c.Ms = {40, 80, 160, 320};
      c.coefficients = {Coefficient::a1};
      c.columns = Axis::M;
      break;
    case 2:
      c.id = Experiment::table2;
      c.methods = {cn, dg_adi, dk_adi, dg_dd, dk_dd};
      c.Ms = {160};
      c.coefficients = {Coefficient::a1, Coefficient::a2, Coefficient::a3, Coefficient::a4, Coefficient::a5};
      c.columns = Axis::coefficient;
      break;
    case 3:
      c.id = Experiment::table3;
      c.methods = {cn, dg_dd, dk_dd};
      c.Ms = {160};
      c.coefficients = {Coefficient::a2};
      c.xis = {1.0 / 8, 1.0 / 16, 1.0 / 32};
      c.columns = Axis::xi;
      break;
    case 4:
      c.id = Experiment::table4;
      c.methods = {cn, dg_dd, dk_dd};
      c.Ms = {160};
      c.coefficients = {Coefficient::a2};
      c.xis = {1.0 / 16};
      c.qs = {2, 4, 8};
      c.columns = Axis::q;
      break;
    default:
      throw InvalidInput("unknown table " + std::to_string(table) + " (expected 1..4)");
  }
  return c;
}

/// One table entry. `error` is empty when the run was not possible; `note`
/// then carries "n/a" (inapplicable splitting) or the failure message.
struct Cell {
  Method method = Method::cn;
  int M = 0;
  Coefficient coefficient = Coefficient::a1;
  std::optional<double> xi;  // dd methods only
  std::optional<int> q;      // dd methods only
  std::optional<double> error;
  std::optional<double> rate;  // per method, over M
  double seconds = 0.0;
  std::string note;
  std::optional<RunReport> report;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Cell> cells;

  const Cell* find(Method m, int M, Coefficient a, double xi, int q) const {
    for (const auto& c : cells) {
      if (c.method != m || c.M != M || c.coefficient != a) continue;
      if (c.xi && *c.xi != xi) continue;
      if (c.q && *c.q != q) continue;
      return &c;
    }
    return nullptr;
  }
};

inline Cell run_cell(Method m, int M, Coefficient a, double xi, int q, const ExperimentConfig& cfg) {
  Cell cell;
  cell.method = m;
  cell.M = M;
  cell.coefficient = a;
  if (uses_dd(m)) {
    cell.xi = xi;
    cell.q = q;
  }
  try {
    StepperConfig sc;
    sc.method = m;
    if (cfg.theta && m != Method::cn && m != Method::be && m != Method::dr && m != Method::douglas)
      sc.theta = cfg.theta;
    sc.q = q;
    sc.xi = xi;
    sc.solver = cfg.solver;
    RunReport r = run(make_problem(a), Grid(M), sc);
    cell.error = r.error;
    cell.seconds = r.seconds;
    cell.report = std::move(r);
  } catch (const UnsupportedSplitting&) {
    cell.note = "n/a";
  } catch (const std::exception& e) {
    cell.note = e.what();
  }
  return cell;
}

/// Runs every distinct (method, M, coefficient[, xi, q]) combination once;
/// splitting parameters are ignored for methods that do not use them.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* progress = nullptr) {
  if (cfg.methods.empty() || cfg.Ms.empty() || cfg.coefficients.empty())
    throw InvalidInput("experiment needs at least one method, grid size and coefficient");
  ExperimentResult result;
  result.config = cfg;
  for (Method m : cfg.methods) {
    for (Coefficient a : cfg.coefficients) {
      const auto xis = uses_dd(m) ? cfg.xis : std::vector<double>{cfg.xis.front()};
      const auto qs = uses_dd(m) ? cfg.qs : std::vector<int>{cfg.qs.front()};
      for (double xi : xis) {
        for (int q : qs) {
          std::vector<std::size_t> series;
          for (int M : cfg.Ms) {
            if (progress)
              *progress << "  running " << to_string(m) << " M=" << M << " " << to_string(a)
                        << (uses_dd(m) ? " xi=" + format_fraction(xi) + " q=" + std::to_string(q) : "") << std::endl;
            result.cells.push_back(run_cell(m, M, a, xi, q, cfg));
            series.push_back(result.cells.size() - 1);
          }
          std::vector<std::pair<int, double>> errs;
          for (auto idx : series)
            if (result.cells[idx].error && *result.cells[idx].error > 0.0)
              errs.emplace_back(result.cells[idx].M, *result.cells[idx].error);
          if (errs.size() >= 2 && errs.size() == series.size()) {
            const double rate = mean_rate(errs);
            for (auto idx : series) result.cells[idx].rate = rate;
          }
        }
      }
    }
  }
  return result;
}

// CSV: method,M,coeff,xi,q,error,rate,seconds

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<Cell>& cells) {
  os << "method,M,coeff,xi,q,error,rate,seconds\n";
  for (const auto& c : cells) {
    os << to_string(c.method) << ',' << c.M << ',' << to_string(c.coefficient) << ','
       << (c.xi ? format_double(*c.xi) : "") << ',' << (c.q ? std::to_string(*c.q) : "") << ',';
    if (c.error)
      os << format_double(*c.error);
    else
      os << (c.note == "n/a" ? "n/a" : "error");
    os << ',' << (c.rate ? format_double(*c.rate) : "") << ',' << format_double(c.seconds) << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<Cell>& cells) {
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  write_csv(f, cells);
}

/// Inverse of write_csv (failure messages come back as note "error").
inline std::vector<Cell> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "method,M,coeff,xi,q,error,rate,seconds")
    throw InvalidInput("unexpected CSV header");
  std::vector<Cell> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 8) throw InvalidInput("malformed CSV row: " + line);
    Cell c;
    c.method = parse_method(f[0]);
    c.M = std::stoi(f[1]);
    c.coefficient = parse_coefficient(f[2]);
    if (!f[3].empty()) c.xi = std::stod(f[3]);
    if (!f[4].empty()) c.q = std::stoi(f[4]);
    if (f[5] == "n/a" || f[5] == "error")
      c.note = f[5];
    else
      c.error = std::stod(f[5]);
    if (!f[6].empty()) c.rate = std::stod(f[6]);
    c.seconds = std::stod(f[7]);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string method_label(Method m) {
  switch (m) {
    case Method::cn: return "CN";
    case Method::be: return "BE";
    case Method::dr: return "DR";
    case Method::douglas: return "Douglas";
    case Method::dg_adi: return "DG_ADI";
    case Method::dk_adi: return "DK_ADI";
    case Method::dg_dd: return "DG_DD";
    case Method::dk_dd: return "DK_DD";
  }
  return "?";
}

inline std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Methods down, the config's column axis across; a Rate column when the
/// columns are grid sizes.
inline void print_table(std::ostream& os, const ExperimentResult& r, bool verbose = false) {
  const auto& cfg = r.config;
  std::vector<std::string> headers;
  std::vector<std::tuple<int, Coefficient, double, int>> keys;
  switch (cfg.columns) {
    case Axis::M:
      for (int M : cfg.Ms) {
        headers.push_back("M=" + std::to_string(M));
        keys.emplace_back(M, cfg.coefficients.front(), cfg.xis.front(), cfg.qs.front());
      }
      break;
    case Axis::coefficient:
      for (auto a : cfg.coefficients) {
        headers.push_back("a=" + to_string(a));
        keys.emplace_back(cfg.Ms.front(), a, cfg.xis.front(), cfg.qs.front());
      }
      break;
    case Axis::xi:
      for (double xi : cfg.xis) {
        headers.push_back("xi=" + format_fraction(xi));
        keys.emplace_back(cfg.Ms.front(), cfg.coefficients.front(), xi, cfg.qs.front());
      }
      break;
    case Axis::q:
      for (int q : cfg.qs) {
        headers.push_back("q=" + std::to_string(q));
        keys.emplace_back(cfg.Ms.front(), cfg.coefficients.front(), cfg.xis.front(), q);
      }
      break;
  }
  const bool with_rate = cfg.columns == Axis::M && cfg.Ms.size() >= 2;
  constexpr int w0 = 9, w = 11;
  os << std::left << std::setw(w0) << "Method";
  for (const auto& h : headers) os << std::right << std::setw(w) << h;
  if (with_rate) os << std::setw(8) << "Rate";
  if (with_rate && verbose) os << std::setw(10) << "LSQ";
  os << '\n';
  for (Method m : cfg.methods) {
    os << std::left << std::setw(w0) << method_label(m);
    std::vector<std::pair<int, double>> series;
    std::optional<double> rate;
    for (const auto& [M, a, xi, q] : keys) {
      const Cell* c = r.find(m, M, a, uses_dd(m) ? xi : cfg.xis.front(), uses_dd(m) ? q : cfg.qs.front());
      std::string text = "--";
      if (c && c->error) {
        text = scientific(*c->error);
        series.emplace_back(c->M, *c->error);
        if (c->rate) rate = c->rate;
      } else if (c) {
        text = c->note == "n/a" ? "n/a" : "failed";
      }
      os << std::right << std::setw(w) << text;
    }
    if (with_rate) {
      char buf[16];
      if (rate)
        std::snprintf(buf, sizeof buf, "%.3f", *rate);
      else
        std::snprintf(buf, sizeof buf, "--");
      os << std::setw(8) << buf;
      if (verbose) {
        if (series.size() >= 2)
          std::snprintf(buf, sizeof buf, "%.3f", least_squares_rate(series));
        else
          std::snprintf(buf, sizeof buf, "--");
        os << std::setw(10) << buf;
      }
    }
    os << '\n';
  }
  for (const auto& c : r.cells)
    if (!c.error && c.note != "n/a")
      os << "  " << method_label(c.method) << " M=" << c.M << " " << to_string(c.coefficient) << ": " << c.note
         << '\n';
}

/// Static log-log plot of error against M, one polyline per method.
inline void write_svg(const std::string& path, const ExperimentResult& r) {
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> all;
  for (Method m : r.config.methods) {
    Series s{method_label(m), {}};
    for (const auto& c : r.cells)
      if (c.method == m && c.error && *c.error > 0.0) s.pts.emplace_back(std::log10(c.M), std::log10(*c.error));
    std::sort(s.pts.begin(), s.pts.end());
    if (!s.pts.empty()) all.push_back(std::move(s));
  }
  if (all.empty()) throw InvalidInput("nothing to plot");
  double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
  for (const auto& s : all)
    for (auto [x, y] : s.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) y1 = y0 + 1;
  constexpr double W = 640, H = 480, pad = 60;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot open '" + path + "' for writing");
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">log10 M</text>\n";
  f << "<text x=\"15\" y=\"" << H / 2 << "\" transform=\"rotate(-90 15 " << H / 2
    << ")\" text-anchor=\"middle\">log10 error</text>\n";
  f << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t k = 0; k < all.size(); ++k) {
    const char* col = colors[k % 6];
    f << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
    for (auto [x, y] : all[k].pts) f << px(x) << ',' << py(y) << ' ';
    f << "\"/>\n";
    for (auto [x, y] : all[k].pts) f << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    f << "<text x=\"" << W - pad - 80 << "\" y=\"" << pad + 20 + 18 * k << "\" fill=\"" << col << "\">"
      << all[k].label << "</text>\n";
  }
  f << "</svg>\n";
}

}  // namespace splitpar

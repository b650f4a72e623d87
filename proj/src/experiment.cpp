#include "sdtg/experiment.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>

namespace sdtg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* const kHeader = "algorithm,elements,deltaS,deltaD,H,h,N,err_u_h1,err_p_l2,err_phi_h1,t_coarse_s,t_fine_s";
const char* const kRateColumns[] = {"err_u_h1", "err_p_l2", "err_phi_h1"};

double parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + std::string(text) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ddm") return Algorithm::Ddm;
  if (s == "tgddm1") return Algorithm::Tgddm1;
  if (s == "tgddm2") return Algorithm::Tgddm2;
  if (s == "ctg") return Algorithm::Ctg;
  throw ConfigError("unknown algorithm '" + s + "' (ddm, tgddm1, tgddm2, ctg)");
}

ElementPair parse_elements(const std::string& s) {
  if (s == "p2p1p2") return ElementPair::TaylorHood;
  if (s == "minip1") return ElementPair::Mini;
  throw ConfigError("unknown elements '" + s + "' (p2p1p2, minip1)");
}

FineRule parse_rule(const std::string& s) {
  if (s == "pow15") return FineRule::Pow15;
  if (s == "pow125") return FineRule::Pow125;
  if (s == "half") return FineRule::Half;
  if (s == "explicit") return FineRule::Explicit;
  throw ConfigError("unknown fine rule '" + s + "' (pow15, pow125, half, explicit)");
}

std::vector<double> parse_list(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& item : items) {
    std::string_view rest = item;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto piece = trim(rest.substr(0, comma));
      if (!piece.empty()) out.push_back(parse_fraction(piece));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  return out;
}

void dump_meshes(const std::filesystem::path& dir, std::size_t row, const char* level, const Discretization& d) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, mesh] : {std::pair{"stokes", d.meshes.stokes}, std::pair{"darcy", d.meshes.darcy}}) {
    const auto path = dir / ("row" + std::to_string(row) + "_" + level + "_" + name + ".mesh");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_mesh(*mesh, out);
  }
}

void dump_matrices(const std::filesystem::path& dir, std::size_t row, const Discretization& fine,
                   const ExperimentConfig& cfg, const ProblemData& data) {
  std::filesystem::create_directories(dir);
  const StokesOperator sop(stokes_data(fine, data), cfg.params, cfg.robin.delta_S);
  const DarcyOperator dop(darcy_data(fine, data), cfg.params, cfg.robin.delta_D, cfg.params.g);
  for (const auto& [name, m] : {std::pair{"stokes", &sop.system().matrix}, std::pair{"darcy", &dop.system().matrix}}) {
    const auto path = dir / ("row" + std::to_string(row) + "_" + name + ".coo");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    m->write_coordinates(out);
  }
}

struct RowResult {
  ConvergenceRow row;
  RowOutcome outcome;
};

RowResult run_row(const ExperimentConfig& cfg, std::size_t i) {
  RowResult r;
  r.row.H = cfg.coarse_sizes[i];
  r.row.h = cfg.fine_sizes[i];
  r.row.err_u_h1 = r.row.err_p_l2 = r.row.err_phi_h1 = kNaN;
  try {
    const ProblemData data = manufactured_forcing(cfg.params);
    const ExactSolution exact{cfg.params.k};
    DdmOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    opt.concurrent = cfg.concurrent;

    ErrorRecord err;
    if (cfg.algorithm == Algorithm::Ddm) {
      const Discretization disc = discretize(r.row.h, cfg.elements);
      if (!cfg.mesh_dump.empty()) dump_meshes(cfg.mesh_dump, i, "fine", disc);
      if (!cfg.matrix_dump.empty()) dump_matrices(cfg.matrix_dump, i, disc, cfg, data);
      const auto [state, report] = ddm_chen(disc, cfg.params, cfg.robin, data, opt);
      err = compute_errors(state, exact);
      r.row.N = report.N;
      r.row.t_fine = report.wall_time;
      r.outcome.converged = report.converged;
      r.outcome.divergence_residual = report.divergence_residual;
      r.outcome.message = report.message;
    } else {
      TwoGridResult res = [&] {
        switch (cfg.algorithm) {
          case Algorithm::Tgddm1:
            return tgddm1(r.row.H, r.row.h, cfg.elements, cfg.params, cfg.robin, data, opt);
          case Algorithm::Tgddm2:
            return tgddm2(r.row.H, r.row.h, cfg.elements, cfg.params, cfg.robin, data, opt);
          default:
            return ctg(r.row.H, r.row.h, cfg.elements, cfg.params, data, cfg.concurrent);
        }
      }();
      if (!cfg.mesh_dump.empty()) {
        dump_meshes(cfg.mesh_dump, i, "coarse", res.coarse_disc);
        dump_meshes(cfg.mesh_dump, i, "fine", res.fine_disc);
      }
      if (!cfg.matrix_dump.empty()) dump_matrices(cfg.matrix_dump, i, res.fine_disc, cfg, data);
      err = compute_errors(res, exact);
      r.row.N = res.coarse_report.N;
      r.row.t_coarse = res.coarse_report.wall_time;
      r.row.t_fine = res.fine_report.wall_time;
      r.outcome.converged = res.coarse_report.converged;
      r.outcome.divergence_residual =
          std::max(res.coarse_report.divergence_residual, res.fine_report.divergence_residual);
      r.outcome.message = res.coarse_report.message;
    }
    r.row.err_u_h1 = err.u_h1;
    r.row.err_p_l2 = err.p_l2;
    r.row.err_phi_h1 = err.phi_h1;
    if (!r.outcome.converged) {
      r.outcome.ok = false;
      if (r.outcome.message.empty()) r.outcome.message = "DDM iteration did not converge";
    }
  } catch (const std::exception& e) {
    r.outcome.ok = false;
    r.outcome.converged = false;
    r.outcome.message = e.what();
  }
  return r;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_csv_number(const std::string& s) {
  const auto t = trim(s);
  if (t == "nan" || t == "-nan") return kNaN;
  if (t == "inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    return parse_number(t);
  } catch (const ConfigError&) {
    throw std::runtime_error("CSV: bad number '" + s + "'");
  }
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Ddm:
      return "ddm";
    case Algorithm::Tgddm1:
      return "tgddm1";
    case Algorithm::Tgddm2:
      return "tgddm2";
    case Algorithm::Ctg:
      return "ctg";
  }
  return "?";
}

std::string_view to_string(FineRule r) {
  switch (r) {
    case FineRule::Pow15:
      return "pow15";
    case FineRule::Pow125:
      return "pow125";
    case FineRule::Half:
      return "half";
    case FineRule::Explicit:
      return "explicit";
  }
  return "?";
}

std::string_view element_key(ElementPair pair) { return pair == ElementPair::TaylorHood ? "p2p1p2" : "minip1"; }

double parse_fraction(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty number");
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  const double num = parse_number(trim(text.substr(0, slash)));
  const double den = parse_number(trim(text.substr(slash + 1)));
  if (den == 0.0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

double fine_size(double H, FineRule rule) {
  switch (rule) {
    case FineRule::Pow15:
      return std::pow(H, 1.5);
    case FineRule::Pow125:
      return std::pow(H, 1.25);
    case FineRule::Half:
      return H / 2.0;
    case FineRule::Explicit:
      break;
  }
  throw std::invalid_argument("fine_size: explicit rule has no formula");
}

void ExperimentConfig::validate() const {
  if (coarse_sizes.empty()) throw ConfigError("no coarse sizes given (--coarse)");
  for (std::size_t i = 0; i < coarse_sizes.size(); ++i) {
    if (!(coarse_sizes[i] > 0.0 && coarse_sizes[i] <= 1.0)) throw ConfigError("coarse sizes must lie in (0, 1]");
    if (i > 0 && !(coarse_sizes[i] < coarse_sizes[i - 1])) throw ConfigError("coarse sizes must be strictly descending");
  }
  if (fine_sizes.size() != coarse_sizes.size()) throw ConfigError("need one fine size per coarse size");
  for (std::size_t i = 0; i < fine_sizes.size(); ++i) {
    if (!(fine_sizes[i] > 0.0 && fine_sizes[i] <= coarse_sizes[i])) {
      throw ConfigError("fine size " + format_number(fine_sizes[i]) + " must lie in (0, H]");
    }
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 1) throw ConfigError("max-iter must be at least 1");
  if (!(robin.delta_S > 0.0 && robin.delta_D > 0.0)) throw ConfigError("deltaS and deltaD must be positive");
  if (!(params.nu > 0.0 && params.g > 0.0 && params.k > 0.0 && params.alpha > 0.0)) {
    throw ConfigError("nu, g, k and alpha must be positive");
  }
  if (params.z != 0.0) throw ConfigError("the manufactured test problem requires z = 0");
}

std::string usage() {
  return "usage: sdtg_run [--config FILE] --algorithm {ddm|tgddm1|tgddm2|ctg} --elements {p2p1p2|minip1}\n"
         "                --deltaS X --deltaD X --coarse H1,H2,... [--fine-rule {pow15|pow125|half} | --fine h1,h2,...]\n"
         "                [--tol X] [--max-iter N] [--nu X] [--g X] [--k X] [--alpha X] [--z X]\n"
         "                [--output FILE] [--parallel-rows] [--concurrent] [--mesh-dump DIR] [--matrix-dump DIR]\n"
         "Sizes and deltas accept fractions such as 1/27.\n";
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw ConfigError("no arguments given\n" + usage());

  CLI::App app{"Two-grid Stokes-Darcy experiment runner", "sdtg_run"};
  app.set_config("--config", "", "flat key = value file; keys are the flag names");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string algorithm = "tgddm2";
  std::string elements = "p2p1p2";
  std::string delta_s = "1";
  std::string delta_d = "1";
  std::vector<std::string> coarse;
  std::string rule;
  std::vector<std::string> fine;
  std::string tol = "1e-6";
  int max_iter = 1000;
  std::string nu = "1";
  std::string g = "1";
  std::string k = "1";
  std::string alpha = "1";
  std::string z = "0";
  ExperimentConfig cfg;

  app.add_option("--algorithm", algorithm);
  app.add_option("--elements", elements);
  app.add_option("--deltaS", delta_s);
  app.add_option("--deltaD", delta_d);
  app.add_option("--coarse", coarse)->delimiter(',');
  auto* rule_opt = app.add_option("--fine-rule", rule);
  auto* fine_opt = app.add_option("--fine", fine)->delimiter(',');
  app.add_option("--tol", tol);
  app.add_option("--max-iter", max_iter);
  app.add_option("--nu", nu);
  app.add_option("--g", g);
  app.add_option("--k", k);
  app.add_option("--alpha", alpha);
  app.add_option("--z", z);
  app.add_option("--output", cfg.output);
  app.add_flag("--parallel-rows", cfg.parallel_rows);
  app.add_flag("--concurrent", cfg.concurrent);
  app.add_option("--mesh-dump", cfg.mesh_dump);
  app.add_option("--matrix-dump", cfg.matrix_dump);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string(e.what()) + "\n" + usage());
  }

  cfg.algorithm = parse_algorithm(algorithm);
  cfg.elements = parse_elements(elements);
  cfg.robin.delta_S = parse_fraction(delta_s);
  cfg.robin.delta_D = parse_fraction(delta_d);
  cfg.coarse_sizes = parse_list(coarse);
  cfg.tol = parse_fraction(tol);
  cfg.max_iter = max_iter;
  cfg.params.nu = parse_fraction(nu);
  cfg.params.g = parse_fraction(g);
  cfg.params.k = parse_fraction(k);
  cfg.params.alpha = parse_fraction(alpha);
  cfg.params.z = parse_fraction(z);

  const bool has_rule = rule_opt->count() > 0;
  const bool has_fine = fine_opt->count() > 0;
  cfg.fine_rule = has_rule ? parse_rule(rule) : (has_fine ? FineRule::Explicit : FineRule::Pow15);
  if (has_fine && cfg.fine_rule != FineRule::Explicit) {
    throw ConfigError("--fine-rule " + rule + " conflicts with an explicit --fine list");
  }
  if (cfg.fine_rule == FineRule::Explicit) {
    if (!has_fine) throw ConfigError("--fine-rule explicit needs a --fine list");
    cfg.fine_sizes = parse_list(fine);
  } else {
    for (const double H : cfg.coarse_sizes) cfg.fine_sizes.push_back(fine_size(H, cfg.fine_rule));
  }
  cfg.validate();
  return cfg;
}

bool RunRecord::success() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const RowOutcome& o) { return o.ok; });
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.coarse_sizes.size();
  std::vector<RowResult> results(n);
  if (cfg.parallel_rows) {
    std::vector<std::future<RowResult>> jobs;
    jobs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, run_row, std::cref(cfg), i));
    for (std::size_t i = 0; i < n; ++i) results[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < n; ++i) results[i] = run_row(cfg, i);
  }
  RunRecord rec;
  rec.config = cfg;
  for (auto& r : results) {
    rec.table.rows.push_back(r.row);
    rec.outcomes.push_back(std::move(r.outcome));
  }
  return rec;
}

std::map<std::string, double> table_rates(const ConvergenceTable& table) {
  std::map<std::string, double> out;
  if (table.rows.size() < 3) return out;
  for (const char* col : kRateColumns) {
    const auto values = table.column(col);
    const bool usable =
        std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v) && v > 0.0; });
    if (usable) out[col] = fit_rate(table, col);
  }
  return out;
}

void write_csv(const RunRecord& rec, std::ostream& out) {
  const auto& c = rec.config;
  out << kHeader << '\n';
  for (const auto& r : rec.table.rows) {
    out << to_string(c.algorithm) << ',' << element_key(c.elements) << ',' << format_number(c.robin.delta_S) << ','
        << format_number(c.robin.delta_D) << ',' << format_number(r.H) << ',' << format_number(r.h) << ',' << r.N
        << ',' << format_number(r.err_u_h1) << ',' << format_number(r.err_p_l2) << ','
        << format_number(r.err_phi_h1) << ',' << format_number(r.t_coarse) << ',' << format_number(r.t_fine)
        << '\n';
  }
  const auto rates = table_rates(rec.table);
  for (const char* col : kRateColumns) {
    if (const auto it = rates.find(col); it != rates.end()) {
      out << "# rate_" << col << '=' << format_number(it->second) << '\n';
    }
  }
}

void write_csv(const RunRecord& rec, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_csv(rec, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CsvRecord read_csv(std::istream& in) {
  CsvRecord rec;
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("CSV: missing or unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# rate_", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw std::runtime_error("CSV: bad rate comment '" + line + "'");
      rec.rates[line.substr(7, eq - 7)] = parse_csv_number(line.substr(eq + 1));
      continue;
    }
    if (line.front() == '#') continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 12) throw std::runtime_error("CSV: expected 12 columns in '" + line + "'");
    rec.algorithm = cells[0];
    rec.elements = cells[1];
    rec.delta_S = parse_csv_number(cells[2]);
    rec.delta_D = parse_csv_number(cells[3]);
    ConvergenceRow r;
    r.H = parse_csv_number(cells[4]);
    r.h = parse_csv_number(cells[5]);
    r.N = static_cast<int>(parse_csv_number(cells[6]));
    r.err_u_h1 = parse_csv_number(cells[7]);
    r.err_p_l2 = parse_csv_number(cells[8]);
    r.err_phi_h1 = parse_csv_number(cells[9]);
    r.t_coarse = parse_csv_number(cells[10]);
    r.t_fine = parse_csv_number(cells[11]);
    rec.table.rows.push_back(r);
  }
  return rec;
}

CsvRecord read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

int exit_code(const RunRecord& rec) { return rec.success() ? 0 : 2; }

}  // namespace sdtg

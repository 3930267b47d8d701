// Command-line front end: solve one instance, run benchmark matrices, dump
// dense diagnostics, verify a candidate matrix.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sniep/diagnostics.hpp"
#include "sniep/error.hpp"
#include "sniep/harness.hpp"
#include "sniep/report.hpp"

namespace {

using namespace sniep;

struct InstanceArgs {
  std::string kind;
  int n = 100;
  int p = 0;
  double scale = 1.0;
  std::vector<double> spectrum;
  std::uint64_t seed = 1;
  std::string variant = "pcg";
};

struct SolverArgs {
  int max_outer = 100;
  double eps = 5e-10;
};

void add_instance_options(CLI::App* app, InstanceArgs& a) {
  app->add_option("--kind", a.kind,
                  "fixed | dense | lowrank (default: fixed when --spectrum "
                  "is given, else dense)");
  app->add_option("--n", a.n, "dimension");
  app->add_option("--p", a.p, "rank for lowrank instances (default n/4)");
  app->add_option("--scale", a.scale, "start-point scale for fixed spectra");
  app->add_option("--spectrum", a.spectrum, "prescribed eigenvalues")
      ->delimiter(',');
  app->add_option("--seed", a.seed, "RNG seed");
}

void add_solver_options(CLI::App* app, SolverArgs& s) {
  app->add_option("--max-outer", s.max_outer, "outer iteration cap");
  app->add_option("--eps", s.eps, "residual stopping tolerance");
}

ProblemSpec make_spec(const InstanceArgs& a) {
  ProblemSpec spec;
  std::string kind = a.kind;
  if (kind.empty()) kind = a.spectrum.empty() ? "dense" : "fixed";
  spec.kind = parse_problem_kind(kind);
  spec.n = a.n;
  spec.scale = a.scale;
  spec.seed = a.seed;
  if (spec.kind == ProblemKind::FixedSpectrum) {
    spec.spectrum = a.spectrum.empty()
                        ? std::vector<double>{5.0, 0.0, -2.0, -2.0}
                        : a.spectrum;
    spec.n = static_cast<int>(spec.spectrum.size());
  }
  if (spec.kind == ProblemKind::LowRankSpectrum)
    spec.p = a.p > 0 ? a.p : std::max(1, a.n / 4);
  spec.validate();
  return spec;
}

SolverConfig make_config(const SolverArgs& s) {
  SolverConfig cfg;
  cfg.max_outer = s.max_outer;
  cfg.epsilon = s.eps;
  return cfg;
}

void write_records(const std::vector<RunRecord>& recs, const std::string& out,
                   const std::string& format) {
  const ReportFormat fmt = parse_report_format(format);
  if (out.empty() || out == "-")
    emit_report(std::cout, recs, fmt);
  else
    emit_report(out, recs, fmt);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n)
      throw Error("'" + path + "' is not a square matrix");
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = rows[i][j];
  }
  return c;
}

void write_matrix_csv(const std::string& path, const Matrix& c) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      out << (j ? "," : "") << c(i, j);
    out << '\n';
  }
}

void print_verdict(const Verdict& v) {
  std::cout << "symmetric:   " << (v.symmetric ? "pass" : "FAIL")
            << "  (max |C - C^T| = " << v.asymmetry << ")\n"
            << "nonnegative: " << (v.nonnegative ? "pass" : "FAIL")
            << "  (min entry = " << v.min_entry << ")\n"
            << "spectrum:    " << (v.spectrum_matches ? "pass" : "FAIL")
            << "  (max eigenvalue error = " << v.max_eigen_error << ")\n";
}

struct BenchArgs {
  std::string preset = "dense";
  std::vector<int> sizes;
  std::string variant = "both";
  int reps = 1;
  int workers = 1;
  bool large = false;
  std::string trajectory_dir;
};

std::vector<BenchCell> build_cells(const BenchArgs& b, const InstanceArgs& a) {
  std::vector<Variant> variants;
  if (b.variant == "both")
    variants = {Variant::CG, Variant::PCG};
  else
    variants = {parse_variant(b.variant)};

  std::vector<ProblemSpec> specs;
  if (b.preset == "fixed") {
    for (double scale : {1.0, 5.0, 10.0})
      specs.push_back(fixed_spectrum_example(scale, 0));
  } else if (b.preset == "dense") {
    std::vector<int> ns = b.sizes;
    if (ns.empty()) ns = {100, 200, 500, 1000};
    if (b.large) ns.insert(ns.end(), {2000, 5000});
    for (int n : ns) {
      ProblemSpec s;
      s.kind = ProblemKind::RandomDenseSpectrum;
      s.n = n;
      specs.push_back(s);
    }
  } else if (b.preset == "lowrank") {
    std::vector<int> ns = b.sizes;
    if (ns.empty()) ns = {100, 200, 500, 1000};
    if (b.large) ns.insert(ns.end(), {2000, 5000});
    for (int n : ns) {
      ProblemSpec s;
      s.kind = ProblemKind::LowRankSpectrum;
      s.n = n;
      s.p = n / 4;
      specs.push_back(s);
    }
  } else if (b.preset == "custom") {
    if (b.sizes.empty()) {
      specs.push_back(make_spec(a));
    } else {
      for (int n : b.sizes) {
        InstanceArgs sized = a;
        sized.n = n;
        specs.push_back(make_spec(sized));
      }
    }
  } else {
    throw std::invalid_argument("unknown preset: " + b.preset);
  }

  for (const auto& s : specs)
    if (s.n > 1000)
      std::cerr << "warning: n = " << s.n << " is long-running\n";

  // Every (spec, repetition) shares one instance across variants, so CG and
  // PCG are compared on identical seeds.
  std::vector<BenchCell> cells;
  std::uint64_t index = 0;
  for (const auto& s : specs)
    for (int r = 0; r < b.reps; ++r) {
      ProblemSpec spec = s;
      spec.seed = derive_seed(a.seed, index++);
      for (Variant v : variants) cells.push_back({spec, v});
    }
  return cells;
}

int run_solve(const InstanceArgs& a, const SolverArgs& s,
              const std::string& out, const std::string& format,
              const std::string& trajectory, const std::string& solution,
              bool verbose) {
  BenchCell cell{make_spec(a), parse_variant(a.variant)};
  SolveReport report;
  const RunRecord rec = run_cell(cell, make_config(s), &report);
  if (verbose) {
    for (const auto& r : report.records)
      std::cerr << "k=" << r.k << " res=" << r.res_norm
                << " delta=" << r.delta_k << " step=" << to_string(r.step_kind)
                << " |dx|=" << r.step_norm << " cg=" << r.cg_iters
                << " retries=" << r.retries << " ared/pred=" << r.ared / r.pred
                << '\n';
    if (!report.message.empty()) std::cerr << report.message << '\n';
  }
  write_records({rec}, out, format);
  if (!trajectory.empty()) write_trajectory_csv(trajectory, rec);
  if (!solution.empty())
    write_matrix_csv(solution,
                     report.final_point.s.cwiseProduct(report.final_point.s));
  return rec.status == SolveStatus::Converged ? 0 : 1;
}

int run_bench(const BenchArgs& b, const InstanceArgs& a, const SolverArgs& s,
              const std::string& out, const std::string& format) {
  const auto cells = build_cells(b, a);
  const auto recs = run_benchmark(cells, make_config(s), b.workers);
  write_records(recs, out, format);
  if (!b.trajectory_dir.empty()) {
    std::filesystem::create_directories(b.trajectory_dir);
    for (std::size_t i = 0; i < recs.size(); ++i)
      write_trajectory_csv(
          (std::filesystem::path(b.trajectory_dir) /
           ("cell_" + std::to_string(i) + ".csv"))
              .string(),
          recs[i]);
  }
  for (const auto& r : recs)
    if (r.status != SolveStatus::Converged) return 1;
  return 0;
}

int run_diag(const InstanceArgs& a, const SolverArgs& s, const std::string& at,
             double sigma_override, double rank_tol, const std::string& dump_h,
             const std::string& dump_pre, const std::string& out) {
  const ProblemSpec spec = make_spec(a);
  if (spec.n > 60)
    std::cerr << "warning: dense assembly at n = " << spec.n
              << " needs n^4 = " << static_cast<double>(spec.n) * spec.n *
                                        spec.n * spec.n
              << " entries and may take minutes\n";
  const GeneratedProblem gen = generate(spec);
  ProductPoint x = gen.start;
  nlohmann::json j;
  if (at == "final") {
    SolverConfig cfg = make_config(s);
    cfg.use_preconditioner = parse_variant(a.variant) == Variant::PCG;
    const SolveReport rep = solve(gen.problem, gen.start, cfg);
    x = rep.final_point;
    j["solve_status"] = to_string(rep.status);
    j["IT"] = rep.counters.it;
  } else if (at != "start") {
    throw std::invalid_argument("--at must be start or final");
  }
  const double fnorm = residual(gen.problem, x).norm;
  const double sigma =
      sigma_override >= 0.0 ? sigma_override : std::min(1e-6, fnorm);

  MatricizeOptions opts;
  opts.keep_matrices = false;
  const MatricizedOperators mo = matricize(gen.problem, x, sigma, opts);
  const SurjectivityReport sr = surjectivity_test(gen.problem, x, rank_tol);

  j["n"] = spec.n;
  j["residual"] = fnorm;
  j["sigma"] = sigma;
  j["cond_H"] = mo.cond_h;
  j["cond_MinvH"] = mo.cond_pre;
  j["cond_MinvH_eig"] = mo.cond_pre_eig;
  j["eig_H"] = {mo.spectrum_h(0), mo.spectrum_h(mo.spectrum_h.size() - 1)};
  j["eig_MinvH"] = {mo.spectrum_pre(0),
                    mo.spectrum_pre(mo.spectrum_pre.size() - 1)};
  j["surjectivity"] = {{"J_S_rank", sr.j_s_rank},
                       {"J_Q_rank", sr.j_q_rank},
                       {"predicted_J_Q_rank", sr.predicted_j_q_rank},
                       {"joint_rank", sr.joint_rank},
                       {"columns", sr.columns},
                       {"full_column_rank", sr.full_column_rank},
                       {"multiplicities", sr.multiplicities},
                       {"note", sr.note}};
  if (!dump_h.empty()) write_spectrum_csv(dump_h, mo.spectrum_h);
  if (!dump_pre.empty()) write_spectrum_csv(dump_pre, mo.spectrum_pre);
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream f(out);
    if (!f) throw Error("cannot open '" + out + "' for writing");
    f << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric nonnegative matrices with prescribed spectrum"};
  app.require_subcommand(1);

  InstanceArgs inst;
  SolverArgs solver;
  std::string out, format = "table", trajectory;

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance");
  add_instance_options(solve_cmd, inst);
  add_solver_options(solve_cmd, solver);
  std::string solution;
  bool verbose = false;
  solve_cmd->add_option("--variant", inst.variant, "cg | pcg");
  solve_cmd->add_option("--out", out, "report path (default stdout)");
  solve_cmd->add_option("--format", format, "csv | json | table");
  solve_cmd->add_option("--trajectory", trajectory, "k,res_norm CSV path");
  solve_cmd->add_option("--solution", solution, "write C = S.*S as CSV");
  solve_cmd->add_flag("--verbose", verbose, "per-iteration log on stderr");

  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark matrix");
  BenchArgs bench;
  add_instance_options(bench_cmd, inst);
  add_solver_options(bench_cmd, solver);
  bench_cmd->add_option("--preset", bench.preset,
                        "dense | lowrank | fixed ({5,0,-2,-2} at three "
                        "scales) | custom (instance flags)");
  bench_cmd->add_option("--sizes", bench.sizes, "override n list")
      ->delimiter(',');
  bench_cmd->add_option("--variant", bench.variant, "cg | pcg | both");
  bench_cmd->add_option("--reps", bench.reps, "repetitions per cell");
  bench_cmd->add_option("--workers", bench.workers, "parallel cells");
  bench_cmd->add_flag("--large", bench.large, "add n = 2000 and 5000");
  bench_cmd->add_option("--trajectory", bench.trajectory_dir,
                        "directory for per-cell trajectory CSVs");
  bench_cmd->add_option("--out", out, "report path (default stdout)");
  bench_cmd->add_option("--format", format, "csv | json | table");

  auto* diag_cmd = app.add_subcommand("diag", "dense conditioning and rank");
  add_instance_options(diag_cmd, inst);
  add_solver_options(diag_cmd, solver);
  std::string at = "final", dump_h, dump_pre;
  double sigma_override = -1.0, rank_tol = 1e-10;
  diag_cmd->add_option("--variant", inst.variant, "cg | pcg");
  diag_cmd->add_option("--at", at, "start | final");
  diag_cmd->add_option("--sigma", sigma_override,
                       "normal-equation shift (default min(1e-6, ||F||))");
  diag_cmd->add_option("--rank-tol", rank_tol, "relative rank threshold");
  diag_cmd->add_option("--dump-h", dump_h, "spectrum of H as CSV");
  diag_cmd->add_option("--dump-pre", dump_pre, "spectrum of M^-1 H as CSV");
  diag_cmd->add_option("--out", out, "JSON summary path (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "check a candidate matrix");
  std::string matrix_path;
  double tol = 1e-8;
  verify_cmd->add_option("--matrix", matrix_path, "CSV matrix")->required();
  verify_cmd->add_option("--spectrum", inst.spectrum, "prescribed eigenvalues")
      ->delimiter(',')
      ->required();
  verify_cmd->add_option("--tol", tol, "tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd)
      return run_solve(inst, solver, out, format, trajectory, solution,
                       verbose);
    if (*bench_cmd) return run_bench(bench, inst, solver, out, format);
    if (*diag_cmd)
      return run_diag(inst, solver, at, sigma_override, rank_tol, dump_h,
                      dump_pre, out);
    if (*verify_cmd) {
      const Matrix c = read_matrix_csv(matrix_path);
      const Vector lambda = Eigen::Map<const Vector>(
          inst.spectrum.data(), static_cast<Eigen::Index>(inst.spectrum.size()));
      const Verdict v = verify_matrix(lambda, c, tol);
      print_verdict(v);
      return v.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

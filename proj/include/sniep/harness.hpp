#pragma once

// Problem generators, benchmark execution and solution verification.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sniep/dogleg_solver.hpp"
#include "sniep/manifold.hpp"
#include "sniep/rng.hpp"
#include "sniep/sniep_map.hpp"

namespace sniep {

enum class ProblemKind { FixedSpectrum, RandomDenseSpectrum, LowRankSpectrum };
enum class Variant { CG, PCG };

std::string to_string(ProblemKind kind);
std::string to_string(Variant variant);
ProblemKind parse_problem_kind(const std::string& s);
Variant parse_variant(const std::string& s);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::RandomDenseSpectrum;
  int n = 0;
  int p = 0;            ///< rank, LowRankSpectrum only
  double scale = 1.0;   ///< start-point scale, FixedSpectrum only
  std::uint64_t seed = 0;
  std::vector<double> spectrum;  ///< FixedSpectrum only

  /// Throws std::invalid_argument for inconsistent specs.
  void validate() const;
};

/// The fixed test spectrum {5, 0, -2, -2}.
ProblemSpec fixed_spectrum_example(double scale, std::uint64_t seed);

struct GeneratedProblem {
  SpectrumProblem problem;
  ProductPoint start;
};

/// FixedSpectrum: lambda as given, S0 = sym(scale B), Q0 = qf(scale C) with
///   B, C uniform(0,1).
/// RandomDenseSpectrum: lambda = eig(sym(|N(0,1)| matrix)); C0 = sym(B),
///   S0 = sqrt(C0) entrywise, Q0 = eigenvectors of C0.
/// LowRankSpectrum: lambda = eig(X X^T), X uniform n x p; C0 = B B^T with
///   B uniform n x p, S0 = sqrt(C0), Q0 = eigenvectors of C0.
/// Eigenvalues and eigenvectors are in ascending order.
GeneratedProblem generate(const ProblemSpec& spec, Rng& rng);
GeneratedProblem generate(const ProblemSpec& spec);

struct RunRecord {
  ProblemSpec problem;
  Variant variant = Variant::PCG;
  double ct = 0.0;
  int it = 0;
  int nf = 0;
  long ncg = 0;
  double res0 = 0.0;
  double res = 0.0;
  SolveStatus status = SolveStatus::MaxOuterReached;
  std::vector<std::pair<int, double>> trajectory;

  double mean_ncg_per_outer() const {
    return it > 0 ? static_cast<double>(ncg) / it : 0.0;
  }
};

struct BenchCell {
  ProblemSpec problem;
  Variant variant = Variant::PCG;
};

/// Generates the instance, solves it and summarizes. If `report` is given it
/// receives the full solver report.
RunRecord run_cell(const BenchCell& cell, const SolverConfig& cfg,
                   SolveReport* report = nullptr);

/// Runs every cell, `workers` at a time (0 picks the hardware concurrency).
/// Records are returned in cell order; a failing cell never aborts the rest.
std::vector<RunRecord> run_benchmark(const std::vector<BenchCell>& cells,
                                     const SolverConfig& cfg, int workers = 1);

struct Verdict {
  bool symmetric = false;
  bool nonnegative = false;
  bool spectrum_matches = false;
  double asymmetry = 0.0;        ///< max |C - C^T|
  double min_entry = 0.0;
  double max_eigen_error = 0.0;  ///< after sorting both spectra
  bool ok() const { return symmetric && nonnegative && spectrum_matches; }
};

/// Checks C = S.*S: symmetric, entries >= -tol, sorted eigenvalues within tol
/// of the sorted prescribed spectrum.
Verdict verify_solution(const SpectrumProblem& p, const ProductPoint& x,
                        double tol);
Verdict verify_matrix(const Vector& lambda, const Matrix& c, double tol);

/// Sorted eigenvalues / ascending eigenpairs of a symmetric matrix.
Vector symmetric_eigenvalues(const Matrix& c);

}  // namespace sniep

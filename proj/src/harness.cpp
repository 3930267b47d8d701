#include "sniep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "sniep/error.hpp"

namespace sniep {

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::FixedSpectrum: return "FixedSpectrum";
    case ProblemKind::RandomDenseSpectrum: return "RandomDenseSpectrum";
    case ProblemKind::LowRankSpectrum: return "LowRankSpectrum";
  }
  return "?";
}

std::string to_string(Variant variant) {
  return variant == Variant::CG ? "CG" : "PCG";
}

ProblemKind parse_problem_kind(const std::string& s) {
  for (auto k : {ProblemKind::FixedSpectrum, ProblemKind::RandomDenseSpectrum,
                 ProblemKind::LowRankSpectrum})
    if (to_string(k) == s) return k;
  if (s == "fixed") return ProblemKind::FixedSpectrum;
  if (s == "dense") return ProblemKind::RandomDenseSpectrum;
  if (s == "lowrank") return ProblemKind::LowRankSpectrum;
  throw std::invalid_argument("unknown problem kind: " + s);
}

Variant parse_variant(const std::string& s) {
  if (s == "CG" || s == "cg") return Variant::CG;
  if (s == "PCG" || s == "pcg") return Variant::PCG;
  throw std::invalid_argument("unknown variant: " + s);
}

void ProblemSpec::validate() const {
  if (kind == ProblemKind::FixedSpectrum) {
    if (spectrum.empty())
      throw std::invalid_argument("FixedSpectrum needs an eigenvalue list");
    if (n != 0 && n != static_cast<int>(spectrum.size()))
      throw std::invalid_argument("n does not match the spectrum length");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    return;
  }
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (kind == ProblemKind::LowRankSpectrum && (p < 1 || p > n))
    throw std::invalid_argument("LowRankSpectrum needs 1 <= p <= n");
}

ProblemSpec fixed_spectrum_example(double scale, std::uint64_t seed) {
  ProblemSpec spec;
  spec.kind = ProblemKind::FixedSpectrum;
  spec.spectrum = {5.0, 0.0, -2.0, -2.0};
  spec.n = 4;
  spec.scale = scale;
  spec.seed = seed;
  return spec;
}

Vector symmetric_eigenvalues(const Matrix& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(c),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

namespace {

// Start point (sqrt(C0), eigenvectors of C0), eigenpairs ascending.
ProductPoint start_from_nonnegative(const Matrix& c0) {
  const Matrix c = symmetrize(c0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  return {c.cwiseSqrt(), es.eigenvectors()};
}

}  // namespace

GeneratedProblem generate(const ProblemSpec& spec, Rng& rng) {
  spec.validate();
  GeneratedProblem out;
  switch (spec.kind) {
    case ProblemKind::FixedSpectrum: {
      const auto n = static_cast<Eigen::Index>(spec.spectrum.size());
      out.problem.lambda =
          Eigen::Map<const Vector>(spec.spectrum.data(), n);
      out.start = random_point(n, rng, spec.scale);
      break;
    }
    case ProblemKind::RandomDenseSpectrum: {
      const Matrix c_tilde = rng.normal_matrix(spec.n, spec.n).cwiseAbs();
      out.problem.lambda = symmetric_eigenvalues(symmetrize(c_tilde));
      out.start = start_from_nonnegative(rng.uniform_matrix(spec.n, spec.n));
      break;
    }
    case ProblemKind::LowRankSpectrum: {
      const Matrix x = rng.uniform_matrix(spec.n, spec.p);
      out.problem.lambda = symmetric_eigenvalues(x * x.transpose());
      const Matrix b = rng.uniform_matrix(spec.n, spec.p);
      out.start = start_from_nonnegative(b * b.transpose());
      break;
    }
  }
  return out;
}

GeneratedProblem generate(const ProblemSpec& spec) {
  Rng rng(spec.seed);
  return generate(spec, rng);
}

RunRecord run_cell(const BenchCell& cell, const SolverConfig& cfg,
                   SolveReport* report) {
  RunRecord rec;
  rec.problem = cell.problem;
  rec.variant = cell.variant;
  if (rec.problem.kind == ProblemKind::FixedSpectrum)
    rec.problem.n = static_cast<int>(rec.problem.spectrum.size());

  const GeneratedProblem gen = generate(cell.problem);
  SolverConfig local = cfg;
  local.use_preconditioner = cell.variant == Variant::PCG;
  local.seed = cell.problem.seed;
  SolveReport sr = solve(gen.problem, gen.start, local);

  rec.ct = sr.counters.wall_seconds;
  rec.it = sr.counters.it;
  rec.nf = sr.counters.nf;
  rec.ncg = sr.counters.ncg;
  rec.res0 = sr.initial_residual;
  rec.res = sr.final_residual;
  rec.status = sr.status;
  for (const auto& r : sr.records) rec.trajectory.emplace_back(r.k, r.res_norm);
  rec.trajectory.emplace_back(sr.counters.it, sr.final_residual);
  if (report) *report = std::move(sr);
  return rec;
}

std::vector<RunRecord> run_benchmark(const std::vector<BenchCell>& cells,
                                     const SolverConfig& cfg, int workers) {
  std::vector<RunRecord> records(cells.size());
  if (cells.empty()) return records;
  if (workers <= 0)
    workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(cells.size()));

  std::atomic<std::size_t> next{0};
  std::mutex sink;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      RunRecord rec;
      try {
        rec = run_cell(cells[i], cfg);
      } catch (const std::exception&) {
        rec.problem = cells[i].problem;
        rec.variant = cells[i].variant;
        rec.status = SolveStatus::Failed;
        rec.res0 = rec.res = std::numeric_limits<double>::quiet_NaN();
      }
      std::lock_guard<std::mutex> lock(sink);
      records[i] = std::move(rec);
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return records;
}

Verdict verify_matrix(const Vector& lambda, const Matrix& c, double tol) {
  Verdict v;
  if (c.rows() != c.cols() || c.rows() != lambda.size())
    throw DimensionMismatch("verify: matrix size does not match spectrum");
  v.asymmetry = c.size() ? (c - c.transpose()).cwiseAbs().maxCoeff() : 0.0;
  v.symmetric = v.asymmetry <= tol;
  v.min_entry = c.size() ? c.minCoeff() : 0.0;
  v.nonnegative = v.min_entry >= -tol;

  Vector got = symmetric_eigenvalues(c);
  Vector want = lambda;
  std::sort(want.begin(), want.end());
  v.max_eigen_error = c.size() ? (got - want).cwiseAbs().maxCoeff() : 0.0;
  v.spectrum_matches = v.max_eigen_error <= tol;
  return v;
}

Verdict verify_solution(const SpectrumProblem& p, const ProductPoint& x,
                        double tol) {
  return verify_matrix(p.lambda, x.s.cwiseProduct(x.s), tol);
}

}  // namespace sniep

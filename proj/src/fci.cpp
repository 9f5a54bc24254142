#include "adpqe/fci.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "adpqe/errors.hpp"

namespace adpqe {

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Bit patterns of `count` set bits among `n` positions, ascending.
std::vector<std::uint64_t> strings(int n, int count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (std::popcount(s) == count) out.push_back(s);
  }
  return out;
}

std::uint64_t spread(std::uint64_t s, int offset) {
  std::uint64_t out = 0;
  for (int p = 0; s != 0; ++p, s >>= 1) {
    if (s & 1u) out |= std::uint64_t{1} << (2 * p + offset);
  }
  return out;
}

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMatrix sector_matrix(const CompiledOperator& h, const SectorBasis& basis) {
  std::vector<Eigen::Triplet<double>> entries;
  const auto& dets = basis.determinants();
  for (std::size_t col = 0; col < dets.size(); ++col) {
    h.for_each_column_entry(dets[col].bits, [&](std::uint64_t target, cplx value) {
      if (value == cplx{}) return;
      const std::ptrdiff_t row = basis.index_of(Determinant{target});
      if (row < 0) return;
      if (std::abs(value.imag()) > 1e-10) {
        throw NumericalError("complex Hamiltonian matrix element in determinant basis");
      }
      entries.emplace_back(static_cast<int>(row), static_cast<int>(col), value.real());
    });
  }
  SparseMatrix m(static_cast<int>(dets.size()), static_cast<int>(dets.size()));
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

struct Eigenpair {
  double value;
  Eigen::VectorXd vector;
  int iterations;
};

Eigenpair dense_lowest(const SparseMatrix& m) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  return {es.eigenvalues()(0), es.eigenvectors().col(0), 0};
}

Eigenpair davidson_lowest(const SparseMatrix& m, const DavidsonOptions& opt) {
  const Eigen::Index n = m.rows();
  const Eigen::VectorXd diag = m.diagonal();
  const int max_sub = std::max(2, std::min<int>(opt.max_subspace, static_cast<int>(n)));

  Eigen::MatrixXd v(n, max_sub);
  Eigen::MatrixXd av(n, max_sub);
  int k = 0;

  Eigen::Index start = 0;
  diag.minCoeff(&start);
  Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
  t(start) = 1.0;

  double theta = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  double rnorm = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
  for (int iter = 1; iter <= opt.max_iterations; ++iter) {
    // Two Gram-Schmidt passes against the current subspace.
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) t -= v.col(j).dot(t) * v.col(j);
    }
    const double tn = t.norm();
    if (tn < 1e-14) {
      // Correction lies in the subspace; nothing new to add.
      if (rnorm < 1e-6) return {theta, x, iter};
      throw NumericalError("Davidson subspace collapsed");
    }
    if (k == max_sub) {
      // Restart from the current Ritz vector.
      v.col(0) = x;
      av.col(0) = m * x;
      k = 1;
      for (int pass = 0; pass < 2; ++pass) t -= v.col(0).dot(t) * v.col(0);
    }
    v.col(k) = t / t.norm();
    av.col(k) = m * v.col(k);
    ++k;

    const Eigen::MatrixXd small = v.leftCols(k).transpose() * av.leftCols(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (small + small.transpose()));
    theta = es.eigenvalues()(0);
    const Eigen::VectorXd s = es.eigenvectors().col(0);
    x = v.leftCols(k) * s;
    const Eigen::VectorXd r = av.leftCols(k) * s - theta * x;
    rnorm = r.norm();
    if (std::abs(theta - previous) < opt.energy_tolerance && rnorm < opt.residual_tolerance) {
      return {theta, x, iter};
    }
    previous = theta;

    t.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double denom = theta - diag(i);
      if (std::abs(denom) < 1e-8) denom = denom < 0 ? -1e-8 : 1e-8;
      t(i) = r(i) / denom;
    }
  }
  std::ostringstream msg;
  msg << "Davidson did not converge in " << opt.max_iterations
      << " iterations; residual norm " << rnorm;
  throw NumericalError(msg.str());
}

}  // namespace

SectorBasis::SectorBasis(int n_spatial, int n_alpha, int n_beta) {
  const std::uint64_t dim = binomial(n_spatial, n_alpha) * binomial(n_spatial, n_beta);
  if (dim > kMaxFciDimension) {
    throw RangeError("FCI sector dimension " + std::to_string(dim) + " exceeds limit");
  }
  for (std::uint64_t a : strings(n_spatial, n_alpha)) {
    for (std::uint64_t b : strings(n_spatial, n_beta)) {
      dets_.push_back(Determinant{spread(a, 0) | spread(b, 1)});
    }
  }
  std::sort(dets_.begin(), dets_.end());
  for (std::size_t i = 0; i < dets_.size(); ++i) index_.emplace(dets_[i].bits, i);
}

std::ptrdiff_t SectorBasis::index_of(Determinant d) const {
  const auto it = index_.find(d.bits);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

FciResult fci_ground_energy(const Problem& problem, FciSolver solver,
                            const DavidsonOptions& options) {
  const auto& h = problem.hamiltonian;
  const int n_alpha = (h.n_electrons() + h.sz2()) / 2;
  const int n_beta = (h.n_electrons() - h.sz2()) / 2;
  const SectorBasis basis(h.n_spatial(), n_alpha, n_beta);
  const SparseMatrix m = sector_matrix(problem.compiled, basis);

  FciSolver used = solver;
  if (used == FciSolver::automatic) {
    used = basis.size() < kDenseFciLimit ? FciSolver::dense : FciSolver::davidson;
  }
  Eigenpair pair = used == FciSolver::dense ? dense_lowest(m) : davidson_lowest(m, options);
  pair.vector.normalize();
  Eigen::Index big = 0;
  pair.vector.cwiseAbs().maxCoeff(&big);
  if (pair.vector(big) < 0) pair.vector = -pair.vector;

  FciResult result;
  result.energy = pair.value;
  result.sector_dimension = basis.size();
  result.solver = used;
  result.iterations = pair.iterations;
  result.residual_norm = (m * pair.vector - pair.value * pair.vector).norm();
  result.ground_vector = StateVector(problem.n_qubits());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    result.ground_vector[basis.determinants()[i].bits] = pair.vector(static_cast<Eigen::Index>(i));
  }
  return result;
}

FciResult fci_ground_energy(const MolecularHamiltonian& h, FciSolver solver) {
  return fci_ground_energy(prepare_problem(h), solver);
}

}  // namespace adpqe

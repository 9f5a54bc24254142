#pragma once

// Exact ground state in the (N, Sz) sector of the reference, built from the
// same Jordan-Wigner operator the simulator uses.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "adpqe/problem.hpp"

namespace adpqe {

class SectorBasis {
 public:
  SectorBasis(int n_spatial, int n_alpha, int n_beta);

  std::size_t size() const { return dets_.size(); }
  const std::vector<Determinant>& determinants() const { return dets_; }
  // Index of d, or -1 if d lies outside the sector.
  std::ptrdiff_t index_of(Determinant d) const;

 private:
  std::vector<Determinant> dets_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

enum class FciSolver { automatic, dense, davidson };

struct DavidsonOptions {
  double energy_tolerance = 1e-10;
  double residual_tolerance = 1e-9;
  int max_iterations = 500;
  int max_subspace = 40;
};

struct FciResult {
  double energy = 0.0;
  StateVector ground_vector;
  std::size_t sector_dimension = 0;
  FciSolver solver = FciSolver::dense;  // path actually taken
  int iterations = 0;                   // Davidson steps; 0 for dense
  double residual_norm = 0.0;           // ||H v - E v||
};

// Sector sizes at or above this use the iterative solver in automatic mode.
inline constexpr std::size_t kDenseFciLimit = 4096;
inline constexpr std::size_t kMaxFciDimension = std::size_t{1} << 20;

FciResult fci_ground_energy(const Problem& problem, FciSolver solver = FciSolver::automatic,
                            const DavidsonOptions& options = {});
FciResult fci_ground_energy(const MolecularHamiltonian& h,
                            FciSolver solver = FciSolver::automatic);

}  // namespace adpqe

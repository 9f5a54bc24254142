#pragma once

// Projective residuals r_mu = <Phi_mu| U+ H U |Phi_0> with |Phi_mu> = tau_mu|Phi_0>,
// and the quasi-Newton micro-iteration theta += r / D.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "adpqe/excitation.hpp"
#include "adpqe/hamiltonian.hpp"
#include "adpqe/pauli.hpp"
#include "adpqe/state.hpp"

namespace adpqe {

// Projections whose imaginary part exceeds this are rejected.
inline constexpr double kResidualImagTolerance = 1e-8;

struct ResidualVector {
  std::vector<Excitation> excitations;
  std::vector<double> values;
  std::vector<AnsatzLayer> layers;  // parameters the residuals were taken at

  double max_abs() const;
  std::size_t size() const { return values.size(); }
};

struct MicroIterConfig {
  double residual_tolerance = 1e-5;
  int max_iterations = 500;
  double damping = 1.0;
  // Consecutive growing sweeps that trigger the one-time damping halving.
  int divergence_window = 5;

  void validate() const;
};

struct SweepRecord {
  int sweep = 0;
  double max_residual = 0.0;
  double energy = 0.0;
  double damping = 1.0;
};

struct MicroIterResult {
  std::vector<AnsatzLayer> layers;
  std::vector<SweepRecord> history;
  ResidualVector residuals;  // active-set residuals at the returned layers
  double energy = 0.0;
  int iterations = 0;        // parameter updates performed
  bool converged = false;
  bool damping_reduced = false;
  std::size_t residual_evaluations = 0;  // sum over sweeps of |active|
};

// U+ H U |Phi_0>
StateVector transformed_reference(std::span<const AnsatzLayer> layers, const CompiledOperator& h,
                                  const ReferenceData& ref);

double residual_direct(std::span<const AnsatzLayer> layers, const Excitation& exc,
                       const CompiledOperator& h, const ReferenceData& ref);

// The same residual from three diagonal expectation values:
//   <Omega(pi/4)| Hbar |Omega(pi/4)> - E_mu / 2 - E_0 / 2.
double residual_diagonal_form(std::span<const AnsatzLayer> layers, const Excitation& exc,
                              const CompiledOperator& h, const ReferenceData& ref);

// Residuals of every excitation in `excs` from a single transformed state.
std::vector<double> residuals(std::span<const AnsatzLayer> layers,
                              std::span<const Excitation> excs, const CompiledOperator& h,
                              const ReferenceData& ref);

// <Phi_0| U+ H U |Phi_0>
double ansatz_energy(std::span<const AnsatzLayer> layers, const CompiledOperator& h,
                     const ReferenceData& ref);

// Jacobi sweeps over `active` (a subset of the layer excitations).  Throws
// NumericalError on a NaN residual; non-convergence is reported, not thrown.
MicroIterResult micro_iterate(std::vector<AnsatzLayer> layers, std::span<const Excitation> active,
                              const CompiledOperator& h, const ReferenceData& ref,
                              const MicroIterConfig& cfg);

// "sweep,max_residual,energy,damping" lines with a header row.
void write_history_csv(std::ostream& out, std::span<const SweepRecord> history);

}  // namespace adpqe

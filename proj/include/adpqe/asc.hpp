#pragma once

// Auxiliary-parameter mapping theta_A = r_A / D_A at the converged principal
// unitary, and the non-iterative energy corrections built from it.

#include <limits>
#include <vector>

#include "adpqe/spqe.hpp"
#include "json.hpp"

namespace adpqe {

enum class Provenance { reused_final_residuals, freshly_computed };

struct AuxiliaryEntry {
  Excitation excitation;
  double theta = 0.0;
  double residual = 0.0;
  double denominator = 0.0;
  bool clamped = false;  // denominator sat at the level-shift floor
  Provenance provenance = Provenance::reused_final_residuals;
};

struct AuxiliarySolution {
  std::vector<AuxiliaryEntry> entries;  // same order as SPQEResult::auxiliary
};

struct ASCEnergies {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  double e_spqe = kUnset;
  double e_scheme1 = kUnset;
  double e_scheme2 = kUnset;
  double correction1 = kUnset;    // sum theta^2 D
  double term1 = kUnset;          // 2 sum theta^2 D
  double term2_scheme2 = kUnset;  // 1/2 sum theta^2 W
  std::vector<double> double_commutators;  // W_A per auxiliary entry
};

// Reuses SPQEResult::final_residuals unless `recompute` is set or an entry
// is missing there, in which case the residual is evaluated afresh.
AuxiliarySolution map_auxiliary(const SPQEResult& spqe, const CompiledOperator& h,
                                const ReferenceData& ref, bool recompute = false);

// <Phi_0| [[H, kappa], kappa] |Phi_0> with the bare Hamiltonian.
double double_commutator_expectation(const Excitation& exc, const CompiledOperator& h,
                                     const ReferenceData& ref);

// <Phi_0| [U+ H U, kappa] |Phi_0> at the principal unitary.
double term1_commutator(const SPQEResult& spqe, const Excitation& exc, const CompiledOperator& h,
                        const ReferenceData& ref);

ASCEnergies energy_scheme1(const SPQEResult& spqe, const AuxiliarySolution& aux,
                           const ReferenceData& ref);
ASCEnergies energy_scheme2(const SPQEResult& spqe, const AuxiliarySolution& aux,
                           const CompiledOperator& h, const ReferenceData& ref);
// Both schemes in one record.
ASCEnergies asc_energies(const SPQEResult& spqe, const AuxiliarySolution& aux,
                         const CompiledOperator& h, const ReferenceData& ref);

// Diagnostic: 1/2 sum_{alpha,beta} theta_a theta_b <[[H, kappa_a], kappa_b]>,
// the Term-2 double sum including the off-diagonal pairs that scheme II drops.
double term2_full_double_sum(const AuxiliarySolution& aux, const CompiledOperator& h,
                             const ReferenceData& ref);

nlohmann::json asc_to_json(const AuxiliarySolution& aux, const ASCEnergies& e);

}  // namespace adpqe

#pragma once

// Selected PQE: macro-iterations pick operators from the pool by the
// magnitude of their residual-state coefficients, micro-iterations optimise
// the growing ansatz.  Operators never selected form the auxiliary set.

#include <span>
#include <vector>

#include "adpqe/pool.hpp"
#include "adpqe/pqe.hpp"
#include "adpqe/problem.hpp"
#include "json.hpp"

namespace adpqe {

struct SPQEConfig {
  double omega = 1e-2;  // macro-iteration threshold
  double dt = 1e-3;     // residual-state evolution time
  MicroIterConfig micro;
  int rank_cap = 4;     // pool rank
  // Highest rank allowed into the principal set; 0 means rank_cap.  A value
  // below rank_cap builds the principal set from low-rank operators only
  // while the auxiliary set still spans the whole pool.
  int selection_rank_cap = 0;
  int max_macro_iterations = 100;

  int effective_selection_rank() const {
    return selection_rank_cap > 0 ? selection_rank_cap : rank_cap;
  }
  void validate() const;
};

// |C_mu| for one candidate set, aligned with `excitations`.
struct ResidualCoefficients {
  std::vector<Excitation> excitations;
  std::vector<double> magnitudes;
};

struct Selection {
  std::vector<Excitation> selected;  // descending |C|
  std::vector<Excitation> excluded;  // ascending |C|
};

struct MacroIterationRecord {
  int iteration = 0;
  std::vector<Excitation> added;  // newly appended, in append order
  std::size_t n_selected = 0;     // including operators already present
  std::size_t n_excluded = 0;
  double residual_norm = 0.0;     // sqrt(sum |C|^2) / dt over candidates
  int micro_iterations = 0;
  bool micro_converged = true;
  double energy = 0.0;            // after this iteration's micro-iterations
};

struct SPQEResult {
  SPQEConfig config;
  ReferenceData reference;
  OperatorPool pool;
  std::vector<AnsatzLayer> principal;
  std::vector<Excitation> auxiliary;  // pool order
  double e_hf = 0.0;
  double e_spqe = 0.0;
  // Energy of the same parameters with layers reordered by descending |theta|.
  double e_descending_order = 0.0;
  std::vector<MacroIterationRecord> macro_history;
  ResidualVector final_residuals;  // whole pool at the final principal unitary
  std::size_t residual_evaluations = 0;
  bool macro_converged = false;
  bool micro_converged = true;

  std::size_t n_principal() const { return principal.size(); }
  std::size_t n_auxiliary() const { return auxiliary.size(); }
};

// Exact amplitudes of (1 + i dt U+ H U)|Phi_0> on the pool determinants,
// returned as magnitudes in pool order.
std::vector<double> residual_state_coefficients(std::span<const AnsatzLayer> layers,
                                                const CompiledOperator& h, double dt,
                                                const OperatorPool& pool,
                                                const ReferenceData& ref);

// Excludes the largest ascending-|C| prefix with sum |C|^2 / dt^2 <= omega^2.
Selection select_operators(const ResidualCoefficients& coefficients, double omega, double dt);

SPQEResult run_spqe(const Problem& problem, const SPQEConfig& cfg);
SPQEResult run_spqe(const MolecularHamiltonian& h, const SPQEConfig& cfg);

nlohmann::json config_to_json(const SPQEConfig& cfg);
nlohmann::json spqe_to_json(const SPQEResult& result);

}  // namespace adpqe

#pragma once

// Gate and measurement accounting for a finished SPQE run.

#include <cstddef>
#include <span>
#include <string>

#include "adpqe/pauli.hpp"
#include "adpqe/spqe.hpp"
#include "json.hpp"

namespace adpqe {

inline constexpr const char* kCnotConvention =
    "jordan-wigner pauli rotations, cnot staircase 2*(weight-1) per string, "
    "no cancellation between rotations";

// kappa = tau - tau+ as a Pauli sum (purely imaginary coefficients).
QubitOperator kappa_generator(const Excitation& exc);

int cnot_count(const Excitation& exc);
long long cnot_count(std::span<const AnsatzLayer> layers);

struct MeasurementInputs {
  double epsilon = 1.6e-3;  // target precision, hartree
  double sum_abs_h = 0.0;   // sum of |h_l| over non-identity Pauli terms
  std::size_t n_res = 0;    // residual evaluations
};

struct ResourceEstimate {
  long long cnot_count = 0;
  std::size_t parameter_count = 0;
  std::size_t n_auxiliary = 0;
  std::size_t residual_evaluations = 0;
  double m_spqe_bound = 0.0;
  double m_scheme2_bound = 0.0;
  double m_total = 0.0;
  // (dt * omega)^-2, the scale of the macro-iteration sampling cost.
  double macro_measurement_scale = 0.0;
  double epsilon = 0.0;
  double sum_abs_h = 0.0;
  std::string convention = kCnotConvention;
};

// Throws ConfigurationError unless epsilon > 0.
ResourceEstimate measurement_bounds(const SPQEResult& result, const MeasurementInputs& in);

// Inputs taken from the run itself and the qubit Hamiltonian.
ResourceEstimate estimate_resources(const SPQEResult& result, const QubitOperator& h,
                                    double epsilon = 1.6e-3);

nlohmann::json resources_to_json(const ResourceEstimate& r);

}  // namespace adpqe

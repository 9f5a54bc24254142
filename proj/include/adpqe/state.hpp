#pragma once

// Fock-space statevectors and exact action of excitation-operator
// exponentials.  Ladder operators carry the Jordan-Wigner sign: acting on
// mode m multiplies by (-1)^{number of occupied modes below m}.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adpqe/excitation.hpp"
#include "adpqe/statevector.hpp"

namespace adpqe {

struct SignedDeterminant {
  Determinant det;
  int sign = 1;
};

// tau|d>: annihilate holes starting from the lowest index, then create
// particles starting from the highest.  Empty if a hole is unoccupied or a
// particle occupied.
std::optional<SignedDeterminant> apply_tau(const Excitation& exc, Determinant d);
// tau+|d>
std::optional<SignedDeterminant> apply_tau_dagger(const Excitation& exc, Determinant d);

struct AnsatzLayer {
  Excitation excitation;
  double theta = 0.0;
};

// e^{theta kappa} v, using e^{theta kappa} = 1 + sin(theta) kappa
// + (1 - cos(theta)) kappa^2 on each two-dimensional block {d, tau d}.
StateVector apply_exp_kappa(const AnsatzLayer& layer, const StateVector& v);
void apply_exp_kappa_inplace(const AnsatzLayer& layer, StateVector& v);

// Applies layers[0] first, then layers[1], ...  (layer 0 is nearest the
// reference ket).
StateVector apply_ansatz(std::span<const AnsatzLayer> layers, const StateVector& v);
// Inverse of apply_ansatz: reversed order, negated angles.
StateVector apply_ansatz_adjoint(std::span<const AnsatzLayer> layers, const StateVector& v);

// kappa v = (tau - tau+) v
StateVector apply_kappa(const Excitation& exc, const StateVector& v);

inline cplx project(Determinant d, const StateVector& v) { return v[d.bits]; }

// Number of exponential applications made on the calling thread.
std::uint64_t exp_kappa_count();

}  // namespace adpqe

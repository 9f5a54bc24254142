#pragma once

#include "adpqe/hamiltonian.hpp"
#include "adpqe/pauli.hpp"
#include "adpqe/statevector.hpp"

namespace adpqe {

// Immutable per-molecule data shared by every solver: integrals, the
// aufbau reference and the Jordan-Wigner Hamiltonian ready for application.
struct Problem {
  MolecularHamiltonian hamiltonian;
  ReferenceData reference;
  QubitOperator qubit_hamiltonian;
  CompiledOperator compiled;

  int n_qubits() const { return compiled.n_qubits(); }
  Determinant reference_determinant() const { return Determinant{reference.determinant_bits()}; }
  StateVector reference_state() const {
    return StateVector::basis(n_qubits(), reference_determinant());
  }
};

Problem prepare_problem(const MolecularHamiltonian& h);

}  // namespace adpqe

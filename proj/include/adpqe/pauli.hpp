#pragma once

// Pauli-string algebra and the Jordan-Wigner image of the molecular
// Hamiltonian.
//
// Qubit i is spin orbital i and the least significant bit of a determinant
// index.  A string is stored as (x, z) masks and stands for
//   P(x, z) = i^{popcount(x & z)} X^x Z^z,
// so a qubit with both bits set carries Y = i X Z.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adpqe/statevector.hpp"

namespace adpqe {

class MolecularHamiltonian;

struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  int weight() const { return std::popcount(x | z); }
  char letter(int qubit) const;
  // Word with qubit 0 first, e.g. "XYZI".
  std::string word(int n_qubits) const;
  auto operator<=>(const PauliString&) const = default;
};

// a * b = phase * product; phase is a power of i.
struct PauliProduct {
  cplx phase;
  PauliString product;
};
PauliProduct multiply(const PauliString& a, const PauliString& b);

// Coefficients below this magnitude are dropped by simplify().
inline constexpr double kPruneTolerance = 1e-12;

class QubitOperator {
 public:
  using Terms = std::map<PauliString, cplx>;

  QubitOperator() = default;
  explicit QubitOperator(int n_qubits) : n_qubits_(n_qubits) {}

  static QubitOperator identity(int n_qubits, cplx coeff = 1.0);
  static QubitOperator single(int n_qubits, PauliString s, cplx coeff);

  int n_qubits() const { return n_qubits_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  cplx coefficient(const PauliString& s) const;

  void add(const PauliString& s, cplx coeff);
  QubitOperator& operator+=(const QubitOperator& other);
  QubitOperator& operator-=(const QubitOperator& other);
  QubitOperator& operator*=(cplx scale);
  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b);
  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) { return a -= b; }

  QubitOperator adjoint() const;
  // Drops terms with |c| < tol.  Idempotent.
  QubitOperator& simplify(double tol = kPruneTolerance);
  bool is_hermitian(double tol = 1e-10) const;

  // sum_l |h_l|, optionally excluding the identity string.
  double sum_abs_coefficients(bool include_identity) const;

  // One "coefficient word" line per term; debugging aid only.
  std::string dump() const;

 private:
  int n_qubits_ = 0;
  Terms terms_;
};

// Jordan-Wigner images of single ladder operators on n_qubits modes.
QubitOperator jw_creation(int mode, int n_qubits);
QubitOperator jw_annihilation(int mode, int n_qubits);

// sum h_PQ a+_P a_Q + 1/2 sum <PQ|RS> a+_P a+_Q a_S a_R + E_core, simplified.
QubitOperator jordan_wigner(const MolecularHamiltonian& h);

// Operator prepared for repeated application.  Terms are grouped by X mask;
// each group acts as out[i ^ x] += d_x[i] * in[i] with d_x the combined
// diagonal of its Z parts.  Diagonals are tabulated when they fit in the
// memory budget and rebuilt per application otherwise.
class CompiledOperator {
 public:
  CompiledOperator() = default;
  explicit CompiledOperator(const QubitOperator& op,
                            std::size_t table_budget_bytes = std::size_t{256} << 20);

  int n_qubits() const { return n_qubits_; }
  std::size_t group_count() const { return groups_.size(); }
  bool tabulated() const { return tabulated_; }
  const QubitOperator& source() const { return source_; }

  // out += op * in
  void apply_add(std::span<const cplx> in, std::span<cplx> out) const;
  StateVector apply(const StateVector& v) const;

  // <basis index i ^ x| op |i> contributions: calls f(target_index, value)
  // for every group.
  template <class F>
  void for_each_column_entry(std::uint64_t i, F&& f) const {
    for (const auto& g : groups_) f(i ^ g.x, diagonal_value(g, i));
  }

 private:
  struct Term {
    std::uint64_t z;
    cplx coeff;  // includes the i^{popcount(x&z)} phase
  };
  struct Group {
    std::uint64_t x = 0;
    std::vector<Term> terms;
    std::vector<cplx> diag;  // empty when not tabulated
  };

  static cplx diagonal_value(const Group& g, std::uint64_t i);
  static void fill_diagonal(const Group& g, std::span<cplx> d);

  int n_qubits_ = 0;
  bool tabulated_ = false;
  QubitOperator source_;
  std::vector<Group> groups_;
};

// Returns op * v; v is not modified.
StateVector apply(const QubitOperator& op, const StateVector& v);
StateVector apply(const CompiledOperator& op, const StateVector& v);

// <v|op|v>.  Throws NumericalError when the imaginary part exceeds
// kExpectationImagTolerance.
inline constexpr double kExpectationImagTolerance = 1e-10;
double expectation(const QubitOperator& op, const StateVector& v);
double expectation(const CompiledOperator& op, const StateVector& v);

}  // namespace adpqe

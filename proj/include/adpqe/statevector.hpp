#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace adpqe {

using cplx = std::complex<double>;

// Occupation bitstring; bit i set means spin orbital (qubit) i is occupied.
struct Determinant {
  std::uint64_t bits = 0;

  int popcount() const { return std::popcount(bits); }
  bool occupied(int mode) const { return ((bits >> mode) & 1u) != 0; }
  int n_alpha() const { return std::popcount(bits & 0x5555555555555555ull); }
  int n_beta() const { return std::popcount(bits & 0xAAAAAAAAAAAAAAAAull); }
  auto operator<=>(const Determinant&) const = default;
};

// Dense amplitudes over all 2^n determinants; index = occupation bitstring.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n_qubits);

  static StateVector basis(int n_qubits, Determinant d);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }

  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }

  double norm() const;
  // <this|other>
  cplx inner(const StateVector& other) const;
  void set_zero();

 private:
  int n_qubits_ = 0;
  std::vector<cplx> amps_;
};

// Largest register the dense simulator accepts.
inline constexpr int kMaxQubits = 24;

}  // namespace adpqe

#pragma once

// Molecular Hamiltonian in second quantization, read from FCIDUMP files.
//
// Spatial orbitals are 0-based internally.  Spin orbitals are interleaved:
// spin orbital 2p is spatial orbital p with alpha spin, 2p+1 is beta.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adpqe {

struct Excitation;

class MolecularHamiltonian {
 public:
  MolecularHamiltonian() = default;
  MolecularHamiltonian(int n_spatial, int n_electrons, int sz2, double core_energy);

  int n_spatial() const { return n_spatial_; }
  int n_electrons() const { return n_electrons_; }
  int sz2() const { return sz2_; }
  int n_spin_orbitals() const { return 2 * n_spatial_; }
  double core_energy() const { return core_energy_; }
  const std::vector<int>& orbital_symmetry() const { return orbsym_; }

  // h_pq over spatial orbitals.
  double one_body(int p, int q) const { return h1_[idx2(p, q)]; }
  // (pq|rs) in chemists' notation over spatial orbitals.
  double two_body(int p, int q, int r, int s) const { return h2_[idx4(p, q, r, s)]; }

  // Spin-orbital integrals.  <PQ|RS> is the physicists' notation integral
  // (pr|qs) with spin selection on (P,R) and (Q,S).
  double so_one_body(int p, int q) const;
  double so_two_body(int p, int q, int r, int s) const;
  double so_antisymmetrized(int p, int q, int r, int s) const {
    return so_two_body(p, q, r, s) - so_two_body(p, q, s, r);
  }

  // Writers used by the parser and by tests that build model Hamiltonians.
  // Both expand the value over the full permutational symmetry.
  void set_one_body(int p, int q, double value);
  void set_two_body(int p, int q, int r, int s, double value);
  void set_core_energy(double e) { core_energy_ = e; }
  void set_orbital_symmetry(std::vector<int> orbsym) { orbsym_ = std::move(orbsym); }

 private:
  std::size_t idx2(int p, int q) const { return static_cast<std::size_t>(p) * n_spatial_ + q; }
  std::size_t idx4(int p, int q, int r, int s) const {
    const std::size_t n = n_spatial_;
    return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
  }

  int n_spatial_ = 0;
  int n_electrons_ = 0;
  int sz2_ = 0;
  double core_energy_ = 0.0;
  std::vector<int> orbsym_;
  std::vector<double> h1_;
  std::vector<double> h2_;
};

struct ReferenceData {
  std::vector<int> occupied;        // ascending spin-orbital indices
  std::vector<int> virtuals;        // ascending spin-orbital indices
  std::vector<double> fock_diagonal;  // one entry per spin orbital
  double hf_energy = 0.0;
  int n_spin_orbitals = 0;

  // Occupation bitstring of the reference determinant.
  std::uint64_t determinant_bits() const;
};

// Largest orbital count accepted; keeps dense integral storage and the
// 64-bit determinant encoding valid.
inline constexpr int kMaxSpatialOrbitals = 16;

// Records differing by more than this at the same symmetry-unique slot are
// treated as conflicting.
inline constexpr double kFcidumpConsistencyTolerance = 1e-10;

MolecularHamiltonian parse_fcidump(std::istream& in);
MolecularHamiltonian parse_fcidump_file(const std::filesystem::path& path);

ReferenceData hf_reference(const MolecularHamiltonian& h);

// Level-shift floor applied to Moller-Plesset denominators (hartree).
inline constexpr double kDenominatorFloor = 1e-6;

struct Denominator {
  double value = 0.0;
  bool clamped = false;  // |D| fell below the floor and was replaced
};

// D = sum of hole Fock energies minus sum of particle Fock energies.
Denominator mp_denominator(const Excitation& exc, const ReferenceData& ref);

}  // namespace adpqe

#include "adpqe/state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "adpqe/errors.hpp"
#include "adpqe/kernels.hpp"

namespace adpqe {

// --- Excitation -------------------------------------------------------------

Excitation::Excitation(std::vector<int> h, std::vector<int> p)
    : holes(std::move(h)), particles(std::move(p)) {
  std::sort(holes.begin(), holes.end());
  std::sort(particles.begin(), particles.end());
  if (holes.size() != particles.size()) {
    throw ConfigurationError("excitation needs equal hole and particle counts");
  }
  if (std::adjacent_find(holes.begin(), holes.end()) != holes.end() ||
      std::adjacent_find(particles.begin(), particles.end()) != particles.end()) {
    throw ConfigurationError("repeated index in excitation " + to_string());
  }
  for (int i : holes) {
    if (i < 0 || i >= 64) throw RangeError("hole index out of range");
  }
  for (int a : particles) {
    if (a < 0 || a >= 64) throw RangeError("particle index out of range");
  }
  if ((hole_mask() & particle_mask()) != 0) {
    throw ConfigurationError("holes and particles overlap in " + to_string());
  }
}

std::uint64_t Excitation::hole_mask() const {
  std::uint64_t m = 0;
  for (int i : holes) m |= std::uint64_t{1} << i;
  return m;
}

std::uint64_t Excitation::particle_mask() const {
  std::uint64_t m = 0;
  for (int a : particles) m |= std::uint64_t{1} << a;
  return m;
}

std::strong_ordering Excitation::operator<=>(const Excitation& other) const {
  if (auto c = rank() <=> other.rank(); c != 0) return c;
  if (auto c = holes <=> other.holes; c != 0) return c;
  return particles <=> other.particles;
}

std::string Excitation::to_string() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < holes.size(); ++k) out << (k ? "," : "") << holes[k];
  out << "->";
  for (std::size_t k = 0; k < particles.size(); ++k) out << (k ? "," : "") << particles[k];
  return out.str();
}

std::size_t ExcitationHash::operator()(const Excitation& e) const noexcept {
  const std::uint64_t a = e.hole_mask();
  const std::uint64_t b = e.particle_mask();
  return std::hash<std::uint64_t>{}(a * 0x9E3779B97F4A7C15ull ^ (b + 0x632BE59BD9B4E019ull));
}

// --- StateVector ------------------------------------------------------------

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw RangeError("statevector of " + std::to_string(n_qubits) + " qubits not supported");
  }
  amps_.assign(std::size_t{1} << n_qubits, cplx{});
}

StateVector StateVector::basis(int n_qubits, Determinant d) {
  StateVector v(n_qubits);
  if (d.bits >= v.size()) throw RangeError("determinant outside register");
  v.amps_[d.bits] = 1.0;
  return v;
}

double StateVector::norm() const { return std::sqrt(kernels::active().norm_sq(amps_)); }

cplx StateVector::inner(const StateVector& other) const {
  if (other.size() != size()) throw ConfigurationError("inner product of mismatched states");
  return kernels::active().inner(amps_, other.amps_);
}

void StateVector::set_zero() { std::fill(amps_.begin(), amps_.end(), cplx{}); }

// --- ladder strings ---------------------------------------------------------

namespace {

thread_local std::uint64_t g_exp_kappa_calls = 0;

inline int below_parity(std::uint64_t bits, int mode) {
  return std::popcount(bits & ((std::uint64_t{1} << mode) - 1)) & 1;
}

// a+_{add[0]} ... a+_{add[k-1]} a_{remove[k-1]} ... a_{remove[0]} applied to d.
std::optional<SignedDeterminant> ladder_string(const std::vector<int>& remove,
                                               const std::vector<int>& add, Determinant d) {
  std::uint64_t bits = d.bits;
  int flips = 0;
  for (auto it = remove.begin(); it != remove.end(); ++it) {
    const int m = *it;
    if (!((bits >> m) & 1u)) return std::nullopt;
    flips += below_parity(bits, m);
    bits &= ~(std::uint64_t{1} << m);
  }
  for (auto it = add.rbegin(); it != add.rend(); ++it) {
    const int m = *it;
    if ((bits >> m) & 1u) return std::nullopt;
    flips += below_parity(bits, m);
    bits |= std::uint64_t{1} << m;
  }
  return SignedDeterminant{Determinant{bits}, (flips & 1) ? -1 : 1};
}

void check_fits(const Excitation& exc, const StateVector& v) {
  const std::uint64_t all = exc.hole_mask() | exc.particle_mask();
  if (v.n_qubits() < 64 && (all >> v.n_qubits()) != 0) {
    throw RangeError("excitation " + exc.to_string() + " outside " +
                     std::to_string(v.n_qubits()) + "-qubit register");
  }
}

}  // namespace

// tau = a+_{p1} ... a+_{pk} a_{hk} ... a_{h1}: a_{h1} acts first.
std::optional<SignedDeterminant> apply_tau(const Excitation& exc, Determinant d) {
  return ladder_string(exc.holes, exc.particles, d);
}

// tau+ = a+_{h1} ... a+_{hk} a_{pk} ... a_{p1}: a_{p1} acts first.
std::optional<SignedDeterminant> apply_tau_dagger(const Excitation& exc, Determinant d) {
  return ladder_string(exc.particles, exc.holes, d);
}

void apply_exp_kappa_inplace(const AnsatzLayer& layer, StateVector& v) {
  ++g_exp_kappa_calls;
  const Excitation& exc = layer.excitation;
  check_fits(exc, v);
  if (!std::isfinite(layer.theta)) throw NumericalError("non-finite ansatz angle");
  if (layer.theta == 0.0 || exc.rank() == 0) return;

  const double c = std::cos(layer.theta);
  const double s = std::sin(layer.theta);
  const std::uint64_t holes = exc.hole_mask();
  const std::uint64_t flip = holes | exc.particle_mask();
  const std::uint64_t full =
      v.n_qubits() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << v.n_qubits()) - 1;
  const std::uint64_t free = full & ~flip;

  // Every determinant with all holes filled and all particles empty pairs
  // with tau|d>; determinants outside such pairs are untouched.
  std::uint64_t sub = 0;
  do {
    const Determinant d{sub | holes};
    const auto t = apply_tau(exc, d);
    const double sg = t->sign;
    const std::uint64_t a = d.bits;
    const std::uint64_t b = a ^ flip;
    const cplx va = v[a];
    const cplx vb = v[b];
    v[a] = c * va - sg * s * vb;
    v[b] = c * vb + sg * s * va;
    sub = (sub - free) & free;
  } while (sub != 0);
}

StateVector apply_exp_kappa(const AnsatzLayer& layer, const StateVector& v) {
  StateVector out = v;
  apply_exp_kappa_inplace(layer, out);
  return out;
}

StateVector apply_ansatz(std::span<const AnsatzLayer> layers, const StateVector& v) {
  StateVector out = v;
  for (const auto& layer : layers) apply_exp_kappa_inplace(layer, out);
  return out;
}

StateVector apply_ansatz_adjoint(std::span<const AnsatzLayer> layers, const StateVector& v) {
  StateVector out = v;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    apply_exp_kappa_inplace(AnsatzLayer{it->excitation, -it->theta}, out);
  }
  return out;
}

StateVector apply_kappa(const Excitation& exc, const StateVector& v) {
  check_fits(exc, v);
  StateVector out(v.n_qubits());
  const std::uint64_t holes = exc.hole_mask();
  const std::uint64_t flip = holes | exc.particle_mask();
  const std::uint64_t full =
      v.n_qubits() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << v.n_qubits()) - 1;
  const std::uint64_t free = full & ~flip;
  std::uint64_t sub = 0;
  do {
    const std::uint64_t a = sub | holes;
    const std::uint64_t b = a ^ flip;
    const double sg = apply_tau(exc, Determinant{a})->sign;
    // tau|a> = sg|b>, tau+|b> = sg|a>
    out[b] += sg * v[a];
    out[a] -= sg * v[b];
    sub = (sub - free) & free;
  } while (sub != 0);
  return out;
}

std::uint64_t exp_kappa_count() { return g_exp_kappa_calls; }

}  // namespace adpqe

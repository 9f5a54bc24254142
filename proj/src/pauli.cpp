#include "adpqe/pauli.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "adpqe/errors.hpp"
#include "adpqe/hamiltonian.hpp"
#include "adpqe/kernels.hpp"

namespace adpqe {
namespace {

constexpr cplx kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

cplx i_power(int k) { return kIPowers[((k % 4) + 4) % 4]; }

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

void check_qubits(int n_qubits) {
  if (n_qubits < 0 || n_qubits > 64) {
    throw RangeError("qubit count " + std::to_string(n_qubits) + " outside [0, 64]");
  }
}

}  // namespace

char PauliString::letter(int qubit) const {
  const bool xb = (x >> qubit) & 1u;
  const bool zb = (z >> qubit) & 1u;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliString::word(int n_qubits) const {
  std::string w;
  w.reserve(n_qubits);
  for (int q = 0; q < n_qubits; ++q) w.push_back(letter(q));
  return w;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  // X^xa Z^za X^xb Z^zb = (-1)^{|za & xb|} X^{xa^xb} Z^{za^zb}
  const PauliString c{a.x ^ b.x, a.z ^ b.z};
  const int k = std::popcount(a.x & a.z) + std::popcount(b.x & b.z) +
                2 * std::popcount(a.z & b.x) - std::popcount(c.x & c.z);
  return {i_power(k), c};
}

QubitOperator QubitOperator::identity(int n_qubits, cplx coeff) {
  return single(n_qubits, PauliString{}, coeff);
}

QubitOperator QubitOperator::single(int n_qubits, PauliString s, cplx coeff) {
  check_qubits(n_qubits);
  QubitOperator op(n_qubits);
  op.add(s, coeff);
  return op;
}

cplx QubitOperator::coefficient(const PauliString& s) const {
  const auto it = terms_.find(s);
  return it == terms_.end() ? cplx{} : it->second;
}

void QubitOperator::add(const PauliString& s, cplx coeff) {
  if (n_qubits_ < 64) {
    const std::uint64_t outside = ~((std::uint64_t{1} << n_qubits_) - 1);
    if (((s.x | s.z) & outside) != 0) {
      throw RangeError("Pauli string acts outside " + std::to_string(n_qubits_) + " qubits");
    }
  }
  terms_[s] += coeff;
}

QubitOperator& QubitOperator::operator+=(const QubitOperator& other) {
  if (other.n_qubits_ != n_qubits_) throw ConfigurationError("qubit count mismatch in sum");
  for (const auto& [s, c] : other.terms_) terms_[s] += c;
  return *this;
}

QubitOperator& QubitOperator::operator-=(const QubitOperator& other) {
  if (other.n_qubits_ != n_qubits_) throw ConfigurationError("qubit count mismatch in sum");
  for (const auto& [s, c] : other.terms_) terms_[s] -= c;
  return *this;
}

QubitOperator& QubitOperator::operator*=(cplx scale) {
  for (auto& [s, c] : terms_) c *= scale;
  return *this;
}

QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
  if (a.n_qubits_ != b.n_qubits_) throw ConfigurationError("qubit count mismatch in product");
  QubitOperator out(a.n_qubits_);
  for (const auto& [sa, ca] : a.terms_) {
    for (const auto& [sb, cb] : b.terms_) {
      const auto [phase, s] = multiply(sa, sb);
      out.terms_[s] += phase * ca * cb;
    }
  }
  return out;
}

QubitOperator QubitOperator::adjoint() const {
  QubitOperator out(n_qubits_);
  for (const auto& [s, c] : terms_) out.terms_[s] = std::conj(c);
  return out;
}

QubitOperator& QubitOperator::simplify(double tol) {
  std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
  return *this;
}

bool QubitOperator::is_hermitian(double tol) const {
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

double QubitOperator::sum_abs_coefficients(bool include_identity) const {
  double total = 0.0;
  for (const auto& [s, c] : terms_) {
    if (!include_identity && s.x == 0 && s.z == 0) continue;
    total += std::abs(c);
  }
  return total;
}

std::string QubitOperator::dump() const {
  std::ostringstream out;
  out.precision(15);
  for (const auto& [s, c] : terms_) {
    out << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "j) " << s.word(n_qubits_)
        << '\n';
  }
  return out.str();
}

QubitOperator jw_creation(int mode, int n_qubits) {
  if (mode < 0 || mode >= n_qubits) throw RangeError("mode out of range");
  // a+_p = 1/2 (X_p - i Y_p) Z_{<p}
  const std::uint64_t lower = (std::uint64_t{1} << mode) - 1;
  const std::uint64_t bit = std::uint64_t{1} << mode;
  QubitOperator z_string = QubitOperator::single(n_qubits, PauliString{0, lower}, 1.0);
  QubitOperator local(n_qubits);
  local.add(PauliString{bit, 0}, 0.5);
  local.add(PauliString{bit, bit}, cplx{0.0, -0.5});
  return local * z_string;
}

QubitOperator jw_annihilation(int mode, int n_qubits) {
  return jw_creation(mode, n_qubits).adjoint();
}

QubitOperator jordan_wigner(const MolecularHamiltonian& h) {
  const int n = h.n_spin_orbitals();
  std::vector<QubitOperator> cre, ann;
  for (int p = 0; p < n; ++p) {
    cre.push_back(jw_creation(p, n));
    ann.push_back(jw_annihilation(p, n));
  }

  QubitOperator op = QubitOperator::identity(n, h.core_energy());
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double v = h.so_one_body(p, q);
      if (v == 0.0) continue;
      QubitOperator t = cre[p] * ann[q];
      t *= v;
      op += t;
    }
  }
  // Pair products a+_P a+_Q and a_S a_R are reused across the quartic sum.
  std::vector<QubitOperator> cc(n * n), aa(n * n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      cc[p * n + q] = cre[p] * cre[q];
      aa[p * n + q] = ann[p] * ann[q];
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      QubitOperator acc(n);
      bool any = false;
      for (int r = 0; r < n; ++r) {
        for (int s = 0; s < n; ++s) {
          if (r == s) continue;
          const double v = h.so_two_body(p, q, r, s);
          if (v == 0.0) continue;
          // a_S a_R
          QubitOperator t = aa[s * n + r];
          t *= 0.5 * v;
          acc += t;
          any = true;
        }
      }
      if (any) op += cc[p * n + q] * acc;
    }
  }
  op.simplify();
  // Real integrals give real coefficients; drop rounding residue in the
  // imaginary parts so the operator is exactly Hermitian.
  QubitOperator clean(n);
  for (const auto& [s, c] : op.terms()) {
    if (std::abs(c.imag()) > 1e-10) {
      throw NumericalError("Jordan-Wigner Hamiltonian has complex coefficient on " + s.word(n));
    }
    clean.add(s, c.real());
  }
  clean.simplify();
  return clean;
}

// ---------------------------------------------------------------------------

CompiledOperator::CompiledOperator(const QubitOperator& op, std::size_t table_budget_bytes)
    : n_qubits_(op.n_qubits()), source_(op) {
  if (n_qubits_ > kMaxQubits) {
    throw RangeError("operator on " + std::to_string(n_qubits_) +
                     " qubits exceeds the dense simulator limit");
  }
  std::map<std::uint64_t, std::size_t> slot;
  for (const auto& [s, c] : op.terms()) {
    auto [it, inserted] = slot.emplace(s.x, groups_.size());
    if (inserted) groups_.push_back(Group{s.x, {}, {}});
    groups_[it->second].terms.push_back({s.z, c * i_power(std::popcount(s.x & s.z))});
  }
  const std::size_t dim = std::size_t{1} << n_qubits_;
  tabulated_ = groups_.size() * dim * sizeof(cplx) <= table_budget_bytes;
  if (tabulated_) {
    for (auto& g : groups_) {
      g.diag.assign(dim, cplx{});
      fill_diagonal(g, g.diag);
    }
  }
}

cplx CompiledOperator::diagonal_value(const Group& g, std::uint64_t i) {
  if (!g.diag.empty()) return g.diag[i];
  cplx v{};
  for (const auto& t : g.terms) v += parity(i & t.z) ? -t.coeff : t.coeff;
  return v;
}

void CompiledOperator::fill_diagonal(const Group& g, std::span<cplx> d) {
  std::fill(d.begin(), d.end(), cplx{});
  for (const auto& t : g.terms) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] += parity(i & t.z) ? -t.coeff : t.coeff;
    }
  }
}

void CompiledOperator::apply_add(std::span<const cplx> in, std::span<cplx> out) const {
  const std::size_t dim = std::size_t{1} << n_qubits_;
  if (in.size() != dim || out.size() != dim) {
    throw ConfigurationError("state dimension " + std::to_string(in.size()) +
                             " does not match operator on " + std::to_string(n_qubits_) +
                             " qubits");
  }
  const auto& k = kernels::active();
  std::vector<cplx> scratch;
  for (const auto& g : groups_) {
    std::span<const cplx> diag = g.diag;
    if (!tabulated_) {
      scratch.resize(dim);
      fill_diagonal(g, scratch);
      diag = scratch;
    }
    k.xor_diag_accumulate(out, diag, in, g.x);
  }
}

StateVector CompiledOperator::apply(const StateVector& v) const {
  if (v.n_qubits() != n_qubits_) {
    throw ConfigurationError("state on " + std::to_string(v.n_qubits()) +
                             " qubits, operator on " + std::to_string(n_qubits_));
  }
  StateVector out(n_qubits_);
  apply_add(v.amplitudes(), out.amplitudes());
  return out;
}

StateVector apply(const QubitOperator& op, const StateVector& v) {
  return CompiledOperator(op).apply(v);
}

StateVector apply(const CompiledOperator& op, const StateVector& v) { return op.apply(v); }

namespace {

double real_expectation(const StateVector& v, const StateVector& opv) {
  const cplx e = v.inner(opv);
  if (std::abs(e.imag()) > kExpectationImagTolerance) {
    std::ostringstream msg;
    msg << "expectation value has imaginary part " << e.imag()
        << "; operator is not Hermitian";
    throw NumericalError(msg.str());
  }
  return e.real();
}

}  // namespace

double expectation(const QubitOperator& op, const StateVector& v) {
  return real_expectation(v, apply(op, v));
}

double expectation(const CompiledOperator& op, const StateVector& v) {
  return real_expectation(v, op.apply(v));
}

}  // namespace adpqe

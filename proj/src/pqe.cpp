#include "adpqe/pqe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "adpqe/errors.hpp"
#include "adpqe/problem.hpp"

namespace adpqe {

Problem prepare_problem(const MolecularHamiltonian& h) {
  Problem p;
  p.hamiltonian = h;
  p.reference = hf_reference(h);
  p.qubit_hamiltonian = jordan_wigner(h);
  p.compiled = CompiledOperator(p.qubit_hamiltonian);
  return p;
}

double ResidualVector::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void MicroIterConfig::validate() const {
  if (!(residual_tolerance > 0.0)) throw ConfigurationError("residual tolerance must be positive");
  if (max_iterations < 0) throw ConfigurationError("max_iterations must be non-negative");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigurationError("damping must be in (0, 1]");
  if (divergence_window < 1) throw ConfigurationError("divergence window must be >= 1");
}

namespace {

StateVector reference_state(const CompiledOperator& h, const ReferenceData& ref) {
  return StateVector::basis(h.n_qubits(), Determinant{ref.determinant_bits()});
}

SignedDeterminant connected(const Excitation& exc, const ReferenceData& ref) {
  const auto t = apply_tau(exc, Determinant{ref.determinant_bits()});
  if (!t) throw ConfigurationError("excitation " + exc.to_string() + " is not reference-connected");
  return *t;
}

double checked_real(cplx z, const Excitation& exc) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw NumericalError("non-finite residual for " + exc.to_string());
  }
  if (std::abs(z.imag()) > kResidualImagTolerance) {
    std::ostringstream msg;
    msg << "residual for " << exc.to_string() << " has imaginary part " << z.imag();
    throw NumericalError(msg.str());
  }
  return z.real();
}

}  // namespace

StateVector transformed_reference(std::span<const AnsatzLayer> layers, const CompiledOperator& h,
                                  const ReferenceData& ref) {
  const StateVector psi = apply_ansatz(layers, reference_state(h, ref));
  return apply_ansatz_adjoint(layers, h.apply(psi));
}

double residual_direct(std::span<const AnsatzLayer> layers, const Excitation& exc,
                       const CompiledOperator& h, const ReferenceData& ref) {
  const SignedDeterminant mu = connected(exc, ref);
  const StateVector hbar = transformed_reference(layers, h, ref);
  return checked_real(static_cast<double>(mu.sign) * project(mu.det, hbar), exc);
}

double residual_diagonal_form(std::span<const AnsatzLayer> layers, const Excitation& exc,
                              const CompiledOperator& h, const ReferenceData& ref) {
  const SignedDeterminant mu = connected(exc, ref);
  const StateVector phi0 = reference_state(h, ref);
  StateVector phi_mu(h.n_qubits());
  phi_mu[mu.det.bits] = static_cast<double>(mu.sign);

  const StateVector omega =
      apply_exp_kappa(AnsatzLayer{exc, std::numbers::pi / 4.0}, phi0);
  // <x| U+ H U |x> = expectation of H on U|x>
  const double e_omega = expectation(h, apply_ansatz(layers, omega));
  const double e_mu = expectation(h, apply_ansatz(layers, phi_mu));
  const double e_0 = expectation(h, apply_ansatz(layers, phi0));
  const double r = e_omega - 0.5 * e_mu - 0.5 * e_0;
  if (!std::isfinite(r)) throw NumericalError("non-finite residual for " + exc.to_string());
  return r;
}

std::vector<double> residuals(std::span<const AnsatzLayer> layers,
                              std::span<const Excitation> excs, const CompiledOperator& h,
                              const ReferenceData& ref) {
  const StateVector hbar = transformed_reference(layers, h, ref);
  std::vector<double> out;
  out.reserve(excs.size());
  for (const auto& e : excs) {
    const SignedDeterminant mu = connected(e, ref);
    out.push_back(checked_real(static_cast<double>(mu.sign) * project(mu.det, hbar), e));
  }
  return out;
}

double ansatz_energy(std::span<const AnsatzLayer> layers, const CompiledOperator& h,
                     const ReferenceData& ref) {
  return expectation(h, apply_ansatz(layers, reference_state(h, ref)));
}

MicroIterResult micro_iterate(std::vector<AnsatzLayer> layers, std::span<const Excitation> active,
                              const CompiledOperator& h, const ReferenceData& ref,
                              const MicroIterConfig& cfg) {
  cfg.validate();
  std::map<Excitation, std::size_t> position;
  for (std::size_t i = 0; i < layers.size(); ++i) position.emplace(layers[i].excitation, i);

  std::vector<std::size_t> slot;
  std::vector<SignedDeterminant> target;
  std::vector<double> denom;
  for (const auto& e : active) {
    const auto it = position.find(e);
    if (it == position.end()) {
      throw ConfigurationError("active excitation " + e.to_string() + " has no ansatz layer");
    }
    slot.push_back(it->second);
    target.push_back(connected(e, ref));
    denom.push_back(mp_denominator(e, ref).value);
  }

  MicroIterResult result;
  double damping = cfg.damping;
  double previous = std::numeric_limits<double>::infinity();
  int growth = 0;
  const Determinant phi0{ref.determinant_bits()};
  std::vector<double> r(active.size());

  for (int sweep = 0;; ++sweep) {
    const StateVector hbar = transformed_reference(layers, h, ref);
    const double energy = checked_real(project(phi0, hbar), Excitation{});
    double max_r = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
      r[k] = checked_real(static_cast<double>(target[k].sign) * project(target[k].det, hbar),
                          active[k]);
      max_r = std::max(max_r, std::abs(r[k]));
    }
    result.residual_evaluations += active.size();
    result.history.push_back({sweep, max_r, energy, damping});
    result.energy = energy;

    if (max_r < cfg.residual_tolerance) {
      result.converged = true;
      break;
    }
    if (result.iterations >= cfg.max_iterations) break;

    growth = max_r > previous ? growth + 1 : 0;
    if (growth >= cfg.divergence_window && !result.damping_reduced) {
      damping *= 0.5;
      result.damping_reduced = true;
      growth = 0;
    }
    previous = max_r;

    for (std::size_t k = 0; k < active.size(); ++k) {
      layers[slot[k]].theta += damping * r[k] / denom[k];
    }
    ++result.iterations;
  }

  result.residuals.excitations.assign(active.begin(), active.end());
  result.residuals.values = r;
  result.residuals.layers = layers;
  result.layers = std::move(layers);
  return result;
}

void write_history_csv(std::ostream& out, std::span<const SweepRecord> history) {
  out << "sweep,max_residual,energy,damping\n";
  const auto old = out.precision(12);
  for (const auto& rec : history) {
    out << rec.sweep << ',' << rec.max_residual << ',' << rec.energy << ',' << rec.damping << '\n';
  }
  out.precision(old);
}

}  // namespace adpqe

#include "adpqe/asc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "adpqe/errors.hpp"

namespace adpqe {
namespace {

StateVector reference_state(const CompiledOperator& h, const ReferenceData& ref) {
  return StateVector::basis(h.n_qubits(), Determinant{ref.determinant_bits()});
}

}  // namespace

AuxiliarySolution map_auxiliary(const SPQEResult& spqe, const CompiledOperator& h,
                                const ReferenceData& ref, bool recompute) {
  std::map<Excitation, double> reusable;
  if (!recompute) {
    const auto& fr = spqe.final_residuals;
    for (std::size_t i = 0; i < fr.excitations.size(); ++i) {
      reusable.emplace(fr.excitations[i], fr.values[i]);
    }
  }

  AuxiliarySolution aux;
  std::vector<std::size_t> missing;
  for (const auto& e : spqe.auxiliary) {
    AuxiliaryEntry entry;
    entry.excitation = e;
    const Denominator d = mp_denominator(e, ref);
    entry.denominator = d.value;
    entry.clamped = d.clamped;
    if (const auto it = reusable.find(e); it != reusable.end()) {
      entry.residual = it->second;
      entry.provenance = Provenance::reused_final_residuals;
    } else {
      entry.provenance = Provenance::freshly_computed;
      missing.push_back(aux.entries.size());
    }
    aux.entries.push_back(std::move(entry));
  }

  if (!missing.empty()) {
    std::vector<Excitation> excs;
    for (std::size_t i : missing) excs.push_back(aux.entries[i].excitation);
    const std::vector<double> r = residuals(spqe.principal, excs, h, ref);
    for (std::size_t k = 0; k < missing.size(); ++k) aux.entries[missing[k]].residual = r[k];
  }
  for (auto& entry : aux.entries) {
    entry.theta = entry.residual / entry.denominator;
    if (!std::isfinite(entry.theta)) {
      throw NumericalError("non-finite auxiliary amplitude for " + entry.excitation.to_string());
    }
  }
  return aux;
}

namespace {

// <0|H k k|0> - 2 <0|k H k|0> + <0|k k H|0> with k+ = -k:
//   = <0|H b> + <b|H 0> + 2 <a|H a>,  a = k|0>, b = k a.
double double_commutator(const Excitation& exc, const CompiledOperator& h,
                         const StateVector& phi0, const StateVector& h0) {
  const StateVector a = apply_kappa(exc, phi0);
  const StateVector b = apply_kappa(exc, a);
  const StateVector ha = h.apply(a);
  const cplx w = h0.inner(b) + b.inner(h0) + 2.0 * a.inner(ha);
  if (std::abs(w.imag()) > kExpectationImagTolerance) {
    throw NumericalError("double commutator has imaginary part for " + exc.to_string());
  }
  return w.real();
}

}  // namespace

double double_commutator_expectation(const Excitation& exc, const CompiledOperator& h,
                                     const ReferenceData& ref) {
  const StateVector phi0 = reference_state(h, ref);
  return double_commutator(exc, h, phi0, h.apply(phi0));
}

double term1_commutator(const SPQEResult& spqe, const Excitation& exc, const CompiledOperator& h,
                        const ReferenceData& ref) {
  // <0|Hbar k|0> - <0|k Hbar|0> = <Hbar 0|a> + <a|Hbar 0>
  const StateVector hbar0 = transformed_reference(spqe.principal, h, ref);
  const StateVector a = apply_kappa(exc, reference_state(h, ref));
  const cplx v = hbar0.inner(a) + a.inner(hbar0);
  if (std::abs(v.imag()) > kExpectationImagTolerance) {
    throw NumericalError("commutator expectation has imaginary part for " + exc.to_string());
  }
  return v.real();
}

ASCEnergies energy_scheme1(const SPQEResult& spqe, const AuxiliarySolution& aux,
                           const ReferenceData&) {
  ASCEnergies e;
  e.e_spqe = spqe.e_spqe;
  double sum = 0.0;
  for (const auto& entry : aux.entries) sum += entry.theta * entry.theta * entry.denominator;
  e.correction1 = sum;
  e.e_scheme1 = spqe.e_spqe + sum;
  return e;
}

ASCEnergies energy_scheme2(const SPQEResult& spqe, const AuxiliarySolution& aux,
                           const CompiledOperator& h, const ReferenceData& ref) {
  ASCEnergies e;
  e.e_spqe = spqe.e_spqe;
  double first = 0.0;
  double second = 0.0;
  e.double_commutators.reserve(aux.entries.size());
  const StateVector phi0 = reference_state(h, ref);
  const StateVector h0 = h.apply(phi0);
  for (const auto& entry : aux.entries) {
    const double t2 = entry.theta * entry.theta;
    const double w = double_commutator(entry.excitation, h, phi0, h0);
    e.double_commutators.push_back(w);
    first += t2 * entry.denominator;
    second += t2 * w;
  }
  e.term1 = 2.0 * first;
  e.term2_scheme2 = 0.5 * second;
  e.e_scheme2 = spqe.e_spqe + e.term1 + e.term2_scheme2;
  return e;
}

ASCEnergies asc_energies(const SPQEResult& spqe, const AuxiliarySolution& aux,
                         const CompiledOperator& h, const ReferenceData& ref) {
  ASCEnergies e = energy_scheme2(spqe, aux, h, ref);
  const ASCEnergies e1 = energy_scheme1(spqe, aux, ref);
  e.e_scheme1 = e1.e_scheme1;
  e.correction1 = e1.correction1;
  return e;
}

double term2_full_double_sum(const AuxiliarySolution& aux, const CompiledOperator& h,
                             const ReferenceData& ref) {
  // sum_ab t_a t_b <[[H,k_a],k_b]> = <[[H,K],K]> with K = sum_a t_a k_a.
  const StateVector phi0 = reference_state(h, ref);
  StateVector a(h.n_qubits());
  for (const auto& entry : aux.entries) {
    const StateVector ka = apply_kappa(entry.excitation, phi0);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += entry.theta * ka[i];
  }
  StateVector b(h.n_qubits());
  for (const auto& entry : aux.entries) {
    const StateVector kb = apply_kappa(entry.excitation, a);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += entry.theta * kb[i];
  }
  const StateVector h0 = h.apply(phi0);
  const StateVector ha = h.apply(a);
  const cplx w = h0.inner(b) + b.inner(h0) + 2.0 * a.inner(ha);
  return 0.5 * w.real();
}

nlohmann::json asc_to_json(const AuxiliarySolution& aux, const ASCEnergies& e) {
  // Histogram of log10 |theta_A| in unit-width bins.
  std::map<int, int> histogram;
  std::size_t reused = 0;
  std::size_t clamped = 0;
  for (const auto& entry : aux.entries) {
    const double t = std::abs(entry.theta);
    const int bin = t > 0.0 ? static_cast<int>(std::floor(std::log10(t))) : -99;
    ++histogram[bin];
    reused += entry.provenance == Provenance::reused_final_residuals;
    clamped += entry.clamped;
  }
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [bin, count] : histogram) {
    hist.push_back({{"log10_abs_theta_floor", bin}, {"count", count}});
  }
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); };
  return {{"n_a", aux.entries.size()},
          {"reused_from_final_residuals", reused},
          {"clamped_denominators", clamped},
          {"theta_histogram", hist},
          {"e_spqe", num(e.e_spqe)},
          {"e_scheme1", num(e.e_scheme1)},
          {"e_scheme2", num(e.e_scheme2)},
          {"correction1", num(e.correction1)},
          {"term1", num(e.term1)},
          {"term2_scheme2", num(e.term2_scheme2)}};
}

}  // namespace adpqe

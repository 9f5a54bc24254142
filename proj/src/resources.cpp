#include "adpqe/resources.hpp"

#include <cmath>

#include "adpqe/errors.hpp"

namespace adpqe {

QubitOperator kappa_generator(const Excitation& exc) {
  int n = 0;
  for (int p : exc.holes) n = std::max(n, p + 1);
  for (int p : exc.particles) n = std::max(n, p + 1);
  QubitOperator tau = QubitOperator::identity(n);
  for (int p : exc.particles) tau = tau * jw_creation(p, n);
  for (auto it = exc.holes.rbegin(); it != exc.holes.rend(); ++it) {
    tau = tau * jw_annihilation(*it, n);
  }
  QubitOperator kappa = tau - tau.adjoint();
  kappa.simplify();
  return kappa;
}

int cnot_count(const Excitation& exc) {
  if (exc.rank() == 0) return 0;
  const QubitOperator kappa = kappa_generator(exc);
  int count = 0;
  for (const auto& [pauli, coefficient] : kappa.terms()) {
    count += 2 * (pauli.weight() - 1);
  }
  return count;
}

long long cnot_count(std::span<const AnsatzLayer> layers) {
  long long total = 0;
  for (const auto& layer : layers) total += cnot_count(layer.excitation);
  return total;
}

ResourceEstimate measurement_bounds(const SPQEResult& result, const MeasurementInputs& in) {
  if (!(in.epsilon > 0.0)) throw ConfigurationError("epsilon must be positive");
  ResourceEstimate r;
  r.cnot_count = cnot_count(result.principal);
  r.parameter_count = result.n_principal();
  r.n_auxiliary = result.n_auxiliary();
  r.residual_evaluations = in.n_res;
  r.epsilon = in.epsilon;
  r.sum_abs_h = in.sum_abs_h;
  const double per_term = in.sum_abs_h * in.sum_abs_h / (in.epsilon * in.epsilon);
  r.m_spqe_bound = static_cast<double>(in.n_res) * 3.0 *
                   static_cast<double>(r.parameter_count) * per_term;
  r.m_scheme2_bound = static_cast<double>(r.n_auxiliary) * per_term;
  r.m_total = r.m_spqe_bound + r.m_scheme2_bound;
  const double step = result.config.dt * result.config.omega;
  r.macro_measurement_scale =
      step > 0.0 ? 1.0 / (step * step) : std::numeric_limits<double>::infinity();
  return r;
}

ResourceEstimate estimate_resources(const SPQEResult& result, const QubitOperator& h,
                                    double epsilon) {
  return measurement_bounds(
      result, {epsilon, h.sum_abs_coefficients(false), result.residual_evaluations});
}

nlohmann::json resources_to_json(const ResourceEstimate& r) {
  nlohmann::json j;
  j["cnot_count"] = r.cnot_count;
  j["cnot_convention"] = r.convention;
  j["parameter_count"] = r.parameter_count;
  j["n_auxiliary"] = r.n_auxiliary;
  j["residual_evaluations"] = r.residual_evaluations;
  j["epsilon"] = r.epsilon;
  j["sum_abs_h"] = r.sum_abs_h;
  j["m_spqe_bound"] = r.m_spqe_bound;
  j["m_scheme2_bound"] = r.m_scheme2_bound;
  j["m_total"] = r.m_total;
  if (std::isfinite(r.macro_measurement_scale)) {
    j["macro_measurement_scale"] = r.macro_measurement_scale;
  } else {
    j["macro_measurement_scale"] = nullptr;
  }
  return j;
}

}  // namespace adpqe

#include "adpqe/spqe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "adpqe/errors.hpp"

namespace adpqe {

void SPQEConfig::validate() const {
  if (!(omega > 0.0)) throw ConfigurationError("omega must be positive");
  if (!(dt > 0.0)) throw ConfigurationError("dt must be positive");
  if (rank_cap < 1 || rank_cap > kMaxPoolRank) throw RangeError("pool rank out of range");
  if (selection_rank_cap < 0 || selection_rank_cap > rank_cap) {
    throw ConfigurationError("selection rank must lie in [0, pool rank]");
  }
  if (max_macro_iterations < 1) throw ConfigurationError("max_macro_iterations must be >= 1");
  micro.validate();
}

std::vector<double> residual_state_coefficients(std::span<const AnsatzLayer> layers,
                                                const CompiledOperator& h, double dt,
                                                const OperatorPool& pool,
                                                const ReferenceData& ref) {
  if (!(dt > 0.0)) throw ConfigurationError("dt must be positive");
  StateVector r = transformed_reference(layers, h, ref);
  for (auto& a : r.amplitudes()) a *= cplx{0.0, dt};
  r[ref.determinant_bits()] += 1.0;
  std::vector<double> c(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) c[i] = std::abs(project(pool.target(i).det, r));
  return c;
}

Selection select_operators(const ResidualCoefficients& coefficients, double omega, double dt) {
  if (!(omega >= 0.0)) throw ConfigurationError("omega must be non-negative");
  if (!(dt > 0.0)) throw ConfigurationError("dt must be positive");
  const auto& mags = coefficients.magnitudes;
  if (mags.size() != coefficients.excitations.size()) {
    throw ConfigurationError("coefficient and excitation lists differ in length");
  }
  std::vector<std::size_t> order(mags.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mags[a] < mags[b]; });

  const double budget = omega * omega;
  double cumulative = 0.0;
  std::size_t cut = 0;
  for (; cut < order.size(); ++cut) {
    const double r = mags[order[cut]] / dt;
    if (cumulative + r * r > budget) break;
    cumulative += r * r;
  }

  Selection sel;
  for (std::size_t k = 0; k < cut; ++k) sel.excluded.push_back(coefficients.excitations[order[k]]);
  std::vector<std::size_t> chosen(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
  std::stable_sort(chosen.begin(), chosen.end(),
                   [&](std::size_t a, std::size_t b) { return mags[a] > mags[b]; });
  for (std::size_t i : chosen) sel.selected.push_back(coefficients.excitations[i]);
  return sel;
}

SPQEResult run_spqe(const Problem& problem, const SPQEConfig& cfg) {
  cfg.validate();
  const auto& ref = problem.reference;
  const auto& h = problem.compiled;

  SPQEResult result;
  result.config = cfg;
  result.reference = ref;
  result.pool = generate_pool(ref, cfg.rank_cap);
  const OperatorPool& pool = result.pool;
  result.e_hf = ref.hf_energy;

  const int sel_rank = cfg.effective_selection_rank();
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].rank() <= sel_rank) candidates.push_back(i);
  }

  std::vector<AnsatzLayer> layers;
  std::set<Excitation> present;
  double energy = ansatz_energy(layers, h, ref);

  for (int k = 1; k <= cfg.max_macro_iterations; ++k) {
    const std::vector<double> all = residual_state_coefficients(layers, h, cfg.dt, pool, ref);
    ResidualCoefficients coeffs;
    double norm_sq = 0.0;
    for (std::size_t i : candidates) {
      coeffs.excitations.push_back(pool[i]);
      coeffs.magnitudes.push_back(all[i]);
      norm_sq += (all[i] / cfg.dt) * (all[i] / cfg.dt);
    }
    const Selection sel = select_operators(coeffs, cfg.omega, cfg.dt);

    MacroIterationRecord rec;
    rec.iteration = k;
    rec.n_selected = sel.selected.size();
    rec.n_excluded = sel.excluded.size();
    rec.residual_norm = std::sqrt(norm_sq);
    for (const auto& e : sel.selected) {
      if (present.insert(e).second) {
        rec.added.push_back(e);
        layers.push_back(AnsatzLayer{e, 0.0});
      }
    }
    if (rec.added.empty()) {
      rec.energy = energy;
      result.macro_history.push_back(std::move(rec));
      result.macro_converged = true;
      break;
    }

    std::vector<Excitation> active;
    active.reserve(layers.size());
    for (const auto& l : layers) active.push_back(l.excitation);
    MicroIterResult micro = micro_iterate(std::move(layers), active, h, ref, cfg.micro);
    layers = std::move(micro.layers);
    energy = micro.energy;
    result.residual_evaluations += micro.residual_evaluations;
    result.micro_converged = result.micro_converged && micro.converged;
    rec.micro_iterations = micro.iterations;
    rec.micro_converged = micro.converged;
    rec.energy = energy;
    result.macro_history.push_back(std::move(rec));
  }

  result.principal = layers;
  std::vector<Excitation> chosen;
  for (const auto& l : layers) chosen.push_back(l.excitation);
  result.auxiliary = complement(pool, chosen);

  result.final_residuals.excitations = pool.entries();
  result.final_residuals.values = residuals(layers, pool.entries(), h, ref);
  result.final_residuals.layers = layers;
  result.e_spqe = ansatz_energy(layers, h, ref);

  std::vector<AnsatzLayer> sorted = layers;
  std::stable_sort(sorted.begin(), sorted.end(), [](const AnsatzLayer& a, const AnsatzLayer& b) {
    return std::abs(a.theta) > std::abs(b.theta);
  });
  result.e_descending_order = ansatz_energy(sorted, h, ref);
  return result;
}

SPQEResult run_spqe(const MolecularHamiltonian& h, const SPQEConfig& cfg) {
  return run_spqe(prepare_problem(h), cfg);
}

nlohmann::json config_to_json(const SPQEConfig& cfg) {
  return {{"omega", cfg.omega},
          {"dt", cfg.dt},
          {"rank_cap", cfg.rank_cap},
          {"selection_rank_cap", cfg.effective_selection_rank()},
          {"max_macro_iterations", cfg.max_macro_iterations},
          {"micro",
           {{"residual_tolerance", cfg.micro.residual_tolerance},
            {"max_iterations", cfg.micro.max_iterations},
            {"damping", cfg.micro.damping}}}};
}

nlohmann::json spqe_to_json(const SPQEResult& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& rec : r.macro_history) {
    nlohmann::json added = nlohmann::json::array();
    for (const auto& e : rec.added) added.push_back(excitation_to_json(e));
    history.push_back({{"iteration", rec.iteration},
                       {"added", added},
                       {"n_selected", rec.n_selected},
                       {"n_excluded", rec.n_excluded},
                       {"residual_norm", rec.residual_norm},
                       {"micro_iterations", rec.micro_iterations},
                       {"micro_converged", rec.micro_converged},
                       {"energy", rec.energy}});
  }
  nlohmann::json principal = nlohmann::json::array();
  for (const auto& l : r.principal) {
    auto j = excitation_to_json(l.excitation);
    j["theta"] = l.theta;
    principal.push_back(j);
  }
  return {{"config", config_to_json(r.config)},
          {"pool_size", r.pool.size()},
          {"n_p", r.n_principal()},
          {"n_a", r.n_auxiliary()},
          {"e_hf", r.e_hf},
          {"e_spqe", r.e_spqe},
          {"e_descending_order", r.e_descending_order},
          {"macro_converged", r.macro_converged},
          {"micro_converged", r.micro_converged},
          {"residual_evaluations", r.residual_evaluations},
          {"principal", principal},
          {"macro_history", history}};
}

}  // namespace adpqe

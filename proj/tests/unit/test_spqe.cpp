#include "catch_amalgamated.hpp"

#include <random>
#include <set>

#include "adpqe/errors.hpp"
#include "adpqe/fci.hpp"
#include "adpqe/spqe.hpp"
#include "oracle.hpp"

using namespace adpqe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ResidualCoefficients coefficients_from_r2(const std::vector<double>& r2, double dt) {
  ResidualCoefficients c;
  for (std::size_t i = 0; i < r2.size(); ++i) {
    c.excitations.push_back(Excitation({0}, {static_cast<int>(2 * i + 2)}));
    c.magnitudes.push_back(dt * std::sqrt(r2[i]));
  }
  return c;
}

std::set<Excitation> as_set(const std::vector<Excitation>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("selection excludes the largest small-residual prefix", "[spqe]") {
  const double dt = 1e-3;
  SECTION("hand-computed cumulative sums") {
    const auto c = coefficients_from_r2({0.04, 0.01, 0.0025}, dt);
    const auto sel = select_operators(c, 0.12, dt);
    REQUIRE(sel.selected.size() == 1);
    CHECK(sel.selected[0] == c.excitations[0]);
    CHECK(sel.excluded == std::vector<Excitation>{c.excitations[2], c.excitations[1]});
  }
  SECTION("all residuals zero") {
    const auto sel = select_operators(coefficients_from_r2({0, 0, 0}, dt), 0.1, dt);
    CHECK(sel.selected.empty());
    CHECK(sel.excluded.size() == 3);
  }
  SECTION("zero threshold keeps every nonzero coefficient") {
    const auto c = coefficients_from_r2({0.5, 0.0, 1e-12, 0.2}, dt);
    const auto sel = select_operators(c, 0.0, dt);
    CHECK(sel.selected ==
          std::vector<Excitation>{c.excitations[0], c.excitations[3], c.excitations[2]});
    CHECK(sel.excluded == std::vector<Excitation>{c.excitations[1]});
  }
  SECTION("invalid inputs") {
    const auto c = coefficients_from_r2({0.1}, dt);
    CHECK_THROWS_AS(select_operators(c, -1.0, dt), ConfigurationError);
    CHECK_THROWS_AS(select_operators(c, 0.1, 0.0), ConfigurationError);
  }
}

TEST_CASE("selection is antitone in the threshold", "[spqe]") {
  const auto problem = prepare_problem(oracle::load_fixture("h4_r2.00"));
  const auto pool = generate_pool(problem.reference, 4);
  SPQEConfig cfg;
  const auto mags =
      residual_state_coefficients({}, problem.compiled, cfg.dt, pool, problem.reference);
  const ResidualCoefficients c{pool.entries(), mags};
  std::set<Excitation> previous;
  for (double omega : {0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001, 0.0}) {
    const auto now = as_set(select_operators(c, omega, cfg.dt).selected);
    CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
    previous = now;
  }
}

TEST_CASE("residual-state coefficients", "[spqe][oracle]") {
  const auto h = oracle::load_fixture("h4_r1.50");
  const auto problem = prepare_problem(h);
  const auto pool = generate_pool(problem.reference, 4);
  const double dt = 1e-3;
  SECTION("reference: singles vanish, doubles carry the integrals") {
    const auto c = residual_state_coefficients({}, problem.compiled, dt, pool, problem.reference);
    const auto m = oracle::hamiltonian_matrix(h);
    const auto d0 = problem.reference.determinant_bits();
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double coupling = std::abs(m(pool.target(k).det.bits, d0));
      if (pool[k].rank() == 1) CHECK(c[k] < 1e-10);
      CHECK_THAT(c[k], WithinAbs(dt * coupling, 1e-15));
    }
  }
  SECTION("coefficients are dt times residuals") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> angle(-0.3, 0.3);
    std::vector<AnsatzLayer> layers;
    for (std::size_t k = 0; k < pool.size(); k += 3) layers.push_back({pool[k], angle(rng)});
    const auto c = residual_state_coefficients(layers, problem.compiled, dt, pool,
                                               problem.reference);
    const auto r = residuals(layers, pool.entries(), problem.compiled, problem.reference);
    for (std::size_t k = 0; k < pool.size(); ++k) {
      CHECK_THAT(c[k], WithinAbs(dt * std::abs(r[k]), 1e-15));
    }
  }
}

TEST_CASE("threshold limits", "[spqe]") {
  const auto problem = prepare_problem(oracle::load_fixture("h4_r1.00"));
  SECTION("huge threshold leaves the reference") {
    SPQEConfig cfg;
    cfg.omega = 1e3;
    const auto r = run_spqe(problem, cfg);
    CHECK(r.principal.empty());
    CHECK(r.auxiliary.size() == r.pool.size());
    CHECK_THAT(r.e_spqe, WithinAbs(r.e_hf, 1e-12));
    CHECK(r.residual_evaluations == 0);
    CHECK(r.macro_converged);
    CHECK(r.macro_history.size() == 1);
  }
  SECTION("tiny threshold reaches FCI") {
    SPQEConfig cfg;
    cfg.omega = 1e-6;
    const auto r = run_spqe(problem, cfg);
    CHECK_THAT(r.e_spqe, WithinAbs(fci_ground_energy(problem).energy, 1e-5));
  }
}

TEST_CASE("run invariants on stretched H4", "[spqe]") {
  const auto problem = prepare_problem(oracle::load_fixture("h4_r2.00"));
  SPQEConfig cfg;
  cfg.omega = 0.02;
  const auto r = run_spqe(problem, cfg);
  REQUIRE(r.macro_converged);
  REQUIRE(r.micro_converged);

  SECTION("principal and auxiliary sets partition the pool") {
    std::set<Excitation> p;
    for (const auto& l : r.principal) CHECK(p.insert(l.excitation).second);
    for (const auto& a : r.auxiliary) CHECK(p.insert(a).second);
    CHECK(p == as_set(r.pool.entries()));
    CHECK(r.n_principal() + r.n_auxiliary() == r.pool.size());
  }
  SECTION("final residuals on the principal set are converged") {
    REQUIRE(r.final_residuals.size() == r.pool.size());
    for (const auto& l : r.principal) {
      const auto k = *r.pool.find(l.excitation);
      CHECK(std::abs(r.final_residuals.values[k]) < cfg.micro.residual_tolerance);
    }
  }
  SECTION("macro history bookkeeping") {
    std::size_t added = 0;
    std::size_t evaluations_floor = 0;
    for (const auto& rec : r.macro_history) {
      added += rec.added.size();
      evaluations_floor += added;  // at least one sweep over the active set
    }
    CHECK(added == r.n_principal());
    CHECK(r.macro_history.back().added.empty());
    CHECK(r.residual_evaluations >= evaluations_floor);
    CHECK(r.macro_history.back().energy == r.macro_history[r.macro_history.size() - 2].energy);
  }
  SECTION("energies") {
    CHECK(r.e_spqe < r.e_hf);
    CHECK(std::isfinite(r.e_descending_order));
    CHECK(r.e_spqe >= fci_ground_energy(problem).energy - 1e-10);
  }
  SECTION("deterministic") {
    const auto again = run_spqe(problem, cfg);
    REQUIRE(again.n_principal() == r.n_principal());
    for (std::size_t i = 0; i < r.n_principal(); ++i) {
      CHECK(again.principal[i].excitation == r.principal[i].excitation);
      CHECK(again.principal[i].theta == r.principal[i].theta);
    }
    CHECK(again.e_spqe == r.e_spqe);
  }
  SECTION("JSON record") {
    const auto j = spqe_to_json(r);
    CHECK(j["principal"].size() == r.n_principal());
    CHECK(j["e_spqe"] == r.e_spqe);
  }
}

TEST_CASE("restricted selection rank", "[spqe]") {
  const auto problem = prepare_problem(oracle::load_fixture("h4_r2.00"));
  SPQEConfig cfg;
  cfg.selection_rank_cap = 2;
  const auto r = run_spqe(problem, cfg);
  for (const auto& l : r.principal) CHECK(l.excitation.rank() <= 2);
  CHECK(r.pool.size() == 35);
  CHECK(r.n_auxiliary() == 35 - r.n_principal());
}

TEST_CASE("configuration validation", "[spqe]") {
  const auto problem = prepare_problem(oracle::load_fixture("h2_r0.735"));
  SPQEConfig cfg;
  cfg.omega = 0.0;
  CHECK_THROWS_AS(run_spqe(problem, cfg), ConfigurationError);
  cfg = {};
  cfg.dt = -1.0;
  CHECK_THROWS_AS(run_spqe(problem, cfg), ConfigurationError);
  cfg = {};
  cfg.rank_cap = 5;
  CHECK_THROWS_AS(run_spqe(problem, cfg), RangeError);
  cfg = {};
  cfg.selection_rank_cap = 3;
  cfg.rank_cap = 2;
  CHECK_THROWS_AS(run_spqe(problem, cfg), ConfigurationError);
}

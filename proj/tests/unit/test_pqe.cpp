#include "catch_amalgamated.hpp"

#include <random>
#include <sstream>

#include "adpqe/errors.hpp"
#include "adpqe/fci.hpp"
#include "adpqe/pool.hpp"
#include "adpqe/pqe.hpp"
#include "oracle.hpp"

using namespace adpqe;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<AnsatzLayer> random_layers(const OperatorPool& pool, int count, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-0.5, 0.5);
  std::vector<AnsatzLayer> layers;
  for (int i = 0; i < count; ++i) layers.push_back({pool[pick(rng)], angle(rng)});
  return layers;
}

std::vector<AnsatzLayer> zero_layers(const std::vector<Excitation>& excs) {
  std::vector<AnsatzLayer> layers;
  for (const auto& e : excs) layers.push_back({e, 0.0});
  return layers;
}

// <ab||ij> straight from spatial chemists' integrals.
double antisymmetrized(const MolecularHamiltonian& h, int a, int b, int i, int j) {
  auto direct = [&](int p, int q, int r, int s) {
    if (p % 2 != r % 2 || q % 2 != s % 2) return 0.0;
    return h.two_body(p / 2, r / 2, q / 2, s / 2);
  };
  return direct(a, b, i, j) - direct(a, b, j, i);
}

}  // namespace

TEST_CASE("residuals at the reference", "[pqe][oracle]") {
  const auto h = oracle::load_fixture("h4_r1.50");
  const auto problem = prepare_problem(h);
  const auto pool = generate_pool(problem.reference, 2);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const auto& e = pool[k];
    const double r = residual_direct({}, e, problem.compiled, problem.reference);
    if (e.rank() == 1) {
      CHECK(std::abs(r) < 1e-8);  // Brillouin in the canonical basis
    } else {
      const double v =
          antisymmetrized(h, e.particles[0], e.particles[1], e.holes[0], e.holes[1]);
      CHECK_THAT(std::abs(r), WithinAbs(std::abs(v), 1e-12));
    }
  }
}

TEST_CASE("direct and diagonal-form residuals agree", "[pqe]") {
  const auto problem = prepare_problem(oracle::load_fixture("h4_r1.00"));
  const auto pool = generate_pool(problem.reference, 4);
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> depth(0, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto layers = random_layers(pool, depth(rng), rng);
    const auto& e = pool[pick(rng)];
    CHECK_THAT(residual_diagonal_form(layers, e, problem.compiled, problem.reference),
               WithinAbs(residual_direct(layers, e, problem.compiled, problem.reference), 1e-10));
  }
  // Batch evaluation reads the same transformed state.
  const auto layers = random_layers(pool, 4, rng);
  const auto batch = residuals(layers, pool.entries(), problem.compiled, problem.reference);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    CHECK_THAT(batch[k], WithinAbs(residual_direct(layers, pool[k], problem.compiled,
                                                   problem.reference),
                                   1e-14));
  }
}

TEST_CASE("diagonal Hamiltonians have no residual at the reference", "[pqe]") {
  MolecularHamiltonian h(2, 2, 0, 0.0);
  h.set_one_body(0, 0, -1.0);
  h.set_one_body(1, 1, 0.5);
  const auto problem = prepare_problem(h);
  const Excitation e({0, 1}, {2, 3});
  CHECK_THAT(residual_diagonal_form({}, e, problem.compiled, problem.reference),
             WithinAbs(0.0, 1e-14));
  CHECK(residual_direct({}, e, problem.compiled, problem.reference) == 0.0);
}

TEST_CASE("single-layer residual matches the dense oracle", "[pqe][oracle]") {
  const auto h = oracle::load_fixture("h2_r0.735");
  const auto problem = prepare_problem(h);
  const Excitation dbl({0, 1}, {2, 3});
  const std::vector<AnsatzLayer> layers{{dbl, 0.17}};
  const auto H = oracle::hamiltonian_matrix(h).cast<cplx>().eval();
  const oracle::Matrix U = oracle::expm(0.17 * oracle::kappa_matrix(dbl, 4));
  const oracle::Matrix hbar = U.adjoint() * H * U;
  const oracle::Vector tau0 = oracle::tau_matrix(dbl, 4).col(0b0011);
  const double expected = (tau0.adjoint() * hbar.col(0b0011))(0).real();
  CHECK_THAT(residual_direct(layers, dbl, problem.compiled, problem.reference),
             WithinAbs(expected, 1e-12));
  CHECK_THAT(residual_diagonal_form(layers, dbl, problem.compiled, problem.reference),
             WithinAbs(expected, 1e-12));
  CHECK_THAT(ansatz_energy(layers, problem.compiled, problem.reference),
             WithinAbs(hbar(0b0011, 0b0011).real(), 1e-12));
}

TEST_CASE("micro-iterations", "[pqe]") {
  MicroIterConfig cfg;
  SECTION("H2 doubles-only reaches FCI") {
    const auto problem = prepare_problem(oracle::load_fixture("h2_r0.735"));
    const std::vector<Excitation> active{Excitation({0, 1}, {2, 3})};
    const auto res = micro_iterate(zero_layers(active), active, problem.compiled,
                                   problem.reference, cfg);
    CHECK(res.converged);
    CHECK_THAT(res.energy, WithinAbs(fci_ground_energy(problem).energy, 1e-8));
    CHECK(res.residuals.max_abs() < cfg.residual_tolerance);
  }
  SECTION("full pool on H4 reaches FCI") {
    for (std::string name : {"h4_r1.00", "h4_r2.00"}) {
      const auto problem = prepare_problem(oracle::load_fixture(name));
      const auto pool = generate_pool(problem.reference, 4);
      const auto res = micro_iterate(zero_layers(pool.entries()), pool.entries(),
                                     problem.compiled, problem.reference, cfg);
      INFO(name);
      CHECK(res.converged);
      CHECK_THAT(res.energy, WithinAbs(fci_ground_energy(problem).energy, 1e-6));
      const auto all = residuals(res.layers, pool.entries(), problem.compiled, problem.reference);
      for (double r : all) CHECK(std::abs(r) < cfg.residual_tolerance);
    }
  }
  SECTION("converged input is a fixed point") {
    const auto problem = prepare_problem(oracle::load_fixture("h4_r1.00"));
    const auto pool = generate_pool(problem.reference, 2);
    const auto first = micro_iterate(zero_layers(pool.entries()), pool.entries(),
                                     problem.compiled, problem.reference, cfg);
    const auto again =
        micro_iterate(first.layers, pool.entries(), problem.compiled, problem.reference, cfg);
    CHECK(again.iterations == 0);
    CHECK(again.converged);
    for (std::size_t i = 0; i < first.layers.size(); ++i)
      CHECK(again.layers[i].theta == first.layers[i].theta);
    CHECK(again.residual_evaluations == pool.size());
  }
  SECTION("one undamped sweep is theta + r / D") {
    const auto problem = prepare_problem(oracle::load_fixture("h4_r1.50"));
    const auto pool = generate_pool(problem.reference, 2);
    MicroIterConfig one = cfg;
    one.max_iterations = 1;
    std::mt19937_64 rng(3);
    auto layers = zero_layers(pool.entries());
    std::uniform_real_distribution<double> angle(-0.1, 0.1);
    for (auto& l : layers) l.theta = angle(rng);
    const auto r = residuals(layers, pool.entries(), problem.compiled, problem.reference);
    const auto res = micro_iterate(layers, pool.entries(), problem.compiled, problem.reference, one);
    CHECK(res.iterations == 1);
    CHECK_FALSE(res.converged);
    for (std::size_t k = 0; k < pool.size(); ++k) {
      const double d = mp_denominator(pool[k], problem.reference).value;
      CHECK(res.layers[k].theta == layers[k].theta + r[k] / d);
    }
    CHECK(res.history.size() == 2);
  }
  SECTION("stationarity at convergence") {
    const auto problem = prepare_problem(oracle::load_fixture("h4_r2.00"));
    const auto pool = generate_pool(problem.reference, 2);
    const auto res = micro_iterate(zero_layers(pool.entries()), pool.entries(),
                                   problem.compiled, problem.reference, cfg);
    REQUIRE(res.converged);
    const double delta = 1e-4;
    for (std::size_t k = 0; k < res.layers.size(); ++k) {
      auto shifted = res.layers;
      shifted[k].theta += delta;
      const double de =
          ansatz_energy(shifted, problem.compiled, problem.reference) - res.energy;
      CHECK(std::abs(de) <= 4 * delta * cfg.residual_tolerance + 10 * delta * delta);
    }
  }
  SECTION("bad configuration and inactive excitations") {
    const auto problem = prepare_problem(oracle::load_fixture("h2_r0.735"));
    const std::vector<Excitation> active{Excitation({0, 1}, {2, 3})};
    MicroIterConfig bad = cfg;
    bad.damping = 0.0;
    CHECK_THROWS_AS(micro_iterate(zero_layers(active), active, problem.compiled,
                                  problem.reference, bad),
                    ConfigurationError);
    CHECK_THROWS_AS(micro_iterate({}, active, problem.compiled, problem.reference, cfg),
                    ConfigurationError);
    std::vector<AnsatzLayer> nan_layers{{active[0], std::nan("")}};
    CHECK_THROWS_AS(micro_iterate(nan_layers, active, problem.compiled, problem.reference, cfg),
                    NumericalError);
  }
}

TEST_CASE("iteration history CSV", "[pqe]") {
  std::vector<SweepRecord> h{{0, 0.5, -1.0, 1.0}, {1, 0.25, -1.5, 0.5}};
  std::ostringstream out;
  write_history_csv(out, h);
  CHECK(out.str() == "sweep,max_residual,energy,damping\n0,0.5,-1,1\n1,0.25,-1.5,0.5\n");
}

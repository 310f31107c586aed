#include <cmath>
#include <random>

#include <doctest.h>

#include "cweno/positivity.hpp"

using namespace cweno;

namespace {

ConservedState blend(const ConservedState& avg, const ConservedState& trace, double t) {
  return {avg.rho + t * (trace.rho - avg.rho), avg.mom + t * (trace.mom - avg.mom),
          avg.ene + t * (trace.ene - avg.ene)};
}

}  // namespace

TEST_SUITE("positivity") {

TEST_CASE("density stage: frozen value and lumped-point protection") {
  // Edge at -0.2 with average 1: theta pulls the worst point up to the floor.
  const double theta = density_theta(1.0, -0.2, 1.0, 1e-13);
  CHECK(theta == doctest::Approx((1.0 - 1e-13) / 1.2).epsilon(1e-14));

  // Both edges admissible but the lumped interior value is negative: the
  // average decomposes as w(rho_minus + rho_plus) + (1 - 2w) rho_lump with
  // w = 1/12, so edges at 0.65 against an average of 0.1 push rho_lump to
  // (0.1 - 1.3/12)/(10/12) < 0.
  const double rho_avg = 0.1, edge = 0.65;
  const double lump = (rho_avg - (edge + edge) / 12.0) / (10.0 / 12.0);
  REQUIRE(lump < 0.0);
  const double th = density_theta(rho_avg, edge, edge, 1e-13);
  CHECK(th < 1.0);
  const double new_edge = rho_avg + th * (edge - rho_avg);
  const double new_lump = (rho_avg - (new_edge + new_edge) / 12.0) / (10.0 / 12.0);
  CHECK(new_lump >= 1e-13 * (1.0 - 1e-10));

  // Admissible edges pass through untouched.
  CHECK(density_theta(1.0, 0.9, 1.2, 1e-13) == 1.0);
  // The limiter cannot repair a bad average.
  CHECK_THROWS_AS(density_theta(1e-14, 0.5, 0.5, 1e-13), SolverError);
}

TEST_CASE("energy stage: frozen quadratic root and no-op branch") {
  const ConservedState avg{1.0, 0.0, 1.0};  // e = 1
  const ConservedState bad{1.0, 0.0, -1.0};
  // rho E - m^2/2 - eps rho^2 along the blend is 1 - 2t - eps: root (1-eps)/2.
  const double t = energy_theta(avg, bad, 1e-13);
  CHECK(t == doctest::Approx((1.0 - 1e-13) / 2.0).epsilon(1e-12));
  const ConservedState lim = blend(avg, bad, t);
  CHECK(internal_energy(lim) * lim.rho >= 1e-13 * (1.0 - 1e-9) - 1e-12);

  const ConservedState fine{1.1, 0.3, 1.4};
  CHECK(energy_theta(avg, fine, 1e-13) == 1.0);
}

TEST_CASE("limit_cell is the identity on safely admissible traces") {
  const GasConstants g{};
  const ConservedState avg = conserved_from_primitive({1.0, 0.5, 0.8}, g);
  ConservedState left = conserved_from_primitive({0.98, 0.52, 0.81}, g);
  ConservedState right = conserved_from_primitive({1.02, 0.47, 0.79}, g);
  const ConservedState l0 = left, r0 = right;
  limit_cell(avg, left, right, 1e-13);
  CHECK(left.rho == l0.rho);
  CHECK(left.mom == l0.mom);
  CHECK(left.ene == l0.ene);
  CHECK(right.rho == r0.rho);
  CHECK(right.mom == r0.mom);
  CHECK(right.ene == r0.ene);
}

TEST_CASE("limit_cell restores admissibility and is conservative by construction") {
  const GasConstants g{};
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> logs(-3.0, 2.0), vel(-4.0, 4.0), wild(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double rho = std::pow(10.0, logs(rng));
    const ConservedState avg = conserved_from_primitive({rho, vel(rng), std::pow(10.0, logs(rng))}, g);
    // Violent traces: random perturbations that routinely leave G.
    ConservedState left{avg.rho * (1.0 + wild(rng)), avg.mom + wild(rng) * std::abs(avg.mom + 1.0),
                        avg.ene * (1.0 + wild(rng))};
    ConservedState right{avg.rho * (1.0 + wild(rng)), avg.mom + wild(rng) * std::abs(avg.mom + 1.0),
                         avg.ene * (1.0 + wild(rng))};
    limit_cell(avg, left, right, 1e-13);
    CHECK(in_admissible_set(left));
    CHECK(in_admissible_set(right));

    // Idempotence: a second pass leaves the repaired traces in place.
    const ConservedState l1 = left, r1 = right;
    limit_cell(avg, left, right, 1e-13);
    const double scale = std::max({1.0, std::abs(l1.rho), std::abs(l1.ene)});
    CHECK(std::abs(left.rho - l1.rho) <= 1e-10 * scale);
    CHECK(std::abs(left.ene - l1.ene) <= 1e-10 * scale);
    CHECK(std::abs(right.rho - r1.rho) <= 1e-10 * scale);
    CHECK(std::abs(right.ene - r1.ene) <= 1e-10 * scale);
  }
}

TEST_CASE("limit_cell rejects inadmissible averages") {
  ConservedState left{1.0, 0.0, 1.0}, right{1.0, 0.0, 1.0};
  ConservedState bad{1.0, 3.0, 1.0};  // e < 0
  CHECK_THROWS_AS(limit_cell(bad, left, right, 1e-13), NonPhysicalState);
}

TEST_CASE("apply_limiter repairs a whole field and keeps periodic wrap in sync") {
  const GasConstants g{};
  const int n = 16;
  Field f;
  f.grid = {0.0, 1.0, n};
  f.bc = BoundaryKind::periodic;
  f.u.resize(n);
  // Near-vacuum alternation: reconstruction overshoot below zero is likely.
  for (int j = 0; j < n; ++j) {
    const double rho = (j % 2 == 0) ? 1.0 : 1e-6;
    const double p = (j % 2 == 0) ? 1.0 : 1e-7;
    f.u[j] = conserved_from_primitive({rho, 0.0, p}, g);
  }
  std::vector<ConservedState> padded;
  fill_ghosts(f, kGhostWidth, padded);
  Reconstructor rec({SchemeKind::weno_z, VariableMode::conservative}, g);
  InterfaceStates states;
  rec.reconstruct_padded(padded, n, true, states);

  apply_limiter(f, padded, states, LimiterConfig{});
  for (int i = 0; i <= n; ++i) {
    CHECK(in_admissible_set(states.minus[i]));
    CHECK(in_admissible_set(states.plus[i]));
  }
  CHECK(states.minus[n].rho == states.minus[0].rho);
  CHECK(states.plus[n].rho == states.plus[0].rho);

  // Disabled limiter leaves the traces untouched.
  InterfaceStates raw;
  rec.reconstruct_padded(padded, n, true, raw);
  InterfaceStates copy = raw;
  apply_limiter(f, padded, copy, LimiterConfig{false, 1e-13});
  for (int i = 0; i <= n; ++i) {
    CHECK(copy.minus[i].rho == raw.minus[i].rho);
    CHECK(copy.minus[i].ene == raw.minus[i].ene);
  }
}

}  // TEST_SUITE

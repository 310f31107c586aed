#include <cmath>
#include <random>

#include <doctest.h>

#include "cweno/euler.hpp"

using namespace cweno;

namespace {

// Relative agreement against a scale shared by both operands.
bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

double& comp(ConservedState& q, int j) { return j == 0 ? q.rho : j == 1 ? q.mom : q.ene; }

Mat3 fd_jacobian(const ConservedState& q, const GasConstants& g) {
  Mat3 jac;
  const double base[3] = {q.rho, q.mom, q.ene};
  for (int j = 0; j < 3; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(base[j]));
    ConservedState qp = q, qm = q;
    comp(qp, j) += h;
    comp(qm, j) -= h;
    const ConservedState fp = physical_flux(qp, g);
    const ConservedState fm = physical_flux(qm, g);
    jac.m[0][j] = (fp.rho - fm.rho) / (2 * h);
    jac.m[1][j] = (fp.mom - fm.mom) / (2 * h);
    jac.m[2][j] = (fp.ene - fm.ene) / (2 * h);
  }
  return jac;
}

}  // namespace

TEST_SUITE("euler") {

TEST_CASE("frozen conversions, flux and sound speed") {
  const GasConstants g{};
  const PrimitiveState w{1.0, 2.0, 0.4};
  const ConservedState q = conserved_from_primitive(w, g);
  CHECK(q.rho == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.mom == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(q.ene == doctest::Approx(3.0).epsilon(1e-15));

  CHECK(internal_energy(q) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pressure(q, g) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(in_admissible_set(q));

  const ConservedState f = physical_flux(q, g);
  CHECK(f.rho == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.mom == doctest::Approx(4.4).epsilon(1e-14));
  CHECK(f.ene == doctest::Approx(6.8).epsilon(1e-14));

  CHECK(sound_speed(1.0, 0.4, g) == doctest::Approx(std::sqrt(0.56)).epsilon(1e-15));

  const ConservedState m = mirror(q);
  CHECK(m.rho == q.rho);
  CHECK(m.mom == -q.mom);
  CHECK(m.ene == q.ene);
}

TEST_CASE("primitive/conserved round trip over random states") {
  const GasConstants g{};
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> logs(-6.0, 3.0), vel(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const PrimitiveState w{std::pow(10.0, logs(rng)), vel(rng), std::pow(10.0, logs(rng))};
    const PrimitiveState back = primitive_from_conserved(conserved_from_primitive(w, g), g);
    CHECK(close(back.rho, w.rho, 1e-12));
    CHECK(close(back.u, w.u, 1e-12));
    // Recovering p subtracts the kinetic energy from the total, so the
    // achievable absolute accuracy scales with the kinetic term, not with p.
    const double cancel = std::max(w.p, (g.gamma - 1.0) * 0.5 * w.rho * w.u * w.u);
    CHECK(std::abs(back.p - w.p) <= 1e-12 * std::max(1.0, cancel));
  }
}

TEST_CASE("inadmissible inputs are rejected") {
  const GasConstants g{};
  CHECK_THROWS_AS(primitive_from_conserved({0.0, 1.0, 1.0}, g), NonPhysicalState);
  CHECK_THROWS_AS(physical_flux({-1.0, 0.0, 1.0}, g), NonPhysicalState);
  CHECK_THROWS_AS(sound_speed(1.0, -0.1, g), NonPhysicalState);
  CHECK_THROWS_AS(sound_speed(-1.0, 0.1, g), NonPhysicalState);
  CHECK_THROWS_AS(roe_average({1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, g), NonPhysicalState);
  CHECK_FALSE(in_admissible_set({1.0, 3.0, 1.0}));  // e = (1 - 4.5) < 0
  const double nan = std::nan("");
  CHECK_FALSE(in_admissible_set({nan, 0.0, 1.0}));
}

TEST_CASE("eigenvectors diagonalize the finite-difference flux Jacobian") {
  const GasConstants g{};
  const PrimitiveState states[] = {
      {1.0, 0.0, 1.0}, {0.5, 2.0, 0.2}, {3.0, -1.5, 5.0}, {1.2, 0.3, 0.05}, {0.1, 10.0, 2.0}};
  for (const PrimitiveState& w : states) {
    const ConservedState q = conserved_from_primitive(w, g);
    const EigenSystem es = eigen_system(w, g);
    const Mat3 jac = fd_jacobian(q, g);
    for (int k = 0; k < 3; ++k) {
      const Vec3 r{es.right.m[0][k], es.right.m[1][k], es.right.m[2][k]};
      const Vec3 jr = matvec(jac, r);
      for (int i = 0; i < 3; ++i) CHECK(close(jr[i], es.lambda[k] * r[i], 2e-6));
    }
  }
}

TEST_CASE("left eigenvectors invert the right ones") {
  const GasConstants g{};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> logs(-4.0, 3.0), mach(-30.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double rho = std::pow(10.0, logs(rng));
    const double p = std::pow(10.0, logs(rng));
    const double a = std::sqrt(g.gamma * p / rho);
    const PrimitiveState w{rho, mach(rng) * a, p};
    const EigenSystem es = eigen_system(w, g);
    const Mat3 id = matmul(es.left, es.right);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) CHECK(std::abs(id.m[r][c] - (r == c ? 1.0 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("Roe average linearizes the flux jump exactly") {
  const GasConstants g{};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> logs(-2.0, 2.0), vel(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const ConservedState ql =
        conserved_from_primitive({std::pow(10.0, logs(rng)), vel(rng), std::pow(10.0, logs(rng))}, g);
    const ConservedState qr =
        conserved_from_primitive({std::pow(10.0, logs(rng)), vel(rng), std::pow(10.0, logs(rng))}, g);
    const EigenSystem es = eigen_system(roe_average(ql, qr, g), g);
    const Vec3 du{qr.rho - ql.rho, qr.mom - ql.mom, qr.ene - ql.ene};
    Vec3 alpha = matvec(es.left, du);
    for (int k = 0; k < 3; ++k) alpha[k] *= es.lambda[k];
    const Vec3 adu = matvec(es.right, alpha);
    const ConservedState fl = physical_flux(ql, g);
    const ConservedState fr = physical_flux(qr, g);
    const Vec3 df{fr.rho - fl.rho, fr.mom - fl.mom, fr.ene - fl.ene};
    const double scale =
        std::max({1.0, std::abs(df[0]), std::abs(df[1]), std::abs(df[2])});
    for (int k = 0; k < 3; ++k) CHECK(std::abs(adu[k] - df[k]) <= 1e-10 * scale);
  }
}

TEST_CASE("Roe average frozen values") {
  const GasConstants g{};
  const RoeState roe = roe_average({1.0, 0.0, 2.5}, {0.125, 0.0, 0.25}, g);
  CHECK(roe.r_rho == doctest::Approx(0.35355339059327376).epsilon(1e-15));
  CHECK(roe.u_t == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(roe.h_t == doctest::Approx(3.317157287525381).epsilon(1e-14));
  CHECK(roe.a_t == doctest::Approx(1.1518953576649888).epsilon(1e-14));
}

}  // TEST_SUITE

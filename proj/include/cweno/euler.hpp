// One-dimensional compressible Euler equations for an ideal gas:
// state containers, primitive/conserved conversions, the physical flux,
// Roe averaging and the characteristic eigen-decomposition.
//
// Everything here is small and hot, so it lives in the header.
#ifndef CWENO_EULER_HPP
#define CWENO_EULER_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cweno {

// Base class for all solver failures so callers can catch one type.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state left the admissible set (rho > 0, internal energy > 0) somewhere
// physics needs it.
struct NonPhysicalState : SolverError {
  using SolverError::SolverError;
};

// A linear system pivot collapsed (singular reconstruction system).
struct SingularSystem : SolverError {
  using SolverError::SolverError;
};

struct GasConstants {
  double gamma = 1.4;  // ratio of specific heats, > 1
};

// Conserved cell variables: density, momentum density, total energy density.
struct ConservedState {
  double rho = 0.0;
  double mom = 0.0;
  double ene = 0.0;
};

// Primitive variables: density, velocity, pressure.
struct PrimitiveState {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

inline ConservedState operator+(const ConservedState& a, const ConservedState& b) {
  return {a.rho + b.rho, a.mom + b.mom, a.ene + b.ene};
}
inline ConservedState operator-(const ConservedState& a, const ConservedState& b) {
  return {a.rho - b.rho, a.mom - b.mom, a.ene - b.ene};
}
inline ConservedState operator*(double s, const ConservedState& a) {
  return {s * a.rho, s * a.mom, s * a.ene};
}
inline ConservedState& operator+=(ConservedState& a, const ConservedState& b) {
  a.rho += b.rho;
  a.mom += b.mom;
  a.ene += b.ene;
  return a;
}

// Specific internal energy e = E/rho - u^2/2, arranged so tiny densities do
// not go through an explicit velocity.
inline double internal_energy(const ConservedState& q) {
  return (q.ene - 0.5 * q.mom * q.mom / q.rho) / q.rho;
}

// Membership in the admissible set G = {rho > 0, e > 0}.  NaNs fail the
// comparisons and are correctly reported as outside.
inline bool in_admissible_set(const ConservedState& q) {
  return q.rho > 0.0 && internal_energy(q) > 0.0;
}

inline double pressure(const ConservedState& q, const GasConstants& g) {
  return (g.gamma - 1.0) * (q.ene - 0.5 * q.mom * q.mom / q.rho);
}

inline PrimitiveState primitive_from_conserved(const ConservedState& q, const GasConstants& g) {
  if (!(q.rho != 0.0) || !std::isfinite(q.rho))
    throw NonPhysicalState("primitive_from_conserved: zero or non-finite density");
  const double u = q.mom / q.rho;
  return {q.rho, u, (g.gamma - 1.0) * (q.ene - 0.5 * q.mom * u)};
}

inline ConservedState conserved_from_primitive(const PrimitiveState& w, const GasConstants& g) {
  const double mom = w.rho * w.u;
  return {w.rho, mom, w.p / (g.gamma - 1.0) + 0.5 * mom * w.u};
}

inline double sound_speed(double rho, double p, const GasConstants& g) {
  if (!(rho > 0.0) || !(p >= 0.0))
    throw NonPhysicalState("sound_speed: rho = " + std::to_string(rho) +
                           ", p = " + std::to_string(p));
  return std::sqrt(g.gamma * p / rho);
}

// F(U) = (rho u, rho u^2 + p, u (E + p)).
inline ConservedState physical_flux(const ConservedState& q, const GasConstants& g) {
  if (!(q.rho > 0.0))
    throw NonPhysicalState("physical_flux: non-positive density " + std::to_string(q.rho));
  const double u = q.mom / q.rho;
  const double p = (g.gamma - 1.0) * (q.ene - 0.5 * q.mom * u);
  return {q.mom, q.mom * u + p, u * (q.ene + p)};
}

// Reflection x -> -x: density and energy even, momentum odd.
inline ConservedState mirror(const ConservedState& q) { return {q.rho, -q.mom, q.ene}; }

// ---------------------------------------------------------------------------
// Small fixed-size linear algebra used by the characteristic reconstruction.

using Vec3 = std::array<double, 3>;

struct Mat3 {
  double m[3][3];
};

inline Vec3 matvec(const Mat3& a, const Vec3& x) {
  return {a.m[0][0] * x[0] + a.m[0][1] * x[1] + a.m[0][2] * x[2],
          a.m[1][0] * x[0] + a.m[1][1] * x[1] + a.m[1][2] * x[2],
          a.m[2][0] * x[0] + a.m[2][1] * x[1] + a.m[2][2] * x[2]};
}

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
  return c;
}

// ---------------------------------------------------------------------------
// Characteristic structure.

// Eigen-decomposition of the flux Jacobian at one state.  Wave ordering is by
// speed: lambda = (u - a, u, u + a).  Rows of `left` are the left eigenvectors,
// columns of `right` the right ones; left * right = identity.
struct EigenSystem {
  Vec3 lambda;
  Mat3 right;
  Mat3 left;
};

// Keeps a rounded double out of later multiply-add contraction.  The left
// eigenvector rows below come in reflection pairs like c2 + t and c2 - t;
// they stay exact negation images of each other only if neither side's
// addend is re-fused into an FMA, so the shared terms pass through this
// barrier first.  Compiles to nothing.
inline double nofuse(double t) {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  asm("" : "+x"(t));
#elif defined(__GNUC__)
  asm("" : "+m"(t));
#endif
  return t;
}

// Shared builder: the decomposition depends on the state only through the
// velocity u, sound speed a and total specific enthalpy H = (E + p) / rho.
// Flipping the sign of u permutes the left rows (first and last swap) and
// flips the sign of their momentum column, bit for bit; the two-sided
// characteristic reconstruction derives the reflected rows that way.
inline EigenSystem eigen_from_uah(double u, double a, double H, const GasConstants& g) {
  EigenSystem es;
  const double inva = 1.0 / a;
  const double c1 = (g.gamma - 1.0) * inva * inva;
  const double c2 = nofuse(0.5 * u * u * c1);
  const double uia = nofuse(u * inva);
  const double c1u = nofuse(c1 * u);
  const double ua = u * a;

  es.lambda = {u - a, u, u + a};

  es.right.m[0][0] = 1.0;      es.right.m[0][1] = 1.0;         es.right.m[0][2] = 1.0;
  es.right.m[1][0] = u - a;    es.right.m[1][1] = u;           es.right.m[1][2] = u + a;
  es.right.m[2][0] = H - ua;   es.right.m[2][1] = 0.5 * u * u; es.right.m[2][2] = H + ua;

  es.left.m[0][0] = 0.5 * (c2 + uia);
  es.left.m[0][1] = -0.5 * (c1u + inva);
  es.left.m[0][2] = 0.5 * c1;
  es.left.m[1][0] = 1.0 - c2;
  es.left.m[1][1] = c1u;
  es.left.m[1][2] = -c1;
  es.left.m[2][0] = 0.5 * (c2 - uia);
  es.left.m[2][1] = -0.5 * (c1u - inva);
  es.left.m[2][2] = 0.5 * c1;
  return es;
}

inline EigenSystem eigen_system(const PrimitiveState& w, const GasConstants& g) {
  const double a = sound_speed(w.rho, w.p, g);
  const double H = 0.5 * w.u * w.u + a * a / (g.gamma - 1.0);
  return eigen_from_uah(w.u, a, H, g);
}

// Roe average of two conserved states.
struct RoeState {
  double r_rho;  // sqrt(rho_r / rho_l)
  double u_t;    // averaged velocity
  double h_t;    // averaged total specific enthalpy
  double a_t;    // averaged sound speed
};

inline RoeState roe_average(const ConservedState& ql, const ConservedState& qr,
                            const GasConstants& g) {
  if (!(ql.rho > 0.0) || !(qr.rho > 0.0))
    throw NonPhysicalState("roe_average: non-positive density");
  const double invl = 1.0 / ql.rho, invr = 1.0 / qr.rho;
  const double ul = ql.mom * invl, ur = qr.mom * invr;
  const double pl = (g.gamma - 1.0) * (ql.ene - 0.5 * ql.mom * ul);
  const double pr = (g.gamma - 1.0) * (qr.ene - 0.5 * qr.mom * ur);
  const double Hl = (ql.ene + pl) * invl, Hr = (qr.ene + pr) * invr;

  // Symmetric sqrt-weighted form, evaluated in a canonical operand order
  // (smaller density first, with an exactly-commutative tie branch): under
  // reflection -- swap the states and flip the velocities -- u then flips
  // sign bit for bit and H, a are preserved bit for bit, even when the
  // compiler contracts multiply-add pairs, because the reflected call feeds
  // the same expression tree with sign-flipped operands.  The two-sided
  // characteristic reconstruction shares one average per interface and
  // relies on this.
  const double sl = std::sqrt(ql.rho), sr = std::sqrt(qr.rho);
  const double w = 1.0 / (sl + sr);
  double u, H;
  if (ql.rho == qr.rho) {
    u = sl * (ul + ur) * w;
    H = sl * (Hl + Hr) * w;
  } else {
    const bool ls = ql.rho < qr.rho;
    const double s1 = ls ? sl : sr, u1 = ls ? ul : ur, h1 = ls ? Hl : Hr;
    const double s2 = ls ? sr : sl, u2 = ls ? ur : ul, h2 = ls ? Hr : Hl;
    u = (s1 * u1 + s2 * u2) * w;
    H = (s1 * h1 + s2 * h2) * w;
  }
  const double a2 = (g.gamma - 1.0) * (H - 0.5 * u * u);
  if (!(a2 > 0.0))
    throw NonPhysicalState("roe_average: degenerate averaged enthalpy (a^2 = " +
                           std::to_string(a2) + ")");
  return {sr / sl, u, H, std::sqrt(a2)};
}

inline EigenSystem eigen_system(const RoeState& roe, const GasConstants& g) {
  return eigen_from_uah(roe.u_t, roe.a_t, roe.h_t, g);
}

}  // namespace cweno

#endif  // CWENO_EULER_HPP

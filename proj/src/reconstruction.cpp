#include "cweno/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cweno {

namespace {

inline double sqr(double x) { return x * x; }

inline double comp(const ConservedState& q, int c) {
  return c == 0 ? q.rho : (c == 1 ? q.mom : q.ene);
}
inline void set_comp(ConservedState& q, int c, double v) {
  (c == 0 ? q.rho : (c == 1 ? q.mom : q.ene)) = v;
}

inline Mat3 msub(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] - b.m[i][j];
  return c;
}
inline Mat3 madd(const Mat3& a, const Mat3& b) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = a.m[i][j] + b.m[i][j];
  return c;
}
inline Mat3 mneg(const Mat3& a) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.m[i][j] = -a.m[i][j];
  return c;
}
inline Vec3 vsub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

// Dense 3x3 LU with partial pivoting.  The chasing solvers never exchange
// block rows; pivoting inside a block is still required because characteristic
// rows mix O(1) and O(1/a^2) magnitudes.  The pivot reciprocals are cached so
// the (many) triangular solves per factorization are division-free.
struct Lu3 {
  double a[3][3];
  double rd[3];  // reciprocals of the U diagonal
  int perm[3];

  bool factor(const Mat3& min) {
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) {
      perm[i] = i;
      for (int j = 0; j < 3; ++j) {
        a[i][j] = min.m[i][j];
        scale = std::max(scale, std::abs(a[i][j]));
      }
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) return false;
    const double tol = 1e-14 * scale;
    for (int k = 0; k < 3; ++k) {
      int r = k;
      for (int i = k + 1; i < 3; ++i)
        if (std::abs(a[i][k]) > std::abs(a[r][k])) r = i;
      if (r != k) {
        for (int j = 0; j < 3; ++j) std::swap(a[k][j], a[r][j]);
        std::swap(perm[k], perm[r]);
      }
      if (std::abs(a[k][k]) <= tol) return false;
      const double inv = 1.0 / a[k][k];
      rd[k] = inv;
      for (int i = k + 1; i < 3; ++i) {
        const double l = a[i][k] * inv;
        a[i][k] = l;
        for (int j = k + 1; j < 3; ++j) a[i][j] -= l * a[k][j];
      }
    }
    return true;
  }

  Vec3 solve(const Vec3& b) const {
    const double y0 = b[perm[0]];
    const double y1 = b[perm[1]] - a[1][0] * y0;
    const double y2 = b[perm[2]] - a[2][0] * y0 - a[2][1] * y1;
    const double x2 = y2 * rd[2];
    const double x1 = (y1 - a[1][2] * x2) * rd[1];
    const double x0 = (y0 - a[0][1] * x1 - a[0][2] * x2) * rd[0];
    return {x0, x1, x2};
  }

  // X = M^{-1} B, column by column.
  Mat3 solve_mat(const Mat3& b) const {
    Mat3 x;
    solve_mat_into(b, x);
    return x;
  }

  void solve_mat_into(const Mat3& b, Mat3& x) const {
    for (int j = 0; j < 3; ++j) {
      const Vec3 col = solve({b.m[0][j], b.m[1][j], b.m[2][j]});
      x.m[0][j] = col[0];
      x.m[1][j] = col[1];
      x.m[2][j] = col[2];
    }
  }
};

// out = b - a * p, with the same accumulation order as matmul followed by the
// elementwise subtraction (the chase recursions are sensitive to it).
inline void mulsub_into(Mat3& out, const Mat3& b, const Mat3& a, const Mat3& p) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out.m[i][j] =
          b.m[i][j] - (a.m[i][0] * p.m[0][j] + a.m[i][1] * p.m[1][j] + a.m[i][2] * p.m[2][j]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Weights.

std::array<double, 3> smoothness_indicators(const double* v) {
  const double b0 = (13.0 / 12.0) * sqr(v[0] - 2.0 * v[1] + v[2]) +
                    0.25 * sqr(v[0] - 4.0 * v[1] + 3.0 * v[2]);
  const double b1 = (13.0 / 12.0) * sqr(v[1] - 2.0 * v[2] + v[3]) + 0.25 * sqr(v[1] - v[3]);
  const double b2 = (13.0 / 12.0) * sqr(v[2] - 2.0 * v[3] + v[4]) +
                    0.25 * sqr(3.0 * v[2] - 4.0 * v[3] + v[4]);
  return {b0, b1, b2};
}

namespace {

// alpha_k / alpha_m ratios only involve products of the g_k = beta_k + eps, so
// multiplying every alpha by (g0 g1 g2)^2 removes all but the final division:
//   JS: alpha_k = c_k / g_k^2          ->  c_k (g_m g_l)^2
//   Z:  alpha_k = c_k (1 + (tau/g_k)^2) ->  c_k ((g0 g1 g2)^2 + tau^2 (g_m g_l)^2)
// Sixth-degree products stay inside double range for any physically scaled
// data (g <= 1e50); beyond that a slow normalized fallback takes over.
constexpr double kProductCap = 1e50;

StencilWeights finish(StencilWeights w, double a0, double a1, double a2) {
  const double sum = a0 + a1 + a2;
  const double inv = 1.0 / sum;
  w.omega = {a0 * inv, a1 * inv, a2 * inv};
  return w;
}

}  // namespace

StencilWeights weno_js_weights(const std::array<double, 3>& beta, double eps,
                               const std::array<double, 3>& linear) {
  if (!(eps > 0.0)) throw SolverError("weno_js_weights: eps must be positive");
  StencilWeights w;
  w.beta = beta;
  w.tau5 = 0.0;
  const double g0 = beta[0] + eps, g1 = beta[1] + eps, g2 = beta[2] + eps;
  const double gmax = std::max({g0, g1, g2});
  if (gmax > kProductCap) {
    // normalized fallback: alpha_k ~ 1/(g_k/gmax)^2, clamped
    const double a0 = std::min(linear[0] / sqr(g0 / gmax), 1e300);
    const double a1 = std::min(linear[1] / sqr(g1 / gmax), 1e300);
    const double a2 = std::min(linear[2] / sqr(g2 / gmax), 1e300);
    return finish(w, a0, a1, a2);
  }
  const double a0 = linear[0] * sqr(g1 * g2);
  const double a1 = linear[1] * sqr(g0 * g2);
  const double a2 = linear[2] * sqr(g0 * g1);
  if (a0 + a1 + a2 == 0.0) {  // all candidates indistinguishable at working precision
    w.omega = linear;
    return w;
  }
  return finish(w, a0, a1, a2);
}

StencilWeights weno_z_weights(const std::array<double, 3>& beta, double eps,
                              const std::array<double, 3>& linear) {
  if (!(eps > 0.0)) throw SolverError("weno_z_weights: eps must be positive");
  StencilWeights w;
  w.beta = beta;
  const double tau = std::abs(beta[2] - beta[0]);
  w.tau5 = tau;
  const double g0 = beta[0] + eps, g1 = beta[1] + eps, g2 = beta[2] + eps;
  const double gmax = std::max({g0, g1, g2});
  if (gmax > kProductCap) {
    const double rt = tau / gmax;
    const double a0 = linear[0] * (1.0 + std::min(sqr(rt / (g0 / gmax)), 1e300));
    const double a1 = linear[1] * (1.0 + std::min(sqr(rt / (g1 / gmax)), 1e300));
    const double a2 = linear[2] * (1.0 + std::min(sqr(rt / (g2 / gmax)), 1e300));
    return finish(w, a0, a1, a2);
  }
  const double p01 = g0 * g1, p02 = g0 * g2, p12 = g1 * g2;
  const double pp = sqr(g0 * p12);
  const double a0 = linear[0] * (pp + sqr(tau * p12));
  const double a1 = linear[1] * (pp + sqr(tau * p02));
  const double a2 = linear[2] * (pp + sqr(tau * p01));
  if (a0 + a1 + a2 == 0.0) {
    w.omega = linear;
    return w;
  }
  return finish(w, a0, a1, a2);
}

CompactRow compact_row(const std::array<double, 3>& w) {
  constexpr double third = 1.0 / 3.0, sixth = 1.0 / 6.0;
  return {{(2.0 * w[0] + w[1]) * third, (w[0] + 2.0 * (w[1] + w[2])) * third, w[2] * third},
          {w[0] * sixth, (5.0 * (w[0] + w[1]) + w[2]) * sixth, (w[1] + 5.0 * w[2]) * sixth}};
}

namespace {

// Hot-path fusion of smoothness_indicators + weno_z_weights + compact_row for
// the compact scheme: the same arithmetic as the public entry points, but with
// no intermediate structs, dispatch, or redundant divisions.  The rare
// huge-indicator fallback defers to the public function.
//
// noinline keeps a single machine-code instance: the minus and plus sides of
// the pair assembly both route through it, and separately inlined copies
// could contract multiply-add pairs differently, breaking the bit-exact
// mirror symmetry of the two sides.  The row's right-hand side value is
// computed here too so the whole per-row arithmetic costs one call.
[[gnu::noinline]] void fvcw_compact_row(const double* v, double eps, CompactRow& row,
                                        double& rhs) {
  const double b0 = (13.0 / 12.0) * sqr(v[0] - 2.0 * v[1] + v[2]) +
                    0.25 * sqr(v[0] - 4.0 * v[1] + 3.0 * v[2]);
  const double b1 = (13.0 / 12.0) * sqr(v[1] - 2.0 * v[2] + v[3]) + 0.25 * sqr(v[1] - v[3]);
  const double b2 = (13.0 / 12.0) * sqr(v[2] - 2.0 * v[3] + v[4]) +
                    0.25 * sqr(3.0 * v[2] - 4.0 * v[3] + v[4]);
  const std::array<double, 3>& lin = kCompactLinearWeights;
  const double g0 = b0 + eps, g1 = b1 + eps, g2 = b2 + eps;
  double w0, w1, w2;
  if (std::max({g0, g1, g2}) > kProductCap) {
    const StencilWeights w = weno_z_weights({b0, b1, b2}, eps, lin);
    w0 = w.omega[0];
    w1 = w.omega[1];
    w2 = w.omega[2];
  } else {
    const double tau = std::abs(b2 - b0);
    const double p01 = g0 * g1, p02 = g0 * g2, p12 = g1 * g2;
    const double pp = sqr(g0 * p12);
    const double a0 = lin[0] * (pp + sqr(tau * p12));
    const double a1 = lin[1] * (pp + sqr(tau * p02));
    const double a2 = lin[2] * (pp + sqr(tau * p01));
    const double sum = a0 + a1 + a2;
    if (sum == 0.0) {
      w0 = lin[0];
      w1 = lin[1];
      w2 = lin[2];
    } else {
      const double inv = 1.0 / sum;
      w0 = a0 * inv;
      w1 = a1 * inv;
      w2 = a2 * inv;
    }
  }
  constexpr double third = 1.0 / 3.0, sixth = 1.0 / 6.0;
  row.lhs = {(2.0 * w0 + w1) * third, (w0 + 2.0 * (w1 + w2)) * third, w2 * third};
  row.rhs = {w0 * sixth, (5.0 * (w0 + w1) + w2) * sixth, (w1 + 5.0 * w2) * sixth};
  rhs = row.rhs[0] * v[1] + row.rhs[1] * v[2] + row.rhs[2] * v[3];
}

// Right-hand side of a pinned (linear-weight) compact row.  noinline for the
// same reason as fvcw_compact_row: both sides of the pair assembly must
// evaluate this dot product with identical rounding.
[[gnu::noinline]] double compact_rhs(const CompactRow& row, const double* v) {
  return row.rhs[0] * v[1] + row.rhs[1] * v[2] + row.rhs[2] * v[3];
}

}  // namespace

double weno5_point_value(const double* v, const StencilWeights& w, Side side) {
  if (side == Side::left) {
    const double q0 = (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) * (1.0 / 6.0);
    const double q1 = (-v[1] + 5.0 * v[2] + 2.0 * v[3]) * (1.0 / 6.0);
    const double q2 = (2.0 * v[2] + 5.0 * v[3] - v[4]) * (1.0 / 6.0);
    return w.omega[0] * q0 + w.omega[1] * q1 + w.omega[2] * q2;
  }
  const double q0 = (2.0 * v[4] - 7.0 * v[3] + 11.0 * v[2]) * (1.0 / 6.0);
  const double q1 = (-v[3] + 5.0 * v[2] + 2.0 * v[1]) * (1.0 / 6.0);
  const double q2 = (2.0 * v[2] + 5.0 * v[1] - v[0]) * (1.0 / 6.0);
  return w.omega[0] * q0 + w.omega[1] * q1 + w.omega[2] * q2;
}

// ---------------------------------------------------------------------------
// Scalar tridiagonal solvers.

namespace {

void check_tridiagonal_args(std::span<const double> sub, std::span<const double> diag,
                            std::span<const double> sup, std::span<const double> rhs,
                            std::span<double> x) {
  const size_t m = diag.size();
  if (m < 3) throw SolverError("tridiagonal solve: need at least 3 rows");
  if (sub.size() != m || sup.size() != m || rhs.size() != m || x.size() != m)
    throw SolverError("tridiagonal solve: band/rhs size mismatch");
}

double band_scale(std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup) {
  double s = 0.0;
  for (size_t i = 0; i < diag.size(); ++i)
    s = std::max({s, std::abs(sub[i]), std::abs(diag[i]), std::abs(sup[i])});
  return s;
}

}  // namespace

void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                       std::span<const double> sup, std::span<const double> rhs,
                       std::span<double> x) {
  check_tridiagonal_args(sub, diag, sup, rhs, x);
  const size_t m = diag.size();
  const double tol = 1e-14 * band_scale(sub, diag, sup);
  std::vector<double> cp(m);
  double piv = diag[0];
  if (std::abs(piv) <= tol) throw SingularSystem("tridiagonal solve: zero pivot in row 0");
  cp[0] = sup[0] / piv;
  x[0] = rhs[0] / piv;
  for (size_t i = 1; i < m; ++i) {
    piv = diag[i] - sub[i] * cp[i - 1];
    if (std::abs(piv) <= tol)
      throw SingularSystem("tridiagonal solve: zero pivot in row " + std::to_string(i));
    cp[i] = sup[i] / piv;
    x[i] = (rhs[i] - sub[i] * x[i - 1]) / piv;
  }
  for (size_t i = m - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
}

void solve_cyclic_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                              std::span<const double> sup, std::span<const double> rhs,
                              std::span<double> x) {
  check_tridiagonal_args(sub, diag, sup, rhs, x);
  const size_t m = diag.size();
  // Condense on x[m-1]: solve the leading (m-1)-row system for y (plain rhs)
  // and z (the column multiplying x[m-1]), then close with row m-1.
  const double tol = 1e-14 * band_scale(sub, diag, sup);
  const size_t t = m - 1;
  std::vector<double> cp(t), y(t), z(t);
  double piv = diag[0];
  if (std::abs(piv) <= tol) throw SingularSystem("cyclic tridiagonal solve: zero pivot in row 0");
  cp[0] = (t > 1 ? sup[0] : 0.0) / piv;
  y[0] = rhs[0] / piv;
  z[0] = -sub[0] / piv;  // corner coupling of row 0 to x[m-1]
  for (size_t i = 1; i < t; ++i) {
    piv = diag[i] - sub[i] * cp[i - 1];
    if (std::abs(piv) <= tol)
      throw SingularSystem("cyclic tridiagonal solve: zero pivot in row " + std::to_string(i));
    cp[i] = (i < t - 1 ? sup[i] : 0.0) / piv;
    const double corner = (i == t - 1 ? -sup[i] : 0.0);
    y[i] = (rhs[i] - sub[i] * y[i - 1]) / piv;
    z[i] = (corner - sub[i] * z[i - 1]) / piv;
  }
  for (size_t i = t - 1; i-- > 0;) {
    y[i] -= cp[i] * y[i + 1];
    z[i] -= cp[i] * z[i + 1];
  }
  const double den = diag[t] + sub[t] * z[t - 1] + sup[t] * z[0];
  if (std::abs(den) <= tol)
    throw SingularSystem("cyclic tridiagonal solve: zero pivot in closing row");
  const double xm = (rhs[t] - sub[t] * y[t - 1] - sup[t] * y[0]) / den;
  for (size_t i = 0; i < t; ++i) x[i] = y[i] + z[i] * xm;
  x[t] = xm;
}

// ---------------------------------------------------------------------------
// Block-tridiagonal chasing solver.

void BlockTriSystem::resize(int rows, bool cyc) {
  m = rows;
  cyclic = cyc;
  A.resize(rows);
  B.resize(rows);
  C.resize(rows);
  r.resize(rows);
}

void BlockThomasSolver::solve(const BlockTriSystem& sys, std::vector<Vec3>& x) {
  const int m = sys.m;
  if (m < 3) throw SolverError("block-tridiagonal solve: need at least 3 rows");
  x.resize(m);
  Lu3 lu;

  if (!sys.cyclic) {
    p_.resize(m);
    q_.resize(m);
    Mat3 mdiag = sys.B[0];
    for (int i = 0; i < m; ++i) {
      if (i > 0) mulsub_into(mdiag, sys.B[i], sys.A[i], p_[i - 1]);
      if (!lu.factor(mdiag))
        throw SingularSystem("block-tridiagonal solve: singular pivot block at interface row " +
                             std::to_string(i));
      if (i < m - 1) lu.solve_mat_into(sys.C[i], p_[i]);
      q_[i] = lu.solve(i > 0 ? vsub(sys.r[i], matvec(sys.A[i], q_[i - 1])) : sys.r[i]);
    }
    x[m - 1] = q_[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = vsub(q_[i], matvec(p_[i], x[i + 1]));
    return;
  }

  // Cyclic: carry x[m-1] through the leading (m-1)-row system,
  //   x[i] = y[i] + Z[i] x[m-1],
  // then close with row m-1.  y lives in q_, Z in z_.
  const int t = m - 1;
  p_.resize(t);
  q_.resize(t);
  z_.resize(t);
  Mat3 mdiag = sys.B[0];
  Mat3 g;
  for (int i = 0; i < t; ++i) {
    if (i > 0) mulsub_into(mdiag, sys.B[i], sys.A[i], p_[i - 1]);
    if (!lu.factor(mdiag))
      throw SingularSystem("cyclic block-tridiagonal solve: singular pivot block at interface row " +
                           std::to_string(i));
    if (i < t - 1) lu.solve_mat_into(sys.C[i], p_[i]);
    q_[i] = lu.solve(i > 0 ? vsub(sys.r[i], matvec(sys.A[i], q_[i - 1])) : sys.r[i]);
    if (i == 0)
      g = mneg(sys.A[0]);
    else
      g = mneg(matmul(sys.A[i], z_[i - 1]));
    if (i == t - 1) g = msub(g, sys.C[i]);
    lu.solve_mat_into(g, z_[i]);
  }
  for (int i = t - 2; i >= 0; --i) {
    q_[i] = vsub(q_[i], matvec(p_[i], q_[i + 1]));
    mulsub_into(z_[i], z_[i], p_[i], z_[i + 1]);
  }
  const Mat3 s = madd(sys.B[t], madd(matmul(sys.A[t], z_[t - 1]), matmul(sys.C[t], z_[0])));
  if (!lu.factor(s))
    throw SingularSystem("cyclic block-tridiagonal solve: singular closing block");
  const Vec3 wa = matvec(sys.A[t], q_[t - 1]);
  const Vec3 wc = matvec(sys.C[t], q_[0]);
  const Vec3 xm = lu.solve({sys.r[t][0] - wa[0] - wc[0], sys.r[t][1] - wa[1] - wc[1],
                            sys.r[t][2] - wa[2] - wc[2]});
  x[t] = xm;
  for (int i = 0; i < t; ++i) {
    const Vec3 corr = matvec(z_[i], xm);
    x[i] = {q_[i][0] + corr[0], q_[i][1] + corr[1], q_[i][2] + corr[2]};
  }
}

// Interleaved dual solve.  Every statement of solve() appears twice, once per
// lane, in the same per-lane order, so each lane's result is bitwise the same
// as a standalone solve(); the interleaving only lets the processor overlap
// the two serial elimination chains.
void BlockThomasSolver::solve_pair(const BlockTriSystem& sa, const BlockTriSystem& sb,
                                   std::vector<Vec3>& xa, std::vector<Vec3>& xb) {
  if (sa.m != sb.m || sa.cyclic != sb.cyclic) {
    solve(sa, xa);
    solve(sb, xb);
    return;
  }
  const int m = sa.m;
  if (m < 3) throw SolverError("block-tridiagonal solve: need at least 3 rows");
  xa.resize(m);
  xb.resize(m);
  Lu3 la, lb;

  if (!sa.cyclic) {
    p_.resize(m);
    q_.resize(m);
    p2_.resize(m);
    q2_.resize(m);
    Mat3 da = sa.B[0];
    Mat3 db = sb.B[0];
    for (int i = 0; i < m; ++i) {
      if (i > 0) {
        mulsub_into(da, sa.B[i], sa.A[i], p_[i - 1]);
        mulsub_into(db, sb.B[i], sb.A[i], p2_[i - 1]);
      }
      const bool oka = la.factor(da);
      const bool okb = lb.factor(db);
      if (!oka || !okb)
        throw SingularSystem("block-tridiagonal solve: singular pivot block at interface row " +
                             std::to_string(i));
      if (i < m - 1) {
        la.solve_mat_into(sa.C[i], p_[i]);
        lb.solve_mat_into(sb.C[i], p2_[i]);
      }
      q_[i] = la.solve(i > 0 ? vsub(sa.r[i], matvec(sa.A[i], q_[i - 1])) : sa.r[i]);
      q2_[i] = lb.solve(i > 0 ? vsub(sb.r[i], matvec(sb.A[i], q2_[i - 1])) : sb.r[i]);
    }
    xa[m - 1] = q_[m - 1];
    xb[m - 1] = q2_[m - 1];
    for (int i = m - 2; i >= 0; --i) {
      xa[i] = vsub(q_[i], matvec(p_[i], xa[i + 1]));
      xb[i] = vsub(q2_[i], matvec(p2_[i], xb[i + 1]));
    }
    return;
  }

  const int t = m - 1;
  p_.resize(t);
  q_.resize(t);
  z_.resize(t);
  p2_.resize(t);
  q2_.resize(t);
  z2_.resize(t);
  Mat3 da = sa.B[0];
  Mat3 db = sb.B[0];
  Mat3 ga, gb;
  for (int i = 0; i < t; ++i) {
    if (i > 0) {
      mulsub_into(da, sa.B[i], sa.A[i], p_[i - 1]);
      mulsub_into(db, sb.B[i], sb.A[i], p2_[i - 1]);
    }
    const bool oka = la.factor(da);
    const bool okb = lb.factor(db);
    if (!oka || !okb)
      throw SingularSystem("cyclic block-tridiagonal solve: singular pivot block at interface row " +
                           std::to_string(i));
    if (i < t - 1) {
      la.solve_mat_into(sa.C[i], p_[i]);
      lb.solve_mat_into(sb.C[i], p2_[i]);
    }
    q_[i] = la.solve(i > 0 ? vsub(sa.r[i], matvec(sa.A[i], q_[i - 1])) : sa.r[i]);
    q2_[i] = lb.solve(i > 0 ? vsub(sb.r[i], matvec(sb.A[i], q2_[i - 1])) : sb.r[i]);
    if (i == 0) {
      ga = mneg(sa.A[0]);
      gb = mneg(sb.A[0]);
    } else {
      ga = mneg(matmul(sa.A[i], z_[i - 1]));
      gb = mneg(matmul(sb.A[i], z2_[i - 1]));
    }
    if (i == t - 1) {
      ga = msub(ga, sa.C[i]);
      gb = msub(gb, sb.C[i]);
    }
    la.solve_mat_into(ga, z_[i]);
    lb.solve_mat_into(gb, z2_[i]);
  }
  for (int i = t - 2; i >= 0; --i) {
    q_[i] = vsub(q_[i], matvec(p_[i], q_[i + 1]));
    q2_[i] = vsub(q2_[i], matvec(p2_[i], q2_[i + 1]));
    mulsub_into(z_[i], z_[i], p_[i], z_[i + 1]);
    mulsub_into(z2_[i], z2_[i], p2_[i], z2_[i + 1]);
  }
  const Mat3 fa = madd(sa.B[t], madd(matmul(sa.A[t], z_[t - 1]), matmul(sa.C[t], z_[0])));
  const Mat3 fb = madd(sb.B[t], madd(matmul(sb.A[t], z2_[t - 1]), matmul(sb.C[t], z2_[0])));
  const bool oka = la.factor(fa);
  const bool okb = lb.factor(fb);
  if (!oka || !okb)
    throw SingularSystem("cyclic block-tridiagonal solve: singular closing block");
  const Vec3 waa = matvec(sa.A[t], q_[t - 1]);
  const Vec3 wca = matvec(sa.C[t], q_[0]);
  const Vec3 wab = matvec(sb.A[t], q2_[t - 1]);
  const Vec3 wcb = matvec(sb.C[t], q2_[0]);
  const Vec3 xma = la.solve({sa.r[t][0] - waa[0] - wca[0], sa.r[t][1] - waa[1] - wca[1],
                             sa.r[t][2] - waa[2] - wca[2]});
  const Vec3 xmb = lb.solve({sb.r[t][0] - wab[0] - wcb[0], sb.r[t][1] - wab[1] - wcb[1],
                             sb.r[t][2] - wab[2] - wcb[2]});
  xa[t] = xma;
  xb[t] = xmb;
  for (int i = 0; i < t; ++i) {
    const Vec3 ca = matvec(z_[i], xma);
    const Vec3 cb = matvec(z2_[i], xmb);
    xa[i] = {q_[i][0] + ca[0], q_[i][1] + ca[1], q_[i][2] + ca[2]};
    xb[i] = {q2_[i][0] + cb[0], q2_[i][1] + cb[1], q2_[i][2] + cb[2]};
  }
}

// ---------------------------------------------------------------------------
// Reconstruction driver.

namespace {

// Right-eigenvector recombination: state = sum_k val[k] * r^(k).
inline ConservedState recombine(const EigenSystem& es, const double val[3]) {
  return {es.right.m[0][0] * val[0] + es.right.m[0][1] * val[1] + es.right.m[0][2] * val[2],
          es.right.m[1][0] * val[0] + es.right.m[1][1] * val[1] + es.right.m[1][2] * val[2],
          es.right.m[2][0] * val[0] + es.right.m[2][1] * val[1] + es.right.m[2][2] * val[2]};
}

}  // namespace

StencilWeights Reconstructor::weights(const std::array<double, 3>& beta,
                                      const std::array<double, 3>& linear) const {
  if (mode_.scheme == SchemeKind::weno_js) return weno_js_weights(beta, mode_.eps, linear);
  return weno_z_weights(beta, mode_.eps, linear);  // weno_z and fvcw closures
}

// Explicit five-cell trace at the right edge of padded cell p (the minus trace
// of the interface between cells p and p+1).  Used directly by the explicit
// schemes and as the boundary closure of the compact ones.  noinline so the
// per-side closure calls of the pair assembly share one code instance and
// round identically.
[[gnu::noinline]] ConservedState Reconstructor::explicit_minus_trace(
    std::span<const ConservedState> padded, int p, bool pinned) {
  if (mode_.variables == VariableMode::characteristic) {
    const RoeState roe = roe_average(padded[p], padded[p + 1], gas_);
    const EigenSystem es = eigen_system(roe, gas_);
    double val[3];
    for (int k = 0; k < 3; ++k) {
      const double* l = es.left.m[k];
      double v[5];
      for (int c = 0; c < 5; ++c) {
        const ConservedState& q = padded[p - 2 + c];
        v[c] = l[0] * q.rho + l[1] * q.mom + l[2] * q.ene;
      }
      StencilWeights w;
      if (pinned) {
        w.omega = kExplicitLinearWeights;
      } else {
        w = weights(smoothness_indicators(v), kExplicitLinearWeights);
      }
      val[k] = weno5_point_value(v, w, Side::left);
    }
    return recombine(es, val);
  }
  ConservedState out;
  for (int c = 0; c < 3; ++c) {
    double v[5];
    for (int j = 0; j < 5; ++j) v[j] = comp(padded[p - 2 + j], c);
    StencilWeights w;
    if (pinned) {
      w.omega = kExplicitLinearWeights;
    } else {
      w = weights(smoothness_indicators(v), kExplicitLinearWeights);
    }
    set_comp(out, c, weno5_point_value(v, w, Side::left));
  }
  return out;
}

void Reconstructor::explicit_pass(std::span<const ConservedState> padded, int n,
                                  std::vector<ConservedState>& out) {
  const int gw = kGhostWidth;
  for (int i = 0; i <= n; ++i) out[i] = explicit_minus_trace(padded, gw + i - 1, false);
}

// Assembles the minus-side block system (sys_) and the plus-side system of
// the mirrored pass (sys2_) in one sweep.  Per interface the Roe average, the
// eigen-decomposition, and the characteristic projections are computed once
// and shared: the mirrored pass's left rows are sign/permutation images of
// the originals (velocity-odd components flip), and its projections are the
// same dot products read backwards over the six-cell union window.  Both
// sides then flow through identical code, so every value matches what the
// mirrored pass computes, bit for bit.
void Reconstructor::assemble_char_pair(std::span<const ConservedState> padded,
                                       std::span<const ConservedState> mirrored, int n,
                                       bool periodic) {
  const int gw = kGhostWidth;
  const bool pinned = mode_.scheme == SchemeKind::linear_compact;
  const CompactRow lin_row = compact_row(kCompactLinearWeights);
  const int m = periodic ? n : n + 1;
  const int lo = periodic ? 0 : 1;  // first compact interior row
  const int hi = periodic ? m : m - 1;

  sys_.resize(m, periodic);
  sys2_.resize(m, periodic);
  if (!periodic) {
    for (int row : {0, m - 1}) {
      for (int k = 0; k < 3; ++k)
        for (int c = 0; c < 3; ++c) {
          sys_.A[row].m[k][c] = sys2_.A[row].m[k][c] = 0.0;
          sys_.B[row].m[k][c] = sys2_.B[row].m[k][c] = (k == c) ? 1.0 : 0.0;
          sys_.C[row].m[k][c] = sys2_.C[row].m[k][c] = 0.0;
        }
      const int p = gw + (row == 0 ? -1 : n - 1);
      const ConservedState t = explicit_minus_trace(padded, p, pinned);
      sys_.r[row] = {t.rho, t.mom, t.ene};
      const ConservedState t2 = explicit_minus_trace(mirrored, p, pinned);
      sys2_.r[row] = {t2.rho, t2.mom, t2.ene};
    }
  }
  for (int i = lo; i < hi; ++i) {
    const int p = gw + i - 1;  // owner cell of interface i
    const RoeState roe = roe_average(padded[p], padded[p + 1], gas_);
    const EigenSystem es = eigen_system(roe, gas_);
    const ConservedState* win = &padded[p - 2];

    // Characteristic projections of the six cells feeding either side.  Each
    // product is rounded separately (nofuse) so every array slot performs the
    // identical rounding sequence: the plus side reads these same dots back
    // in permuted order, which is only exact if no slot was contracted into a
    // different multiply-add shape than its mirror partner.
    double d[3][6];
    for (int k = 0; k < 3; ++k) {
      const double* l = es.left.m[k];
      for (int c = 0; c < 6; ++c)
        d[k][c] = nofuse(l[0] * win[c].rho) + nofuse(l[1] * win[c].mom) +
                  nofuse(l[2] * win[c].ene);
    }
    // Left rows of the mirrored interface: family order reverses, the
    // momentum component flips sign.
    double lp[3][3];
    double vp[3][5];
    for (int k = 0; k < 3; ++k) {
      lp[k][0] = es.left.m[2 - k][0];
      lp[k][1] = -es.left.m[2 - k][1];
      lp[k][2] = es.left.m[2 - k][2];
      for (int c = 0; c < 5; ++c) vp[k][c] = d[2 - k][5 - c];
    }

    // Row of the mirrored system that owns this interface.
    const int i2 = periodic ? (i == 0 ? 0 : n - i) : n - i;
    BlockTriSystem* const tgt[2] = {&sys_, &sys2_};
    const int ridx[2] = {i, i2};
    for (int s = 0; s < 2; ++s) {
      BlockTriSystem& sys = *tgt[s];
      const int ri = ridx[s];
      for (int k = 0; k < 3; ++k) {
        const double* l = s == 0 ? es.left.m[k] : lp[k];
        const double* v = s == 0 ? &d[k][0] : &vp[k][0];
        CompactRow row;
        double rhs;
        if (pinned) {
          row = lin_row;
          rhs = compact_rhs(row, v);
        } else {
          fvcw_compact_row(v, mode_.eps, row, rhs);
        }
        for (int c = 0; c < 3; ++c) {
          sys.A[ri].m[k][c] = row.lhs[0] * l[c];
          sys.B[ri].m[k][c] = row.lhs[1] * l[c];
          sys.C[ri].m[k][c] = row.lhs[2] * l[c];
        }
        sys.r[ri][k] = rhs;
      }
    }
  }
}

void Reconstructor::compact_pass(std::span<const ConservedState> padded, int n, bool periodic,
                                 std::vector<ConservedState>& out) {
  const int gw = kGhostWidth;
  const bool pinned = mode_.scheme == SchemeKind::linear_compact;
  const CompactRow lin_row = compact_row(kCompactLinearWeights);
  const int m = periodic ? n : n + 1;
  const int lo = periodic ? 0 : 1;  // first compact interior row
  const int hi = periodic ? m : m - 1;

  // Conservative variables: three decoupled scalar systems.
  ConservedState t0, tn;
  if (!periodic) {
    t0 = explicit_minus_trace(padded, gw - 1, pinned);
    tn = explicit_minus_trace(padded, gw + n - 1, pinned);
  }
  for (int c = 0; c < 3; ++c) {
    auto& bd = sbands_[c];
    bd.sub.resize(m);
    bd.diag.resize(m);
    bd.sup.resize(m);
    bd.rhs.resize(m);
    if (!periodic) {
      bd.sub[0] = 0.0; bd.diag[0] = 1.0; bd.sup[0] = 0.0; bd.rhs[0] = comp(t0, c);
      bd.sub[m - 1] = 0.0; bd.diag[m - 1] = 1.0; bd.sup[m - 1] = 0.0; bd.rhs[m - 1] = comp(tn, c);
    }
  }
  for (int i = lo; i < hi; ++i) {
    const int p = gw + i - 1;
    for (int c = 0; c < 3; ++c) {
      double v[5];
      for (int j = 0; j < 5; ++j) v[j] = comp(padded[p - 2 + j], c);
      CompactRow row;
      double rhs;
      if (pinned) {
        row = lin_row;
        rhs = compact_rhs(row, v);
      } else {
        fvcw_compact_row(v, mode_.eps, row, rhs);
      }
      auto& bd = sbands_[c];
      bd.sub[i] = row.lhs[0];
      bd.diag[i] = row.lhs[1];
      bd.sup[i] = row.lhs[2];
      bd.rhs[i] = rhs;
    }
  }
  sx_.resize(m);
  for (int c = 0; c < 3; ++c) {
    const auto& bd = sbands_[c];
    if (periodic)
      solve_cyclic_tridiagonal(bd.sub, bd.diag, bd.sup, bd.rhs, sx_);
    else
      solve_tridiagonal(bd.sub, bd.diag, bd.sup, bd.rhs, sx_);
    for (int i = 0; i < m; ++i) set_comp(out[i], c, sx_[i]);
  }
  if (periodic) out[n] = out[0];
}

void Reconstructor::minus_pass(std::span<const ConservedState> padded, int n, bool periodic,
                               std::vector<ConservedState>& out) {
  out.resize(n + 1);
  if (mode_.scheme == SchemeKind::weno_js || mode_.scheme == SchemeKind::weno_z)
    explicit_pass(padded, n, out);
  else
    compact_pass(padded, n, periodic, out);
}

void Reconstructor::reconstruct_padded(std::span<const ConservedState> padded, int n,
                                       bool periodic, InterfaceStates& out) {
  if (n < 5) throw SolverError("reconstruct: need at least 5 cells");
  if (padded.size() != static_cast<size_t>(n) + 2 * kGhostWidth)
    throw SolverError("reconstruct: padded array has wrong size");
  out.resize(n + 1);

  // The plus traces are the mirror image of the minus pass run on the
  // reflected data; this is the definition of the plus-side scheme, so the two
  // sides are symmetric by construction.
  const int len = n + 2 * kGhostWidth;
  mirrored_.resize(len);
  for (int k = 0; k < len; ++k) mirrored_[k] = mirror(padded[len - 1 - k]);

  const bool compact =
      mode_.scheme == SchemeKind::fvcw || mode_.scheme == SchemeKind::linear_compact;
  if (compact && mode_.variables == VariableMode::characteristic) {
    // Assemble both block systems in one sweep and run the two chases as one
    // interleaved solve; each side's arithmetic is unchanged.
    assemble_char_pair(padded, mirrored_, n, periodic);
    solver_.solve_pair(sys_, sys2_, x_, x2_);
    const int m = periodic ? n : n + 1;
    for (int i = 0; i < m; ++i) out.minus[i] = {x_[i][0], x_[i][1], x_[i][2]};
    if (periodic) out.minus[n] = out.minus[0];
    for (int i = 0; i < m; ++i) out.plus[i] = {x2_[i][0], x2_[i][1], x2_[i][2]};
    if (periodic) out.plus[n] = out.plus[0];
  } else {
    minus_pass(padded, n, periodic, out.minus);
    minus_pass(mirrored_, n, periodic, out.plus);
  }
  std::reverse(out.plus.begin(), out.plus.end());
  for (auto& q : out.plus) q = mirror(q);
}

void Reconstructor::reconstruct(const Field& f, InterfaceStates& out) {
  fill_ghosts(f, kGhostWidth, padded_);
  reconstruct_padded(padded_, f.grid.n, f.bc == BoundaryKind::periodic, out);
}

InterfaceStates reconstruct_interfaces(const Field& f, const ReconstructionMode& mode,
                                       const GasConstants& gas) {
  Reconstructor rec(mode, gas);
  InterfaceStates out;
  rec.reconstruct(f, out);
  return out;
}

}  // namespace cweno

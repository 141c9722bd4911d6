#pragma once

#include <utility>

#include "muw/common.hpp"
#include "muw/operator.hpp"
#include "muw/positive.hpp"
#include "muw/report.hpp"
#include "muw/rng.hpp"
#include "muw/slices.hpp"
#include "muw/space.hpp"

namespace muw {

/// Unitary on H (x) H, candidate for the pentagon equation.
struct MultUnitary {
  Operator w;
  long h_dim;

  explicit MultUnitary(Operator op, double tol = kExactTol)
      : w(std::move(op)), h_dim(0) {
    if (!w.is_endo() || w.domain().factor_count() != 2)
      throw ShapeError("multiplicative unitary must be an endomorphism on two factors");
    const Factor& f0 = w.domain().factor(0);
    const Factor& f1 = w.domain().factor(1);
    if (!(f0 == f1) || f0.conjugate)
      throw ShapeError("multiplicative unitary needs two equal non-conjugate factors");
    h_dim = f0.dim;
    const Mat& m = w.matrix();
    const Mat defect = m.adjoint() * m - Mat::Identity(m.rows(), m.cols());
    if (op_norm(defect) > tol)
      throw PreconditionError("operator is not unitary within tolerance");
  }

  Space h_space() const { return w.domain().select({0}); }
};

/// Certificate data: positive Q, Q_hat on H and the companion unitary on the
/// conjugate-tensor space.
struct ModularStructure {
  PositiveOperator q;
  PositiveOperator q_hat;
  Operator w_tilde;
};

/// || W23 W12 - W12 W13 W23 || on H^3; zero iff w is multiplicative.
inline double pentagon_residual(const MultUnitary& mu) {
  const long d = mu.h_dim;
  if (d * d * d > kDenseBudget)
    throw BudgetError("H^3 dimension exceeds the dense budget; use the probe-based lifted check");
  const Space h3 = Space::power(static_cast<int>(d), 3);
  const Operator w12 = leg_embed(mu.w, {0, 1}, h3);
  const Operator w13 = leg_embed(mu.w, {0, 2}, h3);
  const Operator w23 = leg_embed(mu.w, {1, 2}, h3);
  return (w23 * w12 - w12 * w13 * w23).norm();
}

/// Dual: sigma W* sigma; an involution, and itself multiplicative.
inline MultUnitary dual(const MultUnitary& mu) {
  const Operator sigma = flip(mu.w.domain());
  return MultUnitary(sigma * mu.w.adjoint() * sigma);
}

/// The unique candidate companion for (w, q): conjugate the first-leg partial
/// transpose by 1 (x) q. Entrywise this weights w's reshuffle by q-eigenvalue
/// ratios, so it is invariant under q -> lambda q. The candidate satisfies the
/// defining pairing identically; w is modular with this q only if the result
/// is unitary.
inline Operator build_wtilde(const MultUnitary& mu, const PositiveOperator& q) {
  if (q.space() != mu.h_space()) throw ShapeError("build_wtilde: q must live on H");
  const Operator wt1 = partial_transpose(mu.w, 0);  // on H~ (x) H
  const Space hbar_h = wt1.domain();
  const Operator lift_q = leg_embed(Operator::on(q.space(), q.op().matrix()), {1}, hbar_h);
  const Operator lift_qinv = leg_embed(Operator::on(q.space(), q.inverse().matrix()), {1}, hbar_h);
  return lift_qinv * wt1 * lift_q;
}

inline Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace detail {

/// Max deviation of the defining pairing
///   <x (x) u, W (z (x) y)> = <z~ (x) Qu, Wt (x~ (x) Q^{-1} y)>
/// over the full product-basis grid (d <= 16) or seeded random probes.
inline double pairing_residual(const MultUnitary& mu, const PositiveOperator& q,
                               const Operator& wtilde, std::uint64_t seed, int probes = 512) {
  const long d = mu.h_dim;
  const Mat& w = mu.w.matrix();
  const Mat& wt = wtilde.matrix();
  const Mat qm = q.op().matrix();
  const Mat qinv = q.inverse().matrix();
  if (d <= 16) {
    // RHS[(z,u),(x,y)] = [(I (x) Q) Wt (I (x) Q^{-1})]
    const Mat m = kron(Mat::Identity(d, d), qm) * wt * kron(Mat::Identity(d, d), qinv);
    double worst = 0.0;
    for (long x = 0; x < d; ++x)
      for (long u = 0; u < d; ++u)
        for (long z = 0; z < d; ++z)
          for (long y = 0; y < d; ++y)
            worst = std::max(worst, std::abs(w(x * d + u, z * d + y) - m(z * d + u, x * d + y)));
    return worst;
  }
  Rng rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Vec x = rng.unit_vector(d), z = rng.unit_vector(d);
    const Vec u = rng.unit_vector(d), y = rng.unit_vector(d);
    const cd lhs = kron_vec(x, u).dot(Vec(w * kron_vec(z, y)));
    const Vec bra = kron_vec(z.conjugate(), qm * u);
    const Vec ket = kron_vec(x.conjugate(), qinv * y);
    const cd rhs = bra.dot(Vec(wt * ket));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

/// Max deviation of the transported pairing
///   <x (x) u, W (z (x) y)> = <conj(Qhat z) (x) u, Wt (conj(Qhat^{-1} x) (x) y)>.
inline double transported_pairing_residual(const MultUnitary& mu, const PositiveOperator& q_hat,
                                           const Operator& wtilde, std::uint64_t seed,
                                           int probes = 512) {
  const long d = mu.h_dim;
  const Mat& w = mu.w.matrix();
  const Mat& wt = wtilde.matrix();
  const Mat qh = q_hat.op().matrix();
  const Mat qh_inv = q_hat.inverse().matrix();
  if (d <= 16) {
    // RHS[(z,u),(x,y)] = [(Qhat^T (x) I) Wt (conj(Qhat^{-1}) (x) I)]
    const Mat m = kron(Mat(qh.transpose()), Mat::Identity(d, d)) * wt *
                  kron(Mat(qh_inv.conjugate()), Mat::Identity(d, d));
    double worst = 0.0;
    for (long x = 0; x < d; ++x)
      for (long u = 0; u < d; ++u)
        for (long z = 0; z < d; ++z)
          for (long y = 0; y < d; ++y)
            worst = std::max(worst, std::abs(w(x * d + u, z * d + y) - m(z * d + u, x * d + y)));
    return worst;
  }
  Rng rng(seed + 0x5151);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Vec x = rng.unit_vector(d), z = rng.unit_vector(d);
    const Vec u = rng.unit_vector(d), y = rng.unit_vector(d);
    const cd lhs = kron_vec(x, u).dot(Vec(w * kron_vec(z, y)));
    const Vec bra = kron_vec((qh * z).conjugate(), u);
    const Vec ket = kron_vec((qh_inv * x).conjugate(), y);
    const cd rhs = bra.dot(Vec(wt * ket));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace detail

struct CheckOptions {
  double tol = kExactTol;
  std::uint64_t seed = 1;
};

/// All five certificate residuals for a supplied companion unitary:
///   r1 unitarity of Wt, r2 invariance of Qhat (x) Q under conjugation by W,
///   r3 the defining pairing, r4 commutation of Wt with Qhat^T (x) Q^{-1},
///   r5 the pairing transported to Qhat. Pentagon is reported alongside.
inline CheckReport check_modular(const MultUnitary& mu, const PositiveOperator& q,
                                 const PositiveOperator& q_hat, const Operator& wtilde,
                                 const CheckOptions& opts = {}) {
  if (q.space() != mu.h_space() || q_hat.space() != mu.h_space())
    throw ShapeError("check_modular: q and q_hat must live on H");
  const Space hbar_h = mu.h_space().conjugated().tensor(mu.h_space());
  if (wtilde.domain() != hbar_h || wtilde.codomain() != hbar_h)
    throw ShapeError("check_modular: w_tilde must be an endomorphism on H~ (x) H");

  CheckReport report;
  const long d = mu.h_dim;
  if (d * d * d <= kDenseBudget) report.add("pentagon", pentagon_residual(mu), opts.tol);

  const Mat& wt = wtilde.matrix();
  const Mat u1 = wt.adjoint() * wt - Mat::Identity(wt.rows(), wt.cols());
  report.add("r1", op_norm(u1), opts.tol, inf_norm(u1));

  const Operator qq = tensor(q_hat.op(), q.op());
  report.add("r2", (mu.w * qq * mu.w.adjoint() - qq).norm(), opts.tol);

  report.add("r3", detail::pairing_residual(mu, q, wtilde, opts.seed), opts.tol);

  const Operator mixed = tensor(q_hat.op().transposed(), q.inverse());
  report.add("r4", (wtilde * mixed - mixed * wtilde).norm(), opts.tol);

  report.add("r5", detail::transported_pairing_residual(mu, q_hat, wtilde, opts.seed), opts.tol);
  return report;
}

/// Builds the companion candidate and checks it.
inline CheckReport check_modular(const MultUnitary& mu, const PositiveOperator& q,
                                 const PositiveOperator& q_hat, const CheckOptions& opts = {}) {
  return check_modular(mu, q, q_hat, build_wtilde(mu, q), opts);
}

/// Manageable = modular with q_hat = q.
inline CheckReport check_manageable(const MultUnitary& mu, const PositiveOperator& q,
                                    const CheckOptions& opts = {}) {
  return check_modular(mu, q, q, opts);
}

/// Certificate for the dual unitary: roles of Q and Qhat swap and the
/// companion becomes (sigma Wt* sigma) transposed on both legs, the double
/// conjugate collapsing back to H~ (x) H.
inline ModularStructure dual_modular(const MultUnitary& mu, const PositiveOperator& q,
                                     const PositiveOperator& q_hat, const Operator& wtilde,
                                     const CheckOptions& opts = {}) {
  const CheckReport pre = check_modular(mu, q, q_hat, wtilde, opts);
  if (!pre.passed())
    throw PreconditionError("dual_modular: input certificate fails check_modular");
  const Space hbar_h = wtilde.domain();
  const Space h_hbar = hbar_h.swapped();
  const Operator swapped = flip(hbar_h) * wtilde.adjoint() * flip(h_hbar);
  return ModularStructure{q_hat, q, swapped.transposed()};
}

}  // namespace muw

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "muw/common.hpp"
#include "muw/munit.hpp"
#include "muw/operator.hpp"
#include "muw/positive.hpp"
#include "muw/qgroup.hpp"
#include "muw/report.hpp"
#include "muw/rng.hpp"
#include "muw/weyl.hpp"

namespace muw {

/// The intertwiner X = Q_2^{i s_1} Qhat_2^{-i s_1} on K (x) H, assembled
/// block-by-block over the spectrum of s (diagonal on the grid); no dense
/// exponential on K (x) H is ever formed.
inline Operator build_X(const WeylPair& wp, const PositiveOperator& q,
                        const PositiveOperator& q_hat) {
  if (q.space() != q_hat.space()) throw ShapeError("build_X: q and q_hat must share a space");
  const long n = wp.n_points();
  const long d = q.space().dim();
  Mat x = Mat::Zero(n * d, n * d);
  for (long j = 0; j < n; ++j) {
    const double sj = wp.positions()(j);
    const Mat block = q.pow(cd(0, sj)).matrix() * q_hat.pow(cd(0, -sj)).matrix();
    x.block(j * d, j * d, d, d) = block;
  }
  return Operator::on(wp.k_space().tensor(q.space()), std::move(x));
}

/// t -> Q_2^{it} W Q_2^{-it} = Qhat_1^{-it} W Qhat_1^{it}; exact whenever
/// Qhat (x) Q is invariant under conjugation by w.
inline double check_trick(const MultUnitary& mu, const PositiveOperator& q,
                          const PositiveOperator& q_hat, const std::vector<double>& t_samples) {
  double worst = 0.0;
  const Mat& w = mu.w.matrix();
  const long d = mu.h_dim;
  const Mat eye = Mat::Identity(d, d);
  for (double t : t_samples) {
    const Mat q2 = kron(eye, q.pow(cd(0, t)).matrix());
    const Mat q2i = kron(eye, q.pow(cd(0, -t)).matrix());
    const Mat qh1 = kron(q_hat.pow(cd(0, -t)).matrix(), eye);
    const Mat qh1i = kron(q_hat.pow(cd(0, t)).matrix(), eye);
    worst = std::max(worst, op_norm(q2 * w * q2i - qh1 * w * qh1i));
  }
  return worst;
}

/// Evaluation pipeline for W_M = X_12 W_24 X_12^* on K (x) H (x) K (x) H and
/// its companion; dense materialization is kept only within the budget.
class LiftedUnitary {
 public:
  LiftedUnitary(MultUnitary w, Operator x) : w_(std::move(w)), x_(std::move(x)) {
    if (x_.domain().factor_count() != 2 || !x_.is_endo())
      throw ShapeError("lifted unitary: X must be an endomorphism on K (x) H");
    if (x_.domain().factor(1).dim != w_.h_dim)
      throw ShapeError("lifted unitary: X's second factor must match H");
    m_space_ = x_.domain();
  }

  const MultUnitary& base() const { return w_; }
  const Operator& intertwiner() const { return x_; }
  const Space& m_space() const { return m_space_; }

  /// Dense W_M as an endomorphism of the two-factor space (K x H) (x) (K x H),
  /// materialized on demand (via leg embeddings, independent of apply) and
  /// only within the budget.
  std::optional<Operator> dense() const {
    const Space fine = m_space_.tensor(m_space_);
    if (fine.dim() > kDenseBudget) return std::nullopt;
    const Operator x12 = leg_embed(x_, {0, 1}, fine);
    const Operator w24 = leg_embed(w_.w, {1, 3}, fine);
    const Operator prod = x12 * w24 * x12.adjoint();
    const Space two = Space({Factor{static_cast<int>(m_space_.dim()), false},
                             Factor{static_cast<int>(m_space_.dim()), false}});
    return Operator::on(two, prod.matrix());
  }

  /// W_M acting on the (a, b) pair of M-legs of (K (x) H)^{copies}.
  Vec apply(const Vec& v, int leg_a = 0, int leg_b = 1, int copies = 2) const {
    const Space fine = fine_space(copies);
    Vec out = apply_on_legs(x_.adjoint().matrix(), {2 * leg_a, 2 * leg_a + 1}, fine, v);
    out = apply_on_legs(w_.w.matrix(), {2 * leg_a + 1, 2 * leg_b + 1}, fine, out);
    return apply_on_legs(x_.matrix(), {2 * leg_a, 2 * leg_a + 1}, fine, out);
  }

  /// Companion pipeline (X_12^T)^* Wt_24 X_12^T on the conjugated first pair.
  Vec apply_wtilde(const Vec& v, const Operator& wtilde) const {
    const Space fine = fine_space(2);
    Vec out = apply_on_legs(x_.matrix().transpose(), {0, 1}, fine, v);
    out = apply_on_legs(wtilde.matrix(), {1, 3}, fine, out);
    return apply_on_legs(x_.matrix().conjugate(), {0, 1}, fine, out);
  }

  /// alpha(m) = X (I (x) m) X^*, an injective unital *-homomorphism.
  Operator alpha(const Operator& m) const {
    const Operator lifted = tensor(Operator::identity(x_.domain().select({0})), m);
    return x_ * lifted * x_.adjoint();
  }

  /// beta(m) = I (x) m.
  Operator beta(const Operator& m) const {
    return tensor(Operator::identity(x_.domain().select({0})), m);
  }

  Space fine_space(int copies) const {
    Space out;
    for (int c = 0; c < copies; ++c) out = out.tensor(m_space_);
    return out;
  }

 private:
  MultUnitary w_;
  Operator x_;
  Space m_space_;
  std::optional<Operator> dense_;
};

inline LiftedUnitary build_WM(const MultUnitary& w, const Operator& x) {
  return LiftedUnitary(w, x);
}

/// || X^* (r (x) Q) X v - (r (x) Qhat) v || on bulk probes. Approximate only:
/// the underlying identity needs the exact Weyl relation, so the residual
/// converges under grid refinement instead of vanishing.
inline double check_tozs(const WeylPair& wp, const Operator& x, const PositiveOperator& q,
                         const PositiveOperator& q_hat,
                         const std::vector<std::pair<SpectralProbe, Vec>>& probes) {
  const long d = q.space().dim();
  const Mat r_dense = wp.r().op().matrix();
  const Space kh = x.domain();
  double worst = 0.0;
  for (const auto& [g, h] : probes) {
    Vec v = kron_vec(g.position, h);
    const double nrm = v.norm();
    v /= nrm;
    Vec lhs = x.matrix() * v;
    lhs = apply_on_legs(r_dense, {0}, kh, lhs);
    lhs = apply_on_legs(q.op().matrix(), {1}, kh, lhs);
    lhs = x.matrix().adjoint() * lhs;
    const Vec rhs = kron_vec(wp.apply_r_to_coeffs(1.0, g.coeffs), Vec(q_hat.op().matrix() * h)) / nrm;
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

/// Max pentagon defect of the lifted pipeline over probes on (K (x) H)^3.
/// Exact at finite dimension: the reduction uses only the invariance trick and
/// the spectral calculus of s, never the Weyl relation.
inline double pentagon_residual_WM(const LiftedUnitary& lifted, const std::vector<Vec>& probes) {
  double worst = 0.0;
  for (const Vec& v : probes) {
    const Vec lhs = lifted.apply(lifted.apply(v, 0, 1, 3), 1, 2, 3);
    const Vec rhs =
        lifted.apply(lifted.apply(lifted.apply(v, 1, 2, 3), 0, 2, 3), 0, 1, 3);
    worst = std::max(worst, (lhs - rhs).norm() / v.norm());
  }
  return worst;
}

/// Reduced pentagon identity X_34 W_46 X_34^* W_24 = W_24 W_26 X_34 W_46 X_34^*
/// evaluated directly on probes over (K (x) H)^3.
inline double check_redu(const LiftedUnitary& lifted, const std::vector<Vec>& probes) {
  const Space fine = lifted.fine_space(3);
  const Mat& xm = lifted.intertwiner().matrix();
  const Mat& wm = lifted.base().w.matrix();
  auto x34 = [&](const Vec& v) { return apply_on_legs(xm, {2, 3}, fine, v); };
  auto x34h = [&](const Vec& v) { return apply_on_legs(Mat(xm.adjoint()), {2, 3}, fine, v); };
  auto w46 = [&](const Vec& v) { return apply_on_legs(wm, {3, 5}, fine, v); };
  auto w24 = [&](const Vec& v) { return apply_on_legs(wm, {1, 3}, fine, v); };
  auto w26 = [&](const Vec& v) { return apply_on_legs(wm, {1, 5}, fine, v); };
  double worst = 0.0;
  for (const Vec& v : probes) {
    const Vec lhs = x34(w46(x34h(w24(v))));
    const Vec rhs = w24(w26(x34(w46(x34h(v)))));
    worst = std::max(worst, (lhs - rhs).norm() / v.norm());
  }
  return worst;
}

struct ManageabilityProbes {
  int count = 64;
  std::uint64_t seed = 1;
  double amp_cap = 64.0;    // spectral cap defining the domain stand-in
  double bulk_width = 1.0;  // width of bulk Gaussians for the commutator family
};

/// || [W_M, Q_M (x) Q_M] v || for v = g (x) h1 (x) g (x) h2 with a bulk probe
/// g. The second K leg commutes with the pipeline exactly, so r is applied to
/// its exact coefficients on both sides; only the first K leg goes through a
/// dense r after the pipeline.
inline double wm_commutator_residual(const LiftedUnitary& lifted, const WeylPair& wp,
                                     const PositiveOperator& q, const SpectralProbe& g,
                                     const Vec& h1, const Vec& h2) {
  const Mat qm = q.op().matrix();
  const Space fine = lifted.fine_space(2);
  const Vec rg = wp.apply_r_to_coeffs(1.0, g.coeffs);
  const Vec lhs = lifted.apply(kron_vec(kron_vec(rg, Vec(qm * h1)), kron_vec(rg, Vec(qm * h2))));
  Vec rhs = lifted.apply(kron_vec(kron_vec(g.position, h1), kron_vec(rg, h2)));
  rhs = apply_on_legs(wp.r().op().matrix(), {0}, fine, rhs);
  rhs = apply_on_legs(qm, {1}, fine, rhs);
  rhs = apply_on_legs(qm, {3}, fine, rhs);
  return (lhs - rhs).norm();
}

/// Manageability data of the lifted unitary: Q_M = r (x) Q and the companion
/// (X_12^T)^* Wt_24 X_12^T. The pairing family is exact at finite dimension;
/// the commutator family inherits the grid quality and is reported separately.
inline CheckReport check_manageability_WM(const LiftedUnitary& lifted, const WeylPair& wp,
                                          const PositiveOperator& q, const Operator& wtilde,
                                          const ManageabilityProbes& opts = {},
                                          double pairing_tol = kExactTol,
                                          double commutator_tol = 1.0) {
  const Space kh = lifted.m_space();
  const long nd = kh.dim();
  const long d = q.space().dim();
  Rng rng(opts.seed);
  const Mat qm = q.op().matrix();
  const Mat q_inv = q.inverse().matrix();

  double pairing = 0.0;
  for (int p = 0; p < opts.count; ++p) {
    const Vec xi = rng.unit_vector(nd);
    const Vec xi_p = rng.unit_vector(nd);
    const SpectralProbe eta_k = wp.spectral_probe(rng, opts.amp_cap);
    const SpectralProbe eta_k_p = wp.spectral_probe(rng, opts.amp_cap);
    const Vec eta_h = rng.unit_vector(d);
    const Vec eta_h_p = rng.unit_vector(d);
    const Vec eta = kron_vec(eta_k.position, eta_h);
    const Vec eta_p = kron_vec(eta_k_p.position, eta_h_p);

    const cd lhs = kron_vec(xi, eta).dot(lifted.apply(kron_vec(xi_p, eta_p)));

    const Vec qm_eta = kron_vec(wp.apply_r_to_coeffs(1.0, eta_k.coeffs), Vec(qm * eta_h));
    const Vec qm_inv_eta_p =
        kron_vec(wp.apply_r_to_coeffs(-1.0, eta_k_p.coeffs), Vec(q_inv * eta_h_p));
    const Vec bra = kron_vec(xi_p.conjugate(), qm_eta);
    const Vec ket = kron_vec(xi.conjugate(), qm_inv_eta_p);
    const cd rhs = bra.dot(lifted.apply_wtilde(ket, wtilde));
    pairing = std::max(pairing, std::abs(lhs - rhs));
  }

  // Commutator family on bulk product probes, fixed across grid refinements.
  const SpectralProbe bulk = wp.bulk_probe(opts.bulk_width);
  double commutator = 0.0;
  for (int p = 0; p < opts.count; ++p) {
    const Vec h1 = rng.unit_vector(d), h2 = rng.unit_vector(d);
    commutator = std::max(commutator, wm_commutator_residual(lifted, wp, q, bulk, h1, h2));
  }

  CheckReport report;
  report.add("manageability_pairing", pairing, pairing_tol);
  report.add("qm_commutator", commutator, commutator_tol);
  return report;
}

/// Dense slice algebras of W_M against the transported images beta(A) and
/// alpha(A-hat), plus the transported scaling group and antipode identities.
inline CheckReport span_transport(const LiftedUnitary& lifted, const WeylPair& wp,
                                  const SliceAlgebra& a, const SliceAlgebra& a_hat,
                                  const PositiveOperator& q, const AntipodeData& ad,
                                  const Operator& wtilde,
                                  const std::vector<double>& t_samples = {0.3, 1.7},
                                  double tol = 1e-8) {
  CheckReport report;
  const auto dense = lifted.dense();
  if (!dense) {
    report.note("dense budget exceeded; span transport skipped");
    return report;
  }
  const long n = wp.n_points();
  const long d = a.carrier().dim();
  const long nd = n * d;
  const MultUnitary wm(*dense);
  const SliceAlgebra am = algebra_left(wm);
  const SliceAlgebra am_hat = algebra_right(wm);
  report.stat("rank_A_M", am.rank());
  report.stat("rank_Ahat_M", am_hat.rank());
  report.stat("rank_beta_A", a.rank());
  report.stat("rank_alpha_Ahat", a_hat.rank());

  const Mat& xm = lifted.intertwiner().matrix();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  Mat beta_cols(nd * nd, a.rank());
  for (int j = 0; j < a.rank(); ++j)
    beta_cols.col(j) =
        vec_of(Mat(kron(Mat(Mat::Identity(n, n)), a.basis()[static_cast<std::size_t>(j)]))) * inv_sqrt_n;
  Mat alpha_cols(nd * nd, a_hat.rank());
  for (int j = 0; j < a_hat.rank(); ++j)
    alpha_cols.col(j) = vec_of(Mat(xm *
                                   kron(Mat(Mat::Identity(n, n)),
                                        a_hat.basis()[static_cast<std::size_t>(j)]) *
                                   xm.adjoint())) *
                        inv_sqrt_n;

  auto mutual = [&](const Mat& cols, const SliceAlgebra& target) {
    double worst = 0.0;
    for (long j = 0; j < cols.cols(); ++j) {
      const Vec v = cols.col(j);
      worst = std::max(worst, (v - target.basis_cols() * (target.basis_cols().adjoint() * v)).norm());
    }
    for (const Mat& b : target.basis()) {
      const Vec v = vec_of(b);
      worst = std::max(worst, (v - cols * (cols.adjoint() * v)).norm());
    }
    return worst;
  };
  report.add("beta_A_vs_A_M", mutual(beta_cols, am), tol);
  report.add("alpha_Ahat_vs_Ahat_M", mutual(alpha_cols, am_hat), tol);

  // Transported scaling group: conjugation by (r (x) Q)^{2it} restricted to
  // beta(A) agrees with beta of the base scaling group.
  double tau_transport = 0.0;
  for (double t : t_samples) {
    const Mat qm2it = kron(wp.r_pow(cd(0, 2 * t)), q.pow(cd(0, 2 * t)).matrix());
    const Mat qm2it_inv = kron(wp.r_pow(cd(0, -2 * t)), q.pow(cd(0, -2 * t)).matrix());
    for (const Mat& b : a.basis()) {
      const Mat lhs = qm2it * kron(Mat(Mat::Identity(n, n)), b) * qm2it_inv;
      const Mat rhs = kron(Mat(Mat::Identity(n, n)),
                           tau(q, t, Operator::on(a.carrier(), b)).matrix());
      tau_transport = std::max(tau_transport, op_norm(lhs - rhs));
    }
  }
  report.add("tau_transport", tau_transport, tol);

  // Transpose intertwining of alpha on the A-hat basis.
  double transpose_intertwine = 0.0;
  for (const Mat& b : a_hat.basis()) {
    const Mat lhs = Mat(xm * kron(Mat(Mat::Identity(n, n)), b) * xm.adjoint()).transpose();
    const Mat rhs =
        xm.conjugate() * kron(Mat(Mat::Identity(n, n)), Mat(b.transpose())) * xm.transpose();
    transpose_intertwine = std::max(transpose_intertwine, op_norm(lhs - rhs));
  }
  report.add("alpha_transpose_intertwine", transpose_intertwine, tol);

  // Lifted transpose/antipode identity: W_M with the A-hat-leg transposed and
  // R_M = beta R beta^{-1} applied to the A-leg equals the adjoint companion.
  const Mat g = multiplier_coeffs(lifted.base(), a_hat, a);
  auto r_dense_map = [&](const Mat& x) { return a.reconstruct(ad.matrix * a.coeffs(x)); };
  Mat lifted_tr = Mat::Zero(nd * nd, nd * nd);
  for (int i = 0; i < a_hat.rank(); ++i) {
    const Mat alpha_i =
        xm * kron(Mat(Mat::Identity(n, n)), a_hat.basis()[static_cast<std::size_t>(i)]) * xm.adjoint();
    for (int j = 0; j < a.rank(); ++j) {
      const Mat beta_rj =
          kron(Mat(Mat::Identity(n, n)), r_dense_map(a.basis()[static_cast<std::size_t>(j)]));
      lifted_tr += g(i, j) * kron(Mat(alpha_i.transpose()), beta_rj);
    }
  }
  const Space fine = lifted.fine_space(2);
  Space fine_tilde({Factor{static_cast<int>(n), true}, Factor{static_cast<int>(d), true},
                    Factor{static_cast<int>(n), false}, Factor{static_cast<int>(d), false}});
  const Operator x12t = leg_embed(lifted.intertwiner().transposed(), {0, 1}, fine_tilde);
  const Operator wt24 = leg_embed(wtilde, {1, 3}, fine_tilde);
  const Mat wm_tilde = (x12t.adjoint() * wt24 * x12t).matrix();
  report.add("lifted_transpose_antipode", op_norm(lifted_tr - Mat(wm_tilde.adjoint())), tol);
  return report;
}

/// Unitarity of the pipeline on probes: max | ||W_M v|| / ||v|| - 1 |.
inline double pipeline_unitarity(const LiftedUnitary& lifted, const std::vector<Vec>& probes) {
  double worst = 0.0;
  for (const Vec& v : probes)
    worst = std::max(worst, std::abs(lifted.apply(v).norm() / v.norm() - 1.0));
  return worst;
}

struct ConvergenceRow {
  int n_points;
  double length;
  std::string check;
  int probe_id;
  double residual;
};

/// Residuals of the grid-sensitive checks across refinements, on probes that
/// are fixed as functions (same widths and H-leg seeds for every grid).
inline std::vector<ConvergenceRow> convergence_study(const MultUnitary& mu,
                                                     const PositiveOperator& q,
                                                     const PositiveOperator& q_hat,
                                                     const std::vector<int>& grid_ns, double length,
                                                     int probes, std::uint64_t seed) {
  std::vector<ConvergenceRow> rows;
  const long d = mu.h_dim;
  for (int n : grid_ns) {
    const WeylPair wp(n, length);
    const Operator x = build_X(wp, q, q_hat);
    const LiftedUnitary lifted(mu, x);
    const double width = length / 16.0;
    const SpectralProbe bulk = wp.bulk_probe(width);
    Rng rng(seed);  // same H-leg draws for every grid

    for (int p = 0; p < probes; ++p)
      rows.push_back({n, length, "translation_error", p,
                      wp.translation_error(bulk.position, 1.0 + 0.1 * p)});

    std::vector<std::pair<SpectralProbe, Vec>> tozs_probes;
    for (int p = 0; p < probes; ++p) tozs_probes.push_back({bulk, rng.unit_vector(d)});
    for (int p = 0; p < probes; ++p)
      rows.push_back({n, length, "tozs", p,
                      check_tozs(wp, x, q, q_hat, {tozs_probes[static_cast<std::size_t>(p)]})});

    for (int p = 0; p < probes; ++p) {
      const Vec h1 = rng.unit_vector(d), h2 = rng.unit_vector(d);
      rows.push_back(
          {n, length, "qm_commutator", p, wm_commutator_residual(lifted, wp, q, bulk, h1, h2)});
    }
  }
  return rows;
}

}  // namespace muw

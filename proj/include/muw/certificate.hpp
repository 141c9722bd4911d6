#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "muw/common.hpp"
#include "muw/munit.hpp"
#include "muw/positive.hpp"
#include "muw/report.hpp"
#include "muw/rng.hpp"
#include "muw/simplex.hpp"

namespace muw {

struct CertificateOptions {
  double tol = kExactTol;
  int restarts = 6;
  int max_iter = 600;
  std::uint64_t seed = 7;
};

struct CertificateResult {
  std::optional<ModularStructure> structure;
  CheckReport report;
  double objective = 0.0;  // final unitarity defect of the companion candidate
};

namespace detail {

/// Orthonormal basis (columns) of the fixed subspace of P -> W P W* acting on
/// flattened operators over H (x) H.
inline Mat fixed_subspace(const Mat& w) {
  const long n = w.rows();
  const Mat s = kron(w.conjugate(), w) - Mat::Identity(n * n, n * n);
  Eigen::BDCSVD<Mat> svd(s, Eigen::ComputeThinV);
  const RVec sv = svd.singularValues();
  const double cutoff = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  long null_dim = 0;
  for (long i = sv.size() - 1; i >= 0 && sv(i) < cutoff; --i) ++null_dim;
  return svd.matrixV().rightCols(null_dim);
}

/// Nearest Kronecker factorization C ~ X (x) Y via the reshuffle whose SVD
/// top pair carries the factors (row-major flattening on each side).
inline std::pair<Mat, Mat> nearest_kron(const Mat& c, long d1, long d2) {
  Mat shuffled(d1 * d1, d2 * d2);
  for (long a = 0; a < d1; ++a)
    for (long b = 0; b < d2; ++b)
      for (long cc = 0; cc < d1; ++cc)
        for (long dd = 0; dd < d2; ++dd)
          shuffled(a * d1 + cc, b * d2 + dd) = c(a * d2 + b, cc * d2 + dd);
  Eigen::JacobiSVD<Mat> svd(shuffled, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double s0 = std::sqrt(svd.singularValues()(0));
  Mat x(d1, d1), y(d2, d2);
  for (long a = 0; a < d1; ++a)
    for (long cc = 0; cc < d1; ++cc) x(a, cc) = s0 * svd.matrixU()(a * d1 + cc, 0);
  for (long b = 0; b < d2; ++b)
    for (long dd = 0; dd < d2; ++dd) y(b, dd) = s0 * std::conj(svd.matrixV()(b * d2 + dd, 0));
  // Hermitize and orient traces positively; the pair is only a seed.
  x = 0.5 * (x + x.adjoint());
  y = 0.5 * (y + y.adjoint());
  if (x.trace().real() < 0) x = -x;
  if (y.trace().real() < 0) y = -y;
  return {x, y};
}

/// Positive solutions Y of W (Y (x) Q) W* = Y (x) Q, sought inside the null
/// space of the linearized constraint; best effort.
inline std::optional<Mat> solve_partner(const Mat& w, const Mat& q, Rng& rng) {
  const long d = q.rows();
  Mat l(d * d * d * d, d * d);
  for (long p = 0; p < d; ++p)
    for (long r = 0; r < d; ++r) {
      Mat e = Mat::Zero(d, d);
      e(p, r) = 1.0;
      const Mat lifted = kron(e, q);
      l.col(p * d + r) = vec_of(Mat(w * lifted * w.adjoint() - lifted));
    }
  Eigen::BDCSVD<Mat> svd(l, Eigen::ComputeThinV);
  const RVec sv = svd.singularValues();
  const double cutoff = 1e-8 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  long null_dim = 0;
  for (long i = sv.size() - 1; i >= 0 && sv(i) < cutoff; --i) ++null_dim;
  if (null_dim == 0) return std::nullopt;
  const Mat basis = svd.matrixV().rightCols(null_dim);

  auto positive_part = [&](Mat y) -> std::optional<Mat> {
    y = 0.5 * (y + y.adjoint());  // the constraint's null space is *-closed
    Eigen::SelfAdjointEigenSolver<Mat> es(y);
    if (-es.eigenvalues()(0) > es.eigenvalues()(d - 1)) y = -y;
    Eigen::SelfAdjointEigenSolver<Mat> es2(y);
    const double lo = es2.eigenvalues()(0), hi = es2.eigenvalues()(d - 1);
    if (hi > 0 && lo > 1e-8 * hi) return y;
    return std::nullopt;
  };

  // The projection of the identity is the canonical candidate.
  const Vec proj_i = basis * (basis.adjoint() * vec_of(Mat(Mat::Identity(d, d))));
  if (auto y = positive_part(unvec(proj_i, d, d))) return y;
  for (int attempt = 0; attempt < 24; ++attempt) {
    Vec coeffs(null_dim);
    for (long i = 0; i < null_dim; ++i) coeffs(i) = rng.next_complex_normal();
    if (auto y = positive_part(unvec(Vec(basis * coeffs), d, d))) return y;
  }
  return std::nullopt;
}

}  // namespace detail

/// Heuristic search for a certificate (Q, Qhat, Wtilde) of a given w.
/// Stage 1 analyzes the fixed subspace of P -> W P W* and factors a positive
/// fixed element into a Kronecker pair; the Q factor's eigenbasis anchors the
/// parametrization. Stage 2 minimizes the unitarity defect of the companion
/// candidate over log-eigenvalues of Q by simplex descent with restarts
/// (scale gauge removed; ties broken by minimal log-variance, then restart
/// order). Failure to find a certificate does not prove non-modularity.
inline CertificateResult find_certificate(const MultUnitary& mu,
                                          const CertificateOptions& opts = {}) {
  const long d = mu.h_dim;
  const Space h = mu.h_space();
  Rng rng(opts.seed);
  CertificateResult result;

  // Stage 1: a positive element of the fixed subspace and its Kron factors.
  const Mat fixed = detail::fixed_subspace(mu.w.matrix());
  Mat seed_q = Mat::Identity(d, d);
  if (fixed.cols() > 0) {
    const Mat h_rand = rng.hermitian(d * d);
    Vec proj = fixed * (fixed.adjoint() * vec_of(h_rand));
    Mat c = unvec(proj, d * d, d * d);
    c = 0.5 * (c + c.adjoint());
    const double scale = std::max(1.0, max_abs(c));
    c = Mat::Identity(d * d, d * d) + (0.45 / scale) * c;  // fixed, Hermitian, positive
    auto [x_side, y_side] = detail::nearest_kron(c, d, d);
    Eigen::SelfAdjointEigenSolver<Mat> es(y_side);
    if (es.eigenvalues()(0) > 1e-10 * es.eigenvalues()(d - 1)) seed_q = y_side;
  }
  Eigen::SelfAdjointEigenSolver<Mat> seed_es(seed_q);
  const Mat v_frame = seed_es.eigenvectors();

  auto q_of = [&](const RVec& theta) {
    RVec centered = theta;
    centered.array() -= theta.mean();  // scale gauge: the companion is 0-homogeneous in Q
    RVec eigs(d);
    for (long i = 0; i < d; ++i) eigs(i) = std::exp(centered(i));
    return PositiveOperator(h, v_frame, eigs);
  };
  auto objective = [&](const RVec& theta) {
    const Operator wt = build_wtilde(mu, q_of(theta));
    const Mat defect = wt.matrix().adjoint() * wt.matrix() -
                       Mat::Identity(wt.matrix().rows(), wt.matrix().cols());
    return defect.squaredNorm();
  };

  // Stage 2: simplex descent with restarts, merged deterministically.
  RVec theta0(d);
  for (long i = 0; i < d; ++i) theta0(i) = std::log(std::max(1e-8, seed_es.eigenvalues()(i)));
  theta0.array() -= theta0.mean();

  struct Candidate {
    RVec theta;
    double f;
    double variance;
    int restart;
  };
  std::vector<Candidate> candidates;
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    RVec start = theta0;
    if (restart == 1) start.setZero();
    if (restart >= 2)
      for (long i = 0; i < d; ++i) start(i) = theta0(i) + 0.7 * rng.next_normal();
    SimplexOptions sopts;
    sopts.max_iter = opts.max_iter;
    const SimplexResult res = nelder_mead(objective, start, 0.25, sopts);
    RVec theta = res.x;
    theta.array() -= theta.mean();
    const double var = theta.size() ? theta.squaredNorm() / static_cast<double>(theta.size()) : 0.0;
    candidates.push_back({theta, res.f, var, restart});
  }
  double best_f = candidates.front().f;
  for (const auto& c : candidates) best_f = std::min(best_f, c.f);
  const Candidate* chosen = nullptr;
  for (const auto& c : candidates) {
    if (c.f > best_f + std::max(1e-18, 1e-6 * best_f)) continue;
    if (!chosen || c.variance < chosen->variance - 1e-12 ||
        (std::abs(c.variance - chosen->variance) <= 1e-12 && c.restart < chosen->restart))
      chosen = &c;
  }

  const PositiveOperator q = q_of(chosen->theta);
  result.objective = std::sqrt(chosen->f);
  result.report.stat("objective_unitarity_defect", result.objective);

  const auto partner = detail::solve_partner(mu.w.matrix(), q.op().matrix(), rng);
  if (!partner) {
    result.report.note("no positive partner Qhat found in the invariance constraint null space");
    try {
      result.report.add("pentagon", pentagon_residual(mu), opts.tol);
    } catch (const BudgetError&) {
    }
    return result;
  }
  // Scale gauge for Qhat: unit geometric mean of eigenvalues.
  Eigen::SelfAdjointEigenSolver<Mat> es(*partner);
  double log_mean = 0.0;
  for (long i = 0; i < d; ++i) log_mean += std::log(es.eigenvalues()(i));
  log_mean /= static_cast<double>(d);
  const PositiveOperator q_hat(Operator::on(h, Mat(*partner / std::exp(log_mean))));

  result.report = check_modular(mu, q, q_hat, CheckOptions{opts.tol, opts.seed});
  result.report.stat("objective_unitarity_defect", result.objective);
  bool cert_ok = true;
  for (const char* name : {"r1", "r2", "r3", "r4", "r5"})
    if (const auto* e = result.report.find(name)) cert_ok = cert_ok && e->pass;
  if (cert_ok)
    result.structure = ModularStructure{q, q_hat, build_wtilde(mu, q)};
  else
    result.report.note("candidate failed certificate residuals at the requested tolerance");
  return result;
}

}  // namespace muw

#pragma once

#include <cmath>
#include <utility>

#include "muw/common.hpp"
#include "muw/operator.hpp"

namespace muw {

/// Positive definite operator with a cached spectral decomposition; the hot
/// path for all functional calculus (powers, unitary groups, inverses).
class PositiveOperator {
 public:
  explicit PositiveOperator(const Operator& a, double rel_tol = kConstructTol) : op_(a) {
    if (!a.is_endo()) throw ShapeError("positive operator must be an endomorphism");
    const Mat& m = a.matrix();
    const double scale = std::max(1e-300, max_abs(m));
    if (max_abs(m - m.adjoint()) > rel_tol * scale)
      throw PositivityError("operator is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
    eigs_ = es.eigenvalues();
    frame_ = es.eigenvectors();
    if (eigs_(0) <= rel_tol * eigs_(eigs_.size() - 1) || eigs_(0) <= 0.0)
      throw PositivityError("operator has a nontrivial kernel (eigenvalue <= 0)");
    const Mat recon = frame_ * eigs_.cast<cd>().asDiagonal() * frame_.adjoint();
    if (max_abs(recon - m) > rel_tol * scale * 64)
      throw PositivityError("spectral reconstruction residual too large");
  }

  /// Trusted spectral data (frame unitary, eigenvalues strictly positive).
  PositiveOperator(const Space& s, Mat frame, RVec eigs)
      : op_(Operator::on(s, frame * eigs.cast<cd>().asDiagonal() * frame.adjoint())),
        eigs_(std::move(eigs)),
        frame_(std::move(frame)) {
    for (Eigen::Index i = 0; i < eigs_.size(); ++i)
      if (eigs_(i) <= 0.0) throw PositivityError("trusted spectral data has eigenvalue <= 0");
  }

  static PositiveOperator identity(const Space& s) {
    return PositiveOperator(s, Mat::Identity(s.dim(), s.dim()), RVec::Ones(s.dim()));
  }

  static PositiveOperator diagonal(const Space& s, const RVec& d) {
    return PositiveOperator(s, Mat::Identity(s.dim(), s.dim()), d);
  }

  const Operator& op() const { return op_; }
  const Space& space() const { return op_.domain(); }
  const RVec& eigenvalues() const { return eigs_; }
  const Mat& frame() const { return frame_; }

  /// p^z via the spectral decomposition; principal logarithms, unambiguous
  /// because the spectrum is strictly positive. p^{it} is unitary for real t.
  Operator pow(cd z) const {
    Vec d(eigs_.size());
    for (Eigen::Index i = 0; i < eigs_.size(); ++i) d(i) = std::exp(z * std::log(eigs_(i)));
    return Operator::on(space(), frame_ * d.asDiagonal() * frame_.adjoint());
  }

  Operator inverse() const { return pow(-1.0); }
  Operator sqrt() const { return pow(0.5); }

  /// log p as a Hermitian operator.
  Operator log() const {
    Vec d(eigs_.size());
    for (Eigen::Index i = 0; i < eigs_.size(); ++i) d(i) = std::log(eigs_(i));
    return Operator::on(space(), frame_ * d.asDiagonal() * frame_.adjoint());
  }

 private:
  Operator op_;
  RVec eigs_;
  Mat frame_;
};

inline Operator mat_pow(const PositiveOperator& p, cd z) { return p.pow(z); }

}  // namespace muw

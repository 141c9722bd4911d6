#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "muw/common.hpp"
#include "muw/operator.hpp"
#include "muw/positive.hpp"
#include "muw/rng.hpp"
#include "muw/space.hpp"

namespace muw {

/// Probe vector kept together with its exact spectral coefficients, so that
/// spectral multipliers (powers of r) apply without round-trip noise.
struct SpectralProbe {
  Vec position;
  Vec coeffs;
};

/// Discretized Weyl pair on a periodic grid: s is the (sawtooth) position,
/// r = exp(-D) with D the spectral momentum. r^{it} translates by t; the
/// relation r^{it} s r^{-it} = s - t holds on vectors supported away from the
/// wrap and its failure there is reported, never assumed zero.
class WeylPair {
 public:
  WeylPair(int n_points, double length) : n_(n_points), length_(length) {
    if (n_points < 2 || (n_points & (n_points - 1)) != 0)
      throw ParameterError("n_points must be a power of two");
    if (length <= 0) throw ParameterError("length must be positive");
    k_space_ = Space::line(n_points);
    const double h = length_ / n_;
    x_.resize(n_);
    for (int j = 0; j < n_; ++j) x_(j) = -0.5 * length_ + j * h;
    k_.resize(n_);
    for (int m = 0; m < n_; ++m) {
      const int signed_m = (m < n_ / 2) ? m : m - n_;
      k_(m) = 2.0 * M_PI * signed_m / length_;
    }
    u_.resize(n_, n_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (int j = 0; j < n_; ++j)
      for (int m = 0; m < n_; ++m) u_(j, m) = scale * std::exp(cd(0, k_(m) * x_(j)));
    Mat s = Mat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j) s(j, j) = x_(j);
    s_ = Operator::on(k_space_, std::move(s));
    RVec r_eigs(n_);
    for (int m = 0; m < n_; ++m) r_eigs(m) = std::exp(-k_(m));
    r_ = PositiveOperator(k_space_, u_, std::move(r_eigs));
  }

  int n_points() const { return n_; }
  double length() const { return length_; }
  const Space& k_space() const { return k_space_; }
  const Operator& s() const { return *s_; }
  const PositiveOperator& r() const { return *r_; }
  const RVec& positions() const { return x_; }
  const RVec& frequencies() const { return k_; }
  const Mat& dft_frame() const { return u_; }

  /// r^z applied spectrally to exact coefficients: u (e^{-z k} .* coeffs).
  Vec apply_r_to_coeffs(cd z, const Vec& coeffs) const {
    Vec scaled(n_);
    for (int m = 0; m < n_; ++m) scaled(m) = std::exp(-z * k_(m)) * coeffs(m);
    return u_ * scaled;
  }

  /// Dense r^z.
  Mat r_pow(cd z) const {
    Vec diag(n_);
    for (int m = 0; m < n_; ++m) diag(m) = std::exp(-z * k_(m));
    return u_ * diag.asDiagonal() * u_.adjoint();
  }

  /// || (r^{it} s r^{-it} - (s - t)) v ||.
  double translation_error(const Vec& v, double t) const {
    const Vec inner = apply_spectral(cd(0, -t), v);
    const Vec mid = x_.cast<cd>().asDiagonal() * inner;
    const Vec lhs = apply_spectral(cd(0, t), mid);
    const Vec rhs = x_.cast<cd>().asDiagonal() * v - t * v;
    return (lhs - rhs).norm();
  }

  /// Gaussian bulk probe centered mid-interval, built from exact spectral
  /// coefficients (standard deviation = width / 2), normalized.
  SpectralProbe bulk_probe(double width) const {
    const double sigma = width / 2.0;
    Vec coeffs(n_);
    for (int m = 0; m < n_; ++m) coeffs(m) = std::exp(-0.5 * k_(m) * k_(m) * sigma * sigma);
    Vec pos = u_ * coeffs;
    const double nrm = pos.norm();
    return SpectralProbe{pos / nrm, coeffs / nrm};
  }

  /// Random probe band-limited to modes with e^{|k|} <= amp_cap: the finite
  /// stand-in for domain vectors of r and r^{-1}.
  SpectralProbe spectral_probe(Rng& rng, double amp_cap = 64.0) const {
    Vec coeffs = Vec::Zero(n_);
    bool any = false;
    for (int m = 0; m < n_; ++m)
      if (std::exp(std::abs(k_(m))) <= amp_cap) {
        coeffs(m) = rng.next_complex_normal();
        any = true;
      }
    if (!any) coeffs(0) = 1.0;
    Vec pos = u_ * coeffs;
    const double nrm = pos.norm();
    return SpectralProbe{pos / nrm, coeffs / nrm};
  }

 private:
  // apply r^{z} densely-equivalently by a spectral round trip
  Vec apply_spectral(cd z, const Vec& v) const {
    Vec coeffs = u_.adjoint() * v;
    for (int m = 0; m < n_; ++m) coeffs(m) *= std::exp(-z * k_(m));
    return u_ * coeffs;
  }

  int n_;
  double length_;
  Space k_space_;
  RVec x_, k_;
  Mat u_;
  std::optional<Operator> s_;
  std::optional<PositiveOperator> r_;
};

inline WeylPair grid_weyl_pair(int n_points, double length) { return WeylPair(n_points, length); }

}  // namespace muw

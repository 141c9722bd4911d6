#pragma once

#include <cmath>
#include <cstdint>

#include "muw/common.hpp"

namespace muw {

/// Deterministic splitmix64 stream; identical output on every platform, so
/// seeded reports stay byte-for-byte reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do { u = next_double(); } while (u <= 0.0);
    const double v = next_double();
    const double r = std::sqrt(-2.0 * std::log(u));
    const double a = 2.0 * M_PI * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cd next_complex_normal() {
    const double re = next_normal();
    const double im = next_normal();
    return cd(re, im);
  }

  Vec gaussian_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = next_complex_normal();
    return v;
  }

  Vec unit_vector(Eigen::Index n) {
    Vec v = gaussian_vector(n);
    return v / v.norm();
  }

  Mat gaussian_matrix(Eigen::Index r, Eigen::Index c) {
    Mat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = next_complex_normal();
    return m;
  }

  Mat hermitian(Eigen::Index n) {
    Mat g = gaussian_matrix(n, n);
    return 0.5 * (g + g.adjoint());
  }

  /// Haar-like random unitary from the QR decomposition of a Gaussian matrix.
  Mat unitary(Eigen::Index n) {
    Mat g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
      cd d = r(i, i);
      q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : cd(1, 0);
    }
    return q;
  }

  /// Positive definite with spectrum in [lo, hi].
  Mat positive(Eigen::Index n, double lo = 0.5, double hi = 2.0) {
    Mat u = unitary(n);
    RVec eigs(n);
    for (Eigen::Index i = 0; i < n; ++i) eigs(i) = lo + (hi - lo) * next_double();
    return u * eigs.cast<cd>().asDiagonal() * u.adjoint();
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace muw

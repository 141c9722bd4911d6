#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <complex>
#include <stdexcept>
#include <string>

namespace muw {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr const char* kVersion = "1.0.0";

// Default tolerance for exact identities (unitary inputs, norms O(1)).
inline constexpr double kExactTol = 1e-10;
// Construction-time guards (hermiticity, positivity, reconstruction).
inline constexpr double kConstructTol = 1e-12;
// Largest total dimension for which operators are materialized densely.
inline constexpr int kDenseBudget = 4096;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape: " + what) {}
};

class PositivityError : public Error {
 public:
  explicit PositivityError(const std::string& what) : Error("positivity: " + what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error("precondition: " + what) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("parameter: " + what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse: " + what) {}
};

class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error("budget: " + what) {}
};

class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error("consistency: " + what) {}
};

/// Operator norm (largest singular value).
inline double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 512 && m.cols() <= 512) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

/// Induced infinity norm (max absolute row sum); equals the spectral norm on
/// diagonal matrices, handy for diagnosing diagonal defects.
inline double inf_norm(const Mat& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
  return best;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Hilbert-Schmidt inner product, antilinear in the first argument.
inline cd hs_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace(); }

inline double hs_norm(const Mat& a) { return a.norm(); }

/// Column-stacked view of a matrix.
inline Vec vec_of(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

inline Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

}  // namespace muw

#pragma once

#include <utility>

#include "muw/common.hpp"
#include "muw/operator.hpp"
#include "muw/space.hpp"

namespace muw {

/// Normal functional represented by a trace frame: omega(m) = trace(F m).
/// At finite dimension the matrix-unit frames span the whole predual.
class Functional {
 public:
  Functional(Space space, Mat frame) : space_(std::move(space)), frame_(std::move(frame)) {
    if (frame_.rows() != space_.dim() || frame_.cols() != space_.dim())
      throw ShapeError("functional frame must be square on its space");
  }

  /// omega_ij(m) = m(i, j).
  static Functional matrix_unit(const Space& s, long i, long j) {
    Mat f = Mat::Zero(s.dim(), s.dim());
    f(j, i) = 1.0;
    return Functional(s, std::move(f));
  }

  /// omega(m) = <v, m w>; frame = w v^H.
  static Functional vector_state(const Space& s, const Vec& v, const Vec& w) {
    if (v.size() != s.dim() || w.size() != s.dim())
      throw ShapeError("vector_state: length mismatch");
    return Functional(s, w * v.adjoint());
  }

  const Space& space() const { return space_; }
  const Mat& frame() const { return frame_; }

  cd operator()(const Mat& m) const {
    if (m.rows() != frame_.rows() || m.cols() != frame_.cols())
      throw ShapeError("functional applied to mismatched operator");
    return (frame_ * m).trace();
  }

  cd operator()(const Operator& m) const {
    if (m.domain() != space_ || m.codomain() != space_)
      throw ShapeError("functional applied outside its space");
    return (*this)(m.matrix());
  }

 private:
  Space space_;
  Mat frame_;
};

}  // namespace muw

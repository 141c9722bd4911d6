#pragma once

#include <utility>
#include <vector>

#include "muw/common.hpp"
#include "muw/space.hpp"

namespace muw {

/// Dense operator between product spaces, stored in the fixed product basis.
/// Values are immutable after construction; all operations return new values.
class Operator {
 public:
  Operator(Space domain, Space codomain, Mat entries)
      : dom_(std::move(domain)), cod_(std::move(codomain)), m_(std::move(entries)) {
    if (m_.rows() != cod_.dim() || m_.cols() != dom_.dim())
      throw ShapeError("entries are " + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()) +
                       ", expected " + std::to_string(cod_.dim()) + "x" + std::to_string(dom_.dim()));
  }

  /// Endomorphism of a single space.
  static Operator on(const Space& s, Mat entries) { return Operator(s, s, std::move(entries)); }

  static Operator identity(const Space& s) { return on(s, Mat::Identity(s.dim(), s.dim())); }

  const Space& domain() const { return dom_; }
  const Space& codomain() const { return cod_; }
  const Mat& matrix() const { return m_; }
  bool is_endo() const { return dom_ == cod_; }

  Operator adjoint() const { return Operator(cod_, dom_, m_.adjoint()); }

  /// Transpose in the fixed basis, acting between the conjugate spaces:
  /// <x~, m^T y~> = <y, m x>. An involution under the double-conjugate
  /// identification.
  Operator transposed() const {
    return Operator(cod_.conjugated(), dom_.conjugated(), m_.transpose());
  }

  Operator conjugated() const {
    return Operator(dom_.conjugated(), cod_.conjugated(), m_.conjugate());
  }

  Operator operator*(const Operator& rhs) const {
    if (dom_ != rhs.cod_)
      throw ShapeError("compose: domain " + dom_.to_string() + " != codomain " + rhs.cod_.to_string());
    return Operator(rhs.dom_, cod_, m_ * rhs.m_);
  }

  Operator operator+(const Operator& rhs) const {
    require_same_shape(rhs, "add");
    return Operator(dom_, cod_, m_ + rhs.m_);
  }

  Operator operator-(const Operator& rhs) const {
    require_same_shape(rhs, "subtract");
    return Operator(dom_, cod_, m_ - rhs.m_);
  }

  friend Operator operator*(cd scalar, const Operator& a) {
    return Operator(a.dom_, a.cod_, scalar * a.m_);
  }

  Vec apply(const Vec& v) const {
    if (v.size() != dom_.dim()) throw ShapeError("apply: vector length mismatch");
    return m_ * v;
  }

  double norm() const { return op_norm(m_); }

 private:
  void require_same_shape(const Operator& rhs, const char* what) const {
    if (dom_ != rhs.dom_ || cod_ != rhs.cod_) throw ShapeError(std::string(what) + ": shape mismatch");
  }

  Space dom_, cod_;
  Mat m_;
};

/// Kronecker product; factor lists concatenate, first factor most significant.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Operator tensor(const Operator& a, const Operator& b) {
  return Operator(a.domain().tensor(b.domain()), a.codomain().tensor(b.codomain()),
                  kron(a.matrix(), b.matrix()));
}

/// Flip x (x) y -> y (x) x on a two-factor space; codomain factors swapped.
inline Operator flip(const Space& s) {
  if (s.factor_count() != 2) throw ShapeError("flip: space must have exactly two factors");
  const long d1 = s.factor(0).dim, d2 = s.factor(1).dim;
  Mat m = Mat::Zero(d1 * d2, d1 * d2);
  for (long i = 0; i < d1; ++i)
    for (long j = 0; j < d2; ++j) m(j * d1 + i, i * d2 + j) = 1.0;
  return Operator(s, s.swapped(), std::move(m));
}

inline Operator transpose(const Operator& m) { return m.transposed(); }

namespace detail {

/// Offsets of the leg sub-indices inside the flattened ambient index, plus the
/// enumeration of the complementary ("outer") indices.
struct LegPlan {
  std::vector<long> leg_offsets;    // size = prod of leg dims
  std::vector<long> outer_offsets;  // size = ambient dim / prod of leg dims
};

inline LegPlan make_leg_plan(const Space& ambient, const std::vector<int>& legs) {
  const int nf = ambient.factor_count();
  std::vector<bool> used(static_cast<std::size_t>(nf), false);
  for (int l : legs) {
    if (l < 0 || l >= nf) throw ShapeError("leg index out of range");
    if (used[static_cast<std::size_t>(l)]) throw ShapeError("duplicate leg index");
    used[static_cast<std::size_t>(l)] = true;
  }
  const auto strides = ambient.strides();

  LegPlan plan;
  long leg_count = 1;
  for (int l : legs) leg_count *= ambient.factor(l).dim;
  plan.leg_offsets.resize(static_cast<std::size_t>(leg_count));
  for (long a = 0; a < leg_count; ++a) {
    long rem = a, off = 0;
    for (int p = static_cast<int>(legs.size()) - 1; p >= 0; --p) {
      const int l = legs[static_cast<std::size_t>(p)];
      const long d = ambient.factor(l).dim;
      off += (rem % d) * strides[static_cast<std::size_t>(l)];
      rem /= d;
    }
    plan.leg_offsets[static_cast<std::size_t>(a)] = off;
  }

  std::vector<int> comp;
  for (int i = 0; i < nf; ++i)
    if (!used[static_cast<std::size_t>(i)]) comp.push_back(i);
  long outer_count = 1;
  for (int l : comp) outer_count *= ambient.factor(l).dim;
  plan.outer_offsets.resize(static_cast<std::size_t>(outer_count));
  for (long o = 0; o < outer_count; ++o) {
    long rem = o, off = 0;
    for (int p = static_cast<int>(comp.size()) - 1; p >= 0; --p) {
      const int l = comp[static_cast<std::size_t>(p)];
      const long d = ambient.factor(l).dim;
      off += (rem % d) * strides[static_cast<std::size_t>(l)];
      rem /= d;
    }
    plan.outer_offsets[static_cast<std::size_t>(o)] = off;
  }
  return plan;
}

}  // namespace detail

/// Embed an endomorphism u on the named legs of the ambient space, acting as
/// the identity elsewhere. Legs need not be adjacent or ascending.
inline Operator leg_embed(const Operator& u, const std::vector<int>& legs, const Space& ambient) {
  if (!u.is_endo()) throw ShapeError("leg_embed: operator must be an endomorphism");
  if (u.domain() != ambient.select(legs))
    throw ShapeError("leg_embed: operator factors " + u.domain().to_string() +
                     " do not match ambient legs " + ambient.select(legs).to_string());
  const auto plan = detail::make_leg_plan(ambient, legs);
  const long k = static_cast<long>(plan.leg_offsets.size());
  const long D = ambient.dim();
  Mat out = Mat::Zero(D, D);
  const Mat& um = u.matrix();
  for (long base : plan.outer_offsets)
    for (long a = 0; a < k; ++a)
      for (long b = 0; b < k; ++b)
        out(base + plan.leg_offsets[static_cast<std::size_t>(a)],
            base + plan.leg_offsets[static_cast<std::size_t>(b)]) = um(a, b);
  return Operator::on(ambient, std::move(out));
}

/// Matrix-free counterpart of leg_embed: y = U_{legs} x on the ambient space.
inline Vec apply_on_legs(const Mat& u, const std::vector<int>& legs, const Space& ambient,
                         const Vec& x) {
  long k = 1;
  for (int l : legs) k *= ambient.factor(l).dim;
  if (u.rows() != k || u.cols() != k) throw ShapeError("apply_on_legs: block size mismatch");
  if (x.size() != ambient.dim()) throw ShapeError("apply_on_legs: vector length mismatch");
  const auto plan = detail::make_leg_plan(ambient, legs);
  Vec y(x.size());
  Vec in(k), out(k);
  for (long base : plan.outer_offsets) {
    for (long b = 0; b < k; ++b) in(b) = x(base + plan.leg_offsets[static_cast<std::size_t>(b)]);
    out.noalias() = u * in;
    for (long a = 0; a < k; ++a) y(base + plan.leg_offsets[static_cast<std::size_t>(a)]) = out(a);
  }
  return y;
}

/// Partial transpose of an endomorphism on a two-factor space: the chosen leg
/// is transposed (and conjugate-flagged), the other leg untouched.
inline Operator partial_transpose(const Operator& w, int leg) {
  if (!w.is_endo() || w.domain().factor_count() != 2)
    throw ShapeError("partial_transpose: need an endomorphism on two factors");
  if (leg != 0 && leg != 1) throw ShapeError("partial_transpose: leg must be 0 or 1");
  const long d1 = w.domain().factor(0).dim, d2 = w.domain().factor(1).dim;
  auto fs = w.domain().factors();
  fs[static_cast<std::size_t>(leg)].conjugate = !fs[static_cast<std::size_t>(leg)].conjugate;
  const Space out_space{std::vector<Factor>(fs)};
  const Mat& m = w.matrix();
  Mat out(m.rows(), m.cols());
  if (leg == 0) {
    for (long a = 0; a < d1; ++a)
      for (long c = 0; c < d1; ++c)
        for (long b = 0; b < d2; ++b)
          for (long e = 0; e < d2; ++e) out(a * d2 + b, c * d2 + e) = m(c * d2 + b, a * d2 + e);
  } else {
    for (long a = 0; a < d1; ++a)
      for (long c = 0; c < d1; ++c)
        for (long b = 0; b < d2; ++b)
          for (long e = 0; e < d2; ++e) out(a * d2 + b, c * d2 + e) = m(a * d2 + e, c * d2 + b);
  }
  return Operator::on(out_space, std::move(out));
}

}  // namespace muw

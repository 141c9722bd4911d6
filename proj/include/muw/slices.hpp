#pragma once

#include "muw/common.hpp"
#include "muw/functional.hpp"
#include "muw/operator.hpp"

namespace muw {

namespace detail {
inline void require_two_leg(const Operator& w, const char* who) {
  if (!w.is_endo() || w.domain().factor_count() != 2)
    throw ShapeError(std::string(who) + ": need an endomorphism on two factors");
}
}  // namespace detail

/// (omega (x) id) w. The sliced functional lives on the first factor.
inline Operator slice_left(const Operator& w, const Functional& omega) {
  detail::require_two_leg(w, "slice_left");
  const Space s1 = w.domain().select({0});
  const Space s2 = w.domain().select({1});
  if (omega.space() != s1) throw ShapeError("slice_left: functional is not on the first factor");
  const long d1 = s1.dim(), d2 = s2.dim();
  const Mat& m = w.matrix();
  const Mat& f = omega.frame();
  Mat out = Mat::Zero(d2, d2);
  for (long i = 0; i < d1; ++i)
    for (long j = 0; j < d1; ++j) {
      const cd c = f(j, i);
      if (c == cd(0, 0)) continue;
      for (long u = 0; u < d2; ++u)
        for (long y = 0; y < d2; ++y) out(u, y) += c * m(i * d2 + u, j * d2 + y);
    }
  return Operator::on(s2, std::move(out));
}

/// (id (x) omega) w. The sliced functional lives on the second factor.
inline Operator slice_right(const Operator& w, const Functional& omega) {
  detail::require_two_leg(w, "slice_right");
  const Space s1 = w.domain().select({0});
  const Space s2 = w.domain().select({1});
  if (omega.space() != s2) throw ShapeError("slice_right: functional is not on the second factor");
  const long d1 = s1.dim(), d2 = s2.dim();
  const Mat& m = w.matrix();
  const Mat& f = omega.frame();
  Mat out = Mat::Zero(d1, d1);
  for (long u = 0; u < d2; ++u)
    for (long y = 0; y < d2; ++y) {
      const cd c = f(y, u);
      if (c == cd(0, 0)) continue;
      for (long i = 0; i < d1; ++i)
        for (long j = 0; j < d1; ++j) out(i, j) += c * m(i * d2 + u, j * d2 + y);
    }
  return Operator::on(s1, std::move(out));
}

/// Reshuffle whose row (i,j) is the flattened left slice by the matrix unit
/// omega_ij; its row space is span{(omega (x) id) w}.
inline Mat realign_left(const Operator& w) {
  detail::require_two_leg(w, "realign_left");
  const long d1 = w.domain().factor(0).dim, d2 = w.domain().factor(1).dim;
  const Mat& m = w.matrix();
  Mat out(d1 * d1, d2 * d2);
  for (long i = 0; i < d1; ++i)
    for (long j = 0; j < d1; ++j)
      for (long u = 0; u < d2; ++u)
        for (long y = 0; y < d2; ++y) out(i * d1 + j, u * d2 + y) = m(i * d2 + u, j * d2 + y);
  return out;
}

/// Mirror image: row (u,y) is the flattened right slice by omega_uy; row space
/// is span{(id (x) omega) w}.
inline Mat realign_right(const Operator& w) {
  detail::require_two_leg(w, "realign_right");
  const long d1 = w.domain().factor(0).dim, d2 = w.domain().factor(1).dim;
  const Mat& m = w.matrix();
  Mat out(d2 * d2, d1 * d1);
  for (long u = 0; u < d2; ++u)
    for (long y = 0; y < d2; ++y)
      for (long i = 0; i < d1; ++i)
        for (long j = 0; j < d1; ++j) out(u * d2 + y, i * d1 + j) = m(i * d2 + u, j * d2 + y);
  return out;
}

}  // namespace muw

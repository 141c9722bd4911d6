#include <gtest/gtest.h>

#include "muw/muw.hpp"
#include "oracles.hpp"

using namespace muw;

namespace {

Mat x_flip() {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Mat cnot_matrix() {
  Mat w = Mat::Zero(4, 4);
  w(0, 0) = w(1, 1) = w(3, 2) = w(2, 3) = 1.0;
  return w;
}

const Space kQubit = Space::line(2);

}  // namespace

TEST(Space, ConjugationIsAnInvolution) {
  const Space s({{2, false}, {3, true}, {4, false}});
  EXPECT_EQ(s.conjugated().conjugated(), s);
  EXPECT_NE(s.conjugated(), s);
  EXPECT_EQ(s.dim(), 24);
}

TEST(Space, RejectsNonPositiveDims) {
  EXPECT_THROW(Space({{0, false}}), ShapeError);
}

TEST(Tensor, IdentityTimesIdentity) {
  const Operator i2 = Operator::identity(kQubit);
  EXPECT_EQ(tensor(i2, i2).matrix(), Mat::Identity(4, 4));
}

TEST(Tensor, DiagonalTimesIdentityKeepsLexicographicOrder) {
  Mat d(2, 2);
  d << 1, 0, 0, 2;
  const Mat got = tensor(Operator::on(kQubit, d), Operator::identity(kQubit)).matrix();
  Mat want = Mat::Zero(4, 4);
  want.diagonal() << 1, 1, 2, 2;
  EXPECT_EQ(got, want);
}

TEST(Tensor, FlipPairActsOnBasis) {
  const Operator xx = tensor(Operator::on(kQubit, x_flip()), Operator::on(kQubit, x_flip()));
  Vec e00 = Vec::Zero(4);
  e00(0) = 1.0;
  Vec e11 = Vec::Zero(4);
  e11(3) = 1.0;
  EXPECT_EQ(xx.apply(e00), e11);
}

TEST(Tensor, MatchesOracleOnRandomInput) {
  Rng rng(21);
  const Mat a = rng.gaussian_matrix(3, 3), b = rng.gaussian_matrix(2, 2);
  EXPECT_EQ(kron(a, b), oracle::kron(a, b));
}

TEST(LegEmbed, IdentityCase) {
  const Space h3 = Space::power(2, 3);
  const Operator i4 = Operator::identity(Space::power(2, 2));
  EXPECT_EQ(leg_embed(i4, {0, 1}, h3).matrix(), Mat::Identity(8, 8));
}

TEST(LegEmbed, AdjacentLegsAreAKroneckerFactor) {
  const Space h3 = Space::power(2, 3);
  const Operator cnot = Operator::on(Space::power(2, 2), cnot_matrix());
  const Mat want = oracle::kron(cnot_matrix(), Mat::Identity(2, 2));
  EXPECT_LT(op_norm(leg_embed(cnot, {0, 1}, h3).matrix() - want), 1e-15);
}

TEST(LegEmbed, NonAdjacentLegsOnBasisVector) {
  const Space h3 = Space::power(2, 3);
  const Operator cnot = Operator::on(Space::power(2, 2), cnot_matrix());
  const Operator w13 = leg_embed(cnot, {0, 2}, h3);
  Vec e100 = Vec::Zero(8);
  e100(4) = 1.0;  // e1 (x) e0 (x) e0
  Vec e101 = Vec::Zero(8);
  e101(5) = 1.0;  // e1 (x) e0 (x) e1
  EXPECT_EQ(w13.apply(e100), e101);
}

TEST(LegEmbed, AgreesWithOracleOnRandomLegs) {
  Rng rng(31);
  const Space amb({{2, false}, {3, false}, {2, false}, {2, false}});
  const Mat u = rng.unitary(6);
  const Operator op = Operator::on(amb.select({1, 3}), u);
  const Mat got = leg_embed(op, {1, 3}, amb).matrix();
  const Mat want = oracle::leg_embed(u, {1, 3}, {2, 3, 2, 2});
  EXPECT_LT(op_norm(got - want), 1e-14);
}

TEST(LegEmbed, DisjointLegsCommuteExactly) {
  Rng rng(32);
  const Space amb = Space::power(2, 4);
  const Operator u = Operator::on(amb.select({0, 1}), rng.unitary(4));
  const Operator v = Operator::on(amb.select({2, 3}), rng.unitary(4));
  const Mat lhs = (leg_embed(u, {0, 1}, amb) * leg_embed(v, {2, 3}, amb)).matrix();
  const Mat rhs = (leg_embed(v, {2, 3}, amb) * leg_embed(u, {0, 1}, amb)).matrix();
  EXPECT_EQ(lhs, rhs);  // one nonzero product per entry, so bitwise equal
}

TEST(LegEmbed, RejectsMismatchedFactors) {
  const Space h3 = Space::power(2, 3);
  const Operator i9 = Operator::identity(Space::power(3, 2));
  EXPECT_THROW(leg_embed(i9, {0, 1}, h3), ShapeError);
  const Operator i4 = Operator::identity(Space::power(2, 2));
  EXPECT_THROW(leg_embed(i4, {0, 0}, h3), ShapeError);
  EXPECT_THROW(leg_embed(i4, {0, 5}, h3), ShapeError);
}

TEST(Flip, SwapsBasisVectors) {
  const Space h2 = Space::power(2, 2);
  Vec e01 = Vec::Zero(4);
  e01(1) = 1.0;
  Vec e10 = Vec::Zero(4);
  e10(2) = 1.0;
  EXPECT_EQ(flip(h2).apply(e01), e10);
}

TEST(Flip, IsAnInvolution) {
  const Space h2 = Space::power(2, 2);
  const Operator sigma = flip(h2);
  EXPECT_EQ((sigma * sigma).matrix(), Mat::Identity(4, 4));
}

TEST(Flip, ConjugatesControlToSecondLeg) {
  const Space h2 = Space::power(2, 2);
  const Operator sigma = flip(h2);
  const Mat got = (sigma * Operator::on(h2, cnot_matrix()) * sigma).matrix();
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = want(3, 1) = want(2, 2) = want(1, 3) = 1.0;
  EXPECT_EQ(got, want);
}

TEST(Transpose, DoubleTransposeIsIdentityOnRandomInput) {
  Rng rng(41);
  const Space h = Space::line(3);
  const Operator m = Operator::on(h, rng.gaussian_matrix(3, 3));
  const Operator mtt = m.transposed().transposed();
  EXPECT_EQ(mtt.domain(), h);
  EXPECT_EQ(mtt.matrix(), m.matrix());
}

TEST(Transpose, RealDiagonalIsFixed) {
  Mat d(2, 2);
  d << 1, 0, 0, 2;
  const Operator m = Operator::on(kQubit, d);
  EXPECT_EQ(m.transposed().matrix(), d);
  EXPECT_TRUE(m.transposed().domain().factor(0).conjugate);
}

TEST(Transpose, MatrixUnitCase) {
  Mat e01 = Mat::Zero(2, 2);
  e01(0, 1) = 1.0;
  Mat e10 = Mat::Zero(2, 2);
  e10(1, 0) = 1.0;
  EXPECT_EQ(Operator::on(kQubit, e01).transposed().matrix(), e10);
}

TEST(Transpose, IsAStarAntihomomorphism) {
  Rng rng(42);
  const Space h = Space::line(4);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator m = Operator::on(h, rng.gaussian_matrix(4, 4));
    const Operator n = Operator::on(h, rng.gaussian_matrix(4, 4));
    EXPECT_LT(op_norm(((m * n).transposed() - n.transposed() * m.transposed()).matrix()), 1e-12);
    EXPECT_LT(op_norm((m.adjoint().transposed() - m.transposed().adjoint()).matrix()), 1e-12);
  }
}

TEST(Transpose, PairingDefinition) {
  // <x~, m^T y~> = <y, m x> on random vectors.
  Rng rng(43);
  const Space h = Space::line(3);
  const Mat m = rng.gaussian_matrix(3, 3);
  const Operator op = Operator::on(h, m);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = rng.gaussian_vector(3), y = rng.gaussian_vector(3);
    const cd lhs = Vec(x.conjugate()).dot(Vec(op.transposed().matrix() * y.conjugate()));
    const cd rhs = y.dot(Vec(m * x));
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(Slice, ControlBlocksOfCnot) {
  const Space h2 = Space::power(2, 2);
  const Operator cnot = Operator::on(h2, cnot_matrix());
  const Mat b00 = slice_left(cnot, Functional::matrix_unit(kQubit, 0, 0)).matrix();
  const Mat b11 = slice_left(cnot, Functional::matrix_unit(kQubit, 1, 1)).matrix();
  EXPECT_EQ(b00, Mat::Identity(2, 2));
  EXPECT_EQ(b11, x_flip());
}

TEST(Slice, ProductOperatorSlicesToItsFactor) {
  Rng rng(51);
  const Mat m = rng.gaussian_matrix(2, 2);
  const Operator w =
      tensor(Operator::identity(kQubit), Operator::on(kQubit, m));
  const Functional omega = Functional::vector_state(kQubit, rng.unit_vector(2), rng.unit_vector(2));
  // normalize: omega(I) = 1
  const cd weight = omega(Operator::identity(kQubit));
  const Mat got = slice_left(w, omega).matrix() / weight;
  EXPECT_LT(op_norm(got - m), 1e-12);
}

TEST(Slice, BitConsistentWithRealignRows) {
  Rng rng(52);
  const Space h2 = Space::power(3, 2);
  const Operator w = Operator::on(h2, rng.unitary(9));
  const Mat r = realign_left(w);
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j) {
      const Mat s = slice_left(w, Functional::matrix_unit(Space::line(3), i, j)).matrix();
      for (long u = 0; u < 3; ++u)
        for (long y = 0; y < 3; ++y) EXPECT_EQ(s(u, y), r(i * 3 + j, u * 3 + y));
    }
}

TEST(Slice, RightSliceMatchesOracleEntryGather) {
  Rng rng(53);
  const Space h2 = Space::power(2, 2);
  const Mat w = rng.unitary(4);
  const Operator op = Operator::on(h2, w);
  // (id (x) omega_uy) w compared against explicit entry loops
  for (long u = 0; u < 2; ++u)
    for (long y = 0; y < 2; ++y) {
      const Mat got = slice_right(op, Functional::matrix_unit(kQubit, u, y)).matrix();
      Mat want(2, 2);
      for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j) want(i, j) = w(i * 2 + u, j * 2 + y);
      EXPECT_EQ(got, want);
    }
}

TEST(MatPow, DiagonalSquareRoot) {
  RVec d(2);
  d << 1, 4;
  const PositiveOperator p = PositiveOperator::diagonal(kQubit, d);
  Mat want(2, 2);
  want << 1, 0, 0, 2;
  EXPECT_LT(op_norm(mat_pow(p, 0.5).matrix() - want), 1e-12);
}

TEST(MatPow, IdentityForAnyExponent) {
  const PositiveOperator p = PositiveOperator::identity(kQubit);
  for (cd z : {cd(0.5, 0), cd(-3, 0), cd(0, 2.7), cd(1.3, -0.4)})
    EXPECT_LT(op_norm(mat_pow(p, z).matrix() - Mat::Identity(2, 2)), 1e-12);
}

TEST(MatPow, ImaginaryExponentWrapsToIdentity) {
  RVec d(2);
  d << 1, 4;
  const PositiveOperator p = PositiveOperator::diagonal(kQubit, d);
  const Operator got = mat_pow(p, cd(0, M_PI / std::log(2.0)));
  EXPECT_LT(op_norm(got.matrix() - Mat::Identity(2, 2)), 1e-12);
}

TEST(MatPow, GroupLawOnRandomExponents) {
  Rng rng(61);
  const Space h = Space::line(3);
  const PositiveOperator p(Operator::on(h, rng.positive(3, 0.3, 2.5)));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double t = 4 * rng.next_double() - 2, s = 4 * rng.next_double() - 2;
    const Mat lhs = p.pow(cd(0, t)).matrix() * p.pow(cd(0, s)).matrix();
    const Mat rhs = p.pow(cd(0, t + s)).matrix();
    worst = std::max(worst, op_norm(lhs - rhs));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(MatPow, UnitaryForRealParameter) {
  Rng rng(62);
  const Space h = Space::line(4);
  const PositiveOperator p(Operator::on(h, rng.positive(4)));
  const Mat u = p.pow(cd(0, 1.7)).matrix();
  EXPECT_LT(op_norm(Mat(u.adjoint() * u - Mat::Identity(4, 4))), 1e-12);
}

TEST(PositiveOperator, RejectsNonHermitian) {
  Rng rng(63);
  EXPECT_THROW(PositiveOperator(Operator::on(kQubit, rng.gaussian_matrix(2, 2))), PositivityError);
}

TEST(PositiveOperator, RejectsNontrivialKernel) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  EXPECT_THROW(PositiveOperator(Operator::on(kQubit, m)), PositivityError);
  Mat neg(2, 2);
  neg << 1, 0, 0, -1;
  EXPECT_THROW(PositiveOperator(Operator::on(kQubit, neg)), PositivityError);
}

TEST(Realign, CnotHasRankTwo) {
  const Operator cnot = Operator::on(Space::power(2, 2), cnot_matrix());
  EXPECT_EQ(oracle::rank_qr(realign_left(cnot)), 2);
}

TEST(Realign, ProductIdentityHasRankOne) {
  const Operator ii = Operator::identity(Space::power(2, 2));
  EXPECT_EQ(oracle::rank_qr(realign_left(ii)), 1);
}

TEST(Realign, CyclicGroupOfOrderThreeHasRankThree) {
  const MultUnitary w = gen_group_kt(GroupTable::cyclic(3));
  EXPECT_EQ(oracle::rank_qr(realign_left(w.w)), 3);
}

TEST(Functional, MatrixUnitEvaluatesEntries) {
  Rng rng(71);
  const Mat m = rng.gaussian_matrix(3, 3);
  const Space h = Space::line(3);
  for (long i = 0; i < 3; ++i)
    for (long j = 0; j < 3; ++j)
      EXPECT_EQ(Functional::matrix_unit(h, i, j)(m), m(i, j));
}

TEST(Functional, VectorStateEvaluates) {
  Rng rng(72);
  const Space h = Space::line(3);
  const Vec v = rng.gaussian_vector(3), w = rng.gaussian_vector(3);
  const Mat m = rng.gaussian_matrix(3, 3);
  EXPECT_LT(std::abs(Functional::vector_state(h, v, w)(m) - v.dot(Vec(m * w))), 1e-12);
}

TEST(Operator, ComposeRejectsConjugateMismatch) {
  const Operator a = Operator::identity(Space::line(2, true));
  const Operator b = Operator::identity(Space::line(2, false));
  EXPECT_THROW(a * b, ShapeError);
}

TEST(PartialTranspose, FirstLegMatchesEntryReshuffle) {
  Rng rng(81);
  const Space h2 = Space::power(2, 2);
  const Mat w = rng.gaussian_matrix(4, 4);
  const Mat got = partial_transpose(Operator::on(h2, w), 0).matrix();
  for (long a = 0; a < 2; ++a)
    for (long b = 0; b < 2; ++b)
      for (long c = 0; c < 2; ++c)
        for (long e = 0; e < 2; ++e) EXPECT_EQ(got(a * 2 + b, c * 2 + e), w(c * 2 + b, a * 2 + e));
  EXPECT_TRUE(partial_transpose(Operator::on(h2, w), 0).domain().factor(0).conjugate);
}

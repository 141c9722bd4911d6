#include <gtest/gtest.h>

#include "muw/muw.hpp"

using namespace muw;

namespace {

MultUnitary cnot() { return gen_group_kt(GroupTable::cyclic(2)); }

Mat x_flip() {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

MultUnitary perturbed(const MultUnitary& w, double eps) {
  Rng rng(0x5eed);
  const long n = w.w.matrix().rows();
  Mat h = rng.hermitian(n);
  h /= op_norm(h);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec phases(n);
  for (long i = 0; i < n; ++i) phases(i) = std::exp(cd(0, eps * es.eigenvalues()(i)));
  const Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return MultUnitary(Operator::on(w.w.domain(), Mat(w.w.matrix() * u)));
}

}  // namespace

TEST(SliceAlgebra, LeftAlgebraOfCnotIsTheRegularRepresentation) {
  const SliceAlgebra a = algebra_left(cnot());
  EXPECT_EQ(a.rank(), 2);
  EXPECT_LT(a.closure_residual(), 1e-12);
  EXPECT_LT(a.unitality_residual(), 1e-12);
  EXPECT_LT(a.membership(Mat::Identity(2, 2)), 1e-12);
  EXPECT_LT(a.membership(x_flip()), 1e-12);
  Mat diag01 = Mat::Zero(2, 2);
  diag01(0, 0) = 1.0;
  EXPECT_GT(a.membership(diag01), 0.5);  // projections are not in span{I, X}
}

TEST(SliceAlgebra, RightAlgebraOfCnotIsDiagonal) {
  const SliceAlgebra a_hat = algebra_right(cnot());
  EXPECT_EQ(a_hat.rank(), 2);
  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  EXPECT_LT(a_hat.membership(p0), 1e-12);
  EXPECT_LT(a_hat.membership(p1), 1e-12);
  EXPECT_GT(a_hat.membership(x_flip()), 0.5);
}

TEST(SliceAlgebra, IdentityOperatorSpansOnlyTheUnit) {
  const MultUnitary w(Operator::identity(Space::power(2, 2)));
  EXPECT_EQ(algebra_left(w).rank(), 1);
}

TEST(SliceAlgebra, GroupRanksEqualTheOrder) {
  const std::vector<GroupTable> groups = {
      GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::cyclic(4),
      GroupTable::direct_product(GroupTable::cyclic(2), GroupTable::cyclic(2)),
      GroupTable::symmetric3()};
  for (const auto& g : groups) {
    const MultUnitary w = gen_group_kt(g);
    EXPECT_EQ(algebra_left(w).rank(), g.order());
    EXPECT_EQ(algebra_right(w).rank(), g.order());
  }
}

TEST(SliceAlgebra, BasisIsDeterministicAcrossRuns) {
  const SliceAlgebra a = algebra_left(gen_group_kt(GroupTable::symmetric3()));
  const SliceAlgebra b = algebra_left(gen_group_kt(GroupTable::symmetric3()));
  ASSERT_EQ(a.rank(), b.rank());
  for (int i = 0; i < a.rank(); ++i)
    EXPECT_EQ(a.basis()[static_cast<std::size_t>(i)], b.basis()[static_cast<std::size_t>(i)]);
}

TEST(Multiplier, CnotDecomposesInItsAlgebras) {
  const MultUnitary w = cnot();
  EXPECT_LT(check_multiplier(w, algebra_right(w), algebra_left(w)), 1e-12);
}

TEST(Multiplier, IdentityIsTrivial) {
  const MultUnitary w(Operator::identity(Space::power(2, 2)));
  EXPECT_LT(check_multiplier(w, algebra_right(w), algebra_left(w)), 1e-12);
}

TEST(Multiplier, WrongPairLeavesALargeResidual) {
  const MultUnitary w = cnot();
  const SliceAlgebra a_hat = algebra_right(w);
  EXPECT_GT(check_multiplier(w, a_hat, a_hat), 0.5);
}

TEST(Comult, GroupLikeElements) {
  const MultUnitary w = cnot();
  const Mat got = comult(w, Operator::on(w.h_space(), x_flip())).matrix();
  EXPECT_LT(op_norm(got - kron(x_flip(), x_flip())), 1e-12);
}

TEST(Comult, Unital) {
  const MultUnitary w = cnot();
  EXPECT_LT(op_norm(comult(w, Operator::identity(w.h_space())).matrix() - Mat::Identity(4, 4)),
            1e-12);
}

TEST(Comult, ChecksPassOnCyclicGroupOfOrderThree) {
  const MultUnitary w = gen_group_kt(GroupTable::cyclic(3));
  const ComultChecks cc = comult_checks(w, algebra_left(w));
  EXPECT_LT(cc.c1_factorization, 1e-12);
  EXPECT_LT(cc.c2_membership, 1e-12);
  EXPECT_LT(cc.c3_coassociativity, 1e-12);
  EXPECT_EQ(cc.density_rank_right, 9);
  EXPECT_EQ(cc.density_rank_left, 9);
  EXPECT_EQ(cc.expected_rank, 9);
}

TEST(Comult, PerturbedControlFailsTheMeaningfulChecks) {
  // A generic pentagon-violating perturbation inflates the slice span to the
  // full matrix algebra, so the telltales are the factorization defect, the
  // expansion-based coassociativity and the rank inflation itself.
  const MultUnitary w = perturbed(cnot(), 1e-2);
  const SliceAlgebra a = algebra_left(w);
  EXPECT_EQ(a.rank(), 4);  // inflated from 2
  const ComultChecks cc = comult_checks(w, a);
  EXPECT_GT(cc.c1_factorization, 1e-4);
  EXPECT_GT(cc.c3_coassociativity, 1e-4);
}

TEST(Kappa, FixesTheOrderTwoAlgebra) {
  const MultUnitary w = cnot();
  const SliceAlgebra a = algebra_left(w);
  const KappaData kd = kappa(w, a);
  EXPECT_LT(kd.consistency, 1e-12);
  EXPECT_LT(kd.antimultiplicativity, 1e-12);
  EXPECT_LT(kd.star_involution, 1e-12);
  // kappa = id on span{I, X}: every slice of W* equals the matching slice of W
  EXPECT_LT(op_norm(kd.matrix - Mat::Identity(2, 2)), 1e-12);
}

TEST(Kappa, SendsTranslationsToTheirInverses) {
  const GroupTable z3 = GroupTable::cyclic(3);
  const MultUnitary w = gen_group_kt(z3);
  const SliceAlgebra a = algebra_left(w);
  const KappaData kd = kappa(w, a);
  const Mat lam1 = group_translation(z3, 1).matrix();
  const Mat lam2 = group_translation(z3, 2).matrix();
  const Mat got = a.reconstruct(kd.matrix * a.coeffs(lam1));
  EXPECT_LT(op_norm(got - lam2), 1e-12);
  // and the unit is fixed
  const Mat unit = a.reconstruct(kd.matrix * a.coeffs(Mat::Identity(3, 3)));
  EXPECT_LT(op_norm(unit - Mat::Identity(3, 3)), 1e-12);
}

TEST(Kappa, PermutationRuleHoldsOnEveryBuiltInGroup) {
  const std::vector<GroupTable> groups = {GroupTable::cyclic(4), GroupTable::symmetric3()};
  for (const auto& g : groups) {
    const MultUnitary w = gen_group_kt(g);
    const SliceAlgebra a = algebra_left(w);
    const KappaData kd = kappa(w, a);
    for (int elem = 0; elem < g.order(); ++elem) {
      const Mat lam = group_translation(g, elem).matrix();
      const Mat lam_inv = group_translation(g, g.inverse(elem)).matrix();
      EXPECT_LT(op_norm(a.reconstruct(kd.matrix * a.coeffs(lam)) - lam_inv), 1e-10);
    }
  }
}

TEST(Kappa, PerturbedControlBreaksAntimultiplicativity) {
  const MultUnitary w = perturbed(cnot(), 1e-2);
  const SliceAlgebra a = algebra_left(w);
  const KappaData kd = kappa(w, a);
  EXPECT_GT(kd.antimultiplicativity, 1e-2);
}

TEST(Tau, TrivialWeightGivesTheIdentityMap) {
  const Space h = Space::line(2);
  const PositiveOperator q = PositiveOperator::identity(h);
  Rng rng(11);
  const Operator m = Operator::on(h, rng.gaussian_matrix(2, 2));
  for (double t : {0.3, -1.9, 14.0})
    EXPECT_LT(op_norm(tau(q, t, m).matrix() - m.matrix()), 1e-12);
}

TEST(Tau, RealParameterConjugatesPhases) {
  const Space h = Space::line(2);
  RVec d(2);
  d << 1, 2;
  const PositiveOperator q = PositiveOperator::diagonal(h, d);
  const double t = 0.7;
  const Mat got = tau(q, t, Operator::on(h, x_flip())).matrix();
  Mat want(2, 2);
  want << 0, std::pow(cd(2, 0), cd(0, -2 * t)), std::pow(cd(2, 0), cd(0, 2 * t)), 0;
  EXPECT_LT(op_norm(got - want), 1e-12);
  EXPECT_LT(op_norm(Mat(got.adjoint() * got - Mat::Identity(2, 2))), 1e-12);  // unitary similarity
}

TEST(Tau, HalfImaginaryParameterIsTheWeightedConjugation) {
  const Space h = Space::line(2);
  RVec d(2);
  d << 1, 2;
  const PositiveOperator q = PositiveOperator::diagonal(h, d);
  Mat want(2, 2);
  want << 0, 2, 0.5, 0;  // Q^{-1} X Q
  EXPECT_LT(op_norm(tau(q, cd(0, 0.5), Operator::on(h, x_flip())).matrix() - want), 1e-12);
  Mat want_minus(2, 2);
  want_minus << 0, 0.5, 2, 0;  // Q X Q^{-1}
  EXPECT_LT(op_norm(tau(q, cd(0, -0.5), Operator::on(h, x_flip())).matrix() - want_minus), 1e-12);
}

TEST(Antipode, TrivialScalingGivesKappa) {
  const MultUnitary w = cnot();
  const SliceAlgebra a = algebra_left(w);
  const KappaData kd = kappa(w, a);
  const AntipodeData ad =
      unitary_antipode(w, a, kd, PositiveOperator::identity(w.h_space()));
  EXPECT_LT(op_norm(ad.matrix - kd.matrix), 1e-12);
  EXPECT_LT(ad.involution, 1e-12);
  EXPECT_LT(ad.antiautomorphism, 1e-12);
  EXPECT_LT(ad.star_compat, 1e-12);
  EXPECT_LT(ad.tau_commutation, 1e-12);
  EXPECT_LT(ad.polar_reconstruction, 1e-12);
}

TEST(Antipode, InvertsTranslationsOnTheCyclicGroupOfOrderThree) {
  const GroupTable z3 = GroupTable::cyclic(3);
  const MultUnitary w = gen_group_kt(z3);
  const SliceAlgebra a = algebra_left(w);
  const KappaData kd = kappa(w, a);
  const AntipodeData ad = unitary_antipode(w, a, kd, PositiveOperator::identity(w.h_space()));
  const Mat lam1 = group_translation(z3, 1).matrix();
  const Mat lam2 = group_translation(z3, 2).matrix();
  EXPECT_LT(op_norm(a.reconstruct(ad.matrix * a.coeffs(lam1)) - lam2), 1e-10);
  EXPECT_LT(op_norm(a.reconstruct(ad.matrix * a.coeffs(Mat(Mat::Identity(3, 3)))) -
                    Mat::Identity(3, 3)),
            1e-10);
  EXPECT_LT(ad.involution, 1e-10);
}

TEST(Statement5, CovarianceAndFlipHoldOnBuiltInExamples) {
  for (int order : {2, 3}) {
    const MultUnitary w = gen_group_kt(GroupTable::cyclic(order));
    const SliceAlgebra a = algebra_left(w);
    const KappaData kd = kappa(w, a);
    const PositiveOperator q = PositiveOperator::identity(w.h_space());
    const AntipodeData ad = unitary_antipode(w, a, kd, q);
    const CheckReport rep = check_statement5(w, a, ad, q, {0.3, 1.7});
    EXPECT_TRUE(rep.passed());
    EXPECT_LT(rep.value("st5i_tau_covariance"), 1e-12);
    EXPECT_LT(rep.value("st5ii_antipode_flip"), 1e-12);
  }
}

TEST(Statement5, ZeroParameterReducesToEquality) {
  const MultUnitary w = cnot();
  const SliceAlgebra a = algebra_left(w);
  const KappaData kd = kappa(w, a);
  const PositiveOperator q = PositiveOperator::identity(w.h_space());
  const AntipodeData ad = unitary_antipode(w, a, kd, q);
  const CheckReport rep = check_statement5(w, a, ad, q, {0.0});
  EXPECT_LT(rep.value("st5i_tau_covariance"), 1e-14);
}

TEST(Statement6, TransposeAntipodeIdentityHoldsForGroups) {
  for (int order : {2, 3}) {
    const MultUnitary w = gen_group_kt(GroupTable::cyclic(order));
    const SliceAlgebra a = algebra_left(w);
    const SliceAlgebra a_hat = algebra_right(w);
    const KappaData kd = kappa(w, a);
    const PositiveOperator q = PositiveOperator::identity(w.h_space());
    const AntipodeData ad = unitary_antipode(w, a, kd, q);
    const Operator wt = build_wtilde(w, q);
    EXPECT_LT(check_statement6ii(w, a_hat, a, ad, wt), 1e-12);
  }
}

TEST(Statement6, IdentityCase) {
  const MultUnitary w(Operator::identity(Space::power(2, 2)));
  const SliceAlgebra a = algebra_left(w);
  const SliceAlgebra a_hat = algebra_right(w);
  const KappaData kd = kappa(w, a);
  const PositiveOperator q = PositiveOperator::identity(w.h_space());
  const AntipodeData ad = unitary_antipode(w, a, kd, q);
  EXPECT_LT(check_statement6ii(w, a_hat, a, ad, build_wtilde(w, q)), 1e-13);
}

TEST(ScriptT, TransportsRightSlicesToTheCompanion) {
  const MultUnitary w = cnot();
  RVec d(2);
  d << 1, 2;
  const PositiveOperator q_hat = PositiveOperator::diagonal(w.h_space(), d);
  const Operator wt = build_wtilde(w, PositiveOperator::identity(w.h_space()));
  EXPECT_LT(check_script_T(w, wt, q_hat), 1e-12);
}

TEST(ScriptT, TrivialWeightReducesToTheTranspose) {
  const MultUnitary w = cnot();
  const PositiveOperator q_hat = PositiveOperator::identity(w.h_space());
  Rng rng(12);
  const Operator m = Operator::on(w.h_space(), rng.gaussian_matrix(2, 2));
  EXPECT_EQ(script_T(q_hat, m).matrix(), m.matrix().transpose());
  EXPECT_LT(check_script_T(w, build_wtilde(w, q_hat), q_hat), 1e-12);
}

TEST(ScriptT, IsAntimultiplicative) {
  Rng rng(13);
  const Space h = Space::line(3);
  const PositiveOperator q_hat(Operator::on(h, rng.positive(3)));
  for (int trial = 0; trial < 10; ++trial) {
    const Operator m = Operator::on(h, rng.gaussian_matrix(3, 3));
    const Operator n = Operator::on(h, rng.gaussian_matrix(3, 3));
    const Mat lhs = script_T(q_hat, m * n).matrix();
    const Mat rhs = (script_T(q_hat, n) * script_T(q_hat, m)).matrix();
    EXPECT_LT(op_norm(lhs - rhs), 1e-12);
  }
}

TEST(WtildeComult, FactorizesOnBuiltInExamples) {
  for (int order : {2, 3}) {
    const MultUnitary w = gen_group_kt(GroupTable::cyclic(order));
    const Operator wt = build_wtilde(w, PositiveOperator::identity(w.h_space()));
    EXPECT_LT(check_wtilde_comult(w, wt), 1e-12);
  }
}

TEST(WtildeComult, IdentityCase) {
  const MultUnitary w(Operator::identity(Space::power(2, 2)));
  const Operator wt = build_wtilde(w, PositiveOperator::identity(w.h_space()));
  EXPECT_LT(check_wtilde_comult(w, wt), 1e-14);
}

TEST(Convolution, MatchesComultPairing) {
  Rng rng(14);
  const MultUnitary w = gen_group_kt(GroupTable::cyclic(3));
  const Space h = w.h_space();
  const Functional mu_f(h, rng.gaussian_matrix(3, 3));
  const Functional nu_f(h, rng.gaussian_matrix(3, 3));
  const Functional conv = convolve(mu_f, nu_f, w);
  for (int trial = 0; trial < 5; ++trial) {
    const Operator m = Operator::on(h, rng.gaussian_matrix(3, 3));
    const Mat dm = comult(w, m).matrix();
    const cd direct = (kron(mu_f.frame(), nu_f.frame()) * dm).trace();
    EXPECT_LT(std::abs(conv(m) - direct), 1e-10);
  }
}

TEST(Extract, FullPipelinePassesOnSkewedCyclicThree) {
  const MultUnitary w = gen_group_kt(GroupTable::cyclic(3));
  RVec d(3);
  d << 1, 2, 4;
  const auto [q, q_hat] = gen_skewed_certificate(w, d);
  const QGData qg = extract(w, q, q_hat);
  EXPECT_TRUE(qg.checks.passed());
  EXPECT_EQ(qg.a.rank(), 3);
  EXPECT_EQ(qg.a_hat.rank(), 3);
  // tau_log = 2 log Q vanishes for Q = I
  EXPECT_LT(op_norm(qg.tau_log.matrix()), 1e-12);
  // serialization round trip of the shapes
  const auto j = qgdata_to_json(qg);
  EXPECT_EQ(j["algebra_A"]["rank"], 3);
  EXPECT_EQ(j["checks"]["verdict"], "pass");
}

TEST(Extract, SymmetricGroupPasses) {
  const MultUnitary w = gen_group_kt(GroupTable::symmetric3());
  const PositiveOperator q = PositiveOperator::identity(w.h_space());
  const QGData qg = extract(w, q, q);
  EXPECT_TRUE(qg.checks.passed());
  EXPECT_EQ(qg.a.rank(), 6);
  EXPECT_EQ(qg.a_hat.rank(), 6);
}

TEST(Extract, NonscalarWeightCertificatePasses) {
  // A certificate whose Q is a nonscalar positive element of the slice
  // algebra itself; ties the certificate checks to the transpose/antipode
  // identity with nontrivial weights on both legs.
  const MultUnitary w = cnot();
  Mat qc(2, 2);
  qc << 1.25, 0.75, 0.75, 1.25;
  const PositiveOperator q(Operator::on(w.h_space(), qc));
  RVec d(2);
  d << 1, 2;
  const PositiveOperator q_hat = PositiveOperator::diagonal(w.h_space(), d);
  ASSERT_TRUE(check_modular(w, q, q_hat).passed());
  const QGData qg = extract(w, q, q_hat);
  EXPECT_TRUE(qg.checks.passed());
  EXPECT_LT(qg.checks.value("st6ii_transpose_antipode"), 1e-10);
  EXPECT_GT(op_norm(qg.tau_log.matrix()), 0.1);  // 2 log Q is genuinely nonzero
}

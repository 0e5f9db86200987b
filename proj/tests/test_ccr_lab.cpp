#include <gtest/gtest.h>

#include <random>

#include "gaugelab/ccr_lab.hpp"

using namespace gaugelab;

TEST(Weyl, ZeroShiftIsExact) {
  const LatticeLine lat(64, 0.1);
  EXPECT_EQ(weyl_relation_residual(lat, 0.73, 0.0), 0.0);
}

TEST(Weyl, CommensurateResidualVanishes) {
  const LatticeLine lat(256, 0.1);
  for (int w : {1, 2, 5}) {
    const double alpha = 2.0 * kPi * w / lat.length();
    for (int m : {1, 5, -3, 255}) EXPECT_LT(weyl_relation_residual(lat, alpha, m * lat.spacing), 1e-12);
  }
}

TEST(Weyl, IncommensurateResidualIsBoundaryWrap) {
  const LatticeLine lat(256, 0.1);
  const double alpha = 0.37;
  const double per_row = std::abs(1.0 - std::polar(1.0, -alpha * lat.length()));
  for (int m : {1, 5, -7}) {
    const double r = weyl_relation_residual(lat, alpha, m * lat.spacing);
    EXPECT_GT(r, 0.0);
    EXPECT_NEAR(r, std::sqrt(std::abs(m)) * per_row, 1e-10);
  }
}

TEST(Weyl, DenseMatricesAgree) {
  const LatticeLine lat(32, 0.25);
  const double alpha = 0.9, beta = 3 * 0.25;
  const Eigen::MatrixXcd t = translation_operator(lat, beta);
  const Eigen::MatrixXcd p = phase_operator(lat, alpha);
  EXPECT_LT((t.adjoint() * t - Eigen::MatrixXcd::Identity(32, 32)).norm(), 1e-15);
  EXPECT_LT((p.adjoint() * p - Eigen::MatrixXcd::Identity(32, 32)).norm(), 1e-14);
  const double dense = (t * p - std::polar(1.0, alpha * beta) * p * t).norm();
  EXPECT_NEAR(weyl_relation_residual(lat, alpha, beta), dense, 1e-13);
  // (T psi)_j = psi_{j-3}
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(32);
  e(0) = 1.0;
  EXPECT_EQ((t * e)(3), cplx(1.0));
}

TEST(Weyl, OffLatticeShiftRejected) {
  const LatticeLine lat(16, 0.1);
  EXPECT_THROW(weyl_relation_residual(lat, 1.0, 0.15), ParameterError);
  EXPECT_THROW(LatticeLine(1, 0.1), ParameterError);
  EXPECT_THROW(LatticeLine(8, -0.1), ParameterError);
}

TEST(TraceObstruction, OscillatorDefectIsInTheCorner) {
  for (std::size_t n : {2u, 3u, 8u, 32u}) {
    const auto osc = truncated_oscillator(n);
    const auto ob = trace_obstruction(osc.q, osc.p);
    EXPECT_NEAR(std::abs(ob.trace_of_commutator), 0.0, 1e-12);
    EXPECT_NEAR(ob.actual_residual, static_cast<double>(n), 1e-12 * n);
    EXPECT_DOUBLE_EQ(ob.frobenius_lower_bound, std::sqrt(double(n)));
    Eigen::MatrixXcd c = osc.q * osc.p - osc.p * osc.q;
    const auto last = static_cast<Eigen::Index>(n - 1);
    EXPECT_NEAR(std::abs(c(last, last) - kI * (1.0 - double(n))), 0.0, 1e-12);
    EXPECT_NEAR((c.topLeftCorner(last, last) - kI * Eigen::MatrixXcd::Identity(last, last)).norm(), 0.0, 1e-12);
  }
}

TEST(TraceObstruction, RandomPairsRespectBound) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int n : {2, 4, 8, 16, 32}) {
    for (int t = 0; t < 100; ++t) {
      Eigen::MatrixXcd q(n, n), p(n, n);
      for (Eigen::Index i = 0; i < n * n; ++i) q.data()[i] = cplx(g(rng), g(rng));
      for (Eigen::Index i = 0; i < n * n; ++i) p.data()[i] = cplx(g(rng), g(rng));
      const auto ob = trace_obstruction(q, p);
      EXPECT_LT(std::abs(ob.trace_of_commutator), 1e-12 * q.norm() * p.norm());
      EXPECT_GE(ob.actual_residual, ob.frobenius_lower_bound);
    }
  }
  EXPECT_THROW(trace_obstruction(Eigen::MatrixXcd(2, 2), Eigen::MatrixXcd(3, 3)), ParameterError);
}

TEST(CommutatorPower, SafeSubspaceIdentity) {
  const auto osc = truncated_oscillator(33);  // n_max = 32
  for (int n = 1; n <= 3; ++n) EXPECT_LT(commutator_power_residual(osc.q, osc.p, n), 1e-10) << n;
  EXPECT_THROW(commutator_power_residual(osc.q, osc.p, 33), GuardError);
  EXPECT_THROW(commutator_power_residual(osc.q, osc.p, 0), ParameterError);
}

TEST(CommutatorPower, FullSpaceResidualGrowsWithPower) {
  const auto osc = truncated_oscillator(17);
  double last = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const double r = commutator_power_residual_full(osc.q, osc.p, n);
    EXPECT_GT(r, last);
    last = r;
  }
  EXPECT_NEAR(commutator_power_residual_full(osc.q, osc.p, 1), 17.0, 1e-10);
}

TEST(OccupationClass, Examples) {
  const OccupationSequence a{{1, 2, 3}, 0};
  const OccupationSequence b{{5}, 0};
  const OccupationSequence c{{}, 1};
  EXPECT_TRUE(occupation_class_equal(a, b));
  EXPECT_EQ(count_differences(a, b), std::optional<std::size_t>(3));
  EXPECT_FALSE(occupation_class_equal(b, c));
  EXPECT_FALSE(count_differences(b, c).has_value());
  EXPECT_TRUE(occupation_class_equal(a, a));
  EXPECT_TRUE(is_fock_class({{3, 1, 4}, 0}));
  EXPECT_FALSE(is_fock_class(c));
  EXPECT_TRUE(is_fock_class({{}, 0}));
  // Same sequence, different prefix lengths.
  EXPECT_EQ(count_differences({{2, 2}, 2}, {{}, 2}), std::optional<std::size_t>(0));
}

TEST(OccupationClass, EquivalenceRelationProperties) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(0, 5), val(0, 2);
  auto random_seq = [&] {
    OccupationSequence s;
    s.prefix.resize(static_cast<std::size_t>(len(rng)));
    for (auto& v : s.prefix) v = static_cast<std::uint64_t>(val(rng));
    s.tail = static_cast<std::uint64_t>(val(rng));
    return s;
  };
  for (int t = 0; t < 500; ++t) {
    const auto a = random_seq(), b = random_seq(), c = random_seq();
    EXPECT_TRUE(occupation_class_equal(a, a));
    EXPECT_EQ(occupation_class_equal(a, b), occupation_class_equal(b, a));
    if (occupation_class_equal(a, b) && occupation_class_equal(b, c)) {
      EXPECT_TRUE(occupation_class_equal(a, c));
    }
    EXPECT_EQ(occupation_class_equal(a, b), count_differences(a, b).has_value());
  }
}

TEST(OccupationClass, LadderActionChangesOneIndex) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> idx(0, 9);
  OccupationSequence s{{1, 0, 2}, 1};
  for (int t = 0; t < 200; ++t) {
    const std::size_t i = idx(rng);
    const auto r = raise(s, i);
    EXPECT_EQ(count_differences(s, r), std::optional<std::size_t>(1));
    EXPECT_TRUE(occupation_class_equal(s, r));
    EXPECT_EQ(r.at(i), s.at(i) + 1);
    if (s.at(i) > 0) {
      const auto l = lower(s, i);
      EXPECT_EQ(count_differences(s, l), std::optional<std::size_t>(1));
    }
    s = r;
  }
  EXPECT_THROW(lower({{0}, 0}, 0), ParameterError);
  EXPECT_THROW(lower({{}, 0}, 5), ParameterError);
}

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gaugelab/maxwell_rs.hpp"

using namespace gaugelab;

namespace {

RSField random_field(const CubicGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RealVectorField e{grid, std::vector<Vec3>(grid.size())};
  RealVectorField b{grid, std::vector<Vec3>(grid.size())};
  for (auto& v : e.values) v = {g(rng), g(rng), g(rng)};
  for (auto& v : b.values) v = {g(rng), g(rng), g(rng)};
  return rs_from_EB(e, b);
}

double max_diff(const RSField& a, const RSField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) d = std::max(d, std::abs(a.values()[i][c] - b.values()[i][c]));
  return d;
}

// Smooth field built from a handful of low lattice modes.
RSField smooth_field(const CubicGrid& grid) {
  std::vector<CVec3> v(grid.size());
  const double u = 2.0 * kPi / grid.box();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 x = grid.position(i);
    v[i] = {std::sin(u * x[1]) + cplx(0, 1) * std::cos(2 * u * x[2]),
            std::cos(u * (x[0] + x[2])), cplx(0.3, 0.0) * std::sin(u * x[0] - u * x[1])};
  }
  return RSField(grid, std::move(v));
}

}  // namespace

TEST(CubicGrid, Validation) {
  EXPECT_THROW(CubicGrid(6, 1.0), ParameterError);
  EXPECT_THROW(CubicGrid(9, 1.0), ParameterError);
  EXPECT_THROW(CubicGrid(8, 0.0), ParameterError);
  const CubicGrid g(8, 2.0);
  EXPECT_THROW(g.slot({4, 0, 0}), ParameterError);
  EXPECT_NO_THROW(g.slot({-4, 3, 0}));
}

TEST(RSField, FromEBConstant) {
  const CubicGrid grid(8, 1.0);
  RealVectorField e{grid, std::vector<Vec3>(grid.size(), Vec3{1, 0, 0})};
  RealVectorField b{grid, std::vector<Vec3>(grid.size(), Vec3{0, 1, 0})};
  const RSField psi = rs_from_EB(e, b);
  const double r = 1.0 / std::sqrt(2.0);
  for (const auto& v : psi.values()) {
    EXPECT_NEAR(std::abs(v[0] - cplx(r, 0)), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(v[1] - cplx(0, r)), 0.0, 1e-16);
    EXPECT_EQ(v[2], cplx(0.0));
  }
}

TEST(RSField, ZeroFieldAndGridMismatch) {
  const CubicGrid grid(8, 1.0);
  RealVectorField z{grid, std::vector<Vec3>(grid.size())};
  const RSField psi = rs_from_EB(z, z);
  EXPECT_EQ(energy(psi), 0.0);
  EXPECT_EQ(divergence(psi).norm(), 0.0);
  RealVectorField other{CubicGrid(10, 1.0), std::vector<Vec3>(1000)};
  EXPECT_THROW(rs_from_EB(z, other), ParameterError);
  std::vector<CVec3> bad(grid.size());
  bad[3][1] = cplx(NAN, 0);
  EXPECT_THROW(RSField(grid, bad), ParameterError);
}

TEST(RSField, EnergyAndRealityRoundTrip) {
  const CubicGrid grid(8, 2.0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  RealVectorField e{grid, std::vector<Vec3>(grid.size())};
  RealVectorField b{grid, std::vector<Vec3>(grid.size())};
  double direct = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    e.values[i] = {g(rng), g(rng), g(rng)};
    b.values[i] = {g(rng), g(rng), g(rng)};
    direct += 0.5 * (dot3(e.values[i], e.values[i]) + dot3(b.values[i], b.values[i]));
  }
  const RSField psi = rs_from_EB(e, b);
  EXPECT_NEAR(energy(psi), direct * grid.cell_volume(), 1e-12 * direct);
  const auto e2 = electric_field(psi);
  const auto b2 = magnetic_field(psi);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_NEAR(e2.values[i][c], e.values[i][c], 1e-15 * (1 + std::abs(e.values[i][c])));
      EXPECT_NEAR(b2.values[i][c], b.values[i][c], 1e-15 * (1 + std::abs(b.values[i][c])));
    }
}

TEST(Evolve, IdentityAtZeroAndGroupProperty) {
  const CubicGrid grid(8, 2.0);
  const RSField psi = random_field(grid, 4);
  EXPECT_EQ(max_diff(evolve(psi, 0.0), psi), 0.0);
  EXPECT_LT(max_diff(evolve(evolve(psi, 0.3), 0.4), evolve(psi, 0.7)), 1e-12);
  EXPECT_LT(max_diff(evolve(evolve(psi, 0.3), -0.3), psi), 1e-12);
}

TEST(Evolve, ConservesEnergyAndDivergenceNorm) {
  const CubicGrid grid(16, 2.0 * kPi);
  RSField psi = random_field(grid, 9);
  const double e0 = energy(psi);
  const double d0 = divergence(psi).norm();
  for (int s = 0; s < 100; ++s) psi = evolve(psi, 0.01);
  EXPECT_LT(std::abs(energy(psi) - e0) / e0, 1e-12);
  EXPECT_LT(std::abs(divergence(psi).norm() - d0) / d0, 1e-12);
}

TEST(Evolve, HelicityComponentsSeparatelyConserved) {
  const CubicGrid grid(8, 3.0);
  const RSField psi = random_field(grid, 21);
  const RSField later = evolve(psi, 0.77);
  for (Handedness h : {Handedness::R, Handedness::L}) {
    const double a = energy(helicity_projection(psi, h));
    EXPECT_NEAR(energy(helicity_projection(later, h)), a, 1e-12 * a);
  }
}

TEST(Evolve, EquationOfMotionSecondOrder) {
  const CubicGrid grid(16, 2.0 * kPi);
  const RSField psi = smooth_field(grid);
  const RSField rhs = curl(psi);
  auto residual = [&](double h) {
    const RSField p = evolve(psi, h);
    const RSField m = evolve(psi, -h);
    double r = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t c = 0; c < 3; ++c)
        r = std::max(r, std::abs((p.values()[i][c] - m.values()[i][c]) / (2 * h) + kI * rhs.values()[i][c]));
    return r;
  };
  const double r1 = residual(1e-2);
  const double r2 = residual(5e-3);
  EXPECT_LT(r1, 1e-3);
  EXPECT_NEAR(r1 / r2, 4.0, 0.05);
}

TEST(Divergence, GradientFieldSpectralValue) {
  const CubicGrid grid(16, 2.0 * kPi);
  // f = sin x + cos 2y: grad f = (cos x, -2 sin 2y, 0), laplacian = -sin x - 4 cos 2y
  std::vector<CVec3> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 x = grid.position(i);
    v[i] = {std::cos(x[0]), -2.0 * std::sin(2 * x[1]), 0.0};
  }
  const RSField psi(grid, v);
  const ScalarField d = divergence(psi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.position(i);
    EXPECT_NEAR(std::abs(d.values[i] - (-std::sin(x[0]) - 4.0 * std::cos(2 * x[1]))), 0.0, 1e-12);
  }
  const double n0 = d.norm();
  EXPECT_GT(n0, 1.0);
  EXPECT_NEAR(divergence(evolve(psi, 0.37)).norm(), n0, 1e-12 * n0);
}

TEST(Divergence, TransverseDataStaysTransverse) {
  const CubicGrid grid(8, 2.0);
  RSField psi = helicity_projection(random_field(grid, 6), Handedness::R);
  EXPECT_LT(divergence(psi).norm(), 1e-12);
  EXPECT_LT(divergence(evolve(psi, 1.3)).norm(), 1e-12);
}

TEST(Helicity, PolarizationVectors) {
  const double r = 1.0 / std::sqrt(2.0);
  const CVec3 up = helicity_vector({0, 0, 2.0}, Handedness::R);
  EXPECT_NEAR(std::abs(up[0] - r), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(up[1] - kI * r), 0.0, 1e-16);
  const CVec3 down = helicity_vector({0, 0, -2.0}, Handedness::R);
  EXPECT_NEAR(std::abs(down[0] - r), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(down[1] + kI * r), 0.0, 1e-16);
  const CVec3 left = helicity_vector({0, 0, 2.0}, Handedness::L);
  EXPECT_NEAR(std::abs(left[1] + kI * r), 0.0, 1e-16);
}

TEST(Helicity, PlaneWaveIsCurlEigenstateWithPhase) {
  const CubicGrid grid(16, 2.0 * kPi);
  for (const Vec3& k : {Vec3{0, 0, 3}, Vec3{1, -2, 2}, Vec3{0, 0, -1}}) {
    for (Handedness h : {Handedness::R, Handedness::L}) {
      const RSField psi = helicity_plane_wave(k, h, grid);
      EXPECT_NEAR(energy(psi), 1.0, 1e-13);
      const double sgn = h == Handedness::R ? 1.0 : -1.0;
      const RSField c = curl(psi);
      double err = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j)
          err = std::max(err, std::abs(c.values()[i][j] - sgn * norm3(k) * psi.values()[i][j]));
      EXPECT_LT(err, 1e-12);
      const double t = 0.9;
      const RSField later = evolve(psi, t);
      const cplx phase = std::polar(1.0, -sgn * norm3(k) * t);
      double perr = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < 3; ++j)
          perr = std::max(perr, std::abs(later.values()[i][j] - phase * psi.values()[i][j]));
      EXPECT_LT(perr, 1e-12);
    }
  }
}

TEST(Helicity, PlaneWaveErrors) {
  const CubicGrid grid(8, 2.0 * kPi);
  EXPECT_THROW(helicity_plane_wave({0, 0, 0}, Handedness::R, grid), ParameterError);
  EXPECT_THROW(helicity_plane_wave({0, 0, 1.5}, Handedness::R, grid), ParameterError);
  EXPECT_THROW(helicity_plane_wave({0, 0, 4}, Handedness::R, grid), ParameterError);
}

TEST(Sigma, AlgebraAndEquationOfMotionForm) {
  const auto s = sigma_matrices();
  const Eigen::Matrix3cd s1 = (Eigen::Matrix3cd() << 0, 0, 0, 0, 0, kI, 0, -kI, 0).finished();
  EXPECT_EQ((s[0] - s1).norm(), 0.0);
  for (const auto& m : s) {
    EXPECT_EQ((m - m.adjoint()).norm(), 0.0);
    EXPECT_EQ((m + m.transpose()).norm(), 0.0);
  }
  // With (Sigma_l)_{mn} = i eps_{lmn} the cyclic commutator carries -i.
  for (int l = 0; l < 3; ++l) {
    const auto& a = s[static_cast<std::size_t>(l)];
    const auto& b = s[static_cast<std::size_t>((l + 1) % 3)];
    const auto& c = s[static_cast<std::size_t>((l + 2) % 3)];
    EXPECT_NEAR((a * b - b * a + kI * c).norm(), 0.0, 1e-15);
  }
  const CubicGrid grid(8, 2.0);
  const RSField psi = random_field(grid, 13);
  const RSField lhs = sigma_derivative(psi);
  const RSField c = curl(psi);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) err = std::max(err, std::abs(lhs.values()[i][j] + kI * c.values()[i][j]));
  EXPECT_LT(err, 1e-12);
}

TEST(Snapshot, CsvLayout) {
  const CubicGrid grid(8, 1.0);
  std::ostringstream out;
  write_snapshot_csv(helicity_plane_wave({0, 0, 2 * kPi}, Handedness::R, grid), out);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "ix,iy,iz,re_1,im_1,re_2,im_2,re_3,im_3");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 513);
}

TEST(VectorPotential, ConstantField) {
  FieldStrength f{};
  f[0][1] = 0.7;   f[1][0] = -0.7;
  f[1][2] = -1.3;  f[2][1] = 1.3;
  f[0][3] = 0.4;   f[3][0] = -0.4;
  auto sampler = [&](const Vec4&) { return f; };
  const Vec4 x{0.3, -0.8, 0.5, 1.2};
  const Vec4 lit = vector_potential_from_F(sampler, x, 16, PotentialConvention::Literal);
  for (std::size_t mu = 0; mu < 4; ++mu) {
    double expected = 0.0;
    for (std::size_t nu = 0; nu < 4; ++nu) expected += 0.5 * f[mu][nu] * metric_diag(static_cast<int>(nu)) * x[nu];
    EXPECT_NEAR(lit[mu], expected, 1e-15);
  }
  const Vec4 rt = vector_potential_from_F(sampler, x, 16, PotentialConvention::RoundTrip);
  for (std::size_t mu = 0; mu < 4; ++mu) EXPECT_NEAR(rt[mu], -lit[mu], 1e-15);

  auto a_lit = [&](const Vec4& y) { return vector_potential_from_F(sampler, y, 16, PotentialConvention::Literal); };
  auto a_rt = [&](const Vec4& y) { return vector_potential_from_F(sampler, y, 16, PotentialConvention::RoundTrip); };
  const FieldStrength f_lit = field_strength_from_A(a_lit, x, 1e-3);
  const FieldStrength f_rt = field_strength_from_A(a_rt, x, 1e-3);
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) {
      EXPECT_NEAR(f_lit[mu][nu], -f[mu][nu], 1e-10);
      EXPECT_NEAR(f_rt[mu][nu], f[mu][nu], 1e-10);
    }
}

TEST(VectorPotential, ZeroFieldAndContracts) {
  auto zero = [](const Vec4&) { return FieldStrength{}; };
  const Vec4 a = vector_potential_from_F(zero, {1, 2, 3, 4}, 16);
  for (double v : a) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(vector_potential_from_F(zero, {1, 2, 3, 4}, 8), ParameterError);
  auto sym = [](const Vec4&) {
    FieldStrength f{};
    f[0][1] = f[1][0] = 1.0;
    return f;
  };
  EXPECT_THROW(vector_potential_from_F(sym, {1, 2, 3, 4}, 16), ContractError);
}

TEST(VectorPotential, RoundTripOnSmoothField) {
  // F from A^mu = (x1 x2, sin x0, x3^2 x0, cos x1): any F = dA is closed.
  auto a_true = [](const Vec4& y) {
    return Vec4{y[1] * y[2], std::sin(y[0]), y[3] * y[3] * y[0], std::cos(y[1])};
  };
  auto f_exact = [](const Vec4& y) {
    // d_lower[alpha][nu] = d A^nu / d x^alpha
    double d[4][4] = {};
    d[1][0] = y[2];
    d[2][0] = y[1];
    d[0][1] = std::cos(y[0]);
    d[3][2] = 2 * y[3] * y[0];
    d[0][2] = y[3] * y[3];
    d[1][3] = -std::sin(y[1]);
    FieldStrength f{};
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        f[static_cast<std::size_t>(mu)][static_cast<std::size_t>(nu)] =
            metric_diag(mu) * d[mu][nu] - metric_diag(nu) * d[nu][mu];
    return f;
  };
  const Vec4 x{0.4, -0.6, 0.9, 0.3};
  const FieldStrength check = field_strength_from_A(a_true, x, 1e-4);
  const FieldStrength exact = f_exact(x);
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) ASSERT_NEAR(check[mu][nu], exact[mu][nu], 1e-7);

  auto a_rt = [&](const Vec4& y) { return vector_potential_from_F(f_exact, y, 32, PotentialConvention::RoundTrip); };
  const FieldStrength back = field_strength_from_A(a_rt, x, 1e-4);
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) EXPECT_NEAR(back[mu][nu], exact[mu][nu], 1e-7);
}

#include "gaugelab/modes.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <cstdio>
#include <ostream>

#include "gaugelab/format.hpp"

namespace gaugelab {
namespace {

constexpr double kTwoPiCubed = 8.0 * kPi * kPi * kPi;

struct RadialShells {
  std::vector<double> k;
  std::vector<double> width;
};

RadialShells radial_shells(double kmin, double kmax, std::size_t n_shells,
                           Spacing spacing) {
  if (!(kmin > 0.0) || !(kmax > kmin) || !std::isfinite(kmax))
    throw ParameterError("grid: need 0 < kmin < kmax");
  if (n_shells < 2) throw ParameterError("grid: need n_shells >= 2");
  RadialShells s;
  s.k.resize(n_shells);
  s.width.resize(n_shells);
  if (spacing == Spacing::Log) {
    const double u0 = std::log(kmin);
    const double du = (std::log(kmax) - u0) / static_cast<double>(n_shells);
    for (std::size_t i = 0; i < n_shells; ++i) {
      s.k[i] = std::exp(u0 + (static_cast<double>(i) + 0.5) * du);
      s.width[i] = s.k[i] * du;
    }
  } else {
    const double dk = (kmax - kmin) / static_cast<double>(n_shells);
    for (std::size_t i = 0; i < n_shells; ++i) {
      s.k[i] = kmin + (static_cast<double>(i) + 0.5) * dk;
      s.width[i] = dk;
    }
  }
  return s;
}

double shell_weight(double k, double width) {
  return 4.0 * kPi * k * k * width / (kTwoPiCubed * 2.0 * k);
}

void require_consistent(const ModeProfile& p, const char* what) {
  if (!p.grid) throw ParameterError(std::string(what) + ": profile has no grid");
  if (p.values.size() != p.grid->size())
    throw ParameterError(std::string(what) + ": profile/grid size mismatch");
}

}  // namespace

GridPtr build_isotropic_grid(double kmin, double kmax, std::size_t n_shells,
                             Spacing spacing) {
  const auto shells = radial_shells(kmin, kmax, n_shells, spacing);
  auto grid = std::make_shared<ModeGrid>();
  grid->kmin = kmin;
  grid->kmax = kmax;
  grid->layout = GridLayout::IsotropicRadial;
  grid->nodes.reserve(n_shells);
  grid->weights.reserve(n_shells);
  for (std::size_t i = 0; i < n_shells; ++i) {
    grid->nodes.push_back({0.0, 0.0, shells.k[i]});
    grid->weights.push_back(shell_weight(shells.k[i], shells.width[i]));
  }
  return grid;
}

GridPtr build_full_angular_grid(double kmin, double kmax, std::size_t n_shells,
                                Spacing spacing, std::size_t n_theta,
                                std::size_t n_phi) {
  if (n_theta < 1 || n_phi < 1)
    throw ParameterError("grid: need n_theta, n_phi >= 1");
  const auto shells = radial_shells(kmin, kmax, n_shells, spacing);

  std::vector<double> cos_theta(n_theta), w_theta(n_theta);
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n_theta);
  for (std::size_t j = 0; j < n_theta; ++j)
    gsl_integration_glfixed_point(-1.0, 1.0, j, &cos_theta[j], &w_theta[j], table);
  gsl_integration_glfixed_table_free(table);

  auto grid = std::make_shared<ModeGrid>();
  grid->kmin = kmin;
  grid->kmax = kmax;
  grid->layout = GridLayout::FullAngular;
  grid->nodes.reserve(n_shells * n_theta * n_phi);
  grid->weights.reserve(n_shells * n_theta * n_phi);
  const double dphi = 2.0 * kPi / static_cast<double>(n_phi);
  for (std::size_t i = 0; i < n_shells; ++i) {
    const double shell = shell_weight(shells.k[i], shells.width[i]);
    for (std::size_t j = 0; j < n_theta; ++j) {
      const double ct = cos_theta[j];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (std::size_t l = 0; l < n_phi; ++l) {
        const double phi = (static_cast<double>(l) + 0.5) * dphi;
        const double kk = shells.k[i];
        grid->nodes.push_back({kk * st * std::cos(phi), kk * st * std::sin(phi), kk * ct});
        // angular weights sum to 4 pi; normalize to a fraction of the shell
        grid->weights.push_back(shell * w_theta[j] * dphi / (4.0 * kPi));
      }
    }
  }
  return grid;
}

double integrate_radial(const ModeGrid& grid,
                        const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * f(grid.k(i));
  return sum;
}

ModeProfile coulomb_profile(double e, GridPtr grid, double t) {
  if (!grid) throw ParameterError("coulomb_profile: null grid");
  ModeProfile p;
  p.kind = ProfileKind::Coulomb;
  p.t = t;
  p.charge = e;
  p.values.resize(grid->size(), FourAmplitude{});
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double k = grid->k(i);
    p.values[i][0] = e * std::polar(1.0, k * t) / k;
  }
  p.grid = std::move(grid);
  return p;
}

ModeProfile screened_coulomb_profile(double e, double mu, double m, GridPtr grid) {
  if (!grid) throw ParameterError("screened_coulomb_profile: null grid");
  if (!(mu > 0.0)) throw ParameterError("screened_coulomb_profile: need mu > 0");
  if (!(m >= mu)) throw ParameterError("screened_coulomb_profile: need m >= mu");
  ModeProfile p;
  p.kind = ProfileKind::Screened;
  p.charge = e;
  p.mu = mu;
  p.m = m;
  p.values.resize(grid->size(), FourAmplitude{});
  const double d = m * m - mu * mu;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double k = grid->k(i);
    const double k2 = k * k;
    // 1/(k^2+mu^2) - 1/(k^2+m^2) without cancellation
    p.values[i][0] = e * k * d / ((k2 + mu * mu) * (k2 + m * m));
  }
  p.grid = std::move(grid);
  return p;
}

ModeProfile custom_profile(GridPtr grid, std::vector<FourAmplitude> values) {
  if (!grid) throw ParameterError("custom_profile: null grid");
  if (values.size() != grid->size())
    throw ParameterError("custom_profile: one amplitude per node required");
  ModeProfile p;
  p.kind = ProfileKind::Custom;
  p.values = std::move(values);
  p.grid = std::move(grid);
  return p;
}

double reconstruct_position_potential(const ModeProfile& profile, double r) {
  if (!(r > 0.0)) throw ParameterError("reconstruct_position_potential: need r > 0");
  require_consistent(profile, "reconstruct_position_potential");
  const ModeGrid& g = *profile.grid;
  double sum = 0.0;
  if (g.layout == GridLayout::IsotropicRadial) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double kr = g.k(i) * r;
      sum += g.weights[i] * 2.0 * profile.values[i][0].real() * std::sin(kr) / kr;
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx phase = std::polar(1.0, g.nodes[i][2] * r);
      sum += g.weights[i] * 2.0 * (profile.values[i][0] * phase).real();
    }
  }
  return sum;
}

double number_integral(const ModeProfile& profile) {
  require_consistent(profile, "number_integral");
  const ModeGrid& g = *profile.grid;
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weights[i] * std::norm(profile.values[i][0]);
  return sum;
}

cplx pauli_jordan_plus_closed(const Vec4& x, double eps) {
  if (!(eps > 0.0)) throw ParameterError("pauli_jordan: need eps > 0");
  const cplx x0(x[0], -eps);
  const double r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  return kI / (4.0 * kPi * kPi) / (x0 * x0 - r2);
}

cplx pauli_jordan_minus_closed(const Vec4& x, double eps) {
  if (!(eps > 0.0)) throw ParameterError("pauli_jordan: need eps > 0");
  const cplx x0(x[0], eps);
  const double r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
  return -kI / (4.0 * kPi * kPi) / (x0 * x0 - r2);
}

cplx pauli_jordan_closed(const Vec4& x, double eps) {
  return pauli_jordan_plus_closed(x, eps) + pauli_jordan_minus_closed(x, eps);
}

namespace {

// sum_i w_i exp(-eps k_i) exp(-i sign k_i.x)
cplx damped_mode_sum(const ModeGrid& g, const Vec4& x, double eps, double sign) {
  if (!(eps > 0.0)) throw ParameterError("pauli_jordan: need eps > 0");
  cplx sum = 0.0;
  if (g.layout == GridLayout::IsotropicRadial) {
    const double r = std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double k = g.k(i);
      const double kr = k * r;
      const double sinc = kr == 0.0 ? 1.0 : std::sin(kr) / kr;
      sum += g.weights[i] * std::exp(-eps * k) * sinc * std::polar(1.0, -sign * k * x[0]);
    }
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec3& kv = g.nodes[i];
      const double k = g.k(i);
      const double kx = k * x[0] - (kv[0] * x[1] + kv[1] * x[2] + kv[2] * x[3]);
      sum += g.weights[i] * std::exp(-eps * k) * std::polar(1.0, -sign * kx);
    }
  }
  return sum;
}

}  // namespace

cplx pauli_jordan_plus_modesum(const ModeGrid& grid, const Vec4& x, double eps) {
  return -kI * damped_mode_sum(grid, x, eps, +1.0);
}

cplx pauli_jordan_minus_modesum(const ModeGrid& grid, const Vec4& x, double eps) {
  return kI * damped_mode_sum(grid, x, eps, -1.0);
}

cplx kg_inner_product(const Vec3& k, const Vec3& kp, double box, std::size_t n) {
  if (!(box > 0.0) || n < 2) throw ParameterError("kg_inner_product: need box > 0, n >= 2");
  const double unit = 2.0 * kPi / box;
  std::array<long, 3> m{}, mp{};
  for (int c = 0; c < 3; ++c) {
    const double a = k[c] / unit, b = kp[c] / unit;
    if (std::abs(a - std::round(a)) > 1e-9 || std::abs(b - std::round(b)) > 1e-9)
      throw ParameterError("kg_inner_product: momentum not commensurate with the box");
    m[c] = std::lround(a);
    mp[c] = std::lround(b);
    if (2 * std::abs(m[c]) >= static_cast<long>(n) || 2 * std::abs(mp[c]) >= static_cast<long>(n))
      throw ParameterError("kg_inner_product: momentum beyond the lattice Nyquist range");
  }
  const double k0 = norm3(k), kp0 = norm3(kp);
  if (k0 == 0.0 || kp0 == 0.0) throw ParameterError("kg_inner_product: zero momentum has k^0 = 0");

  // phi_k^* (-i kp0) phi_kp - (i k0) phi_k^* phi_kp, times i: (k0 + kp0) phi_k^* phi_kp
  const double h = box / static_cast<double>(n);
  const double dv = h * h * h;
  cplx overlap = 0.0;
  for (std::size_t ix = 0; ix < n; ++ix)
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t iz = 0; iz < n; ++iz) {
        const Vec3 x{ix * h, iy * h, iz * h};
        overlap += std::polar(1.0, dot3(kp, x) - dot3(k, x));
      }
  return (k0 + kp0) * overlap * dv;
}

void write_grid_csv(const ModeGrid& grid, std::ostream& out) {
  out << "k,weight";
  if (grid.layout == GridLayout::FullAngular) out << ",kx,ky,kz";
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << fmt_double(grid.k(i)) << ',' << fmt_double(grid.weights[i]);
    if (grid.layout == GridLayout::FullAngular)
      for (double c : grid.nodes[i]) out << ',' << fmt_double(c);
    out << '\n';
  }
}

void write_profile_csv(const ModeProfile& profile, std::ostream& out) {
  require_consistent(profile, "write_profile_csv");
  const ModeGrid& g = *profile.grid;
  out << "k,weight,re_q0,im_q0,re_q1,im_q1,re_q2,im_q2,re_q3,im_q3";
  if (g.layout == GridLayout::FullAngular) out << ",kx,ky,kz";
  out << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    out << fmt_double(g.k(i)) << ',' << fmt_double(g.weights[i]);
    for (const cplx& q : profile.values[i]) out << ',' << fmt_double(q.real()) << ',' << fmt_double(q.imag());
    if (g.layout == GridLayout::FullAngular)
      for (double c : g.nodes[i]) out << ',' << fmt_double(c);
    out << '\n';
  }
}

}  // namespace gaugelab

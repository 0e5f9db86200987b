#pragma once

// Momentum-space discretization of the invariant measure d^3k / ((2 pi)^3 2 k^0)
// and the classical mode profiles (Coulomb, screened Coulomb, custom) that feed
// the field-translation operators.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "gaugelab/common.hpp"

namespace gaugelab {

enum class Spacing { Log, Linear };
enum class GridLayout { IsotropicRadial, FullAngular };

/// Quadrature nodes and weights for the invariant measure.
///
/// Isotropic grids place one node per radial shell at k_i * (0, 0, 1); the
/// solid angle 4 pi k^2 is folded into the weight, so
/// w_i = 4 pi k_i^2 Delta_i / ((2 pi)^3 2 k_i). Radial shells are midpoints in
/// u = ln k for log spacing (Delta_i = k_i * du) and in k for linear spacing.
///
/// Full-angular grids split each shell weight over a Gauss-Legendre (cos theta)
/// x uniform (phi) product rule.
struct ModeGrid {
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  double kmin = 0.0;
  double kmax = 0.0;
  GridLayout layout = GridLayout::IsotropicRadial;

  std::size_t size() const { return nodes.size(); }
  double k(std::size_t i) const { return norm3(nodes[i]); }
};

using GridPtr = std::shared_ptr<const ModeGrid>;

GridPtr build_isotropic_grid(double kmin, double kmax, std::size_t n_shells,
                             Spacing spacing = Spacing::Log);

GridPtr build_full_angular_grid(double kmin, double kmax, std::size_t n_shells,
                                Spacing spacing, std::size_t n_theta,
                                std::size_t n_phi);

/// sum_i w_i f(|k_i|).
double integrate_radial(const ModeGrid& grid,
                        const std::function<double(double)>& f);

enum class ProfileKind { Coulomb, Screened, Gauge, Custom };

/// Covariant four-component amplitude q_mu(k) per grid node.
using FourAmplitude = std::array<cplx, 4>;

struct ModeProfile {
  GridPtr grid;
  std::vector<FourAmplitude> values;
  ProfileKind kind = ProfileKind::Custom;
  double t = 0.0;
  double charge = 0.0;
  double mu = 0.0;  // screening mass (Screened only)
  double m = 0.0;   // short-distance cutoff mass (Screened only)
};

/// q_0(t, k) = e * exp(i |k| t) / |k|, spatial components zero.
ModeProfile coulomb_profile(double e, GridPtr grid, double t = 0.0);

/// q_0(k) = e * |k| * [1/(k^2 + mu^2) - 1/(k^2 + m^2)]; reconstructs
/// V(r) = e/(4 pi r) (exp(-mu r) - exp(-m r)). Requires m >= mu > 0.
ModeProfile screened_coulomb_profile(double e, double mu, double m, GridPtr grid);

ModeProfile custom_profile(GridPtr grid, std::vector<FourAmplitude> values);

/// sum_i w_i 2 Re[q_0(k_i) exp(i k_i . x)] at |x| = r. Isotropic grids use the
/// angular average sin(kr)/(kr); full-angular grids sum directly with x = r z.
double reconstruct_position_potential(const ModeProfile& profile, double r);

/// sum_i w_i |q_0(k_i)|^2, the discretized time-like photon number integral.
double number_integral(const ModeProfile& profile);

/// Delta_0^+(x) = (i / 4 pi^2) / ((x^0 - i eps)^2 - |x|^2).
cplx pauli_jordan_plus_closed(const Vec4& x, double eps);
/// Delta_0^-(x) = -(i / 4 pi^2) / ((x^0 + i eps)^2 - |x|^2).
cplx pauli_jordan_minus_closed(const Vec4& x, double eps);
/// Delta_0 = Delta_0^+ + Delta_0^-.
cplx pauli_jordan_closed(const Vec4& x, double eps);

/// -i sum_i w_i exp(-eps k_i) exp(-i k_i . x), k_i . x = k^0 x^0 - k.x.
cplx pauli_jordan_plus_modesum(const ModeGrid& grid, const Vec4& x, double eps);
/// +i sum_i w_i exp(-eps k_i) exp(+i k_i . x).
cplx pauli_jordan_minus_modesum(const ModeGrid& grid, const Vec4& x, double eps);

/// Lattice momentum 2 pi m / L with integer components.
using LatticeMomentum = std::array<int, 3>;

/// i sum_x phi_k^* d0<-> phi_k' dV on an n^3 periodic lattice of side `box`,
/// phi_k(x) = exp(-i k.x) at t = 0. Equals box^3 2 k^0 for k = k', 0 otherwise.
cplx kg_inner_product(const Vec3& k, const Vec3& kp, double box, std::size_t n);

/// Columns: k, weight, re_q0, im_q0, ..., re_q3, im_q3 (full-angular grids
/// append kx, ky, kz). 17 significant digits.
void write_profile_csv(const ModeProfile& profile, std::ostream& out);
void write_grid_csv(const ModeGrid& grid, std::ostream& out);

}  // namespace gaugelab

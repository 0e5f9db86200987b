#pragma once

// Riemann-Silberstein vector Psi = (E + iB)/sqrt2 on a periodic cubic grid,
// with exact spectral evolution of dPsi/dt = -i curl Psi.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "gaugelab/common.hpp"

namespace gaugelab {

/// n^3 periodic lattice of side L. Points are x = (ix, iy, iz) * L / n and are
/// stored with iz fastest. Wavevectors are 2 pi m / L with m in [-n/2, n/2).
class CubicGrid {
 public:
  CubicGrid(std::size_t n, double box);

  std::size_t n() const { return n_; }
  double box() const { return box_; }
  double spacing() const { return box_ / static_cast<double>(n_); }
  double cell_volume() const;
  std::size_t size() const { return n_ * n_ * n_; }
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (ix * n_ + iy) * n_ + iz;
  }
  Vec3 position(std::size_t idx) const;
  /// Wavevector of spectral slot `idx` (same layout as positions).
  Vec3 wavevector(std::size_t idx) const;
  /// Spectral slot of the integer wavevector m; throws unless m is in range.
  std::size_t slot(const std::array<long, 3>& m) const;

  bool operator==(const CubicGrid&) const = default;

 private:
  std::size_t n_;
  double box_;
};

using CVec3 = std::array<cplx, 3>;

struct RealVectorField {
  CubicGrid grid;
  std::vector<Vec3> values;
};

struct ScalarField {
  CubicGrid grid;
  std::vector<cplx> values;

  /// sqrt(sum |f|^2 dV).
  double norm() const;
};

/// Complex 3-vector field. The spectral representation (unnormalized forward
/// DFT per component) is computed at construction and kept alongside.
class RSField {
 public:
  RSField(CubicGrid grid, std::vector<CVec3> values);

  static RSField from_spectrum(CubicGrid grid, std::vector<CVec3> spectrum);

  const CubicGrid& grid() const { return grid_; }
  const std::vector<CVec3>& values() const { return values_; }
  const std::vector<CVec3>& spectrum() const { return spectrum_; }

 private:
  RSField(CubicGrid grid, std::vector<CVec3> values, std::vector<CVec3> spectrum);

  CubicGrid grid_;
  std::vector<CVec3> values_;
  std::vector<CVec3> spectrum_;
};

/// Psi = (E + iB)/sqrt2 pointwise.
RSField rs_from_EB(const RealVectorField& E, const RealVectorField& B);
/// E = sqrt2 Re Psi.
RealVectorField electric_field(const RSField& psi);
/// B = sqrt2 Im Psi.
RealVectorField magnetic_field(const RSField& psi);

/// Psi^(k, t) = exp(t [k x]) Psi^(k, 0), a rotation by |k| t about k.
RSField evolve(const RSField& psi, double t);

/// i k . Psi^ transformed back.
ScalarField divergence(const RSField& psi);
/// i k x Psi^ transformed back.
RSField curl(const RSField& psi);
/// sum_j Sigma_j d_j Psi, which equals -i curl Psi.
RSField sigma_derivative(const RSField& psi);

/// sum |Psi|^2 dV, i.e. (E^2 + B^2)/2 integrated.
double energy(const RSField& psi);

enum class Handedness { R, L };

/// Unit transverse circular polarization for k: (e1 + i e2)/sqrt2 for R and
/// (e1 - i e2)/sqrt2 for L, e1 x e2 = k/|k|. i k x e_R = |k| e_R.
CVec3 helicity_vector(const Vec3& k, Handedness h);

/// e_h exp(i k.x) normalized to sum |Psi|^2 dV = 1. k must be a lattice
/// wavevector 2 pi m / L with m in [-n/2, n/2) and k != 0.
RSField helicity_plane_wave(const Vec3& k, Handedness h, const CubicGrid& grid);

/// Spectral projection onto the h-helicity component at every k != 0.
RSField helicity_projection(const RSField& psi, Handedness h);

/// (Sigma_l)_{mn} = i eps_{lmn}.
std::array<Eigen::Matrix3cd, 3> sigma_matrices();

/// Rows "ix,iy,iz,re_1,im_1,re_2,im_2,re_3,im_3" with header.
void write_snapshot_csv(const RSField& psi, std::ostream& out);

/// Contravariant F^{mu nu} as a 4x4 array, first index = row.
using FieldStrength = std::array<std::array<double, 4>, 4>;
using FieldStrengthSampler = std::function<FieldStrength(const Vec4&)>;
using PotentialSampler = std::function<Vec4(const Vec4&)>;

enum class PotentialConvention {
  /// A^mu = int_0^1 dl l F^{mu nu}(l x) x_nu, the formula as usually written;
  /// it returns a potential whose field strength is -F.
  Literal,
  /// A^mu = int_0^1 dl l x_nu F^{nu mu}(l x); reproduces +F.
  RoundTrip,
};

/// Gauss-Legendre line integral with n_quad >= 16 nodes. Throws ContractError
/// if a sample of F is not antisymmetric.
Vec4 vector_potential_from_F(const FieldStrengthSampler& F, const Vec4& x, std::size_t n_quad,
                             PotentialConvention convention = PotentialConvention::RoundTrip);

/// F^{mu nu} = d^mu A^nu - d^nu A^mu by central differences of step h.
FieldStrength field_strength_from_A(const PotentialSampler& A, const Vec4& x, double h);

}  // namespace gaugelab

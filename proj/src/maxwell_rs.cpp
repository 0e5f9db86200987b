#include "gaugelab/maxwell_rs.hpp"

#include <fftw3.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

#include "gaugelab/format.hpp"

namespace gaugelab {
namespace {

const double kSqrt2 = std::sqrt(2.0);

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Unnormalized forward (sign -1) or normalized backward (sign +1) 3-D DFT of
// each vector component.
std::vector<CVec3> transform(const CubicGrid& grid, const std::vector<CVec3>& in, int sign) {
  const int n = static_cast<int>(grid.n());
  const std::size_t total = grid.size();
  FftwBuffer buf(total);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_3d(n, n, n, buf.data, buf.data, sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw planning failed");
  const double scale = sign == FFTW_BACKWARD ? 1.0 / static_cast<double>(total) : 1.0;
  std::vector<CVec3> out(total);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < total; ++i) {
      buf.data[i][0] = in[i][c].real();
      buf.data[i][1] = in[i][c].imag();
    }
    fftw_execute(plan);
    for (std::size_t i = 0; i < total; ++i)
      out[i][c] = cplx(buf.data[i][0], buf.data[i][1]) * scale;
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<cplx> inverse_scalar(const CubicGrid& grid, const std::vector<cplx>& spec) {
  std::vector<CVec3> tmp(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) tmp[i] = {spec[i], 0.0, 0.0};
  const auto back = transform(grid, tmp, FFTW_BACKWARD);
  std::vector<cplx> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) out[i] = back[i][0];
  return out;
}

CVec3 cross(const Vec3& a, const CVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

cplx dot(const Vec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

long signed_mode(std::size_t j, std::size_t n) {
  const auto jl = static_cast<long>(j);
  const auto nl = static_cast<long>(n);
  return jl < nl / 2 ? jl : jl - nl;
}

void require_same_grid(const CubicGrid& a, const CubicGrid& b, const char* what) {
  if (!(a == b)) throw ParameterError(std::string(what) + ": grid mismatch");
}

}  // namespace

CubicGrid::CubicGrid(std::size_t n, double box) : n_(n), box_(box) {
  if (n < 8 || n % 2 != 0) throw ParameterError("CubicGrid: n must be even and >= 8");
  if (!(box > 0.0) || !std::isfinite(box)) throw ParameterError("CubicGrid: box must be positive");
}

double CubicGrid::cell_volume() const {
  const double h = spacing();
  return h * h * h;
}

Vec3 CubicGrid::position(std::size_t idx) const {
  const double h = spacing();
  return {static_cast<double>(idx / (n_ * n_)) * h, static_cast<double>((idx / n_) % n_) * h,
          static_cast<double>(idx % n_) * h};
}

Vec3 CubicGrid::wavevector(std::size_t idx) const {
  const double dk = 2.0 * kPi / box_;
  return {dk * static_cast<double>(signed_mode(idx / (n_ * n_), n_)),
          dk * static_cast<double>(signed_mode((idx / n_) % n_, n_)),
          dk * static_cast<double>(signed_mode(idx % n_, n_))};
}

std::size_t CubicGrid::slot(const std::array<long, 3>& m) const {
  const auto half = static_cast<long>(n_ / 2);
  std::array<std::size_t, 3> j{};
  for (std::size_t c = 0; c < 3; ++c) {
    if (m[c] < -half || m[c] >= half)
      throw ParameterError("CubicGrid: wavevector outside the resolvable band");
    j[c] = static_cast<std::size_t>(m[c] < 0 ? m[c] + static_cast<long>(n_) : m[c]);
  }
  return index(j[0], j[1], j[2]);
}

double ScalarField::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * grid.cell_volume());
}

RSField::RSField(CubicGrid grid, std::vector<CVec3> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw ParameterError("RSField: one value per grid point");
  for (const auto& v : values_)
    for (const auto& c : v)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw ParameterError("RSField: non-finite value");
  spectrum_ = transform(grid_, values_, FFTW_FORWARD);
}

RSField::RSField(CubicGrid grid, std::vector<CVec3> values, std::vector<CVec3> spectrum)
    : grid_(grid), values_(std::move(values)), spectrum_(std::move(spectrum)) {}

RSField RSField::from_spectrum(CubicGrid grid, std::vector<CVec3> spectrum) {
  if (spectrum.size() != grid.size()) throw ParameterError("RSField: one value per grid point");
  auto values = transform(grid, spectrum, FFTW_BACKWARD);
  return RSField(grid, std::move(values), std::move(spectrum));
}

RSField rs_from_EB(const RealVectorField& E, const RealVectorField& B) {
  require_same_grid(E.grid, B.grid, "rs_from_EB");
  if (E.values.size() != E.grid.size() || B.values.size() != B.grid.size())
    throw ParameterError("rs_from_EB: one value per grid point");
  std::vector<CVec3> psi(E.values.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) psi[i][c] = cplx(E.values[i][c], B.values[i][c]) / kSqrt2;
  return RSField(E.grid, std::move(psi));
}

RealVectorField electric_field(const RSField& psi) {
  RealVectorField out{psi.grid(), std::vector<Vec3>(psi.values().size())};
  for (std::size_t i = 0; i < out.values.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) out.values[i][c] = kSqrt2 * psi.values()[i][c].real();
  return out;
}

RealVectorField magnetic_field(const RSField& psi) {
  RealVectorField out{psi.grid(), std::vector<Vec3>(psi.values().size())};
  for (std::size_t i = 0; i < out.values.size(); ++i)
    for (std::size_t c = 0; c < 3; ++c) out.values[i][c] = kSqrt2 * psi.values()[i][c].imag();
  return out;
}

RSField evolve(const RSField& psi, double t) {
  if (t == 0.0) return psi;
  const auto& grid = psi.grid();
  std::vector<CVec3> spec = psi.spectrum();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Vec3 k = grid.wavevector(i);
    const double kn = norm3(k);
    if (kn == 0.0) continue;
    const Vec3 khat{k[0] / kn, k[1] / kn, k[2] / kn};
    const double c = std::cos(kn * t);
    const double s = std::sin(kn * t);
    const CVec3& v = spec[i];
    const CVec3 kxv = cross(khat, v);
    const cplx kv = dot(khat, v);
    for (std::size_t j = 0; j < 3; ++j) spec[i][j] = v[j] * c + kxv[j] * s + khat[j] * kv * (1.0 - c);
  }
  return RSField::from_spectrum(grid, std::move(spec));
}

ScalarField divergence(const RSField& psi) {
  const auto& grid = psi.grid();
  std::vector<cplx> spec(grid.size());
  for (std::size_t i = 0; i < spec.size(); ++i)
    spec[i] = kI * dot(grid.wavevector(i), psi.spectrum()[i]);
  return {grid, inverse_scalar(grid, spec)};
}

RSField curl(const RSField& psi) {
  const auto& grid = psi.grid();
  std::vector<CVec3> spec(grid.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const CVec3 c = cross(grid.wavevector(i), psi.spectrum()[i]);
    for (std::size_t j = 0; j < 3; ++j) spec[i][j] = kI * c[j];
  }
  return RSField::from_spectrum(grid, std::move(spec));
}

RSField sigma_derivative(const RSField& psi) {
  const auto sigma = sigma_matrices();
  const auto& grid = psi.grid();
  std::vector<CVec3> spec(grid.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Vec3 k = grid.wavevector(i);
    Eigen::Vector3cd v(psi.spectrum()[i][0], psi.spectrum()[i][1], psi.spectrum()[i][2]);
    Eigen::Vector3cd r = Eigen::Vector3cd::Zero();
    for (std::size_t j = 0; j < 3; ++j) r += kI * k[j] * (sigma[j] * v);
    spec[i] = {r(0), r(1), r(2)};
  }
  return RSField::from_spectrum(grid, std::move(spec));
}

double energy(const RSField& psi) {
  double s = 0.0;
  for (const auto& v : psi.values()) s += std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
  return s * psi.grid().cell_volume();
}

CVec3 helicity_vector(const Vec3& k, Handedness h) {
  const auto b = transverse_basis(k);
  const double sgn = h == Handedness::R ? 1.0 : -1.0;
  CVec3 e{};
  for (std::size_t j = 0; j < 3; ++j) e[j] = (b.e1[j] + sgn * kI * b.e2[j]) / kSqrt2;
  return e;
}

RSField helicity_plane_wave(const Vec3& k, Handedness h, const CubicGrid& grid) {
  if (norm3(k) == 0.0) throw ParameterError("helicity_plane_wave: zero wavevector");
  std::array<long, 3> m{};
  for (std::size_t c = 0; c < 3; ++c) {
    const double mc = k[c] * grid.box() / (2.0 * kPi);
    m[c] = std::lround(mc);
    if (std::abs(mc - static_cast<double>(m[c])) > 1e-9 * std::max(1.0, std::abs(mc)))
      throw ParameterError("helicity_plane_wave: wavevector not commensurate with the box");
  }
  const std::size_t s = grid.slot(m);
  const Vec3 kl = grid.wavevector(s);
  const CVec3 e = helicity_vector(kl, h);
  const double amp = 1.0 / std::pow(grid.box(), 1.5);
  std::vector<CVec3> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const cplx phase = amp * std::polar(1.0, dot3(kl, grid.position(i)));
    for (std::size_t j = 0; j < 3; ++j) values[i][j] = e[j] * phase;
  }
  return RSField(grid, std::move(values));
}

RSField helicity_projection(const RSField& psi, Handedness h) {
  const auto& grid = psi.grid();
  std::vector<CVec3> spec(grid.size(), CVec3{});
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Vec3 k = grid.wavevector(i);
    if (norm3(k) == 0.0) continue;
    const CVec3 e = helicity_vector(k, h);
    const CVec3& v = psi.spectrum()[i];
    const cplx c = std::conj(e[0]) * v[0] + std::conj(e[1]) * v[1] + std::conj(e[2]) * v[2];
    for (std::size_t j = 0; j < 3; ++j) spec[i][j] = c * e[j];
  }
  return RSField::from_spectrum(grid, std::move(spec));
}

std::array<Eigen::Matrix3cd, 3> sigma_matrices() {
  std::array<Eigen::Matrix3cd, 3> s;
  for (int l = 0; l < 3; ++l) {
    s[static_cast<std::size_t>(l)].setZero();
    for (int m = 0; m < 3; ++m)
      for (int n = 0; n < 3; ++n) {
        // eps_{lmn} = (l - m)(m - n)(n - l) / 2 for indices in {0,1,2}
        const double eps = 0.5 * (l - m) * (m - n) * (n - l);
        s[static_cast<std::size_t>(l)](m, n) = kI * eps;
      }
  }
  return s;
}

void write_snapshot_csv(const RSField& psi, std::ostream& out) {
  const auto& grid = psi.grid();
  const std::size_t n = grid.n();
  out << "ix,iy,iz,re_1,im_1,re_2,im_2,re_3,im_3\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << i / (n * n) << ',' << (i / n) % n << ',' << i % n;
    for (const auto& c : psi.values()[i])
      out << ',' << fmt_double(c.real()) << ',' << fmt_double(c.imag());
    out << '\n';
  }
}

Vec4 vector_potential_from_F(const FieldStrengthSampler& F, const Vec4& x, std::size_t n_quad,
                             PotentialConvention convention) {
  if (n_quad < 16) throw ParameterError("vector_potential_from_F: need n_quad >= 16");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)>
      table(gsl_integration_glfixed_table_alloc(n_quad), &gsl_integration_glfixed_table_free);
  if (!table) throw std::bad_alloc();
  Vec4 x_low{};
  for (int nu = 0; nu < 4; ++nu) x_low[static_cast<std::size_t>(nu)] = metric_diag(nu) * x[static_cast<std::size_t>(nu)];

  Vec4 a{};
  for (std::size_t q = 0; q < n_quad; ++q) {
    double lam = 0.0;
    double w = 0.0;
    gsl_integration_glfixed_point(0.0, 1.0, q, &lam, &w, table.get());
    const Vec4 xs{lam * x[0], lam * x[1], lam * x[2], lam * x[3]};
    const FieldStrength f = F(xs);
    double scale = 0.0;
    for (const auto& row : f)
      for (double v : row) scale = std::max(scale, std::abs(v));
    for (std::size_t mu = 0; mu < 4; ++mu)
      for (std::size_t nu = 0; nu < 4; ++nu)
        if (std::abs(f[mu][nu] + f[nu][mu]) > 1e-12 * (1.0 + scale))
          throw ContractError("vector_potential_from_F: F is not antisymmetric at a sample point");
    for (std::size_t mu = 0; mu < 4; ++mu) {
      double s = 0.0;
      for (std::size_t nu = 0; nu < 4; ++nu)
        s += (convention == PotentialConvention::Literal ? f[mu][nu] : f[nu][mu]) * x_low[nu];
      a[mu] += w * lam * s;
    }
  }
  return a;
}

FieldStrength field_strength_from_A(const PotentialSampler& A, const Vec4& x, double h) {
  if (!(h > 0.0)) throw ParameterError("field_strength_from_A: step must be positive");
  // d_up[alpha][nu] = d^alpha A^nu
  std::array<Vec4, 4> d_up{};
  for (std::size_t alpha = 0; alpha < 4; ++alpha) {
    Vec4 xp = x;
    Vec4 xm = x;
    xp[alpha] += h;
    xm[alpha] -= h;
    const Vec4 ap = A(xp);
    const Vec4 am = A(xm);
    for (std::size_t nu = 0; nu < 4; ++nu)
      d_up[alpha][nu] = metric_diag(static_cast<int>(alpha)) * (ap[nu] - am[nu]) / (2.0 * h);
  }
  FieldStrength f{};
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) f[mu][nu] = d_up[mu][nu] - d_up[nu][mu];
  return f;
}

}  // namespace gaugelab

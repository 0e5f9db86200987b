#include "gaugelab/gauge_sector.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gaugelab {
namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_chi(const GaugeFunction& chi) {
  if (!chi.grid || chi.chi.size() != chi.grid->size())
    throw ParameterError("gauge function: one amplitude per grid node required");
}

bool has_all_lorentz(const FockRep& rep, std::size_t i) {
  for (int mu = 0; mu < 4; ++mu)
    if (!rep.contains({i, mu})) return false;
  return true;
}

std::set<std::size_t> represented_indices(const FockRep& rep) {
  std::set<std::size_t> out;
  for (const auto& m : rep.modes()) out.insert(m.index);
  return out;
}

// Grid modes carrying chi != 0; each must be represented with all four indices.
std::vector<std::size_t> charged_modes(const GaugeFunction& chi, const FockRep& rep) {
  require_chi(chi);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < chi.chi.size(); ++i) {
    if (chi.chi[i] == cplx(0.0)) continue;
    if (!has_all_lorentz(rep, i))
      throw ParameterError("gauge charge: grid mode " + std::to_string(i) +
                           " lacks some Lorentz factor in the representation");
    out.push_back(i);
  }
  return out;
}

double kx_phase(const Vec3& k, const Vec4& x) {
  return norm3(k) * x[0] - (k[0] * x[1] + k[1] * x[2] + k[2] * x[3]);
}

}  // namespace

std::array<double, 4> covariant_momentum(const Vec3& k) {
  return {norm3(k), -k[0], -k[1], -k[2]};
}

ModeProfile gauge_profile(const GaugeFunction& chi) {
  require_chi(chi);
  std::vector<FourAmplitude> values(chi.grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto kc = covariant_momentum(chi.grid->nodes[i]);
    for (std::size_t mu = 0; mu < 4; ++mu) values[i][mu] = -kI * kc[mu] * chi.chi[i];
  }
  ModeProfile p = custom_profile(chi.grid, std::move(values));
  p.kind = ProfileKind::Gauge;
  return p;
}

double null_contraction_residual(const ModeProfile& profile) {
  if (!profile.grid || profile.values.size() != profile.grid->size())
    throw ParameterError("null_contraction_residual: inconsistent profile");
  double worst = 0.0;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    const auto kc = covariant_momentum(profile.grid->nodes[i]);
    cplx s = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu) s += metric_diag(static_cast<int>(mu)) * kc[mu] * profile.values[i][mu];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::vector<ModeLabel> lorentz_modes(std::span<const std::size_t> grid_indices) {
  std::vector<ModeLabel> out;
  for (std::size_t i : grid_indices)
    for (int mu = 0; mu < 4; ++mu) out.push_back({i, mu});
  return out;
}

UnphysicalLadder unphysical_ladder(const FockRep& rep, std::size_t mode_index, const Vec3& k) {
  const double k0 = norm3(k);
  if (k0 == 0.0) throw ParameterError("unphysical_ladder: zero momentum");
  if (!has_all_lorentz(rep, mode_index))
    throw ParameterError("unphysical_ladder: mode must carry all four Lorentz indices");
  const auto kc = covariant_momentum(k);
  const auto metric = eta(rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  UnphysicalLadder u;
  u.b1 = OperatorMatrix::Zero(dim, dim);
  u.b2_dag = OperatorMatrix::Zero(dim, dim);
  for (int mu = 0; mu < 4; ++mu) {
    const OperatorMatrix a = ladder(rep, {mode_index, mu}).a;
    u.b1 += kc[static_cast<std::size_t>(mu)] * a;
    u.b2_dag += kc[static_cast<std::size_t>(mu)] * k_conjugate(a, metric);
  }
  u.b1 /= kSqrt2 * k0;
  u.b2_dag /= kSqrt2 * k0;
  u.b1_dag = u.b1.adjoint();
  u.b2 = u.b2_dag.adjoint();
  return u;
}

PhysicalCheck physical_state_check(const StateVector& psi, const FockRep& rep,
                                   const ModeGrid& grid, double tol) {
  if (static_cast<std::size_t>(psi.size()) != rep.dim())
    throw ParameterError("physical_state_check: dimension mismatch");
  PhysicalCheck out{true, 0.0};
  for (std::size_t i : represented_indices(rep)) {
    if (!has_all_lorentz(rep, i)) continue;
    if (i >= grid.size()) throw ParameterError("physical_state_check: mode outside the grid");
    const auto b = unphysical_ladder(rep, i, grid.nodes[i]);
    out.residual = std::max({out.residual, (b.b1 * psi).norm(), (b.b2 * psi).norm()});
  }
  out.physical = out.residual <= tol;
  return out;
}

OperatorMatrix build_gauge_charge(const GaugeFunction& chi, const FockRep& rep) {
  const auto modes = charged_modes(chi, rep);
  const auto metric = eta(rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix q = OperatorMatrix::Zero(dim, dim);
  for (std::size_t i : modes) {
    const auto kc = covariant_momentum(chi.grid->nodes[i]);
    const double sw = std::sqrt(chi.grid->weights[i]);
    for (int mu = 0; mu < 4; ++mu) {
      const OperatorMatrix a = ladder(rep, {i, mu}).a;
      const double k = kc[static_cast<std::size_t>(mu)];
      q -= sw * k * (std::conj(chi.chi[i]) * a + chi.chi[i] * k_conjugate(a, metric));
    }
  }
  return q;
}

OperatorMatrix build_gauge_charge_via_b(const GaugeFunction& chi, const FockRep& rep) {
  const auto modes = charged_modes(chi, rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix q = OperatorMatrix::Zero(dim, dim);
  for (std::size_t i : modes) {
    const Vec3& k = chi.grid->nodes[i];
    const auto b = unphysical_ladder(rep, i, k);
    const double scale = std::sqrt(chi.grid->weights[i]) * kSqrt2 * norm3(k);
    q -= scale * (std::conj(chi.chi[i]) * b.b1 + chi.chi[i] * b.b2_dag);
  }
  return q;
}

OperatorMatrix gauge_field_operator(const FockRep& rep, const ModeGrid& grid, int mu,
                                    const Vec4& x) {
  const auto metric = eta(rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix field = OperatorMatrix::Zero(dim, dim);
  for (const auto& m : rep.modes()) {
    if (m.mu != mu) continue;
    if (m.index >= grid.size()) throw ParameterError("gauge_field_operator: mode outside the grid");
    const cplx phase = std::polar(1.0, -kx_phase(grid.nodes[m.index], x));
    const OperatorMatrix a = ladder(rep, m).a;
    field += std::sqrt(grid.weights[m.index]) *
             (phase * a + std::conj(phase) * k_conjugate(a, metric));
  }
  return field;
}

OperatorMatrix field_divergence_operator(const FockRep& rep, const ModeGrid& grid,
                                         const Vec4& x) {
  const auto metric = eta(rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix div = OperatorMatrix::Zero(dim, dim);
  for (const auto& m : rep.modes()) {
    if (m.index >= grid.size()) throw ParameterError("field_divergence_operator: mode outside the grid");
    const Vec3& k = grid.nodes[m.index];
    const double k_mu = covariant_momentum(k)[static_cast<std::size_t>(m.mu)];
    const cplx phase = std::polar(1.0, -kx_phase(k, x));
    const OperatorMatrix a = ladder(rep, m).a;
    // d_mu e^{-ik.x} = -i k_mu e^{-ik.x}
    div += std::sqrt(grid.weights[m.index]) * k_mu *
           (-kI * phase * a + kI * std::conj(phase) * k_conjugate(a, metric));
  }
  return div;
}

OperatorMatrix field_divergence_via_b(const FockRep& rep, const ModeGrid& grid, const Vec4& x) {
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix div = OperatorMatrix::Zero(dim, dim);
  for (std::size_t i : represented_indices(rep)) {
    if (!has_all_lorentz(rep, i))
      throw ParameterError("field_divergence_via_b: every mode needs all four Lorentz indices");
    const Vec3& k = grid.nodes[i];
    const auto b = unphysical_ladder(rep, i, k);
    const cplx phase = std::polar(1.0, -kx_phase(k, x));
    div += -kI * kSqrt2 * std::sqrt(grid.weights[i]) * norm3(k) *
           (phase * b.b1 - std::conj(phase) * b.b2_dag);
  }
  return div;
}

double gauge_function_value(const GaugeFunction& chi, const Vec4& x) {
  require_chi(chi);
  double v = 0.0;
  for (std::size_t i = 0; i < chi.chi.size(); ++i) {
    const cplx term = chi.chi[i] * std::polar(1.0, -kx_phase(chi.grid->nodes[i], x));
    v += chi.grid->weights[i] * 2.0 * term.real();
  }
  return v;
}

Vec4 gauge_function_gradient(const GaugeFunction& chi, const Vec4& x) {
  require_chi(chi);
  Vec4 g{};
  for (std::size_t i = 0; i < chi.chi.size(); ++i) {
    const Vec3& k = chi.grid->nodes[i];
    const std::array<double, 4> k_up{norm3(k), k[0], k[1], k[2]};
    const cplx term = chi.chi[i] * std::polar(1.0, -kx_phase(k, x));
    for (std::size_t mu = 0; mu < 4; ++mu)
      g[mu] += chi.grid->weights[i] * 2.0 * (-kI * k_up[mu] * term).real();
  }
  return g;
}

double gauge_function_dalembertian(const GaugeFunction& chi, const Vec4& x) {
  require_chi(chi);
  double v = 0.0;
  for (std::size_t i = 0; i < chi.chi.size(); ++i) {
    const Vec3& k = chi.grid->nodes[i];
    const double k0 = norm3(k);
    const double k_sq = k0 * k0 - dot3(k, k);
    const cplx term = chi.chi[i] * std::polar(1.0, -kx_phase(k, x));
    v += chi.grid->weights[i] * 2.0 * (-k_sq * term).real();
  }
  return v;
}

double gauge_shift_residual(const GaugeFunction& chi, const FockRep& rep, const Vec4& x) {
  const OperatorMatrix qg = build_gauge_charge(chi, rep);
  const Vec4 grad = gauge_function_gradient(chi, x);
  const auto idx = safe_indices(rep);
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const OperatorMatrix a = gauge_field_operator(rep, *chi.grid, mu, x);
    OperatorMatrix r = kI * (qg * a - a * qg);
    r.diagonal().array() -= grad[static_cast<std::size_t>(mu)];
    worst = std::max(worst, restricted_norm(r, idx));
  }
  return worst;
}

}  // namespace gaugelab

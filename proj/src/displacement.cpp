#include "gaugelab/displacement.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>
#include <Eigen/SparseCore>

#include <cmath>
#include <string>

namespace gaugelab {
namespace {

using SparseOp = Eigen::SparseMatrix<cplx>;

cplx alpha_for(const DisplacementSpec& spec, const ModeLabel& m) {
  cplx a = 0.0;
  for (const auto& e : spec.entries)
    if (e.mode == m) a += e.alpha;
  return a;
}

void require_modes_in_rep(const DisplacementSpec& spec, const FockRep& rep) {
  for (const auto& e : spec.entries)
    if (!rep.contains(e.mode))
      throw ParameterError("displacement: spec mode (" + std::to_string(e.mode.index) +
                           ", mu=" + std::to_string(e.mode.mu) +
                           ") is not represented");
}

}  // namespace

DisplacementSpec DisplacementSpec::from_profile(const ModeProfile& profile, Generator generator) {
  if (!profile.grid || profile.values.size() != profile.grid->size())
    throw ParameterError("DisplacementSpec: inconsistent profile");
  DisplacementSpec spec;
  spec.generator = generator;
  for (std::size_t i = 0; i < profile.values.size(); ++i) {
    const double sw = std::sqrt(profile.grid->weights[i]);
    for (int mu = 0; mu < 4; ++mu) {
      const cplx q = profile.values[i][static_cast<std::size_t>(mu)];
      if (q != cplx(0.0)) spec.entries.push_back({{i, mu}, sw * q});
    }
  }
  return spec;
}

double DisplacementSpec::total_weight() const {
  double s = 0.0;
  for (const auto& e : entries) s += std::norm(e.alpha);
  return s;
}

double DisplacementSpec::timelike_weight() const {
  double s = 0.0;
  for (const auto& e : entries)
    if (e.mode.timelike()) s += std::norm(e.alpha);
  return s;
}

std::vector<ModeLabel> DisplacementSpec::modes() const {
  std::vector<ModeLabel> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.mode);
  return out;
}

OperatorMatrix build_Q(const DisplacementSpec& spec, const FockRep& rep) {
  require_modes_in_rep(spec, rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix q = OperatorMatrix::Zero(dim, dim);
  for (const auto& e : spec.entries) {
    const auto l = ladder(rep, e.mode);
    q += kI * (std::conj(e.alpha) * l.a - e.alpha * l.a_dag);
  }
  return q;
}

OperatorMatrix build_Qtilde(const DisplacementSpec& spec, const FockRep& rep) {
  require_modes_in_rep(spec, rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  const auto metric = eta(rep);
  OperatorMatrix q = OperatorMatrix::Zero(dim, dim);
  for (const auto& e : spec.entries) {
    const auto l = ladder(rep, e.mode);
    q += kI * (std::conj(e.alpha) * l.a - e.alpha * k_conjugate(l.a, metric));
  }
  return q;
}

OperatorMatrix build_generator(const DisplacementSpec& spec, const FockRep& rep) {
  return spec.generator == Generator::Q ? build_Q(spec, rep) : build_Qtilde(spec, rep);
}

OperatorMatrix displacement_operator(const DisplacementSpec& spec, const FockRep& rep,
                                     double sign) {
  require_modes_in_rep(spec, rep);
  OperatorMatrix result = OperatorMatrix::Identity(1, 1);
  for (const auto& m : rep.modes()) {
    const FockRep single({m}, rep.n_max());
    DisplacementSpec local;
    local.generator = spec.generator;
    const cplx a = alpha_for(spec, m);
    OperatorMatrix factor;
    if (a == cplx(0.0)) {
      factor = OperatorMatrix::Identity(static_cast<BasisIndex>(single.dim()),
                                        static_cast<BasisIndex>(single.dim()));
    } else {
      local.entries.push_back({m, a});
      const OperatorMatrix x = (sign * kI) * build_generator(local, single);
      factor = x.exp();
    }
    result = Eigen::kroneckerProduct(result, factor).eval();
  }
  return result;
}

void check_truncation_guard(const DisplacementSpec& spec, const FockRep& rep) {
  const double w = spec.total_weight();
  if (w > static_cast<double>(rep.n_max()) / 4.0)
    throw GuardError("truncation risk: sum |alpha|^2 = " + std::to_string(w) +
                     " exceeds n_max/4 = " + std::to_string(rep.n_max() / 4.0));
}

std::size_t displacement_safe_occupation(std::size_t n_max) {
  return n_max >= 8 ? n_max / 4 - 1 : 0;
}

StateVector displaced_vacuum(const DisplacementSpec& spec, const FockRep& rep) {
  check_truncation_guard(spec, rep);
  return displacement_operator(spec, rep).col(0);
}

Overlap vacuum_overlap(const DisplacementSpec& spec) {
  double log_raw = 0.0;
  for (const auto& e : spec.entries) {
    const double w = std::norm(e.alpha);
    const bool grows = spec.generator == Generator::Qtilde && flavor_of(e.mode.mu) == Flavor::Pseudo;
    log_raw += grows ? 0.5 * w : -0.5 * w;
  }
  return {cplx(std::exp(log_raw), 0.0), std::exp(-0.5 * spec.total_weight())};
}

double displaced_vacuum_norm(const DisplacementSpec& spec) {
  return spec.generator == Generator::Qtilde ? std::exp(spec.timelike_weight()) : 1.0;
}

Overlap dense_vacuum_overlap(const DisplacementSpec& spec, const FockRep& rep) {
  const StateVector v = displaced_vacuum(spec, rep);
  return {v(0), std::abs(v(0)) / v.norm()};
}

double expected_N0_in_displaced(const DisplacementSpec& spec) { return spec.timelike_weight(); }

double dense_expected_N0_in_displaced(const DisplacementSpec& spec, const FockRep& rep) {
  const StateVector v = displaced_vacuum(spec, rep);
  double num = 0.0;
  for (BasisIndex s = 0; s < v.size(); ++s)
    num += static_cast<double>(rep.timelike_occupation(s)) * std::norm(v(s));
  return num / v.squaredNorm();
}

double expected_Ntilde_in_vacuum(const DisplacementSpec& spec) { return spec.timelike_weight(); }

double dense_expected_Ntilde_in_vacuum(const DisplacementSpec& spec, const FockRep& rep) {
  check_truncation_guard(spec, rep);
  const OperatorMatrix u = displacement_operator(spec, rep, +1.0);
  const StateVector back = displacement_operator(spec, rep, -1.0).col(0);
  double total = 0.0;
  for (const auto& m : rep.modes()) {
    if (!m.timelike()) continue;
    const SparseOp a = ladder(rep, m).a.sparseView();
    // a~|0> = U a U^{-1} |0>
    const StateVector shifted = u * (a * back);
    total += shifted.squaredNorm();
  }
  return total;
}

OperatorMatrix transform_ladder(const DisplacementSpec& spec, const FockRep& rep,
                                const ModeLabel& mode) {
  check_truncation_guard(spec, rep);
  const SparseOp a = ladder(rep, mode).a.sparseView();
  const OperatorMatrix u = displacement_operator(spec, rep, +1.0);
  const OperatorMatrix ua = u * a;
  return ua * displacement_operator(spec, rep, -1.0);
}

cplx ladder_shift(const DisplacementSpec& spec, const ModeLabel& mode) {
  const cplx a = alpha_for(spec, mode);
  return spec.generator == Generator::Qtilde ? metric_diag(mode.mu) * a : -a;
}

double transform_ladder_residual(const DisplacementSpec& spec, const FockRep& rep,
                                 const ModeLabel& mode) {
  OperatorMatrix r = transform_ladder(spec, rep, mode) - ladder(rep, mode).a;
  r.diagonal().array() -= ladder_shift(spec, mode);
  return restricted_norm(r, safe_indices(rep, displacement_safe_occupation(rep.n_max())));
}

double number_identity_residual(const DisplacementSpec& spec, const FockRep& rep,
                                std::size_t safe_occupation, GuardPolicy guard) {
  if (guard == GuardPolicy::Enforce) check_truncation_guard(spec, rep);
  require_modes_in_rep(spec, rep);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  const OperatorMatrix u = displacement_operator(spec, rep, +1.0);
  const OperatorMatrix u_inv = displacement_operator(spec, rep, -1.0);

  OperatorMatrix residual = OperatorMatrix::Zero(dim, dim);
  for (const auto& m : rep.modes()) {
    if (!m.timelike()) continue;
    const SparseOp a = ladder(rep, m).a.sparseView();
    const OperatorMatrix ua = u * a;
    const OperatorMatrix at = ua * u_inv;
    const cplx q = ladder_shift(spec, m);
    // rhs = a~^dag a~ - a~^dag q - a~ q^* + |q|^2
    OperatorMatrix rhs = at.adjoint() * at;
    rhs -= q * at.adjoint();
    rhs -= std::conj(q) * at;
    rhs.diagonal().array() += std::norm(q);
    residual += number_operator(rep, m) - rhs;
  }
  return restricted_norm(residual, safe_indices(rep, safe_occupation));
}

double number_identity_residual(const DisplacementSpec& spec, const FockRep& rep) {
  return number_identity_residual(spec, rep, displacement_safe_occupation(rep.n_max()));
}

}  // namespace gaugelab

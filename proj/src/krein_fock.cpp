#include "gaugelab/krein_fock.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <string>

#include "gaugelab/format.hpp"

namespace gaugelab {

FockRep::FockRep(std::vector<ModeLabel> modes, std::size_t n_max)
    : modes_(std::move(modes)), n_max_(n_max), dim_(1) {
  if (modes_.empty()) throw ParameterError("FockRep: at least one mode required");
  if (n_max_ < 1) throw ParameterError("FockRep: need n_max >= 1");
  std::set<ModeLabel> seen;
  for (const auto& m : modes_) {
    if (m.mu < 0 || m.mu > 3) throw ParameterError("FockRep: Lorentz index out of range");
    if (!seen.insert(m).second) throw ParameterError("FockRep: duplicate mode");
  }
  strides_.assign(modes_.size(), 1);
  for (std::size_t f = modes_.size(); f-- > 0;) {
    strides_[f] = dim_;
    if (dim_ > kMaxDimension / local_dim())
      throw ParameterError("FockRep: dimension exceeds the dense oracle cap of 1e6");
    dim_ *= local_dim();
  }
}

bool FockRep::contains(const ModeLabel& m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

std::size_t FockRep::factor_of(const ModeLabel& m) const {
  const auto it = std::find(modes_.begin(), modes_.end(), m);
  if (it == modes_.end())
    throw ParameterError("FockRep: unknown mode (" + std::to_string(m.index) + ", mu=" +
                         std::to_string(m.mu) + ")");
  return static_cast<std::size_t>(it - modes_.begin());
}

std::size_t FockRep::occupation(BasisIndex state, std::size_t factor) const {
  return (static_cast<std::size_t>(state) / strides_[factor]) % local_dim();
}

std::size_t FockRep::timelike_occupation(BasisIndex state) const {
  std::size_t n = 0;
  for (std::size_t f = 0; f < modes_.size(); ++f)
    if (modes_[f].timelike()) n += occupation(state, f);
  return n;
}

Ladder ladder(const FockRep& rep, const ModeLabel& mode) {
  const std::size_t f = rep.factor_of(mode);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  const auto stride = static_cast<BasisIndex>(rep.stride(f));
  Ladder l{OperatorMatrix::Zero(dim, dim), OperatorMatrix::Zero(dim, dim)};
  for (BasisIndex s = 0; s < dim; ++s) {
    const std::size_t n = rep.occupation(s, f);
    if (n == 0) continue;
    const double amp = std::sqrt(static_cast<double>(n));
    l.a(s - stride, s) = amp;
    l.a_dag(s, s - stride) = amp;
  }
  return l;
}

OperatorMatrix number_operator(const FockRep& rep, const ModeLabel& mode) {
  const std::size_t f = rep.factor_of(mode);
  const auto dim = static_cast<BasisIndex>(rep.dim());
  OperatorMatrix n = OperatorMatrix::Zero(dim, dim);
  for (BasisIndex s = 0; s < dim; ++s) n(s, s) = static_cast<double>(rep.occupation(s, f));
  return n;
}

OperatorMatrix KreinMetric::matrix() const {
  return signs_.cast<cplx>().asDiagonal();
}

StateVector KreinMetric::apply(const StateVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim())
    throw ParameterError("KreinMetric: dimension mismatch");
  return signs_.cast<cplx>().cwiseProduct(v);
}

KreinMetric eta(const FockRep& rep) {
  Eigen::VectorXd signs(static_cast<BasisIndex>(rep.dim()));
  for (BasisIndex s = 0; s < signs.size(); ++s)
    signs(s) = rep.timelike_occupation(s) % 2 == 0 ? 1.0 : -1.0;
  return KreinMetric(std::move(signs));
}

OperatorMatrix k_conjugate(const OperatorMatrix& op, const KreinMetric& metric) {
  const auto n = static_cast<BasisIndex>(metric.dim());
  if (op.rows() != n || op.cols() != n) throw ParameterError("k_conjugate: dimension mismatch");
  const auto& s = metric.signs();
  OperatorMatrix out = op.adjoint();
  for (BasisIndex j = 0; j < n; ++j)
    for (BasisIndex i = 0; i < n; ++i) out(i, j) *= s(i) * s(j);
  return out;
}

cplx krein_inner(const StateVector& phi, const StateVector& psi, const KreinMetric& metric) {
  if (phi.size() != psi.size()) throw ParameterError("krein_inner: dimension mismatch");
  return phi.dot(metric.apply(psi));
}

StateVector vacuum(const FockRep& rep) {
  StateVector v = StateVector::Zero(static_cast<BasisIndex>(rep.dim()));
  v(0) = 1.0;
  return v;
}

StateVector basis_state(const FockRep& rep, std::span<const std::size_t> occupations) {
  if (occupations.size() != rep.num_factors())
    throw ParameterError("basis_state: one occupation per factor required");
  BasisIndex idx = 0;
  for (std::size_t f = 0; f < occupations.size(); ++f) {
    if (occupations[f] > rep.n_max()) throw ParameterError("basis_state: occupation above n_max");
    idx += static_cast<BasisIndex>(occupations[f] * rep.stride(f));
  }
  StateVector v = StateVector::Zero(static_cast<BasisIndex>(rep.dim()));
  v(idx) = 1.0;
  return v;
}

std::vector<BasisIndex> safe_indices(const FockRep& rep, std::size_t max_occupation) {
  std::vector<BasisIndex> idx;
  for (BasisIndex s = 0; s < static_cast<BasisIndex>(rep.dim()); ++s) {
    bool ok = true;
    for (std::size_t f = 0; f < rep.num_factors() && ok; ++f)
      ok = rep.occupation(s, f) <= max_occupation;
    if (ok) idx.push_back(s);
  }
  return idx;
}

std::vector<BasisIndex> safe_indices(const FockRep& rep) {
  return safe_indices(rep, rep.n_max() - 1);
}

double restricted_norm(const OperatorMatrix& m, std::span<const BasisIndex> idx) {
  double sum = 0.0;
  for (BasisIndex j : idx)
    for (BasisIndex i : idx) sum += std::norm(m(i, j));
  return std::sqrt(sum);
}

double covariant_commutator_check(const FockRep& rep, std::size_t mode_index, int mu, int nu) {
  const auto lmu = ladder(rep, {mode_index, mu});
  const auto lnu = ladder(rep, {mode_index, nu});
  const auto metric = eta(rep);
  const OperatorMatrix anu_k = k_conjugate(lnu.a, metric);
  OperatorMatrix r = lmu.a * anu_k - anu_k * lmu.a;
  if (mu == nu) r.diagonal().array() += metric_diag(mu);
  const auto idx = safe_indices(rep);
  return restricted_norm(r, idx);
}

std::vector<BasisIndex> basis_permutation(const FockRep& from, const FockRep& to) {
  if (from.dim() != to.dim() || from.n_max() != to.n_max())
    throw ParameterError("basis_permutation: incompatible representations");
  std::vector<std::size_t> target_factor(from.num_factors());
  for (std::size_t f = 0; f < from.num_factors(); ++f)
    target_factor[f] = to.factor_of(from.modes()[f]);
  std::vector<BasisIndex> perm(from.dim());
  for (BasisIndex s = 0; s < static_cast<BasisIndex>(from.dim()); ++s) {
    std::size_t t = 0;
    for (std::size_t f = 0; f < from.num_factors(); ++f)
      t += from.occupation(s, f) * to.stride(target_factor[f]);
    perm[static_cast<std::size_t>(s)] = static_cast<BasisIndex>(t);
  }
  return perm;
}

void write_operator_csv(const OperatorMatrix& op, std::ostream& out) {
  out << "row,col,re,im\n";
  for (BasisIndex i = 0; i < op.rows(); ++i)
    for (BasisIndex j = 0; j < op.cols(); ++j)
      out << i << ',' << j << ',' << fmt_double(op(i, j).real()) << ','
          << fmt_double(op(i, j).imag()) << '\n';
}

}  // namespace gaugelab

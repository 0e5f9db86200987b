#include "gaugelab/ccr_lab.hpp"

#include <algorithm>
#include <cmath>

namespace gaugelab {

LatticeLine::LatticeLine(std::size_t n_, double spacing_) : n(n_), spacing(spacing_) {
  if (n < 2) throw ParameterError("LatticeLine: need at least 2 sites");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ParameterError("LatticeLine: spacing must be positive");
}

long lattice_shift(const LatticeLine& lat, double beta) {
  const double m = beta / lat.spacing;
  const long mi = std::lround(m);
  if (!std::isfinite(m) || std::abs(m - static_cast<double>(mi)) > 1e-9 * std::max(1.0, std::abs(m)))
    throw ParameterError("weyl: beta is not a multiple of the lattice spacing");
  return mi;
}

namespace {

std::size_t source_site(const LatticeLine& lat, std::size_t j, long m) {
  const auto n = static_cast<long>(lat.n);
  return static_cast<std::size_t>(((static_cast<long>(j) - m) % n + n) % n);
}

}  // namespace

Eigen::MatrixXcd translation_operator(const LatticeLine& lat, double beta) {
  const long m = lattice_shift(lat, beta);
  const auto n = static_cast<Eigen::Index>(lat.n);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < lat.n; ++j)
    t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(source_site(lat, j, m))) = 1.0;
  return t;
}

Eigen::MatrixXcd phase_operator(const LatticeLine& lat, double alpha) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(lat.n));
  for (std::size_t j = 0; j < lat.n; ++j)
    d(static_cast<Eigen::Index>(j)) = std::polar(1.0, -alpha * static_cast<double>(j) * lat.spacing);
  return d.asDiagonal();
}

double weyl_relation_residual(const LatticeLine& lat, double alpha, double beta) {
  const long m = lattice_shift(lat, beta);
  const cplx weyl_phase = std::polar(1.0, alpha * beta);
  // Both sides map site j - m to site j; compare that single entry per row.
  double sum = 0.0;
  for (std::size_t j = 0; j < lat.n; ++j) {
    const std::size_t src = source_site(lat, j, m);
    const cplx lhs = std::polar(1.0, -alpha * static_cast<double>(src) * lat.spacing);
    const cplx rhs = weyl_phase * std::polar(1.0, -alpha * static_cast<double>(j) * lat.spacing);
    sum += std::norm(lhs - rhs);
  }
  return std::sqrt(sum);
}

OscillatorPair truncated_oscillator(std::size_t dim) {
  if (dim < 2) throw ParameterError("truncated_oscillator: need dimension >= 2");
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Eigen::MatrixXcd ad = a.adjoint();
  const double r = 1.0 / std::sqrt(2.0);
  return {kI * r * (a - ad), r * (a + ad)};
}

TraceObstruction trace_obstruction(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p) {
  if (q.rows() != q.cols() || p.rows() != p.cols() || q.rows() != p.rows())
    throw ParameterError("trace_obstruction: need square matrices of equal dimension");
  Eigen::MatrixXcd c = q * p - p * q;
  const cplx tr = c.trace();
  c.diagonal().array() -= kI;
  return {tr, std::sqrt(static_cast<double>(q.rows())), c.norm()};
}

namespace {

Eigen::MatrixXcd power_defect(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p, int n) {
  if (q.rows() != q.cols() || p.rows() != p.cols() || q.rows() != p.rows())
    throw ParameterError("commutator_power_residual: need square matrices of equal dimension");
  if (n < 1) throw ParameterError("commutator_power_residual: need n >= 1");
  const auto dim = q.rows();
  Eigen::MatrixXcd p_prev = Eigen::MatrixXcd::Identity(dim, dim);
  for (int k = 1; k < n; ++k) p_prev = p_prev * p;
  const Eigen::MatrixXcd pn = p_prev * p;
  return q * pn - pn * q - kI * static_cast<double>(n) * p_prev;
}

}  // namespace

double commutator_power_residual(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p, int n) {
  if (n >= 1 && static_cast<Eigen::Index>(n) >= q.rows())
    throw GuardError("commutator_power_residual: n exceeds the safe depth of the truncation");
  const Eigen::MatrixXcd d = power_defect(q, p, n);
  const auto safe = d.rows() - n;  // occupations 0 .. dim - 1 - n
  return d.topLeftCorner(safe, safe).norm();
}

double commutator_power_residual_full(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p,
                                      int n) {
  return power_defect(q, p, n).norm();
}

std::optional<std::size_t> count_differences(const OccupationSequence& a,
                                             const OccupationSequence& b) {
  if (a.tail != b.tail) return std::nullopt;
  const std::size_t len = std::max(a.prefix.size(), b.prefix.size());
  std::size_t count = 0;
  for (std::size_t i = 0; i < len; ++i)
    if (a.at(i) != b.at(i)) ++count;
  return count;
}

bool occupation_class_equal(const OccupationSequence& a, const OccupationSequence& b) {
  return a.tail == b.tail;
}

bool is_fock_class(const OccupationSequence& s) { return s.tail == 0; }

namespace {

OccupationSequence extended(const OccupationSequence& s, std::size_t i) {
  OccupationSequence out = s;
  if (out.prefix.size() <= i) out.prefix.resize(i + 1, s.tail);
  return out;
}

}  // namespace

OccupationSequence raise(const OccupationSequence& s, std::size_t i) {
  auto out = extended(s, i);
  ++out.prefix[i];
  return out;
}

OccupationSequence lower(const OccupationSequence& s, std::size_t i) {
  if (s.at(i) == 0) throw ParameterError("lower: occupation is already zero");
  auto out = extended(s, i);
  --out.prefix[i];
  return out;
}

}  // namespace gaugelab

#pragma once

// Truncated multi-mode Fock space with a Krein metric. Everything here is
// dense: this is the brute-force oracle the factorized paths are checked
// against, so it favors transparency over speed.

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "gaugelab/common.hpp"

namespace gaugelab {

using OperatorMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using BasisIndex = Eigen::Index;

/// A single bosonic tensor factor: grid mode `index` and Lorentz index `mu`.
struct ModeLabel {
  std::size_t index = 0;
  int mu = 0;

  bool timelike() const { return mu == 0; }
  auto operator<=>(const ModeLabel&) const = default;
};

/// Fock space truncated at occupation n_max per factor. Basis states are
/// ordered lexicographically in (factor, occupation); the first factor is the
/// most significant digit.
class FockRep {
 public:
  static constexpr std::size_t kMaxDimension = 1'000'000;

  FockRep(std::vector<ModeLabel> modes, std::size_t n_max);

  std::size_t n_max() const { return n_max_; }
  std::size_t local_dim() const { return n_max_ + 1; }
  std::size_t dim() const { return dim_; }
  std::size_t num_factors() const { return modes_.size(); }
  const std::vector<ModeLabel>& modes() const { return modes_; }

  bool contains(const ModeLabel& m) const;
  /// Position of `m` in the factor list; throws ParameterError if absent.
  std::size_t factor_of(const ModeLabel& m) const;
  std::size_t stride(std::size_t factor) const { return strides_[factor]; }
  std::size_t occupation(BasisIndex state, std::size_t factor) const;
  /// Total occupation of time-like (mu = 0) factors.
  std::size_t timelike_occupation(BasisIndex state) const;

 private:
  std::vector<ModeLabel> modes_;
  std::size_t n_max_;
  std::size_t dim_;
  std::vector<std::size_t> strides_;
};

struct Ladder {
  OperatorMatrix a;
  OperatorMatrix a_dag;
};

/// Truncated annihilation/creation matrices acting on the factor of `mode`.
Ladder ladder(const FockRep& rep, const ModeLabel& mode);

/// Number operator a^dagger a of one factor (diagonal).
OperatorMatrix number_operator(const FockRep& rep, const ModeLabel& mode);

/// eta = (-1)^{N_0}, stored as its diagonal.
class KreinMetric {
 public:
  explicit KreinMetric(Eigen::VectorXd signs) : signs_(std::move(signs)) {}

  std::size_t dim() const { return static_cast<std::size_t>(signs_.size()); }
  const Eigen::VectorXd& signs() const { return signs_; }
  OperatorMatrix matrix() const;
  StateVector apply(const StateVector& v) const;

 private:
  Eigen::VectorXd signs_;
};

KreinMetric eta(const FockRep& rep);

/// A^K = eta A^dagger eta.
OperatorMatrix k_conjugate(const OperatorMatrix& op, const KreinMetric& metric);

/// (phi, psi) = <phi | eta psi>.
cplx krein_inner(const StateVector& phi, const StateVector& psi, const KreinMetric& metric);

StateVector vacuum(const FockRep& rep);

/// Basis state with the given per-factor occupations.
StateVector basis_state(const FockRep& rep, std::span<const std::size_t> occupations);

/// Basis states whose every factor occupation is <= max_occupation.
std::vector<BasisIndex> safe_indices(const FockRep& rep, std::size_t max_occupation);

/// Frobenius norm of the submatrix on rows and columns `idx`.
double restricted_norm(const OperatorMatrix& m, std::span<const BasisIndex> idx);

/// Default safe subspace for identities linear in ladder operators:
/// occupations <= n_max - 1.
std::vector<BasisIndex> safe_indices(const FockRep& rep);

/// || [a^mu, (a^nu)^K] + g^{mu nu} I || on the safe subspace of `mode_index`.
double covariant_commutator_check(const FockRep& rep, std::size_t mode_index, int mu, int nu);

/// Permutation P with P(from-basis index) = to-basis index, for two reps over
/// the same factors listed in different orders.
std::vector<BasisIndex> basis_permutation(const FockRep& from, const FockRep& to);

/// Rows "row,col,re,im" for every matrix entry, with header.
void write_operator_csv(const OperatorMatrix& op, std::ostream& out);

}  // namespace gaugelab

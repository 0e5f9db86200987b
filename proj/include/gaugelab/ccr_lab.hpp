#pragma once

// Finite-size views of the canonical commutation relations: the Weyl form on
// a periodic lattice, the trace obstruction for matrices, the [q, p^n] ladder
// identity on a truncated oscillator, and occupation-number classes.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gaugelab/common.hpp"

namespace gaugelab {

/// n periodic sites q_j = j * spacing, j = 0..n-1.
struct LatticeLine {
  std::size_t n = 0;
  double spacing = 0.0;

  LatticeLine(std::size_t n, double spacing);
  double length() const { return static_cast<double>(n) * spacing; }
};

/// Integer site shift m with beta = m * spacing; ParameterError if beta is off
/// the lattice.
long lattice_shift(const LatticeLine& lat, double beta);

/// (T_beta psi)_j = psi_{j - m}, cyclic.
Eigen::MatrixXcd translation_operator(const LatticeLine& lat, double beta);
/// diag(exp(-i alpha q_j)).
Eigen::MatrixXcd phase_operator(const LatticeLine& lat, double alpha);

/// || T_beta e^{-i alpha q} - e^{i alpha beta} e^{-i alpha q} T_beta ||_F.
/// Rows that wrap around the boundary each contribute |1 - e^{-i alpha L}|.
double weyl_relation_residual(const LatticeLine& lat, double alpha, double beta);

/// Truncated oscillator of dimension N: p = (a + a^dagger)/sqrt2,
/// q = i(a - a^dagger)/sqrt2, so [q, p] = i(I - N P_top).
struct OscillatorPair {
  Eigen::MatrixXcd q;
  Eigen::MatrixXcd p;
};
OscillatorPair truncated_oscillator(std::size_t dim);

struct TraceObstruction {
  cplx trace_of_commutator;
  double frobenius_lower_bound;  // sqrt(N)
  double actual_residual;        // ||[q,p] - iI||_F
};
TraceObstruction trace_obstruction(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p);

/// ||[q, p^n] - i n p^{n-1}||_F on occupations <= dim - 1 - n of the truncated
/// oscillator basis. GuardError if n >= dim.
double commutator_power_residual(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p, int n);
/// Same over the whole truncated space.
double commutator_power_residual_full(const Eigen::MatrixXcd& q, const Eigen::MatrixXcd& p,
                                      int n);

/// Eventually constant occupation sequence: prefix, then `tail` forever.
struct OccupationSequence {
  std::vector<std::uint64_t> prefix;
  std::uint64_t tail = 0;

  std::uint64_t at(std::size_t i) const { return i < prefix.size() ? prefix[i] : tail; }
};

/// Number of indices where the sequences differ, or nullopt if infinite.
std::optional<std::size_t> count_differences(const OccupationSequence& a,
                                             const OccupationSequence& b);
bool occupation_class_equal(const OccupationSequence& a, const OccupationSequence& b);
/// Finite total occupation, i.e. tail 0.
bool is_fock_class(const OccupationSequence& s);

/// One quantum added or removed at index i. Lowering an empty slot throws.
OccupationSequence raise(const OccupationSequence& s, std::size_t i);
OccupationSequence lower(const OccupationSequence& s, std::size_t i);

}  // namespace gaugelab

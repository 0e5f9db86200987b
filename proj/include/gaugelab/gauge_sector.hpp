#pragma once

// Unphysical photon operators b1/b2, the physical-sector condition and the
// generator of on-shell operator gauge transformations.
//
// Discrete normalization: a grid mode i with weight w_i contributes
// A^mu(x) = sum_i sqrt(w_i) [a^mu_i e^{-ik.x} + (a^mu_i)^K e^{ik.x}] and
// chi(x) = sum_i w_i [chi_i e^{-ik.x} + c.c.], with k^0 = |k|.

#include <span>
#include <vector>

#include "gaugelab/krein_fock.hpp"
#include "gaugelab/modes.hpp"

namespace gaugelab {

/// On-shell gauge function amplitudes chi(k_i).
struct GaugeFunction {
  GridPtr grid;
  std::vector<cplx> chi;
};

/// Covariant momentum k_mu = (|k|, -k).
std::array<double, 4> covariant_momentum(const Vec3& k);

/// Profile with q_nu(k) = -i k_nu chi(k).
ModeProfile gauge_profile(const GaugeFunction& chi);

/// max_i |k^nu q_nu(k_i)|; zero on shell for gauge profiles.
double null_contraction_residual(const ModeProfile& profile);

/// The four Lorentz factors (i, 0..3) of each listed grid mode.
std::vector<ModeLabel> lorentz_modes(std::span<const std::size_t> grid_indices);

struct UnphysicalLadder {
  OperatorMatrix b1;
  OperatorMatrix b2;
  OperatorMatrix b1_dag;
  OperatorMatrix b2_dag;
};

/// b1 = k_mu a^mu / (sqrt2 k_0), b2^dagger = k_mu (a^mu)^K / (sqrt2 k_0).
UnphysicalLadder unphysical_ladder(const FockRep& rep, std::size_t mode_index, const Vec3& k);

struct PhysicalCheck {
  bool physical = false;
  double residual = 0.0;  // max over modes of ||b1 psi||, ||b2 psi||
};

/// Checks b1 psi = b2 psi = 0 for every grid mode represented with all four
/// Lorentz indices.
PhysicalCheck physical_state_check(const StateVector& psi, const FockRep& rep,
                                   const ModeGrid& grid, double tol);

/// Q~_g = -sum_i sqrt(w_i) [chi_i^* k_nu a^nu + chi_i k_nu (a^nu)^K].
OperatorMatrix build_gauge_charge(const GaugeFunction& chi, const FockRep& rep);
/// Q~_g = -sum_i sqrt(w_i) sqrt2 k_i^0 [chi_i^* b1 + chi_i b2^dagger].
OperatorMatrix build_gauge_charge_via_b(const GaugeFunction& chi, const FockRep& rep);

/// A^mu(x) restricted to the grid modes present in `rep`.
OperatorMatrix gauge_field_operator(const FockRep& rep, const ModeGrid& grid, int mu,
                                    const Vec4& x);
/// d_mu A^mu(x) from the a^mu.
OperatorMatrix field_divergence_operator(const FockRep& rep, const ModeGrid& grid,
                                         const Vec4& x);
/// -i sqrt2 sum_i sqrt(w_i) k_i^0 [b1 e^{-ik.x} - b2^dagger e^{ik.x}].
OperatorMatrix field_divergence_via_b(const FockRep& rep, const ModeGrid& grid, const Vec4& x);

double gauge_function_value(const GaugeFunction& chi, const Vec4& x);
/// d^mu chi(x) (contravariant).
Vec4 gauge_function_gradient(const GaugeFunction& chi, const Vec4& x);
/// Box chi(x) evaluated mode by mode, -k_mu k^mu per term.
double gauge_function_dalembertian(const GaugeFunction& chi, const Vec4& x);

/// max over mu of || i[Q~_g, A^mu(x)] - d^mu chi(x) I || on occupations <= n_max - 1.
double gauge_shift_residual(const GaugeFunction& chi, const FockRep& rep, const Vec4& x);

}  // namespace gaugelab

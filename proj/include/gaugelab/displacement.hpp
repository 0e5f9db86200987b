#pragma once

// Field-translation generators Q (Hermitian) and Q~ (K-symmetric), the
// (pseudo-)unitary displacements they generate, and vacuum overlaps and
// particle numbers computed two ways: closed-form products over modes, and
// dense matrices on a truncated Fock space.

#include <vector>

#include "gaugelab/krein_fock.hpp"
#include "gaugelab/modes.hpp"

namespace gaugelab {

enum class Generator { Q, Qtilde };

/// K = dagger for spatial indices, K = -dagger for the time-like index.
enum class Flavor { Unitary, Pseudo };
constexpr Flavor flavor_of(int mu) { return mu == 0 ? Flavor::Pseudo : Flavor::Unitary; }

struct DisplacementEntry {
  ModeLabel mode;
  cplx alpha;  // covariant amplitude sqrt(w_i) q_mu(k_i)
};

/// Per-mode displacement amplitudes. Modes of a Fock representation without an
/// entry are not displaced.
struct DisplacementSpec {
  std::vector<DisplacementEntry> entries;
  Generator generator = Generator::Qtilde;

  /// alpha_{mu,i} = sqrt(w_i) q_mu(k_i) for every nonzero component.
  static DisplacementSpec from_profile(const ModeProfile& profile,
                                       Generator generator = Generator::Qtilde);

  /// sum |alpha|^2 over all entries.
  double total_weight() const;
  /// sum |alpha|^2 over time-like entries.
  double timelike_weight() const;
  /// Labels of all entries, in order.
  std::vector<ModeLabel> modes() const;
};

/// Q = i sum [alpha^* a - alpha a^dagger].
OperatorMatrix build_Q(const DisplacementSpec& spec, const FockRep& rep);
/// Q~ = i sum [alpha^* a - alpha a^K], a^K = eta a^dagger eta.
OperatorMatrix build_Qtilde(const DisplacementSpec& spec, const FockRep& rep);
/// The generator selected by spec.generator.
OperatorMatrix build_generator(const DisplacementSpec& spec, const FockRep& rep);

/// exp(sign * i G) as a dense matrix. Per-factor generators commute, so the
/// exponential is assembled as the Kronecker product of dense single-factor
/// exponentials.
OperatorMatrix displacement_operator(const DisplacementSpec& spec, const FockRep& rep,
                                     double sign = 1.0);

/// Throws GuardError unless sum |alpha|^2 <= n_max / 4.
void check_truncation_guard(const DisplacementSpec& spec, const FockRep& rep);

/// Occupation bound of the subspace on which displacement identities are
/// asserted: n_max / 4 - 1 (at least 0).
std::size_t displacement_safe_occupation(std::size_t n_max);

/// U|0> (not normalized), guarded.
StateVector displaced_vacuum(const DisplacementSpec& spec, const FockRep& rep);

struct Overlap {
  cplx raw;                   // <0| U |0>
  double normalized_modulus;  // |<0|U|0>| / ||U|0>||
};

/// Closed form: per mode, <0|U|0> is exp(-|a|^2/2) except for time-like modes
/// under Q~, where it is exp(+|a|^2/2); the normalized modulus is always
/// exp(-sum |a|^2 / 2).
Overlap vacuum_overlap(const DisplacementSpec& spec);
/// Closed-form Hilbert norm ||U|0>||: exp(sum over time-like |a|^2) under Q~, 1 under Q.
double displaced_vacuum_norm(const DisplacementSpec& spec);
Overlap dense_vacuum_overlap(const DisplacementSpec& spec, const FockRep& rep);

/// sum |alpha_0|^2: normalized <0~|N_0|0~>.
double expected_N0_in_displaced(const DisplacementSpec& spec);
double dense_expected_N0_in_displaced(const DisplacementSpec& spec, const FockRep& rep);

/// sum |alpha_0|^2: <0| N~_0 |0> with a~ = a + q.
double expected_Ntilde_in_vacuum(const DisplacementSpec& spec);
/// <0| sum a~^dagger a~ |0> with a~ = U a U^{-1} built by dense conjugation.
double dense_expected_Ntilde_in_vacuum(const DisplacementSpec& spec, const FockRep& rep);

/// U a U^{-1} by dense conjugation.
OperatorMatrix transform_ladder(const DisplacementSpec& spec, const FockRep& rep,
                                const ModeLabel& mode);
/// Shift c of U a U^{-1} = a + c I: c = q^mu = g^{mu mu} alpha_mu under Q~,
/// c = -alpha_mu under Q.
cplx ladder_shift(const DisplacementSpec& spec, const ModeLabel& mode);
/// || U a U^{-1} - a - c I || on the displacement-safe subspace.
double transform_ladder_residual(const DisplacementSpec& spec, const FockRep& rep,
                                 const ModeLabel& mode);

enum class GuardPolicy { Enforce, Ignore };

/// Residual of N_0 = N~_0 - sum(a~^dagger q + a~ q^*) + sum |q|^2 with
/// a~ = U a_0 U^{-1}, over the time-like modes of `rep`, on the subspace of
/// occupations <= safe_occupation.
double number_identity_residual(const DisplacementSpec& spec, const FockRep& rep,
                                std::size_t safe_occupation,
                                GuardPolicy guard = GuardPolicy::Enforce);
/// Same, on the default displacement-safe subspace.
double number_identity_residual(const DisplacementSpec& spec, const FockRep& rep);

}  // namespace gaugelab

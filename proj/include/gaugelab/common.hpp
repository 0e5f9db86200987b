#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace gaugelab {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
/// Contravariant spacetime point (x^0, x^1, x^2, x^3), c = 1.
using Vec4 = std::array<double, 4>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Invalid or inconsistent input parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A dense computation would run into the occupation-number truncation edge.
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied object violates a contract (e.g. a non-antisymmetric F).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minkowski metric diagonal g^{mu mu} = diag(1, -1, -1, -1).
constexpr double metric_diag(int mu) { return mu == 0 ? 1.0 : -1.0; }

inline double norm3(const Vec3& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

/// Right-handed orthonormal pair (e1, e2) transverse to k, with e1 x e2 = k/|k|.
/// Off the z axis e1 = normalize(z x k); on it e1 = x, so k = +-|k| z gives
/// e2 = +-y.
struct TransverseBasis {
  Vec3 e1;
  Vec3 e2;
  Vec3 khat;
};
TransverseBasis transverse_basis(const Vec3& k);

}  // namespace gaugelab

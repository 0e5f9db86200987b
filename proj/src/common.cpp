#include "gaugelab/common.hpp"

#include <cmath>

namespace gaugelab {

TransverseBasis transverse_basis(const Vec3& k) {
  const double kn = norm3(k);
  if (kn == 0.0) throw ParameterError("transverse_basis: zero momentum");
  const Vec3 khat{k[0] / kn, k[1] / kn, k[2] / kn};
  Vec3 e1 = cross3(Vec3{0.0, 0.0, 1.0}, khat);
  const double s = norm3(e1);
  if (s < 1e-12) {
    e1 = {1.0, 0.0, 0.0};
  } else {
    e1 = {e1[0] / s, e1[1] / s, e1[2] / s};
  }
  return {e1, cross3(khat, e1), khat};
}

}  // namespace gaugelab

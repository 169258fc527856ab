#pragma once

#include "bergman/minint.hpp"

namespace bergman {

/// I1(p;X) I1(p;Y) / (I0(p) I2(p;X,Y)), the quantity bounded in the main estimate.
template <class Source>
double curvature_ratio(const Source& src, const CVec& p, const CVec& X, const CVec& Y) {
  const double i0 = I0(src, p).value;
  const double i1x = I1(src, p, X).value;
  const double i1y = I1(src, p, Y).value;
  const double i2 = I2(src, p, X, Y).value;
  return i1x * i1y / (i0 * i2);
}

}  // namespace bergman

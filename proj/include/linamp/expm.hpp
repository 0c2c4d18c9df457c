#pragma once

#include "linamp/fock.hpp"

namespace linamp {

// Dense matrix exponential by Pade approximation with scaling and squaring
// (Higham 2005 degree selection). Backward error is at unit-roundoff level
// for the approximant order chosen from the 1-norm.
Matrix expm(const Matrix& a);

} // namespace linamp

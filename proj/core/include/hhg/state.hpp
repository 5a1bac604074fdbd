#pragma once

#include "hhg/types.hpp"

namespace hhg {

/// Lattice coefficients of |Psi(t)> = sum_k c+_k |+>|phi+_k(t)> + c-_k |->|phi-_k(t)>.
struct StateCoefficients {
  double t = 0.0;  ///< cycles
  CVector plus;
  CVector minus;
};

}  // namespace hhg

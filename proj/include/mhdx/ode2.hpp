#pragma once

// Second-order oscillator machinery: basis selection by discriminant sign,
// Wronskian kernels, and variation-of-parameters solves with forcing.

#include <cmath>
#include <stdexcept>

#include "mhdx/profile.hpp"

namespace mhdx {

struct SingularWronskian : std::runtime_error {
  SingularWronskian() : std::runtime_error("ode2: Wronskian below threshold") {}
};

enum class OscBranch { positive, zero, negative };

inline constexpr double kZeroBranchBand = 1e-12;

// Basis {xi1, xi2} = envelope * {bare1, bare2}, where the bare pair solves
// xi'' - lambda xi = 0:
//   lambda > 0:  e^{ sqrt(l) t}, e^{-sqrt(l) t}   (bare Wronskian -2 sqrt(l))
//   |lambda|<=band: 1, t                          (bare Wronskian 1)
//   lambda < 0:  cos(w t), sin(w t), w=sqrt(-l)   (bare Wronskian w)
struct OscBasis {
  double lambda = 0.0;
  OscBranch branch = OscBranch::zero;
  TimeProfile envelope;
  TimeProfile bare1, bare2;
  TimeProfile xi1, xi2;
  double bare_wronskian = 1.0;
};

inline OscBasis osc_basis(double lambda, TimeProfile envelope) {
  OscBasis b;
  b.lambda = lambda;
  b.envelope = pmemo(envelope);
  if (lambda > kZeroBranchBand) {
    double r = std::sqrt(lambda);
    b.branch = OscBranch::positive;
    b.bare1 = expat(1.0, r);
    b.bare2 = expat(1.0, -r);
    b.bare_wronskian = -2.0 * r;
  } else if (lambda < -kZeroBranchBand) {
    double w = std::sqrt(-lambda);
    b.branch = OscBranch::negative;
    b.bare1 = trigexp(1.0, 0.0, w, 0.0, false);
    b.bare2 = trigexp(1.0, 0.0, w, 0.0, true);
    b.bare_wronskian = w;
  } else {
    b.branch = OscBranch::zero;
    b.bare1 = constant(1.0);
    b.bare2 = tvar();
    b.bare_wronskian = 1.0;
  }
  b.xi1 = b.envelope * b.bare1;
  b.xi2 = b.envelope * b.bare2;
  return b;
}

inline OscBasis osc_basis(double lambda) { return osc_basis(lambda, constant(1.0)); }

struct WronskianWeights {
  double W, W1, W2;
};

// W = xi1 xi2' - xi1' xi2 (= envelope^2 * bare Wronskian), W1 = -xi2, W2 = xi1
inline WronskianWeights wronskian_weights(const OscBasis& b, double t) {
  Jet j1 = b.xi1.jet(t), j2 = b.xi2.jet(t);
  WronskianWeights w;
  w.W = j1.c[0] * j2.c[1] - j1.c[1] * j2.c[0];
  w.W1 = -j2.c[0];
  w.W2 = j1.c[0];
  double scale = std::max({1.0, std::abs(j1.c[0]), std::abs(j2.c[0])});
  if (std::abs(w.W) < 1e-12 * scale) throw SingularWronskian();
  return w;
}

// A(t) = sum_j xi_j (l_j + int_0^t (W_j/W) f ds).  With the full basis this is
// the standard variation-of-parameters particular-plus-homogeneous solution;
// for the bare basis it satisfies A'' - lambda A = f with A(0)=l1 xi1(0)+l2 xi2(0).
inline TimeProfile solve_forced(const OscBasis& b, const TimeProfile& f, double l1,
                                double l2) {
  // W_j/W in closed form: W1/W = -bare2/(env * barW), W2/W = bare1/(env * barW)
  TimeProfile ff = pmemo(f);
  TimeProfile envW = b.envelope * constant(b.bare_wronskian);
  TimeProfile i1 = pint((constant(-1.0) * b.bare2 * ff) / envW);
  TimeProfile i2 = pint((b.bare1 * ff) / envW);
  return b.xi1 * (constant(l1) + i1) + b.xi2 * (constant(l2) + i2);
}

}  // namespace mhdx

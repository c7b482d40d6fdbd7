#pragma once

// Forward-mode scalar carrying value, first time derivative, spatial gradient
// and spatial Hessian.  Used by the family kernels so the pressure engine can
// assemble the momentum-balance gradient analytically.

#include <array>
#include <cmath>

#include "mhdx/jet.hpp"
#include "mhdx/profile.hpp"

namespace mhdx {

struct STJet {
  double v = 0.0;       // value
  double dt = 0.0;      // d/dt at fixed (x,y,z)
  double g[3] = {};     // gradient
  double h[6] = {};     // Hessian: xx, xy, xz, yy, yz, zz

  static constexpr int hidx(int i, int j) {
    int a = i < j ? i : j, b = i < j ? j : i;
    return a == 0 ? b : (a == 1 ? 2 + b : 5);
  }

  static STJet con(double c) {
    STJet r;
    r.v = c;
    return r;
  }
  // time coefficient with known derivative
  static STJet tc(double value, double ddt) {
    STJet r;
    r.v = value;
    r.dt = ddt;
    return r;
  }
  // spatial coordinate seed, axis in {0,1,2}
  static STJet coord(double value, int axis) {
    STJet r;
    r.v = value;
    r.g[axis] = 1.0;
    return r;
  }
  double lap() const { return h[0] + h[3] + h[5]; }
};

inline STJet operator+(const STJet& a, const STJet& b) {
  STJet r;
  r.v = a.v + b.v;
  r.dt = a.dt + b.dt;
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < 6; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}
inline STJet operator-(const STJet& a, const STJet& b) {
  STJet r;
  r.v = a.v - b.v;
  r.dt = a.dt - b.dt;
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] - b.g[i];
  for (int i = 0; i < 6; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}
inline STJet operator-(const STJet& a) {
  STJet r;
  r.v = -a.v;
  r.dt = -a.dt;
  for (int i = 0; i < 3; ++i) r.g[i] = -a.g[i];
  for (int i = 0; i < 6; ++i) r.h[i] = -a.h[i];
  return r;
}
inline STJet operator*(const STJet& a, const STJet& b) {
  STJet r;
  r.v = a.v * b.v;
  r.dt = a.dt * b.v + a.v * b.dt;
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      int k = STJet::hidx(i, j);
      r.h[k] = a.h[k] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[k];
    }
  return r;
}
inline STJet operator*(double s, const STJet& a) {
  STJet r;
  r.v = s * a.v;
  r.dt = s * a.dt;
  for (int i = 0; i < 3; ++i) r.g[i] = s * a.g[i];
  for (int i = 0; i < 6; ++i) r.h[i] = s * a.h[i];
  return r;
}
inline STJet operator*(const STJet& a, double s) { return s * a; }
inline STJet operator+(const STJet& a, double s) {
  STJet r = a;
  r.v += s;
  return r;
}
inline STJet operator+(double s, const STJet& a) { return a + s; }
inline STJet operator-(const STJet& a, double s) { return a + (-s); }
inline STJet operator-(double s, const STJet& a) { return (-a) + s; }

// chain rule through scalar function with derivatives f', f''
inline STJet st_chain(const STJet& u, double f, double fp, double fpp) {
  STJet r;
  r.v = f;
  r.dt = fp * u.dt;
  for (int i = 0; i < 3; ++i) r.g[i] = fp * u.g[i];
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      int k = STJet::hidx(i, j);
      r.h[k] = fp * u.h[k] + fpp * u.g[i] * u.g[j];
    }
  return r;
}

inline STJet st_exp(const STJet& u) {
  double e = std::exp(u.v);
  return st_chain(u, e, e, e);
}
inline STJet st_sin(const STJet& u) {
  double s = std::sin(u.v), c = std::cos(u.v);
  return st_chain(u, s, c, -s);
}
inline STJet st_cos(const STJet& u) {
  double s = std::sin(u.v), c = std::cos(u.v);
  return st_chain(u, c, -s, -c);
}
inline STJet st_sinh(const STJet& u) {
  double s = std::sinh(u.v), c = std::cosh(u.v);
  return st_chain(u, s, c, s);
}
inline STJet st_cosh(const STJet& u) {
  double s = std::sinh(u.v), c = std::cosh(u.v);
  return st_chain(u, c, s, c);
}
inline STJet st_inv(const STJet& u) {
  double iv = 1.0 / u.v;
  return st_chain(u, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline STJet operator/(const STJet& a, const STJet& b) { return a * st_inv(b); }
inline STJet operator/(const STJet& a, double s) { return a * (1.0 / s); }
inline STJet operator/(double s, const STJet& b) { return s * st_inv(b); }

// profile value as a time coefficient (uses exact profile derivative)
inline STJet st_coef(const TimeProfile& p, double t) {
  Jet j = p.jet(t);
  return STJet::tc(j.c[0], j.c[1]);
}

}  // namespace mhdx

#pragma once

// Truncated Taylor arithmetic in one variable (time). Coefficients are stored
// normalized: c[k] = f^(k)(t0)/k!, so products are plain convolutions.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace mhdx {

inline constexpr int kJetOrder = 6;

struct Jet {
  std::array<double, kJetOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double t) {
    Jet j;
    j.c[0] = t;
    j.c[1] = 1.0;
    return j;
  }
  double value() const { return c[0]; }
  // k-th derivative (not the raw Taylor coefficient)
  double deriv(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c[static_cast<size_t>(k)] * fact;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}
inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}
inline Jet operator-(const Jet& a) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = -a.c[k];
  return r;
}
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    r.c[k] = s;
  }
  return r;
}
inline Jet operator*(double s, const Jet& a) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) r.c[k] = s * a.c[k];
  return r;
}
inline Jet operator*(const Jet& a, double s) { return s * a; }
inline Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.c[0] += s;
  return r;
}
inline Jet operator+(double s, const Jet& a) { return a + s; }
inline Jet operator-(const Jet& a, double s) { return a + (-s); }
inline Jet operator-(double s, const Jet& a) { return (-a) + s; }

inline Jet jet_div(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kJetOrder; ++k) {
    double s = a.c[k];
    for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
    r.c[k] = s / b.c[0];
  }
  return r;
}
inline Jet operator/(const Jet& a, const Jet& b) { return jet_div(a, b); }
inline Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
inline Jet operator/(double s, const Jet& b) { return jet_div(Jet::constant(s), b); }

inline Jet jet_exp(const Jet& u) {
  Jet e;
  e.c[0] = std::exp(u.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * u.c[j] * e.c[k - j];
    e.c[k] = s / k;
  }
  return e;
}

inline void jet_sincos(const Jet& u, Jet& sn, Jet& cs) {
  sn.c[0] = std::sin(u.c[0]);
  cs.c[0] = std::cos(u.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * u.c[j] * cs.c[k - j];
      cc += j * u.c[j] * sn.c[k - j];
    }
    sn.c[k] = ss / k;
    cs.c[k] = -cc / k;
  }
}
inline Jet jet_sin(const Jet& u) {
  Jet s, c;
  jet_sincos(u, s, c);
  return s;
}
inline Jet jet_cos(const Jet& u) {
  Jet s, c;
  jet_sincos(u, s, c);
  return c;
}

inline Jet jet_sqrt(const Jet& u) {
  Jet r;
  r.c[0] = std::sqrt(u.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = u.c[k];
    for (int j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
    r.c[k] = s / (2.0 * r.c[0]);
  }
  return r;
}

inline Jet jet_log(const Jet& u) {
  Jet l;
  l.c[0] = std::log(u.c[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = k * u.c[k];
    for (int j = 1; j < k; ++j) s -= j * l.c[j] * u.c[k - j];
    l.c[k] = s / (k * u.c[0]);
  }
  return l;
}

// u^a for real exponent a, u0 > 0
inline Jet jet_pow(const Jet& u, double a) {
  Jet p;
  p.c[0] = std::pow(u.c[0], a);
  for (int k = 1; k <= kJetOrder; ++k) {
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += (a * (k - j) - j) * u.c[k - j] * p.c[j];
    p.c[k] = s / (k * u.c[0]);
  }
  return p;
}

// Shift: given jet of f, return jet of f' (loses the top order)
inline Jet jet_derivative(const Jet& u) {
  Jet d;
  for (int k = 0; k < kJetOrder; ++k) d.c[k] = (k + 1) * u.c[k + 1];
  d.c[kJetOrder] = 0.0;
  return d;
}

}  // namespace mhdx

#pragma once

// Adaptive Gauss-Kronrod (7-15) quadrature and a cumulative-integral table for
// profiles of the form F(t) = integral_0^t f(s) ds.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace mhdx {

struct MaxRefinementExceeded : std::runtime_error {
  MaxRefinementExceeded() : std::runtime_error("quadrature: refinement budget exhausted") {}
};

namespace detail {
// Kronrod-15 nodes on [-1,1] (positive half) and weights; Gauss-7 weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }
  fv[7] = f(c);
  double resk = 0.0, resg = 0.0;
  for (int j = 0; j < 7; ++j) resk += kWgk[j] * (fv[j] + fv[14 - j]);
  resk += kWgk[7] * fv[7];
  for (int j = 0; j < 3; ++j) resg += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
  resg += kWg[3] * fv[7];
  result = resk * h;
  err = std::abs((resk - resg) * h);
}
}  // namespace detail

// Deterministic adaptive quadrature; absolute tolerance.
template <class F>
inline double integrate_adaptive(const F& f, double a, double b, double tol,
                                 int max_depth = 40) {
  if (a == b) return 0.0;
  struct Frame {
    double a, b, tol;
    int depth;
  };
  double total = 0.0;
  std::vector<Frame> stack{{a, b, std::max(tol, 1e-15), 0}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    double r, e;
    detail::gk15(f, fr.a, fr.b, r, e);
    // tolerance is relative to the panel magnitude once that exceeds one,
    // otherwise absolute; a purely absolute test stalls below machine
    // precision when the integrand is large
    double acc = fr.tol * std::max(1.0, std::abs(r));
    if (e <= acc || fr.depth >= max_depth) {
      if (e > acc) throw MaxRefinementExceeded();
      total += r;
    } else {
      double m = 0.5 * (fr.a + fr.b), ht = 0.5 * fr.tol;
      stack.push_back({m, fr.b, ht, fr.depth + 1});
      stack.push_back({fr.a, m, ht, fr.depth + 1});
    }
  }
  return total;
}

// Prefix-sum table for integral_0^t f.  Built eagerly over [lo, hi] by adaptive
// bisection; evaluation finishes the last partial panel with one GK15 pass.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  CumulativeTable(std::function<double(double)> f, double lo, double hi, double tol)
      : f_(std::move(f)), lo_(lo), hi_(hi), tol_(tol) {
    std::vector<double> bks;
    subdivide(lo_, hi_, tol_ * 0.5, 0, bks);
    breaks_.push_back(lo_);
    for (double b : bks) breaks_.push_back(b);
    prefix_.assign(breaks_.size(), 0.0);
    for (size_t i = 1; i < breaks_.size(); ++i) {
      double r, e;
      detail::gk15(f_, breaks_[i - 1], breaks_[i], r, e);
      prefix_[i] = prefix_[i - 1] + r;
    }
    // shift so that value at t=0 is exactly 0
    shift_ = raw(0.0);
  }

  double eval(double t) const {
    if (t < lo_ || t > hi_) {
      // outside the prebuilt window: direct adaptive from the nearest edge
      double edge = (t < lo_) ? lo_ : hi_;
      double base = raw(edge) - shift_;
      return base + integrate_adaptive(f_, edge, t, tol_);
    }
    return raw(t) - shift_;
  }

 private:
  double raw(double t) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    size_t i = (it == breaks_.begin()) ? 0 : static_cast<size_t>(it - breaks_.begin() - 1);
    if (i >= breaks_.size() - 1) i = breaks_.size() - 2;
    double r, e;
    detail::gk15(f_, breaks_[i], t, r, e);
    return prefix_[i] + r;
  }

  void subdivide(double a, double b, double tol, int depth, std::vector<double>& out) {
    double r, e;
    detail::gk15(f_, a, b, r, e);
    if ((e <= tol * std::max(1.0, std::abs(r)) && b - a <= 1.0) || depth >= 32) {
      out.push_back(b);
      return;
    }
    double m = 0.5 * (a + b);
    subdivide(a, m, tol * 0.5, depth + 1, out);
    subdivide(m, b, tol * 0.5, depth + 1, out);
  }

  std::function<double(double)> f_;
  double lo_ = 0.0, hi_ = 0.0, tol_ = 1e-10, shift_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> prefix_;
};

}  // namespace mhdx

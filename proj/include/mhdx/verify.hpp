#pragma once

// Independent finite-difference verification of solution fields.  Residuals of
// the four governing equations are formed from samples only (no analytic
// derivatives), using 4th-order central stencils; the induction curl is taken
// of the sampled product field E = v x H.  A convergence study over a list of
// step sizes fits the observed order.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "mhdx/field.hpp"
#include "mhdx/profile.hpp"

namespace mhdx {

struct InsufficientRange : std::runtime_error {
  InsufficientRange()
      : std::runtime_error(
            "convergence: too few residuals above the roundoff floor to fit an order") {}
};

struct PointResidual {
  double div_v = 0.0;      // max-norm, scale-normalized
  double momentum = 0.0;
  double div_H = 0.0;
  double induction = 0.0;
  double scale = 1.0;      // max(1, |v|, |H|) over the stencil
  bool clipped = false;    // a stencil sample hit a singular/guarded region
};

struct ResidualReport {
  std::vector<PointResidual> points;
  double max_div_v = 0.0, max_momentum = 0.0, max_div_H = 0.0, max_induction = 0.0;
  int clipped_count = 0;
};

namespace verify_detail {

// f'(0) and f''(0) from samples at {-2h,-h,0,h,2h}
inline double d1(const double f[5], double h) {
  return (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
}
inline double d2(const double f[5], double h) {
  return (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
}

inline PointResidual residual_at(const SolutionField& f, const PhysicalConstants& pc,
                                 double t, const Vec3& x, double h, double ht) {
  PointResidual out;
  // samples: [axis 0..2][offset], offset index 0..4 maps to -2h..2h, and a
  // time row; the center sample is shared
  FieldSample sp[3][5], st[5];
  try {
    FieldSample c = f.sample(t, x.x, x.y, x.z);
    for (int a = 0; a < 3; ++a) {
      for (int k = 0; k < 5; ++k) {
        if (k == 2) {
          sp[a][k] = c;
          continue;
        }
        Vec3 q = x;
        q[a] += (k - 2) * h;
        sp[a][k] = f.sample(t, q.x, q.y, q.z);
      }
    }
    for (int k = 0; k < 5; ++k)
      st[k] = (k == 2) ? c : f.sample(t + (k - 2) * ht, x.x, x.y, x.z);
  } catch (const SingularPoint&) {
    out.clipped = true;
    return out;
  } catch (const PoleProximity&) {
    out.clipped = true;
    return out;
  } catch (const DomainViolation&) {
    out.clipped = true;
    return out;
  }

  double scale = 1.0;
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < 5; ++k)
      scale = std::max({scale, norm(sp[a][k].v), norm(sp[a][k].H)});
  for (int k = 0; k < 5; ++k)
    scale = std::max({scale, norm(st[k].v), norm(st[k].H)});
  out.scale = scale;

  double dv[3][3], d2v[3][3], dH[3][3], d2H[3][3], dp[3];
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < 3; ++i) {
      double fv[5], fh[5];
      for (int k = 0; k < 5; ++k) {
        fv[k] = sp[a][k].v[i];
        fh[k] = sp[a][k].H[i];
      }
      dv[a][i] = d1(fv, h);
      d2v[a][i] = d2(fv, h);
      dH[a][i] = d1(fh, h);
      d2H[a][i] = d2(fh, h);
    }
    double fp[5];
    for (int k = 0; k < 5; ++k) fp[k] = sp[a][k].p;
    dp[a] = d1(fp, h);
  }
  Vec3 vt, Ht;
  for (int i = 0; i < 3; ++i) {
    double fv[5], fh[5];
    for (int k = 0; k < 5; ++k) {
      fv[k] = st[k].v[i];
      fh[k] = st[k].H[i];
    }
    double tf[5];
    for (int k = 0; k < 5; ++k) tf[k] = fv[k];
    vt[i] = d1(tf, ht);
    for (int k = 0; k < 5; ++k) tf[k] = fh[k];
    Ht[i] = d1(tf, ht);
  }

  const Vec3 v0 = sp[0][2].v, H0 = sp[0][2].H;
  Vec3 rotH{dH[1][2] - dH[2][1], dH[2][0] - dH[0][2], dH[0][1] - dH[1][0]};
  Vec3 lorentz = cross(H0, rotH);

  // curl of the sampled product field E = v x H
  double dE[3][3];
  for (int a = 0; a < 3; ++a) {
    double fe[3][5];
    for (int k = 0; k < 5; ++k) {
      Vec3 E = cross(sp[a][k].v, sp[a][k].H);
      for (int i = 0; i < 3; ++i) fe[i][k] = E[i];
    }
    for (int i = 0; i < 3; ++i) dE[a][i] = d1(fe[i], h);
  }
  Vec3 rotE{dE[1][2] - dE[2][1], dE[2][0] - dE[0][2], dE[0][1] - dE[1][0]};

  out.div_v = std::abs(dv[0][0] + dv[1][1] + dv[2][2]) / scale;
  out.div_H = std::abs(dH[0][0] + dH[1][1] + dH[2][2]) / scale;
  for (int i = 0; i < 3; ++i) {
    double conv = v0[0] * dv[0][i] + v0[1] * dv[1][i] + v0[2] * dv[2][i];
    double lap_v = d2v[0][i] + d2v[1][i] + d2v[2][i];
    double mom = vt[i] + conv - pc.mu0 * lorentz[i] + dp[i] / pc.rho - pc.nu * lap_v;
    out.momentum = std::max(out.momentum, std::abs(mom) / scale);
    double lap_H = d2H[0][i] + d2H[1][i] + d2H[2][i];
    double ind = Ht[i] - rotE[i] - pc.eta * lap_H;
    out.induction = std::max(out.induction, std::abs(ind) / scale);
  }
  return out;
}

}  // namespace verify_detail

struct ProbePoint {
  double t;
  Vec3 x;
};

inline ResidualReport residuals(const SolutionField& f, const PhysicalConstants& pc,
                                const std::vector<ProbePoint>& pts, double h,
                                double ht, bool parallel = true) {
  ResidualReport rep;
  rep.points.resize(pts.size());
  const int n = static_cast<int>(pts.size());
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      rep.points[i] = verify_detail::residual_at(f, pc, pts[i].t, pts[i].x, h, ht);
  } else {
    for (int i = 0; i < n; ++i)
      rep.points[i] = verify_detail::residual_at(f, pc, pts[i].t, pts[i].x, h, ht);
  }
  for (const auto& p : rep.points) {
    if (p.clipped) {
      ++rep.clipped_count;
      continue;
    }
    rep.max_div_v = std::max(rep.max_div_v, p.div_v);
    rep.max_momentum = std::max(rep.max_momentum, p.momentum);
    rep.max_div_H = std::max(rep.max_div_H, p.div_H);
    rep.max_induction = std::max(rep.max_induction, p.induction);
  }
  return rep;
}

struct ConvergenceLine {
  std::vector<double> h;
  std::vector<double> resid;
  double order = 0.0;
  bool exact = false;  // every residual sat on the roundoff floor
};

struct ConvergenceStudy {
  ConvergenceLine div_v, momentum, div_H, induction;
};

namespace verify_detail {

inline ConvergenceLine fit_line(const std::vector<double>& hs,
                                const std::vector<double>& rs) {
  ConvergenceLine line;
  line.h = hs;
  line.resid = rs;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < hs.size(); ++i) {
    double floor = 10.0 * 2.220446049250313e-16 / (hs[i] * hs[i]);
    if (rs[i] > floor) {
      lx.push_back(std::log(hs[i]));
      ly.push_back(std::log(rs[i]));
    }
  }
  if (lx.empty()) {
    line.exact = true;
    return line;
  }
  if (lx.size() < 2) throw InsufficientRange();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  double nn = static_cast<double>(lx.size());
  line.order = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  return line;
}

}  // namespace verify_detail

inline ConvergenceStudy convergence_study(const SolutionField& f,
                                          const PhysicalConstants& pc,
                                          const std::vector<ProbePoint>& pts,
                                          const std::vector<double>& h_list,
                                          bool parallel = true) {
  std::vector<double> rd, rm, rh, ri;
  for (double h : h_list) {
    ResidualReport rep = residuals(f, pc, pts, h, h, parallel);
    rd.push_back(rep.max_div_v);
    rm.push_back(rep.max_momentum);
    rh.push_back(rep.max_div_H);
    ri.push_back(rep.max_induction);
  }
  ConvergenceStudy s;
  s.div_v = verify_detail::fit_line(h_list, rd);
  s.momentum = verify_detail::fit_line(h_list, rm);
  s.div_H = verify_detail::fit_line(h_list, rh);
  s.induction = verify_detail::fit_line(h_list, ri);
  return s;
}

// ---- closure transforms --------------------------------------------------
// Each wrapper produces a new SolutionField whose samples are related to the
// base field by one of the invariance maps of the system; applying the
// residual oracle to the wrapped field checks closure.

class MappedField final : public SolutionField {
 public:
  std::shared_ptr<const SolutionField> base;
  std::string tag = "mapped";
  // (t, x) in the new frame -> (t', x') to sample the base at
  std::function<void(double, const Vec3&, double&, Vec3&)> pullback;
  // modify the sampled base fields into the new-frame fields
  std::function<void(double, const Vec3&, FieldSample&)> pushforward;
  double clearance_scale = 1.0;

  FieldSample sample(double t, double x, double y, double z) const override {
    double tb;
    Vec3 xb;
    pullback(t, {x, y, z}, tb, xb);
    FieldSample s = base->sample(tb, xb.x, xb.y, xb.z);
    pushforward(t, {x, y, z}, s);
    return s;
  }
  bool admissible(double t, double x, double y, double z,
                  double clearance) const override {
    double tb;
    Vec3 xb;
    pullback(t, {x, y, z}, tb, xb);
    return base->admissible(tb, xb.x, xb.y, xb.z, clearance * clearance_scale);
  }
  std::string id() const override { return base->id() + "+" + tag; }
  std::string singular_set() const override { return base->singular_set(); }
};

inline std::shared_ptr<SolutionField> shift_time(
    std::shared_ptr<const SolutionField> f, double a) {
  auto m = std::make_shared<MappedField>();
  m->base = std::move(f);
  m->tag = "tshift";
  m->pullback = [a](double t, const Vec3& x, double& tb, Vec3& xb) {
    tb = t + a;
    xb = x;
  };
  m->pushforward = [](double, const Vec3&, FieldSample&) {};
  return m;
}

// parabolic rescaling: v,H pick up one power of lambda, p two, arguments
// dilate as (lambda^2 t, lambda x)
inline std::shared_ptr<SolutionField> rescale(
    std::shared_ptr<const SolutionField> f, double lambda) {
  auto m = std::make_shared<MappedField>();
  m->base = std::move(f);
  m->tag = "rescale";
  m->clearance_scale = std::abs(lambda);
  m->pullback = [lambda](double t, const Vec3& x, double& tb, Vec3& xb) {
    tb = lambda * lambda * t;
    xb = lambda * x;
  };
  m->pushforward = [lambda](double, const Vec3&, FieldSample& s) {
    s.v = lambda * s.v;
    s.H = lambda * s.H;
    s.p = lambda * lambda * s.p;
  };
  return m;
}

inline std::shared_ptr<SolutionField> rotate(
    std::shared_ptr<const SolutionField> f, const std::array<Vec3, 3>& R) {
  // R given as rows; fields rotate forward, arguments pull back by R^T
  auto m = std::make_shared<MappedField>();
  m->base = std::move(f);
  m->tag = "rotate";
  auto apply = [R](const Vec3& u) {
    return Vec3{dot(R[0], u), dot(R[1], u), dot(R[2], u)};
  };
  auto applyT = [R](const Vec3& u) {
    return Vec3{R[0].x * u.x + R[1].x * u.y + R[2].x * u.z,
                R[0].y * u.x + R[1].y * u.y + R[2].y * u.z,
                R[0].z * u.x + R[1].z * u.y + R[2].z * u.z};
  };
  m->pullback = [applyT](double t, const Vec3& x, double& tb, Vec3& xb) {
    tb = t;
    xb = applyT(x);
  };
  m->pushforward = [apply](double, const Vec3&, FieldSample& s) {
    s.v = apply(s.v);
    s.H = apply(s.H);
  };
  return m;
}

// moving-frame boost by F(t): velocity gains F', pressure loses rho x.F''
inline std::shared_ptr<SolutionField> boost(
    std::shared_ptr<const SolutionField> f, TimeProfile Fx, TimeProfile Fy,
    TimeProfile Fz, double rho) {
  auto m = std::make_shared<MappedField>();
  m->base = std::move(f);
  m->tag = "boost";
  m->pullback = [Fx, Fy, Fz](double t, const Vec3& x, double& tb, Vec3& xb) {
    tb = t;
    xb = x - Vec3{Fx.eval(t), Fy.eval(t), Fz.eval(t)};
  };
  m->pushforward = [Fx, Fy, Fz, rho](double t, const Vec3& x, FieldSample& s) {
    s.v = s.v + Vec3{Fx.eval(t, 1), Fy.eval(t, 1), Fz.eval(t, 1)};
    Vec3 xb = x - Vec3{Fx.eval(t), Fy.eval(t), Fz.eval(t)};
    s.p -= rho * dot(xb, {Fx.eval(t, 2), Fy.eval(t, 2), Fz.eval(t, 2)});
  };
  return m;
}

inline std::shared_ptr<SolutionField> regauge(
    std::shared_ptr<const SolutionField> f, TimeProfile theta) {
  auto m = std::make_shared<MappedField>();
  m->base = std::move(f);
  m->tag = "regauge";
  m->pullback = [](double t, const Vec3& x, double& tb, Vec3& xb) {
    tb = t;
    xb = x;
  };
  m->pushforward = [theta](double t, const Vec3&, FieldSample& s) {
    s.p += theta.eval(t);
  };
  return m;
}

}  // namespace mhdx

#pragma once

// Solution-field interfaces.  A family supplies a FieldKernel that evaluates
// (v, H) with analytic space/time derivatives; pressure is recovered from the
// momentum balance by integrating its gradient along a segment from a
// family-chosen anchor point (exact for polynomial fields, adaptive GK
// quadrature otherwise).  Printed-formula pressure variants can be plugged in
// behind the as-printed switch.

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "mhdx/profile.hpp"
#include "mhdx/quadrature.hpp"
#include "mhdx/stjet.hpp"

namespace mhdx {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

struct FieldSample {
  Vec3 v, H;
  double p = 0.0;
};

struct SingularPoint : std::runtime_error {
  SingularPoint() : std::runtime_error("field: evaluation inside singular region") {}
};
struct DegenerateConstants : std::runtime_error {
  explicit DegenerateConstants(const std::string& m)
      : std::runtime_error("family: " + m) {}
};

class SolutionField {
 public:
  virtual ~SolutionField() = default;
  virtual FieldSample sample(double t, double x, double y, double z) const = 0;
  // true if the point keeps `clearance` distance from any singular set
  virtual bool admissible(double /*t*/, double /*x*/, double /*y*/, double /*z*/,
                          double /*clearance*/) const {
    return true;
  }
  virtual std::string id() const { return "derived"; }
  virtual std::string singular_set() const { return "none"; }
};

class FieldKernel {
 public:
  virtual ~FieldKernel() = default;
  virtual void eval(double t, const Vec3& pos, STJet v[3], STJet H[3]) const = 0;
  // pressure-integration anchor; segments anchor->point must stay admissible
  virtual Vec3 anchor(double t, const Vec3& at) const {
    (void)t;
    (void)at;
    return {0.0, 0.0, 0.0};
  }
  virtual bool admissible(double, const Vec3&, double) const { return true; }
  virtual std::string singular_set() const { return "none"; }
};

class KernelField : public SolutionField {
 public:
  KernelField(std::string id, std::shared_ptr<const FieldKernel> k,
              PhysicalConstants pc)
      : id_(std::move(id)), k_(std::move(k)), pc_(pc) {
    pc_.validate();
  }

  void set_printed_pressure(std::function<double(double, const Vec3&)> p) {
    printed_pressure_ = std::move(p);
  }

  void eval_jets(double t, const Vec3& pos, STJet v[3], STJet H[3]) const {
    k_->eval(t, pos, v, H);
  }

  // grad p = rho (nu lap v - v_t - (v.grad)v + mu0 H x rot H)
  Vec3 pressure_gradient(double t, const Vec3& pos) const {
    STJet v[3], H[3];
    k_->eval(t, pos, v, H);
    Vec3 Hv{H[0].v, H[1].v, H[2].v};
    Vec3 rotH{H[2].g[1] - H[1].g[2], H[0].g[2] - H[2].g[0], H[1].g[0] - H[0].g[1]};
    Vec3 lorentz = cross(Hv, rotH);
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
      double conv = v[0].v * v[i].g[0] + v[1].v * v[i].g[1] + v[2].v * v[i].g[2];
      g[i] = pc_.rho * (pc_.nu * v[i].lap() - v[i].dt - conv + pc_.mu0 * lorentz[i]);
    }
    return g;
  }

  double pressure(double t, const Vec3& pos) const {
    if (printed_pressure_) return printed_pressure_(t, pos);
    Vec3 a = k_->anchor(t, pos);
    Vec3 d = pos - a;
    auto integrand = [&](double s) {
      return dot(pressure_gradient(t, a + s * d), d);
    };
    double tol = 1e-12;
    for (int attempt = 0; attempt < 4; ++attempt) {
      try {
        return integrate_adaptive(integrand, 0.0, 1.0, tol, 30);
      } catch (const MaxRefinementExceeded&) {
        tol *= 1e3;
      }
    }
    return integrate_adaptive(integrand, 0.0, 1.0, tol, 30);
  }

  FieldSample sample(double t, double x, double y, double z) const override {
    Vec3 pos{x, y, z};
    if (!k_->admissible(t, pos, 0.0)) throw SingularPoint();
    STJet v[3], H[3];
    k_->eval(t, pos, v, H);
    FieldSample s;
    s.v = {v[0].v, v[1].v, v[2].v};
    s.H = {H[0].v, H[1].v, H[2].v};
    s.p = pressure(t, pos);
    return s;
  }

  bool admissible(double t, double x, double y, double z,
                  double clearance) const override {
    return k_->admissible(t, {x, y, z}, clearance);
  }

  std::string id() const override { return id_; }
  std::string singular_set() const override { return k_->singular_set(); }
  const PhysicalConstants& constants() const { return pc_; }
  const FieldKernel& kernel() const { return *k_; }

 private:
  std::string id_;
  std::shared_ptr<const FieldKernel> k_;
  PhysicalConstants pc_;
  std::function<double(double, const Vec3&)> printed_pressure_;
};

}  // namespace mhdx

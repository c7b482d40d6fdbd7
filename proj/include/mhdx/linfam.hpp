#pragma once

// Linear-in-space families: v = A(t)x, H = B(t)x with the four symmetry-class
// combinations (sym/sym, sym/skew, skew/sym, skew/skew).  For linear fields the
// induction equation reduces to B' = [A, B]; all coefficient matrices here are
// generated from that commutator identity rather than transcribed tables.

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <vector>

#include "mhdx/field.hpp"
#include "mhdx/profile.hpp"

namespace mhdx {

struct Case2DegenerateB : std::runtime_error {
  Case2DegenerateB()
      : std::runtime_error(
            "linear family case 2: b12, b13, b23 must all be nonzero") {}
};

using Mat3 = Eigen::Matrix3d;

// exp(M t) by scaling-and-squaring with a Taylor kernel; truncation below
// 1e-18 per term, fixed order for determinism
inline Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& M, double t) {
  const int n = static_cast<int>(M.rows());
  Eigen::MatrixXd A = M * t;
  double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++s;
  }
  A /= std::pow(2.0, s);
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = (term * A) / k;
    X += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) X = X * X;
  return X;
}

namespace lin_detail {

// symmetric traceless matrix from (m11, m12, m13, m22, m23)
inline Mat3 sym_from5(const Eigen::Matrix<double, 5, 1>& s) {
  Mat3 m;
  m << s(0), s(1), s(2), s(1), s(3), s(4), s(2), s(4), -s(0) - s(3);
  return m;
}
inline Eigen::Matrix<double, 5, 1> sym_to5(const Mat3& m) {
  Eigen::Matrix<double, 5, 1> s;
  s << m(0, 0), m(0, 1), m(0, 2), m(1, 1), m(1, 2);
  return s;
}
// skew matrix from (m12, m13, m23)
inline Mat3 skew_from3(const Eigen::Vector3d& w) {
  Mat3 m;
  m << 0, w(0), w(1), -w(0), 0, w(2), -w(1), -w(2), 0;
  return m;
}
inline Eigen::Vector3d skew_to3(const Mat3& m) {
  return {m(0, 1), m(0, 2), m(1, 2)};
}

inline Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }

}  // namespace lin_detail

// The induction constraint for constant symmetric B and symmetric A(t) is
// [A, B] = 0; as a linear system on (a11,a12,a13,a22,a23) its 3x5 coefficient
// matrix is generated columnwise from the commutator.
inline Eigen::Matrix<double, 3, 5> induction_constraint_matrix(const Mat3& B) {
  Eigen::Matrix<double, 3, 5> M;
  for (int k = 0; k < 5; ++k) {
    Eigen::Matrix<double, 5, 1> e = Eigen::Matrix<double, 5, 1>::Zero();
    e(k) = 1.0;
    Mat3 C = lin_detail::commutator(lin_detail::sym_from5(e), B);
    M(0, k) = C(0, 1);
    M(1, k) = C(0, 2);
    M(2, k) = C(1, 2);
  }
  return M;
}

// orthonormal kernel basis of the 3x5 constraint system
inline std::vector<Eigen::Matrix<double, 5, 1>> nullspace_2_10(const Mat3& B) {
  if (std::abs(B.trace()) > 1e-12 || (B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("nullspace_2_10: B must be symmetric traceless");
  Eigen::Matrix<double, 3, 5> M = induction_constraint_matrix(B);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  double thresh = 1e-12 * std::max(1.0, svd.singularValues()(0));
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > thresh) ++rank;
  std::vector<Eigen::Matrix<double, 5, 1>> basis;
  for (int i = rank; i < 5; ++i) basis.push_back(svd.matrixV().col(i));
  return basis;
}

// 5x5 generator of the constant-skew-A evolution of symmetric traceless B
inline Eigen::Matrix<double, 5, 5> sym_evolution_generator(const Mat3& A) {
  Eigen::Matrix<double, 5, 5> M;
  for (int k = 0; k < 5; ++k) {
    Eigen::Matrix<double, 5, 1> e = Eigen::Matrix<double, 5, 1>::Zero();
    e(k) = 1.0;
    M.col(k) = lin_detail::sym_to5(lin_detail::commutator(A, lin_detail::sym_from5(e)));
  }
  return M;
}

// 3x3 generator of the constant-skew-A evolution of skew B
inline Mat3 skew_evolution_generator(const Mat3& A) {
  Mat3 N;
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e(k) = 1.0;
    N.col(k) = lin_detail::skew_to3(lin_detail::commutator(A, lin_detail::skew_from3(e)));
  }
  return N;
}

struct LinearFamilyParams {
  int case_id = 1;  // 1: sym/sym, 2: sym/skew, 3: skew/sym, 4: skew/skew
  Mat3 B = Mat3::Zero();  // cases 1 (sym traceless) and 2 (skew): constant H matrix
  Mat3 A = Mat3::Zero();  // cases 3, 4: constant skew velocity matrix
  std::vector<double> combo;          // case 1: kernel-basis combination
  TimeProfile g;                      // case 1 (optional multiplier), case 2
  Eigen::Matrix<double, 5, 1> c5 = Eigen::Matrix<double, 5, 1>::Zero();  // case 3
  Eigen::Vector3d c3 = Eigen::Vector3d::Zero();                          // case 4
};

namespace lin_detail {

class LinearKernel final : public FieldKernel {
 public:
  // evalA/evalB return the matrix and its time derivative
  std::function<void(double, Mat3&, Mat3&)> evalA, evalB;

  void eval(double t, const Vec3& pos, STJet v[3], STJet H[3]) const override {
    Mat3 A, Ad, B, Bd;
    evalA(t, A, Ad);
    evalB(t, B, Bd);
    Eigen::Vector3d x(pos.x, pos.y, pos.z);
    Eigen::Vector3d Av = A * x, Adv = Ad * x, Bv = B * x, Bdv = Bd * x;
    for (int i = 0; i < 3; ++i) {
      v[i] = STJet{};
      v[i].v = Av(i);
      v[i].dt = Adv(i);
      for (int j = 0; j < 3; ++j) v[i].g[j] = A(i, j);
      H[i] = STJet{};
      H[i].v = Bv(i);
      H[i].dt = Bdv(i);
      for (int j = 0; j < 3; ++j) H[i].g[j] = B(i, j);
    }
  }
};

// quadratic-form pressure helper for the printed variants
inline double quad_pressure(const Vec3& r, double cxx, double cyy, double czz,
                            double cxy, double cxz, double cyz, double rho) {
  return -rho * 0.5 * (cxx * r.x * r.x + cyy * r.y * r.y + czz * r.z * r.z) -
         rho * (cxy * r.x * r.y + cxz * r.x * r.z + cyz * r.y * r.z);
}

}  // namespace lin_detail

inline std::shared_ptr<KernelField> build_linear_family(const LinearFamilyParams& p,
                                                        const PhysicalConstants& pc,
                                                        bool as_printed = false) {
  using namespace lin_detail;
  auto kern = std::make_shared<LinearKernel>();
  TimeProfile g = p.g.valid() ? p.g : TimeProfile(constant(1.0));
  std::function<double(double, const Vec3&)> printed;

  if (p.case_id == 1) {
    if (std::abs(p.B.trace()) > 1e-12 ||
        (p.B - p.B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw DegenerateConstants("case 1 requires symmetric traceless B");
    auto basis = nullspace_2_10(p.B);
    Eigen::Matrix<double, 5, 1> a5 = Eigen::Matrix<double, 5, 1>::Zero();
    for (size_t i = 0; i < p.combo.size() && i < basis.size(); ++i)
      a5 += p.combo[i] * basis[i];
    Mat3 A0 = sym_from5(a5);
    Mat3 B = p.B;
    kern->evalA = [A0, g](double t, Mat3& A, Mat3& Ad) {
      Jet j = g.jet(t);
      A = j.c[0] * A0;
      Ad = j.c[1] * A0;
    };
    kern->evalB = [B](double, Mat3& Bo, Mat3& Bd) {
      Bo = B;
      Bd.setZero();
    };
    if (as_printed) {
      double rho = pc.rho;
      printed = [A0, g, rho](double t, const Vec3& r) {
        Jet j = g.jet(t);
        Mat3 A = j.c[0] * A0, Ad = j.c[1] * A0;
        auto s2 = [&](int i, int k) {
          return A(i, 0) * A(k, 0) + A(i, 1) * A(k, 1) + A(i, 2) * A(k, 2);
        };
        // verbatim published coefficients (y^2 uses a12', z^2 uses a33')
        return quad_pressure(r, Ad(0, 0) + s2(0, 0), Ad(0, 1) + s2(1, 1),
                             Ad(2, 2) + s2(2, 2), Ad(0, 1) + s2(0, 1),
                             Ad(0, 2) + s2(0, 2), Ad(1, 2) + s2(1, 2), rho);
      };
    }
  } else if (p.case_id == 2) {
    if ((p.B + p.B.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw DegenerateConstants("case 2 requires skew B");
    double b12 = p.B(0, 1), b13 = p.B(0, 2), b23 = p.B(1, 2);
    if (b12 == 0.0 || b13 == 0.0 || b23 == 0.0) throw Case2DegenerateB();
    // A is the traceless part of B^2, normalized so [A, B] = 0 holds trivially
    Mat3 B2 = p.B * p.B;
    Mat3 A0 = -(B2 - (B2.trace() / 3.0) * Mat3::Identity()) / (b12 * b13 * b23);
    Mat3 B = p.B;
    kern->evalA = [A0, g](double t, Mat3& A, Mat3& Ad) {
      Jet j = g.jet(t);
      A = j.c[0] * A0;
      Ad = j.c[1] * A0;
    };
    kern->evalB = [B](double, Mat3& Bo, Mat3& Bd) {
      Bo = B;
      Bd.setZero();
    };
    if (as_printed) {
      double rho = pc.rho, mu0 = pc.mu0;
      printed = [A0, g, rho, mu0, b12, b13, b23](double t, const Vec3& r) {
        Jet j = g.jet(t);
        Mat3 A = j.c[0] * A0, Ad = j.c[1] * A0;
        auto s2 = [&](int i, int k) {
          return A(i, 0) * A(k, 0) + A(i, 1) * A(k, 1) + A(i, 2) * A(k, 2);
        };
        return quad_pressure(
            r, Ad(0, 0) + s2(0, 0) + 2 * mu0 * (b12 * b12 + b13 * b13),
            Ad(0, 1) + s2(1, 1) + 2 * mu0 * (b12 * b12 + b23 * b23),
            Ad(0, 2) + s2(2, 2) + 2 * mu0 * (b13 * b13 + b23 * b23),
            Ad(0, 1) + s2(0, 1) - 2 * mu0 * b13 * b23,
            Ad(0, 2) + s2(0, 2) + 2 * mu0 * b12 * b23,
            Ad(1, 2) + s2(1, 2) - 2 * mu0 * b12 * b13, rho);
      };
    }
  } else if (p.case_id == 3 || p.case_id == 4) {
    if ((p.A + p.A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw DegenerateConstants("cases 3/4 require skew A");
    Mat3 A = p.A;
    kern->evalA = [A](double, Mat3& Ao, Mat3& Ad) {
      Ao = A;
      Ad.setZero();
    };
    if (p.case_id == 3) {
      Eigen::Matrix<double, 5, 5> M = sym_evolution_generator(A);
      Eigen::Matrix<double, 5, 1> c = p.c5;
      kern->evalB = [M, c](double t, Mat3& Bo, Mat3& Bd) {
        Eigen::Matrix<double, 5, 1> b = matrix_exp(M, t) * c;
        Bo = sym_from5(b);
        Bd = sym_from5((M * b).eval());
      };
    } else {
      Mat3 N = skew_evolution_generator(A);
      Eigen::Vector3d c = p.c3;
      kern->evalB = [N, c](double t, Mat3& Bo, Mat3& Bd) {
        Eigen::Vector3d b = matrix_exp(N, t) * c;
        Bo = skew_from3(b);
        Bd = skew_from3((N * b).eval());
      };
    }
    if (as_printed) {
      double rho = pc.rho, mu0 = pc.mu0;
      double a12 = A(0, 1), a13 = A(0, 2), a23 = A(1, 2);
      bool magnetic = (p.case_id == 4);
      auto evalB = kern->evalB;
      printed = [rho, mu0, a12, a13, a23, magnetic, evalB](double t, const Vec3& r) {
        // published form with dependent entries normalized (a21=-a12 etc.)
        double cxx = -(a12 * a12 + a13 * a13), cyy = -(a12 * a12 + a23 * a23),
               czz = -(a13 * a13 + a23 * a23);
        double cxy = a13 * a23, cxz = -a12 * a23, cyz = a12 * a13;
        if (magnetic) {
          Mat3 B, Bd;
          evalB(t, B, Bd);
          double b12 = B(0, 1), b13 = B(0, 2), b23 = B(1, 2);
          cxx += 2 * mu0 * (b12 * b12 + b13 * b13);
          cyy += 2 * mu0 * (b12 * b12 + b23 * b23);
          czz += 2 * mu0 * (b13 * b13 + b23 * b23);
          cxy += -2 * mu0 * b13 * b23;
          cxz += 2 * mu0 * b12 * b23;
          cyz += -2 * mu0 * b12 * b13;
        }
        return -rho * (cxx * r.x * r.x / 2 + cyy * r.y * r.y / 2 +
                       czz * r.z * r.z / 2 + cxy * r.x * r.y + cxz * r.x * r.z +
                       cyz * r.y * r.z);
      };
    }
  } else {
    throw DegenerateConstants("unknown linear family case");
  }

  auto f = std::make_shared<KernelField>("prop2." + std::to_string(p.case_id), kern, pc);
  if (printed) f->set_printed_pressure(std::move(printed));
  return f;
}

}  // namespace mhdx

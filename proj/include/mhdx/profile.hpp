#pragma once

// Closed-form time-profile algebra: constants, polynomials, damped trig atoms,
// sums/products/quotients, elementary functions, derivatives, and definite
// integrals from t=0 (backed by an eagerly built cumulative table).
// Profiles are immutable and thread-safe to evaluate.

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mhdx/jet.hpp"
#include "mhdx/quadrature.hpp"

namespace mhdx {

struct PoleProximity : std::runtime_error {
  PoleProximity() : std::runtime_error("profile: evaluation within pole guard band") {}
};
struct OrderUnsupported : std::runtime_error {
  OrderUnsupported() : std::runtime_error("profile: derivative order > 2 unsupported") {}
};
struct DomainViolation : std::runtime_error {
  explicit DomainViolation(const std::string& m) : std::runtime_error("profile: " + m) {}
};

// window over which integral tables are prebuilt
inline constexpr double kProfileDomainLo = -3.0;
inline constexpr double kProfileDomainHi = 3.0;
inline constexpr double kIntegralTol = 1e-11;
inline constexpr double kPoleGuard = 1e-8;

class ProfileNode {
 public:
  virtual Jet jet(double t) const = 0;
  virtual void print(std::ostream& os) const = 0;
  virtual ~ProfileNode() = default;
};

using NodePtr = std::shared_ptr<const ProfileNode>;

class TimeProfile {
 public:
  TimeProfile() : n_(nullptr) {}
  explicit TimeProfile(NodePtr n) : n_(std::move(n)) {}
  TimeProfile(double v);  // implicit: constant profile

  bool valid() const { return n_ != nullptr; }
  Jet jet(double t) const { return n_->jet(t); }

  double eval(double t, int order = 0) const {
    if (order < 0 || order > 2) throw OrderUnsupported();
    return n_->jet(t).deriv(order);
  }

  std::string str() const {
    std::ostringstream os;
    n_->print(os);
    return os.str();
  }

  const NodePtr& node() const { return n_; }

 private:
  NodePtr n_;
};

// ---------------------------------------------------------------------------
// node kinds

namespace nodes {

class Const final : public ProfileNode {
 public:
  explicit Const(double v) : v_(v) {}
  Jet jet(double) const override { return Jet::constant(v_); }
  void print(std::ostream& os) const override { os << "(const " << v_ << ")"; }
  double value() const { return v_; }

 private:
  double v_;
};

class Poly final : public ProfileNode {
 public:
  explicit Poly(std::vector<double> c) : c_(std::move(c)) {}
  Jet jet(double t) const override {
    Jet tv = Jet::variable(t);
    Jet r = Jet::constant(0.0);
    for (size_t i = c_.size(); i-- > 0;) r = r * tv + c_[i];
    return r;
  }
  void print(std::ostream& os) const override {
    os << "(poly";
    for (double v : c_) os << ' ' << v;
    os << ")";
  }

 private:
  std::vector<double> c_;
};

// c * e^{a t} * {cos,sin}(b t + phi0)
class TrigExp final : public ProfileNode {
 public:
  TrigExp(double c, double a, double b, double phi0, bool is_sin)
      : c_(c), a_(a), b_(b), phi0_(phi0), sin_(is_sin) {}
  Jet jet(double t) const override {
    Jet tv = Jet::variable(t);
    Jet r = c_ * jet_exp(a_ * tv);
    if (b_ != 0.0 || phi0_ != 0.0) {
      Jet arg = b_ * tv + phi0_;
      r = r * (sin_ ? jet_sin(arg) : jet_cos(arg));
    } else if (sin_) {
      r = Jet::constant(0.0);
    }
    return r;
  }
  void print(std::ostream& os) const override {
    os << "(trigexp " << c_ << ' ' << a_ << ' ' << b_ << ' ' << phi0_ << ' '
       << (sin_ ? "sin" : "cos") << ")";
  }

 private:
  double c_, a_, b_, phi0_;
  bool sin_;
};

class Sum final : public ProfileNode {
 public:
  explicit Sum(std::vector<NodePtr> ch) : ch_(std::move(ch)) {}
  Jet jet(double t) const override {
    Jet r = Jet::constant(0.0);
    for (auto& c : ch_) r = r + c->jet(t);
    return r;
  }
  void print(std::ostream& os) const override {
    os << "(sum";
    for (auto& c : ch_) {
      os << ' ';
      c->print(os);
    }
    os << ")";
  }

 private:
  std::vector<NodePtr> ch_;
};

class Prod final : public ProfileNode {
 public:
  explicit Prod(std::vector<NodePtr> ch) : ch_(std::move(ch)) {}
  Jet jet(double t) const override {
    Jet r = Jet::constant(1.0);
    for (auto& c : ch_) r = r * c->jet(t);
    return r;
  }
  void print(std::ostream& os) const override {
    os << "(prod";
    for (auto& c : ch_) {
      os << ' ';
      c->print(os);
    }
    os << ")";
  }

 private:
  std::vector<NodePtr> ch_;
};

class Quot final : public ProfileNode {
 public:
  Quot(NodePtr num, NodePtr den) : num_(std::move(num)), den_(std::move(den)) {}
  Jet jet(double t) const override {
    Jet d = den_->jet(t);
    if (std::abs(d.c[0]) < kPoleGuard * std::max(1.0, std::abs(d.c[1])))
      throw PoleProximity();
    return num_->jet(t) / d;
  }
  void print(std::ostream& os) const override {
    os << "(quot ";
    num_->print(os);
    os << ' ';
    den_->print(os);
    os << ")";
  }

 private:
  NodePtr num_, den_;
};

template <Jet (*Fn)(const Jet&), char const* Name>
class Unary final : public ProfileNode {
 public:
  explicit Unary(NodePtr c) : ch_(std::move(c)) {}
  Jet jet(double t) const override { return Fn(ch_->jet(t)); }
  void print(std::ostream& os) const override {
    os << '(' << Name << ' ';
    ch_->print(os);
    os << ")";
  }

 private:
  NodePtr ch_;
};

inline constexpr char kExpName[] = "exp";
inline constexpr char kSinName[] = "sin";
inline constexpr char kCosName[] = "cos";
inline constexpr char kDiffName[] = "diff";

class Sqrt final : public ProfileNode {
 public:
  explicit Sqrt(NodePtr c) : ch_(std::move(c)) {}
  Jet jet(double t) const override {
    Jet u = ch_->jet(t);
    if (u.c[0] < 0.0) throw DomainViolation("sqrt of negative profile value");
    return jet_sqrt(u);
  }
  void print(std::ostream& os) const override {
    os << "(sqrt ";
    ch_->print(os);
    os << ")";
  }

 private:
  NodePtr ch_;
};

class Pow final : public ProfileNode {
 public:
  Pow(NodePtr c, double a) : ch_(std::move(c)), a_(a) {}
  Jet jet(double t) const override {
    Jet u = ch_->jet(t);
    if (u.c[0] <= 0.0) throw DomainViolation("pow of non-positive profile value");
    return jet_pow(u, a_);
  }
  void print(std::ostream& os) const override {
    os << "(pow ";
    ch_->print(os);
    os << ' ' << a_ << ")";
  }

 private:
  NodePtr ch_;
  double a_;
};

// passes the child through; throws DomainViolation if its value drops below eps
class GuardPos final : public ProfileNode {
 public:
  GuardPos(NodePtr c, double eps) : ch_(std::move(c)), eps_(eps) {}
  Jet jet(double t) const override {
    Jet u = ch_->jet(t);
    if (u.c[0] < eps_) throw DomainViolation("guarded expression out of domain");
    return u;
  }
  void print(std::ostream& os) const override {
    os << "(guardpos ";
    ch_->print(os);
    os << ' ' << eps_ << ")";
  }

 private:
  NodePtr ch_;
  double eps_;
};

// caches the most recent evaluation per thread; composed profile chains form a
// DAG whose shared subtrees would otherwise be re-walked once per path
class Memo final : public ProfileNode {
 public:
  explicit Memo(NodePtr c) : ch_(std::move(c)), id_(next_id()++) {}
  Jet jet(double t) const override {
    Entry& e = slot();
    if (e.valid && e.t == t) return e.j;
    Jet j = ch_->jet(t);
    e.valid = true;
    e.t = t;
    e.j = j;
    return j;
  }
  void print(std::ostream& os) const override { ch_->print(os); }

 private:
  struct Entry {
    bool valid = false;
    double t = 0.0;
    Jet j;
  };
  static std::uint64_t& next_id() {
    static std::uint64_t n = 0;
    return n;
  }
  Entry& slot() const {
    static thread_local std::unordered_map<std::uint64_t, Entry> cache;
    return cache[id_];
  }
  NodePtr ch_;
  std::uint64_t id_;
};

class Integral final : public ProfileNode {
 public:
  explicit Integral(NodePtr c)
      : ch_(std::move(c)),
        table_([ch = ch_](double s) { return ch->jet(s).c[0]; }, kProfileDomainLo,
               kProfileDomainHi, kIntegralTol) {}
  Jet jet(double t) const override {
    Jet g = ch_->jet(t);
    Jet r;
    r.c[0] = table_.eval(t);
    for (int k = 1; k <= kJetOrder; ++k) r.c[k] = g.c[k - 1] / k;
    return r;
  }
  void print(std::ostream& os) const override {
    os << "(int ";
    ch_->print(os);
    os << ")";
  }

 private:
  NodePtr ch_;
  CumulativeTable table_;
};

// Piecewise two-point Hermite tabulation of an expensive profile over the
// prebuilt window.  Each interval carries the degree-9 polynomial matching
// derivatives 0..4 of the exact profile at both endpoints, fitted in the
// scaled variable s in [-1,1] for conditioning.  Evaluation inside the window
// is O(1); outside it falls back to the exact child.
class HermiteTable final : public ProfileNode {
 public:
  HermiteTable(NodePtr c, double lo, double hi, double step)
      : ch_(std::move(c)), lo_(lo), hi_(hi) {
    n_ = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
    step_ = (hi - lo) / n_;
    std::vector<Jet> node_jets(n_ + 1);
    for (int i = 0; i <= n_; ++i) node_jets[i] = ch_->jet(lo_ + i * step_);
    // confluent Vandermonde for p^(k)(+-1), k = 0..4, p of degree 9; constant
    // across intervals, factorized once
    double M[10][10];
    for (int end = 0; end < 2; ++end) {
      double s = end == 0 ? -1.0 : 1.0;
      for (int k = 0; k < 5; ++k) {
        for (int j = 0; j < 10; ++j) {
          double c = 0.0;
          if (j >= k) {
            c = 1.0;
            for (int q = 0; q < k; ++q) c *= j - q;
            c *= std::pow(s, j - k);
          }
          M[5 * end + k][j] = c;
        }
      }
    }
    int piv[10];
    lu_factor(M, piv);
    double hh = 0.5 * step_;
    coef_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      double rhs[10];
      for (int k = 0; k < 5; ++k) {
        double fact = 1.0, hk = 1.0;
        for (int q = 2; q <= k; ++q) fact *= q;
        for (int q = 0; q < k; ++q) hk *= hh;
        rhs[k] = node_jets[i].c[k] * fact * hk;
        rhs[5 + k] = node_jets[i + 1].c[k] * fact * hk;
      }
      lu_solve(M, piv, rhs, coef_[i].data());
    }
  }

  Jet jet(double t) const override {
    if (t < lo_ || t > hi_) return ch_->jet(t);
    int i = std::min(n_ - 1, static_cast<int>((t - lo_) / step_));
    double hh = 0.5 * step_;
    double s = (t - (lo_ + (i + 0.5) * step_)) / hh;
    const double* c = coef_[i].data();
    Jet r;
    double scale = 1.0;
    for (int k = 0; k <= kJetOrder; ++k) {
      double d = 0.0;
      for (int j = 9; j >= k; --j) {
        double f = 1.0;
        for (int q = 0; q < k; ++q) f *= j - q;
        d = d * s + c[j] * f;
      }
      double fact = 1.0;
      for (int q = 2; q <= k; ++q) fact *= q;
      r.c[k] = d / (fact * scale);
      scale *= hh;
    }
    return r;
  }

  void print(std::ostream& os) const override {
    os << "(tab ";
    ch_->print(os);
    os << ")";
  }

 private:
  static void lu_factor(double A[10][10], int piv[10]) {
    for (int k = 0; k < 10; ++k) {
      int p = k;
      for (int i = k + 1; i < 10; ++i)
        if (std::abs(A[i][k]) > std::abs(A[p][k])) p = i;
      piv[k] = p;
      if (p != k)
        for (int j = 0; j < 10; ++j) std::swap(A[k][j], A[p][j]);
      for (int i = k + 1; i < 10; ++i) {
        A[i][k] /= A[k][k];
        for (int j = k + 1; j < 10; ++j) A[i][j] -= A[i][k] * A[k][j];
      }
    }
  }
  static void lu_solve(const double A[10][10], const int piv[10],
                       const double b_in[10], double x[10]) {
    double b[10];
    for (int i = 0; i < 10; ++i) b[i] = b_in[i];
    // rows were swapped in full during factorization, so permute b first
    for (int k = 0; k < 10; ++k) std::swap(b[k], b[piv[k]]);
    for (int k = 0; k < 10; ++k)
      for (int i = k + 1; i < 10; ++i) b[i] -= A[i][k] * b[k];
    for (int i = 9; i >= 0; --i) {
      for (int j = i + 1; j < 10; ++j) b[i] -= A[i][j] * b[j];
      b[i] /= A[i][i];
    }
    for (int i = 0; i < 10; ++i) x[i] = b[i];
  }

  NodePtr ch_;
  double lo_, hi_, step_;
  int n_;
  std::vector<std::array<double, 10>> coef_;
};

}  // namespace nodes

// ---------------------------------------------------------------------------
// builders

inline TimeProfile constant(double v) {
  return TimeProfile(std::make_shared<nodes::Const>(v));
}
inline TimeProfile::TimeProfile(double v) : n_(std::make_shared<nodes::Const>(v)) {}
inline TimeProfile tvar() {
  return TimeProfile(std::make_shared<nodes::Poly>(std::vector<double>{0.0, 1.0}));
}
inline TimeProfile poly(std::vector<double> coeffs) {
  return TimeProfile(std::make_shared<nodes::Poly>(std::move(coeffs)));
}
inline TimeProfile trigexp(double c, double a, double b, double phi0, bool is_sin) {
  return TimeProfile(std::make_shared<nodes::TrigExp>(c, a, b, phi0, is_sin));
}
// c * e^{a t}
inline TimeProfile expat(double c, double a) { return trigexp(c, a, 0.0, 0.0, false); }

inline TimeProfile operator+(const TimeProfile& a, const TimeProfile& b) {
  return TimeProfile(std::make_shared<nodes::Sum>(std::vector<NodePtr>{a.node(), b.node()}));
}
inline TimeProfile operator*(const TimeProfile& a, const TimeProfile& b) {
  return TimeProfile(std::make_shared<nodes::Prod>(std::vector<NodePtr>{a.node(), b.node()}));
}
inline TimeProfile operator-(const TimeProfile& a) { return constant(-1.0) * a; }
inline TimeProfile operator-(const TimeProfile& a, const TimeProfile& b) {
  return a + (-b);
}
inline TimeProfile operator/(const TimeProfile& a, const TimeProfile& b) {
  return TimeProfile(std::make_shared<nodes::Quot>(a.node(), b.node()));
}

inline TimeProfile pexp(const TimeProfile& a) {
  return TimeProfile(std::make_shared<nodes::Unary<jet_exp, nodes::kExpName>>(a.node()));
}
inline TimeProfile psin(const TimeProfile& a) {
  return TimeProfile(std::make_shared<nodes::Unary<jet_sin, nodes::kSinName>>(a.node()));
}
inline TimeProfile pcos(const TimeProfile& a) {
  return TimeProfile(std::make_shared<nodes::Unary<jet_cos, nodes::kCosName>>(a.node()));
}
inline TimeProfile pdiff(const TimeProfile& a) {
  return TimeProfile(
      std::make_shared<nodes::Unary<jet_derivative, nodes::kDiffName>>(a.node()));
}
inline TimeProfile psqrt(const TimeProfile& a) {
  return TimeProfile(std::make_shared<nodes::Sqrt>(a.node()));
}
inline TimeProfile ppow(const TimeProfile& a, double e) {
  return TimeProfile(std::make_shared<nodes::Pow>(a.node(), e));
}
inline TimeProfile pguard_pos(const TimeProfile& a, double eps) {
  return TimeProfile(std::make_shared<nodes::GuardPos>(a.node(), eps));
}
// memoized view of the same profile (cache of the latest jet per thread)
inline TimeProfile pmemo(const TimeProfile& a) {
  return TimeProfile(std::make_shared<nodes::Memo>(a.node()));
}
// definite integral from 0 to t
inline TimeProfile pint(const TimeProfile& a) {
  return TimeProfile(std::make_shared<nodes::Integral>(a.node()));
}
// Hermite tabulation over the prebuilt window; step is the node spacing.
// Collapses deep quadrature chains to O(1) per evaluation.
inline TimeProfile ptab(const TimeProfile& a, double step = 0.02) {
  return TimeProfile(std::make_shared<nodes::HermiteTable>(
      a.node(), kProfileDomainLo, kProfileDomainHi, step));
}

// ---------------------------------------------------------------------------
// spec'd operations

inline double eval_profile(const TimeProfile& p, double t, int order) {
  return p.eval(t, order);
}

inline double integrate(const TimeProfile& p, double t0, double t1, double tol) {
  if (tol < 1e-12) tol = 1e-12;
  return integrate_adaptive([&p](double s) { return p.eval(s, 0); }, t0, t1, tol);
}

// alpha = (k + 2k^2 l e^{-kt}) / (-1 + 2kl e^{-kt}); alpha' = (alpha^2 - k^2)/2
inline TimeProfile bernoulli_alpha(double k, double l) {
  TimeProfile num = constant(k) + expat(2.0 * k * k * l, -k);
  TimeProfile den = constant(-1.0) + expat(2.0 * k * l, -k);
  return num / den;
}

// mu = l1 * exp( int_0^t (2k + 4/(-1 + 2 l2 e^{-ks})) ds )
inline TimeProfile mu_profile(double k, double l1, double l2) {
  TimeProfile den = constant(-1.0) + expat(2.0 * l2, -k);
  TimeProfile integrand = constant(2.0 * k) + constant(4.0) / den;
  return constant(l1) * pexp(pint(integrand));
}

// beta' = sign * alpha' / (sin^2(alpha) sqrt(d - 1/sin^2(alpha))), beta(0) = d0
inline TimeProfile beta_from_alpha(const TimeProfile& alpha, double d, double d0,
                                   int sign) {
  TimeProfile s2 = psin(alpha) * psin(alpha);
  TimeProfile arg =
      pguard_pos(constant(d) - constant(1.0) / s2, 1e-10 * std::max(1.0, d * d));
  TimeProfile integrand =
      (constant(static_cast<double>(sign)) * pdiff(alpha)) / (s2 * psqrt(arg));
  return constant(d0) + pint(integrand);
}

// ---------------------------------------------------------------------------
// prefix-grammar parser, e.g. "(sum (poly 0 1) (trigexp 1 0 2 0 sin))"

TimeProfile parse_profile(const std::string& text);

namespace detail_parse {

struct Tok {
  std::vector<std::string> toks;
  size_t pos = 0;
  const std::string& peek() {
    if (pos >= toks.size()) throw std::runtime_error("profile parse: unexpected end");
    return toks[pos];
  }
  std::string next() {
    auto s = peek();
    ++pos;
    return s;
  }
  double num() { return std::stod(next()); }
};

inline TimeProfile parse_expr(Tok& tk) {
  std::string t = tk.next();
  if (t != "(") {
    // bare number shorthand
    return constant(std::stod(t));
  }
  std::string op = tk.next();
  TimeProfile r;
  if (op == "const") {
    r = constant(tk.num());
  } else if (op == "t") {
    r = tvar();
  } else if (op == "poly") {
    std::vector<double> c;
    while (tk.peek() != ")") c.push_back(tk.num());
    r = poly(std::move(c));
  } else if (op == "trigexp") {
    double c = tk.num(), a = tk.num(), b = tk.num(), p0 = tk.num();
    std::string kind = tk.next();
    if (kind != "sin" && kind != "cos")
      throw std::runtime_error("profile parse: trigexp kind must be sin|cos");
    r = trigexp(c, a, b, p0, kind == "sin");
  } else if (op == "sum" || op == "prod") {
    std::vector<NodePtr> ch;
    while (tk.peek() != ")") ch.push_back(parse_expr(tk).node());
    if (op == "sum")
      r = TimeProfile(std::make_shared<nodes::Sum>(std::move(ch)));
    else
      r = TimeProfile(std::make_shared<nodes::Prod>(std::move(ch)));
  } else if (op == "quot") {
    TimeProfile a = parse_expr(tk), b = parse_expr(tk);
    r = a / b;
  } else if (op == "neg") {
    r = -parse_expr(tk);
  } else if (op == "int") {
    r = pint(parse_expr(tk));
  } else if (op == "exp") {
    r = pexp(parse_expr(tk));
  } else if (op == "sin") {
    r = psin(parse_expr(tk));
  } else if (op == "cos") {
    r = pcos(parse_expr(tk));
  } else if (op == "sqrt") {
    r = psqrt(parse_expr(tk));
  } else if (op == "diff") {
    r = pdiff(parse_expr(tk));
  } else if (op == "pow") {
    TimeProfile a = parse_expr(tk);
    r = ppow(a, tk.num());
  } else if (op == "guardpos") {
    TimeProfile a = parse_expr(tk);
    r = pguard_pos(a, tk.num());
  } else {
    throw std::runtime_error("profile parse: unknown op '" + op + "'");
  }
  if (tk.next() != ")") throw std::runtime_error("profile parse: expected ')'");
  return r;
}

}  // namespace detail_parse

inline TimeProfile parse_profile(const std::string& text) {
  detail_parse::Tok tk;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) {
        tk.toks.push_back(cur);
        cur.clear();
      }
      tk.toks.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tk.toks.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tk.toks.push_back(cur);
  TimeProfile p = detail_parse::parse_expr(tk);
  if (tk.pos != tk.toks.size())
    throw std::runtime_error("profile parse: trailing tokens");
  return p;
}

struct PhysicalConstants {
  double rho = 1.0;
  double nu = 1.0;
  double mu0 = 1.0;
  double eta = 1.0;
  void validate() const {
    if (!(rho > 0) || !(nu > 0) || !(mu0 > 0) || !(eta > 0) ||
        !std::isfinite(rho + nu + mu0 + eta))
      throw std::invalid_argument("physical constants must be positive and finite");
  }
};

}  // namespace mhdx

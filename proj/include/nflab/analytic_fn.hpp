#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "nflab/errors.hpp"
#include "nflab/scaled_complex.hpp"

namespace nflab {

// ---------------------------------------------------------------------------
// Regions

struct Disk {
  Complex center{0.0, 0.0};
  double radius{1.0};

  Disk() = default;
  Disk(Complex c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "disk radius must be positive");
  }

  // Closed-disk membership with a relative slack; trees are entire so
  // touching the boundary is harmless.
  bool contains(Complex z) const {
    return std::abs(z - center) <= radius * (1.0 + 1e-12) + 1e-300;
  }

  // Does this disk contain the closed disk D(a, r)?
  bool contains_disk(Complex a, double r) const {
    return std::abs(a - center) + r <= radius * (1.0 + 1e-12) + 1e-300;
  }
};

// ---------------------------------------------------------------------------
// Expression trees
//
// Grammar of representable functions: polynomials, exp of a subtree, sums,
// products, affine precomposition z -> child(a*z + b), and the reflection
// product  z -> child(z) * conj(child(conj(z))).  No division node: every
// representable tree is entire.

struct FnNode;
using NodePtr = std::shared_ptr<const FnNode>;

struct FnNode {
  enum class Kind { Polynomial, Exp, Sum, Product, Affine, ReflectSym };

  Kind kind;
  std::vector<Complex> coeffs;    // Polynomial: coeffs[k] * z^k
  std::vector<NodePtr> children;  // Exp/Affine/ReflectSym use children[0]
  Complex aff_a{1.0, 0.0};        // Affine: child(aff_a * z + aff_b)
  Complex aff_b{0.0, 0.0};

  explicit FnNode(Kind k) : kind(k) {}
};

inline NodePtr make_poly(std::vector<Complex> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == Complex(0.0, 0.0)) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(Complex(0.0, 0.0));
  auto n = std::make_shared<FnNode>(FnNode::Kind::Polynomial);
  n->coeffs = std::move(coeffs);
  return n;
}

inline NodePtr make_const(Complex c) { return make_poly({c}); }

inline NodePtr make_exp(NodePtr child) {
  auto n = std::make_shared<FnNode>(FnNode::Kind::Exp);
  n->children = {std::move(child)};
  return n;
}

inline NodePtr make_reflect(NodePtr child) {
  auto n = std::make_shared<FnNode>(FnNode::Kind::ReflectSym);
  n->children = {std::move(child)};
  return n;
}

inline NodePtr make_affine(Complex a, Complex b, NodePtr child) {
  auto n = std::make_shared<FnNode>(FnNode::Kind::Affine);
  n->aff_a = a;
  n->aff_b = b;
  n->children = {std::move(child)};
  return n;
}

inline bool is_poly(const NodePtr& n) { return n->kind == FnNode::Kind::Polynomial; }

inline bool is_zero_poly(const NodePtr& n) {
  return is_poly(n) && n->coeffs.size() == 1 && n->coeffs[0] == Complex(0.0, 0.0);
}

inline bool is_one_poly(const NodePtr& n) {
  return is_poly(n) && n->coeffs.size() == 1 && n->coeffs[0] == Complex(1.0, 0.0);
}

// Parser and derivative builders fold polynomial arithmetic up to this
// degree; beyond it products stay as product nodes.
inline constexpr std::size_t kMaxPolyDegree = 64;

inline NodePtr make_sum(std::vector<NodePtr> terms) {
  std::vector<NodePtr> flat;
  std::vector<Complex> poly_acc{Complex(0.0, 0.0)};
  bool have_poly = false;
  for (auto& t : terms) {
    if (t->kind == FnNode::Kind::Sum) {
      for (auto& c : t->children) {
        if (is_poly(c)) {
          have_poly = true;
          if (poly_acc.size() < c->coeffs.size()) poly_acc.resize(c->coeffs.size());
          for (std::size_t i = 0; i < c->coeffs.size(); ++i) poly_acc[i] += c->coeffs[i];
        } else {
          flat.push_back(c);
        }
      }
    } else if (is_poly(t)) {
      have_poly = true;
      if (poly_acc.size() < t->coeffs.size()) poly_acc.resize(t->coeffs.size());
      for (std::size_t i = 0; i < t->coeffs.size(); ++i) poly_acc[i] += t->coeffs[i];
    } else {
      flat.push_back(t);
    }
  }
  if (have_poly) {
    auto p = make_poly(std::move(poly_acc));
    if (!is_zero_poly(p) || flat.empty()) flat.insert(flat.begin(), p);
  }
  if (flat.empty()) return make_const(Complex(0.0, 0.0));
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<FnNode>(FnNode::Kind::Sum);
  n->children = std::move(flat);
  return n;
}

inline std::vector<Complex> poly_mul(const std::vector<Complex>& p,
                                     const std::vector<Complex>& q) {
  std::vector<Complex> r(p.size() + q.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

inline NodePtr make_product(std::vector<NodePtr> factors) {
  std::vector<NodePtr> flat;
  std::vector<Complex> poly_acc{Complex(1.0, 0.0)};
  for (auto& f : factors) {
    std::vector<NodePtr> fs =
        f->kind == FnNode::Kind::Product ? f->children : std::vector<NodePtr>{f};
    for (auto& c : fs) {
      if (is_zero_poly(c)) return make_const(Complex(0.0, 0.0));
      if (is_poly(c) && poly_acc.size() + c->coeffs.size() - 2 < kMaxPolyDegree) {
        poly_acc = poly_mul(poly_acc, c->coeffs);
      } else if (is_one_poly(c)) {
        // drop
      } else {
        flat.push_back(c);
      }
    }
  }
  auto p = make_poly(std::move(poly_acc));
  if (!is_one_poly(p) || flat.empty()) flat.insert(flat.begin(), p);
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<FnNode>(FnNode::Kind::Product);
  n->children = std::move(flat);
  return n;
}

// ---------------------------------------------------------------------------
// Tree transforms

// The reflected companion  f~(z) = conj(f(conj(z)))  is again representable:
// conjugate every scalar in the tree.  Needed by the derivative of the
// reflection product.
inline NodePtr conj_reflect(const NodePtr& n) {
  switch (n->kind) {
    case FnNode::Kind::Polynomial: {
      std::vector<Complex> c(n->coeffs.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::conj(n->coeffs[i]);
      return make_poly(std::move(c));
    }
    case FnNode::Kind::Exp:
      return make_exp(conj_reflect(n->children[0]));
    case FnNode::Kind::Sum: {
      std::vector<NodePtr> ch;
      ch.reserve(n->children.size());
      for (auto& c : n->children) ch.push_back(conj_reflect(c));
      return make_sum(std::move(ch));
    }
    case FnNode::Kind::Product: {
      std::vector<NodePtr> ch;
      ch.reserve(n->children.size());
      for (auto& c : n->children) ch.push_back(conj_reflect(c));
      return make_product(std::move(ch));
    }
    case FnNode::Kind::Affine:
      return make_affine(std::conj(n->aff_a), std::conj(n->aff_b),
                         conj_reflect(n->children[0]));
    case FnNode::Kind::ReflectSym:
      // f * f~ reflects to itself.
      return n;
  }
  throw Error(ErrorCode::InvalidArgument, "bad node kind");
}

inline NodePtr derivative_node(const NodePtr& n) {
  switch (n->kind) {
    case FnNode::Kind::Polynomial: {
      if (n->coeffs.size() == 1) return make_const(Complex(0.0, 0.0));
      std::vector<Complex> d(n->coeffs.size() - 1);
      for (std::size_t i = 1; i < n->coeffs.size(); ++i)
        d[i - 1] = n->coeffs[i] * static_cast<double>(i);
      return make_poly(std::move(d));
    }
    case FnNode::Kind::Exp:
      return make_product({derivative_node(n->children[0]), n});
    case FnNode::Kind::Sum: {
      std::vector<NodePtr> ch;
      for (auto& c : n->children) {
        auto d = derivative_node(c);
        if (!is_zero_poly(d)) ch.push_back(d);
      }
      return make_sum(std::move(ch));
    }
    case FnNode::Kind::Product: {
      std::vector<NodePtr> terms;
      for (std::size_t i = 0; i < n->children.size(); ++i) {
        auto di = derivative_node(n->children[i]);
        if (is_zero_poly(di)) continue;
        std::vector<NodePtr> fac;
        for (std::size_t j = 0; j < n->children.size(); ++j)
          fac.push_back(j == i ? di : n->children[j]);
        terms.push_back(make_product(std::move(fac)));
      }
      return make_sum(std::move(terms));
    }
    case FnNode::Kind::Affine:
      return make_product({make_const(n->aff_a),
                           make_affine(n->aff_a, n->aff_b, derivative_node(n->children[0]))});
    case FnNode::Kind::ReflectSym: {
      // (f * f~)' = f' * f~ + f * (f')~
      const auto& f = n->children[0];
      auto df = derivative_node(f);
      return make_sum({make_product({df, conj_reflect(f)}),
                       make_product({f, conj_reflect(df)})});
    }
  }
  throw Error(ErrorCode::InvalidArgument, "bad node kind");
}

// ---------------------------------------------------------------------------
// Evaluation

inline ScaledComplex eval_node(const FnNode& n, Complex z) {
  switch (n.kind) {
    case FnNode::Kind::Polynomial: {
      ScaledComplex acc = ScaledComplex::from(n.coeffs.back());
      const ScaledComplex zs = ScaledComplex::from(z);
      for (std::size_t i = n.coeffs.size(); i-- > 1;)
        acc = acc * zs + ScaledComplex::from(n.coeffs[i - 1]);
      return acc;
    }
    case FnNode::Kind::Exp: {
      // exp of a value that itself overflows double range is out of scope.
      const Complex w = eval_node(*n.children[0], z).to_complex();
      return scaled_exp(w);
    }
    case FnNode::Kind::Sum: {
      ScaledComplex acc = ScaledComplex::zero();
      for (auto& c : n.children) acc = acc + eval_node(*c, z);
      return acc;
    }
    case FnNode::Kind::Product: {
      ScaledComplex acc = ScaledComplex::from(Complex(1.0, 0.0));
      for (auto& c : n.children) {
        acc = acc * eval_node(*c, z);
        if (acc.is_zero()) return acc;
      }
      return acc;
    }
    case FnNode::Kind::Affine:
      return eval_node(*n.children[0], n.aff_a * z + n.aff_b);
    case FnNode::Kind::ReflectSym: {
      const ScaledComplex v = eval_node(*n.children[0], z);
      const ScaledComplex w = eval_node(*n.children[0], std::conj(z));
      return v * w.conj();
    }
  }
  throw Error(ErrorCode::InvalidArgument, "bad node kind");
}

// ---------------------------------------------------------------------------
// AnalyticFn: immutable tree + declared domain.

class AnalyticFn {
 public:
  AnalyticFn() : node_(make_const(Complex(0.0, 0.0))), domain_() {}
  explicit AnalyticFn(NodePtr node, Disk domain = Disk())
      : node_(std::move(node)), domain_(domain) {}

  const NodePtr& node() const { return node_; }
  const Disk& domain() const { return domain_; }

  AnalyticFn with_domain(Disk d) const { return AnalyticFn(node_, d); }

  // Exact symbolic derivative; same declared domain.
  AnalyticFn derivative() const { return AnalyticFn(derivative_node(node_), domain_); }

  ScaledComplex eval_scaled(Complex z) const {
    if (!domain_.contains(z))
      throw Error(ErrorCode::DomainExceeded, "evaluation point outside declared domain");
    return eval_node(*node_, z);
  }

  // Public evaluation: plain complex, Overflow if not representable.
  Complex eval(Complex z) const { return eval_scaled(z).to_complex(); }

 private:
  NodePtr node_;
  Disk domain_;
};

inline AnalyticFn deriv(const AnalyticFn& f) { return f.derivative(); }

inline Complex eval(const AnalyticFn& f, Complex z) { return f.eval(z); }

// Rescaled function g(z) = f(c + rho*z); the declared domain transforms
// along (preimage of f's domain).
inline AnalyticFn rescaled(const AnalyticFn& f, Complex c, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidArgument, "rescale factor must be positive");
  Disk d((f.domain().center - c) / rho, f.domain().radius / rho);
  return AnalyticFn(make_affine(Complex(rho, 0.0), c, f.node()), d);
}

// ---------------------------------------------------------------------------
// Spherical derivative  f#(z) = |f'(z)| / (1 + |f(z)|^2).
//
// Pairs a function with its derivative tree so scans build the derivative
// once.  The quotient is formed in log space: |f| may be e^{+-4000}.

class SphericalEvaluator {
 public:
  explicit SphericalEvaluator(const AnalyticFn& f) : f_(f), df_(f.derivative()) {}

  const AnalyticFn& fn() const { return f_; }
  const AnalyticFn& dfn() const { return df_; }

  double operator()(Complex z) const {
    const ScaledComplex fv = f_.eval_scaled(z);
    const ScaledComplex dv = df_.eval_scaled(z);
    if (dv.is_zero()) return 0.0;
    const double log_num = dv.log_abs();
    const double log_den = fv.is_zero() ? 0.0 : softplus(2.0 * fv.log_abs());
    const double r = std::exp(log_num - log_den);
    if (!std::isfinite(r)) throw Error(ErrorCode::Overflow, "spherical derivative overflow");
    return r;
  }

 private:
  AnalyticFn f_;
  AnalyticFn df_;
};

inline double spherical_derivative(const AnalyticFn& f, Complex z) {
  return SphericalEvaluator(f)(z);
}

// ---------------------------------------------------------------------------
// Structural equality (used by the DSL round-trip tests).

inline bool node_equal(const NodePtr& x, const NodePtr& y) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case FnNode::Kind::Polynomial:
      return x->coeffs == y->coeffs;
    case FnNode::Kind::Affine:
      if (x->aff_a != y->aff_a || x->aff_b != y->aff_b) return false;
      [[fallthrough]];
    case FnNode::Kind::Exp:
    case FnNode::Kind::ReflectSym:
    case FnNode::Kind::Sum:
    case FnNode::Kind::Product: {
      if (x->children.size() != y->children.size()) return false;
      for (std::size_t i = 0; i < x->children.size(); ++i)
        if (!node_equal(x->children[i], y->children[i])) return false;
      return true;
    }
  }
  return false;
}

}  // namespace nflab

#ifndef MCHAIN_DERHAM_HPP
#define MCHAIN_DERHAM_HPP

#include "mchain/chains.hpp"

#include <map>

namespace mchain {

struct UnboundedSupport : std::runtime_error {
    UnboundedSupport() : std::runtime_error("form support is not bounded") {}
};
struct WindowTooLarge : std::runtime_error {
    WindowTooLarge() : std::runtime_error("window leaves the properness region") {}
};

/// Sparse polynomial with rational coefficients.
struct Polynomial {
    int vars = 0;
    std::map<std::vector<int>, Q> coeffs;

    static Polynomial constant(int vars, const Q& c);
    static Polynomial variable(int vars, int i);
    bool is_zero() const;
    Q eval(const Vec& x) const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator-(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial pscale(const Q& c, Polynomial p);
Polynomial partial(const Polynomial& p, int i);
/// Substitution x = A u + b.
Polynomial substitute(const Polynomial& p, const AffineMap& f);

/// Polynomial differential form on R^ambient, stored on the strictly
/// increasing index basis.
struct PolyForm {
    int ambient = 0;
    int degree = 0;
    std::map<std::vector<int>, Polynomial> comps;

    static PolyForm unit(int ambient);                       // 1
    static PolyForm monomial(int ambient, Polynomial coeff,
                             std::vector<int> indices);      // coeff dx_I
    bool is_zero() const;
};

PolyForm operator+(const PolyForm& a, const PolyForm& b);
PolyForm fscale(const Q& c, PolyForm w);
PolyForm d_form(const PolyForm& w);
PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm pullback_form(const AffineMap& f, const PolyForm& w);

/// Exact integral of a top-degree form over an oriented polyhedron (in its
/// flat), by fan triangulation from a vertex and the closed-form
/// monomial-over-simplex values. Throws UnboundedSupport when unbounded.
Q integrate(const PolyForm& w, const Polyhedron& p);
Q integrate(const PolyForm& w, const CornersSpace& v);

struct StokesCheck {
    Q lhs;  // integral of d omega over V
    Q rhs;  // integral of the restriction over the boundary
    bool equal;
};
StokesCheck stokes_check(const PolyForm& w, const CornersSpace& v);

/// Generator [V, n, s, t, omega] with the form given per piece in the
/// piece's ambient coordinates.
struct DRGenerator {
    CornersSpace space;
    int n = 0;
    SpaceMap s;
    SpaceMap t;
    std::vector<PolyForm> forms;
    int form_degree = 0;
    Properness properness;

    int degree() const { return space.dim - n - form_degree; }
};

struct DRChain {
    int degree = 0;
    Target target;
    std::vector<std::pair<Q, DRGenerator>> terms;
};

DRGenerator make_dr_generator(CornersSpace v, int n, SpaceMap s, SpaceMap t,
                              std::vector<PolyForm> forms, int form_degree);
DRChain make_dr_chain(int degree, Target target, std::vector<std::pair<Q, DRGenerator>> terms);
DRChain add(const DRChain& a, const DRChain& b);
DRChain negate(DRChain a);

/// Two-term boundary: the facet restriction plus the exterior
/// derivative term with sign (-1)^{n+k}.
DRChain dr_boundary(const DRChain& a);

/// Decorates an integral or rational chain with the unit form.
DRChain to_derham(const Chain& a);

/// Test functional: sum over terms of the exact integral of
/// (s,t)^* eta wedge omega over the window preimage.
Q pair(const DRChain& a, const PolyForm& eta, const std::vector<Halfspace>& window);

}  // namespace mchain

#endif

#include "mchain/derham.hpp"

#include <algorithm>

namespace mchain {

Polynomial Polynomial::constant(int vars, const Q& c) {
    Polynomial p;
    p.vars = vars;
    if (c != 0) p.coeffs[std::vector<int>(vars, 0)] = c;
    return p;
}

Polynomial Polynomial::variable(int vars, int i) {
    Polynomial p;
    p.vars = vars;
    std::vector<int> e(vars, 0);
    e[i] = 1;
    p.coeffs[std::move(e)] = 1;
    return p;
}

bool Polynomial::is_zero() const { return coeffs.empty(); }

Q Polynomial::eval(const Vec& x) const {
    Q total = 0;
    for (const auto& [e, c] : coeffs) {
        Q term = c;
        for (int i = 0; i < vars; ++i)
            for (int j = 0; j < e[i]; ++j) term *= x[i];
        total += term;
    }
    return total;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (a.vars != b.vars) throw std::invalid_argument("polynomial vars");
    Polynomial out = a;
    for (const auto& [e, c] : b.coeffs) {
        auto it = out.coeffs.find(e);
        if (it == out.coeffs.end()) {
            out.coeffs[e] = c;
        } else {
            it->second += c;
            if (it->second == 0) out.coeffs.erase(it);
        }
    }
    return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + pscale(Q(-1), b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.vars != b.vars) throw std::invalid_argument("polynomial vars");
    Polynomial out;
    out.vars = a.vars;
    for (const auto& [ea, ca] : a.coeffs)
        for (const auto& [eb, cb] : b.coeffs) {
            std::vector<int> e(a.vars);
            for (int i = 0; i < a.vars; ++i) e[i] = ea[i] + eb[i];
            Q& slot = out.coeffs[e];
            slot += ca * cb;
            if (slot == 0) out.coeffs.erase(e);
        }
    return out;
}

Polynomial pscale(const Q& c, Polynomial p) {
    if (c == 0) return Polynomial::constant(p.vars, Q(0));
    for (auto& [e, v] : p.coeffs) v *= c;
    return p;
}

Polynomial partial(const Polynomial& p, int i) {
    Polynomial out;
    out.vars = p.vars;
    for (const auto& [e, c] : p.coeffs) {
        if (e[i] == 0) continue;
        std::vector<int> e2 = e;
        e2[i] -= 1;
        out.coeffs[std::move(e2)] = c * e[i];
    }
    return out;
}

Polynomial substitute(const Polynomial& p, const AffineMap& f) {
    int dom = f.domain_dim();
    Polynomial out = Polynomial::constant(dom, Q(0));
    // images of the variables as degree-1 polynomials in u
    std::vector<Polynomial> imgs;
    for (int i = 0; i < p.vars; ++i) {
        Polynomial g = Polynomial::constant(dom, f.translation[i]);
        for (int j = 0; j < dom; ++j)
            if (f.linear(i, j) != 0)
                g = g + pscale(f.linear(i, j), Polynomial::variable(dom, j));
        imgs.push_back(std::move(g));
    }
    for (const auto& [e, c] : p.coeffs) {
        Polynomial term = Polynomial::constant(dom, c);
        for (int i = 0; i < p.vars; ++i)
            for (int j = 0; j < e[i]; ++j) term = term * imgs[i];
        out = out + term;
    }
    return out;
}

PolyForm PolyForm::unit(int ambient) {
    PolyForm w;
    w.ambient = ambient;
    w.degree = 0;
    w.comps[{}] = Polynomial::constant(ambient, Q(1));
    return w;
}

PolyForm PolyForm::monomial(int ambient, Polynomial coeff, std::vector<int> indices) {
    PolyForm w;
    w.ambient = ambient;
    w.degree = static_cast<int>(indices.size());
    for (size_t i = 0; i + 1 < indices.size(); ++i)
        if (indices[i] >= indices[i + 1])
            throw std::invalid_argument("form indices must strictly increase");
    if (!coeff.is_zero()) w.comps[std::move(indices)] = std::move(coeff);
    return w;
}

bool PolyForm::is_zero() const {
    for (const auto& [i, p] : comps)
        if (!p.is_zero()) return false;
    return true;
}

PolyForm operator+(const PolyForm& a, const PolyForm& b) {
    if (a.ambient != b.ambient || a.degree != b.degree)
        throw std::invalid_argument("form shape");
    PolyForm out = a;
    for (const auto& [i, p] : b.comps) {
        auto it = out.comps.find(i);
        if (it == out.comps.end()) {
            out.comps[i] = p;
        } else {
            it->second = it->second + p;
            if (it->second.is_zero()) out.comps.erase(it);
        }
    }
    return out;
}

PolyForm fscale(const Q& c, PolyForm w) {
    if (c == 0) return {w.ambient, w.degree, {}};
    for (auto& [i, p] : w.comps) p = pscale(c, std::move(p));
    return w;
}

namespace {

// Sorts indices, returns the permutation sign, zero on repeats.
int normalize_indices(std::vector<int>& idx) {
    int sign = 1;
    for (size_t i = 1; i < idx.size(); ++i) {
        size_t j = i;
        while (j > 0 && idx[j - 1] > idx[j]) {
            std::swap(idx[j - 1], idx[j]);
            sign = -sign;
            --j;
        }
    }
    for (size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return 0;
    return sign;
}

void accumulate(PolyForm& w, std::vector<int> idx, const Polynomial& coeff) {
    if (coeff.is_zero()) return;
    int sign = normalize_indices(idx);
    if (sign == 0) return;
    Polynomial signed_coeff = sign < 0 ? pscale(Q(-1), coeff) : coeff;
    auto it = w.comps.find(idx);
    if (it == w.comps.end()) {
        w.comps[std::move(idx)] = std::move(signed_coeff);
    } else {
        it->second = it->second + signed_coeff;
        if (it->second.is_zero()) w.comps.erase(it);
    }
}

}  // namespace

PolyForm d_form(const PolyForm& w) {
    PolyForm out;
    out.ambient = w.ambient;
    out.degree = w.degree + 1;
    for (const auto& [idx, coeff] : w.comps) {
        for (int j = 0; j < w.ambient; ++j) {
            Polynomial dc = partial(coeff, j);
            if (dc.is_zero()) continue;
            std::vector<int> nidx;
            nidx.push_back(j);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            accumulate(out, std::move(nidx), dc);
        }
    }
    return out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    if (a.ambient != b.ambient) throw std::invalid_argument("form ambient");
    PolyForm out;
    out.ambient = a.ambient;
    out.degree = a.degree + b.degree;
    for (const auto& [ia, pa] : a.comps)
        for (const auto& [ib, pb] : b.comps) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            accumulate(out, std::move(idx), pa * pb);
        }
    return out;
}

PolyForm pullback_form(const AffineMap& f, const PolyForm& w) {
    if (f.codomain_dim() != w.ambient) throw std::invalid_argument("pullback shape");
    int dom = f.domain_dim();
    PolyForm out;
    out.ambient = dom;
    out.degree = w.degree;
    int p = w.degree;
    if (p > dom) return out;
    // iterate over increasing index tuples J of the domain
    std::vector<int> j(p);
    for (int i = 0; i < p; ++i) j[i] = i;
    auto advance = [&]() {
        int i = p - 1;
        while (i >= 0 && j[i] == dom - p + i) --i;
        if (i < 0) return false;
        ++j[i];
        for (int l = i + 1; l < p; ++l) j[l] = j[l - 1] + 1;
        return true;
    };
    if (p == 0) {
        for (const auto& [idx, coeff] : w.comps) out.comps[{}] = substitute(coeff, f);
        if (out.comps.count({}) && out.comps[{}].is_zero()) out.comps.clear();
        return out;
    }
    do {
        Polynomial total = Polynomial::constant(dom, Q(0));
        for (const auto& [idx, coeff] : w.comps) {
            Mat minor(p, p);
            for (int r = 0; r < p; ++r)
                for (int c = 0; c < p; ++c) minor(r, c) = f.linear(idx[r], j[c]);
            Q dt = det(minor);
            if (dt == 0) continue;
            total = total + pscale(dt, substitute(coeff, f));
        }
        if (!total.is_zero()) out.comps[j] = std::move(total);
    } while (advance());
    return out;
}

namespace {

// Vertices in the ambient coordinates of p's flat.
std::vector<Vec> vertices(const Polyhedron& p) {
    int d = p.flat.dim();
    if (d == 0) return {p.flat.base};
    Measure m = measure(p);
    if (m.empty) return {};
    std::vector<Vec> out;
    for (const auto& f : facets(p))
        for (const auto& v : vertices(f.poly)) out.push_back(v);
    std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) { return compare(a, b) < 0; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

mpz_class factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// integral of a monomial x^e over the standard simplex in R^d
Q monomial_over_simplex(const std::vector<int>& e) {
    int d = static_cast<int>(e.size());
    mpz_class num = 1;
    int total = 0;
    for (int i = 0; i < d; ++i) {
        num *= factorial(e[i]);
        total += e[i];
    }
    Q r(num, factorial(total + d));
    r.canonicalize();
    return r;
}

// Triangulation of a bounded full-dimensional polytope {ineqs} in R^d by
// recursive fans: cone the lexicographically least vertex over the facet
// triangulations. Simplices come back as (d+1)-tuples of points.
std::vector<std::vector<Vec>> triangulate(const std::vector<Halfspace>& ineqs, int d) {
    if (d == 0) return {{Vec{}}};
    Polyhedron local;
    local.flat = full_flat(d);
    local.ineqs = prune_redundant(ineqs, d);
    std::vector<Vec> verts = vertices(local);
    if (verts.empty()) return {};
    const Vec& apex = verts[0];
    std::vector<std::vector<Vec>> out;
    for (const auto& f : facets(local)) {
        if (dot(f.outward_normal, apex) == dot(f.outward_normal, f.poly.flat.base))
            continue;  // apex lies on this facet's hyperplane
        Polyhedron facet_local;
        facet_local.flat = full_flat(d - 1);
        facet_local.ineqs = f.poly.ineqs;
        for (const auto& sub : triangulate(facet_local.ineqs, d - 1)) {
            std::vector<Vec> simplex;
            simplex.push_back(apex);
            for (const auto& v : sub) simplex.push_back(from_flat_coords(f.poly.flat, v));
            out.push_back(std::move(simplex));
        }
    }
    return out;
}

Q integrate_poly_over_polytope(const Polynomial& g, const Polyhedron& p) {
    int d = p.flat.dim();
    if (d == 0) throw std::invalid_argument("integrating a volume form over a point");
    std::vector<Halfspace> ineqs = prune_redundant(p.ineqs, d);
    if (!is_bounded(ineqs, d)) throw UnboundedSupport{};
    Measure m = affine_hull_dim(ineqs, d) == d ? Measure{false, d} : Measure{};
    if (m.empty) return 0;

    Q total = 0;
    for (const auto& simplex : triangulate(ineqs, d)) {
        Mat lin(d, d);
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < d; ++r) lin(r, c) = simplex[c + 1][r] - simplex[0][r];
        Q dt = det(lin);
        if (dt == 0) continue;
        Polynomial gt = substitute(g, AffineMap{lin, simplex[0]});
        Q integral = 0;
        for (const auto& [e, coeff] : gt.coeffs) integral += coeff * monomial_over_simplex(e);
        total += abs(dt) * integral;
    }
    return total;
}

}  // namespace

Q integrate(const PolyForm& w, const Polyhedron& p) {
    int d = p.flat.dim();
    PolyForm local = pullback_form(embedding(p.flat), w);
    if (local.degree != d) throw std::invalid_argument("not a top-degree form");
    if (local.is_zero()) return 0;
    if (d == 0) {
        auto it = local.comps.find({});
        return it == local.comps.end() ? Q(0) : Q(p.orient) * it->second.eval({});
    }
    std::vector<int> top(d);
    for (int i = 0; i < d; ++i) top[i] = i;
    auto it = local.comps.find(top);
    if (it == local.comps.end()) return 0;
    return Q(p.orient) * integrate_poly_over_polytope(it->second, p);
}

Q integrate(const PolyForm& w, const CornersSpace& v) {
    Q total = 0;
    for (const auto& p : v.pieces) total += integrate(w, p);
    return total;
}

StokesCheck stokes_check(const PolyForm& w, const CornersSpace& v) {
    StokesCheck out;
    out.lhs = integrate(d_form(w), v);
    out.rhs = 0;
    if (v.dim >= 1) {
        Boundary b = boundary(v);
        for (const auto& f : b.space.pieces) out.rhs += integrate(w, f);
    }
    out.equal = out.lhs == out.rhs;
    return out;
}

DRGenerator make_dr_generator(CornersSpace v, int n, SpaceMap s, SpaceMap t,
                              std::vector<PolyForm> forms, int form_degree) {
    if (forms.size() != v.pieces.size()) throw DimensionMismatch("one form per piece");
    if (s.target.kind != Target::Kind::Euclidean || s.target.ambient != n)
        throw DimensionMismatch("reference map must land in R^n");
    validate_map(v, s);
    validate_map(v, t);
    DRGenerator g;
    g.properness.proper = true;
    for (size_t i = 0; i < v.pieces.size(); ++i) {
        if (forms[i].ambient != v.pieces[i].flat.ambient || forms[i].degree != form_degree)
            throw DimensionMismatch("form shape");
        // support over-approximated by the whole piece unless the pullback
        // to the flat vanishes identically
        if (pullback_form(embedding(v.pieces[i].flat), forms[i]).is_zero()) continue;
        Properness pr = recession_proper(
            v.pieces[i], compose(s.maps[i], embedding(v.pieces[i].flat)), NearOrigin{});
        if (!pr.proper) throw NotProper{};
        if (pr.radius && (!g.properness.radius || *pr.radius < *g.properness.radius))
            g.properness.radius = pr.radius;
    }
    g.space = std::move(v);
    g.n = n;
    g.s = std::move(s);
    g.t = std::move(t);
    g.forms = std::move(forms);
    g.form_degree = form_degree;
    return g;
}

DRChain make_dr_chain(int degree, Target target, std::vector<std::pair<Q, DRGenerator>> terms) {
    DRChain c;
    c.degree = degree;
    c.target = std::move(target);
    for (auto& [a, g] : terms) {
        if (a == 0) continue;
        if (g.degree() != degree) throw DimensionMismatch("term degree mismatch");
        if (!(g.t.target == c.target)) throw TargetMismatch("term target mismatch");
        c.terms.push_back({std::move(a), std::move(g)});
    }
    return c;
}

DRChain add(const DRChain& a, const DRChain& b) {
    if (a.degree != b.degree) throw DimensionMismatch("degree mismatch");
    if (!(a.target == b.target)) throw TargetMismatch("target mismatch");
    DRChain c = a;
    c.terms.insert(c.terms.end(), b.terms.begin(), b.terms.end());
    return c;
}

DRChain negate(DRChain a) {
    for (auto& [c, g] : a.terms) c = -c;
    return a;
}

DRChain dr_boundary(const DRChain& a) {
    DRChain out;
    out.degree = a.degree - 1;
    out.target = a.target;
    for (const auto& [c, g] : a.terms) {
        int nk = g.n + g.degree();
        // facet term
        if (g.space.dim >= 1) {
            Boundary b = boundary(g.space);
            if (!b.space.pieces.empty()) {
                SpaceMap s2, t2;
                s2.target = g.s.target;
                t2.target = g.t.target;
                std::vector<PolyForm> forms;
                for (int parent : b.parent) {
                    s2.maps.push_back(g.s.maps[parent]);
                    t2.maps.push_back(g.t.maps[parent]);
                    forms.push_back(g.forms[parent]);
                }
                out.terms.push_back(
                    {c, make_dr_generator(std::move(b.space), g.n, std::move(s2), std::move(t2),
                                          std::move(forms), g.form_degree)});
            }
        }
        // exterior-derivative term
        std::vector<PolyForm> dforms;
        bool nonzero = false;
        for (const auto& w : g.forms) {
            PolyForm dw = d_form(w);
            nonzero |= !dw.is_zero();
            dforms.push_back(std::move(dw));
        }
        if (nonzero) {
            Q sign = (nk % 2) ? Q(-1) : Q(1);
            out.terms.push_back({c * sign, make_dr_generator(g.space, g.n, g.s, g.t,
                                                             std::move(dforms),
                                                             g.form_degree + 1)});
        }
    }
    return out;
}

DRChain to_derham(const Chain& a) {
    DRChain out;
    out.degree = a.degree;
    out.target = a.target;
    for (const auto& [c, g] : a.terms) {
        std::vector<PolyForm> forms;
        for (const auto& p : g.space.pieces) forms.push_back(PolyForm::unit(p.flat.ambient));
        out.terms.push_back({c, make_dr_generator(g.space, g.n, g.s, g.t, std::move(forms), 0)});
    }
    return out;
}

Q pair(const DRChain& a, const PolyForm& eta, const std::vector<Halfspace>& window) {
    int n = a.terms.empty() ? 0 : a.terms[0].second.n;
    for (const auto& [c, g] : a.terms)
        if (g.n != n) throw DimensionMismatch("pair needs a common reference dimension");
    // window must stay inside every properness certificate
    for (const auto& [c, g] : a.terms) {
        if (!g.properness.radius) continue;
        for (int i = 0; i < n; ++i)
            for (int s : {1, -1}) {
                Vec obj(n);
                obj[i] = s;
                LpResult r = optimize_over(window, n, obj, true);
                if (r.status != LpStatus::Optimal || r.value >= *g.properness.radius)
                    throw WindowTooLarge{};
            }
    }
    int m = a.target.ambient;
    Q total = 0;
    for (const auto& [c, g] : a.terms) {
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            const Polyhedron& p = g.space.pieces[i];
            // combined (s, t) on the piece ambient
            AffineMap both;
            both.linear = Mat(n + m, g.s.maps[i].linear.cols);
            both.translation = Vec(n + m);
            for (int r = 0; r < n; ++r) {
                for (int cc = 0; cc < both.linear.cols; ++cc)
                    both.linear(r, cc) = g.s.maps[i].linear(r, cc);
                both.translation[r] = g.s.maps[i].translation[r];
            }
            for (int r = 0; r < m; ++r) {
                for (int cc = 0; cc < both.linear.cols; ++cc)
                    both.linear(n + r, cc) = g.t.maps[i].linear(r, cc);
                both.translation[n + r] = g.t.maps[i].translation[r];
            }
            PolyForm integrand = wedge(pullback_form(both, eta), g.forms[i]);
            if (pullback_form(embedding(p.flat), integrand).is_zero()) continue;

            Polyhedron region = p;
            AffineMap scomp = compose(g.s.maps[i], embedding(p.flat));
            for (const auto& h : window) {
                Vec row(p.flat.dim());
                Q cst = h.offset;
                for (int xi = 0; xi < n; ++xi) {
                    if (h.normal[xi] == 0) continue;
                    for (int j = 0; j < p.flat.dim(); ++j)
                        row[j] += h.normal[xi] * scomp.linear(xi, j);
                    cst -= h.normal[xi] * scomp.translation[xi];
                }
                region.ineqs.push_back({std::move(row), std::move(cst), false});
            }
            Measure mm = measure(region);
            if (mm.empty || mm.dim < region.flat.dim()) continue;
            if (!is_bounded(region.ineqs, region.flat.dim())) throw WindowTooLarge{};
            total += c * integrate(integrand, region);
        }
    }
    return total;
}

}  // namespace mchain

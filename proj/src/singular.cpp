#include "mchain/singular.hpp"

#include "mchain/corners.hpp"

#include <algorithm>

namespace mchain {

namespace {

int compare_affine(const AffineMap& a, const AffineMap& b) {
    int c = compare(a.linear, b.linear);
    if (c != 0) return c;
    return compare(a.translation, b.translation);
}

}  // namespace

SingularChain make_singular(CoefficientRing ring, int k, Target target,
                            std::vector<std::pair<Q, AffineMap>> terms) {
    if (k < 0) throw std::invalid_argument("negative simplex dimension");
    SingularChain c;
    c.ring = ring;
    c.k = k;
    c.target = std::move(target);
    SimplexScheme scheme = simplex(k);
    std::sort(terms.begin(), terms.end(),
              [](const auto& x, const auto& y) { return compare_affine(x.second, y.second) < 0; });
    for (auto& [a, sigma] : terms) {
        Q na = ring_normalize(ring, a);
        if (na == 0) continue;
        if (sigma.domain_dim() != k + 1 || sigma.codomain_dim() != c.target.ambient)
            throw DimensionMismatch("singular simplex shape");
        CornersSpace piece = make_corners({scheme.simplex}, k);
        validate_map(piece, SpaceMap{{sigma}, c.target});
        if (!c.terms.empty() && compare_affine(c.terms.back().second, sigma) == 0)
            c.terms.back().first = ring_normalize(ring, c.terms.back().first + na);
        else
            c.terms.push_back({std::move(na), std::move(sigma)});
    }
    std::erase_if(c.terms, [](const auto& t) { return t.first == 0; });
    return c;
}

SingularChain add(const SingularChain& a, const SingularChain& b) {
    if (!(a.ring == b.ring) || a.k != b.k) throw std::invalid_argument("singular add mismatch");
    if (!(a.target == b.target)) throw TargetMismatch("singular add target");
    auto terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return make_singular(a.ring, a.k, a.target, std::move(terms));
}

SingularChain negate(SingularChain a) {
    for (auto& [c, s] : a.terms) c = ring_normalize(a.ring, -c);
    return a;
}

bool identical(const SingularChain& a, const SingularChain& b) {
    if (a.k != b.k || a.terms.size() != b.terms.size()) return false;
    for (size_t i = 0; i < a.terms.size(); ++i) {
        if (a.terms[i].first != b.terms[i].first) return false;
        if (compare_affine(a.terms[i].second, b.terms[i].second) != 0) return false;
    }
    return true;
}

SingularChain singular_boundary(const SingularChain& c) {
    if (c.k == 0) throw ZeroDegree{};
    SimplexScheme scheme = simplex(c.k);
    std::vector<std::pair<Q, AffineMap>> terms;
    for (const auto& [a, sigma] : c.terms)
        for (int j = 0; j <= c.k; ++j)
            terms.push_back({j % 2 ? -a : a, compose(sigma, scheme.face_maps[j])});
    return make_singular(c.ring, c.k - 1, c.target, std::move(terms));
}

SingularChain barycentric(const SingularChain& c) {
    SimplexScheme scheme = simplex(c.k);
    std::vector<std::pair<Q, AffineMap>> terms;
    for (const auto& [a, sigma] : c.terms)
        for (size_t j = 0; j < scheme.subdivision.size(); ++j)
            terms.push_back(
                {a * scheme.subdivision_signs[j], compose(sigma, scheme.subdivision[j])});
    return make_singular(c.ring, c.k, c.target, std::move(terms));
}

SingularChain singular_pushforward(const AffineMap& f, const Target& to,
                                   const SingularChain& c) {
    std::vector<std::pair<Q, AffineMap>> terms;
    for (const auto& [a, sigma] : c.terms) terms.push_back({a, compose(f, sigma)});
    return make_singular(c.ring, c.k, to, std::move(terms));
}

Chain to_mchain(const SingularChain& c) {
    SimplexScheme scheme = simplex(c.k);
    Chain out = zero_chain(c.ring, ChainMode::Integral, c.k, c.target);
    for (const auto& [a, sigma] : c.terms) {
        CornersSpace v = make_corners({scheme.simplex}, c.k);
        SpaceMap s{{AffineMap{Mat(0, c.k + 1), Vec{}}}, Target::euclidean(0)};
        SpaceMap t{{sigma}, c.target};
        out.terms.push_back({a, make_generator(std::move(v), 0, std::move(s), std::move(t))});
    }
    return out;
}

Homotopy make_homotopy(std::vector<Q> breakpoints, std::vector<AffineMap> maps) {
    if (breakpoints.size() != maps.size() + 1 || maps.empty())
        throw std::invalid_argument("homotopy shape");
    if (breakpoints.front() != 0 || breakpoints.back() != 1)
        throw std::invalid_argument("homotopy must cover [0,1]");
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("homotopy breakpoints not increasing");
    int dom = maps[0].domain_dim();
    for (const auto& m : maps)
        if (m.domain_dim() != dom) throw DimensionMismatch("homotopy slab shapes differ");
    // continuity across the breakpoints: maps agree on the slice tau = c_i
    for (size_t i = 0; i + 1 < maps.size(); ++i) {
        const AffineMap& a = maps[i];
        const AffineMap& b = maps[i + 1];
        const Q& tau = breakpoints[i + 1];
        for (int r = 0; r < a.linear.rows; ++r) {
            for (int j = 0; j < dom - 1; ++j)
                if (a.linear(r, j) != b.linear(r, j))
                    throw std::invalid_argument("homotopy slabs disagree on a breakpoint");
            Q ca = a.linear(r, dom - 1) * tau + a.translation[r];
            Q cb = b.linear(r, dom - 1) * tau + b.translation[r];
            if (ca != cb) throw std::invalid_argument("homotopy slabs disagree on a breakpoint");
        }
    }
    return {std::move(breakpoints), std::move(maps)};
}

AffineMap homotopy_end(const Homotopy& g, bool at_one) {
    const AffineMap& m = at_one ? g.maps.back() : g.maps.front();
    Q tau = at_one ? Q(1) : Q(0);
    int dom = m.domain_dim() - 1;
    AffineMap out;
    out.linear = Mat(m.codomain_dim(), dom);
    out.translation = Vec(m.codomain_dim());
    for (int r = 0; r < m.codomain_dim(); ++r) {
        for (int j = 0; j < dom; ++j) out.linear(r, j) = m.linear(r, j);
        out.translation[r] = m.linear(r, dom) * tau + m.translation[r];
    }
    return out;
}

Chain homotopy_G(const Homotopy& g, const Target& y2, const Chain& a) {
    if (g.maps[0].domain_dim() != a.target.ambient + 1)
        throw TargetMismatch("homotopy domain does not match the chain target");
    Chain out = zero_chain(a.ring, a.mode, a.degree + 1, y2);
    for (const auto& [c, gen] : a.terms) {
        CornersSpace space;
        space.dim = gen.space.dim + 1;
        SpaceMap s2, t2;
        s2.target = gen.s.target;
        t2.target = y2;
        for (size_t i = 0; i < gen.space.pieces.size(); ++i) {
            const Polyhedron& p = gen.space.pieces[i];
            int amb = p.flat.ambient;
            for (size_t seg = 0; seg < g.maps.size(); ++seg) {
                Polyhedron q;
                q.orient = p.orient;
                q.flat.ambient = amb + 1;
                q.flat.base = p.flat.base;
                q.flat.base.push_back(0);
                for (const auto& b : p.flat.basis) {
                    Vec v = b;
                    v.push_back(0);
                    q.flat.basis.push_back(std::move(v));
                }
                Vec last(amb + 1);
                last[amb] = 1;
                q.flat.basis.push_back(std::move(last));
                for (const auto& h : p.ineqs) {
                    Vec nn = h.normal;
                    nn.push_back(0);
                    q.ineqs.push_back({std::move(nn), h.offset, h.strict});
                }
                Vec lo(p.flat.dim() + 1), hi(p.flat.dim() + 1);
                lo[p.flat.dim()] = -1;
                hi[p.flat.dim()] = 1;
                q.ineqs.push_back({std::move(lo), -g.breakpoints[seg], false});
                q.ineqs.push_back({std::move(hi), g.breakpoints[seg + 1], false});
                space.pieces.push_back(std::move(q));

                const AffineMap& sm = gen.s.maps[i];
                AffineMap s2m;
                s2m.linear = Mat(gen.n, amb + 1);
                for (int r = 0; r < gen.n; ++r)
                    for (int j = 0; j < amb; ++j) s2m.linear(r, j) = sm.linear(r, j);
                s2m.translation = sm.translation;
                s2.maps.push_back(std::move(s2m));

                // g_seg o (t x id): (v, tau) -> g_seg(t(v), tau)
                const AffineMap& tm = gen.t.maps[i];
                AffineMap txid;
                txid.linear = Mat(a.target.ambient + 1, amb + 1);
                txid.translation = Vec(a.target.ambient + 1);
                for (int r = 0; r < a.target.ambient; ++r) {
                    for (int j = 0; j < amb; ++j) txid.linear(r, j) = tm.linear(r, j);
                    txid.translation[r] = tm.translation[r];
                }
                txid.linear(a.target.ambient, amb) = 1;
                t2.maps.push_back(compose(g.maps[seg], txid));
            }
        }
        int sign = gen.space.dim % 2 ? -1 : 1;
        out.terms.push_back(
            {c * sign, make_generator(std::move(space), gen.n, std::move(s2), std::move(t2))});
    }
    return out;
}

}  // namespace mchain

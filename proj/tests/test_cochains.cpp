#include <doctest.h>

#include "mchain/cochains.hpp"

using namespace mchain;

namespace {

const CoefficientRing ZZ = CoefficientRing::integers();

Target open_interval(const Q& a, const Q& b) {
    return Target::domain(1, {{{{Q(-1)}, -a, true}, {{Q(1)}, b, true}}});
}

// [Y x [0,1], 1, pi_2 + shift, pi_1]: a degree-0 precochain on an interval.
Cochain slab_cochain(const Target& y, const Q& shift, const Q& coeff = Q(1)) {
    Polyhedron p;
    p.flat = full_flat(2);
    for (const auto& h : y.components[0]) {
        Vec n = {h.normal[0], Q(0)};
        p.ineqs.push_back({n, h.offset, true});
    }
    p.ineqs.push_back({{Q(0), Q(-1)}, Q(0), false});
    p.ineqs.push_back({{Q(0), Q(1)}, Q(1), false});
    CornersSpace v = make_corners({p}, 2);
    SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{shift}}}, Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}}}, y};
    return make_cochain(ZZ, ChainMode::Integral, CochainVariant::Precochain, 0, y,
                        {{coeff, make_cochain_generator(v, 1, s, t,
                                                        CochainVariant::Precochain)}});
}

Chain segment_chain(const Q& a, const Q& b, const Target& y, const Q& coeff = Q(1)) {
    Polyhedron p;
    p.flat = full_flat(1);
    p.ineqs = {{{Q(-1)}, -a, false}, {{Q(1)}, b, false}};
    CornersSpace v = make_corners({p}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(1)}, y};
    return make_chain(ZZ, ChainMode::Integral, 1, y, {{coeff, make_generator(v, 0, s, t)}});
}

}  // namespace

TEST_CASE("identity precocycle: valid, degree 0, d Id = 0, not provably zero") {
    Target y = open_interval(Q(0), Q(1));
    Cochain id = identity_cocycle(ZZ, ChainMode::Integral, y);
    CHECK(id.degree == 0);
    Cochain did = coboundary(id);
    CHECK(did.terms.empty());  // open sides carry no boundary
    ZeroResult r = is_zero_cochain(id);
    CHECK(!r.zero);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->multiplicity == 1);
}

TEST_CASE("constant map to a line is not a submersion") {
    Polyhedron pt;
    pt.flat.ambient = 0;
    CornersSpace v = make_corners({pt}, 0);
    Target y = open_interval(Q(-1), Q(1));
    SpaceMap s{{AffineMap{Mat(0, 0), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::constant(0, {Q(0)})}, y};
    CHECK_THROWS_AS(make_cochain_generator(v, 0, s, t, CochainVariant::Precochain),
                    NotSubmersion);
}

TEST_CASE("plane with (s,t) = (pi_2, pi_1) is a valid precochain of degree 0") {
    Polyhedron plane;
    plane.flat = full_flat(2);
    CornersSpace v = make_corners({plane}, 2);
    Target y = Target::whole_space(1);
    SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{Q(0)}}}, Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}}}, y};
    MCochainGenerator g = make_cochain_generator(v, 1, s, t, CochainVariant::Precochain);
    CHECK(g.degree() == 0);
}

TEST_CASE("interior faces matter: projections off a square are rejected") {
    Polyhedron sq;
    sq.flat = full_flat(2);
    sq.ineqs = {{{Q(-1), Q(0)}, Q(0), false},
                {{Q(1), Q(0)}, Q(1), false},
                {{Q(0), Q(-1)}, Q(0), false},
                {{Q(0), Q(1)}, Q(1), false}};
    CornersSpace v = make_corners({sq}, 2);
    Target y = Target::whole_space(1);
    SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{Q(0)}}}, Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}}}, y};
    // the closed vertical edges of the square map to points: not a submersion
    CHECK_THROWS_AS(make_cochain_generator(v, 1, s, t, CochainVariant::Precochain),
                    NotSubmersion);
}

TEST_CASE("coboundary: d of a compact generator is compact, and dd = 0") {
    Target y = open_interval(Q(-2), Q(2));
    Cochain a = slab_cochain(y, Q(-1, 3));
    // turn it into a compact-variant cochain: s = pi_2 - 1/3 is proper near 0
    std::vector<std::pair<Q, MCochainGenerator>> terms;
    for (auto [c, g] : a.terms)
        terms.push_back({c, make_cochain_generator(g.space, g.n, g.s, g.t,
                                                   CochainVariant::CompactlySupported)});
    Cochain cs = make_cochain(ZZ, ChainMode::Integral, CochainVariant::CompactlySupported, 0, y,
                              terms);
    Cochain dcs = coboundary(cs);
    CHECK(dcs.degree == 1);
    for (const auto& [c, g] : dcs.terms) CHECK(g.variant == CochainVariant::CompactlySupported);
    CHECK(is_zero_cochain(coboundary(dcs)).zero);
    CHECK(is_zero_cochain(coboundary(coboundary(a))).zero);
}

TEST_CASE("pullback: identities and functoriality") {
    Target y2 = open_interval(Q(-2), Q(2));
    Target y1 = open_interval(Q(0), Q(1));
    Target y0 = open_interval(Q(-1), Q(1));
    AffineMap f = AffineMap{Mat::from_rows({{Q(2)}}), Vec{Q(-1)}};   // y1 -> y2, x -> 2x-1
    AffineMap g = AffineMap{Mat::from_rows({{Q(1, 2)}}), Vec{Q(0)}};  // y0 -> y1 ... image (-1/2,1/2)?

    Cochain id2 = identity_cocycle(ZZ, ChainMode::Integral, y2);
    Cochain pulled = pullback(f, y1, id2);
    CHECK(equals(pulled, identity_cocycle(ZZ, ChainMode::Integral, y1)));

    Cochain a = slab_cochain(y2, Q(-1, 3));
    Cochain same = pullback(AffineMap::identity(1), y2, a);
    CHECK(equals(same, a));

    // (f o g)^* = g^* o f^*
    AffineMap g01 = AffineMap{Mat::from_rows({{Q(1, 4)}}), Vec{Q(1, 2)}};  // y0 -> y1
    Cochain two_step = pullback(g01, y0, pullback(f, y1, a));
    Cochain one_step = pullback(compose(f, g01), y0, a);
    CHECK(equals(two_step, one_step));
    (void)g;

    // pullback is a cochain map
    CHECK(equals(coboundary(pullback(f, y1, a)), pullback(f, y1, coboundary(a))));
}

TEST_CASE("open pushforward: functorial on nested boxes, rejects escapes") {
    Target small = open_interval(Q(-1, 2), Q(1, 2));
    Target mid = open_interval(Q(-1), Q(1));
    Target big = Target::whole_space(1);

    // compact generator on `small`: a diamond whose four vertices are cut
    // out by strict sides, so t = pi_1 is a submersion on every closed face
    // (the sloped edges), while s = pi_2 - 1/4 is proper near 0
    Polyhedron p;
    p.flat = full_flat(2);
    p.ineqs = {{{Q(4), Q(1)}, Q(2), false},   {{Q(-4), Q(1)}, Q(2), false},
               {{Q(4), Q(-1)}, Q(2), false},  {{Q(-4), Q(-1)}, Q(2), false},
               {{Q(1), Q(0)}, Q(1, 2), true}, {{Q(-1), Q(0)}, Q(1, 2), true},
               {{Q(0), Q(1)}, Q(2), true},    {{Q(0), Q(-1)}, Q(2), true}};
    CornersSpace v = make_corners({p}, 2);
    SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{Q(-1, 4)}}}, Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}}}, small};
    Cochain a = make_cochain(
        ZZ, ChainMode::Integral, CochainVariant::CompactlySupported, 0, small,
        {{Q(1), make_cochain_generator(v, 1, s, t, CochainVariant::CompactlySupported)}});

    Cochain once = open_pushforward(big, open_pushforward(mid, a));
    Cochain direct = open_pushforward(big, a);
    CHECK(equals(once, direct));

    // support escape: a document could claim a smaller target than the
    // generator really needs; retag without revalidation and watch it fail
    Target tight = open_interval(Q(-1, 8), Q(1, 8));
    Cochain corrupt = a;
    corrupt.target = tight;
    for (auto& [c, g] : corrupt.terms) g.t.target = tight;
    CHECK_THROWS_AS(open_pushforward(mid, corrupt), SupportEscapes);
}

TEST_CASE("lf_pullback: restriction identities and the fundamental prechain") {
    Target y = open_interval(Q(-2), Q(2));
    Target u = open_interval(Q(-1), Q(1));
    Target w = open_interval(Q(0), Q(1, 2));

    // fundamental prechain [Y] = [Y, 0, 0, id]
    Polyhedron p;
    p.flat = full_flat(1);
    p.ineqs = {{{Q(-1)}, Q(2), true}, {{Q(1)}, Q(2), true}};
    CornersSpace v = make_corners({p}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(1)}, y};
    Cochain fy = make_cochain(
        ZZ, ChainMode::Integral, CochainVariant::LocallyFiniteChain, 1, y,
        {{Q(1), make_cochain_generator(v, 0, s, t, CochainVariant::LocallyFiniteChain)}});

    Cochain same = lf_pullback(y, fy);
    CHECK(equals(same, fy));

    // restriction to U is the fundamental prechain of U
    Cochain fu = lf_pullback(u, fy);
    Polyhedron pu;
    pu.flat = full_flat(1);
    pu.ineqs = {{{Q(-1)}, Q(1), true}, {{Q(1)}, Q(1), true}};
    CornersSpace vu = make_corners({pu}, 1);
    SpaceMap tu{{AffineMap::identity(1)}, u};
    Cochain fu_direct = make_cochain(
        ZZ, ChainMode::Integral, CochainVariant::LocallyFiniteChain, 1, u,
        {{Q(1), make_cochain_generator(vu, 0, SpaceMap{{AffineMap{Mat(0, 1), Vec{}}},
                                                       Target::euclidean(0)},
                                       tu, CochainVariant::LocallyFiniteChain)}});
    CHECK(equals(fu, fu_direct));

    // j^* o i^* = (i o j)^*
    CHECK(equals(lf_pullback(w, lf_pullback(u, fy)), lf_pullback(w, fy)));
}

TEST_CASE("is_zero_cochain: orientation flip encodes the coorientation flip") {
    Target y = open_interval(Q(-2), Q(2));
    Cochain a = slab_cochain(y, Q(0));
    Cochain b = slab_cochain(y, Q(0));
    for (auto& [c, g] : b.terms)
        for (auto& piece : g.space.pieces) piece.orient = -piece.orient;
    CHECK(is_zero_cochain(add(a, b)).zero);       // [V,n,s,(t,-c)] + [V,n,s,(t,c)] = 0
    CHECK(!is_zero_cochain(add(a, negate(b))).zero);
}

TEST_CASE("negative-degree precochains vanish") {
    // degree m + n - dim V = 0 + 0 - 1 = -1 on the point target
    Polyhedron seg;
    seg.flat = full_flat(1);
    seg.ineqs = {{{Q(-1)}, Q(0), false}, {{Q(1)}, Q(1), false}};
    CornersSpace v = make_corners({seg}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap{Mat(0, 1), Vec{}}}, Target::point()};
    Cochain c = make_cochain(
        ZZ, ChainMode::Integral, CochainVariant::Precochain, -1, Target::point(),
        {{Q(5), make_cochain_generator(v, 0, s, t, CochainVariant::Precochain)}});
    CHECK(is_zero_cochain(c).zero);
}

TEST_CASE("mv_split: gluing identities on precochains") {
    Target t_dom = open_interval(Q(-2), Q(1, 2));
    Target u_dom = open_interval(Q(-1, 2), Q(2));
    Target uni = Target::domain(1, {t_dom.components[0], u_dom.components[0]});
    CutFunction f = CutFunction::affine({Q(-1)}, Q(0));  // f(y) = -y
    validate_cut(f, t_dom, u_dom, uni);

    for (const Cochain& alpha :
         {identity_cocycle(ZZ, ChainMode::Integral, uni), slab_cochain(uni, Q(1, 5))}) {
        Cochain on_t = pullback(AffineMap::identity(1), t_dom, alpha);
        Cochain on_u = pullback(AffineMap::identity(1), u_dom, alpha);
        Cochain glued = add(mv_split(on_t, uni, MvSide::TMinus, f),
                            mv_split(on_u, uni, MvSide::UPlus, f));
        CHECK(equals(glued, alpha));
    }

    // extension-then-restriction fixes generators supported where f o t > 0
    Cochain deep = slab_cochain(t_dom, Q(0));
    for (auto& [c, g] : deep.terms)
        for (auto& piece : g.space.pieces)
            piece.ineqs.push_back({{Q(1), Q(0)}, Q(-3, 4), true});  // y < -3/4
    std::vector<std::pair<Q, MCochainGenerator>> rebuilt;
    for (auto& [c, g] : deep.terms)
        rebuilt.push_back({c, make_cochain_generator(g.space, g.n, g.s, g.t, g.variant)});
    Cochain deep_t = make_cochain(ZZ, ChainMode::Integral, CochainVariant::Precochain, 0, t_dom,
                                  rebuilt);
    Cochain extended = mv_split(deep_t, uni, MvSide::TMinus, f);
    CHECK(equals(pullback(AffineMap::identity(1), t_dom, extended), deep_t));

    // exactness of the restriction sequence at the middle term
    Cochain beta = pullback(AffineMap::identity(1), t_dom, slab_cochain(uni, Q(1, 7)));
    Cochain gamma = pullback(AffineMap::identity(1), u_dom, slab_cochain(uni, Q(1, 7)));
    Target inter = Target::domain(1, {{{{Q(-1)}, Q(1, 2), true}, {{Q(1)}, Q(1, 2), true}}});
    CHECK(is_zero_cochain(add(pullback(AffineMap::identity(1), inter, beta),
                              negate(pullback(AffineMap::identity(1), inter, gamma))))
              .zero);
    Cochain rebuilt_alpha = add(mv_split(beta, uni, MvSide::TMinus, f),
                                mv_split(gamma, uni, MvSide::UPlus, f));
    CHECK(equals(pullback(AffineMap::identity(1), t_dom, rebuilt_alpha), beta));
    CHECK(equals(pullback(AffineMap::identity(1), u_dom, rebuilt_alpha), gamma));
}

TEST_CASE("mv_chain_split: decomposition identities on chains") {
    Target t_dom = open_interval(Q(-2), Q(1, 2));
    Target u_dom = open_interval(Q(-1, 2), Q(2));
    Target uni = Target::domain(1, {t_dom.components[0], u_dom.components[0]});
    CutFunction f = CutFunction::affine({Q(-1)}, Q(0));

    Chain alpha = segment_chain(Q(-1), Q(1), uni);
    Chain left = mv_chain_split(alpha, t_dom, MvSide::TMinus, f);
    Chain right = mv_chain_split(alpha, u_dom, MvSide::UPlus, f);
    Chain glued = add(pushforward(AffineMap::identity(1), uni, left),
                      pushforward(AffineMap::identity(1), uni, right));
    CHECK(equals(glued, alpha));

    // chains sitting where f o t < 0 are fixed by the U-side operators
    Chain deep_u = segment_chain(Q(1, 4), Q(1), u_dom);
    Chain pushed = pushforward(AffineMap::identity(1), uni, deep_u);
    CHECK(equals(mv_chain_split(pushed, u_dom, MvSide::UPlus, f), deep_u));

    // exactness of the decomposition sequence at the middle term
    Target inter = Target::domain(1, {{{{Q(-1)}, Q(1, 2), true}, {{Q(1)}, Q(1, 2), true}}});
    Chain delta0 = segment_chain(Q(-1, 4), Q(1, 4), inter);
    Chain beta = pushforward(AffineMap::identity(1), t_dom, delta0);
    Chain gamma = negate(pushforward(AffineMap::identity(1), u_dom, delta0));
    Chain delta = add(mv_chain_split(beta, inter, MvSide::UPlus, f),
                      negate(mv_chain_split(gamma, inter, MvSide::TMinus, f)));
    CHECK(equals(pushforward(AffineMap::identity(1), t_dom, delta), beta));
    CHECK(equals(pushforward(AffineMap::identity(1), u_dom, delta), negate(gamma)));
    CHECK(equals(delta, delta0));
}

TEST_CASE("bad cut functions are rejected") {
    Target t_dom = open_interval(Q(-2), Q(1, 2));
    Target u_dom = open_interval(Q(-1, 2), Q(2));
    Target uni = Target::domain(1, {t_dom.components[0], u_dom.components[0]});
    CutFunction wrong = CutFunction::affine({Q(1)}, Q(0));  // {f>=0} sticks out of T
    CHECK_THROWS_AS(validate_cut(wrong, t_dom, u_dom, uni), BadCutFunction);
}

#include <doctest.h>

#include "mchain/products.hpp"

using namespace mchain;

namespace {

const CoefficientRing ZZ = CoefficientRing::integers();
const CoefficientRing QQ = CoefficientRing::rationals();
const Target R1 = Target::whole_space(1);

// [R, 1, a v + b, c v + d] : a degree-1 precochain on the line (c != 0).
Cochain line_cochain(CoefficientRing ring, ChainMode mode, const Q& a, const Q& b, const Q& c,
                     const Q& d, CochainVariant variant = CochainVariant::Precochain) {
    Polyhedron line;
    line.flat = full_flat(1);
    CornersSpace v = make_corners({line}, 1);
    SpaceMap s{{AffineMap{Mat::from_rows({{a}}), Vec{b}}}, Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{c}}), Vec{d}}}, R1};
    return make_cochain(ring, mode, variant, 1, R1,
                        {{Q(1), make_cochain_generator(v, 1, s, t, variant)}});
}

// [R x [lo,hi], 1, pi_2 - mid, c pi_1 + d] : a degree-0 precochain with corners.
Cochain strip_cochain(CoefficientRing ring, ChainMode mode, const Q& lo, const Q& hi,
                      const Q& mid, const Q& c, const Q& d) {
    Polyhedron p;
    p.flat = full_flat(2);
    p.ineqs = {{{Q(0), Q(-1)}, -lo, false}, {{Q(0), Q(1)}, hi, false}};
    CornersSpace v = make_corners({p}, 2);
    SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{-mid}}}, Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{c, Q(0)}}), Vec{d}}}, R1};
    return make_cochain(ring, mode, CochainVariant::Precochain, 0, R1,
                        {{Q(1), make_cochain_generator(v, 1, s, t,
                                                       CochainVariant::Precochain)}});
}

Chain segment(CoefficientRing ring, const Q& a, const Q& b, const Q& coeff = Q(1)) {
    Polyhedron p;
    p.flat = full_flat(1);
    p.ineqs = {{{Q(-1)}, -a, false}, {{Q(1)}, b, false}};
    CornersSpace v = make_corners({p}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(1)}, R1};
    return make_chain(ring, ChainMode::Integral, 1, R1,
                      {{coeff, make_generator(v, 0, s, t)}});
}

Cochain lf_fundamental(CoefficientRing ring) {
    Polyhedron line;
    line.flat = full_flat(1);
    CornersSpace v = make_corners({line}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(1)}, R1};
    return make_cochain(
        ring, ChainMode::Integral, CochainVariant::LocallyFiniteChain, 1, R1,
        {{Q(1), make_cochain_generator(v, 0, s, t, CochainVariant::LocallyFiniteChain)}});
}

Cochain idc() { return identity_cocycle(ZZ, ChainMode::Integral, R1); }

}  // namespace

TEST_CASE("cup: identity laws") {
    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    CHECK(equals(cup(idc(), a), a));
    CHECK(equals(cup(a, idc()), a));
    Cochain b = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));
    CHECK(equals(cup(idc(), b), b));
    CHECK(equals(cup(b, idc()), b));
}

TEST_CASE("cup: associativity on sampled triples") {
    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    Cochain b = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 3), Q(2), Q(1));
    Cochain c = line_cochain(ZZ, ChainMode::Integral, Q(2), Q(1), Q(-1), Q(0));
    CHECK(equals(cup(cup(a, b), c), cup(a, cup(b, c))));
    CHECK(equals(cup(cup(b, a), c), cup(b, cup(a, c))));
}

TEST_CASE("cup: Leibniz rule") {
    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));  // k = 1, da = 0
    Cochain g = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));  // k = 0
    Cochain g2 = strip_cochain(ZZ, ChainMode::Integral, Q(-1), Q(2), Q(1, 5), Q(3), Q(-1));
    Cochain lhs = coboundary(cup(g, g2));
    Cochain rhs = add(cup(coboundary(g), g2), cup(g, coboundary(g2)));
    CHECK(equals(lhs, rhs));
    // d(a u g) = da u g - a u dg  (k = 1 flips the sign)
    Cochain lhs2 = coboundary(cup(a, g));
    Cochain rhs2 = negate(cup(a, coboundary(g)));
    CHECK(equals(lhs2, rhs2));
}

TEST_CASE("cup: pullback multiplicativity") {
    AffineMap f{Mat::from_rows({{Q(2)}}), Vec{Q(3)}};
    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    Cochain g = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));
    CHECK(equals(pullback(f, R1, cup(a, g)),
                 cup(pullback(f, R1, a), pullback(f, R1, g))));
}

TEST_CASE("cup: rational supercommutativity, integral witness against it") {
    Cochain a = line_cochain(QQ, ChainMode::Rational, Q(1), Q(0), Q(1), Q(0));
    Cochain b = line_cochain(QQ, ChainMode::Rational, Q(2), Q(1), Q(-1), Q(2));
    CHECK(is_zero_cochain(add(cup(a, b), cup(b, a))).zero);

    Cochain ai = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    ZeroResult witness = is_zero_cochain(add(cup(ai, ai), cup(ai, ai)));
    CHECK(!witness.zero);
    REQUIRE(witness.witness.has_value());
    CHECK(witness.witness->multiplicity != 0);
}

TEST_CASE("cap: identity, module structure, Leibniz") {
    Chain b = segment(ZZ, Q(-1), Q(2));
    CHECK(equals(cap(idc(), b), b));

    Cochain g = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));
    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    CHECK(equals(cap(cup(a, g), b), cap(a, cap(g, b))));

    Chain lhs = boundary_chain(cap(g, b));
    Chain rhs = add(cap(coboundary(g), b), cap(g, boundary_chain(b)));
    CHECK(equals(lhs, rhs));
    Chain lhs2 = boundary_chain(cap(a, b));
    Chain rhs2 = negate(cap(a, boundary_chain(b)));
    CHECK(equals(lhs2, rhs2));
}

TEST_CASE("cap: locally finite prechains and the identity law") {
    Cochain fy = lf_fundamental(ZZ);
    CHECK(equals(cap(idc(), fy), fy));
}

TEST_CASE("cap: projection formula") {
    AffineMap f{Mat::from_rows({{Q(2)}}), Vec{Q(3)}};
    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(1), Q(1), Q(0));
    Chain b = segment(ZZ, Q(0), Q(1));
    Chain lhs = cap(a, pushforward(f, R1, b));
    Chain rhs = pushforward(f, R1, cap(pullback(f, R1, a), b));
    CHECK(equals(lhs, rhs));
}

TEST_CASE("sign ledger: the two cap forms agree") {
    for (int n = 0; n < 4; ++n)
        for (int n2 = 0; n2 < 4; ++n2)
            for (int l = -1; l < 4; ++l)
                for (int m = 0; m < 4; ++m) {
                    int dim_v2 = n2 + l;
                    CHECK(sign_rules::cap(l, m, n) == sign_rules::cap_alt(n, n2, dim_v2, m));
                }
}

TEST_CASE("cross: identities and compatibility") {
    Target r2 = product_target(R1, R1);
    Cochain id12 = cross_cochain(idc(), idc());
    CHECK(equals(id12, identity_cocycle(ZZ, ChainMode::Integral, r2)));

    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    Cochain g = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));
    AffineMap pi1{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}};
    AffineMap pi2{Mat::from_rows({{Q(0), Q(1)}}), Vec{Q(0)}};
    for (const auto& [x, y] : {std::pair{a, g}, std::pair{g, a}, std::pair{a, a}}) {
        Cochain crossed = cross_cochain(x, y);
        Cochain viacup = cup(pullback(pi1, r2, x), pullback(pi2, r2, y));
        CHECK(equals(crossed, viacup));
    }

    AffineMap g1{Mat::from_rows({{Q(2)}}), Vec{Q(1)}};
    AffineMap g2{Mat::from_rows({{Q(-1)}}), Vec{Q(0)}};
    AffineMap g12{Mat::from_rows({{Q(2), Q(0)}, {Q(0), Q(-1)}}), Vec{Q(1), Q(0)}};
    Cochain lhs = pullback(g12, r2, cross_cochain(a, g));
    Cochain rhs = cross_cochain(pullback(g1, R1, a), pullback(g2, R1, g));
    CHECK(equals(lhs, rhs));
}

TEST_CASE("cross products of chains: boundary rule and pushforwards") {
    Chain a = segment(ZZ, Q(0), Q(1));
    Chain b = segment(ZZ, Q(-1), Q(1));
    Chain ab = cross_chain(a, b);
    CHECK(ab.degree == 2);
    Chain lhs = boundary_chain(ab);
    Chain rhs = add(cross_chain(boundary_chain(a), b),
                    negate(cross_chain(a, boundary_chain(b))));
    CHECK(equals(lhs, rhs));

    Chain c = segment(ZZ, Q(2), Q(3));
    CHECK(equals(cross_chain(cross_chain(a, b), c), cross_chain(a, cross_chain(b, c))));

    AffineMap g1{Mat::from_rows({{Q(2)}}), Vec{Q(1)}};
    AffineMap g2{Mat::from_rows({{Q(3)}}), Vec{Q(-1)}};
    AffineMap g12{Mat::from_rows({{Q(2), Q(0)}, {Q(0), Q(3)}}), Vec{Q(1), Q(-1)}};
    Target r2 = product_target(R1, R1);
    CHECK(equals(pushforward(g12, r2, ab),
                 cross_chain(pushforward(g1, R1, a), pushforward(g2, R1, b))));
}

TEST_CASE("xi: involution, identity fix, reversal sign, anti-homomorphism") {
    CHECK(equals(xi(idc()), idc()));

    Polyhedron plane;
    plane.flat = full_flat(2);
    CornersSpace v = make_corners({plane}, 2);
    SpaceMap s12{{AffineMap{Mat::from_rows({{Q(1), Q(0)}, {Q(1), Q(1)}}), Vec(2)}},
                 Target::euclidean(2)};
    SpaceMap s21{{AffineMap{Mat::from_rows({{Q(1), Q(1)}, {Q(1), Q(0)}}), Vec(2)}},
                 Target::euclidean(2)};
    SpaceMap t{{AffineMap{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}}}, R1};
    Cochain c12 = make_cochain(
        ZZ, ChainMode::Integral, CochainVariant::Precochain, 1, R1,
        {{Q(1), make_cochain_generator(v, 2, s12, t, CochainVariant::Precochain)}});
    Cochain c21 = make_cochain(
        ZZ, ChainMode::Integral, CochainVariant::Precochain, 1, R1,
        {{Q(-1), make_cochain_generator(v, 2, s21, t, CochainVariant::Precochain)}});
    CHECK(equals(xi(c12), c21));
    CHECK(equals(xi(xi(c12)), c12));

    Cochain a = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0));
    Cochain b = line_cochain(ZZ, ChainMode::Integral, Q(2), Q(1), Q(-1), Q(2));
    CHECK(equals(xi(cup(a, b)), negate(cup(xi(b), xi(a)))));
    Cochain g = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));
    CHECK(equals(xi(cup(a, g)), cup(xi(g), xi(a))));
}

TEST_CASE("pd: retag to the fundamental prechain and the boundary square") {
    CHECK(equals(pd(idc()), lf_fundamental(ZZ)));
    Cochain g = strip_cochain(ZZ, ChainMode::Integral, Q(0), Q(1), Q(1, 2), Q(1), Q(0));
    CHECK(equals(pd(coboundary(g)), coboundary(pd(g))));
}

TEST_CASE("shriek maps: identities, chain map, duality square") {
    AffineMap f{Mat::from_rows({{Q(2)}}), Vec{Q(3)}};

    Chain b = segment(ZZ, Q(0), Q(4), Q(2));
    CHECK(equals(shriek_lower(AffineMap::identity(1), R1, b), b));

    Chain pulled = shriek_lower(f, R1, b);
    CHECK(equals(boundary_chain(pulled), shriek_lower(f, R1, boundary_chain(b))));

    Cochain cs = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(0), Q(1), Q(0),
                              CochainVariant::CompactlySupported);
    CHECK(equals(shriek_upper(AffineMap::identity(1), R1, cs), cs));
    Cochain up = shriek_upper(f, R1, cs);
    CHECK(up.degree == cs.degree);

    Cochain alpha = line_cochain(ZZ, ChainMode::Integral, Q(1), Q(1), Q(2), Q(0),
                                 CochainVariant::CompactlySupported);
    Chain lhs = pd_compact(pullback(f, R1, alpha), ChainMode::Integral);
    Chain rhs = shriek_lower(f, R1, pd_compact(alpha, ChainMode::Integral));
    CHECK(equals(lhs, rhs));
}

#include <doctest.h>

#include "mchain/singular.hpp"

using namespace mchain;

namespace {

const CoefficientRing ZZ = CoefficientRing::integers();

// affine simplex Delta_k -> R^m given by its vertex images (k+1 columns)
AffineMap simplex_map(const std::vector<Vec>& vertex_images) {
    return {Mat::from_cols(vertex_images), Vec(vertex_images[0].size())};
}

}  // namespace

TEST_CASE("singular boundary: k = 1 faces and the classical dd = 0") {
    Target r2 = Target::whole_space(2);
    AffineMap sigma = simplex_map({{Q(0), Q(0)}, {Q(2), Q(1)}});
    SingularChain c = make_singular(ZZ, 1, r2, {{Q(1), sigma}});
    SingularChain b = singular_boundary(c);
    REQUIRE(b.terms.size() == 2);
    // face j = 0 drops the first vertex: constant at (2,1) with sign +1
    for (const auto& [a, s] : b.terms) {
        Vec img = s.apply({Q(1)});
        if (img == Vec{Q(2), Q(1)}) CHECK(a == 1);
        if (img == Vec{Q(0), Q(0)}) CHECK(a == -1);
    }
    CHECK_THROWS_AS(singular_boundary(b), ZeroDegree);

    AffineMap tri = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}});
    SingularChain c2 = make_singular(ZZ, 2, r2, {{Q(3), tri}});
    CHECK(singular_boundary(singular_boundary(c2)).terms.empty());
}

TEST_CASE("singular boundary commutes with affine pushforward") {
    Target r2 = Target::whole_space(2);
    AffineMap tri = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(1), Q(2)}});
    SingularChain c = make_singular(ZZ, 2, r2, {{Q(1), tri}});
    AffineMap f{Mat::from_rows({{Q(2), Q(1)}, {Q(0), Q(1)}}), Vec{Q(-1), Q(3)}};
    CHECK(identical(singular_boundary(singular_pushforward(f, r2, c)),
                    singular_pushforward(f, r2, singular_boundary(c))));
}

TEST_CASE("barycentric subdivision: halves of the interval, B boundary = boundary B") {
    Target r1 = Target::whole_space(1);
    AffineMap seg = simplex_map({{Q(0)}, {Q(1)}});
    SingularChain c = make_singular(ZZ, 1, r1, {{Q(1), seg}});
    SingularChain b = barycentric(c);
    REQUIRE(b.terms.size() == 2);
    // total signed length is preserved: sum of eps * (end - start) = 1
    Q total = 0;
    for (const auto& [a, s] : b.terms) total += a * (s.apply({Q(0), Q(1)})[0] - s.apply({Q(1), Q(0)})[0]);
    CHECK(total == 1);

    Target r2 = Target::whole_space(2);
    AffineMap tri = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}});
    AffineMap tri2 = simplex_map({{Q(1), Q(1)}, {Q(3), Q(0)}, {Q(2), Q(2)}});
    SingularChain c2 = make_singular(ZZ, 2, r2, {{Q(1), tri}, {Q(-2), tri2}});
    CHECK(identical(barycentric(singular_boundary(c2)), singular_boundary(barycentric(c2))));

    // a point simplex is its own subdivision
    Target r0 = Target::whole_space(1);
    SingularChain pt = make_singular(ZZ, 0, r0, {{Q(5), simplex_map({{Q(7)}})}});
    CHECK(identical(barycentric(pt), pt));
}

TEST_CASE("iterated subdivision shrinks diameters") {
    // max sup-norm diameter of the pieces of B^n(Delta_2) <= (2/3)^n diam
    Target r2 = Target::whole_space(2);
    AffineMap tri = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}});
    SingularChain c = make_singular(ZZ, 2, r2, {{Q(1), tri}});
    auto diameter = [](const AffineMap& s) {
        std::vector<Vec> vx;
        for (int l = 0; l < 3; ++l) {
            Vec e(3);
            e[l] = 1;
            vx.push_back(s.apply(e));
        }
        Q best = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                for (int coord = 0; coord < 2; ++coord) {
                    Q d = abs(vx[i][coord] - vx[j][coord]);
                    if (d > best) best = d;
                }
        return best;
    };
    Q bound = 1;
    SingularChain cur = c;
    for (int round = 1; round <= 2; ++round) {
        cur = barycentric(cur);
        bound *= Q(2, 3);
        for (const auto& [a, s] : cur.terms) CHECK(diameter(s) <= bound);
    }
}

TEST_CASE("to_mchain: chain map and subdivision invariance") {
    Target r1 = Target::whole_space(1);
    AffineMap seg = simplex_map({{Q(0)}, {Q(1)}});
    SingularChain c1 = make_singular(ZZ, 1, r1, {{Q(1), seg}});
    CHECK(equals(boundary_chain(to_mchain(c1)), to_mchain(singular_boundary(c1))));
    CHECK(equals(to_mchain(c1), to_mchain(barycentric(c1))));

    Target r2 = Target::whole_space(2);
    AffineMap tri = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(0), Q(1)}});
    SingularChain c2 = make_singular(ZZ, 2, r2, {{Q(1), tri}});
    CHECK(equals(boundary_chain(to_mchain(c2)), to_mchain(singular_boundary(c2))));
    CHECK(equals(to_mchain(c2), to_mchain(barycentric(c2))));
}

TEST_CASE("to_mchain intertwines pushforwards") {
    Target r2 = Target::whole_space(2);
    AffineMap tri = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(1), Q(1)}});
    SingularChain c = make_singular(ZZ, 2, r2, {{Q(2), tri}});
    AffineMap f{Mat::from_rows({{Q(1), Q(2)}, {Q(0), Q(-1)}}), Vec{Q(1), Q(0)}};
    CHECK(equals(to_mchain(singular_pushforward(f, r2, c)),
                 pushforward(f, r2, to_mchain(c))));
}

TEST_CASE("triangulated square equals the square generator") {
    Target r2 = Target::whole_space(2);
    AffineMap lower = simplex_map({{Q(0), Q(0)}, {Q(1), Q(0)}, {Q(1), Q(1)}});
    AffineMap upper = simplex_map({{Q(0), Q(0)}, {Q(1), Q(1)}, {Q(0), Q(1)}});
    SingularChain tris = make_singular(ZZ, 2, r2, {{Q(1), lower}, {Q(1), upper}});

    Polyhedron sq;
    sq.flat = full_flat(2);
    sq.ineqs = {{{Q(-1), Q(0)}, Q(0), false},
                {{Q(1), Q(0)}, Q(1), false},
                {{Q(0), Q(-1)}, Q(0), false},
                {{Q(0), Q(1)}, Q(1), false}};
    CornersSpace v = make_corners({sq}, 2);
    SpaceMap s{{AffineMap{Mat(0, 2), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(2)}, r2};
    Chain square = make_chain(ZZ, ChainMode::Integral, 2, r2,
                              {{Q(1), make_generator(v, 0, s, t)}});
    CHECK(equals(to_mchain(tris), square));
}

TEST_CASE("homotopy operator: boundary identity for straight-line homotopies") {
    Target r1 = Target::whole_space(1);
    // chain on R: a segment
    Polyhedron p;
    p.flat = full_flat(1);
    p.ineqs = {{{Q(-1)}, Q(1), false}, {{Q(1)}, Q(2), false}};
    CornersSpace v = make_corners({p}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(1)}, r1};
    Chain alpha = make_chain(ZZ, ChainMode::Integral, 1, r1,
                             {{Q(1), make_generator(v, 0, s, t)}});

    // g(y, tau) = 2y + 3 tau - 1: straight line from f = 2y-1 to f' = 2y+2
    Homotopy g = make_homotopy({Q(0), Q(1)},
                               {AffineMap{Mat::from_rows({{Q(2), Q(3)}}), Vec{Q(-1)}}});
    Chain ga = homotopy_G(g, r1, alpha);
    Chain lhs = add(boundary_chain(ga), homotopy_G(g, r1, boundary_chain(alpha)));
    AffineMap f0 = homotopy_end(g, false);
    AffineMap f1 = homotopy_end(g, true);
    Chain rhs = add(pushforward(f1, r1, alpha), negate(pushforward(f0, r1, alpha)));
    CHECK(equals(lhs, rhs));

    // piecewise version: two slabs meeting continuously at tau = 1/2
    Homotopy g2 = make_homotopy(
        {Q(0), Q(1, 2), Q(1)},
        {AffineMap{Mat::from_rows({{Q(2), Q(4)}}), Vec{Q(-1)}},
         AffineMap{Mat::from_rows({{Q(2), Q(2)}}), Vec{Q(0)}}});
    Chain ga2 = homotopy_G(g2, r1, alpha);
    Chain lhs2 = add(boundary_chain(ga2), homotopy_G(g2, r1, boundary_chain(alpha)));
    Chain rhs2 = add(pushforward(homotopy_end(g2, true), r1, alpha),
                     negate(pushforward(homotopy_end(g2, false), r1, alpha)));
    CHECK(equals(lhs2, rhs2));

    // tau-independent homotopy: the identity degenerates to zero
    Homotopy flat = make_homotopy({Q(0), Q(1)},
                                  {AffineMap{Mat::from_rows({{Q(2), Q(0)}}), Vec{Q(5)}}});
    Chain lhs3 = add(boundary_chain(homotopy_G(flat, r1, alpha)),
                     homotopy_G(flat, r1, boundary_chain(alpha)));
    CHECK(is_zero(lhs3).zero);

    // G of the zero chain is zero
    CHECK(homotopy_G(g, r1, zero_chain(ZZ, ChainMode::Integral, 1, r1)).terms.empty());

    // discontinuous slabs are rejected
    CHECK_THROWS(make_homotopy({Q(0), Q(1, 2), Q(1)},
                               {AffineMap{Mat::from_rows({{Q(2), Q(4)}}), Vec{Q(-1)}},
                                AffineMap{Mat::from_rows({{Q(2), Q(2)}}), Vec{Q(7)}}}));
}

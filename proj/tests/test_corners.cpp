#include <doctest.h>

#include "mchain/corners.hpp"

#include <map>

using namespace mchain;

namespace {

Polyhedron box(const std::vector<std::pair<Q, Q>>& bounds) {
    int k = static_cast<int>(bounds.size());
    Polyhedron p;
    p.flat = full_flat(k);
    for (int i = 0; i < k; ++i) {
        Vec lo(k), hi(k);
        lo[i] = -1;
        hi[i] = 1;
        p.ineqs.push_back({lo, -bounds[i].first, false});
        p.ineqs.push_back({hi, bounds[i].second, false});
    }
    return p;
}

CornersSpace unit_interval() { return make_corners({box({{Q(0), Q(1)}})}, 1); }

CornersSpace unit_square() { return make_corners({box({{Q(0), Q(1)}, {Q(0), Q(1)}})}, 2); }

}  // namespace

TEST_CASE("boundary of the oriented interval is -{0} + {1}") {
    Boundary b = boundary(unit_interval());
    REQUIRE(b.space.pieces.size() == 2);
    REQUIRE(b.space.dim == 0);
    for (const auto& p : b.space.pieces) {
        if (p.flat.base[0] == 0) CHECK(p.orient == -1);
        if (p.flat.base[0] == 1) CHECK(p.orient == 1);
    }
    CHECK_THROWS(boundary(b.space));
}

TEST_CASE("double boundary pairs corners with cancelling orientations") {
    for (const CornersSpace& v :
         {unit_square(), make_corners({box({{Q(0), Q(1)}, {Q(0), Q(2)}, {Q(-1), Q(1)}})}, 3)}) {
        Boundary bb = boundary(boundary(v).space);
        std::map<Vec, int, decltype([](const Vec& a, const Vec& b) { return compare(a, b) < 0; })>
            at_face;
        for (const auto& p : bb.space.pieces) {
            // group codim-2 faces by canonical flat and sum induced orientations
            CanonicalFlat cf = canonicalize(p.flat);
            Vec key = cf.flat.base;
            for (const auto& bvec : cf.flat.basis) key.insert(key.end(), bvec.begin(), bvec.end());
            at_face[key] += p.orient * cf.sign;
        }
        CHECK(!at_face.empty());
        for (const auto& [pt, total] : at_face) CHECK(total == 0);
    }
}

TEST_CASE("compact oriented 1-d spaces have boundary signs summing to zero") {
    std::vector<Polyhedron> pieces;
    for (int i = 0; i < 5; ++i) {
        Polyhedron seg;
        seg.flat.ambient = 2;
        seg.flat.base = {Q(i), Q(2 * i - 3)};
        seg.flat.basis = {{Q(1 + i % 2), Q(i % 3 == 0 ? -1 : 2)}};
        seg.ineqs = {{{Q(-1)}, Q(0), false}, {{Q(1)}, Q(i + 1), false}};
        seg.orient = i % 2 ? 1 : -1;
        pieces.push_back(std::move(seg));
    }
    CornersSpace v = make_corners(std::move(pieces), 1);
    Boundary b = boundary(v);
    Q total = 0;
    for (const auto& p : b.space.pieces) total += p.orient;
    CHECK(total == 0);
}

TEST_CASE("product: unit law and orientation") {
    CornersSpace iv = unit_interval();
    Polyhedron pt;
    pt.flat.ambient = 0;
    CornersSpace point = make_corners({pt}, 0);

    Product vp = product(iv, point);
    REQUIRE(vp.space.pieces.size() == 1);
    CHECK(vp.space.dim == 1);
    CHECK(vp.space.pieces[0].orient == 1);

    Product sq = product(iv, iv);
    REQUIRE(sq.space.pieces.size() == 1);
    CHECK(sq.space.dim == 2);
    CHECK(measure(sq.space.pieces[0]).dim == 2);
}

TEST_CASE("product swap comparison carries the sign (-1)^{dim dim}") {
    auto swap_sign = [](const CornersSpace& v, const CornersSpace& w) {
        Product vw = product(v, w);
        Product wv = product(w, v);
        const Polyhedron& a = vw.space.pieces[0];
        const Polyhedron& b = wv.space.pieces[0];
        int bw = w.pieces[0].flat.ambient;
        auto swap_vec = [&](const Vec& x) {
            Vec out(x.begin() + bw, x.end());
            out.insert(out.end(), x.begin(), x.begin() + bw);
            return out;
        };
        Flat sf;
        sf.ambient = b.flat.ambient;
        sf.base = swap_vec(b.flat.base);
        for (const auto& bb : b.flat.basis) sf.basis.push_back(swap_vec(bb));
        Polyhedron bs = b;
        bs.flat = sf;
        Polyhedron re = reexpress_onto(bs, a.flat);
        return a.orient * re.orient;
    };
    CornersSpace iv = unit_interval();
    CornersSpace sq = unit_square();
    CHECK(swap_sign(iv, iv) == -1);  // (-1)^{1*1}
    CHECK(swap_sign(iv, sq) == 1);   // (-1)^{1*2}
    CHECK(swap_sign(sq, sq) == 1);   // (-1)^{2*2}
}

TEST_CASE("fibre product: unit law over the line") {
    // R^2 x_{pi_1, R, id} R == R^2, orientation preserved under (v, w) -> v
    Polyhedron plane;
    plane.flat = full_flat(2);
    Polyhedron line;
    line.flat = full_flat(1);
    AffineMap pi1{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}};
    auto fp = fibre_piece(plane, pi1, line, AffineMap::identity(1), 1, true);
    REQUIRE(fp.has_value());
    CHECK(fp->piece.flat.dim() == 2);
    Mat proj = Mat::from_cols({Vec(fp->left_dirs[0]), Vec(fp->left_dirs[1])});
    CHECK(fp->piece.orient * sgn(det(proj)) == 1);
}

TEST_CASE("fibre product: transversality precondition") {
    Polyhedron pt;
    pt.flat.ambient = 0;
    CornersSpace a = make_corners({pt}, 0);
    SpaceMap t{{AffineMap::constant(0, {Q(0)})}, Target::euclidean(1)};
    CHECK_THROWS_AS(fibre_product(a, t, a, t, 1), NotTransverse);
}

TEST_CASE("validate_map rejects images escaping open domains") {
    CornersSpace iv = unit_interval();
    Target open01 = Target::domain(1, {{{{Q(-1)}, Q(0), true}, {{Q(1)}, Q(1), true}}});
    SpaceMap ident{{AffineMap::identity(1)}, open01};
    CHECK_THROWS_AS(validate_map(iv, ident), TargetMismatch);  // [0,1] not inside (0,1)

    SpaceMap shrunk{{AffineMap{Mat::from_rows({{Q(1, 2)}}), Vec{Q(1, 4)}}}, open01};
    CHECK_NOTHROW(validate_map(iv, shrunk));  // [1/4, 3/4] is inside

    // union of two overlapping boxes: a segment straddling both is fine
    Target uni = Target::domain(1, {{{{Q(-1)}, Q(0), true}, {{Q(1)}, Q(3, 5), true}},
                                    {{{Q(-1)}, Q(-2, 5), true}, {{Q(1)}, Q(1), true}}});
    SpaceMap onto_union{{shrunk.maps[0]}, uni};
    CHECK_NOTHROW(validate_map(iv, onto_union));
    SpaceMap escaping{{AffineMap::identity(1)}, uni};
    CHECK_THROWS_AS(validate_map(iv, escaping), TargetMismatch);
}

TEST_CASE("simplex scheme: faces, orientation multipliers") {
    for (int k : {1, 2, 3}) {
        SimplexScheme s = simplex(k);
        SimplexScheme prev = simplex(k - 1);
        REQUIRE(static_cast<int>(s.face_maps.size()) == k + 1);
        auto fs = facets(s.simplex);
        REQUIRE(static_cast<int>(fs.size()) == k + 1);
        for (int j = 0; j <= k; ++j) {
            auto img = image_flat(prev.simplex, s.face_maps[j]);
            REQUIRE(std::holds_alternative<FullImage>(img));
            const auto& full = std::get<FullImage>(img);
            bool matched = false;
            for (const auto& f : fs) {
                if (!same_affine_span(f.poly.flat, full.flat)) continue;
                matched = true;
                Polyhedron re = reexpress_onto(f.poly, full.flat);
                int expected = (j % 2) ? -1 : 1;
                CHECK(re.orient * full.sign == expected);
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("barycentric subdivision: piece count and signed volume") {
    for (int k : {1, 2}) {
        SimplexScheme s = simplex(k);
        int fact = 1;
        for (int i = 2; i <= k + 1; ++i) fact *= i;
        REQUIRE(static_cast<int>(s.subdivision.size()) == fact);
        // direct signed-volume computation: sum of eps_j times the signed
        // volume of the j-th sub-simplex equals the volume of Delta_k
        Mat basis_cols = Mat::from_cols(s.simplex.flat.basis);
        Q total = 0;
        for (size_t j = 0; j < s.subdivision.size(); ++j) {
            Mat m(k, k);
            for (int c = 1; c <= k; ++c) {
                Vec dir = mat_vec(s.subdivision[j].linear, s.simplex.flat.basis[c - 1]);
                Vec fc = *solve(basis_cols, dir);
                for (int r = 0; r < k; ++r) m(r, c - 1) = fc[r];
            }
            total += Q(s.subdivision_signs[j]) * det(m);
        }
        CHECK(total == 1);
    }
}

TEST_CASE("simplex: k=0 edge case") {
    SimplexScheme s = simplex(0);
    CHECK(s.face_maps.empty());
    CHECK(s.subdivision.size() == 1);
    CHECK(measure(s.simplex).dim == 0);
}

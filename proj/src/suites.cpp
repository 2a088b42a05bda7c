#include "mchain/suites.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <sstream>

namespace mchain {

namespace {

using Check = std::function<bool(Rng&, std::string&)>;

struct Property {
    std::string name;
    Check check;
};

PropertyResult run_property(const Property& p, uint64_t seed, int cases, int salt) {
    PropertyResult out;
    out.name = p.name;
    out.cases = cases;
    for (int i = 0; i < cases; ++i) {
        Rng rng(seed * 1000003ull + static_cast<uint64_t>(salt) * 7919ull +
                static_cast<uint64_t>(i));
        std::string witness;
        bool ok;
        try {
            ok = p.check(rng, witness);
        } catch (const std::exception& e) {
            ok = false;
            witness = std::string("exception: ") + e.what();
        }
        if (!ok) {
            out.pass = false;
            out.witness = "case " + std::to_string(i) + (witness.empty() ? "" : ": " + witness);
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// randomized builders

SpaceMap zero_reference(const CornersSpace& v) {
    SpaceMap m;
    m.target = Target::euclidean(0);
    for (const auto& p : v.pieces) m.maps.push_back(AffineMap{Mat(0, p.flat.ambient), Vec{}});
    return m;
}


AffineMap random_affine(Rng& rng, int dom, int cod, long range = 2) {
    AffineMap m;
    m.linear = Mat(cod, dom);
    m.translation = Vec(cod);
    for (int r = 0; r < cod; ++r) {
        for (int c = 0; c < dom; ++c) m.linear(r, c) = Q(rng.integer(-range, range));
        m.translation[r] = rng.rational(range, 2);
    }
    return m;
}

}  // namespace

Polyhedron random_bounded_piece(Rng& rng, int ambient, int dim) {
    Polyhedron p;
    if (ambient == dim) {
        p.flat = full_flat(dim);
    } else {
        for (;;) {
            Flat f;
            f.ambient = ambient;
            for (int i = 0; i < ambient; ++i) f.base.push_back(rng.rational(2, 2));
            for (int b = 0; b < dim; ++b) {
                Vec v(ambient);
                for (int i = 0; i < ambient; ++i) v[i] = Q(rng.integer(-2, 2));
                f.basis.push_back(std::move(v));
            }
            if (f.dim() == dim && (dim == 0 || rank(Mat::from_rows(f.basis)) == dim)) {
                p.flat = std::move(f);
                break;
            }
        }
    }
    for (int i = 0; i < dim; ++i) {
        Vec lo(dim), hi(dim);
        lo[i] = -1;
        hi[i] = 1;
        p.ineqs.push_back({std::move(lo), Q(rng.integer(1, 3)), false});
        p.ineqs.push_back({std::move(hi), Q(rng.integer(1, 3)), false});
    }
    if (dim >= 2 && rng.flip()) {
        // one extra cut keeping the origin strictly inside
        Vec n(dim);
        bool nonzero = false;
        for (int i = 0; i < dim; ++i) {
            n[i] = Q(rng.integer(-2, 2));
            nonzero |= n[i] != 0;
        }
        if (nonzero) p.ineqs.push_back({std::move(n), Q(rng.integer(1, 4)), false});
    }
    p.orient = rng.flip() ? 1 : -1;
    return p;
}

Polyhedron random_simplex_piece(Rng& rng, int dim) {
    // hull of dim+1 affinely independent small integer points in R^dim
    for (;;) {
        std::vector<Vec> pts;
        for (int i = 0; i <= dim; ++i) {
            Vec v(dim);
            for (int j = 0; j < dim; ++j) v[j] = Q(rng.integer(-4, 4));
            pts.push_back(std::move(v));
        }
        Mat edges(dim, dim);
        for (int c = 0; c < dim; ++c)
            for (int r = 0; r < dim; ++r) edges(r, c) = pts[c + 1][r] - pts[0][r];
        if (det(edges) == 0) continue;
        Polyhedron p;
        p.flat = full_flat(dim);
        for (int skip = 0; skip <= dim; ++skip) {
            // hyperplane through all points except pts[skip]
            std::vector<Vec> rows;
            int base = skip == 0 ? 1 : 0;
            for (int i = 0; i <= dim; ++i) {
                if (i == skip || i == base) continue;
                rows.push_back(pts[i] - pts[base]);
            }
            Mat span = rows.empty() ? Mat(0, dim) : Mat::from_rows(rows);
            std::vector<Vec> normals = kernel_basis(span);
            Vec n = normals[0];
            Q off = dot(n, pts[base]);
            if (dot(n, pts[skip]) > off) {
                n = scale(Q(-1), n);
                off = -off;
            }
            p.ineqs.push_back({std::move(n), std::move(off), false});
        }
        p.orient = rng.flip() ? 1 : -1;
        return p;
    }
}

MChainGenerator random_chain_generator(Rng& rng, const Target& y, int degree, int max_n) {
    int n = static_cast<int>(rng.integer(0, max_n));
    int d = n + degree;
    int pieces = static_cast<int>(rng.integer(1, 2));
    std::vector<Polyhedron> ps;
    SpaceMap s, t;
    s.target = Target::euclidean(n);
    t.target = y;
    for (int i = 0; i < pieces; ++i) {
        int ambient = d + static_cast<int>(rng.integer(0, 1));
        Polyhedron p = random_bounded_piece(rng, ambient, d);
        s.maps.push_back(random_affine(rng, ambient, n));
        t.maps.push_back(random_affine(rng, ambient, y.ambient));
        ps.push_back(std::move(p));
    }
    return make_generator(make_corners(std::move(ps), d), n, std::move(s), std::move(t));
}

Chain random_zero_chain(Rng& rng, CoefficientRing ring, const Target& y) {
    int degree = static_cast<int>(rng.integer(0, std::max(0, y.ambient)));
    MChainGenerator g = random_chain_generator(rng, y, degree, 2);
    Chain base = make_chain(ring, ChainMode::Integral, degree, y, {{Q(rng.integer(1, 3)), g}});
    switch (rng.integer(0, 2)) {
        case 0: {
            // [V] - (sign . stabilization)
            int slot = static_cast<int>(rng.integer(0, g.n));
            auto [sig, st] = stabilize(g, slot);
            Chain other = make_chain(ring, ChainMode::Integral, degree, y,
                                     {{base.terms[0].first * sig, st}});
            return add(base, negate(other));
        }
        case 1: {
            // [V1 u V2] - [V1] - [V2]
            MChainGenerator g2 = random_chain_generator(rng, y, degree, g.n);
            while (g2.n != g.n) g2 = random_chain_generator(rng, y, degree, g.n);
            MChainGenerator uni;
            uni.n = g.n;
            uni.space.dim = g.space.dim;
            uni.space.pieces = g.space.pieces;
            uni.s = g.s;
            uni.t = g.t;
            uni.properness = g.properness;
            for (size_t i = 0; i < g2.space.pieces.size(); ++i) {
                uni.space.pieces.push_back(g2.space.pieces[i]);
                uni.s.maps.push_back(g2.s.maps[i]);
                uni.t.maps.push_back(g2.t.maps[i]);
            }
            if (g2.properness.radius &&
                (!uni.properness.radius || *g2.properness.radius < *uni.properness.radius))
                uni.properness.radius = g2.properness.radius;
            Q c = base.terms[0].first;
            return make_chain(ring, ChainMode::Integral, degree, y,
                              {{c, uni}, {-c, g}, {-c, g2}});
        }
        default: {
            // [V] + [-V]
            MChainGenerator flip = g;
            for (auto& p : flip.space.pieces) p.orient = -p.orient;
            Chain other =
                make_chain(ring, ChainMode::Integral, degree, y, {{base.terms[0].first, flip}});
            return add(base, other);
        }
    }
}

namespace {

// ---------------------------------------------------------------------------
// suite bodies

Chain embedded(const CornersSpace& v, CoefficientRing ring, const Q& coeff = Q(1)) {
    int amb = v.pieces.empty() ? 0 : v.pieces[0].flat.ambient;
    Target y = Target::whole_space(amb);
    SpaceMap t;
    t.target = y;
    for (const auto& p : v.pieces) t.maps.push_back(AffineMap::identity(p.flat.ambient));
    return make_chain(ring, ChainMode::Integral, v.dim, y,
                      {{coeff, make_generator(v, 0, zero_reference(v), t)}});
}

const CoefficientRing ZZ = CoefficientRing::integers();
const CoefficientRing QQ = CoefficientRing::rationals();

struct SubmersiveSpace {
    CornersSpace space;
    SpaceMap map;  // onto R^1
};

SubmersiveSpace random_submersive(Rng& rng, int dim) {
    SubmersiveSpace out;
    std::vector<Polyhedron> pieces = {random_simplex_piece(rng, dim)};
    out.space = make_corners(std::move(pieces), dim);
    out.map.target = Target::whole_space(1);
    for (const auto& p : out.space.pieces) {
        AffineMap m;
        for (;;) {
            m = random_affine(rng, p.flat.ambient, 1);
            if (rank(m.linear) == 1) break;
        }
        out.map.maps.push_back(std::move(m));
    }
    return out;
}

std::vector<Property> sign_law_properties() {
    std::vector<Property> props;
    props.push_back({"boundary-law", [](Rng& rng, std::string& w) {
        SubmersiveSpace v = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        SubmersiveSpace u = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        // the law needs dX x_Z dY empty (corner transversality): skip draws
        // where boundary strata collide over the target
        {
            Boundary bv = boundary(v.space);
            Boundary bu = boundary(u.space);
            for (size_t i = 0; i < bv.space.pieces.size(); ++i)
                for (size_t j = 0; j < bu.space.pieces.size(); ++j) {
                    const Polyhedron& pv = bv.space.pieces[i];
                    const Polyhedron& pu = bu.space.pieces[j];
                    AffineMap tv = compose(v.map.maps[bv.parent[i]], embedding(pv.flat));
                    AffineMap tu = compose(u.map.maps[bu.parent[j]], embedding(pu.flat));
                    LpProblem meet;
                    int dv = pv.flat.dim(), du = pu.flat.dim();
                    meet.A = Mat(0, dv + du);
                    meet.E = Mat(0, dv + du);
                    for (const auto& h : pv.ineqs) {
                        Vec row = h.normal;
                        row.resize(dv + du);
                        meet.add_le(row, h.offset);
                    }
                    for (const auto& h : pu.ineqs) {
                        Vec row(dv);
                        row.insert(row.end(), h.normal.begin(), h.normal.end());
                        meet.add_le(row, h.offset);
                    }
                    Vec eq(dv + du);
                    for (int c = 0; c < dv; ++c) eq[c] = tv.linear(0, c);
                    for (int c = 0; c < du; ++c) eq[dv + c] = -tu.linear(0, c);
                    meet.add_eq(eq, tu.translation[0] - tv.translation[0]);
                    if (feasible_point(meet)) return true;  // non-transverse corners
                }
        }
        Product f = fibre_product(v.space, v.map, u.space, u.map, 1);
        if (f.space.dim < 1 || f.space.pieces.empty()) return true;  // nothing to check
        int amb = f.space.pieces[0].flat.ambient;
        Target ry = Target::whole_space(amb);
        Chain lhs = boundary_chain(embedded(f.space, ZZ));

        Boundary bv = boundary(v.space);
        SpaceMap bvm;
        bvm.target = v.map.target;
        for (int parent : bv.parent) bvm.maps.push_back(v.map.maps[parent]);
        Product left = fibre_product(bv.space, bvm, u.space, u.map, 1);

        Boundary bu = boundary(u.space);
        SpaceMap bum;
        bum.target = u.map.target;
        for (int parent : bu.parent) bum.maps.push_back(u.map.maps[parent]);
        Product right = fibre_product(v.space, v.map, bu.space, bum, 1);

        int sign = (v.space.dim + 1) % 2 ? -1 : 1;  // (-1)^{dim X + dim Z}, dim Z = 1
        Chain rhs = zero_chain(ZZ, ChainMode::Integral, f.space.dim - 1, ry);
        if (!left.space.pieces.empty()) rhs = add(rhs, embedded(left.space, ZZ));
        if (!right.space.pieces.empty()) rhs = add(rhs, embedded(right.space, ZZ, Q(sign)));
        bool ok = equals(lhs, rhs);
        if (!ok) w = "boundary law failed at dims " + std::to_string(v.space.dim) + "," +
                     std::to_string(u.space.dim);
        return ok;
    }});
    props.push_back({"commutativity", [](Rng& rng, std::string& w) {
        SubmersiveSpace v = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        SubmersiveSpace u = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        Product vw = fibre_product(v.space, v.map, u.space, u.map, 1);
        Product wv = fibre_product(u.space, u.map, v.space, v.map, 1);
        if (vw.space.pieces.empty() && wv.space.pieces.empty()) return true;
        int av = v.space.pieces[0].flat.ambient, au = u.space.pieces[0].flat.ambient;
        // swap map R^{au + av} -> R^{av + au}
        AffineMap swap;
        swap.linear = Mat(av + au, au + av);
        swap.translation = Vec(av + au);
        for (int i = 0; i < av; ++i) swap.linear(i, au + i) = 1;
        for (int i = 0; i < au; ++i) swap.linear(av + i, i) = 1;
        Chain lhs = embedded(vw.space, ZZ);
        int exp = (v.space.dim - 1) * (u.space.dim - 1);
        Chain rhs = pushforward(swap, lhs.target, embedded(wv.space, ZZ, Q(exp % 2 ? -1 : 1)));
        bool ok = equals(lhs, rhs);
        if (!ok) w = "commutativity sign failed";
        return ok;
    }});
    props.push_back({"associativity", [](Rng& rng, std::string& w) {
        // V x_{e,Y,f.pi} (W x_{g,Z,h} X) vs (V x_{e,Y,f} W) x_{g.pi,Z,h} X
        SubmersiveSpace vv = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        SubmersiveSpace ww = random_submersive(rng, 2);
        SubmersiveSpace xx = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        // f and g both live on W: f matches e over Y, g matches h over Z
        AffineMap f = ww.map.maps[0];
        AffineMap g;
        for (;;) {
            g = random_affine(rng, ww.space.pieces[0].flat.ambient, 1);
            if (rank(g.linear) == 1) break;
        }
        SpaceMap gmap{{g}, Target::whole_space(1)};

        Product wx = fibre_product(ww.space, gmap, xx.space, xx.map, 1);
        if (wx.space.pieces.empty()) return true;
        SpaceMap f_pi;  // f o pi_W on W x X pieces
        f_pi.target = Target::whole_space(1);
        for (const auto& p : wx.space.pieces) {
            AffineMap ext;
            ext.linear = Mat(1, p.flat.ambient);
            for (int c = 0; c < f.linear.cols; ++c) ext.linear(0, c) = f.linear(0, c);
            ext.translation = f.translation;
            f_pi.maps.push_back(std::move(ext));
        }
        Product lhs_space = fibre_product(vv.space, vv.map, wx.space, f_pi, 1);

        Product vw = fibre_product(vv.space, vv.map, ww.space, SpaceMap{{f}, f_pi.target}, 1);
        if (vw.space.pieces.empty()) return true;
        SpaceMap g_pi;
        g_pi.target = Target::whole_space(1);
        int av = vv.space.pieces[0].flat.ambient;
        for (const auto& p : vw.space.pieces) {
            AffineMap ext;
            ext.linear = Mat(1, p.flat.ambient);
            for (int c = 0; c < g.linear.cols; ++c) ext.linear(0, av + c) = g.linear(0, c);
            ext.translation = g.translation;
            g_pi.maps.push_back(std::move(ext));
        }
        Product rhs_space = fibre_product(vw.space, g_pi, xx.space, xx.map, 1);
        if (lhs_space.space.pieces.empty() && rhs_space.space.pieces.empty()) return true;
        int amb = !lhs_space.space.pieces.empty() ? lhs_space.space.pieces[0].flat.ambient
                                                  : rhs_space.space.pieces[0].flat.ambient;
        Target ry = Target::whole_space(amb);
        Chain lhs_chain = zero_chain(ZZ, ChainMode::Integral, lhs_space.space.dim, ry);
        Chain rhs_chain = lhs_chain;
        if (!lhs_space.space.pieces.empty()) lhs_chain = embedded(lhs_space.space, ZZ);
        if (!rhs_space.space.pieces.empty()) rhs_chain = embedded(rhs_space.space, ZZ);
        bool ok = equals(lhs_chain, rhs_chain);
        if (!ok) w = "associativity failed";
        return ok;
    }});
    props.push_back({"mixed-product-law", [](Rng& rng, std::string& w) {
        // V x_{(e,f), Y x Z, g x h} (W x X) vs sign (V x_{e,Y,g} W) x_{f.pi,Z,h} X
        SubmersiveSpace vv = random_submersive(rng, 2);
        SubmersiveSpace ww = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        SubmersiveSpace xx = random_submersive(rng, static_cast<int>(rng.integer(1, 2)));
        AffineMap e = vv.map.maps[0];
        AffineMap f;
        for (;;) {
            f = random_affine(rng, vv.space.pieces[0].flat.ambient, 1);
            if (rank(f.linear) == 1) break;
        }
        // (e, f): V -> Y x Z must be a submersion: need rank 2
        Mat ef(2, e.linear.cols);
        for (int c = 0; c < e.linear.cols; ++c) {
            ef(0, c) = e.linear(0, c);
            ef(1, c) = f.linear(0, c);
        }
        if (rank(ef) != 2) return true;  // resample via the next case
        AffineMap efm{ef, Vec{e.translation[0], f.translation[0]}};

        Product wx = product(ww.space, xx.space);
        SpaceMap gxh;
        gxh.target = Target::whole_space(2);
        int aw = ww.space.pieces[0].flat.ambient;
        for (const auto& p : wx.space.pieces) {
            AffineMap m;
            m.linear = Mat(2, p.flat.ambient);
            m.translation = Vec(2);
            for (int c = 0; c < aw; ++c) m.linear(0, c) = ww.map.maps[0].linear(0, c);
            m.translation[0] = ww.map.maps[0].translation[0];
            for (int c = 0; c < xx.space.pieces[0].flat.ambient; ++c)
                m.linear(1, aw + c) = xx.map.maps[0].linear(0, c);
            m.translation[1] = xx.map.maps[0].translation[0];
            gxh.maps.push_back(std::move(m));
        }
        Product lhs_space =
            fibre_product(vv.space, SpaceMap{{efm}, gxh.target}, wx.space, gxh, 2);

        Product vw = fibre_product(vv.space, SpaceMap{{e}, Target::whole_space(1)}, ww.space,
                                   ww.map, 1);
        if (vw.space.pieces.empty()) return lhs_space.space.pieces.empty();
        SpaceMap f_pi;
        f_pi.target = Target::whole_space(1);
        for (const auto& p : vw.space.pieces) {
            AffineMap m;
            m.linear = Mat(1, p.flat.ambient);
            for (int c = 0; c < f.linear.cols; ++c) m.linear(0, c) = f.linear(0, c);
            m.translation = f.translation;
            f_pi.maps.push_back(std::move(m));
        }
        Product rhs_space = fibre_product(vw.space, f_pi, xx.space, xx.map, 1);
        if (lhs_space.space.pieces.empty() && rhs_space.space.pieces.empty()) return true;
        int amb = !lhs_space.space.pieces.empty() ? lhs_space.space.pieces[0].flat.ambient
                                                  : rhs_space.space.pieces[0].flat.ambient;
        Target ry = Target::whole_space(amb);
        // sign (-1)^{dim Z (dim Y + dim W)} with dim Y = dim Z = 1
        int exp = 1 * (1 + ww.space.dim);
        Chain lhs_chain = zero_chain(ZZ, ChainMode::Integral, lhs_space.space.dim, ry);
        Chain rhs_chain = lhs_chain;
        if (!lhs_space.space.pieces.empty()) lhs_chain = embedded(lhs_space.space, ZZ);
        if (!rhs_space.space.pieces.empty())
            rhs_chain = embedded(rhs_space.space, ZZ, Q(exp % 2 ? -1 : 1));
        bool ok = equals(lhs_chain, rhs_chain);
        if (!ok) w = "mixed product law failed";
        return ok;
    }});
    props.push_back({"one-dimensional-boundary-signs", [](Rng& rng, std::string& w) {
        std::vector<Polyhedron> pieces;
        int count = static_cast<int>(rng.integer(1, 4));
        for (int i = 0; i < count; ++i) pieces.push_back(random_bounded_piece(rng, 2, 1));
        CornersSpace v = make_corners(std::move(pieces), 1);
        Boundary b = boundary(v);
        Q total = 0;
        for (const auto& p : b.space.pieces) total += p.orient;
        if (total != 0) {
            w = "boundary signs sum to " + to_string(total);
            return false;
        }
        return true;
    }});
    return props;
}

std::vector<Property> boundary_squared_properties() {
    return {{"boundary-squared", [](Rng& rng, std::string& w) {
        CoefficientRing ring = rng.flip() ? ZZ : QQ;
        int m = static_cast<int>(rng.integer(0, 2));
        Target y = m == 0 ? Target::point() : Target::whole_space(m);
        int n_cap = 3;
        int degree = static_cast<int>(rng.integer(1, 2));
        // dim V = n + degree <= 4
        MChainGenerator g = random_chain_generator(rng, y, degree,
                                                   std::min(n_cap, 4 - degree));
        Chain c = make_chain(ring, ChainMode::Integral, degree, y,
                             {{Q(rng.integer(1, 3)), g}});
        ZeroResult r = is_zero(boundary_chain(boundary_chain(c)));
        if (!r.zero) {
            w = "dd not zero, multiplicity " + to_string(r.witness->multiplicity);
            return false;
        }
        return true;
    }}};
}

std::vector<Property> relation_engine_properties() {
    std::vector<Property> props;
    props.push_back({"stabilization", [](Rng& rng, std::string&) {
        Target y = Target::whole_space(1);
        MChainGenerator g = random_chain_generator(rng, y, 1, 2);
        int slot = static_cast<int>(rng.integer(0, g.n));
        auto [sig, st] = stabilize(g, slot);
        Chain a = make_chain(ZZ, ChainMode::Integral, 1, y, {{Q(1), g}});
        Chain b = make_chain(ZZ, ChainMode::Integral, 1, y, {{Q(sig), st}});
        return equals(a, b);
    }});
    props.push_back({"zero-constructions", [](Rng& rng, std::string& w) {
        Target y = rng.flip() ? Target::point() : Target::whole_space(1);
        Chain z = random_zero_chain(rng, ZZ, y);
        ZeroResult r = is_zero(z);
        if (!r.zero) {
            w = "constructed zero not recognized";
            return false;
        }
        return true;
    }});
    props.push_back({"vanishing-above-dimension", [](Rng& rng, std::string&) {
        int m = static_cast<int>(rng.integer(0, 1));
        Target y = m == 0 ? Target::point() : Target::whole_space(m);
        int degree = m + static_cast<int>(rng.integer(1, 2));
        MChainGenerator g = random_chain_generator(rng, y, degree, 2);
        Chain c = make_chain(ZZ, ChainMode::Integral, degree, y, {{Q(rng.integer(1, 5)), g}});
        return is_zero(c).zero;
    }});
    props.push_back({"pushforward-chain-map", [](Rng& rng, std::string&) {
        Target y = Target::whole_space(2);
        MChainGenerator g = random_chain_generator(rng, y, 1, 1);
        Chain c = make_chain(ZZ, ChainMode::Integral, 1, y, {{Q(1), g}});
        AffineMap f = random_affine(rng, 2, 2);
        return equals(boundary_chain(pushforward(f, y, c)),
                      pushforward(f, y, boundary_chain(c)));
    }});
    props.push_back({"barycentric-identity", [](Rng& rng, std::string&) {
        int k = static_cast<int>(rng.integer(1, 2));
        Target y = Target::whole_space(k);
        AffineMap sigma = random_affine(rng, k + 1, k);
        SingularChain c = make_singular(ZZ, k, y, {{Q(1), sigma}});
        return equals(to_mchain(c), to_mchain(barycentric(c)));
    }});
    props.push_back({"rational-permutation", [](Rng& rng, std::string&) {
        Target y = Target::point();
        MChainGenerator g = random_chain_generator(rng, y, 0, 2);
        while (g.n < 2) {
            auto [sig, st] = stabilize(g, g.n);
            (void)sig;
            g = std::move(st);
        }
        // swap the first two reference coordinates
        MChainGenerator swapped = g;
        for (auto& m : swapped.s.maps) {
            for (int c = 0; c < m.linear.cols; ++c) std::swap(m.linear(0, c), m.linear(1, c));
            std::swap(m.translation[0], m.translation[1]);
        }
        Chain a = make_chain(QQ, ChainMode::Rational, 0, y, {{Q(1), g}});
        Chain b = make_chain(QQ, ChainMode::Rational, 0, y, {{Q(-1), swapped}});
        return equals(a, b);
    }});
    props.push_back({"point-class-detection", [](Rng& rng, std::string&) {
        long r = rng.integer(1, 5);
        ZeroResult res = is_zero(point_chain(ZZ, Q(r)));
        return !res.zero && res.witness && res.witness->multiplicity == r;
    }});
    return props;
}

Cochain random_line_cochain(Rng& rng, CoefficientRing ring, ChainMode mode,
                            CochainVariant variant = CochainVariant::Precochain) {
    Target r1 = Target::whole_space(1);
    Polyhedron line;
    line.flat = full_flat(1);
    CornersSpace v = make_corners({line}, 1);
    Q a = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
    Q c = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
    SpaceMap s{{AffineMap{Mat::from_rows({{a}}), Vec{rng.rational(2, 2)}}},
               Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{c}}), Vec{rng.rational(2, 2)}}}, r1};
    return make_cochain(ring, mode, variant, 1, r1,
                        {{Q(rng.integer(1, 3)), make_cochain_generator(v, 1, s, t, variant)}});
}

Cochain random_strip_cochain(Rng& rng, CoefficientRing ring, ChainMode mode) {
    Target r1 = Target::whole_space(1);
    Polyhedron p;
    p.flat = full_flat(2);
    Q lo = rng.rational(2, 2);
    Q hi = lo + Q(rng.integer(1, 3));
    p.ineqs = {{{Q(0), Q(-1)}, -lo, false}, {{Q(0), Q(1)}, hi, false}};
    CornersSpace v = make_corners({p}, 2);
    Q c = Q(rng.integer(1, 2) * (rng.flip() ? 1 : -1));
    SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{-(lo + hi) / 2}}},
               Target::euclidean(1)};
    SpaceMap t{{AffineMap{Mat::from_rows({{c, Q(0)}}), Vec{rng.rational(2, 2)}}}, r1};
    return make_cochain(ring, mode, CochainVariant::Precochain, 0, r1,
                        {{Q(rng.integer(1, 2)), make_cochain_generator(
                                                     v, 1, s, t, CochainVariant::Precochain)}});
}

Cochain random_cochain(Rng& rng, CoefficientRing ring, ChainMode mode) {
    return rng.flip() ? random_line_cochain(rng, ring, mode) : random_strip_cochain(rng, ring, mode);
}

Chain random_segment_chain(Rng& rng, CoefficientRing ring) {
    Target r1 = Target::whole_space(1);
    Polyhedron p;
    p.flat = full_flat(1);
    Q lo = rng.rational(3, 2);
    Q hi = lo + Q(rng.integer(1, 3));
    p.ineqs = {{{Q(-1)}, -lo, false}, {{Q(1)}, hi, false}};
    p.orient = rng.flip() ? 1 : -1;
    CornersSpace v = make_corners({p}, 1);
    SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap::identity(1)}, r1};
    return make_chain(ring, ChainMode::Integral, 1, r1,
                      {{Q(rng.integer(1, 3)), make_generator(v, 0, s, t)}});
}

std::vector<Property> cup_algebra_properties() {
    std::vector<Property> props;
    props.push_back({"identity-laws", [](Rng& rng, std::string&) {
        Cochain id = identity_cocycle(ZZ, ChainMode::Integral, Target::whole_space(1));
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        return equals(cup(id, a), a) && equals(cup(a, id), a);
    }});
    props.push_back({"associativity", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain b = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain c = random_cochain(rng, ZZ, ChainMode::Integral);
        return equals(cup(cup(a, b), c), cup(a, cup(b, c)));
    }});
    props.push_back({"leibniz", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain b = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain lhs = coboundary(cup(a, b));
        Cochain rhs = add(cup(coboundary(a), b),
                          a.degree % 2 ? negate(cup(a, coboundary(b)))
                                       : cup(a, coboundary(b)));
        return equals(lhs, rhs);
    }});
    props.push_back({"pullback-multiplicative", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain b = random_cochain(rng, ZZ, ChainMode::Integral);
        Q c = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
        AffineMap f{Mat::from_rows({{c}}), Vec{rng.rational(2, 2)}};
        Target r1 = Target::whole_space(1);
        return equals(pullback(f, r1, cup(a, b)),
                      cup(pullback(f, r1, a), pullback(f, r1, b)));
    }});
    props.push_back({"rational-supercommutativity", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, QQ, ChainMode::Rational);
        Cochain b = random_cochain(rng, QQ, ChainMode::Rational);
        int sign = (a.degree * b.degree) % 2 ? -1 : 1;
        return is_zero_cochain(add(cup(a, b), scale_cochain(Q(-sign), cup(b, a)))).zero;
    }});
    props.push_back({"integral-supercommutativity-witness", [](Rng& rng, std::string& w) {
        // the checker must exhibit at least one violation of naive
        // supercommutativity over the integers
        Cochain a = random_line_cochain(rng, ZZ, ChainMode::Integral);
        Cochain self = cup(a, a);
        ZeroResult r = is_zero_cochain(add(self, self));  // self = -self would make this 0
        if (r.zero) {
            w = "no witness: a u a is 2-torsion";
            return false;
        }
        return true;
    }});
    return props;
}

std::vector<Property> cap_cross_properties() {
    std::vector<Property> props;
    const Target r1 = Target::whole_space(1);
    props.push_back({"cap-identity", [r1](Rng& rng, std::string&) {
        Chain b = random_segment_chain(rng, ZZ);
        return equals(cap(identity_cocycle(ZZ, ChainMode::Integral, r1), b), b);
    }});
    props.push_back({"cup-cap-module", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain b = random_cochain(rng, ZZ, ChainMode::Integral);
        Chain c = random_segment_chain(rng, ZZ);
        return equals(cap(cup(a, b), c), cap(a, cap(b, c)));
    }});
    props.push_back({"cap-boundary-rule", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Chain b = random_segment_chain(rng, ZZ);
        Chain lhs = boundary_chain(cap(a, b));
        Chain rhs = add(cap(coboundary(a), b),
                        a.degree % 2 ? negate(cap(a, boundary_chain(b)))
                                     : cap(a, boundary_chain(b)));
        return equals(lhs, rhs);
    }});
    props.push_back({"projection-formula", [r1](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Chain b = random_segment_chain(rng, ZZ);
        Q c = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
        AffineMap f{Mat::from_rows({{c}}), Vec{rng.rational(2, 2)}};
        return equals(cap(a, pushforward(f, r1, b)),
                      pushforward(f, r1, cap(pullback(f, r1, a), b)));
    }});
    props.push_back({"cross-boundary-rule", [](Rng& rng, std::string&) {
        Chain a = random_segment_chain(rng, ZZ);
        Chain b = random_segment_chain(rng, ZZ);
        Chain lhs = boundary_chain(cross_chain(a, b));
        Chain rhs = add(cross_chain(boundary_chain(a), b),
                        negate(cross_chain(a, boundary_chain(b))));
        return equals(lhs, rhs);
    }});
    props.push_back({"cross-associativity", [](Rng& rng, std::string&) {
        Chain a = random_segment_chain(rng, ZZ);
        Chain b = random_segment_chain(rng, ZZ);
        Chain c = random_segment_chain(rng, ZZ);
        return equals(cross_chain(cross_chain(a, b), c), cross_chain(a, cross_chain(b, c)));
    }});
    props.push_back({"cross-pushforward", [r1](Rng& rng, std::string&) {
        Chain a = random_segment_chain(rng, ZZ);
        Chain b = random_segment_chain(rng, ZZ);
        Q c1 = Q(rng.integer(1, 3)), c2 = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
        AffineMap g1{Mat::from_rows({{c1}}), Vec{rng.rational(2, 2)}};
        AffineMap g2{Mat::from_rows({{c2}}), Vec{rng.rational(2, 2)}};
        AffineMap g12{Mat::from_rows({{c1, Q(0)}, {Q(0), c2}}),
                      Vec{g1.translation[0], g2.translation[0]}};
        Target r2 = product_target(r1, r1);
        return equals(pushforward(g12, r2, cross_chain(a, b)),
                      cross_chain(pushforward(g1, r1, a), pushforward(g2, r1, b)));
    }});
    props.push_back({"cross-cup-compatibility", [r1](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain b = random_cochain(rng, ZZ, ChainMode::Integral);
        Target r2 = product_target(r1, r1);
        AffineMap pi1{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}};
        AffineMap pi2{Mat::from_rows({{Q(0), Q(1)}}), Vec{Q(0)}};
        return equals(cross_cochain(a, b),
                      cup(pullback(pi1, r2, a), pullback(pi2, r2, b)));
    }});
    props.push_back({"duality-square", [r1](Rng& rng, std::string&) {
        Cochain a = random_line_cochain(rng, ZZ, ChainMode::Integral,
                                        CochainVariant::CompactlySupported);
        Q c = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
        AffineMap f{Mat::from_rows({{c}}), Vec{rng.rational(2, 2)}};
        Chain lhs = pd_compact(pullback(f, r1, a), ChainMode::Integral);
        Chain rhs = shriek_lower(f, r1, pd_compact(a, ChainMode::Integral));
        return equals(lhs, rhs);
    }});
    props.push_back({"shriek-chain-map", [r1](Rng& rng, std::string&) {
        Chain b = random_segment_chain(rng, ZZ);
        Q c = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
        AffineMap f{Mat::from_rows({{c}}), Vec{rng.rational(2, 2)}};
        return equals(boundary_chain(shriek_lower(f, r1, b)),
                      shriek_lower(f, r1, boundary_chain(b)));
    }});
    return props;
}

std::vector<Property> xi_duality_properties() {
    std::vector<Property> props;
    const Target r1 = Target::whole_space(1);
    props.push_back({"xi-involution", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        return equals(xi(xi(a)), a);
    }});
    props.push_back({"xi-fixes-identity", [r1](Rng&, std::string&) {
        Cochain id = identity_cocycle(ZZ, ChainMode::Integral, r1);
        return equals(xi(id), id);
    }});
    props.push_back({"xi-anti-homomorphism", [](Rng& rng, std::string&) {
        Cochain a = random_cochain(rng, ZZ, ChainMode::Integral);
        Cochain b = random_cochain(rng, ZZ, ChainMode::Integral);
        int sign = (a.degree * b.degree) % 2 ? -1 : 1;
        return equals(xi(cup(a, b)), scale_cochain(Q(sign), cup(xi(b), xi(a))));
    }});
    props.push_back({"pd-fundamental", [r1](Rng&, std::string&) {
        Cochain id = identity_cocycle(ZZ, ChainMode::Integral, r1);
        Cochain fy = pd(id);
        // the fundamental prechain restricted and compared directly
        Polyhedron line;
        line.flat = full_flat(1);
        CornersSpace v = make_corners({line}, 1);
        SpaceMap s{{AffineMap{Mat(0, 1), Vec{}}}, Target::euclidean(0)};
        SpaceMap t{{AffineMap::identity(1)}, r1};
        Cochain direct = make_cochain(
            ZZ, ChainMode::Integral, CochainVariant::LocallyFiniteChain, 1, r1,
            {{Q(1),
              make_cochain_generator(v, 0, s, t, CochainVariant::LocallyFiniteChain)}});
        return equals(fy, direct);
    }});
    props.push_back({"pd-boundary-square", [](Rng& rng, std::string&) {
        Cochain g = random_strip_cochain(rng, ZZ, ChainMode::Integral);
        return equals(pd(coboundary(g)), coboundary(pd(g)));
    }});
    props.push_back({"shriek-upper-functorial", [r1](Rng& rng, std::string&) {
        Cochain a = random_line_cochain(rng, ZZ, ChainMode::Integral,
                                        CochainVariant::CompactlySupported);
        Q c1 = Q(rng.integer(1, 3)), c2 = Q(rng.integer(1, 3) * (rng.flip() ? 1 : -1));
        AffineMap f{Mat::from_rows({{c1}}), Vec{rng.rational(2, 2)}};
        AffineMap g{Mat::from_rows({{c2}}), Vec{rng.rational(2, 2)}};
        return equals(shriek_upper(compose(g, f), r1, a),
                      shriek_upper(g, r1, shriek_upper(f, r1, a)));
    }});
    return props;
}

struct MvConfig {
    Target t_dom, u_dom, uni, inter;
    CutFunction f;
};

MvConfig random_mv_config(Rng& rng) {
    MvConfig out;
    if (rng.flip()) {
        // 1-D overlapping intervals
        Q t0 = rng.rational(3, 2);
        Q u0 = t0 + Q(rng.integer(1, 2));
        Q t1 = u0 + Q(rng.integer(1, 2));
        Q u1 = t1 + Q(rng.integer(1, 2));
        out.t_dom = Target::domain(1, {{{{Q(-1)}, -t0, true}, {{Q(1)}, t1, true}}});
        out.u_dom = Target::domain(1, {{{{Q(-1)}, -u0, true}, {{Q(1)}, u1, true}}});
        out.uni = Target::domain(1, {out.t_dom.components[0], out.u_dom.components[0]});
        out.inter = Target::domain(1, {{{{Q(-1)}, -u0, true}, {{Q(1)}, t1, true}}});
        Q mid = (u0 + t1) / 2;
        out.f = CutFunction::affine({Q(-1)}, mid);
    } else {
        // 2-D overlapping boxes with the piecewise box-difference cut
        std::vector<std::pair<Q, Q>> tb, ub;
        for (int i = 0; i < 2; ++i) {
            Q t0 = rng.rational(2, 1);
            Q u0 = t0 + Q(rng.integer(1, 2));
            Q t1 = u0 + Q(rng.integer(1, 2));
            Q u1 = t1 + Q(rng.integer(1, 2));
            tb.push_back({t0, t1});
            ub.push_back({u0, u1});
        }
        auto box_target = [](const std::vector<std::pair<Q, Q>>& b) {
            std::vector<Halfspace> comp;
            for (int i = 0; i < 2; ++i) {
                Vec lo(2), hi(2);
                lo[i] = -1;
                hi[i] = 1;
                comp.push_back({lo, -b[i].first, true});
                comp.push_back({hi, b[i].second, true});
            }
            return comp;
        };
        out.t_dom = Target::domain(2, {box_target(tb)});
        out.u_dom = Target::domain(2, {box_target(ub)});
        out.uni = Target::domain(2, {box_target(tb), box_target(ub)});
        std::vector<std::pair<Q, Q>> ib;
        for (int i = 0; i < 2; ++i) ib.push_back({ub[i].first, tb[i].second});
        out.inter = Target::domain(2, {box_target(ib)});
        out.f = CutFunction::box_difference(tb, ub);
    }
    validate_cut(out.f, out.t_dom, out.u_dom, out.uni);
    return out;
}

Chain interior_segment_chain(Rng& rng, const MvConfig& cfg) {
    // a small box chain strictly inside the intersection
    int m = cfg.uni.ambient;
    const auto& comp = cfg.inter.components[0];
    // compute the intersection box bounds back from the component
    std::vector<Q> lo(m), hi(m);
    for (const auto& h : comp) {
        for (int i = 0; i < m; ++i) {
            if (h.normal[i] == -1) lo[i] = -h.offset;
            if (h.normal[i] == 1) hi[i] = h.offset;
        }
    }
    Polyhedron p;
    p.flat = full_flat(m);
    for (int i = 0; i < m; ++i) {
        Q mid = (lo[i] + hi[i]) / 2;
        Q radius = (hi[i] - lo[i]) / Q(rng.integer(3, 5));
        Vec l(m), h2(m);
        l[i] = -1;
        h2[i] = 1;
        p.ineqs.push_back({l, -(mid - radius), false});
        p.ineqs.push_back({h2, mid + radius, false});
    }
    CornersSpace v = make_corners({p}, m);
    SpaceMap s = zero_reference(v);
    SpaceMap t{{AffineMap::identity(m)}, cfg.inter};
    return make_chain(ZZ, ChainMode::Integral, m, cfg.inter,
                      {{Q(rng.integer(1, 3)), make_generator(v, 0, s, t)}});
}

std::vector<Property> mv_gluing_properties() {
    std::vector<Property> props;
    props.push_back({"chain-decomposition", [](Rng& rng, std::string&) {
        MvConfig cfg = random_mv_config(rng);
        Chain inner = interior_segment_chain(rng, cfg);
        Chain alpha = pushforward(AffineMap::identity(cfg.uni.ambient), cfg.uni, inner);
        Chain left = mv_chain_split(alpha, cfg.t_dom, MvSide::TMinus, cfg.f);
        Chain right = mv_chain_split(alpha, cfg.u_dom, MvSide::UPlus, cfg.f);
        Chain glued = add(pushforward(AffineMap::identity(cfg.uni.ambient), cfg.uni, left),
                          pushforward(AffineMap::identity(cfg.uni.ambient), cfg.uni, right));
        return equals(glued, alpha);
    }});
    props.push_back({"chain-exactness-middle", [](Rng& rng, std::string&) {
        MvConfig cfg = random_mv_config(rng);
        Chain delta0 = interior_segment_chain(rng, cfg);
        int m = cfg.uni.ambient;
        Chain beta = pushforward(AffineMap::identity(m), cfg.t_dom, delta0);
        Chain gamma = negate(pushforward(AffineMap::identity(m), cfg.u_dom, delta0));
        Chain delta = add(mv_chain_split(beta, cfg.inter, MvSide::UPlus, cfg.f),
                          negate(mv_chain_split(gamma, cfg.inter, MvSide::TMinus, cfg.f)));
        return equals(pushforward(AffineMap::identity(m), cfg.t_dom, delta), beta) &&
               equals(pushforward(AffineMap::identity(m), cfg.u_dom, delta), negate(gamma)) &&
               equals(delta, delta0);
    }});
    props.push_back({"chain-fix", [](Rng& rng, std::string&) {
        // a chain supported where f o t < 0 is fixed by the U-side operator
        MvConfig cfg = random_mv_config(rng);
        int m = cfg.uni.ambient;
        // build a small box chain strictly inside U where f < 0: centre of U
        const auto& comp = cfg.u_dom.components[0];
        std::vector<Q> lo(m), hi(m);
        for (const auto& h : comp)
            for (int i = 0; i < m; ++i) {
                if (h.normal[i] == -1) lo[i] = -h.offset;
                if (h.normal[i] == 1) hi[i] = h.offset;
            }
        Polyhedron p;
        p.flat = full_flat(m);
        for (int i = 0; i < m; ++i) {
            // bias toward the deep end of U, away from T
            Q mid = lo[i] + (hi[i] - lo[i]) * Q(3, 4);
            Q radius = (hi[i] - lo[i]) / 16;
            Vec l(m), h2(m);
            l[i] = -1;
            h2[i] = 1;
            p.ineqs.push_back({l, -(mid - radius), false});
            p.ineqs.push_back({h2, mid + radius, false});
        }
        // only use it when f is genuinely negative on the box
        Vec corner_lo(m), corner_hi(m);
        for (int i = 0; i < m; ++i) {
            corner_lo[i] = lo[i] + (hi[i] - lo[i]) * Q(3, 4) - (hi[i] - lo[i]) / 16;
            corner_hi[i] = lo[i] + (hi[i] - lo[i]) * Q(3, 4) + (hi[i] - lo[i]) / 16;
        }
        if (cut_eval(cfg.f, corner_lo) >= 0 || cut_eval(cfg.f, corner_hi) >= 0) return true;
        CornersSpace v = make_corners({p}, m);
        SpaceMap s = zero_reference(v);
        SpaceMap t{{AffineMap::identity(m)}, cfg.u_dom};
        Chain deep = make_chain(ZZ, ChainMode::Integral, m, cfg.u_dom,
                                {{Q(rng.integer(1, 3)), make_generator(v, 0, s, t)}});
        Chain pushed = pushforward(AffineMap::identity(m), cfg.uni, deep);
        return equals(mv_chain_split(pushed, cfg.u_dom, MvSide::UPlus, cfg.f), deep);
    }});
    props.push_back({"precochain-fix", [](Rng& rng, std::string&) {
        // 1-D cover; a cochain generator whose reference zeros sit where
        // f o t > 0 is recovered exactly from its T-side extension
        Q t0 = rng.rational(3, 2);
        Q u0 = t0 + Q(rng.integer(1, 2));
        Q t1 = u0 + Q(rng.integer(1, 2));
        Q u1 = t1 + Q(rng.integer(1, 2));
        Target t_dom = Target::domain(1, {{{{Q(-1)}, -t0, true}, {{Q(1)}, t1, true}}});
        Target u_dom = Target::domain(1, {{{{Q(-1)}, -u0, true}, {{Q(1)}, u1, true}}});
        Target uni = Target::domain(1, {t_dom.components[0], u_dom.components[0]});
        Q mid = (u0 + t1) / 2;
        CutFunction f = CutFunction::affine({Q(-1)}, mid);  // f(y) = mid - y

        // diamond over the deep part of T (where y < mid so f > 0): centre c,
        // half width w, vertical extent 2; vertices cut out by strict sides
        Q c = (t0 + mid) / 2;
        Q w = (mid - t0) / Q(rng.integer(3, 5));
        Polyhedron p;
        p.flat = full_flat(2);
        Q a = 2 / w;  // slope so the diamond's y-extent is [c-w, c+w]
        p.ineqs = {{{a, Q(1)}, a * c + 2, false},   {{-a, Q(1)}, -a * c + 2, false},
                   {{a, Q(-1)}, a * c + 2, false},  {{-a, Q(-1)}, -a * c + 2, false},
                   {{Q(1), Q(0)}, c + w, true},     {{Q(-1), Q(0)}, -(c - w), true},
                   {{Q(0), Q(1)}, Q(2), true},      {{Q(0), Q(-1)}, Q(2), true}};
        CornersSpace v = make_corners({p}, 2);
        SpaceMap s{{AffineMap{Mat::from_rows({{Q(0), Q(1)}}), Vec{Q(-1, 2)}}},
                   Target::euclidean(1)};
        SpaceMap t{{AffineMap{Mat::from_rows({{Q(1), Q(0)}}), Vec{Q(0)}}}, t_dom};
        Cochain local = make_cochain(
            ZZ, ChainMode::Integral, CochainVariant::Precochain, 0, t_dom,
            {{Q(rng.integer(1, 3)),
              make_cochain_generator(v, 1, s, t, CochainVariant::Precochain)}});
        Cochain extended = mv_split(local, uni, MvSide::TMinus, f);
        return equals(pullback(AffineMap::identity(1), t_dom, extended), local);
    }});
    props.push_back({"precochain-gluing", [](Rng& rng, std::string&) {
        MvConfig cfg = random_mv_config(rng);
        Cochain alpha = identity_cocycle(ZZ, ChainMode::Integral, cfg.uni);
        int m = cfg.uni.ambient;
        Cochain on_t = pullback(AffineMap::identity(m), cfg.t_dom, alpha);
        Cochain on_u = pullback(AffineMap::identity(m), cfg.u_dom, alpha);
        Cochain glued = add(mv_split(on_t, cfg.uni, MvSide::TMinus, cfg.f),
                            mv_split(on_u, cfg.uni, MvSide::UPlus, cfg.f));
        return equals(glued, alpha);
    }});
    props.push_back({"precochain-exactness-middle", [](Rng& rng, std::string&) {
        MvConfig cfg = random_mv_config(rng);
        int m = cfg.uni.ambient;
        Cochain alpha = identity_cocycle(ZZ, ChainMode::Integral, cfg.uni);
        Cochain beta = pullback(AffineMap::identity(m), cfg.t_dom, alpha);
        Cochain gamma = pullback(AffineMap::identity(m), cfg.u_dom, alpha);
        if (!is_zero_cochain(add(pullback(AffineMap::identity(m), cfg.inter, beta),
                                 negate(pullback(AffineMap::identity(m), cfg.inter, gamma))))
                 .zero)
            return false;
        Cochain rebuilt = add(mv_split(beta, cfg.uni, MvSide::TMinus, cfg.f),
                              mv_split(gamma, cfg.uni, MvSide::UPlus, cfg.f));
        return equals(pullback(AffineMap::identity(m), cfg.t_dom, rebuilt), beta) &&
               equals(pullback(AffineMap::identity(m), cfg.u_dom, rebuilt), gamma);
    }});
    return props;
}

std::vector<Property> singular_bridge_properties() {
    std::vector<Property> props;
    props.push_back({"boundary-squared", [](Rng& rng, std::string&) {
        int k = static_cast<int>(rng.integer(2, 3));
        Target y = Target::whole_space(2);
        SingularChain c = make_singular(ZZ, k, y, {{Q(rng.integer(1, 3)),
                                                    random_affine(rng, k + 1, 2)}});
        return singular_boundary(singular_boundary(c)).terms.empty();
    }});
    props.push_back({"subdivision-chain-map", [](Rng& rng, std::string&) {
        int k = static_cast<int>(rng.integer(1, 2));
        Target y = Target::whole_space(2);
        SingularChain c = make_singular(
            ZZ, k, y,
            {{Q(rng.integer(1, 2)), random_affine(rng, k + 1, 2)},
             {Q(rng.integer(-2, -1)), random_affine(rng, k + 1, 2)}});
        return identical(barycentric(singular_boundary(c)), singular_boundary(barycentric(c)));
    }});
    props.push_back({"comparison-subdivision-invariance", [](Rng& rng, std::string&) {
        int k = static_cast<int>(rng.integer(1, 2));
        Target y = Target::whole_space(k);
        SingularChain c = make_singular(ZZ, k, y, {{Q(1), random_affine(rng, k + 1, k)}});
        return equals(to_mchain(c), to_mchain(barycentric(c)));
    }});
    props.push_back({"comparison-chain-map", [](Rng& rng, std::string&) {
        int k = static_cast<int>(rng.integer(1, 2));
        Target y = Target::whole_space(2);
        SingularChain c = make_singular(ZZ, k, y, {{Q(rng.integer(1, 2)),
                                                    random_affine(rng, k + 1, 2)}});
        return equals(boundary_chain(to_mchain(c)), to_mchain(singular_boundary(c)));
    }});
    props.push_back({"comparison-pushforward", [](Rng& rng, std::string&) {
        Target y = Target::whole_space(2);
        SingularChain c = make_singular(ZZ, 2, y, {{Q(1), random_affine(rng, 3, 2)}});
        AffineMap f = random_affine(rng, 2, 2);
        return equals(to_mchain(singular_pushforward(f, y, c)),
                      pushforward(f, y, to_mchain(c)));
    }});
    props.push_back({"homotopy-identity", [](Rng& rng, std::string&) {
        Target y = Target::whole_space(1);
        Chain alpha = random_segment_chain(rng, ZZ);
        // straight-line homotopies share the linear part; one breakpoint
        Q a = Q(rng.integer(1, 2) * (rng.flip() ? 1 : -1));
        Q c1 = Q(rng.integer(-2, 2)), c2 = Q(rng.integer(-2, 2));
        Q tau(1, 2);
        Q b1 = rng.rational(2, 2);
        // continuity at tau: b2 = b1 + tau (c1 - c2)
        Q b2 = b1 + tau * (c1 - c2);
        Homotopy g = make_homotopy(
            {Q(0), tau, Q(1)},
            {AffineMap{Mat::from_rows({{a, c1}}), Vec{b1}},
             AffineMap{Mat::from_rows({{a, c2}}), Vec{b2}}});
        Chain lhs = add(boundary_chain(homotopy_G(g, y, alpha)),
                        homotopy_G(g, y, boundary_chain(alpha)));
        Chain rhs = add(pushforward(homotopy_end(g, true), y, alpha),
                        negate(pushforward(homotopy_end(g, false), y, alpha)));
        return equals(lhs, rhs);
    }});
    return props;
}

std::vector<Property> derham_stokes_properties() {
    std::vector<Property> props;
    props.push_back({"fixed-integrals", [](Rng&, std::string& w) {
        Polyhedron tri;
        tri.flat = full_flat(2);
        tri.ineqs = {{{Q(-1), Q(0)}, Q(0), false},
                     {{Q(0), Q(-1)}, Q(0), false},
                     {{Q(1), Q(1)}, Q(1), false}};
        PolyForm area = PolyForm::monomial(2, Polynomial::constant(2, Q(1)), {0, 1});
        PolyForm x1x2 = PolyForm::monomial(
            2, Polynomial::variable(2, 0) * Polynomial::variable(2, 1), {0, 1});
        if (integrate(area, tri) != Q(1, 2)) {
            w = "area of the standard triangle";
            return false;
        }
        if (integrate(x1x2, tri) != Q(1, 24)) {
            w = "x1 x2 over the standard triangle";
            return false;
        }
        return true;
    }});
    props.push_back({"stokes-exact", [](Rng& rng, std::string& w) {
        int d = static_cast<int>(rng.integer(1, 2));
        Polyhedron p = rng.flip() ? random_bounded_piece(rng, d, d) : random_simplex_piece(rng, d);
        p.orient = 1;
        CornersSpace v = make_corners({p}, d);
        // random (d-1)-form with coefficient degree <= 3
        PolyForm form;
        form.ambient = d;
        form.degree = d - 1;
        for (int drop = 0; drop < d; ++drop) {
            std::vector<int> idx;
            for (int i = 0; i < d; ++i)
                if (i != drop) idx.push_back(i);
            Polynomial coeff = Polynomial::constant(d, rng.rational(2, 2));
            for (int deg = 0; deg < 3; ++deg) {
                if (rng.flip()) continue;
                Polynomial mono = Polynomial::constant(d, Q(rng.integer(-2, 2)));
                for (int f2 = 0; f2 <= deg; ++f2)
                    mono = mono * Polynomial::variable(d, static_cast<int>(rng.integer(0, d - 1)));
                coeff = coeff + mono;
            }
            form = form + PolyForm::monomial(d, coeff, idx);
        }
        StokesCheck sc = stokes_check(form, v);
        if (!sc.equal) {
            w = "lhs " + to_string(sc.lhs) + " rhs " + to_string(sc.rhs);
            return false;
        }
        return true;
    }});
    return props;
}

std::vector<Property> derham_crosscheck_properties() {
    return {{"zero-chains-pair-to-zero", [](Rng& rng, std::string& w) {
        Target y = rng.flip() ? Target::point() : Target::whole_space(1);
        Chain z = random_zero_chain(rng, ZZ, y);
        ZeroResult r = is_zero(z);
        if (!r.zero) {
            w = "constructed chain not certified zero";
            return false;
        }
        Chain nf = normal_form(z);
        if (nf.terms.empty()) return true;  // structurally zero pairs trivially
        int n = nf.terms[0].second.n;
        int m = y.ambient;
        DRChain dz = to_derham(nf);
        Q eps(1, 2);
        for (const auto& [c, g] : nf.terms)
            if (g.properness.radius && *g.properness.radius < eps) eps = *g.properness.radius;
        std::vector<Halfspace> window;
        for (int i = 0; i < n; ++i) {
            Vec lo(n), hi(n);
            lo[i] = -1;
            hi[i] = 1;
            window.push_back({lo, eps / 2, false});
            window.push_back({hi, eps / 2, false});
        }
        for (int trial = 0; trial < 5; ++trial) {
            // random (n + degree)-form on R^{n+m}
            int p = n + nf.degree;
            if (p > n + m) return true;  // no nonzero forms in that degree
            PolyForm eta;
            eta.ambient = n + m;
            eta.degree = p;
            std::vector<int> idx;
            // random increasing index set
            int start = static_cast<int>(rng.integer(0, n + m - p));
            for (int i = 0; i < p; ++i) idx.push_back(start + i);
            Polynomial coeff = Polynomial::constant(n + m, Q(rng.integer(-3, 3)));
            if (rng.flip() && n + m > 0)
                coeff = coeff * Polynomial::variable(n + m,
                                                     static_cast<int>(rng.integer(0, n + m - 1)));
            eta = PolyForm::monomial(n + m, coeff, idx);
            Q val = pair(dz, eta, window);
            if (val != 0) {
                w = "pairing value " + to_string(val);
                return false;
            }
        }
        return true;
    }}};
}

std::vector<Property> mh0_point_properties() {
    std::vector<Property> props;
    props.push_back({"class-of-cycles", [](Rng& rng, std::string& w) {
        long r = rng.integer(-5, 5);
        Chain alpha = point_chain(ZZ, Q(r));
        // random degree-1 chain on the point
        MChainGenerator beta = random_chain_generator(rng, Target::point(), 1, 2);
        Chain b = make_chain(ZZ, ChainMode::Integral, 1, Target::point(),
                             {{Q(rng.integer(-2, 2)), beta}});
        Chain cyc = add(alpha, boundary_chain(b));
        Q cls = mh0_class(cyc);
        if (cls != r) {
            w = "expected " + std::to_string(r) + " got " + to_string(cls);
            return false;
        }
        return true;
    }});
    props.push_back({"degree-additivity", [](Rng& rng, std::string&) {
        long r1 = rng.integer(-3, 3), r2 = rng.integer(-3, 3);
        Chain a = point_chain(ZZ, Q(r1));
        Chain b = point_chain(ZZ, Q(r2));
        return mh0_class(add(a, b)) == Q(r1 + r2);
    }});
    return props;
}

using SuiteFn = std::vector<Property> (*)();

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"sign-laws", sign_law_properties},
        {"boundary-squared", boundary_squared_properties},
        {"relation-engine", relation_engine_properties},
        {"cup-algebra", cup_algebra_properties},
        {"cap-cross", cap_cross_properties},
        {"xi-duality", xi_duality_properties},
        {"mv-gluing", mv_gluing_properties},
        {"singular-bridge", singular_bridge_properties},
        {"derham-stokes", derham_stokes_properties},
        {"derham-crosscheck", derham_crosscheck_properties},
        {"mh0-point", mh0_point_properties},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : suite_table()) out.push_back(name);
        return out;
    }();
    return names;
}

VerificationReport run_suite(const std::string& name, uint64_t seed, int cases) {
    const SuiteFn* fn = nullptr;
    for (const auto& [n, f] : suite_table())
        if (n == name) fn = &f;
    if (!fn) throw UnknownSuite(name);
    VerificationReport report;
    report.suite = name;
    report.seed = seed;
    report.cases = cases;
    auto start = std::chrono::steady_clock::now();
    std::vector<Property> props = (*fn)();
    for (size_t i = 0; i < props.size(); ++i)
        report.properties.push_back(
            run_property(props[i], seed, cases, static_cast<int>(i)));
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return report;
}

std::string report_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["format"] = "mchain-report-v1";
    j["suite"] = r.suite;
    j["seed"] = r.seed;
    j["cases"] = r.cases;
    j["pass"] = r.all_pass();
    nlohmann::ordered_json props = nlohmann::ordered_json::array();
    for (const auto& p : r.properties) {
        nlohmann::ordered_json pj;
        pj["name"] = p.name;
        pj["cases"] = p.cases;
        pj["pass"] = p.pass;
        if (!p.witness.empty()) pj["witness"] = p.witness;
        props.push_back(std::move(pj));
    }
    j["properties"] = std::move(props);
    return j.dump(2) + "\n";
}

std::string report_text(const VerificationReport& r) {
    std::ostringstream out;
    out << "suite " << r.suite << " seed " << r.seed << " cases " << r.cases << "\n";
    for (const auto& p : r.properties) {
        out << "  " << (p.pass ? "pass" : "FAIL") << "  " << p.name << " (" << p.cases
            << " cases)";
        if (!p.witness.empty()) out << "  [" << p.witness << "]";
        out << "\n";
    }
    out << (r.all_pass() ? "all properties hold" : "PROPERTY VIOLATION") << "  ("
        << r.wall_ms << " ms)\n";
    return out.str();
}

}  // namespace mchain

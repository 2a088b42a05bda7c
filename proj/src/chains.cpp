#include "mchain/chains.hpp"

#include <algorithm>
#include <map>

namespace mchain {

CoefficientRing CoefficientRing::integers_mod(long p) {
    if (p < 2) throw std::invalid_argument("modulus must be at least 2");
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("modulus must be prime");
    return {RingKind::IntegersMod, p};
}

Q ring_normalize(const CoefficientRing& ring, const Q& c) {
    switch (ring.kind) {
        case RingKind::Rationals:
            return c;
        case RingKind::Integers:
            if (c.get_den() != 1) throw std::invalid_argument("integer coefficient expected");
            return c;
        case RingKind::IntegersMod: {
            if (c.get_den() != 1) throw std::invalid_argument("integer coefficient expected");
            mpz_class r = c.get_num() % ring.modulus;
            if (r < 0) r += ring.modulus;
            return Q(r);
        }
    }
    return c;
}

bool ring_is_zero(const CoefficientRing& ring, const Q& c) {
    return ring_normalize(ring, c) == 0;
}

MChainGenerator make_generator(CornersSpace v, int n, SpaceMap s, SpaceMap t) {
    if (n < 0) throw DimensionMismatch("negative reference dimension");
    if (s.target.kind != Target::Kind::Euclidean || s.target.ambient != n)
        throw DimensionMismatch("reference map must land in R^n");
    validate_map(v, s);
    validate_map(v, t);
    MChainGenerator g;
    g.properness.proper = true;
    for (size_t i = 0; i < v.pieces.size(); ++i) {
        AffineMap sm = compose(s.maps[i], embedding(v.pieces[i].flat));
        Properness pr = recession_proper(v.pieces[i], sm, NearOrigin{});
        if (!pr.proper) throw NotProper{};
        if (pr.radius && (!g.properness.radius || *pr.radius < *g.properness.radius))
            g.properness.radius = pr.radius;
    }
    g.space = std::move(v);
    g.n = n;
    g.s = std::move(s);
    g.t = std::move(t);
    return g;
}

Chain make_chain(CoefficientRing ring, ChainMode mode, int degree, Target target,
                 std::vector<std::pair<Q, MChainGenerator>> terms) {
    if (mode == ChainMode::Rational && ring.kind != RingKind::Rationals) throw RingNotQAlgebra{};
    Chain c;
    c.ring = ring;
    c.mode = mode;
    c.degree = degree;
    c.target = std::move(target);
    for (auto& [a, g] : terms) {
        Q na = ring_normalize(ring, a);
        if (na == 0) continue;
        if (g.degree() != degree) throw DimensionMismatch("term degree mismatch");
        if (!(g.t.target == c.target)) throw TargetMismatch("term target mismatch");
        c.terms.push_back({std::move(na), std::move(g)});
    }
    return c;
}

Chain zero_chain(CoefficientRing ring, ChainMode mode, int degree, Target target) {
    return make_chain(ring, mode, degree, std::move(target), {});
}

Chain point_chain(CoefficientRing ring, const Q& c) {
    Polyhedron pt;
    pt.flat.ambient = 0;
    CornersSpace v = make_corners({pt}, 0);
    SpaceMap s{{AffineMap{Mat(0, 0), Vec{}}}, Target::euclidean(0)};
    SpaceMap t{{AffineMap{Mat(0, 0), Vec{}}}, Target::point()};
    return make_chain(ring, ChainMode::Integral, 0, Target::point(),
                      {{c, make_generator(v, 0, s, t)}});
}

Chain add(const Chain& a, const Chain& b) {
    if (!(a.ring == b.ring) || a.mode != b.mode) throw std::invalid_argument("ring/mode mismatch");
    if (a.degree != b.degree) throw DimensionMismatch("degree mismatch");
    if (!(a.target == b.target)) throw TargetMismatch("target mismatch");
    Chain c = a;
    c.terms.insert(c.terms.end(), b.terms.begin(), b.terms.end());
    return c;
}

Chain negate(Chain a) {
    for (auto& [c, g] : a.terms) c = ring_normalize(a.ring, -c);
    return a;
}

Chain scale_chain(const Q& c, Chain a) {
    std::vector<std::pair<Q, MChainGenerator>> kept;
    for (auto& [x, g] : a.terms) {
        Q nx = ring_normalize(a.ring, c * x);
        if (nx != 0) kept.push_back({std::move(nx), std::move(g)});
    }
    a.terms = std::move(kept);
    return a;
}

std::pair<int, MChainGenerator> stabilize(const MChainGenerator& g, int slot) {
    if (slot < 0 || slot > g.n) throw std::invalid_argument("stabilization slot");
    MChainGenerator out;
    out.n = g.n + 1;
    out.space.dim = g.space.dim + 1;
    out.s.target = Target::euclidean(out.n);
    out.t.target = g.t.target;
    for (size_t i = 0; i < g.space.pieces.size(); ++i) {
        const Polyhedron& p = g.space.pieces[i];
        int a = p.flat.ambient;
        Polyhedron q;
        q.orient = p.orient;
        q.flat.ambient = a + 1;
        q.flat.base = p.flat.base;
        q.flat.base.push_back(0);
        for (const auto& bvec : p.flat.basis) {
            Vec v = bvec;
            v.push_back(0);
            q.flat.basis.push_back(std::move(v));
        }
        Vec last(a + 1);
        last[a] = 1;
        q.flat.basis.push_back(std::move(last));
        for (const auto& h : p.ineqs) {
            Vec nn = h.normal;
            nn.push_back(0);
            q.ineqs.push_back({std::move(nn), h.offset, h.strict});
        }
        out.space.pieces.push_back(std::move(q));

        const AffineMap& sm = g.s.maps[i];
        AffineMap s2;
        s2.linear = Mat(g.n + 1, a + 1);
        s2.translation = Vec(g.n + 1);
        for (int r = 0; r < g.n + 1; ++r) {
            int src = r < slot ? r : r - 1;
            if (r == slot) {
                s2.linear(r, a) = 1;
            } else {
                for (int j = 0; j < a; ++j) s2.linear(r, j) = sm.linear(src, j);
                s2.translation[r] = sm.translation[src];
            }
        }
        out.s.maps.push_back(std::move(s2));

        const AffineMap& tm = g.t.maps[i];
        AffineMap t2;
        t2.linear = Mat(tm.linear.rows, a + 1);
        for (int r = 0; r < tm.linear.rows; ++r)
            for (int j = 0; j < a; ++j) t2.linear(r, j) = tm.linear(r, j);
        t2.translation = tm.translation;
        out.t.maps.push_back(std::move(t2));
    }
    out.properness = g.properness;  // recession/distance certificates carry over
    int sign = (g.n - slot) % 2 ? -1 : 1;
    return {sign, std::move(out)};
}

std::optional<Reduced> destabilize(const MChainGenerator& g) {
    if (g.n == 0 || g.space.pieces.empty()) return std::nullopt;
    size_t np = g.space.pieces.size();
    std::vector<AffineMap> scomp(np), tcomp(np);
    std::vector<std::vector<Halfspace>> irr(np);
    for (size_t i = 0; i < np; ++i) {
        scomp[i] = compose(g.s.maps[i], embedding(g.space.pieces[i].flat));
        tcomp[i] = compose(g.t.maps[i], embedding(g.space.pieces[i].flat));
        irr[i] = prune_redundant(g.space.pieces[i].ineqs, g.space.pieces[i].flat.dim());
    }
    for (int j = 0; j < g.n; ++j) {
        std::vector<Vec> dirs(np);
        bool ok = true;
        for (size_t i = 0; i < np && ok; ++i) {
            int d = g.space.pieces[i].flat.dim();
            std::vector<Vec> rows;
            Vec rhs;
            for (int r = 0; r < g.n; ++r) {
                rows.push_back(scomp[i].linear.row(r));
                rhs.push_back(r == j ? 1 : 0);
            }
            for (int r = 0; r < tcomp[i].linear.rows; ++r) {
                rows.push_back(tcomp[i].linear.row(r));
                rhs.push_back(0);
            }
            for (const auto& h : irr[i]) {
                rows.push_back(h.normal);
                rhs.push_back(0);
            }
            Mat sys = rows.empty() ? Mat(0, d) : Mat::from_rows(rows);
            auto u = solve(sys, rhs);
            if (!u)
                ok = false;
            else
                dirs[i] = *u;
        }
        if (!ok) continue;

        Reduced red;
        red.sign = (g.n - 1 - j) % 2 ? -1 : 1;
        red.gen.n = g.n - 1;
        red.gen.space.dim = g.space.dim - 1;
        red.gen.s.target = Target::euclidean(g.n - 1);
        red.gen.t.target = g.t.target;
        red.gen.properness.proper = true;
        for (size_t i = 0; i < np; ++i) {
            const Polyhedron& p = g.space.pieces[i];
            int d = p.flat.dim();
            Vec row = scomp[i].linear.row(j);
            Q c0 = scomp[i].translation[j];
            Mat rowm = Mat::from_rows({row});
            std::vector<Vec> w = kernel_basis(rowm);
            Vec u0 = *solve(rowm, Vec{-c0});

            std::vector<Vec> cols = w;
            cols.push_back(dirs[i]);
            int sigma = sgn(det(Mat::from_cols(cols)));

            Polyhedron q;
            q.orient = p.orient * sigma;
            q.flat.ambient = p.flat.ambient;
            q.flat.base = from_flat_coords(p.flat, u0);
            Mat bp = Mat::from_cols(p.flat.basis);
            if (d == 0) bp = Mat(p.flat.ambient, 0);
            for (const auto& wv : w) q.flat.basis.push_back(mat_vec(bp, wv));
            for (const auto& h : p.ineqs) {
                Vec nn(w.size());
                for (size_t a = 0; a < w.size(); ++a) nn[a] = dot(h.normal, w[a]);
                q.ineqs.push_back({std::move(nn), h.offset - dot(h.normal, u0), h.strict});
            }
            q.ineqs = prune_redundant(std::move(q.ineqs), d - 1);
            red.gen.space.pieces.push_back(std::move(q));

            const AffineMap& sm = g.s.maps[i];
            AffineMap s2;
            s2.linear = Mat(g.n - 1, sm.linear.cols);
            s2.translation = Vec(g.n - 1);
            for (int r = 0; r < g.n; ++r) {
                if (r == j) continue;
                int dst = r < j ? r : r - 1;
                for (int cidx = 0; cidx < sm.linear.cols; ++cidx)
                    s2.linear(dst, cidx) = sm.linear(r, cidx);
                s2.translation[dst] = sm.translation[r];
            }
            red.gen.s.maps.push_back(std::move(s2));
            red.gen.t.maps.push_back(g.t.maps[i]);
        }
        // slices of proper generators stay proper over the same window
        red.gen.properness = g.properness;
        return red;
    }
    return std::nullopt;
}

std::pair<int, MChainGenerator> canonical_presentation(const MChainGenerator& g) {
    MChainGenerator out;
    out.n = g.n;
    out.space.dim = g.space.dim;
    out.s.target = g.s.target;
    out.t.target = g.t.target;
    out.properness = g.properness;
    int sign = 1;
    for (size_t i = 0; i < g.space.pieces.size(); ++i) {
        const Polyhedron& p = g.space.pieces[i];
        CanonicalFlat cf = canonicalize(p.flat);
        Polyhedron re = reexpress_onto(p, cf.flat);
        Polyhedron q;
        q.flat = full_flat(p.flat.dim());
        q.ineqs = prune_redundant(std::move(re.ineqs), p.flat.dim());
        q.orient = 1;
        int piece_sign = re.orient;
        if (g.space.pieces.size() == 1)
            sign *= piece_sign;
        else
            q.orient = piece_sign;
        out.space.pieces.push_back(std::move(q));
        out.s.maps.push_back(compose(g.s.maps[i], embedding(cf.flat)));
        out.t.maps.push_back(compose(g.t.maps[i], embedding(cf.flat)));
    }
    return {sign, std::move(out)};
}

Chain boundary_chain(const Chain& a) {
    Chain out = zero_chain(a.ring, a.mode, a.degree - 1, a.target);
    for (const auto& [c, g] : a.terms) {
        if (g.space.dim == 0 || g.space.pieces.empty()) continue;
        Boundary b = boundary(g.space);
        if (b.space.pieces.empty()) continue;
        SpaceMap s2, t2;
        s2.target = g.s.target;
        t2.target = g.t.target;
        for (int parent : b.parent) {
            s2.maps.push_back(g.s.maps[parent]);
            t2.maps.push_back(g.t.maps[parent]);
        }
        out.terms.push_back({c, make_generator(std::move(b.space), g.n, std::move(s2), std::move(t2))});
    }
    return out;
}

Chain pushforward(const AffineMap& f, const Target& to, const Chain& a) {
    if (f.domain_dim() != a.target.ambient || f.codomain_dim() != to.ambient)
        throw TargetMismatch("pushforward map shape");
    Chain out = zero_chain(a.ring, a.mode, a.degree, to);
    for (const auto& [c, g] : a.terms) {
        MChainGenerator h = g;
        h.t.target = to;
        for (auto& m : h.t.maps) m = compose(f, m);
        validate_map(h.space, h.t);
        out.terms.push_back({c, std::move(h)});
    }
    return out;
}

namespace {

int compare_map(const AffineMap& a, const AffineMap& b) {
    int c = compare(a.linear, b.linear);
    if (c != 0) return c;
    return compare(a.translation, b.translation);
}

int compare_halfspaces(const std::vector<Halfspace>& a, const std::vector<Halfspace>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = 0; i < a.size(); ++i) {
        int c = compare(a[i].normal, b[i].normal);
        if (c != 0) return c;
        c = cmp(a[i].offset, b[i].offset);
        if (c != 0) return c < 0 ? -1 : 1;
        if (a[i].strict != b[i].strict) return a[i].strict ? -1 : 1;
    }
    return 0;
}

// Structural order on canonically presented single-piece generators.
int compare_generator(const MChainGenerator& a, const MChainGenerator& b) {
    if (a.n != b.n) return a.n < b.n ? -1 : 1;
    if (a.space.dim != b.space.dim) return a.space.dim < b.space.dim ? -1 : 1;
    if (a.space.pieces.size() != b.space.pieces.size())
        return a.space.pieces.size() < b.space.pieces.size() ? -1 : 1;
    for (size_t i = 0; i < a.space.pieces.size(); ++i) {
        const Polyhedron& p = a.space.pieces[i];
        const Polyhedron& q = b.space.pieces[i];
        if (p.orient != q.orient) return p.orient < q.orient ? -1 : 1;
        int c = compare(p.flat, q.flat);
        if (c != 0) return c;
        c = compare_halfspaces(p.ineqs, q.ineqs);
        if (c != 0) return c;
        c = compare_map(a.s.maps[i], b.s.maps[i]);
        if (c != 0) return c;
        c = compare_map(a.t.maps[i], b.t.maps[i]);
        if (c != 0) return c;
    }
    return 0;
}

MChainGenerator permute_coordinates(const MChainGenerator& g, const std::vector<int>& order) {
    MChainGenerator out = g;
    for (size_t i = 0; i < g.s.maps.size(); ++i) {
        for (int r = 0; r < g.n; ++r) {
            for (int c = 0; c < g.s.maps[i].linear.cols; ++c)
                out.s.maps[i].linear(r, c) = g.s.maps[i].linear(order[r], c);
            out.s.maps[i].translation[r] = g.s.maps[i].translation[order[r]];
        }
    }
    return out;
}

}  // namespace

Chain normal_form(const Chain& a) {
    // split into single-piece terms
    std::vector<std::pair<Q, MChainGenerator>> work;
    for (const auto& [c0, g] : a.terms) {
        Q c = ring_normalize(a.ring, c0);
        if (c == 0) continue;
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            MChainGenerator single;
            single.n = g.n;
            single.space.dim = g.space.dim;
            single.space.pieces = {g.space.pieces[i]};
            single.s = {{g.s.maps[i]}, g.s.target};
            single.t = {{g.t.maps[i]}, g.t.target};
            single.properness = g.properness;
            work.push_back({c, std::move(single)});
        }
    }

    // full destabilization, then canonical presentation
    int common = 0;
    for (auto& [c, g] : work) {
        for (;;) {
            auto red = destabilize(g);
            if (!red) break;
            c *= red->sign;
            g = std::move(red->gen);
        }
        auto [sig, canon] = canonical_presentation(g);
        c *= sig;
        g = std::move(canon);
        common = std::max(common, g.n);
    }

    // append-stabilize to the common n
    for (auto& [c, g] : work)
        while (g.n < common) {
            auto [sig, st] = stabilize(g, g.n);
            c *= sig;
            g = std::move(st);
        }

    if (a.mode == ChainMode::Rational) {
        // Full symmetrization over the reference coordinates. Any canonical
        // per-term sorting key would depend on the piece presentation, which
        // differs across fibre-product coordinatizations; the symmetrized
        // representative is presentation-independent, and generators with a
        // repeated coordinate cancel out of it pairwise.
        std::vector<std::pair<Q, MChainGenerator>> sym;
        for (auto& [c, g] : work) {
            std::vector<int> perm(g.n);
            for (int i = 0; i < g.n; ++i) perm[i] = i;
            Q fact = 1;
            for (int i = 2; i <= g.n; ++i) fact *= i;
            do {
                int inv = 0;
                for (int i = 0; i < g.n; ++i)
                    for (int j = i + 1; j < g.n; ++j)
                        if (perm[i] > perm[j]) ++inv;
                Q coeff = c * (inv % 2 ? -1 : 1) / fact;
                sym.push_back({coeff, permute_coordinates(g, perm)});
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        work = std::move(sym);
    }

    // combine structurally identical generators
    std::sort(work.begin(), work.end(), [](const auto& x, const auto& y) {
        return compare_generator(x.second, y.second) < 0;
    });
    Chain out = zero_chain(a.ring, a.mode, a.degree, a.target);
    for (auto& [c, g] : work) {
        if (!out.terms.empty() && compare_generator(out.terms.back().second, g) == 0) {
            out.terms.back().first = ring_normalize(a.ring, out.terms.back().first + c);
        } else {
            out.terms.push_back({ring_normalize(a.ring, c), std::move(g)});
        }
    }
    std::erase_if(out.terms, [&](const auto& t) { return t.first == 0; });
    return out;
}

// ---------------------------------------------------------------------------
// relation-(ii) decision engine

namespace {

struct Contribution {
    Q signed_coeff;           // term coefficient times the orientation sign
    std::vector<Halfspace> image;  // image polyhedron in class-flat coordinates
};

struct Locus {
    Flat hull;
    Polyhedron src;
    AffineMap map;  // composed piece-ambient -> R^{n+m}
};

bool strictly_inside(const std::vector<Halfspace>& ineqs, const Vec& pt) {
    for (const auto& h : ineqs) {
        if (is_zero_vec(h.normal)) {
            if (h.offset < 0) return false;
            continue;
        }
        if (dot(h.normal, pt) >= h.offset) return false;
    }
    return true;
}

// One hyperplane of F containing hull(H) intersected with F, if any.
std::optional<Hyperplane> locus_hyperplane(const Flat& f, const Flat& hull) {
    Mat span = hull.dim() == 0 ? Mat(0, hull.ambient) : Mat::from_rows(hull.basis);
    std::vector<Vec> enormals = kernel_basis(span);
    int rcount = static_cast<int>(enormals.size());
    Mat sys(rcount, f.dim() + 1);
    for (int r = 0; r < rcount; ++r) {
        for (int j = 0; j < f.dim(); ++j) sys(r, j) = dot(enormals[r], f.basis[j]);
        sys(r, f.dim()) = dot(enormals[r], hull.base - f.base);
    }
    Rref rr = rref(std::move(sys));
    for (int i = 0; i < rr.rank; ++i) {
        bool allzero = true;
        for (int j = 0; j < f.dim(); ++j)
            if (rr.m(i, j) != 0) allzero = false;
        if (allzero) {
            if (rr.m(i, f.dim()) != 0) return std::nullopt;  // empty intersection
            continue;
        }
        Vec n(f.dim());
        for (int j = 0; j < f.dim(); ++j) n[j] = rr.m(i, j);
        return make_hyperplane(std::move(n), rr.m(i, f.dim()));
    }
    return std::nullopt;  // hull contains F; cannot happen for proper loci
}

// x-coordinate rows of a flat point: x_i(w) = base_i + sum_j basis_j[i] w_j.
void x_row(const Flat& f, int i, Vec& normal, Q& constant) {
    normal.assign(f.dim(), Q(0));
    for (int j = 0; j < f.dim(); ++j) normal[j] = f.basis[j][i];
    constant = f.base[i];
}

}  // namespace

ZeroResult relation_engine(const CoefficientRing& ring, const std::vector<EngineTerm>& terms,
                           const Target& y, ContactRule rule,
                           std::vector<FlatMultiplicity>* collect) {
    ZeroResult res;
    res.zero = true;
    res.epsilon = 1;
    if (terms.empty()) return res;

    int n = terms[0].n;
    int m = y.ambient;
    for (const auto& t : terms)
        if (t.n != n) throw std::logic_error("relation engine requires a common n");

    bool have_radius = false;
    for (const auto& t : terms)
        if (t.radius) {
            res.epsilon = have_radius ? std::min(res.epsilon, *t.radius) : *t.radius;
            have_radius = true;
        }

    std::map<Flat, std::vector<Contribution>, decltype([](const Flat& a, const Flat& b) {
                 return compare(a, b) < 0;
             })>
        classes;
    std::vector<Locus> loci;

    for (const auto& t : terms) {
        for (size_t i = 0; i < t.pieces.size(); ++i) {
            const Polyhedron& p = t.pieces[i];
            AffineMap combined;
            combined.linear = Mat(n + m, t.smaps[i].linear.cols);
            combined.translation = Vec(n + m);
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < combined.linear.cols; ++c)
                    combined.linear(r, c) = t.smaps[i].linear(r, c);
                combined.translation[r] = t.smaps[i].translation[r];
            }
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < combined.linear.cols; ++c)
                    combined.linear(n + r, c) = t.tmaps[i].linear(r, c);
                combined.translation[n + r] = t.tmaps[i].translation[r];
            }

            ImageFlat imf = image_flat(p, combined);
            if (std::holds_alternative<Degenerate>(imf)) {
                loci.push_back({affine_image_hull(p.flat, combined), p, combined});
            } else {
                auto& full = std::get<FullImage>(imf);
                classes[full.flat].push_back(
                    {t.coeff * full.sign, std::move(full.image.ineqs)});
            }
            if (p.flat.dim() >= 1) {
                for (auto& fc : facets(p))
                    loci.push_back(
                        {affine_image_hull(fc.poly.flat, combined), std::move(fc.poly), combined});
            }
        }
    }

    res.classes = static_cast<int>(classes.size());

    for (const auto& [flat, contribs] : classes) {
        int dim = flat.dim();
        if (dim == 0) {
            const Vec& pt = flat.base;
            bool on_zero = true;
            for (int i = 0; i < n; ++i)
                if (pt[i] != 0) on_zero = false;
            if (!on_zero) continue;
            if (rule == ContactRule::XZeroTargetInterior) {
                Vec ypart(pt.begin() + n, pt.end());
                if (!target_contains_point(y, ypart, /*strictly=*/true)) continue;
            }
            bool vacuous = false;
            for (const Locus& lc : loci) {
                AffineMap gg = compose(lc.map, embedding(lc.src.flat));
                LpProblem feas;
                feas.A = Mat(0, lc.src.flat.dim());
                feas.E = Mat(0, lc.src.flat.dim());
                for (const auto& h : lc.src.ineqs)
                    if (!is_zero_vec(h.normal)) feas.add_le(h.normal, h.offset);
                for (int r = 0; r < n + m; ++r)
                    feas.add_eq(gg.linear.row(r), pt[r] - gg.translation[r]);
                if (feasible_point(feas)) {
                    vacuous = true;
                    break;
                }
            }
            if (vacuous) continue;
            ++res.cells_tested;
            Q mult = 0;
            for (const auto& c : contribs) {
                bool ok = true;  // 0-dim image: constraints are constants
                for (const auto& h : c.image)
                    if (h.offset < 0) ok = false;
                if (ok) mult += c.signed_coeff;
            }
            if (collect) collect->push_back({flat, {{Vec{}, ring_normalize(ring, mult)}}});
            if (!ring_is_zero(ring, mult)) {
                res.zero = false;
                if (!res.witness) res.witness = {flat, pt, ring_normalize(ring, mult)};
                if (!collect) return res;
            }
            continue;
        }

        std::vector<Halfspace> region;
        for (int i = 0; i < n; ++i) {
            Vec normal;
            Q constant;
            x_row(flat, i, normal, constant);
            region.push_back({normal, res.epsilon - constant, false});
            region.push_back({scale(Q(-1), normal), res.epsilon + constant, false});
        }

        std::vector<Hyperplane> hps;
        for (const auto& c : contribs)
            for (const auto& h : c.image)
                if (!is_zero_vec(h.normal)) hps.push_back(make_hyperplane(h.normal, h.offset));
        for (const Locus& lc : loci) {
            auto hp = locus_hyperplane(flat, lc.hull);
            if (hp) hps.push_back(std::move(*hp));
        }

        Arrangement arr = arrange(dim, std::move(hps), region);
        FlatMultiplicity table;
        table.flat = flat;
        for (const auto& cell : arr.cells) {
            std::vector<Halfspace> cons = region;
            for (size_t h = 0; h < arr.hyperplanes.size(); ++h) {
                const Hyperplane& hp = arr.hyperplanes[h];
                if (cell.signs[h] < 0)
                    cons.push_back({hp.normal, hp.offset, false});
                else
                    cons.push_back({scale(Q(-1), hp.normal), -hp.offset, false});
            }
            if (static_cast<int>(cons.size()) > 2 * dim + 8)
                cons = prune_redundant(std::move(cons), dim);
            // contact with {x = 0} (and strictly inside the target if asked)
            LpProblem contact;
            contact.A = Mat(0, dim);
            contact.E = Mat(0, dim);
            for (const auto& h : cons)
                if (!is_zero_vec(h.normal)) contact.add_le(h.normal, h.offset);
            for (int i = 0; i < n; ++i) {
                Vec normal;
                Q constant;
                x_row(flat, i, normal, constant);
                contact.add_eq(normal, -constant);
            }
            bool touched = false;
            if (rule == ContactRule::XZero || y.kind != Target::Kind::Domain) {
                touched = feasible_point(contact).has_value();
            } else {
                for (const auto& comp : y.components) {
                    LpProblem strict;
                    strict.A = Mat(0, dim + 1);
                    strict.E = Mat(0, dim + 1);
                    for (int r = 0; r < contact.A.rows; ++r) {
                        Vec row = contact.A.row(r);
                        row.push_back(0);
                        strict.add_le(row, contact.b[r]);
                    }
                    for (int r = 0; r < contact.E.rows; ++r) {
                        Vec row = contact.E.row(r);
                        row.push_back(0);
                        strict.add_eq(row, contact.e[r]);
                    }
                    for (const auto& h : comp) {
                        // h.normal . y(w) + delta <= h.offset
                        Vec row(dim + 1);
                        Q cst = 0;
                        for (int yi = 0; yi < m; ++yi) {
                            if (h.normal[yi] == 0) continue;
                            Vec normal;
                            Q constant;
                            x_row(flat, n + yi, normal, constant);
                            for (int j = 0; j < dim; ++j) row[j] += h.normal[yi] * normal[j];
                            cst += h.normal[yi] * constant;
                        }
                        row[dim] = 1;
                        strict.add_le(row, h.offset - cst);
                    }
                    Vec cap(dim + 1);
                    cap[dim] = 1;
                    strict.add_le(cap, 1);
                    LpResult r = lp_maximize(strict, cap);
                    if (r.status == LpStatus::Optimal && r.value > 0) {
                        touched = true;
                        break;
                    }
                }
            }
            if (!touched) continue;
            ++res.cells_tested;
            Q mult = 0;
            for (const auto& c : contribs)
                if (strictly_inside(c.image, cell.sample)) mult += c.signed_coeff;
            if (collect) table.cells.push_back({cell.sample, ring_normalize(ring, mult)});
            if (!ring_is_zero(ring, mult)) {
                res.zero = false;
                if (!res.witness)
                    res.witness = {flat, from_flat_coords(flat, cell.sample),
                                   ring_normalize(ring, mult)};
                if (!collect) return res;
            }
        }
        if (collect && !table.cells.empty()) collect->push_back(std::move(table));
    }
    return res;
}

ZeroResult is_zero(const Chain& a) {
    Chain nf = normal_form(a);
    std::vector<EngineTerm> terms;
    for (const auto& [c, g] : nf.terms) {
        EngineTerm t;
        t.coeff = c;
        t.n = g.n;
        t.pieces = g.space.pieces;
        t.smaps = g.s.maps;
        t.tmaps = g.t.maps;
        t.radius = g.properness.radius;
        terms.push_back(std::move(t));
    }
    return relation_engine(nf.ring, terms, nf.target, ContactRule::XZero);
}

bool equals(const Chain& a, const Chain& b) {
    return is_zero(add(a, negate(b))).zero;
}

std::vector<FlatMultiplicity> flat_multiplicities(const Chain& a) {
    Chain nf = normal_form(a);
    std::vector<EngineTerm> terms;
    for (const auto& [c, g] : nf.terms) {
        EngineTerm t;
        t.coeff = c;
        t.n = g.n;
        t.pieces = g.space.pieces;
        t.smaps = g.s.maps;
        t.tmaps = g.t.maps;
        t.radius = g.properness.radius;
        terms.push_back(std::move(t));
    }
    std::vector<FlatMultiplicity> out;
    relation_engine(nf.ring, terms, nf.target, ContactRule::XZero, &out);
    return out;
}

std::vector<HPolyhedron> support_bound(const Chain& a) {
    std::vector<HPolyhedron> out;
    for (const auto& [c, g] : a.terms) {
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            const Polyhedron& p = g.space.pieces[i];
            AffineMap scomp = compose(g.s.maps[i], embedding(p.flat));
            std::vector<std::pair<Vec, Q>> eqs;
            for (int r = 0; r < g.n; ++r)
                eqs.push_back({scomp.linear.row(r), -scomp.translation[r]});
            HPolyhedron img = affine_image_hrep(p, g.t.maps[i], eqs);
            // drop pieces whose zero set is empty
            LpProblem feas;
            feas.A = Mat(0, p.flat.dim());
            feas.E = Mat(0, p.flat.dim());
            for (const auto& h : p.ineqs)
                if (!is_zero_vec(h.normal)) feas.add_le(h.normal, h.offset);
            for (auto& [nrm, cc] : eqs) feas.add_eq(nrm, cc);
            if (!feasible_point(feas)) continue;
            out.push_back(std::move(img));
        }
    }
    return out;
}

Chain rational_project(const Chain& a) {
    if (a.ring.kind != RingKind::Rationals) throw RingNotQAlgebra{};
    Chain out = a;
    out.mode = ChainMode::Rational;
    return out;
}

Chain rational_section(const Chain& a) {
    if (a.ring.kind != RingKind::Rationals) throw RingNotQAlgebra{};
    if (a.mode != ChainMode::Rational) throw std::invalid_argument("section of integral chain");
    Chain out = zero_chain(a.ring, ChainMode::Integral, a.degree, a.target);
    for (const auto& [c, g] : a.terms) {
        if (g.n == 0) {
            out.terms.push_back({c, g});
            continue;
        }
        std::vector<int> perm(g.n);
        for (int i = 0; i < g.n; ++i) perm[i] = i;
        Q fact = 1;
        for (int i = 2; i <= g.n; ++i) fact *= i;
        do {
            int inv = 0;
            for (int i = 0; i < g.n; ++i)
                for (int j = i + 1; j < g.n; ++j)
                    if (perm[i] > perm[j]) ++inv;
            Q coeff = c * (inv % 2 ? -1 : 1) / fact;
            out.terms.push_back({coeff, permute_coordinates(g, perm)});
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

namespace {

Q degree_eval_prepared(const Chain& nf, const Vec& x) {
    Q total = 0;
    for (const auto& [c, g] : nf.terms) {
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            const Polyhedron& p = g.space.pieces[i];
            AffineMap sm = compose(g.s.maps[i], embedding(p.flat));
            Vec rhs = x - sm.translation;
            if (p.flat.dim() != static_cast<int>(x.size()))
                throw DimensionMismatch("degree evaluation dimension");
            Q dt = p.flat.dim() == 0 ? 1 : det(sm.linear);
            if (dt == 0) {
                if (solve(sm.linear, rhs)) throw NonGenericPoint{};
                continue;
            }
            Vec u = *solve(sm.linear, rhs);
            bool inside = true;
            for (const auto& h : p.ineqs) {
                Q v = dot(h.normal, u);
                if (v == h.offset) throw NonGenericPoint{};
                if (v > h.offset) {
                    inside = false;
                    break;
                }
            }
            if (inside) total += c * p.orient * sgn(dt);
        }
    }
    return ring_normalize(nf.ring, total);
}

Chain prepare_degree_chain(const Chain& a, int n_target) {
    if (a.target.kind != Target::Kind::Point)
        throw TargetMismatch("degree evaluation needs the point target");
    if (a.degree != 0) throw DimensionMismatch("degree evaluation needs degree 0");
    Chain nf = normal_form(a);
    for (auto& [c, g] : nf.terms) {
        if (g.n > n_target) throw DimensionMismatch("chain is not reduced to the given n");
        while (g.n < n_target) {
            auto [sig, st] = stabilize(g, g.n);
            c *= sig;
            g = std::move(st);
        }
    }
    return nf;
}

}  // namespace

Q degree_eval(const Chain& a, const Vec& x) {
    Chain nf = prepare_degree_chain(a, static_cast<int>(x.size()));
    return degree_eval_prepared(nf, x);
}

Q mh0_class(const Chain& a) {
    if (!is_zero(boundary_chain(a)).zero) throw NotACycle{};
    Chain nf = normal_form(a);
    int n = nf.terms.empty() ? 0 : nf.terms[0].second.n;
    Q eps(1);
    for (const auto& [c, g] : nf.terms)
        if (g.properness.radius && *g.properness.radius < eps) eps = *g.properness.radius;

    std::vector<Q> values;
    for (long t = 2; static_cast<int>(values.size()) < 3; ++t) {
        if (t > 1000) throw NonGenericPoint{};
        Q delta = eps / t;
        Vec x(n);
        Q p = 1;
        for (int i = 0; i < n; ++i) {
            p *= delta;
            x[i] = p;
        }
        try {
            values.push_back(degree_eval_prepared(nf, x));
        } catch (const NonGenericPoint&) {
            continue;
        }
    }
    if (values[0] != values[1] || values[1] != values[2]) throw InconsistentDegrees{};
    return values[0];
}

}  // namespace mchain

#include "mchain/cochains.hpp"

namespace mchain {

namespace {

// t must restrict to a rank-m map on the piece and every closed face.
bool submersion_on_faces(const Polyhedron& piece, const AffineMap& tmap, int m) {
    AffineMap g = compose(tmap, embedding(piece.flat));
    if (rank(g.linear) != m) return false;
    Measure mm = measure(piece);
    if (mm.empty || mm.dim < 1) return true;
    for (const auto& f : facets(piece))
        if (!submersion_on_faces(f.poly, tmap, m)) return false;
    return true;
}

Properness variant_properness(const CornersSpace& v, const SpaceMap& s, const SpaceMap& t,
                              CochainVariant variant) {
    Properness total;
    total.proper = true;
    int m = t.target.ambient;
    for (size_t i = 0; i < v.pieces.size(); ++i) {
        Properness pr;
        if (variant == CochainVariant::CompactlySupported) {
            pr = recession_proper(v.pieces[i], compose(s.maps[i], embedding(v.pieces[i].flat)),
                                  NearOrigin{});
        } else {
            AffineMap sm = compose(s.maps[i], embedding(v.pieces[i].flat));
            AffineMap tm = compose(t.maps[i], embedding(v.pieces[i].flat));
            AffineMap both;
            both.linear = Mat(sm.linear.rows + m, sm.linear.cols);
            both.translation = Vec(sm.linear.rows + m);
            for (int r = 0; r < sm.linear.rows; ++r) {
                for (int c = 0; c < sm.linear.cols; ++c) both.linear(r, c) = sm.linear(r, c);
                both.translation[r] = sm.translation[r];
            }
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < tm.linear.cols; ++c)
                    both.linear(sm.linear.rows + r, c) = tm.linear(r, c);
                both.translation[sm.linear.rows + r] = tm.translation[r];
            }
            pr = recession_proper(v.pieces[i], both, NearZeroCrossTarget{m});
        }
        if (!pr.proper) throw NotProper{};
        if (pr.radius && (!total.radius || *pr.radius < *total.radius)) total.radius = pr.radius;
    }
    return total;
}

}  // namespace

MCochainGenerator make_cochain_generator(CornersSpace v, int n, SpaceMap s, SpaceMap t,
                                         CochainVariant variant) {
    if (n < 0) throw DimensionMismatch("negative reference dimension");
    if (s.target.kind != Target::Kind::Euclidean || s.target.ambient != n)
        throw DimensionMismatch("reference map must land in R^n");
    validate_map(v, s);
    validate_map(v, t);
    if (variant != CochainVariant::LocallyFiniteChain) {
        for (size_t i = 0; i < v.pieces.size(); ++i)
            if (!submersion_on_faces(v.pieces[i], t.maps[i], t.target.ambient))
                throw NotSubmersion{};
    }
    MCochainGenerator g;
    g.properness = variant_properness(v, s, t, variant);
    g.space = std::move(v);
    g.n = n;
    g.s = std::move(s);
    g.t = std::move(t);
    g.variant = variant;
    return g;
}

Cochain make_cochain(CoefficientRing ring, ChainMode mode, CochainVariant variant, int degree,
                     Target target, std::vector<std::pair<Q, MCochainGenerator>> terms) {
    if (mode == ChainMode::Rational && ring.kind != RingKind::Rationals) throw RingNotQAlgebra{};
    Cochain c;
    c.ring = ring;
    c.mode = mode;
    c.variant = variant;
    c.degree = degree;
    c.target = std::move(target);
    for (auto& [a, g] : terms) {
        Q na = ring_normalize(ring, a);
        if (na == 0) continue;
        if (g.variant != variant) throw std::invalid_argument("term variant mismatch");
        if (g.degree() != degree) throw DimensionMismatch("term degree mismatch");
        if (!(g.t.target == c.target)) throw TargetMismatch("term target mismatch");
        c.terms.push_back({std::move(na), std::move(g)});
    }
    return c;
}

Cochain zero_cochain(CoefficientRing ring, ChainMode mode, CochainVariant variant, int degree,
                     Target target) {
    return make_cochain(ring, mode, variant, degree, std::move(target), {});
}

Cochain identity_cocycle(CoefficientRing ring, ChainMode mode, const Target& y) {
    if (y.kind == Target::Kind::Point) {
        MCochainGenerator g;
        Polyhedron pt;
        pt.flat.ambient = 0;
        g.space = make_corners({pt}, 0);
        g.s = {{AffineMap{Mat(0, 0), Vec{}}}, Target::euclidean(0)};
        g.t = {{AffineMap{Mat(0, 0), Vec{}}}, y};
        g.properness.proper = true;
        g.variant = CochainVariant::Precochain;
        return make_cochain(ring, mode, CochainVariant::Precochain, 0, y, {{Q(1), g}});
    }
    int m = y.ambient;
    std::vector<Polyhedron> pieces;
    SpaceMap s, t;
    s.target = Target::euclidean(0);
    t.target = y;
    for (const auto& comp : y.components) {
        Polyhedron p;
        p.flat = full_flat(m);
        for (const auto& h : comp) p.ineqs.push_back({h.normal, h.offset, true});
        pieces.push_back(std::move(p));
        s.maps.push_back(AffineMap{Mat(0, m), Vec{}});
        t.maps.push_back(AffineMap::identity(m));
    }
    CornersSpace v = make_corners(std::move(pieces), m);
    MCochainGenerator g = make_cochain_generator(std::move(v), 0, std::move(s), std::move(t),
                                                 CochainVariant::Precochain);
    return make_cochain(ring, mode, CochainVariant::Precochain, 0, y, {{Q(1), std::move(g)}});
}

Cochain add(const Cochain& a, const Cochain& b) {
    if (!(a.ring == b.ring) || a.mode != b.mode || a.variant != b.variant)
        throw std::invalid_argument("ring/mode/variant mismatch");
    if (a.degree != b.degree) throw DimensionMismatch("degree mismatch");
    if (!(a.target == b.target)) throw TargetMismatch("target mismatch");
    Cochain c = a;
    c.terms.insert(c.terms.end(), b.terms.begin(), b.terms.end());
    return c;
}

Cochain negate(Cochain a) {
    for (auto& [c, g] : a.terms) c = ring_normalize(a.ring, -c);
    return a;
}

Cochain scale_cochain(const Q& c, Cochain a) {
    std::vector<std::pair<Q, MCochainGenerator>> kept;
    for (auto& [x, g] : a.terms) {
        Q nx = ring_normalize(a.ring, c * x);
        if (nx != 0) kept.push_back({std::move(nx), std::move(g)});
    }
    a.terms = std::move(kept);
    return a;
}

MChainGenerator cochain_core(const MCochainGenerator& g) {
    MChainGenerator core;
    core.space = g.space;
    core.n = g.n;
    core.s = g.s;
    core.t = g.t;
    core.properness = g.properness;
    return core;
}

MCochainGenerator cochain_from_core(MChainGenerator core, CochainVariant variant) {
    MCochainGenerator g;
    g.space = std::move(core.space);
    g.n = core.n;
    g.s = std::move(core.s);
    g.t = std::move(core.t);
    g.properness = core.properness;
    g.variant = variant;
    return g;
}

Cochain coboundary(const Cochain& a) {
    int out_degree =
        a.variant == CochainVariant::LocallyFiniteChain ? a.degree - 1 : a.degree + 1;
    Cochain out = zero_cochain(a.ring, a.mode, a.variant, out_degree, a.target);
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
        out.terms.push_back({c, make_cochain_generator(std::move(b.space), g.n, std::move(s2),
                                                       std::move(t2), a.variant)});
    }
    return out;
}

namespace {

void check_proper_map(const AffineMap& f, const Target& from, const Target& to) {
    int m1 = from.ambient;
    auto comps = from.kind == Target::Kind::Domain ? from.components
                                                   : std::vector<std::vector<Halfspace>>{{}};
    // (a) recession cones of the component closures meet ker(lin f) only at 0
    for (const auto& comp : comps) {
        LpProblem cone;
        cone.A = Mat(0, m1);
        cone.E = Mat(0, m1);
        for (const auto& h : comp) cone.add_le(h.normal, Q(0));
        for (int i = 0; i < m1; ++i) {
            Vec e(m1);
            e[i] = 1;
            cone.add_le(e, 1);
            cone.add_le(scale(Q(-1), e), 1);
        }
        for (int r = 0; r < f.linear.rows; ++r) cone.add_eq(f.linear.row(r), Q(0));
        for (int i = 0; i < m1; ++i)
            for (int sg : {1, -1}) {
                Vec obj(m1);
                obj[i] = sg;
                LpResult r = lp_maximize(cone, obj);
                if (r.status != LpStatus::Optimal || r.value > 0) throw NotProperMap{};
            }
    }
    // (b) no boundary point of the domain maps strictly into the codomain
    if (from.kind != Target::Kind::Domain) return;
    auto tocomps = to.kind == Target::Kind::Domain ? to.components
                                                   : std::vector<std::vector<Halfspace>>{{}};
    for (const auto& comp : from.components) {
        for (const auto& bd : comp) {
            std::vector<Halfspace> base;
            for (const auto& h : comp) base.push_back({h.normal, h.offset, false});
            base.push_back({scale(Q(-1), bd.normal), -bd.offset, false});  // bd tight
            // exclude points inside any other open component of `from`
            std::vector<std::vector<Halfspace>> stack{base};
            bool covered = false;
            for (const auto& other : from.components) {
                if (&other == &comp) continue;
                if (other.empty()) {
                    covered = true;
                    break;
                }
                std::vector<std::vector<Halfspace>> next;
                for (const auto& sys : stack)
                    for (const auto& h : other) {
                        auto ext = sys;
                        ext.push_back({scale(Q(-1), h.normal), -h.offset, false});
                        next.push_back(std::move(ext));
                    }
                stack = std::move(next);
            }
            if (covered) continue;
            for (const auto& sys : stack) {
                for (const auto& tocomp : tocomps) {
                    LpProblem lp;
                    lp.A = Mat(0, m1 + 1);
                    lp.E = Mat(0, m1 + 1);
                    for (const auto& h : sys) {
                        Vec row = h.normal;
                        row.push_back(0);
                        lp.add_le(row, h.offset);
                    }
                    for (const auto& h : tocomp) {
                        Vec row(m1 + 1);
                        Q cst = 0;
                        for (int i = 0; i < f.linear.rows; ++i) {
                            if (h.normal[i] == 0) continue;
                            for (int j = 0; j < m1; ++j) row[j] += h.normal[i] * f.linear(i, j);
                            cst += h.normal[i] * f.translation[i];
                        }
                        row[m1] = 1;
                        lp.add_le(row, h.offset - cst);
                    }
                    Vec cap(m1 + 1);
                    cap[m1] = 1;
                    lp.add_le(cap, 1);
                    LpResult r = lp_maximize(lp, cap);
                    if (r.status == LpStatus::Optimal && r.value > 0) throw NotProperMap{};
                }
            }
        }
    }
}

}  // namespace

Cochain pullback(const AffineMap& f, const Target& from, const Cochain& a) {
    if (a.variant == CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("use lf_pullback for locally finite prechains");
    if (f.domain_dim() != from.ambient || f.codomain_dim() != a.target.ambient)
        throw TargetMismatch("pullback map shape");
    if (a.variant == CochainVariant::CompactlySupported) check_proper_map(f, from, a.target);

    auto comps = from.kind == Target::Kind::Domain ? from.components
                                                   : std::vector<std::vector<Halfspace>>{{}};
    Cochain out = zero_cochain(a.ring, a.mode, a.variant, a.degree, from);
    int m1 = from.ambient;
    for (const auto& [c, g] : a.terms) {
        CornersSpace space;
        space.dim = g.space.dim + m1 - a.target.ambient;
        SpaceMap s2, t2;
        s2.target = g.s.target;
        t2.target = from;
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            for (const auto& comp : comps) {
                Polyhedron dom;
                dom.flat = full_flat(m1);
                for (const auto& h : comp) dom.ineqs.push_back({h.normal, h.offset, true});
                auto fp =
                    fibre_piece(g.space.pieces[i], g.t.maps[i], dom, f, a.target.ambient, true);
                if (!fp) continue;
                space.pieces.push_back(fp->piece);
                int amb_v = g.space.pieces[i].flat.ambient;
                AffineMap s2m;
                s2m.linear = Mat(g.n, amb_v + m1);
                for (int r = 0; r < g.n; ++r)
                    for (int j = 0; j < amb_v; ++j) s2m.linear(r, j) = g.s.maps[i].linear(r, j);
                s2m.translation = g.s.maps[i].translation;
                s2.maps.push_back(std::move(s2m));
                AffineMap t2m;
                t2m.linear = Mat(m1, amb_v + m1);
                for (int r = 0; r < m1; ++r) t2m.linear(r, amb_v + r) = 1;
                t2m.translation = Vec(m1);
                t2.maps.push_back(std::move(t2m));
            }
        }
        if (space.pieces.empty()) continue;
        out.terms.push_back({c, make_cochain_generator(std::move(space), g.n, std::move(s2),
                                                       std::move(t2), a.variant)});
    }
    return out;
}

std::vector<HPolyhedron> support_bound(const Cochain& a) {
    std::vector<HPolyhedron> out;
    for (const auto& [c, g] : a.terms) {
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            const Polyhedron& p = g.space.pieces[i];
            AffineMap scomp = compose(g.s.maps[i], embedding(p.flat));
            std::vector<std::pair<Vec, Q>> eqs;
            for (int r = 0; r < g.n; ++r)
                eqs.push_back({scomp.linear.row(r), -scomp.translation[r]});
            LpProblem feas;
            feas.A = Mat(0, p.flat.dim());
            feas.E = Mat(0, p.flat.dim());
            for (const auto& h : p.ineqs)
                if (!is_zero_vec(h.normal)) feas.add_le(h.normal, h.offset);
            for (auto& [nrm, cc] : eqs) feas.add_eq(nrm, cc);
            if (!feasible_point(feas)) continue;
            out.push_back(affine_image_hrep(p, g.t.maps[i], eqs));
        }
    }
    return out;
}

Cochain open_pushforward(const Target& into, const Cochain& a) {
    if (a.variant != CochainVariant::CompactlySupported)
        throw std::invalid_argument("open pushforward needs compact generators");
    if (into.ambient != a.target.ambient) throw TargetMismatch("pushforward target shape");
    auto comps = a.target.kind == Target::Kind::Domain
                     ? a.target.components
                     : std::vector<std::vector<Halfspace>>{{}};
    for (const auto& hp : support_bound(a)) {
        std::vector<std::vector<Halfspace>> stack{{}};
        bool covered = false;
        for (const auto& comp : comps) {
            if (comp.empty()) {
                covered = true;
                break;
            }
            std::vector<std::vector<Halfspace>> next;
            for (const auto& sys : stack)
                for (const auto& h : comp) {
                    auto ext = sys;
                    ext.push_back({scale(Q(-1), h.normal), -h.offset, false});
                    next.push_back(std::move(ext));
                }
            stack = std::move(next);
        }
        if (covered) continue;
        for (const auto& sys : stack) {
            LpProblem lp;
            lp.A = Mat(0, hp.ambient);
            lp.E = Mat(0, hp.ambient);
            for (const auto& h : hp.ineqs) lp.add_le(h.normal, h.offset);
            for (const auto& [nrm, cc] : hp.eqs) lp.add_eq(nrm, cc);
            for (const auto& h : sys) lp.add_le(h.normal, h.offset);
            if (feasible_point(lp)) throw SupportEscapes{};
        }
    }
    Cochain out = zero_cochain(a.ring, a.mode, a.variant, a.degree, into);
    for (const auto& [c, g] : a.terms) {
        MCochainGenerator h = g;
        h.t.target = into;
        validate_map(h.space, h.t);
        out.terms.push_back({c, std::move(h)});
    }
    return out;
}

Cochain lf_pullback(const Target& u, const Cochain& a) {
    if (a.variant != CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("lf_pullback needs locally finite prechains");
    if (u.ambient != a.target.ambient) throw TargetMismatch("restriction target shape");
    auto comps =
        u.kind == Target::Kind::Domain ? u.components : std::vector<std::vector<Halfspace>>{{}};
    Cochain out = zero_cochain(a.ring, a.mode, a.variant, a.degree, u);
    for (const auto& [c, g] : a.terms) {
        CornersSpace space;
        space.dim = g.space.dim;
        SpaceMap s2, t2;
        s2.target = g.s.target;
        t2.target = u;
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            AffineMap tm = compose(g.t.maps[i], embedding(g.space.pieces[i].flat));
            for (const auto& comp : comps) {
                Polyhedron q = g.space.pieces[i];
                for (const auto& h : comp) {
                    Vec row(q.flat.dim());
                    Q cst = 0;
                    for (int yi = 0; yi < u.ambient; ++yi) {
                        if (h.normal[yi] == 0) continue;
                        for (int j = 0; j < q.flat.dim(); ++j)
                            row[j] += h.normal[yi] * tm.linear(yi, j);
                        cst += h.normal[yi] * tm.translation[yi];
                    }
                    q.ineqs.push_back({std::move(row), h.offset - cst, true});
                }
                Measure mm = measure(q);
                if (mm.empty || mm.dim != q.flat.dim()) continue;
                space.pieces.push_back(std::move(q));
                s2.maps.push_back(g.s.maps[i]);
                t2.maps.push_back(g.t.maps[i]);
            }
        }
        if (space.pieces.empty()) continue;
        out.terms.push_back({c, make_cochain_generator(std::move(space), g.n, std::move(s2),
                                                       std::move(t2), a.variant)});
    }
    return out;
}

Cochain cochain_normal_form(const Cochain& a) {
    Chain carrier;
    carrier.ring = a.ring;
    carrier.mode = a.mode;
    carrier.target = a.target;
    if (!a.terms.empty()) carrier.degree = cochain_core(a.terms[0].second).degree();
    for (const auto& [c, g] : a.terms) carrier.terms.push_back({c, cochain_core(g)});
    Chain nf = normal_form(carrier);
    Cochain out = zero_cochain(a.ring, a.mode, a.variant, a.degree, a.target);
    for (auto& [c, g] : nf.terms)
        out.terms.push_back({c, cochain_from_core(std::move(g), a.variant)});
    return out;
}

ZeroResult is_zero_cochain(const Cochain& a) {
    Cochain nf = cochain_normal_form(a);
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
    return relation_engine(nf.ring, terms, nf.target, ContactRule::XZeroTargetInterior);
}

bool equals(const Cochain& a, const Cochain& b) {
    return is_zero_cochain(add(a, negate(b))).zero;
}

CutFunction CutFunction::affine(Vec normal, Q constant) {
    CutFunction f;
    size_t m = normal.size();
    f.pos = {{std::move(normal), std::move(constant)}};
    f.neg = {{Vec(m), Q(0)}};
    return f;
}

CutFunction CutFunction::box_difference(const std::vector<std::pair<Q, Q>>& t_box,
                                        const std::vector<std::pair<Q, Q>>& u_box) {
    int m = static_cast<int>(t_box.size());
    CutFunction f;
    for (int i = 0; i < m; ++i) {
        Vec lo(m), hi(m);
        lo[i] = 1;
        hi[i] = -1;
        f.pos.push_back({lo, -t_box[i].first});  // y_i - a_i
        f.pos.push_back({hi, t_box[i].second});  // b_i - y_i
        f.neg.push_back({lo, -u_box[i].first});
        f.neg.push_back({hi, u_box[i].second});
    }
    return f;
}

Q cut_eval(const CutFunction& f, const Vec& y) {
    auto eval_min = [&](const std::vector<AffineFunctional>& fs) {
        Q best = dot(fs[0].normal, y) + fs[0].constant;
        for (size_t i = 1; i < fs.size(); ++i) {
            Q v = dot(fs[i].normal, y) + fs[i].constant;
            if (v < best) best = v;
        }
        return best;
    };
    return eval_min(f.pos) - eval_min(f.neg);
}

namespace {

// {f >= 0} (or <= 0) within `inside` must be contained in `within`.
void check_region_inclusion(const CutFunction& f, bool nonneg, const Target& inside,
                            const Target& within) {
    int m = inside.ambient;
    const auto& act = nonneg ? f.neg : f.pos;  // the smaller min on this side
    const auto& oth = nonneg ? f.pos : f.neg;
    auto in_comps = inside.kind == Target::Kind::Domain
                        ? inside.components
                        : std::vector<std::vector<Halfspace>>{{}};
    auto win_comps = within.kind == Target::Kind::Domain
                         ? within.components
                         : std::vector<std::vector<Halfspace>>{{}};
    for (size_t j = 0; j < act.size(); ++j) {
        std::vector<Halfspace> region;
        for (size_t j2 = 0; j2 < act.size(); ++j2) {
            if (j2 == j) continue;
            Vec n = act[j].normal - act[j2].normal;
            region.push_back({n, act[j2].constant - act[j].constant, false});
        }
        for (const auto& g : oth) {
            Vec n = act[j].normal - g.normal;
            region.push_back({n, g.constant - act[j].constant, false});
        }
        for (const auto& incomp : in_comps) {
            std::vector<Halfspace> sys = region;
            for (const auto& h : incomp) sys.push_back({h.normal, h.offset, true});
            std::vector<std::vector<Halfspace>> stack{sys};
            bool covered = false;
            for (const auto& wcomp : win_comps) {
                if (wcomp.empty()) {
                    covered = true;
                    break;
                }
                std::vector<std::vector<Halfspace>> next;
                for (const auto& s : stack)
                    for (const auto& h : wcomp) {
                        auto ext = s;
                        ext.push_back({scale(Q(-1), h.normal), -h.offset, false});
                        next.push_back(std::move(ext));
                    }
                stack = std::move(next);
            }
            if (covered) continue;
            for (const auto& s : stack)
                if (feasible_strict(s, m)) throw BadCutFunction{};
        }
    }
}

}  // namespace

void validate_cut(const CutFunction& f, const Target& t, const Target& u,
                  const Target& union_target) {
    check_region_inclusion(f, /*nonneg=*/true, union_target, t);
    check_region_inclusion(f, /*nonneg=*/false, union_target, u);
}

std::vector<CutPiece> subdivide_by_cut(const Polyhedron& piece, const AffineMap& tmap,
                                       const CutFunction& f) {
    AffineMap tm = compose(tmap, embedding(piece.flat));
    int d = piece.flat.dim();
    auto pull = [&](const AffineFunctional& a) {
        AffineFunctional out;
        out.normal = Vec(d);
        out.constant = a.constant;
        for (int yi = 0; yi < tm.linear.rows; ++yi) {
            if (a.normal[yi] == 0) continue;
            for (int j = 0; j < d; ++j) out.normal[j] += a.normal[yi] * tm.linear(yi, j);
            out.constant += a.normal[yi] * tm.translation[yi];
        }
        return out;
    };
    std::vector<AffineFunctional> pos, neg;
    for (const auto& a : f.pos) pos.push_back(pull(a));
    for (const auto& a : f.neg) neg.push_back(pull(a));

    std::vector<Hyperplane> hps;
    auto add_pairs = [&](const std::vector<AffineFunctional>& fs) {
        for (size_t i = 0; i < fs.size(); ++i)
            for (size_t j = i + 1; j < fs.size(); ++j) {
                Vec n = fs[i].normal - fs[j].normal;
                Q o = fs[j].constant - fs[i].constant;
                if (!is_zero_vec(n)) hps.push_back(make_hyperplane(std::move(n), std::move(o)));
            }
    };
    add_pairs(pos);
    add_pairs(neg);

    Arrangement arr = arrange(d, std::move(hps), piece.ineqs);
    std::vector<CutPiece> out;
    for (const auto& cell : arr.cells) {
        CutPiece cp;
        cp.piece = piece;
        for (size_t h = 0; h < arr.hyperplanes.size(); ++h) {
            const Hyperplane& hp = arr.hyperplanes[h];
            if (cell.signs[h] < 0)
                cp.piece.ineqs.push_back({hp.normal, hp.offset, true});
            else
                cp.piece.ineqs.push_back({scale(Q(-1), hp.normal), -hp.offset, true});
        }
        auto argmin = [&](const std::vector<AffineFunctional>& fs) {
            size_t best = 0;
            Q bv = dot(fs[0].normal, cell.sample) + fs[0].constant;
            for (size_t i = 1; i < fs.size(); ++i) {
                Q v = dot(fs[i].normal, cell.sample) + fs[i].constant;
                if (v < bv) {
                    bv = v;
                    best = i;
                }
            }
            return best;
        };
        const AffineFunctional& yp = f.pos[argmin(pos)];
        const AffineFunctional& yn = f.neg[argmin(neg)];
        AffineFunctional amb;
        amb.normal = Vec(tmap.domain_dim());
        amb.constant = yp.constant - yn.constant;
        for (int yi = 0; yi < tmap.linear.rows; ++yi) {
            Q cdiff = yp.normal[yi] - yn.normal[yi];
            if (cdiff == 0) continue;
            for (int j = 0; j < tmap.domain_dim(); ++j)
                amb.normal[j] += cdiff * tmap.linear(yi, j);
            amb.constant += cdiff * tmap.translation[yi];
        }
        cp.active = std::move(amb);
        out.push_back(std::move(cp));
    }
    return out;
}

namespace {

// Shared form of the Pi operators: optionally restrict to t^{-1}(region),
// subdivide along the cut, take the product with a half line, and append
// the reference coordinate f o t o pi + pi_R.
struct PiParts {
    CornersSpace space;
    SpaceMap s;
    SpaceMap t;
};

PiParts pi_operator_parts(const CornersSpace& vspace, int n, const SpaceMap& smap,
                          const SpaceMap& tmap, const Target& new_target, MvSide side,
                          const CutFunction& f, bool restrict_first,
                          const Target& restrict_to) {
    PiParts out;
    out.space.dim = vspace.dim + 1;
    out.s.target = Target::euclidean(n + 1);
    out.t.target = new_target;

    for (size_t i = 0; i < vspace.pieces.size(); ++i) {
        std::vector<Polyhedron> bases;
        if (restrict_first) {
            AffineMap tm = compose(tmap.maps[i], embedding(vspace.pieces[i].flat));
            auto comps = restrict_to.kind == Target::Kind::Domain
                             ? restrict_to.components
                             : std::vector<std::vector<Halfspace>>{{}};
            for (const auto& comp : comps) {
                Polyhedron q = vspace.pieces[i];
                for (const auto& h : comp) {
                    Vec row(q.flat.dim());
                    Q cst = 0;
                    for (int yi = 0; yi < restrict_to.ambient; ++yi) {
                        if (h.normal[yi] == 0) continue;
                        for (int j = 0; j < q.flat.dim(); ++j)
                            row[j] += h.normal[yi] * tm.linear(yi, j);
                        cst += h.normal[yi] * tm.translation[yi];
                    }
                    q.ineqs.push_back({std::move(row), h.offset - cst, true});
                }
                Measure mm = measure(q);
                if (!mm.empty && mm.dim == q.flat.dim()) bases.push_back(std::move(q));
            }
        } else {
            bases.push_back(vspace.pieces[i]);
        }
        for (const Polyhedron& base : bases) {
            for (const CutPiece& cp : subdivide_by_cut(base, tmap.maps[i], f)) {
                int amb = cp.piece.flat.ambient;
                int d = cp.piece.flat.dim();
                Polyhedron q;
                q.orient = cp.piece.orient;
                q.flat.ambient = amb + 1;
                q.flat.base = cp.piece.flat.base;
                q.flat.base.push_back(0);
                for (const auto& b : cp.piece.flat.basis) {
                    Vec v = b;
                    v.push_back(0);
                    q.flat.basis.push_back(std::move(v));
                }
                Vec last(amb + 1);
                last[amb] = 1;
                q.flat.basis.push_back(std::move(last));
                for (const auto& h : cp.piece.ineqs) {
                    Vec nn = h.normal;
                    nn.push_back(0);
                    q.ineqs.push_back({std::move(nn), h.offset, h.strict});
                }
                Vec half(d + 1);
                half[d] = side == MvSide::TMinus ? 1 : -1;
                q.ineqs.push_back({std::move(half), Q(0), false});
                out.space.pieces.push_back(std::move(q));

                const AffineMap& sm = smap.maps[i];
                AffineMap s2;
                s2.linear = Mat(n + 1, amb + 1);
                s2.translation = Vec(n + 1);
                for (int r = 0; r < n; ++r) {
                    for (int j = 0; j < amb; ++j) s2.linear(r, j) = sm.linear(r, j);
                    s2.translation[r] = sm.translation[r];
                }
                for (int j = 0; j < amb; ++j) s2.linear(n, j) = cp.active.normal[j];
                s2.linear(n, amb) = 1;
                s2.translation[n] = cp.active.constant;
                out.s.maps.push_back(std::move(s2));

                const AffineMap& tmv = tmap.maps[i];
                AffineMap t2;
                t2.linear = Mat(tmv.linear.rows, amb + 1);
                for (int r = 0; r < tmv.linear.rows; ++r)
                    for (int j = 0; j < amb; ++j) t2.linear(r, j) = tmv.linear(r, j);
                t2.translation = tmv.translation;
                out.t.maps.push_back(std::move(t2));
            }
        }
    }
    return out;
}

}  // namespace

Cochain mv_split(const Cochain& a, const Target& union_target, MvSide side,
                 const CutFunction& f) {
    if (a.variant != CochainVariant::Precochain)
        throw std::invalid_argument("mv_split acts on precochains");
    Cochain out = zero_cochain(a.ring, a.mode, a.variant, a.degree, union_target);
    for (const auto& [c, g] : a.terms) {
        PiParts parts = pi_operator_parts(g.space, g.n, g.s, g.t, union_target, side, f,
                                          /*restrict_first=*/false, union_target);
        if (parts.space.pieces.empty()) continue;
        out.terms.push_back({c, make_cochain_generator(std::move(parts.space), g.n + 1,
                                                       std::move(parts.s), std::move(parts.t),
                                                       a.variant)});
    }
    return out;
}

Chain mv_chain_split(const Chain& a, const Target& part_target, MvSide side,
                     const CutFunction& f) {
    Chain out = zero_chain(a.ring, a.mode, a.degree, part_target);
    for (const auto& [c, g] : a.terms) {
        PiParts parts = pi_operator_parts(g.space, g.n, g.s, g.t, part_target, side, f,
                                          /*restrict_first=*/true, part_target);
        if (parts.space.pieces.empty()) continue;
        out.terms.push_back({c, make_generator(std::move(parts.space), g.n + 1,
                                               std::move(parts.s), std::move(parts.t))});
    }
    return out;
}

}  // namespace mchain

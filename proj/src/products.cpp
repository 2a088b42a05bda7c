#include "mchain/products.hpp"

namespace mchain {

Target product_target(const Target& a, const Target& b) {
    if (a.kind == Target::Kind::Point && b.kind == Target::Kind::Point) return Target::point();
    auto comps_of = [](const Target& t) {
        return t.kind == Target::Kind::Domain ? t.components
                                              : std::vector<std::vector<Halfspace>>{{}};
    };
    std::vector<std::vector<Halfspace>> comps;
    for (const auto& ca : comps_of(a))
        for (const auto& cb : comps_of(b)) {
            std::vector<Halfspace> comp;
            for (const auto& h : ca) {
                Vec n = h.normal;
                n.resize(a.ambient + b.ambient);
                comp.push_back({std::move(n), h.offset, true});
            }
            for (const auto& h : cb) {
                Vec n(a.ambient);
                n.insert(n.end(), h.normal.begin(), h.normal.end());
                comp.push_back({std::move(n), h.offset, true});
            }
            comps.push_back(std::move(comp));
        }
    return Target::domain(a.ambient + b.ambient, std::move(comps));
}

namespace {

// The common fibre-product body for cup and cap: V x_{t,Y,t'} V' with the
// reference coordinates of the left factor first. The left factor's t must
// be the submersion. Returns one generator worth of data.
struct FibreTermParts {
    CornersSpace space;
    SpaceMap s;
    SpaceMap t;
};

template <typename GenA, typename GenB>
std::optional<FibreTermParts> fibre_term(const GenA& ga, const GenB& gb, const Target& y) {
    int m = y.ambient;
    FibreTermParts parts;
    parts.space.dim = ga.space.dim + gb.space.dim - m;
    parts.s.target = Target::euclidean(ga.n + gb.n);
    parts.t.target = y;
    for (size_t i = 0; i < ga.space.pieces.size(); ++i) {
        for (size_t j = 0; j < gb.space.pieces.size(); ++j) {
            auto fp = fibre_piece(ga.space.pieces[i], ga.t.maps[i], gb.space.pieces[j],
                                  gb.t.maps[j], m, /*submersion_on_left=*/true);
            if (!fp) continue;
            int amb_a = ga.space.pieces[i].flat.ambient;
            int amb_b = gb.space.pieces[j].flat.ambient;
            parts.space.pieces.push_back(std::move(fp->piece));

            AffineMap s2;
            s2.linear = Mat(ga.n + gb.n, amb_a + amb_b);
            s2.translation = Vec(ga.n + gb.n);
            for (int r = 0; r < ga.n; ++r) {
                for (int c = 0; c < amb_a; ++c) s2.linear(r, c) = ga.s.maps[i].linear(r, c);
                s2.translation[r] = ga.s.maps[i].translation[r];
            }
            for (int r = 0; r < gb.n; ++r) {
                for (int c = 0; c < amb_b; ++c)
                    s2.linear(ga.n + r, amb_a + c) = gb.s.maps[j].linear(r, c);
                s2.translation[ga.n + r] = gb.s.maps[j].translation[r];
            }
            parts.s.maps.push_back(std::move(s2));

            AffineMap t2;
            t2.linear = Mat(m, amb_a + amb_b);
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < amb_a; ++c) t2.linear(r, c) = ga.t.maps[i].linear(r, c);
            t2.translation = ga.t.maps[i].translation;
            parts.t.maps.push_back(std::move(t2));
        }
    }
    if (parts.space.pieces.empty()) return std::nullopt;
    return parts;
}

// Product parts for the cross products: V x V' with concatenated data.
template <typename GenA, typename GenB>
FibreTermParts product_term(const GenA& ga, const GenB& gb, const Target& yprod) {
    FibreTermParts parts;
    parts.space.dim = ga.space.dim + gb.space.dim;
    parts.s.target = Target::euclidean(ga.n + gb.n);
    parts.t.target = yprod;
    Product pr = product(ga.space, gb.space);
    parts.space = pr.space;
    int m1 = ga.t.target.ambient, m2 = gb.t.target.ambient;
    for (const auto& [i, j] : pr.from) {
        int amb_a = ga.space.pieces[i].flat.ambient;
        int amb_b = gb.space.pieces[j].flat.ambient;
        AffineMap s2;
        s2.linear = Mat(ga.n + gb.n, amb_a + amb_b);
        s2.translation = Vec(ga.n + gb.n);
        for (int r = 0; r < ga.n; ++r) {
            for (int c = 0; c < amb_a; ++c) s2.linear(r, c) = ga.s.maps[i].linear(r, c);
            s2.translation[r] = ga.s.maps[i].translation[r];
        }
        for (int r = 0; r < gb.n; ++r) {
            for (int c = 0; c < amb_b; ++c)
                s2.linear(ga.n + r, amb_a + c) = gb.s.maps[j].linear(r, c);
            s2.translation[ga.n + r] = gb.s.maps[j].translation[r];
        }
        parts.s.maps.push_back(std::move(s2));

        AffineMap t2;
        t2.linear = Mat(m1 + m2, amb_a + amb_b);
        t2.translation = Vec(m1 + m2);
        for (int r = 0; r < m1; ++r) {
            for (int c = 0; c < amb_a; ++c) t2.linear(r, c) = ga.t.maps[i].linear(r, c);
            t2.translation[r] = ga.t.maps[i].translation[r];
        }
        for (int r = 0; r < m2; ++r) {
            for (int c = 0; c < amb_b; ++c)
                t2.linear(m1 + r, amb_a + c) = gb.t.maps[j].linear(r, c);
            t2.translation[m1 + r] = gb.t.maps[j].translation[r];
        }
        parts.t.maps.push_back(std::move(t2));
    }
    return parts;
}

}  // namespace

Cochain cup(const Cochain& a, const Cochain& b) {
    if (!(a.target == b.target)) throw TargetMismatch("cup needs one target");
    if (!(a.ring == b.ring) || a.mode != b.mode) throw std::invalid_argument("ring mismatch");
    if (a.variant == CochainVariant::LocallyFiniteChain ||
        b.variant == CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("cup is a cochain product");
    CochainVariant variant = (a.variant == CochainVariant::CompactlySupported ||
                              b.variant == CochainVariant::CompactlySupported)
                                 ? CochainVariant::CompactlySupported
                                 : CochainVariant::Precochain;
    Cochain out = zero_cochain(a.ring, a.mode, variant, a.degree + b.degree, a.target);
    for (const auto& [ca, ga] : a.terms)
        for (const auto& [cb, gb] : b.terms) {
            auto parts = fibre_term(ga, gb, a.target);
            if (!parts) continue;
            Q coeff = ca * cb * sign_rules::cup(b.degree, ga.n);
            out.terms.push_back(
                {coeff, make_cochain_generator(std::move(parts->space), ga.n + gb.n,
                                               std::move(parts->s), std::move(parts->t),
                                               variant)});
        }
    return out;
}

Chain cap(const Cochain& a, const Chain& b) {
    if (!(a.target == b.target)) throw TargetMismatch("cap needs one target");
    if (!(a.ring == b.ring) || a.mode != b.mode) throw std::invalid_argument("ring mismatch");
    int m = a.target.ambient;
    Chain out = zero_chain(b.ring, b.mode, b.degree - a.degree, b.target);
    for (const auto& [ca, ga] : a.terms)
        for (const auto& [cb, gb] : b.terms) {
            auto parts = fibre_term(ga, gb, a.target);
            if (!parts) continue;
            Q coeff = ca * cb * sign_rules::cap(b.degree, m, ga.n);
            out.terms.push_back({coeff, make_generator(std::move(parts->space), ga.n + gb.n,
                                                       std::move(parts->s),
                                                       std::move(parts->t))});
        }
    return out;
}

Cochain cap(const Cochain& a, const Cochain& b_lf) {
    if (b_lf.variant != CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("cap against chains or locally finite prechains");
    if (!(a.target == b_lf.target)) throw TargetMismatch("cap needs one target");
    int m = a.target.ambient;
    Cochain out = zero_cochain(b_lf.ring, b_lf.mode, CochainVariant::LocallyFiniteChain,
                               b_lf.degree - a.degree, b_lf.target);
    for (const auto& [ca, ga] : a.terms)
        for (const auto& [cb, gb] : b_lf.terms) {
            auto parts = fibre_term(ga, gb, a.target);
            if (!parts) continue;
            Q coeff = ca * cb * sign_rules::cap(b_lf.degree, m, ga.n);
            out.terms.push_back(
                {coeff, make_cochain_generator(std::move(parts->space), ga.n + gb.n,
                                               std::move(parts->s), std::move(parts->t),
                                               CochainVariant::LocallyFiniteChain)});
        }
    return out;
}

Cochain cross_cochain(const Cochain& a, const Cochain& b) {
    if (a.variant == CochainVariant::LocallyFiniteChain ||
        b.variant == CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("cross_cochain is a cochain product");
    CochainVariant variant = (a.variant == CochainVariant::CompactlySupported &&
                              b.variant == CochainVariant::CompactlySupported)
                                 ? CochainVariant::CompactlySupported
                                 : CochainVariant::Precochain;
    Target yprod = product_target(a.target, b.target);
    int m1 = a.target.ambient, m2 = b.target.ambient;
    Cochain out = zero_cochain(a.ring, a.mode, variant, a.degree + b.degree, yprod);
    for (const auto& [ca, ga] : a.terms)
        for (const auto& [cb, gb] : b.terms) {
            FibreTermParts parts = product_term(ga, gb, yprod);
            if (parts.space.pieces.empty()) continue;
            Q coeff = ca * cb * sign_rules::cup(b.degree, ga.n);
            // coorientations are stored as orientations against the standard
            // target orientations; the product coorientation then differs
            // from the plain product orientation by this shuffle factor
            if ((m1 * (gb.space.dim + m2)) % 2) coeff = -coeff;
            out.terms.push_back(
                {coeff, make_cochain_generator(std::move(parts.space), ga.n + gb.n,
                                               std::move(parts.s), std::move(parts.t),
                                               variant)});
        }
    return out;
}

Chain cross_chain(const Chain& a, const Chain& b) {
    Target yprod = product_target(a.target, b.target);
    int m2 = b.target.ambient;
    Chain out = zero_chain(a.ring, a.mode, a.degree + b.degree, yprod);
    for (const auto& [ca, ga] : a.terms)
        for (const auto& [cb, gb] : b.terms) {
            FibreTermParts parts = product_term(ga, gb, yprod);
            if (parts.space.pieces.empty()) continue;
            Q coeff = ca * cb * sign_rules::cross_chain(b.degree, m2, ga.n);
            out.terms.push_back({coeff, make_generator(std::move(parts.space), ga.n + gb.n,
                                                       std::move(parts.s),
                                                       std::move(parts.t))});
        }
    return out;
}

Cochain cross_lf(const Cochain& a, const Cochain& b) {
    if (a.variant != CochainVariant::LocallyFiniteChain ||
        b.variant != CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("cross_lf needs locally finite prechains");
    Target yprod = product_target(a.target, b.target);
    int m2 = b.target.ambient;
    Cochain out = zero_cochain(a.ring, a.mode, CochainVariant::LocallyFiniteChain,
                               a.degree + b.degree, yprod);
    for (const auto& [ca, ga] : a.terms)
        for (const auto& [cb, gb] : b.terms) {
            FibreTermParts parts = product_term(ga, gb, yprod);
            if (parts.space.pieces.empty()) continue;
            Q coeff = ca * cb * sign_rules::cross_chain(b.degree, m2, ga.n);
            out.terms.push_back(
                {coeff, make_cochain_generator(std::move(parts.space), ga.n + gb.n,
                                               std::move(parts.s), std::move(parts.t),
                                               CochainVariant::LocallyFiniteChain)});
        }
    return out;
}

namespace {

template <typename Gen>
Gen reverse_references(const Gen& g) {
    Gen out = g;
    for (size_t i = 0; i < g.s.maps.size(); ++i) {
        for (int r = 0; r < g.n; ++r) {
            int src = g.n - 1 - r;
            for (int c = 0; c < g.s.maps[i].linear.cols; ++c)
                out.s.maps[i].linear(r, c) = g.s.maps[i].linear(src, c);
            out.s.maps[i].translation[r] = g.s.maps[i].translation[src];
        }
    }
    return out;
}

}  // namespace

Chain xi(const Chain& a) {
    Chain out = a;
    out.terms.clear();
    for (const auto& [c, g] : a.terms)
        out.terms.push_back({c * sign_rules::xi(g.n), reverse_references(g)});
    return out;
}

Cochain xi(const Cochain& a) {
    Cochain out = a;
    out.terms.clear();
    for (const auto& [c, g] : a.terms)
        out.terms.push_back({c * sign_rules::xi(g.n), reverse_references(g)});
    return out;
}

Chain pd_compact(const Cochain& a, ChainMode mode) {
    if (a.variant != CochainVariant::CompactlySupported)
        throw std::invalid_argument("pd_compact needs compactly supported cochains");
    if (a.target.kind != Target::Kind::Domain && a.target.kind != Target::Kind::Euclidean)
        throw TargetMismatch("duality needs an oriented domain target");
    Chain out = zero_chain(a.ring, mode, a.target.ambient - a.degree, a.target);
    for (const auto& [c, g] : a.terms) out.terms.push_back({c, cochain_core(g)});
    return out;
}

Cochain pd(const Cochain& a) {
    if (a.variant != CochainVariant::Precochain)
        throw std::invalid_argument("pd retags precochains to locally finite prechains");
    if (a.target.kind != Target::Kind::Domain && a.target.kind != Target::Kind::Euclidean)
        throw TargetMismatch("duality needs an oriented domain target");
    Cochain out = a;
    out.variant = CochainVariant::LocallyFiniteChain;
    out.degree = a.target.ambient - a.degree;
    for (auto& [c, g] : out.terms) g.variant = CochainVariant::LocallyFiniteChain;
    return out;
}

namespace {

void require_submersion(const AffineMap& f, int m_to) {
    if (rank(f.linear) != m_to) throw NotSubmersion{};
}

}  // namespace

Chain shriek_lower(const AffineMap& f, const Target& y, const Chain& a_on_z) {
    require_submersion(f, a_on_z.target.ambient);
    int mz = a_on_z.target.ambient;
    Chain out = zero_chain(a_on_z.ring, a_on_z.mode,
                           a_on_z.degree - mz + y.ambient, y);
    auto comps =
        y.kind == Target::Kind::Domain ? y.components : std::vector<std::vector<Halfspace>>{{}};
    for (const auto& [c, g] : a_on_z.terms) {
        CornersSpace space;
        space.dim = g.space.dim + y.ambient - mz;
        SpaceMap s2, t2;
        s2.target = g.s.target;
        t2.target = y;
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            for (const auto& comp : comps) {
                Polyhedron dom;
                dom.flat = full_flat(y.ambient);
                for (const auto& h : comp) dom.ineqs.push_back({h.normal, h.offset, true});
                auto fp = fibre_piece(g.space.pieces[i], g.t.maps[i], dom, f, mz,
                                      /*submersion_on_left=*/false);
                if (!fp) continue;
                space.pieces.push_back(fp->piece);
                int amb_v = g.space.pieces[i].flat.ambient;
                AffineMap s2m;
                s2m.linear = Mat(g.n, amb_v + y.ambient);
                for (int r = 0; r < g.n; ++r)
                    for (int j = 0; j < amb_v; ++j) s2m.linear(r, j) = g.s.maps[i].linear(r, j);
                s2m.translation = g.s.maps[i].translation;
                s2.maps.push_back(std::move(s2m));
                AffineMap t2m;
                t2m.linear = Mat(y.ambient, amb_v + y.ambient);
                for (int r = 0; r < y.ambient; ++r) t2m.linear(r, amb_v + r) = 1;
                t2m.translation = Vec(y.ambient);
                t2.maps.push_back(std::move(t2m));
            }
        }
        if (space.pieces.empty()) continue;
        out.terms.push_back(
            {c, make_generator(std::move(space), g.n, std::move(s2), std::move(t2))});
    }
    return out;
}

Cochain shriek_lower_lf(const AffineMap& f, const Target& y, const Cochain& a_on_z) {
    if (a_on_z.variant != CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("shriek_lower_lf needs locally finite prechains");
    require_submersion(f, a_on_z.target.ambient);
    int mz = a_on_z.target.ambient;
    Cochain out = zero_cochain(a_on_z.ring, a_on_z.mode, a_on_z.variant,
                               a_on_z.degree - mz + y.ambient, y);
    auto comps =
        y.kind == Target::Kind::Domain ? y.components : std::vector<std::vector<Halfspace>>{{}};
    for (const auto& [c, g] : a_on_z.terms) {
        CornersSpace space;
        space.dim = g.space.dim + y.ambient - mz;
        SpaceMap s2, t2;
        s2.target = g.s.target;
        t2.target = y;
        for (size_t i = 0; i < g.space.pieces.size(); ++i) {
            for (const auto& comp : comps) {
                Polyhedron dom;
                dom.flat = full_flat(y.ambient);
                for (const auto& h : comp) dom.ineqs.push_back({h.normal, h.offset, true});
                auto fp = fibre_piece(g.space.pieces[i], g.t.maps[i], dom, f, mz,
                                      /*submersion_on_left=*/false);
                if (!fp) continue;
                space.pieces.push_back(fp->piece);
                int amb_v = g.space.pieces[i].flat.ambient;
                AffineMap s2m;
                s2m.linear = Mat(g.n, amb_v + y.ambient);
                for (int r = 0; r < g.n; ++r)
                    for (int j = 0; j < amb_v; ++j) s2m.linear(r, j) = g.s.maps[i].linear(r, j);
                s2m.translation = g.s.maps[i].translation;
                s2.maps.push_back(std::move(s2m));
                AffineMap t2m;
                t2m.linear = Mat(y.ambient, amb_v + y.ambient);
                for (int r = 0; r < y.ambient; ++r) t2m.linear(r, amb_v + r) = 1;
                t2m.translation = Vec(y.ambient);
                t2.maps.push_back(std::move(t2m));
            }
        }
        if (space.pieces.empty()) continue;
        out.terms.push_back({c, make_cochain_generator(std::move(space), g.n, std::move(s2),
                                                       std::move(t2), a_on_z.variant)});
    }
    return out;
}

Cochain shriek_upper(const AffineMap& f, const Target& z, const Cochain& a_on_y) {
    if (a_on_y.variant == CochainVariant::LocallyFiniteChain)
        throw std::invalid_argument("shriek_upper acts on cochains");
    require_submersion(f, z.ambient);
    Cochain out = zero_cochain(a_on_y.ring, a_on_y.mode, a_on_y.variant,
                               a_on_y.degree - a_on_y.target.ambient + z.ambient, z);
    for (const auto& [c, g] : a_on_y.terms) {
        SpaceMap t2;
        t2.target = z;
        for (const auto& m : g.t.maps) t2.maps.push_back(compose(f, m));
        out.terms.push_back({c, make_cochain_generator(g.space, g.n, g.s, std::move(t2),
                                                       a_on_y.variant)});
    }
    return out;
}

}  // namespace mchain

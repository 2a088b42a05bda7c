#include "mchain/corners.hpp"

#include <algorithm>

namespace mchain {

Target Target::domain(int m, std::vector<std::vector<Halfspace>> comps) {
    Target t;
    t.kind = Kind::Domain;
    t.ambient = m;
    t.components = std::move(comps);
    if (t.components.empty()) throw std::invalid_argument("domain needs at least one component");
    for (auto& comp : t.components) {
        for (auto& h : comp) {
            if (static_cast<int>(h.normal.size()) != m)
                throw std::invalid_argument("domain constraint shape");
            h.strict = true;
        }
        if (!hrep_feasible(comp, m))
            throw std::invalid_argument("domain component has empty solution set");
    }
    return t;
}

CornersSpace make_corners(std::vector<Polyhedron> pieces, int dim) {
    CornersSpace v;
    v.dim = dim;
    for (auto& p : pieces) {
        Measure m = measure(p);
        if (m.empty) continue;
        if (p.flat.dim() != dim || m.dim != dim)
            throw std::invalid_argument("piece not full-dimensional of the declared dimension");
        if (p.orient != 1 && p.orient != -1) throw std::invalid_argument("bad orientation sign");
        v.pieces.push_back(std::move(p));
    }
    return v;
}

bool target_contains_point(const Target& t, const Vec& y, bool strictly) {
    if (static_cast<int>(y.size()) != t.ambient) return false;
    if (t.kind != Target::Kind::Domain) return true;
    for (const auto& comp : t.components) {
        bool ok = true;
        for (const auto& h : comp) {
            Q v = dot(h.normal, y);
            if (strictly ? v >= h.offset : v > h.offset) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

// Feasibility that honours strict rows: a point must satisfy them with
// positive slack (strict sides of pieces are not part of the space).
bool feasible_strict(const std::vector<Halfspace>& ineqs, int dim) {
    bool any_strict = false;
    for (const auto& h : ineqs) any_strict |= h.strict;
    if (!any_strict) return hrep_feasible(ineqs, dim);
    LpProblem p;
    p.A = Mat(0, dim + 1);
    p.E = Mat(0, dim + 1);
    for (const auto& h : ineqs) {
        if (is_zero_vec(h.normal)) {
            if (h.offset < 0) return false;
            if (h.strict && h.offset == 0) return false;
            continue;
        }
        Vec row = h.normal;
        row.push_back(h.strict ? Q(1) : Q(0));
        p.add_le(row, h.offset);
    }
    Vec cap(dim + 1);
    cap[dim] = 1;
    p.add_le(cap, 1);
    LpResult r = lp_maximize(p, cap);
    return r.status == LpStatus::Optimal && r.value > 0;
}

namespace {

// Is there a piece point violating every component? Expands the complement
// of the union over one constraint choice per component.
bool escapes_domain(const Polyhedron& piece, const AffineMap& g, const Target& t,
                    size_t comp_idx, std::vector<Halfspace>& acc) {
    if (comp_idx == t.components.size()) {
        return feasible_strict(acc, piece.flat.dim());
    }
    const auto& comp = t.components[comp_idx];
    if (comp.empty()) return false;  // component covers everything
    for (const auto& h : comp) {
        // violation of a strict constraint: h.normal . y >= h.offset
        Vec row(piece.flat.dim());
        Q rhs = h.offset;
        for (int j = 0; j < piece.flat.dim(); ++j) {
            Q c = 0;
            for (int i = 0; i < g.linear.rows; ++i) c += h.normal[i] * g.linear(i, j);
            row[j] = -c;
        }
        for (int i = 0; i < g.linear.rows; ++i) rhs -= h.normal[i] * g.translation[i];
        acc.push_back({row, -rhs, false});  // -(h.n . g(u)) <= -h.offset
        bool esc = escapes_domain(piece, g, t, comp_idx + 1, acc);
        acc.pop_back();
        if (esc) return true;
    }
    return false;
}

}  // namespace

void validate_map(const CornersSpace& v, const SpaceMap& m) {
    if (m.maps.size() != v.pieces.size()) throw std::invalid_argument("map count != piece count");
    for (size_t i = 0; i < v.pieces.size(); ++i) {
        const auto& p = v.pieces[i];
        const auto& f = m.maps[i];
        if (f.domain_dim() != p.flat.ambient)
            throw std::invalid_argument("map domain != piece ambient");
        if (f.codomain_dim() != m.target.ambient)
            throw std::invalid_argument("map codomain != target ambient");
        if (m.target.kind == Target::Kind::Domain) {
            AffineMap g = compose(f, embedding(p.flat));
            std::vector<Halfspace> acc = p.ineqs;
            if (escapes_domain(p, g, m.target, 0, acc))
                throw TargetMismatch("piece image leaves the target domain");
        }
    }
}

Boundary boundary(const CornersSpace& v) {
    if (v.dim < 1) throw std::invalid_argument("boundary of zero-dimensional space");
    Boundary out;
    out.space.dim = v.dim - 1;
    for (size_t i = 0; i < v.pieces.size(); ++i) {
        for (auto& f : facets(v.pieces[i])) {
            out.space.pieces.push_back(std::move(f.poly));
            out.parent.push_back(static_cast<int>(i));
        }
    }
    return out;
}

namespace {

Polyhedron product_piece(const Polyhedron& p, const Polyhedron& q) {
    int a1 = p.flat.ambient, a2 = q.flat.ambient;
    int d1 = p.flat.dim(), d2 = q.flat.dim();
    Polyhedron r;
    r.orient = p.orient * q.orient;
    r.flat.ambient = a1 + a2;
    r.flat.base = p.flat.base;
    r.flat.base.insert(r.flat.base.end(), q.flat.base.begin(), q.flat.base.end());
    for (const auto& b : p.flat.basis) {
        Vec v = b;
        v.resize(a1 + a2);
        r.flat.basis.push_back(std::move(v));
    }
    for (const auto& b : q.flat.basis) {
        Vec v(a1);
        v.insert(v.end(), b.begin(), b.end());
        r.flat.basis.push_back(std::move(v));
    }
    for (const auto& h : p.ineqs) {
        Vec n = h.normal;
        n.resize(d1 + d2);
        r.ineqs.push_back({std::move(n), h.offset, h.strict});
    }
    for (const auto& h : q.ineqs) {
        Vec n(d1);
        n.insert(n.end(), h.normal.begin(), h.normal.end());
        r.ineqs.push_back({std::move(n), h.offset, h.strict});
    }
    return r;
}

}  // namespace

Product product(const CornersSpace& v, const CornersSpace& w) {
    Product out;
    out.space.dim = v.dim + w.dim;
    for (size_t i = 0; i < v.pieces.size(); ++i)
        for (size_t j = 0; j < w.pieces.size(); ++j) {
            out.space.pieces.push_back(product_piece(v.pieces[i], w.pieces[j]));
            out.from.push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    return out;
}

std::optional<FibrePiece> fibre_piece(const Polyhedron& p, const AffineMap& tp,
                                      const Polyhedron& q, const AffineMap& uq, int m,
                                      bool submersion_on_left) {
    if (!submersion_on_left) {
        auto sw = fibre_piece(q, uq, p, tp, m, true);
        if (!sw) return std::nullopt;
        FibrePiece out;
        int g1 = p.flat.dim(), g2 = q.flat.dim();
        out.left_point = sw->right_point;
        out.right_point = sw->left_point;
        out.left_dirs = sw->right_dirs;
        out.right_dirs = sw->left_dirs;
        // Eq: X x_Z Y = (-1)^{(dim X - dim Z)(dim Y - dim Z)} Y x_Z X
        int swap_par = ((g1 - m) % 2) * ((g2 - m) % 2);
        out.piece = sw->piece;
        out.piece.orient = sw->piece.orient * (swap_par % 2 ? -1 : 1);
        // rebuild the combined flat/ineqs with the factors in (p, q) order
        Polyhedron left_like = p, right_like = q;
        (void)left_like;
        (void)right_like;
        int a1 = p.flat.ambient, a2 = q.flat.ambient;
        Flat fl;
        fl.ambient = a1 + a2;
        Vec base = from_flat_coords(p.flat, out.left_point);
        Vec qb = from_flat_coords(q.flat, out.right_point);
        base.insert(base.end(), qb.begin(), qb.end());
        fl.base = std::move(base);
        Mat bp = Mat::from_cols(p.flat.basis), bq = Mat::from_cols(q.flat.basis);
        if (p.flat.dim() == 0) bp = Mat(a1, 0);
        if (q.flat.dim() == 0) bq = Mat(a2, 0);
        for (size_t i = 0; i < out.left_dirs.size(); ++i) {
            Vec amb = mat_vec(bp, out.left_dirs[i]);
            Vec amb2 = mat_vec(bq, out.right_dirs[i]);
            amb.insert(amb.end(), amb2.begin(), amb2.end());
            fl.basis.push_back(std::move(amb));
        }
        out.piece.flat = std::move(fl);
        return out;
    }

    int g1 = p.flat.dim(), g2 = q.flat.dim();
    AffineMap gt = compose(tp, embedding(p.flat));
    AffineMap gu = compose(uq, embedding(q.flat));
    if (rank(gt.linear) != m) throw NotTransverse{};

    Mat d(m, g1 + g2);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < g1; ++j) d(i, j) = gt.linear(i, j);
        for (int j = 0; j < g2; ++j) d(i, g1 + j) = -gu.linear(i, j);
    }
    Vec rhs = gu.translation - gt.translation;
    auto z0 = solve(d, rhs);
    if (!z0) return std::nullopt;
    std::vector<Vec> kern = kernel_basis(d);
    int r = g1 + g2 - m;
    if (static_cast<int>(kern.size()) != r)
        throw std::logic_error("fibre product kernel dimension");

    // fibre-first orientation: a kernel basis is positive when
    // det [kernel | lifts through the left submersion] = (-1)^{m dim(right)}
    // against the product orientation of the factors
    std::vector<Vec> cols = kern;
    for (int j = 0; j < m; ++j) {
        Vec e(m);
        e[j] = 1;
        Vec w = *solve(gt.linear, e);
        w.resize(g1 + g2);
        cols.push_back(std::move(w));
    }
    int sign = 1;
    if (g1 + g2 > 0) sign = sgn(det(Mat::from_cols(cols)));
    if (sign == 0) throw std::logic_error("degenerate fibre orientation");
    if ((m * g2) % 2) sign = -sign;

    FibrePiece out;
    out.piece.orient = p.orient * q.orient * sign;
    out.left_point.assign(z0->begin(), z0->begin() + g1);
    out.right_point.assign(z0->begin() + g1, z0->end());
    for (const auto& kv : kern) {
        out.left_dirs.push_back(Vec(kv.begin(), kv.begin() + g1));
        out.right_dirs.push_back(Vec(kv.begin() + g1, kv.end()));
    }

    int a1 = p.flat.ambient, a2 = q.flat.ambient;
    out.piece.flat.ambient = a1 + a2;
    Vec base = from_flat_coords(p.flat, out.left_point);
    Vec qb = from_flat_coords(q.flat, out.right_point);
    base.insert(base.end(), qb.begin(), qb.end());
    out.piece.flat.base = std::move(base);
    Mat bp = Mat::from_cols(p.flat.basis), bq = Mat::from_cols(q.flat.basis);
    if (g1 == 0) bp = Mat(a1, 0);
    if (g2 == 0) bq = Mat(a2, 0);
    for (int i = 0; i < r; ++i) {
        Vec amb = mat_vec(bp, out.left_dirs[i]);
        Vec amb2 = mat_vec(bq, out.right_dirs[i]);
        amb.insert(amb.end(), amb2.begin(), amb2.end());
        out.piece.flat.basis.push_back(std::move(amb));
    }

    for (const auto& h : p.ineqs) {
        Vec n(r);
        for (int i = 0; i < r; ++i) n[i] = dot(h.normal, out.left_dirs[i]);
        out.piece.ineqs.push_back({std::move(n), h.offset - dot(h.normal, out.left_point), h.strict});
    }
    for (const auto& h : q.ineqs) {
        Vec n(r);
        for (int i = 0; i < r; ++i) n[i] = dot(h.normal, out.right_dirs[i]);
        out.piece.ineqs.push_back({std::move(n), h.offset - dot(h.normal, out.right_point), h.strict});
    }
    out.piece.ineqs = prune_redundant(std::move(out.piece.ineqs), r);
    Measure mm = measure(out.piece);
    if (mm.empty || mm.dim != r) return std::nullopt;  // empty or non-transverse corner
    return out;
}

Product fibre_product(const CornersSpace& v, const SpaceMap& t, const CornersSpace& w,
                      const SpaceMap& u, int target_dim) {
    auto all_submersion = [&](const CornersSpace& sp, const SpaceMap& sm) {
        for (size_t i = 0; i < sp.pieces.size(); ++i) {
            AffineMap g = compose(sm.maps[i], embedding(sp.pieces[i].flat));
            if (rank(g.linear) != target_dim) return false;
        }
        return true;
    };
    bool left = all_submersion(v, t);
    bool right = !left && all_submersion(w, u);
    if (!left && !right) throw NotTransverse{};

    Product out;
    out.space.dim = v.dim + w.dim - target_dim;
    for (size_t i = 0; i < v.pieces.size(); ++i)
        for (size_t j = 0; j < w.pieces.size(); ++j) {
            auto fp = fibre_piece(v.pieces[i], t.maps[i], w.pieces[j], u.maps[j], target_dim, left);
            if (!fp) continue;
            out.space.pieces.push_back(std::move(fp->piece));
            out.from.push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    return out;
}

SimplexScheme simplex(int k) {
    if (k < 0) throw std::invalid_argument("simplex dimension");
    SimplexScheme s;
    s.k = k;

    s.simplex.orient = 1;
    s.simplex.flat.ambient = k + 1;
    s.simplex.flat.base.assign(k + 1, Q(0));
    s.simplex.flat.base[0] = 1;
    for (int i = 1; i <= k; ++i) {
        Vec b(k + 1);
        b[0] = -1;
        b[i] = 1;
        s.simplex.flat.basis.push_back(std::move(b));
    }
    for (int i = 0; i < k; ++i) {
        Vec n(k);
        n[i] = -1;
        s.simplex.ineqs.push_back({std::move(n), Q(0), false});
    }
    if (k > 0) s.simplex.ineqs.push_back({Vec(k, Q(1)), Q(1), false});

    for (int j = 0; j <= k && k > 0; ++j) {
        Mat lin(k + 1, k);
        for (int i = 0; i < k; ++i) lin(i < j ? i : i + 1, i) = 1;
        s.face_maps.push_back({std::move(lin), Vec(k + 1)});
    }

    std::vector<int> perm(k + 1);
    for (int i = 0; i <= k; ++i) perm[i] = i;
    Mat basis_cols = Mat::from_cols(s.simplex.flat.basis);
    if (k == 0) basis_cols = Mat(1, 0);
    do {
        // column l: barycentre of the face spanned by perm[0..l]
        Mat lin(k + 1, k + 1);
        for (int l = 0; l <= k; ++l) {
            Q w(1, l + 1);
            w.canonicalize();
            for (int i = 0; i <= l; ++i) lin(perm[i], l) = w;
        }
        AffineMap bmap{lin, Vec(k + 1)};
        int sign = 1;
        if (k > 0) {
            Mat m(k, k);
            for (int c = 1; c <= k; ++c) {
                Vec dir = mat_vec(bmap.linear, s.simplex.flat.basis[c - 1]);
                Vec fc = *solve(basis_cols, dir);
                for (int r = 0; r < k; ++r) m(r, c - 1) = fc[r];
            }
            sign = sgn(det(m));
        }
        s.subdivision.push_back(std::move(bmap));
        s.subdivision_signs.push_back(sign);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return s;
}

}  // namespace mchain

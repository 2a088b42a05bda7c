#include "mchain/geometry.hpp"

#include <algorithm>

namespace mchain {

Flat full_flat(int ambient) {
    Flat f;
    f.ambient = ambient;
    f.base.assign(ambient, Q(0));
    for (int i = 0; i < ambient; ++i) {
        Vec e(ambient);
        e[i] = 1;
        f.basis.push_back(std::move(e));
    }
    return f;
}

AffineMap AffineMap::constant(int dom, Vec value) {
    AffineMap m;
    m.linear = Mat(static_cast<int>(value.size()), dom);
    m.translation = std::move(value);
    return m;
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
    if (f.domain_dim() != g.codomain_dim()) throw std::invalid_argument("compose shape");
    AffineMap h;
    h.linear = f.linear * g.linear;
    h.translation = mat_vec(f.linear, g.translation) + f.translation;
    return h;
}

AffineMap embedding(const Flat& f) {
    AffineMap m;
    m.linear = Mat::from_cols(f.basis);
    if (f.dim() == 0) m.linear = Mat(f.ambient, 0);
    m.translation = f.base;
    return m;
}

Vec from_flat_coords(const Flat& f, const Vec& coords) {
    if (static_cast<int>(coords.size()) != f.dim()) throw std::invalid_argument("flat coords size");
    Vec x = f.base;
    for (int i = 0; i < f.dim(); ++i)
        if (coords[i] != 0) x = x + scale(coords[i], f.basis[i]);
    return x;
}

Vec to_flat_coords(const Flat& f, const Vec& ambient_point) {
    Mat b = Mat::from_cols(f.basis);
    if (f.dim() == 0) b = Mat(f.ambient, 0);
    auto c = solve(b, ambient_point - f.base);
    if (!c) throw std::invalid_argument("point off flat");
    if (from_flat_coords(f, *c) != ambient_point) throw std::invalid_argument("point off flat");
    return *c;
}

CanonicalFlat canonicalize(const Flat& f) {
    Rref r = rref(Mat::from_rows(f.basis));
    if (r.rank != f.dim()) throw std::invalid_argument("flat basis not independent");
    CanonicalFlat out;
    out.flat.ambient = f.ambient;
    for (int i = 0; i < r.rank; ++i) out.flat.basis.push_back(r.m.row(i));
    // unique point of the subspace with zero coordinates at all pivots
    Vec p = f.base;
    for (int i = 0; i < r.rank; ++i) {
        Q c = p[r.pivot_cols[i]];
        if (c != 0) p = p - scale(c, out.flat.basis[i]);
    }
    out.flat.base = std::move(p);
    if (f.dim() == 0) {
        out.sign = 1;
        return out;
    }
    Mat m(f.dim(), f.dim());
    for (int a = 0; a < f.dim(); ++a)
        for (int b = 0; b < f.dim(); ++b) m(a, b) = f.basis[a][r.pivot_cols[b]];
    out.sign = sgn(det(m));
    if (out.sign == 0) throw std::logic_error("degenerate basis in canonicalize");
    return out;
}

bool same_affine_span(const Flat& a, const Flat& b) {
    if (a.ambient != b.ambient || a.dim() != b.dim()) return false;
    return canonicalize(a).flat == canonicalize(b).flat;
}

AffineMap flat_transition(const Flat& from, const Flat& to) {
    if (!same_affine_span(from, to)) throw std::invalid_argument("flats differ as sets");
    AffineMap t;
    t.linear = Mat(to.dim(), from.dim());
    t.translation = to_flat_coords(to, from.base);
    for (int j = 0; j < from.dim(); ++j) {
        Vec col = to_flat_coords(to, from.base + from.basis[j]) - t.translation;
        for (int i = 0; i < to.dim(); ++i) t.linear(i, j) = col[i];
    }
    return t;
}

Flat affine_image_hull(const Flat& f, const AffineMap& map) {
    AffineMap g = compose(map, embedding(f));
    Rref r = rref(g.linear.transposed());  // rows = columns of g.linear
    Flat hull;
    hull.ambient = map.codomain_dim();
    hull.base = g.translation;
    for (int i = 0; i < r.rank; ++i) hull.basis.push_back(r.m.row(i));
    return hull;
}

namespace {

// Drops zero-normal rows; nullopt means an inconsistent constant row.
std::optional<std::vector<Halfspace>> normalized(const std::vector<Halfspace>& ineqs) {
    std::vector<Halfspace> out;
    for (const auto& h : ineqs) {
        if (is_zero_vec(h.normal)) {
            if (h.offset < 0) return std::nullopt;
            continue;
        }
        out.push_back(h);
    }
    return out;
}

LpProblem hrep_problem(const std::vector<Halfspace>& ineqs, int dim) {
    LpProblem p;
    p.A = Mat(0, dim);
    p.E = Mat(0, dim);
    for (const auto& h : ineqs) p.add_le(h.normal, h.offset);
    return p;
}

}  // namespace

LpResult optimize_over(const std::vector<Halfspace>& ineqs, int dim, const Vec& objective,
                       bool maximize) {
    auto norm = normalized(ineqs);
    if (!norm) return {};
    LpProblem p = hrep_problem(*norm, dim);
    return maximize ? lp_maximize(p, objective) : lp_minimize(p, objective);
}

std::optional<Vec> interior_point(const std::vector<Halfspace>& ineqs, int dim) {
    auto norm = normalized(ineqs);
    if (!norm) return std::nullopt;
    if (dim == 0) return Vec{};
    LpProblem p;
    p.A = Mat(0, dim + 1);
    p.E = Mat(0, dim + 1);
    for (const auto& h : *norm) {
        Vec row = h.normal;
        row.push_back(1);
        p.add_le(row, h.offset);
    }
    Vec cap(dim + 1);
    cap[dim] = 1;
    p.add_le(cap, 1);
    LpResult r = lp_maximize(p, cap);
    if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
    r.point.pop_back();
    return r.point;
}

bool hrep_feasible(const std::vector<Halfspace>& ineqs, int dim) {
    auto norm = normalized(ineqs);
    if (!norm) return false;
    return feasible_point(hrep_problem(*norm, dim)).has_value();
}

int affine_hull_dim(const std::vector<Halfspace>& ineqs, int dim) {
    auto norm = normalized(ineqs);
    if (!norm) return -1;
    if (!hrep_feasible(*norm, dim)) return -1;
    std::vector<Vec> tight;
    for (const auto& h : *norm) {
        LpResult r = optimize_over(*norm, dim, h.normal, /*maximize=*/false);
        if (r.status == LpStatus::Optimal && r.value == h.offset) tight.push_back(h.normal);
    }
    if (tight.empty()) return dim;
    return dim - rank(Mat::from_rows(tight));
}

bool is_bounded(const std::vector<Halfspace>& ineqs, int dim) {
    auto norm = normalized(ineqs);
    if (!norm) return true;
    if (!hrep_feasible(*norm, dim)) return true;
    LpProblem cone;
    cone.A = Mat(0, dim);
    cone.E = Mat(0, dim);
    for (const auto& h : *norm) cone.add_le(h.normal, Q(0));
    for (int i = 0; i < dim; ++i) {
        Vec e(dim);
        e[i] = 1;
        cone.add_le(e, 1);
        cone.add_le(scale(Q(-1), e), 1);
    }
    for (int i = 0; i < dim; ++i) {
        for (int s : {1, -1}) {
            Vec obj(dim);
            obj[i] = s;
            LpResult r = lp_maximize(cone, obj);
            if (r.status != LpStatus::Optimal || r.value > 0) return false;
        }
    }
    return true;
}

namespace {

// Positive scaling so the first nonzero coefficient has absolute value 1.
Halfspace scaled(Halfspace h) {
    for (const Q& c : h.normal) {
        if (c != 0) {
            Q f = abs(c);
            for (Q& v : h.normal) v /= f;
            h.offset /= f;
            break;
        }
    }
    return h;
}

std::vector<Halfspace> dedup(std::vector<Halfspace> ineqs) {
    for (auto& h : ineqs) h = scaled(h);
    std::sort(ineqs.begin(), ineqs.end(), [](const Halfspace& a, const Halfspace& b) {
        int c = compare(a.normal, b.normal);
        if (c != 0) return c < 0;
        int d = cmp(a.offset, b.offset);
        if (d != 0) return d < 0;
        return a.strict && !b.strict;
    });
    std::vector<Halfspace> out;
    for (auto& h : ineqs) {
        if (!out.empty() && out.back().normal == h.normal) continue;  // tighter kept
        out.push_back(std::move(h));
    }
    return out;
}

}  // namespace

std::vector<Halfspace> prune_redundant(std::vector<Halfspace> ineqs, int dim) {
    auto norm = normalized(ineqs);
    if (!norm) return ineqs;  // inconsistent constants: caller's precondition problem
    std::vector<Halfspace> work = dedup(*norm);
    for (size_t i = 0; i < work.size();) {
        std::vector<Halfspace> others;
        for (size_t j = 0; j < work.size(); ++j)
            if (j != i) others.push_back(work[j]);
        LpResult r = optimize_over(others, dim, work[i].normal, /*maximize=*/true);
        // a strict row whose bound is attained still cuts that face out
        bool redundant = r.status == LpStatus::Optimal &&
                         (work[i].strict ? r.value < work[i].offset : r.value <= work[i].offset);
        if (redundant)
            work.erase(work.begin() + static_cast<long>(i));
        else
            ++i;
    }
    return work;
}

Measure measure(const Polyhedron& p) {
    Measure m;
    int d = affine_hull_dim(p.ineqs, p.flat.dim());
    if (d < 0) return m;
    m.empty = false;
    m.dim = d;
    return m;
}

std::vector<Facet> facets(const Polyhedron& p) {
    int k = p.flat.dim();
    Measure m = measure(p);
    if (m.empty) throw std::invalid_argument("facets of empty polyhedron");
    if (m.dim != k) throw std::invalid_argument("polyhedron not full-dimensional in its flat");
    if (k == 0) throw ZeroDimensional{};

    std::vector<Halfspace> irr = prune_redundant(p.ineqs, k);
    Mat bp = Mat::from_cols(p.flat.basis);
    std::vector<Facet> out;
    for (size_t fi = 0; fi < irr.size(); ++fi) {
        const Halfspace& h = irr[fi];
        if (h.strict) continue;  // open side, not a boundary face
        Mat nrow = Mat::from_rows({h.normal});
        std::vector<Vec> w = kernel_basis(nrow);
        Vec u0 = *solve(nrow, Vec{h.offset});

        std::vector<Vec> cols;
        cols.push_back(h.normal);
        for (const auto& v : w) cols.push_back(v);
        int sigma = sgn(det(Mat::from_cols(cols)));

        Facet f;
        f.outward_normal = h.normal;
        f.poly.orient = p.orient * sigma;
        f.poly.flat.ambient = p.flat.ambient;
        f.poly.flat.base = from_flat_coords(p.flat, u0);
        for (const auto& v : w) f.poly.flat.basis.push_back(mat_vec(bp, v));

        for (size_t gi = 0; gi < irr.size(); ++gi) {
            if (gi == fi) continue;
            const Halfspace& g = irr[gi];
            Vec nn(w.size());
            for (size_t j = 0; j < w.size(); ++j) nn[j] = dot(g.normal, w[j]);
            f.poly.ineqs.push_back({std::move(nn), g.offset - dot(g.normal, u0), g.strict});
        }
        f.poly.ineqs = prune_redundant(f.poly.ineqs, k - 1);
        Measure fm = measure(f.poly);
        if (fm.empty || fm.dim != k - 1) continue;  // degenerate, not a real facet
        out.push_back(std::move(f));
    }
    return out;
}

Hyperplane make_hyperplane(Vec normal, Q offset) {
    if (is_zero_vec(normal)) throw std::invalid_argument("hyperplane with zero normal");
    for (const Q& c : normal) {
        if (c != 0) {
            Q f = c;
            for (Q& v : normal) v /= f;
            offset /= f;
            break;
        }
    }
    return {std::move(normal), std::move(offset)};
}

Arrangement arrange(int dim, std::vector<Hyperplane> hyperplanes,
                    const std::vector<Halfspace>& region) {
    std::sort(hyperplanes.begin(), hyperplanes.end(),
              [](const Hyperplane& a, const Hyperplane& b) {
                  int c = compare(a.normal, b.normal);
                  if (c != 0) return c < 0;
                  return cmp(a.offset, b.offset) < 0;
              });
    hyperplanes.erase(std::unique(hyperplanes.begin(), hyperplanes.end()), hyperplanes.end());

    Arrangement arr;
    arr.hyperplanes = hyperplanes;

    struct Cell {
        std::vector<Halfspace> cons;
        std::vector<int> signs;
        Vec sample;
    };
    auto start = interior_point(region, dim);
    if (!start) return arr;
    std::vector<Cell> cells{{region, {}, *start}};

    for (const Hyperplane& h : hyperplanes) {
        std::vector<Cell> next;
        for (Cell& c : cells) {
            Q v = dot(h.normal, c.sample) - h.offset;
            int s = sgn(v);
            auto side = [&](int sg) {
                Halfspace hs;
                hs.normal = sg < 0 ? h.normal : scale(Q(-1), h.normal);
                hs.offset = sg < 0 ? h.offset : -h.offset;
                return hs;
            };
            for (int sg : {-1, 1}) {
                Cell nc;
                nc.cons = c.cons;
                nc.cons.push_back(side(sg));
                nc.signs = c.signs;
                nc.signs.push_back(sg);
                if (s == sg) {
                    nc.sample = c.sample;  // already strictly on this side
                } else {
                    auto pt = interior_point(nc.cons, dim);
                    if (!pt) continue;
                    nc.sample = *pt;
                }
                if (static_cast<int>(nc.cons.size()) > 2 * dim + 8)
                    nc.cons = prune_redundant(std::move(nc.cons), dim);
                next.push_back(std::move(nc));
            }
        }
        cells = std::move(next);
    }
    for (Cell& c : cells) arr.cells.push_back({std::move(c.signs), std::move(c.sample)});
    return arr;
}

Polyhedron reexpress_onto(const Polyhedron& p, const Flat& onto) {
    AffineMap tr = flat_transition(p.flat, onto);
    int k = onto.dim();
    Mat ti(k, k);
    for (int j = 0; j < k; ++j) {
        Vec e(k);
        e[j] = 1;
        auto col = solve(tr.linear, e);
        if (!col) throw std::invalid_argument("flat transition not invertible");
        for (int i = 0; i < k; ++i) ti(i, j) = (*col)[i];
    }
    Polyhedron out;
    out.flat = onto;
    out.orient = p.orient * (k > 0 ? sgn(det(tr.linear)) : 1);
    for (const Halfspace& h : p.ineqs) {
        Vec n2 = mat_vec(ti.transposed(), h.normal);
        Q o2 = h.offset + dot(n2, tr.translation);
        out.ineqs.push_back({std::move(n2), std::move(o2), h.strict});
    }
    return out;
}

int compare(const Flat& a, const Flat& b) {
    if (a.ambient != b.ambient) return a.ambient < b.ambient ? -1 : 1;
    if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
    int c = compare(a.base, b.base);
    if (c != 0) return c;
    for (int i = 0; i < a.dim(); ++i) {
        c = compare(a.basis[i], b.basis[i]);
        if (c != 0) return c;
    }
    return 0;
}

Arrangement overlay(const Flat& flat, const std::vector<Polyhedron>& polys,
                    const std::vector<Hyperplane>& extra) {
    std::vector<Hyperplane> hp = extra;
    for (const Polyhedron& p : polys) {
        Polyhedron q = reexpress_onto(p, flat);
        for (Halfspace& h : q.ineqs) {
            if (is_zero_vec(h.normal)) continue;
            hp.push_back(make_hyperplane(std::move(h.normal), std::move(h.offset)));
        }
    }
    return arrange(flat.dim(), std::move(hp), {});
}

Properness recession_proper(const Polyhedron& p, const AffineMap& map,
                            const ToleranceRegion& region) {
    if (map.domain_dim() != p.flat.dim()) throw std::invalid_argument("recession_proper shape");
    Properness out;
    auto norm = normalized(p.ineqs);
    if (!norm || !hrep_feasible(*norm, p.flat.dim())) {
        out.proper = true;  // empty piece: proper over everything
        return out;
    }
    int dim = p.flat.dim();

    // (a) recession cone meets the kernel of the linear part only at 0
    {
        LpProblem cone;
        cone.A = Mat(0, dim);
        cone.E = Mat(0, dim);
        for (const auto& h : *norm) cone.add_le(h.normal, Q(0));
        for (int i = 0; i < dim; ++i) {
            Vec e(dim);
            e[i] = 1;
            cone.add_le(e, 1);
            cone.add_le(scale(Q(-1), e), 1);
        }
        for (int r = 0; r < map.linear.rows; ++r) cone.add_eq(map.linear.row(r), Q(0));
        bool trivial = true;
        for (int i = 0; i < dim && trivial; ++i) {
            for (int s : {1, -1}) {
                Vec obj(dim);
                obj[i] = s;
                LpResult r = lp_maximize(cone, obj);
                if (r.status != LpStatus::Optimal || r.value > 0) {
                    trivial = false;
                    break;
                }
            }
        }
        if (trivial || dim == 0) {
            out.proper = true;
            return out;
        }
    }

    // (b) image stays at positive distance (sup norm) from the target region
    int cnt = map.codomain_dim();
    if (std::holds_alternative<NearZeroCrossTarget>(region))
        cnt -= std::get<NearZeroCrossTarget>(region).m;
    if (cnt > 0) {
        LpProblem dist;
        dist.A = Mat(0, dim + 1);
        dist.E = Mat(0, dim + 1);
        for (const auto& h : *norm) {
            Vec row = h.normal;
            row.push_back(0);
            dist.add_le(row, h.offset);
        }
        for (int i = 0; i < cnt; ++i) {
            Vec row = map.linear.row(i);
            Vec pos = row, neg = scale(Q(-1), row);
            pos.push_back(-1);
            neg.push_back(-1);
            dist.add_le(pos, -map.translation[i]);
            dist.add_le(neg, map.translation[i]);
        }
        Vec obj(dim + 1);
        obj[dim] = 1;
        LpResult r = lp_minimize(dist, obj);
        if (r.status == LpStatus::Optimal && r.value > 0) {
            out.proper = true;
            out.radius = r.value / 2;
            return out;
        }
    }
    return out;
}

ImageFlat image_flat(const Polyhedron& p, const AffineMap& map) {
    AffineMap g = compose(map, embedding(p.flat));
    int k = p.flat.dim();
    if (rank(g.linear) < k) return Degenerate{};

    Flat pushed;
    pushed.ambient = map.codomain_dim();
    pushed.base = g.translation;
    for (int j = 0; j < k; ++j) pushed.basis.push_back(g.linear.col(j));
    CanonicalFlat canon = canonicalize(pushed);

    FullImage out;
    out.flat = canon.flat;
    out.sign = p.orient * canon.sign;
    out.image.flat = canon.flat;
    out.image.orient = out.sign;

    Vec w0 = to_flat_coords(canon.flat, g.translation);
    Mat t(k, k);
    for (int j = 0; j < k; ++j) {
        Vec col = to_flat_coords(canon.flat, g.translation + g.linear.col(j)) - w0;
        for (int i = 0; i < k; ++i) t(i, j) = col[i];
    }
    Mat ti(k, k);
    for (int j = 0; j < k; ++j) {
        Vec e(k);
        e[j] = 1;
        Vec col = *solve(t, e);
        for (int i = 0; i < k; ++i) ti(i, j) = col[i];
    }
    for (const Halfspace& h : p.ineqs) {
        Vec n2 = mat_vec(ti.transposed(), h.normal);
        Q o2 = h.offset + dot(n2, w0);
        out.image.ineqs.push_back({std::move(n2), std::move(o2), h.strict});
    }
    return out;
}

HPolyhedron affine_image_hrep(const Polyhedron& p, const AffineMap& map,
                              const std::vector<std::pair<Vec, Q>>& extra_eqs) {
    AffineMap g = compose(map, embedding(p.flat));
    int k = p.flat.dim(), d = map.codomain_dim();
    // variables (y_0..y_{d-1}, u_0..u_{k-1})
    std::vector<std::pair<Vec, Q>> eqs;
    for (int i = 0; i < d; ++i) {
        Vec row(d + k);
        row[i] = 1;
        for (int j = 0; j < k; ++j) row[d + j] = -g.linear(i, j);
        eqs.push_back({std::move(row), g.translation[i]});
    }
    for (const auto& [n, c] : extra_eqs) {
        Vec row(d + k);
        for (int j = 0; j < k; ++j) row[d + j] = n[j];
        eqs.push_back({std::move(row), c});
    }
    std::vector<Halfspace> ineqs;
    for (const Halfspace& h : p.ineqs) {
        Vec row(d + k);
        for (int j = 0; j < k; ++j) row[d + j] = h.normal[j];
        ineqs.push_back({std::move(row), h.offset, false});
    }

    int vars = d + k;
    for (int v = vars - 1; v >= d; --v) {
        // prefer solving an equality for variable v
        int use = -1;
        for (size_t i = 0; i < eqs.size(); ++i)
            if (eqs[i].first[v] != 0) { use = static_cast<int>(i); break; }
        if (use >= 0) {
            Vec row = eqs[use].first;
            Q rhs = eqs[use].second;
            Q c = row[v];
            eqs.erase(eqs.begin() + use);
            auto substitute = [&](Vec& n, Q& o) {
                if (n[v] == 0) { n.resize(v); return; }
                Q f = n[v] / c;
                for (int j = 0; j < v; ++j) n[j] -= f * row[j];
                o -= f * rhs;
                n.resize(v);
            };
            for (auto& [n, o] : eqs) substitute(n, o);
            for (auto& h : ineqs) substitute(h.normal, h.offset);
        } else {
            std::vector<Halfspace> pos, neg, zero;
            for (auto& h : ineqs) {
                int s = sgn(h.normal[v]);
                if (s > 0) pos.push_back(h);
                else if (s < 0) neg.push_back(h);
                else {
                    h.normal.resize(v);
                    zero.push_back(h);
                }
            }
            for (const auto& hp : pos)
                for (const auto& hn : neg) {
                    // u_v <= (op - np.u)/cp  and  u_v >= (on - nn.u)/cn
                    Q cp = hp.normal[v], cn = -hn.normal[v];
                    Vec n(v);
                    for (int j = 0; j < v; ++j) n[j] = cn * hp.normal[j] + cp * hn.normal[j];
                    Q o = cn * hp.offset + cp * hn.offset;
                    zero.push_back({std::move(n), std::move(o), false});
                }
            ineqs = prune_redundant(std::move(zero), v);
        }
        for (auto& [n, o] : eqs)
            if (static_cast<int>(n.size()) > v) n.resize(v);
    }

    HPolyhedron out;
    out.ambient = d;
    out.ineqs = prune_redundant(std::move(ineqs), d);
    for (auto& [n, o] : eqs)
        if (!is_zero_vec(n) || o != 0) out.eqs.push_back({n, o});
    return out;
}

bool hpoly_contains(const HPolyhedron& h, const Vec& point) {
    for (const auto& iq : h.ineqs)
        if (dot(iq.normal, point) > iq.offset) return false;
    for (const auto& [n, c] : h.eqs)
        if (dot(n, point) != c) return false;
    return true;
}

}  // namespace mchain

#include "mchain/io.hpp"

#include <json.hpp>

namespace mchain {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "mchain-v1";
constexpr const char* kMapFormat = "mchain-map-v1";

void expect_keys(const json& j, const std::vector<std::string>& allowed, const std::string& at) {
    if (!j.is_object()) throw ParseError(at + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(at + ": unknown field '" + key + "'");
    }
}

const json& field(const json& j, const std::string& key, const std::string& at) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(at + ": missing field '" + key + "'");
    return *it;
}

Q parse_q(const json& j, const std::string& at) {
    if (!j.is_string()) throw ParseError(at + ": rationals are \"p/q\" strings");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(at + ": " + e.what());
    }
}

Vec parse_vec(const json& j, const std::string& at) {
    if (!j.is_array()) throw ParseError(at + ": expected an array");
    Vec v;
    for (size_t i = 0; i < j.size(); ++i) v.push_back(parse_q(j[i], at + "[" + std::to_string(i) + "]"));
    return v;
}

json dump_vec(const Vec& v) {
    json j = json::array();
    for (const Q& x : v) j.push_back(to_string(x));
    return j;
}

int parse_int(const json& j, const std::string& at) {
    if (!j.is_number_integer()) throw ParseError(at + ": expected an integer");
    return j.get<int>();
}

Halfspace parse_halfspace(const json& j, const std::string& at) {
    expect_keys(j, {"normal", "offset", "strict"}, at);
    Halfspace h;
    h.normal = parse_vec(field(j, "normal", at), at + ".normal");
    h.offset = parse_q(field(j, "offset", at), at + ".offset");
    if (j.contains("strict")) {
        if (!j["strict"].is_boolean()) throw ParseError(at + ".strict: expected a boolean");
        h.strict = j["strict"].get<bool>();
    }
    return h;
}

json dump_halfspace(const Halfspace& h) {
    json j;
    j["normal"] = dump_vec(h.normal);
    j["offset"] = to_string(h.offset);
    if (h.strict) j["strict"] = true;
    return j;
}

Target parse_target(const json& j, const std::string& at) {
    expect_keys(j, {"kind", "ambient", "components"}, at);
    std::string kind = field(j, "kind", at).get<std::string>();
    if (kind == "point") return Target::point();
    if (kind == "euclidean") return Target::euclidean(parse_int(field(j, "ambient", at), at));
    if (kind == "domain") {
        int m = parse_int(field(j, "ambient", at), at);
        const json& comps = field(j, "components", at);
        if (!comps.is_array()) throw ParseError(at + ".components: expected an array");
        std::vector<std::vector<Halfspace>> components;
        for (size_t c = 0; c < comps.size(); ++c) {
            std::vector<Halfspace> comp;
            for (size_t i = 0; i < comps[c].size(); ++i)
                comp.push_back(parse_halfspace(
                    comps[c][i], at + ".components[" + std::to_string(c) + "]"));
            components.push_back(std::move(comp));
        }
        try {
            return Target::domain(m, std::move(components));
        } catch (const std::invalid_argument& e) {
            throw ParseError(at + ": " + e.what());
        }
    }
    throw ParseError(at + ".kind: unknown target kind '" + kind + "'");
}

json dump_target(const Target& t) {
    json j;
    switch (t.kind) {
        case Target::Kind::Point:
            j["kind"] = "point";
            break;
        case Target::Kind::Euclidean:
            j["kind"] = "euclidean";
            j["ambient"] = t.ambient;
            break;
        case Target::Kind::Domain: {
            j["kind"] = "domain";
            j["ambient"] = t.ambient;
            json comps = json::array();
            for (const auto& comp : t.components) {
                json c = json::array();
                for (const auto& h : comp) c.push_back(dump_halfspace(h));
                comps.push_back(std::move(c));
            }
            j["components"] = std::move(comps);
            break;
        }
    }
    return j;
}

AffineMap parse_affine(const json& j, const std::string& at) {
    expect_keys(j, {"linear", "translation", "columns"}, at);
    const json& lin = field(j, "linear", at);
    if (!lin.is_array()) throw ParseError(at + ".linear: expected an array of rows");
    AffineMap m;
    m.translation = parse_vec(field(j, "translation", at), at + ".translation");
    int rows = static_cast<int>(lin.size());
    int cols = rows > 0 ? static_cast<int>(lin[0].size()) : 0;
    if (j.contains("columns")) cols = parse_int(j["columns"], at);
    m.linear = Mat(rows, cols);
    for (int r = 0; r < rows; ++r) {
        Vec row = parse_vec(lin[r], at + ".linear[" + std::to_string(r) + "]");
        if (static_cast<int>(row.size()) != cols) throw ParseError(at + ".linear: ragged rows");
        for (int c = 0; c < cols; ++c) m.linear(r, c) = row[c];
    }
    if (static_cast<int>(m.translation.size()) != rows)
        throw ParseError(at + ": translation length must match the row count");
    return m;
}

// the column count can be lost on 0-row maps; carry it explicitly
json dump_affine(const AffineMap& m, bool with_columns) {
    json j;
    json rows = json::array();
    for (int r = 0; r < m.linear.rows; ++r) rows.push_back(dump_vec(m.linear.row(r)));
    j["linear"] = std::move(rows);
    j["translation"] = dump_vec(m.translation);
    if (with_columns || m.linear.rows == 0) j["columns"] = m.linear.cols;
    return j;
}

AffineMap parse_affine_with_columns(const json& j, const std::string& at) {
    return parse_affine(j, at);
}

Flat parse_flat(const json& j, const std::string& at) {
    expect_keys(j, {"ambient", "base", "basis"}, at);
    Flat f;
    f.ambient = parse_int(field(j, "ambient", at), at + ".ambient");
    f.base = parse_vec(field(j, "base", at), at + ".base");
    const json& basis = field(j, "basis", at);
    for (size_t i = 0; i < basis.size(); ++i)
        f.basis.push_back(parse_vec(basis[i], at + ".basis[" + std::to_string(i) + "]"));
    if (static_cast<int>(f.base.size()) != f.ambient)
        throw ParseError(at + ": base length must equal the ambient dimension");
    for (const auto& b : f.basis)
        if (static_cast<int>(b.size()) != f.ambient)
            throw ParseError(at + ": basis vectors must have the ambient dimension");
    return f;
}

json dump_flat(const Flat& f) {
    json j;
    j["ambient"] = f.ambient;
    j["base"] = dump_vec(f.base);
    json basis = json::array();
    for (const auto& b : f.basis) basis.push_back(dump_vec(b));
    j["basis"] = std::move(basis);
    return j;
}

Polynomial parse_polynomial(const json& j, int vars, const std::string& at) {
    if (!j.is_array()) throw ParseError(at + ": expected an array of monomials");
    Polynomial p;
    p.vars = vars;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string mat = at + "[" + std::to_string(i) + "]";
        expect_keys(j[i], {"exponents", "coefficient"}, mat);
        const json& ex = field(j[i], "exponents", mat);
        std::vector<int> e;
        for (size_t k = 0; k < ex.size(); ++k) e.push_back(parse_int(ex[k], mat));
        if (static_cast<int>(e.size()) != vars)
            throw ParseError(mat + ": exponent count must equal the ambient dimension");
        for (int v : e)
            if (v < 0) throw ParseError(mat + ": negative exponent");
        Q c = parse_q(field(j[i], "coefficient", mat), mat + ".coefficient");
        if (c != 0) p.coeffs[e] = p.coeffs.count(e) ? p.coeffs[e] + c : c;
    }
    return p;
}

json dump_polynomial(const Polynomial& p) {
    json j = json::array();
    for (const auto& [e, c] : p.coeffs) {
        json m;
        m["exponents"] = e;
        m["coefficient"] = to_string(c);
        j.push_back(std::move(m));
    }
    return j;
}

PolyForm parse_form(const json& j, int ambient, const std::string& at) {
    expect_keys(j, {"degree", "components"}, at);
    PolyForm w;
    w.ambient = ambient;
    w.degree = parse_int(field(j, "degree", at), at + ".degree");
    const json& comps = field(j, "components", at);
    for (size_t i = 0; i < comps.size(); ++i) {
        const std::string cat = at + ".components[" + std::to_string(i) + "]";
        expect_keys(comps[i], {"indices", "polynomial"}, cat);
        std::vector<int> idx;
        for (const auto& v : field(comps[i], "indices", cat)) idx.push_back(v.get<int>());
        if (static_cast<int>(idx.size()) != w.degree)
            throw ParseError(cat + ": index count must equal the form degree");
        for (size_t k = 0; k + 1 < idx.size(); ++k)
            if (idx[k] >= idx[k + 1]) throw ParseError(cat + ": indices must strictly increase");
        Polynomial p = parse_polynomial(field(comps[i], "polynomial", cat), ambient, cat);
        if (!p.is_zero()) w.comps[idx] = std::move(p);
    }
    return w;
}

json dump_form(const PolyForm& w) {
    json j;
    j["degree"] = w.degree;
    json comps = json::array();
    for (const auto& [idx, p] : w.comps) {
        json c;
        c["indices"] = idx;
        c["polynomial"] = dump_polynomial(p);
        comps.push_back(std::move(c));
    }
    j["components"] = std::move(comps);
    return j;
}

struct PieceData {
    Polyhedron piece;
    AffineMap s;
    AffineMap t;
    std::optional<PolyForm> form;
};

PieceData parse_piece(const json& j, int n, int m, bool with_form, const std::string& at) {
    expect_keys(j, {"flat", "inequalities", "orientation", "s", "t", "form"}, at);
    PieceData out;
    out.piece.flat = parse_flat(field(j, "flat", at), at + ".flat");
    for (size_t i = 0; i < field(j, "inequalities", at).size(); ++i) {
        Halfspace h = parse_halfspace(j["inequalities"][i],
                                      at + ".inequalities[" + std::to_string(i) + "]");
        if (static_cast<int>(h.normal.size()) != out.piece.flat.dim())
            throw ParseError(at + ": inequality normals live in flat coordinates");
        out.piece.ineqs.push_back(std::move(h));
    }
    int orient = parse_int(field(j, "orientation", at), at + ".orientation");
    if (orient != 1 && orient != -1) throw ParseError(at + ".orientation: must be 1 or -1");
    out.piece.orient = orient;
    out.s = parse_affine_with_columns(field(j, "s", at), at + ".s");
    out.t = parse_affine_with_columns(field(j, "t", at), at + ".t");
    if (out.s.codomain_dim() != n) throw ParseError(at + ".s: expected " + std::to_string(n) + " rows");
    if (out.t.codomain_dim() != m) throw ParseError(at + ".t: expected " + std::to_string(m) + " rows");
    if (out.s.domain_dim() != out.piece.flat.ambient || out.t.domain_dim() != out.piece.flat.ambient)
        throw ParseError(at + ": map domains must equal the piece ambient dimension");
    if (with_form) {
        out.form = parse_form(field(j, "form", at), out.piece.flat.ambient, at + ".form");
    } else if (j.contains("form")) {
        throw ParseError(at + ": form fields belong to de Rham documents");
    }
    return out;
}

json dump_piece(const Polyhedron& p, const AffineMap& s, const AffineMap& t,
                const PolyForm* form) {
    json j;
    j["flat"] = dump_flat(p.flat);
    json ineqs = json::array();
    for (const auto& h : p.ineqs) ineqs.push_back(dump_halfspace(h));
    j["inequalities"] = std::move(ineqs);
    j["orientation"] = p.orient;
    j["s"] = dump_affine(s, true);
    j["t"] = dump_affine(t, true);
    if (form) j["form"] = dump_form(*form);
    return j;
}

}  // namespace

const Target& Document::target() const {
    if (chain) return chain->target;
    if (cochain) return cochain->target;
    return derham->target;
}

int Document::degree() const {
    if (chain) return chain->degree;
    if (cochain) return cochain->degree;
    return derham->degree;
}

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    expect_keys(j, {"format", "kind", "ring", "degree", "target", "terms"}, "document");
    if (field(j, "format", "document").get<std::string>() != kFormat)
        throw ParseError("document: unsupported format tag");
    std::string kind = field(j, "kind", "document").get<std::string>();
    std::string ring_tag = field(j, "ring", "document").get<std::string>();
    CoefficientRing ring;
    if (ring_tag == "Z") {
        ring = CoefficientRing::integers();
    } else if (ring_tag == "Q") {
        ring = CoefficientRing::rationals();
    } else if (ring_tag.rfind("Z/", 0) == 0) {
        try {
            ring = CoefficientRing::integers_mod(std::stol(ring_tag.substr(2)));
        } catch (const std::exception& e) {
            throw ParseError(std::string("document.ring: ") + e.what());
        }
    } else {
        throw ParseError("document.ring: expected \"Z\", \"Q\" or \"Z/p\"");
    }
    int degree = parse_int(field(j, "degree", "document"), "document.degree");
    Target target = parse_target(field(j, "target", "document"), "document.target");
    int m = target.ambient;

    Document out;
    bool with_form = kind == "derham-chain";
    ChainMode mode = (kind == "rational-chain") ? ChainMode::Rational : ChainMode::Integral;

    struct RawTerm {
        Q coeff;
        int n;
        std::vector<PieceData> pieces;
    };
    std::vector<RawTerm> raw;
    const json& terms = field(j, "terms", "document");
    if (!terms.is_array()) throw ParseError("document.terms: expected an array");
    for (size_t i = 0; i < terms.size(); ++i) {
        const std::string at = "terms[" + std::to_string(i) + "]";
        expect_keys(terms[i], {"coefficient", "n", "pieces"}, at);
        RawTerm t;
        t.coeff = parse_q(field(terms[i], "coefficient", at), at + ".coefficient");
        t.n = parse_int(field(terms[i], "n", at), at + ".n");
        if (t.n < 0) throw ParseError(at + ".n: negative");
        const json& pieces = field(terms[i], "pieces", at);
        for (size_t p = 0; p < pieces.size(); ++p)
            t.pieces.push_back(parse_piece(pieces[p], t.n, m, with_form,
                                           at + ".pieces[" + std::to_string(p) + "]"));
        raw.push_back(std::move(t));
    }

    auto build_spaces = [&](const RawTerm& t, CornersSpace& v, SpaceMap& s, SpaceMap& tm,
                            std::vector<PolyForm>& forms) {
        std::vector<Polyhedron> pieces;
        s.target = Target::euclidean(t.n);
        tm.target = target;
        int dim = -1;
        for (const auto& pd : t.pieces) {
            Measure mm = measure(pd.piece);
            if (mm.empty) continue;
            if (dim < 0) dim = pd.piece.flat.dim();
            pieces.push_back(pd.piece);
            s.maps.push_back(pd.s);
            tm.maps.push_back(pd.t);
            if (pd.form) forms.push_back(*pd.form);
        }
        if (pieces.empty()) return false;
        v = make_corners(std::move(pieces), dim);
        return true;
    };

    if (kind == "chain" || kind == "rational-chain") {
        std::vector<std::pair<Q, MChainGenerator>> built;
        for (const auto& t : raw) {
            CornersSpace v;
            SpaceMap s, tm;
            std::vector<PolyForm> forms;
            if (!build_spaces(t, v, s, tm, forms)) continue;
            built.push_back({t.coeff, make_generator(std::move(v), t.n, std::move(s), std::move(tm))});
        }
        out.kind = mode == ChainMode::Rational ? Document::Kind::RationalChain : Document::Kind::Chain;
        out.chain = make_chain(ring, mode, degree, target, std::move(built));
        return out;
    }
    if (kind == "precochain" || kind == "cs-cochain" || kind == "lf-chain") {
        CochainVariant variant = kind == "precochain" ? CochainVariant::Precochain
                                 : kind == "cs-cochain" ? CochainVariant::CompactlySupported
                                                        : CochainVariant::LocallyFiniteChain;
        std::vector<std::pair<Q, MCochainGenerator>> built;
        for (const auto& t : raw) {
            CornersSpace v;
            SpaceMap s, tm;
            std::vector<PolyForm> forms;
            if (!build_spaces(t, v, s, tm, forms)) continue;
            built.push_back({t.coeff, make_cochain_generator(std::move(v), t.n, std::move(s),
                                                             std::move(tm), variant)});
        }
        out.kind = kind == "precochain" ? Document::Kind::Precochain
                   : kind == "cs-cochain" ? Document::Kind::CsCochain
                                          : Document::Kind::LfChain;
        out.cochain = make_cochain(ring, mode, variant, degree, target, std::move(built));
        return out;
    }
    if (kind == "derham-chain") {
        std::vector<std::pair<Q, DRGenerator>> built;
        for (const auto& t : raw) {
            CornersSpace v;
            SpaceMap s, tm;
            std::vector<PolyForm> forms;
            if (!build_spaces(t, v, s, tm, forms)) continue;
            int fdeg = forms.empty() ? 0 : forms[0].degree;
            built.push_back({t.coeff, make_dr_generator(std::move(v), t.n, std::move(s),
                                                        std::move(tm), std::move(forms), fdeg)});
        }
        out.kind = Document::Kind::DerhamChain;
        out.derham = make_dr_chain(degree, target, std::move(built));
        return out;
    }
    throw ParseError("document.kind: unknown kind '" + kind + "'");
}

namespace {

json document_shell(const std::string& kind, const std::string& ring, int degree,
                    const Target& target) {
    json j;
    j["format"] = kFormat;
    j["kind"] = kind;
    j["ring"] = ring;
    j["degree"] = degree;
    j["target"] = dump_target(target);
    j["terms"] = json::array();
    return j;
}

std::string ring_tag(const CoefficientRing& r) {
    switch (r.kind) {
        case RingKind::Integers:
            return "Z";
        case RingKind::Rationals:
            return "Q";
        case RingKind::IntegersMod:
            return "Z/" + std::to_string(r.modulus);
    }
    return "Z";
}

}  // namespace

std::string serialize(const Chain& c) {
    json j = document_shell(c.mode == ChainMode::Rational ? "rational-chain" : "chain",
                            ring_tag(c.ring), c.degree, c.target);
    for (const auto& [coeff, g] : c.terms) {
        json t;
        t["coefficient"] = to_string(coeff);
        t["n"] = g.n;
        json pieces = json::array();
        for (size_t i = 0; i < g.space.pieces.size(); ++i)
            pieces.push_back(dump_piece(g.space.pieces[i], g.s.maps[i], g.t.maps[i], nullptr));
        t["pieces"] = std::move(pieces);
        j["terms"].push_back(std::move(t));
    }
    return j.dump(2) + "\n";
}

std::string serialize(const Cochain& c) {
    const char* kind = c.variant == CochainVariant::Precochain ? "precochain"
                       : c.variant == CochainVariant::CompactlySupported ? "cs-cochain"
                                                                         : "lf-chain";
    json j = document_shell(kind, ring_tag(c.ring), c.degree, c.target);
    for (const auto& [coeff, g] : c.terms) {
        json t;
        t["coefficient"] = to_string(coeff);
        t["n"] = g.n;
        json pieces = json::array();
        for (size_t i = 0; i < g.space.pieces.size(); ++i)
            pieces.push_back(dump_piece(g.space.pieces[i], g.s.maps[i], g.t.maps[i], nullptr));
        t["pieces"] = std::move(pieces);
        j["terms"].push_back(std::move(t));
    }
    return j.dump(2) + "\n";
}

std::string serialize(const DRChain& c) {
    json j = document_shell("derham-chain", "Q", c.degree, c.target);
    for (const auto& [coeff, g] : c.terms) {
        json t;
        t["coefficient"] = to_string(coeff);
        t["n"] = g.n;
        json pieces = json::array();
        for (size_t i = 0; i < g.space.pieces.size(); ++i)
            pieces.push_back(dump_piece(g.space.pieces[i], g.s.maps[i], g.t.maps[i], &g.forms[i]));
        t["pieces"] = std::move(pieces);
        j["terms"].push_back(std::move(t));
    }
    return j.dump(2) + "\n";
}

std::string serialize(const Document& d) {
    if (d.chain) return serialize(*d.chain);
    if (d.cochain) return serialize(*d.cochain);
    return serialize(*d.derham);
}

MapDocument parse_map_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    expect_keys(j, {"format", "map", "source", "dest"}, "map document");
    if (field(j, "format", "map document").get<std::string>() != kMapFormat)
        throw ParseError("map document: unsupported format tag");
    MapDocument out;
    out.map = parse_affine_with_columns(field(j, "map", "map document"), "map");
    out.source = parse_target(field(j, "source", "map document"), "source");
    out.dest = parse_target(field(j, "dest", "map document"), "dest");
    if (out.map.domain_dim() != out.source.ambient || out.map.codomain_dim() != out.dest.ambient)
        throw ParseError("map document: map shape does not match the targets");
    return out;
}

std::string serialize(const MapDocument& m) {
    json j;
    j["format"] = kMapFormat;
    j["map"] = dump_affine(m.map, true);
    j["source"] = dump_target(m.source);
    j["dest"] = dump_target(m.dest);
    return j.dump(2) + "\n";
}

}  // namespace mchain

// Command-line front end: check a chain document against the defining
// relations, apply (co)chain operations to documents, evaluate degrees,
// and run the seeded verification suites.

#include "mchain/io.hpp"
#include "mchain/products.hpp"
#include "mchain/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace mchain;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
}

int run_check(const std::string& file) {
    Document d = parse_document(slurp(file));
    ZeroResult r;
    if (d.chain) {
        r = is_zero(*d.chain);
    } else if (d.cochain) {
        r = is_zero_cochain(*d.cochain);
    } else {
        std::cerr << "check: de Rham documents have no decision procedure; "
                     "use pairings instead\n";
        return 2;
    }
    if (r.zero) {
        std::cout << "zero (window " << to_string(r.epsilon) << ", " << r.classes
                  << " flat classes, " << r.cells_tested << " cells tested)\n";
        return 0;
    }
    std::cout << "not provably zero\n";
    if (r.witness) {
        std::cout << "  witness multiplicity " << to_string(r.witness->multiplicity)
                  << " at (";
        for (size_t i = 0; i < r.witness->point.size(); ++i)
            std::cout << (i ? ", " : "") << to_string(r.witness->point[i]);
        std::cout << ")\n";
    }
    return 1;
}

int run_op(const std::string& op, const std::vector<std::string>& files,
           const std::string& out_path, const std::string& shriek_dir) {
    auto doc = [&](size_t i) { return parse_document(slurp(files.at(i))); };
    auto need = [&](size_t count) {
        if (files.size() != count)
            throw ParseError("operation '" + op + "' expects " + std::to_string(count) +
                             " input file(s)");
    };
    std::string result;

    if (op == "boundary" || op == "d") {
        need(1);
        Document d = doc(0);
        if (d.chain) result = serialize(boundary_chain(*d.chain));
        else if (d.cochain) result = serialize(coboundary(*d.cochain));
        else result = serialize(dr_boundary(*d.derham));
    } else if (op == "cup") {
        need(2);
        result = serialize(cup(*doc(0).cochain, *doc(1).cochain));
    } else if (op == "cap") {
        need(2);
        Document a = doc(0), b = doc(1);
        if (b.chain) result = serialize(cap(*a.cochain, *b.chain));
        else result = serialize(cap(*a.cochain, *b.cochain));
    } else if (op == "cross") {
        need(2);
        Document a = doc(0), b = doc(1);
        if (a.chain && b.chain) result = serialize(cross_chain(*a.chain, *b.chain));
        else if (a.cochain && b.cochain &&
                 a.cochain->variant == CochainVariant::LocallyFiniteChain)
            result = serialize(cross_lf(*a.cochain, *b.cochain));
        else result = serialize(cross_cochain(*a.cochain, *b.cochain));
    } else if (op == "xi") {
        need(1);
        Document d = doc(0);
        if (d.chain) result = serialize(xi(*d.chain));
        else result = serialize(xi(*d.cochain));
    } else if (op == "pd") {
        need(1);
        Document d = doc(0);
        if (d.cochain->variant == CochainVariant::CompactlySupported)
            result = serialize(pd_compact(*d.cochain, d.cochain->mode));
        else result = serialize(pd(*d.cochain));
    } else if (op == "push") {
        need(2);
        MapDocument m = parse_map_document(slurp(files[1]));
        Document d = doc(0);
        if (d.chain) result = serialize(pushforward(m.map, m.dest, *d.chain));
        else throw ParseError("push acts on chain documents");
    } else if (op == "pull") {
        need(2);
        MapDocument m = parse_map_document(slurp(files[1]));
        Document d = doc(0);
        if (!d.cochain) throw ParseError("pull acts on cochain documents");
        if (d.cochain->variant == CochainVariant::LocallyFiniteChain)
            result = serialize(lf_pullback(m.source, *d.cochain));
        else result = serialize(pullback(m.map, m.source, *d.cochain));
    } else if (op == "shriek") {
        need(2);
        MapDocument m = parse_map_document(slurp(files[1]));
        Document d = doc(0);
        if (shriek_dir == "upper") {
            result = serialize(shriek_upper(m.map, m.dest, *d.cochain));
        } else if (d.chain) {
            result = serialize(shriek_lower(m.map, m.source, *d.chain));
        } else {
            result = serialize(shriek_lower_lf(m.map, m.source, *d.cochain));
        }
    } else {
        throw ParseError("unknown operation '" + op + "'");
    }
    spill(out_path, result);
    return 0;
}

int run_degree(const std::string& file, const std::vector<std::string>& coords) {
    Document d = parse_document(slurp(file));
    if (!d.chain) {
        std::cerr << "degree: expects a chain document on the point target\n";
        return 2;
    }
    Vec x;
    for (const auto& c : coords) x.push_back(parse_rational(c));
    Q value = degree_eval(*d.chain, x);
    std::cout << to_string(value) << "\n";
    return 0;
}

int run_verify(const std::string& suite, uint64_t seed, int cases,
               const std::string& report_path) {
    VerificationReport r = run_suite(suite, seed, cases);
    std::cout << report_text(r);
    if (!report_path.empty()) spill(report_path, report_json(r));
    return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact polyhedral calculus for manifold (co)chains"};
    app.require_subcommand(1);

    std::string file, out_path, op, shriek_dir = "lower", report_path, suite;
    std::vector<std::string> files, coords;
    uint64_t seed = 0;
    int cases = 25;

    auto* check = app.add_subcommand("check", "decide the defining relations");
    check->add_option("file", file, "chain document")->required();

    auto* opcmd = app.add_subcommand("op", "apply an operation to documents");
    opcmd->add_option("operation", op,
                      "boundary|d|cup|cap|cross|pd|xi|push|pull|shriek")
        ->required();
    opcmd->add_option("files", files, "input documents")->required();
    opcmd->add_option("-o,--output", out_path, "output path (default stdout)");
    opcmd->add_option("--direction", shriek_dir, "shriek direction: lower|upper");

    auto* degree = app.add_subcommand("degree", "signed preimage count at a point");
    degree->add_option("file", file, "chain document")->required();
    degree->add_option("--at", coords, "coordinates of the evaluation point");

    auto* verify = app.add_subcommand("verify", "run a seeded verification suite");
    verify->add_option("suite", suite, "suite name")->required();
    verify->add_option("--seed", seed, "random seed")->default_val(0);
    verify->add_option("--cases", cases, "cases per property")->default_val(25);
    verify->add_option("--report", report_path, "write the structured report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return run_check(file);
        if (*opcmd) return run_op(op, files, out_path, shriek_dir);
        if (*degree) return run_degree(file, coords);
        if (*verify) return run_verify(suite, seed, cases, report_path);
    } catch (const mchain::UnknownSuite& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

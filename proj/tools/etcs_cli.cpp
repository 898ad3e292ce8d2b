#include "etcs/reproduce.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace etcs;
using nlohmann::json;

namespace {

enum Exit { ok = 0, mismatch = 1, io = 2, lookup = 3, invalid = 4 };

struct Failure {
    int code;
    std::string message;
};

Catalog open_catalog(const std::string& path) {
    try {
        return path.empty() ? default_catalog() : load_catalog_file(path);
    } catch (const std::ios_base::failure& e) {
        throw Failure{io, e.what()};
    } catch (const CatalogError& e) {
        throw Failure{invalid, e.what()};
    }
}

const BuildingBlock& lookup_block(const Catalog& c, const std::string& id) {
    try {
        return require_block(c, id);
    } catch (const std::out_of_range& e) {
        throw Failure{lookup, e.what()};
    }
}

std::string matrix_text(const IMat& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
        s += i ? "; " : "";
        for (size_t j = 0; j < m[i].size(); ++j) s += (j ? " " : "") + to_string(m[i][j]);
    }
    return s + "]";
}

std::string vec_text(const IVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
    return s + ")";
}

std::string d_text(const InvariantReport& r) {
    if (!r.torsion_supported) return "-";
    std::string s = r.d_full ? std::to_string(*r.d_full) : "?";
    if (!r.d_full || *r.d_full != r.d_free) s += " (mod torsion " + std::to_string(r.d_free) + ")";
    return s;
}

std::string torsion_text(const InvariantReport& r) {
    if (!r.torsion_supported) return "-";
    return r.torsion.factors.empty() ? "0" : r.torsion.str();
}

void print_report(const InvariantReport& r) {
    std::cout << "Z+ " << r.plus_id << "\nZ- " << r.minus_id << "\ntheta " << r.theta << "\npi1 " << r.pi1
              << "\nb2 " << r.b2 << "\nb3 " << r.b3 << "\nd_theta " << r.d_theta << "\npure " << (r.pure ? "yes" : "no")
              << "\n";
    if (r.torsion_supported) {
        std::cout << "TH4 " << torsion_text(r) << "\n";
        if (!r.linking_class.empty()) std::cout << "linking " << r.linking_class << "\n";
        std::cout << "p class " << vec_text(r.p_class) << "\nd " << d_text(r) << "\n";
    }
    std::cout << "alpha-";
    for (auto& a : r.angles.alpha_minus)
        if (!a.is_zero()) std::cout << " " << a.str();
    std::cout << " (others 0)\nnu_bar " << r.nu_bar << "\nnu " << r.nu << " (mod 48: " << r.nu48 << ")\n";
    for (auto& n : r.notes) std::cout << "note: " << n << "\n";
}

int cmd_catalog(const std::string& action, const std::string& id, const std::string& path, const std::string& fmt) {
    auto cat = open_catalog(path);
    if (action == "list") {
        if (fmt == "json") {
            std::cout << serialize_catalog(cat).dump(2) << "\n";
            return ok;
        }
        std::cout << "id\tkind\trank\tb3\n";
        for (auto& b : cat) std::cout << b.id << "\t" << to_string(b.kind) << "\t" << b.rank << "\t" << b.b3 << "\n";
        return ok;
    }
    if (action == "show") {
        if (id.empty()) throw Failure{invalid, "catalog show needs a block id"};
        auto& b = lookup_block(cat, id);
        if (fmt == "json") {
            std::cout << to_json(b).dump(2) << "\n";
            return ok;
        }
        std::cout << "id " << b.id << "\nkind " << to_string(b.kind) << "\nrank " << b.rank << "\nN "
                  << matrix_text(b.N.gram) << "\nc2bar " << vec_text(b.c2bar) << "\nb3 " << b.b3 << "\n";
        if (b.b3plus) std::cout << "b3plus " << *b.b3plus << "\n";
        std::cout << "pleasant " << (b.pleasant ? "yes" : "no") << "\n";
        if (!b.provenance.empty()) std::cout << "provenance " << b.provenance.dump() << "\n";
        return ok;
    }
    auto rep = verify_catalog(cat);
    if (fmt == "json") {
        json checks = json::array();
        for (auto& c : rep.checks)
            checks.push_back({{"block", c.block}, {"field", c.field}, {"expected", c.expected}, {"derived", c.derived},
                              {"ok", c.ok}});
        std::cout << json{{"checks", checks}, {"mismatches", rep.mismatches()}}.dump(2) << "\n";
    } else {
        for (auto& c : rep.checks)
            if (!c.ok) std::cout << "MISMATCH " << c.block << " " << c.field << ": " << c.expected << " vs " << c.derived << "\n";
        std::cout << rep.checks.size() << " checks, " << rep.mismatches() << " mismatches\n";
    }
    return rep.mismatches() == 0 ? ok : mismatch;
}

void print_matches(const SearchResult& res, const std::string& fmt) {
    if (fmt == "json") {
        json m = json::array();
        for (auto& c : res.matches) m.push_back(to_json(c));
        std::cout << json{{"matches", m}, {"candidates_examined", res.candidate_pairs}, {"rejected", res.rejected}}.dump(2)
                  << "\n";
        return;
    }
    std::cout << "Z+\tZ-\tb3\td\tTH4\tb\tnu_bar\tW\n";
    for (auto& c : res.matches) {
        auto& r = c.report;
        std::cout << c.plus_id << "\t" << c.minus_id << "\t" << r.b3 << "\t" << d_text(r) << "\t" << torsion_text(r) << "\t"
                  << (r.linking_class.empty() ? "-" : r.linking_class) << "\t" << r.nu_bar << "\t"
                  << matrix_text(c.pushout) << "\n";
    }
    std::cout << res.matches.size() << " match(es)\n";
}

int cmd_match(const std::string& plus_id, const std::string& minus_id, const std::string& theta_text, bool pure,
              std::optional<int> bound, const std::string& path, const std::string& fmt) {
    auto cat = open_catalog(path);
    auto& plus = lookup_block(cat, plus_id);
    auto& minus = lookup_block(cat, minus_id);
    Rat theta;
    try {
        theta = parse_theta(theta_text);
    } catch (const std::invalid_argument& e) {
        throw Failure{invalid, e.what()};
    }
    auto angle = make_angle(theta, plus.kind, minus.kind);
    auto adm = admissible_angle(angle, plus.kind, minus.kind);
    if (adm.pi1 == Pi1::inadmissible) throw Failure{invalid, "inadmissible angle: " + adm.reason};

    SearchResult res;
    if (plus.rank == 1 && minus.rank == 1 && !bound) {
        res.candidate_pairs = 1;
        if (auto r1 = rank1_pushout(plus.N.gram[0][0], minus.N.gram[0][0], angle.theta)) {
            IMat w{{plus.N.gram[0][0], r1->w}, {r1->w, minus.N.gram[0][0]}};
            if (auto c = evaluate_pushout(plus, minus, angle, w)) {
                c->rank1_decomposition = r1->decomposition;
                res.matches.push_back(*c);
            }
        }
    } else {
        try {
            res = cross_term_search(plus, minus, theta, {bound.value_or(3), pure});
        } catch (const std::invalid_argument& e) {
            throw Failure{invalid, e.what()};
        } catch (const ConfigError& e) {
            throw Failure{invalid, e.what()};
        }
    }
    print_matches(res, fmt);
    return ok;
}

int cmd_invariants(const std::string& config, const std::string& path, const std::string& fmt) {
    auto cat = open_catalog(path);
    std::ifstream in(config);
    if (!in) throw Failure{io, "cannot open configuration " + config};
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Failure{invalid, config + ": " + e.what()};
    }
    Configuration cfg;
    try {
        cfg = configuration_from_json(doc, cat);
    } catch (const std::out_of_range& e) {
        throw Failure{lookup, e.what()};
    } catch (const ConfigError& e) {
        throw Failure{invalid, e.what()};
    }
    auto v = validate_configuration(cfg);
    if (!v.ok()) {
        std::string msg = "invalid configuration:";
        for (auto& s : v.violations) msg += "\n  " + s;
        throw Failure{invalid, msg};
    }
    InvariantReport r;
    try {
        r = full_report(cfg);
    } catch (const std::domain_error& e) {
        throw Failure{invalid, e.what()};
    }
    for (auto& n : v.notes) r.notes.push_back(n);
    if (fmt == "json")
        std::cout << to_json(r).dump(2) << "\n";
    else
        print_report(r);
    return ok;
}

int cmd_reproduce(const std::string& target, const std::string& path, const std::string& fmt) {
    auto cat = open_catalog(path);
    Reproduction rep;
    if (target == "table4")
        rep = reproduce_table4(cat);
    else if (target == "table5")
        rep = reproduce_table5(cat);
    else
        rep = reproduce_examples(cat);
    if (fmt == "json")
        std::cout << to_json(rep).dump(2) << "\n";
    else
        std::cout << render_table(rep);
    return rep.ok() ? ok : mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extra-twisted connected sum invariants"};
    app.require_subcommand(1);
    std::string catalog_path, fmt = "table";
    app.add_option("--catalog", catalog_path, "catalog file (default: $ETCS_CATALOG or the built-in catalog)");
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", fmt, "output format")->check(CLI::IsMember({"table", "json"}));
    };

    auto* cat = app.add_subcommand("catalog", "list, show or validate building blocks");
    std::string action, block_id;
    cat->add_option("action", action)->required()->check(CLI::IsMember({"list", "show", "validate"}));
    cat->add_option("id", block_id);
    add_format(cat);

    auto* match = app.add_subcommand("match", "find configurations for a pair of blocks");
    std::string plus_id, minus_id, theta;
    bool pure = false;
    std::optional<int> bound;
    match->add_option("--plus", plus_id)->required();
    match->add_option("--minus", minus_id)->required();
    match->add_option("--theta", theta, "angle as a rational multiple of pi, e.g. 1/4pi")->required();
    match->add_flag("--pure", pure, "keep only pure-angle configurations");
    match->add_option("--bound", bound, "bound on the cross-block entries");
    add_format(match);

    auto* inv = app.add_subcommand("invariants", "compute the invariants of a configuration document");
    std::string config;
    inv->add_option("--config", config)->required();
    add_format(inv);

    auto* rep = app.add_subcommand("reproduce", "recompute the reference tables");
    std::string target;
    rep->add_option("target", target)->required()->check(CLI::IsMember({"table4", "table5", "examples"}));
    add_format(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : invalid;
    }

    try {
        if (*cat) return cmd_catalog(action, block_id, catalog_path, fmt);
        if (*match) return cmd_match(plus_id, minus_id, theta, pure, bound, catalog_path, fmt);
        if (*inv) return cmd_invariants(config, catalog_path, fmt);
        return cmd_reproduce(target, catalog_path, fmt);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    }
}

#include "etcs/reproduce.hpp"

#include <algorithm>
#include <sstream>

namespace etcs {

using nlohmann::json;

bool ReproRow::ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const Cell& c) { return c.ok; });
}

size_t Reproduction::matched() const {
    return static_cast<size_t>(std::count_if(rows.begin(), rows.end(), [](const ReproRow& r) { return r.ok(); }));
}

DiscriminantForm expected_linking(const std::string& text) {
    DiscriminantForm d;
    if (text == "diagonal" || text == "hyperbolic") {
        d.group.factors = {2, 2};
        Rat h(1, 2);
        d.pairing = text == "diagonal" ? QMat{{h, 0}, {0, h}} : QMat{{0, h}, {h, 0}};
        return d;
    }
    Rat v = parse_rat(text);
    d.group.factors = {den(v)};
    d.pairing = {{frac_mod1(v)}};
    return d;
}

bool linking_matches(const std::string& expected, const DiscriminantForm& actual) {
    if (expected.empty()) return actual.group.factors.empty();
    return forms_isomorphic(expected_linking(expected), actual);
}

namespace {

struct Table4Fixture {
    std::string plus, minus;
    int b3, d, torsion_order;
    std::string linking;  // printed only when the torsion has order > 2
};

const std::vector<Table4Fixture>& table4_fixtures() {
    static const std::vector<Table4Fixture> rows{
        {"3.22_4", "3.8_1_16", 60, 24, 4, "1/4"},  {"3.21", "3.8_1_18", 64, 24, 2, ""},
        {"3.22_3", "3.8_1_12", 68, 6, 3, "-1/3"},  {"3.22_2", "3.8_1_18", 72, 12, 2, ""},
        {"3.22_4", "3.8_2_2", 74, 12, 4, "1/4"},   {"3.21", "3.8_1_8", 78, 4, 2, ""},
        {"3.21", "3.8_2_4", 78, 24, 2, ""},        {"5.15_1", "3.8_1_16", 82, 4, 1, ""},
        {"3.22_2", "3.8_2_4", 86, 8, 2, ""},       {"3.22_2", "3.8_1_8", 86, 12, 2, ""},
        {"3.22_1", "3.8_1_16", 92, 4, 1, ""},      {"3.21", "3.8_2_1", 92, 2, 2, ""},
        {"5.15_1", "3.8_2_2", 96, 2, 1, ""},       {"3.22_2", "3.8_2_1", 100, 6, 2, ""},
        {"3.22_4", "3.8_4_1", 102, 2, 4, "1/4"},   {"3.22_4", "3.8_1_4", 102, 4, 4, "1/4"},
        {"3.22_1", "3.8_2_2", 106, 2, 1, ""},      {"5.15_1", "3.8_1_4", 124, 2, 1, ""},
        {"5.15_1", "3.8_4_1", 124, 8, 1, ""},      {"3.22_1", "3.8_1_4", 134, 6, 1, ""},
        {"3.22_1", "3.8_4_1", 134, 24, 1, ""},     {"3.21", "5.15_1", 148, 4, 2, ""},
        {"3.21", "3.8_1_2", 148, 12, 2, ""},       {"3.22_2", "3.8_1_2", 156, 8, 2, ""},
        {"3.22_2", "5.15_1", 156, 8, 2, ""},
    };
    return rows;
}

Cell int_cell(const std::string& col, long expected, long actual) {
    return {col, std::to_string(expected), std::to_string(actual), expected == actual};
}

Cell text_cell(const std::string& col, const std::string& expected, const std::string& actual) {
    return {col, expected, actual, expected == actual};
}

std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : "undetermined"; }

Cell linking_cell(const std::string& expected, const InvariantReport& r, bool check) {
    Cell c{"b", expected, r.linking_class, true};
    if (check) c.ok = linking_matches(expected, r.linking);
    return c;
}

std::string vec_str(const std::vector<Rat>& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_string(v[i]);
    return s + ")";
}

std::string vec_str(const IVec& v) {
    std::vector<Rat> q(v.begin(), v.end());
    return vec_str(q);
}

std::string mat_str(const IMat& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) {
        s += i ? ";" : "";
        for (size_t j = 0; j < m[i].size(); ++j) s += (j ? " " : "") + to_string(m[i][j]);
    }
    return s + "]";
}

IMat from_longs(const std::vector<std::vector<long>>& v) {
    IMat m;
    for (auto& row : v) {
        IVec r;
        for (auto x : row) r.emplace_back(x);
        m.push_back(r);
    }
    return m;
}

// small rank-2 isometry test by bounded basis search
bool isometric_rank2(const IMat& a, const IMat& b, int box = 8) {
    if (a.size() != 2 || b.size() != 2 || det(a) != det(b)) return false;
    for (int p = -box; p <= box; ++p)
        for (int q = -box; q <= box; ++q)
            for (int r = -box; r <= box; ++r)
                for (int s = -box; s <= box; ++s) {
                    if (p * s - q * r != 1 && p * s - q * r != -1) continue;
                    IMat t{{p, q}, {r, s}};
                    if (mul(mul(transpose(t), a), t) == b) return true;
                }
    return false;
}

}  // namespace

const std::vector<Table5Fixture>& table5_fixtures() {
    static const std::vector<Table5Fixture> rows{
        {"8.1", "1/4pi", "3.28", "3.9_3", 97, 2, 1, "", -36, {{2, 2, 2, 1}, {2, 0, 2, 0}, {2, 2, 4, 2}, {1, 0, 2, 0}}},
        {"8.2", "1/4pi", "5.14", "3.9_10", 77, 2, 1, "", -36, {{0, 2, 4, 0}, {2, 0, 1, 1}, {4, 1, 8, 4}, {0, 1, 4, 0}}},
        {"8.3", "1/4pi", "3.27_2", "3.9_10", 57, 2, 4, "diagonal", -36,
         {{4, 4, 4, 2}, {4, 0, 4, 0}, {4, 4, 8, 4}, {2, 0, 4, 0}}},
        {"8.4", "1/4pi", "3.27_4", "3.9_10", 57, 2, 4, "hyperbolic", -36,
         {{8, 4, 6, 4}, {4, 0, 2, 0}, {6, 2, 8, 4}, {4, 0, 4, 0}}},
        {"8.5", "1/4pi", "3.26_2", "3.13_2", 45, 2, 7, "-1/7", -36,
         {{4, 6, 6, 2}, {6, 2, 2, 3}, {6, 2, 4, 6}, {2, 3, 6, 2}}},
        {"8.6", "1/4pi", "5.15_3", "3.10", 98, 6, 1, "", -33,
         {{2, 2, 2, 1, 1, 2}, {2, 0, 2, 1, 1, 0}, {2, 2, 0, 0, 2, 2}, {1, 1, 0, 0, 2, 2}, {1, 1, 2, 2, 0, 2},
          {2, 0, 2, 2, 2, 0}}},
        {"8.7", "1/4pi", "3.22_1", "3.9_10", 91, 4, 1, "", -36, {{2, 3, 1}, {3, 8, 4}, {1, 4, 0}}},
        {"8.8", "1/4pi", "5.15_2", "3.9_27", 92, 4, 1, "", -33, {{2, 2, 2, 3}, {2, 0, 1, 1}, {2, 1, 2, 5}, {3, 1, 5, 4}}},
        {"8.9", "1/4pi", "3.27_3", "3.9_17", 60, 6, 1, "", -33, {{6, 4, 4, 5}, {4, 0, 2, 2}, {4, 2, 4, 7}, {5, 2, 7, 6}}},
        {"8.10", "1/4pi", "3.25_4", "3.9_17", 60, 6, 1, "", -39,
         {{8, 8, 4, 6}, {8, 6, 5, 4}, {4, 5, 4, 7}, {6, 4, 7, 6}}},
        {"8.11", "1/4pi", "3.22_3", "3.23_6", 71, 6, 3, "1/3", -36, {{6, 3, 3}, {3, 2, 4}, {3, 4, 2}}},
        {"8.12", "-1/4pi", "3.23_6", "3.8_2_3", 71, 6, 3, "1/3", 36, {{2, 4, 3}, {4, 2, 3}, {3, 3, 6}}},
        {"8.15", "1/6pi", "3.22_4", "3.22_3", 54, 6, 1, "", -51, {}},
        {"8.15", "1/6pi", "3.22_3", "3.22_4", 54, 2, 3, "-1/3", -51, {}},
        {"8.15", "1/6pi", "5.15_1", "3.22_3", 76, 6, 1, "", -51, {}},
        {"8.15", "1/6pi", "3.22_3", "5.15_1", 76, 24, 3, "-1/3", -51, {}},
        {"8.15", "1/6pi", "3.22_1", "3.22_3", 86, 6, 1, "", -51, {{2, 3}, {3, 6}}},
        {"8.15", "1/6pi", "3.22_3", "3.22_1", 86, 4, 3, "-1/3", -51, {{6, 3}, {3, 2}}},
        {"8.16", "1/6pi", "3.28", "3.28", 109, 2, 1, "", -48, {{2, 2, 2, 1}, {2, 0, 1, 2}, {2, 1, 2, 2}, {1, 2, 2, 0}}},
        {"8.17", "1/6pi", "3.28", "3.28", 109, 8, 1, "", -48, {{2, 2, 2, 1}, {2, 0, 3, 0}, {2, 3, 2, 2}, {1, 0, 2, 0}}},
        {"8.18", "1/6pi", "3.28", "3.27_5", 77, 2, 1, "", -48,
         {{2, 2, 4, 2}, {2, 0, 3, 0}, {4, 3, 10, 4}, {2, 0, 4, 0}}},
        {"8.19", "1/6pi", "3.28", "3.26_5", 77, 4, 1, "", -48,
         {{2, 2, 4, 2}, {2, 0, 3, 3}, {4, 3, 10, 6}, {2, 3, 6, 2}}},
        {"8.20", "1/6pi", "3.26_2", "3.22_3", 45, 2, 7, "-1/7", -48, {{4, 6, 5}, {6, 2, 4}, {5, 4, 6}}},
    };
    return rows;
}

Configuration fixture_configuration(const Table5Fixture& f, const Catalog& catalog) {
    auto& p = require_block(catalog, f.plus);
    auto& m = require_block(catalog, f.minus);
    Rat raw = parse_theta(f.theta);
    auto angle = make_angle(raw, p.kind, m.kind);
    IMat w;
    if (f.pushout.empty()) {
        auto r1 = rank1_pushout(p.N.gram[0][0], m.N.gram[0][0], angle.theta);
        if (!r1) throw ConfigError("no rank-1 pushout for " + f.plus + " and " + f.minus);
        w = {{p.N.gram[0][0], r1->w}, {r1->w, m.N.gram[0][0]}};
    } else {
        w = from_longs(f.pushout);
    }
    return make_configuration(p, m, angle, w);
}

Reproduction reproduce_table4(const Catalog& catalog) {
    Reproduction rep;
    rep.target = "table4";
    auto found = rank1_pi4_search(catalog);
    for (auto& f : table4_fixtures()) {
        ReproRow row;
        row.label = f.plus + " " + f.minus;
        auto it = std::find_if(found.matches.begin(), found.matches.end(),
                               [&](const MatchCandidate& c) { return c.plus_id == f.plus && c.minus_id == f.minus; });
        if (it == found.matches.end()) {
            row.cells.push_back({"match", "present", "missing", false});
            rep.rows.push_back(row);
            continue;
        }
        auto& r = it->report;
        row.cells.push_back(text_cell("Z+", f.plus, it->plus_id));
        row.cells.push_back(text_cell("Z-", f.minus, it->minus_id));
        row.cells.push_back(int_cell("b3", f.b3, r.b3));
        row.cells.push_back({"d", std::to_string(f.d), opt_str(r.d_full), r.d_full == f.d});
        row.cells.push_back(int_cell("TH4", f.torsion_order, r.torsion.torsion_order().convert_to<long>()));
        row.cells.push_back(linking_cell(f.linking, r, !f.linking.empty()));
        row.cells.push_back(int_cell("nu_bar", -39, r.nu_bar));
        rep.rows.push_back(row);
    }
    for (auto& c : found.matches) {
        bool listed = std::any_of(table4_fixtures().begin(), table4_fixtures().end(),
                                  [&](const Table4Fixture& f) { return c.plus_id == f.plus && c.minus_id == f.minus; });
        if (!listed) rep.rows.push_back({c.plus_id + " " + c.minus_id, {{"match", "absent", "present", false}}});
    }
    return rep;
}

Reproduction reproduce_table5(const Catalog& catalog) {
    Reproduction rep;
    rep.target = "table5";
    for (auto& f : table5_fixtures()) {
        ReproRow row;
        row.label = f.example + " " + f.plus + " " + f.minus;
        try {
            auto cfg = fixture_configuration(f, catalog);
            auto v = validate_configuration(cfg);
            if (!v.ok()) throw ConfigError(v.violations.front());
            auto r = full_report(cfg);
            row.cells.push_back(text_cell("Ex", f.example, f.example));
            row.cells.push_back(text_cell("theta", f.theta, r.theta));
            row.cells.push_back(text_cell("Z+", f.plus, r.plus_id));
            row.cells.push_back(text_cell("Z-", f.minus, r.minus_id));
            row.cells.push_back(int_cell("b3", f.b3, r.b3));
            row.cells.push_back({"d", std::to_string(f.d), opt_str(r.d_full), r.d_full == f.d});
            row.cells.push_back(int_cell("TH4", f.torsion_order, r.torsion.torsion_order().convert_to<long>()));
            row.cells.push_back(linking_cell(f.linking, r, true));
            row.cells.push_back(int_cell("nu_bar", f.nu_bar, r.nu_bar));
        } catch (const std::exception& e) {
            row.cells.push_back({"error", "", e.what(), false});
        }
        rep.rows.push_back(row);
    }
    return rep;
}

namespace {

const Table5Fixture& fixture(const std::string& ex, const std::string& plus = "", const std::string& minus = "") {
    for (auto& f : table5_fixtures())
        if (f.example == ex && (plus.empty() || f.plus == plus) && (minus.empty() || f.minus == minus)) return f;
    throw std::out_of_range("no fixture " + ex);
}

}  // namespace

Reproduction reproduce_examples(const Catalog& catalog) {
    Reproduction rep;
    rep.target = "examples";
    auto add = [&](const std::string& label, const std::string& expected, const std::string& actual) {
        rep.rows.push_back({label, {text_cell("value", expected, actual)}});
    };
    auto guarded = [&](const std::string& label, const std::string& expected, auto&& compute) {
        try {
            add(label, expected, compute());
        } catch (const std::exception& e) {
            rep.rows.push_back({label, {{"value", expected, std::string("error: ") + e.what(), false}}});
        }
    };
    auto cfg_of = [&](const std::string& ex, const std::string& plus = "", const std::string& minus = "") {
        return fixture_configuration(fixture(ex, plus, minus), catalog);
    };

    guarded("8.1 b3", "97", [&] { return std::to_string(betti(cfg_of("8.1")).b3); });
    guarded("8.1 d", "2", [&] { return std::to_string(p_divisor(cfg_of("8.1")).d_free); });
    guarded("8.1 free class of p", "(46 24)", [&] { return vec_str(pure_angle_torsion(cfg_of("8.1")).p_free); });
    guarded("8.3 discriminant of N+ + 2 pi+ N-", "Z/4+Z/4",
            [&] { return pure_angle_torsion(cfg_of("8.3")).delta.group.str(); });
    guarded("8.3 linking", "diagonal", [&] { return describe_linking(pure_angle_torsion(cfg_of("8.3")).linking); });
    guarded("8.4 linking", "hyperbolic", [&] { return describe_linking(pure_angle_torsion(cfg_of("8.4")).linking); });
    guarded("8.5 linking class of -1/7", "yes", [&] {
        return std::string(linking_matches("-1/7", torsion_report(cfg_of("8.5")).linking) ? "yes" : "no");
    });
    guarded("8.7 boundary map, N- basis reversed", "[1 1 3;1 0 4;3 4 8]", [&] {
        auto w = boundary_data(cfg_of("8.7")).What;
        std::swap(w[1], w[2]);
        for (auto& row : w) std::swap(row[1], row[2]);
        return mat_str(w);
    });
    guarded("8.7 torsion", "0", [&] { return torsion_report(cfg_of("8.7")).torsion.str(); });
    guarded("8.7 d", "4", [&] { return std::to_string(p_divisor(cfg_of("8.7")).d_free); });
    guarded("8.7 b3", "91", [&] { return std::to_string(betti(cfg_of("8.7")).b3); });
    guarded("8.7 image of the ample generator", "(1/4 1/4)",
            [&] { return vec_str(feasibility_cone_check(cfg_of("8.7")).image); });
    guarded("8.7 Lambda+ isometric to diag(2,-16)", "yes", [&] {
        auto l = lambda_lattices(cfg_of("8.7"));
        return std::string(isometric_rank2(l.plus.lattice.gram, IMat{{2, 0}, {0, -16}}) ? "yes" : "no");
    });
    guarded("8.7 nu_bar", "-36", [&] {
        auto c = cfg_of("8.7");
        return std::to_string(nu_bar(configuration_angles(c), c.angle.theta, c.angle.orientation));
    });
    guarded("8.8 eigenvalues of pi+ pi-", "{1/2 1/34}", [&] {
        auto e = rational_eigenstructure(plus_operator(cfg_of("8.8")));
        std::vector<Rat> v;
        for (auto& [r, mult] : e.roots) v.push_back(r);
        std::sort(v.rbegin(), v.rend());
        auto s = vec_str(v);
        return "{" + s.substr(1, s.size() - 2) + "}";
    });
    guarded("8.10 eigenvalue 49/50 of pi+ pi-", "yes", [&] {
        auto e = rational_eigenstructure(plus_operator(cfg_of("8.10")));
        bool hit = std::any_of(e.roots.begin(), e.roots.end(), [](auto& p) { return p.first == Rat(49, 50); });
        return std::string(hit ? "yes" : "no");
    });
    guarded("8.10 nu_bar", "-39", [&] { return std::to_string(full_report(cfg_of("8.10")).nu_bar); });
    guarded("8.11 boundary map", "[3 3 3;3 2 4;3 4 2]", [&] { return mat_str(boundary_data(cfg_of("8.11")).What); });
    guarded("8.11 p class", "(15 -18 -18)", [&] { return vec_str(boundary_data(cfg_of("8.11")).p_class); });
    guarded("8.11 self-linking", "1/3", [&] { return describe_linking(torsion_report(cfg_of("8.11")).linking); });
    guarded("8.11 d divisible by 6 in the full cokernel", "6",
            [&] { return opt_str(p_divisor(cfg_of("8.11")).d_full); });
    guarded("8.11 Lambda+ isometric to diag(6,-12)", "yes", [&] {
        auto l = lambda_lattices(cfg_of("8.11"));
        return std::string(isometric_rank2(l.plus.lattice.gram, IMat{{6, 0}, {0, -12}}) ? "yes" : "no");
    });
    guarded("8.12 p class", "(9 9 -24)", [&] { return vec_str(boundary_data(cfg_of("8.12")).p_class); });
    guarded("8.12 self-linking before orientation reversal", "2/3",
            [&] { return to_string(torsion_report(cfg_of("8.12")).linking.pairing[0][0]); });
    guarded("8.12 nu_bar", "36", [&] { return std::to_string(full_report(cfg_of("8.12")).nu_bar); });

    try {
        json doc{{"plus", "3.23_8"},
                 {"minus", "3.11"},
                 {"theta", "1/4pi"},
                 {"pushout",
                  {{"base_gram", {{196, 0, 98}, {0, -98, 0}, {98, 0, 98}}},
                   {"glue", {{"9/49", "8/49", 0}, {0, "3/14", "5/14"}}},
                   {"plus_basis", {{"9/49", "8/49", 0}, {"5/49", "-1/49", 0}}},
                   {"minus_basis", {{0, "-1/14", "3/14"}, {0, "3/14", "5/14"}}}}}};
        auto cfg = configuration_from_json(doc, catalog);
        auto r = full_report(cfg);
        add("8.14 b2", "1", std::to_string(r.b2));
        add("8.14 b3", "49", std::to_string(r.b3));
        add("8.14 p class", "(10 9 -22 -32)", vec_str(r.p_class));
        add("8.14 d", "6", std::to_string(r.d_free));
        add("8.14 nu_bar", "-39", std::to_string(r.nu_bar));
    } catch (const std::exception& e) {
        rep.rows.push_back({"8.14", {{"value", "report", std::string("error: ") + e.what(), false}}});
    }

    guarded("8.15 (3.22_1, 3.22_3) free class of p", "54", [&] {
        auto pt = pure_angle_torsion(cfg_of("8.15", "3.22_1", "3.22_3"));
        return pt.p_free_values.size() == 1 ? to_string(pt.p_free_values[0]) : vec_str(pt.p_free_values);
    });
    guarded("8.15 (3.22_1, 3.22_3) d", "6", [&] { return std::to_string(p_divisor(cfg_of("8.15", "3.22_1", "3.22_3")).d_free); });
    guarded("8.15 (3.22_3, 3.22_1) d", "4", [&] { return std::to_string(p_divisor(cfg_of("8.15", "3.22_3", "3.22_1")).d_free); });
    guarded("8.15 (3.22_3, 3.22_1) self-linking", "2/3",
            [&] { return describe_linking(torsion_report(cfg_of("8.15", "3.22_3", "3.22_1")).linking); });
    guarded("8.17 d", "8", [&] { return std::to_string(p_divisor(cfg_of("8.17")).d_free); });
    guarded("8.20 p class", "(14 9 -15)", [&] { return vec_str(boundary_data(cfg_of("8.20")).p_class); });
    guarded("8.20 self-linking", "3/7", [&] { return describe_linking(torsion_report(cfg_of("8.20")).linking); });
    guarded("rank-1 pi/4 nu_bar", "-39", [&] {
        auto res = rank1_pi4_search(catalog);
        return res.matches.empty() ? std::string("none") : std::to_string(res.matches.front().report.nu_bar);
    });
    return rep;
}

json to_json(const Reproduction& r) {
    json rows = json::array();
    for (auto& row : r.rows) {
        json cells = json::array();
        for (auto& c : row.cells)
            cells.push_back({{"column", c.column}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok}});
        rows.push_back({{"label", row.label}, {"ok", row.ok()}, {"cells", cells}});
    }
    return {{"target", r.target}, {"rows", rows}, {"matched", r.matched()}, {"total", r.rows.size()}};
}

std::string render_table(const Reproduction& r) {
    std::ostringstream os;
    for (auto& row : r.rows) {
        os << (row.ok() ? "  ok  " : "  DIFF") << "  ";
        if (r.target == "examples") {
            os << row.label << ": " << row.cells.front().actual;
            if (!row.ok()) os << "  (expected " << row.cells.front().expected << ")";
        } else {
            if (row.cells.size() == 1) os << row.label << "\t";
            for (auto& c : row.cells) os << c.actual << (c.ok ? "" : " [expected " + c.expected + "]") << "\t";
        }
        os << "\n";
    }
    os << r.target << ": " << r.matched() << "/" << r.rows.size() << " rows match\n";
    return os.str();
}

}  // namespace etcs

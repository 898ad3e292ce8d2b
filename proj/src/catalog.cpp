#include "etcs/catalog.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace etcs {

using nlohmann::json;

std::string to_string(BlockKind k) { return k == BlockKind::ordinary ? "ordinary" : "involution"; }

namespace {

[[noreturn]] void fail(const std::string& id, const std::string& field, const std::string& what) {
    throw CatalogError("block " + id + ": field " + field + ": " + what);
}

IMat read_matrix(const json& j, const std::string& id, const std::string& field) {
    if (!j.is_array()) fail(id, field, "expected an array of rows");
    IMat m;
    for (auto& row : j) {
        if (!row.is_array()) fail(id, field, "expected an array of rows");
        IVec r;
        for (auto& x : row) {
            if (!x.is_number_integer()) fail(id, field, "entries must be integers");
            r.emplace_back(x.get<long long>());
        }
        m.push_back(r);
    }
    return m;
}

BuildingBlock read_block(const json& j) {
    BuildingBlock b;
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) throw CatalogError("block record without an id");
    b.id = j["id"].get<std::string>();
    auto need = [&](const char* f) -> const json& {
        if (!j.contains(f)) fail(b.id, f, "missing");
        return j[f];
    };
    auto kind = need("kind");
    if (kind == "ordinary")
        b.kind = BlockKind::ordinary;
    else if (kind == "involution")
        b.kind = BlockKind::involution;
    else
        fail(b.id, "kind", "must be ordinary or involution");
    if (!need("rank").is_number_integer() || j["rank"].get<int>() < 1) fail(b.id, "rank", "must be a positive integer");
    b.rank = j["rank"].get<int>();

    IMat n = read_matrix(need("N"), b.id, "N");
    if (n.size() != static_cast<size_t>(b.rank)) fail(b.id, "N", "size does not match rank");
    for (auto& row : n)
        if (row.size() != n.size()) fail(b.id, "N", "not square");
    if (!is_symmetric(n)) fail(b.id, "N", "not symmetric");
    for (size_t i = 0; i < n.size(); ++i)
        if (mod(n[i][i], 2) != 0) fail(b.id, "N", "diagonal entries must be even");
    auto sig = signature(n);
    if (sig.pos != 1 || sig.neg != b.rank - 1) fail(b.id, "N", "signature must be (1, rank-1)");
    b.N = GramLattice(n);

    auto& c2 = need("c2bar");
    if (!c2.is_array() || c2.size() != n.size()) fail(b.id, "c2bar", "length does not match rank");
    for (auto& x : c2) {
        if (!x.is_number_integer()) fail(b.id, "c2bar", "entries must be integers");
        if (x.get<long long>() % 2 != 0) fail(b.id, "c2bar", "entries must be even");
        b.c2bar.emplace_back(x.get<long long>());
    }
    if (!need("b3").is_number_integer() || j["b3"].get<int>() < 0) fail(b.id, "b3", "must be a non-negative integer");
    b.b3 = j["b3"].get<int>();
    if (j.contains("b3plus")) b.b3plus = j["b3plus"].get<int>();
    if (j.contains("chiC")) b.chiC = j["chiC"].get<int>();
    b.pleasant = need("pleasant").get<bool>();
    b.k_trivial = need("k_trivial").get<bool>();
    if (j.contains("provenance")) b.provenance = j["provenance"];

    if (b.kind == BlockKind::involution) {
        for (auto& row : n)
            for (auto& x : row)
                if (mod(x, 2) != 0) fail(b.id, "N", "involution blocks need all entries even");
        if (!b.b3plus) fail(b.id, "b3plus", "missing for involution block");
        if (*b.b3plus > b.b3) fail(b.id, "b3plus", "exceeds b3");
        if (*b.b3plus % 2 != 0) fail(b.id, "b3plus", "must be even");
    }
    return b;
}

}  // namespace

Catalog load_catalog(const json& doc) {
    if (!doc.is_object() || !doc.contains("blocks") || !doc["blocks"].is_array())
        throw CatalogError("catalog document needs a blocks array");
    Catalog c;
    std::set<std::string> seen;
    for (auto& rec : doc["blocks"]) {
        auto b = read_block(rec);
        if (!seen.insert(b.id).second) fail(b.id, "id", "duplicate");
        c.push_back(std::move(b));
    }
    return c;
}

Catalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open catalog " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw CatalogError(path + ": " + e.what());
    }
    return load_catalog(doc);
}

Catalog default_catalog() {
    if (const char* p = std::getenv("ETCS_CATALOG"); p && *p) return load_catalog_file(p);
    return load_catalog(json::parse(embedded_catalog_text()));
}

json to_json(const BuildingBlock& b) {
    json j;
    j["id"] = b.id;
    j["kind"] = to_string(b.kind);
    j["rank"] = b.rank;
    json n = json::array();
    for (auto& row : b.N.gram) {
        json r = json::array();
        for (auto& x : row) r.push_back(x.convert_to<long long>());
        n.push_back(r);
    }
    j["N"] = n;
    json c = json::array();
    for (auto& x : b.c2bar) c.push_back(x.convert_to<long long>());
    j["c2bar"] = c;
    j["b3"] = b.b3;
    if (b.b3plus) j["b3plus"] = *b.b3plus;
    if (b.chiC) j["chiC"] = *b.chiC;
    j["pleasant"] = b.pleasant;
    j["k_trivial"] = b.k_trivial;
    if (!b.provenance.empty()) j["provenance"] = b.provenance;
    return j;
}

json serialize_catalog(const Catalog& c) {
    json blocks = json::array();
    for (auto& b : c) blocks.push_back(to_json(b));
    return json{{"version", 1}, {"blocks", blocks}};
}

const BuildingBlock* find_block(const Catalog& c, const std::string& id) {
    for (auto& b : c)
        if (b.id == id) return &b;
    return nullptr;
}

const BuildingBlock& require_block(const Catalog& c, const std::string& id) {
    auto b = find_block(c, id);
    if (!b) throw std::out_of_range("unknown block id " + id);
    return *b;
}

FanoDerived derive_rank1_fano(int r, int minusK3, int b3Y) {
    if (r < 1 || r > 4 || (24 + minusK3) % r != 0 || minusK3 % (r * r) != 0)
        throw std::invalid_argument("inconsistent Fano data");
    return {b3Y + minusK3 + 2, (24 + minusK3) / r, minusK3 / (r * r)};
}

CoverDerived derive_double_cover(int b3X, int b1C, int rho) {
    if (b3X < 0 || b1C < 0 || rho < 0) throw std::invalid_argument("negative cover data");
    return {b1C + 2 * b3X + 22 - 2 * rho, b1C + b3X};
}

IVec derive_c2bar_cover(const IVec& c2barX, const IVec& KY) {
    if (c2barX.size() != KY.size()) throw std::invalid_argument("length mismatch");
    IVec out;
    for (size_t i = 0; i < KY.size(); ++i) out.push_back(2 * c2barX[i] - 3 * KY[i]);
    return out;
}

KovalevLee derive_kovalev_lee(const NonSymplecticType& t) {
    if ((t.r - t.a) % 2 != 0 || t.r < t.a || t.r + t.a > 22 || (22 - t.r - t.a) % 2 != 0)
        throw std::invalid_argument("invalid non-symplectic type");
    return {t.r + 2 * t.k() + 3, 4 * t.g(), 2 * t.k() + 2};
}

CoverDerived derive_smoothed(int r) {
    if (r < 1 || r > 9) throw std::out_of_range("smoothing rank out of range");
    return {12 * (10 - r), 40 - 4 * r};
}

size_t CatalogReport::mismatches() const {
    size_t n = 0;
    for (auto& c : checks) n += !c.ok;
    return n;
}

namespace {

std::string vec_str(const IVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    os << ")";
    return os.str();
}

}  // namespace

CatalogReport verify_catalog(const Catalog& c) {
    CatalogReport rep;
    for (auto& b : c) {
        auto& p = b.provenance;
        auto check = [&](const std::string& field, const std::string& expected, const std::string& derived) {
            rep.checks.push_back({b.id, field, expected, derived, expected == derived});
        };
        auto check_int = [&](const std::string& field, long long expected, long long derived) {
            check(field, std::to_string(expected), std::to_string(derived));
        };
        std::string rule = p.value("derivation", "");
        try {
            if (rule == "rank1_fano" || rule == "fano_b3") {
                auto& f = p.at("fano");
                int r = f.at("r"), k3 = f.at("minusK3"), b3y = f.at("b3Y");
                if (rule == "fano_b3") {
                    check_int("b3", b.b3, b3y + k3 + 2);
                } else {
                    auto d = derive_rank1_fano(r, k3, b3y);
                    check_int("b3", b.b3, d.b3Z);
                    check("c2bar", vec_str(b.c2bar), vec_str({Int(d.c2bar)}));
                    check("N", to_string(b.N.gram[0][0]), std::to_string(d.n_self));
                }
            } else if (rule == "double_cover") {
                auto& dc = p.at("double_cover");
                auto d = derive_double_cover(dc.at("b3X"), dc.at("b1C"), dc.at("rho"));
                check_int("b3", b.b3, d.b3Z);
                check_int("b3plus", b.b3plus.value_or(-1), d.b3plusZ);
                if (b.chiC) check_int("chiC", 2 - *b.chiC, dc.at("b1C").get<int>());
            } else if (rule == "smoothed") {
                auto d = derive_smoothed(p.at("smoothed").at("r"));
                check_int("b3", b.b3, d.b3Z);
                check_int("b3plus", b.b3plus.value_or(-1), d.b3plusZ);
            }
            if (p.contains("fano_cover")) {
                auto& f = p["fano_cover"];
                auto d = derive_rank1_fano(f.at("r"), f.at("minusK3"), 0);
                check("c2bar", vec_str(b.c2bar), vec_str({Int(d.c2bar)}));
                check("N", to_string(b.N.gram[0][0]), std::to_string(d.n_self));
            }
            if (p.contains("c2bar_cover")) {
                auto& f = p["c2bar_cover"];
                IVec x, k;
                for (auto& v : f.at("c2barX")) x.emplace_back(v.get<long long>());
                for (auto& v : f.at("KY")) k.emplace_back(v.get<long long>());
                check("c2bar", vec_str(b.c2bar), vec_str(derive_c2bar_cover(x, k)));
            }
        } catch (const std::exception& e) {
            check("provenance", "derivable", e.what());
        }
    }
    return rep;
}

}  // namespace etcs

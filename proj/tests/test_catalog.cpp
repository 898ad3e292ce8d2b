#include "doctest.h"
#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace testing;
using nlohmann::json;

namespace {

json minimal_block() {
    return json{{"id", "x"}, {"kind", "ordinary"}, {"rank", 1}, {"N", {{2}}}, {"c2bar", {24}},
                {"b3", 10},  {"pleasant", true}, {"k_trivial", true}};
}

std::string load_error(json block) {
    try {
        load_catalog(json{{"blocks", {block}}});
    } catch (const CatalogError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("shipped catalog loads and is self-consistent") {
    auto& c = catalog();
    CHECK(c.size() == 66);
    auto rep = verify_catalog(c);
    CHECK(rep.mismatches() == 0);
    CHECK(rep.checks.size() > 66);
    auto& b = require_block(c, "3.22_3");
    CHECK(b.N.gram == imat({{6}}));
    CHECK(b.c2bar == ivec({30}));
    CHECK(b.b3 == 48);
    CHECK(b.b3plus == 18);
    CHECK(b.kind == BlockKind::involution);
    CHECK(b.b3_effective() == 18);
    CHECK(require_block(c, "3.8_1_18").b3_effective() == 24);
    CHECK_THROWS_AS(require_block(c, "nosuch"), std::out_of_range);
    CHECK(find_block(c, "nosuch") == nullptr);
}

TEST_CASE("derivation rules") {
    // sextic double solid: index 1, -K^3 = 2, b3 = 104
    auto f = derive_rank1_fano(1, 2, 104);
    CHECK(f.b3Z == require_block(catalog(), "3.8_1_2").b3);
    CHECK(f.c2bar == 26);
    CHECK(f.n_self == 2);
    CHECK_THROWS(derive_rank1_fano(2, 3, 0));
    auto s = derive_smoothed(1);
    CHECK(s.b3Z == require_block(catalog(), "5.15_1").b3);
    CHECK(s.b3plusZ == require_block(catalog(), "5.15_1").b3plus);
    CHECK_THROWS_AS(derive_smoothed(0), std::out_of_range);
    auto d = derive_double_cover(0, 2, 1);
    CHECK(d.b3Z == 2 + 22 - 2);
    CHECK(d.b3plusZ == 2);
    CHECK(derive_c2bar_cover(ivec({12}), ivec({-2})) == ivec({30}));
}

TEST_CASE("validation errors name the block and field") {
    CHECK(load_error(minimal_block()).empty());
    auto b = minimal_block();
    b["N"] = {{3}};
    CHECK(load_error(b) == "block x: field N: diagonal entries must be even");
    b = minimal_block();
    b["c2bar"] = {23};
    CHECK(load_error(b) == "block x: field c2bar: entries must be even");
    b = minimal_block();
    b["N"] = {{-2}};
    CHECK(load_error(b) == "block x: field N: signature must be (1, rank-1)");
    b = minimal_block();
    b["kind"] = "involution";
    CHECK(load_error(b) == "block x: field b3plus: missing for involution block");
    b["b3plus"] = 12;
    CHECK(load_error(b) == "block x: field b3plus: exceeds b3");
    b = minimal_block();
    b.erase("b3");
    CHECK(load_error(b) == "block x: field b3: missing");
    CHECK_THROWS_WITH(load_catalog(json{{"blocks", {minimal_block(), minimal_block()}}}),
                      "block x: field id: duplicate");
}

TEST_CASE("catalog files, serialization and the environment override") {
    CHECK_THROWS_AS(load_catalog_file("/nonexistent/catalog.json"), std::ios_base::failure);
    auto dir = std::filesystem::temp_directory_path();
    auto bad = dir / "etcs_bad_catalog.json";
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_catalog_file(bad.string()), CatalogError);

    auto doc = serialize_catalog(catalog());
    auto again = load_catalog(doc);
    CHECK(serialize_catalog(again).dump() == doc.dump());

    auto small = dir / "etcs_small_catalog.json";
    std::ofstream(small) << json{{"blocks", {minimal_block()}}}.dump();
    setenv("ETCS_CATALOG", small.c_str(), 1);
    auto c = default_catalog();
    unsetenv("ETCS_CATALOG");
    CHECK(c.size() == 1);
    CHECK(c[0].id == "x");
}

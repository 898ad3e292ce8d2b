#pragma once

#include "etcs/lattice.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etcs {

enum class BlockKind { ordinary, involution };

std::string to_string(BlockKind k);

struct BuildingBlock {
    std::string id;
    BlockKind kind = BlockKind::ordinary;
    int rank = 0;
    GramLattice N;
    IVec c2bar;
    int b3 = 0;
    std::optional<int> b3plus;
    std::optional<int> chiC;
    bool pleasant = true;
    bool k_trivial = true;
    nlohmann::json provenance = nlohmann::json::object();

    // b3+ for involution blocks, b3 for ordinary ones
    int b3_effective() const { return kind == BlockKind::involution ? *b3plus : b3; }
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Catalog = std::vector<BuildingBlock>;

Catalog load_catalog(const nlohmann::json& doc);
Catalog load_catalog_file(const std::string& path);
// ETCS_CATALOG if set, otherwise the embedded table data
Catalog default_catalog();
const std::string& embedded_catalog_text();

nlohmann::json to_json(const BuildingBlock& b);
nlohmann::json serialize_catalog(const Catalog& c);
const BuildingBlock* find_block(const Catalog& c, const std::string& id);
const BuildingBlock& require_block(const Catalog& c, const std::string& id);

struct FanoDerived {
    int b3Z;
    int c2bar;
    int n_self;
};
FanoDerived derive_rank1_fano(int r, int minusK3, int b3Y);

struct CoverDerived {
    int b3Z, b3plusZ;
};
CoverDerived derive_double_cover(int b3X, int b1C, int rho);
IVec derive_c2bar_cover(const IVec& c2barX, const IVec& KY);

struct NonSymplecticType {
    int r, a, delta;
    int k() const { return (r - a) / 2; }
    int g() const { return (22 - r - a) / 2; }
};
struct KovalevLee {
    int b2Z, b3Z, rkK;
};
KovalevLee derive_kovalev_lee(const NonSymplecticType& t);
CoverDerived derive_smoothed(int r);

struct FieldCheck {
    std::string block, field;
    std::string expected, derived;
    bool ok;
};

struct CatalogReport {
    std::vector<FieldCheck> checks;
    size_t mismatches() const;
};

CatalogReport verify_catalog(const Catalog& c);

}  // namespace etcs

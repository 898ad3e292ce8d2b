#pragma once

#include "etcs/invariants.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace etcs {

struct MatchCandidate {
    std::string plus_id, minus_id, theta;
    IMat pushout;
    std::optional<std::array<Int, 3>> rank1_decomposition;  // (m, q+, q-)
    InvariantReport report;
    std::vector<std::string> notes;
};

struct SearchResult {
    std::vector<MatchCandidate> matches;
    size_t candidate_pairs = 0;  // pairs (or cross blocks) examined
    size_t rejected = 0;         // passed the arithmetic test but failed validation or feasibility
};

// validated, feasible and with a computable report, or nothing
std::optional<MatchCandidate> evaluate_pushout(const BuildingBlock& plus, const BuildingBlock& minus,
                                               const GluingAngle& angle, const IMat& w);

SearchResult rank1_pi4_search(const Catalog& catalog);
SearchResult rank1_pi6_search(const Catalog& catalog);

struct CrossTermOptions {
    int bound = 1;
    bool pure = false;
};

SearchResult cross_term_search(const BuildingBlock& plus, const BuildingBlock& minus, const Rat& theta,
                               const CrossTermOptions& opt);

nlohmann::json to_json(const MatchCandidate& c);

}  // namespace etcs

#pragma once

#include "etcs/search.hpp"

#include <string>
#include <vector>

namespace etcs {

struct Cell {
    std::string column, expected, actual;
    bool ok = true;
};

struct ReproRow {
    std::string label;
    std::vector<Cell> cells;
    bool ok() const;
};

struct Reproduction {
    std::string target;
    std::vector<ReproRow> rows;
    size_t matched() const;
    bool ok() const { return matched() == rows.size(); }
};

// expected linking given as "diagonal", "hyperbolic" or a fraction a/m on a cyclic group
DiscriminantForm expected_linking(const std::string& text);
bool linking_matches(const std::string& expected, const DiscriminantForm& actual);

struct Table5Fixture {
    std::string example, theta, plus, minus;
    int b3, d, torsion_order;
    std::string linking;  // empty when the torsion is trivial
    int nu_bar;
    std::vector<std::vector<long>> pushout;  // empty for rank-1 pushouts
};

const std::vector<Table5Fixture>& table5_fixtures();
Configuration fixture_configuration(const Table5Fixture& f, const Catalog& catalog);

Reproduction reproduce_table4(const Catalog& catalog);
Reproduction reproduce_table5(const Catalog& catalog);
Reproduction reproduce_examples(const Catalog& catalog);

nlohmann::json to_json(const Reproduction& r);
std::string render_table(const Reproduction& r);

}  // namespace etcs

#pragma once

#include "etcs/reproduce.hpp"

#include <initializer_list>

namespace testing {

using namespace etcs;

inline IMat imat(std::initializer_list<std::initializer_list<long>> rows) {
    IMat m;
    for (auto& r : rows) {
        IVec v;
        for (auto x : r) v.emplace_back(x);
        m.push_back(v);
    }
    return m;
}

inline IVec ivec(std::initializer_list<long> xs) {
    IVec v;
    for (auto x : xs) v.emplace_back(x);
    return v;
}

inline const Catalog& catalog() {
    static const Catalog c = default_catalog();
    return c;
}

inline Configuration config(const std::string& plus, const std::string& minus, const std::string& theta,
                            const IMat& w) {
    auto& p = require_block(catalog(), plus);
    auto& m = require_block(catalog(), minus);
    return make_configuration(p, m, make_angle(parse_theta(theta), p.kind, m.kind), w);
}

inline Configuration example(const std::string& ex, const std::string& plus = "", const std::string& minus = "") {
    for (auto& f : table5_fixtures())
        if (f.example == ex && (plus.empty() || f.plus == plus) && (minus.empty() || f.minus == minus))
            return fixture_configuration(f, catalog());
    throw std::out_of_range(ex);
}

}  // namespace testing

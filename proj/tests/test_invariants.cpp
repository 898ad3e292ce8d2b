#include "doctest.h"
#include "support.hpp"

using namespace testing;

namespace {

AngleSpectrum spectrum(std::vector<Angle> minus_nonzero) {
    AngleSpectrum s;
    s.alpha_plus = {Angle{1, 0}, Angle{0, 1}, Angle{0, -1}};
    s.alpha_minus = minus_nonzero;
    while (s.alpha_minus.size() < 19) s.alpha_minus.push_back(Angle{1, 0});
    return s;
}

}  // namespace

TEST_CASE("Betti numbers") {
    auto b = betti(example("8.1"));
    CHECK(b.b2 == 0);
    CHECK(b.b3 == 97);
    auto t4 = config("3.21", "3.8_1_18", "1/4pi", imat({{4, 6}, {6, 18}}));
    CHECK(betti(t4).b3 == 22 + 18 + 24);
    auto ord = config("3.8_1_2", "3.8_1_4", "1/2pi", imat({{2, 0}, {0, 4}}));
    CHECK(betti(ord).d_theta == 2);
    CHECK(betti(ord).b3 == 23 - 2 + 108 + 66 + 2);
    auto not_sc = config("3.8_1_2", "3.8_1_4", "1/4pi", imat({{2, 2}, {2, 4}}));
    CHECK_THROWS_AS(betti(not_sc), std::domain_error);
}

TEST_CASE("boundary map and cokernel") {
    auto c = example("8.11");
    auto bd = boundary_data(c);
    CHECK(bd.What == imat({{3, 3, 3}, {3, 2, 4}, {3, 4, 2}}));
    CHECK(bd.p_class == ivec({15, -18, -18}));
    CHECK(bd.codomain_labels.size() == 3);
    auto ck = cokernel_presentation(bd.What);
    CHECK(ck.group.str() == "Z+Z/3");
    CHECK(boundary_data(example("8.12")).p_class == ivec({9, 9, -24}));
    CHECK(boundary_data(example("8.20")).p_class == ivec({14, 9, -15}));
    CHECK_FALSE(boundary_supported(config("3.8_1_2", "3.8_1_4", "1/2pi", imat({{2, 0}, {0, 4}}))));
    CHECK_THROWS_AS(boundary_data(config("3.8_1_2", "3.8_1_4", "1/2pi", imat({{2, 0}, {0, 4}}))),
                    std::domain_error);
}

TEST_CASE("torsion and linking forms") {
    auto t11 = torsion_report(example("8.11"));
    CHECK(t11.torsion.factors == std::vector<Int>{3});
    CHECK(t11.linking.pairing[0][0] == Rat(1, 3));
    auto t12 = torsion_report(example("8.12"));
    CHECK(t12.linking.pairing[0][0] == Rat(2, 3));
    CHECK(torsion_report(example("8.7")).torsion.factors.empty());
    auto t20 = torsion_report(example("8.20"));
    CHECK(t20.torsion.factors == std::vector<Int>{7});
    CHECK(describe_linking(t20.linking) == "3/7");
    CHECK(linking_matches("-1/7", t20.linking));
}

TEST_CASE("pure-angle shortcut") {
    auto p3 = pure_angle_torsion(example("8.3"));
    CHECK(p3.delta.group.factors == std::vector<Int>{4, 4});
    CHECK(p3.torsion.factors == std::vector<Int>{2, 2});
    CHECK(describe_linking(p3.linking) == "diagonal");
    CHECK(describe_linking(pure_angle_torsion(example("8.4")).linking) == "hyperbolic");
    auto p15 = pure_angle_torsion(example("8.15", "3.22_1", "3.22_3"));
    CHECK(p15.torsion.factors.empty());
    REQUIRE(p15.p_free_values.size() == 1);
    CHECK(p15.p_free_values[0] == 54);
    CHECK(p15.divisor.d_free == 6);
    CHECK(pure_angle_torsion(example("8.1")).p_free == QVec{46, 24});
    CHECK_THROWS_AS(pure_angle_torsion(example("8.7")), std::domain_error);
}

TEST_CASE("divisibility of p") {
    auto p7 = p_divisor(example("8.7"));
    CHECK(p7.d_free == 4);
    CHECK(p7.clean());
    CHECK(p_divisor(example("8.17")).d_free == 8);
    auto p11 = p_divisor(example("8.11"));
    CHECK(p11.d_free == 6);
    CHECK(p11.d_full == 6);
    CHECK(p_divisor(config("3.22_4", "3.8_1_16", "1/4pi", imat({{8, 8}, {8, 16}}))).d_free == 24);
    CHECK(p_divisor(example("8.15", "3.22_3", "3.22_1")).d_free == 4);
}

TEST_CASE("nu-bar from configuration angles") {
    CHECK(nu_bar(spectrum({}), Rat(1, 4), 1) == -39);
    CHECK(nu_bar(spectrum({{0, 1}, {0, -1}}), Rat(1, 4), 1) == -36);
    CHECK(nu_bar(spectrum({{-1, 0}}), Rat(1, 4), 1) == -36);
    CHECK(nu_bar(spectrum({{Rat(1, 2), 1}, {Rat(1, 2), -1}}), Rat(1, 6), 1) == -48);
    CHECK(nu_bar(spectrum({}), Rat(1, 6), 1) == -51);
    CHECK(nu_bar(spectrum({{Rat(24, 25), 1}, {Rat(24, 25), -1}}), Rat(1, 4), 1) == -39);
    CHECK(nu_bar(spectrum({}), Rat(1, 4), -1) == 39);
    CHECK(nu_mod48(-36) == 36);
    CHECK(nu_symmetric(-36) == -12);
    CHECK(nu_symmetric(0) == 24);
    CHECK(nu_symmetric(-24) == 0);
}

TEST_CASE("full reports") {
    auto r2 = full_report(example("8.2"));
    CHECK(r2.b3 == 77);
    CHECK(r2.torsion.factors.empty());
    CHECK(r2.d_full == 2);
    CHECK(r2.nu_bar == -36);
    CHECK(r2.parity_ok);
    auto r9 = full_report(example("8.9"));
    CHECK(r9.b3 == 60);
    CHECK(r9.d_full == 6);
    CHECK(r9.nu_bar == -33);
    auto rs = full_report(example("8.15", "3.22_3", "3.22_1"));
    CHECK(rs.b3 == 86);
    CHECK(rs.torsion.factors == std::vector<Int>{3});
    CHECK(rs.d_full == 4);
    auto ord = full_report(config("3.8_1_2", "3.8_1_4", "1/2pi", imat({{2, 0}, {0, 4}})));
    CHECK_FALSE(ord.torsion_supported);
    CHECK(ord.notes.size() == 1);
}

TEST_CASE("orientation reversal flips nu-bar and the linking form only") {
    auto f = table5_fixtures()[11];
    REQUIRE(f.example == "8.12");
    auto neg = full_report(fixture_configuration(f, catalog()));
    f.theta = "1/4pi";
    auto pos = full_report(fixture_configuration(f, catalog()));
    CHECK(neg.nu_bar == -pos.nu_bar);
    CHECK(neg.b3 == pos.b3);
    CHECK(neg.d_full == pos.d_full);
    CHECK(neg.torsion == pos.torsion);
    CHECK(forms_isomorphic(neg.linking, pos.linking.negated()));
    CHECK_FALSE(forms_isomorphic(neg.linking, pos.linking));
}

TEST_CASE("report serialization is deterministic") {
    auto a = to_json(full_report(example("8.5"))).dump();
    auto b = to_json(full_report(example("8.5"))).dump();
    CHECK(a == b);
    auto j = nlohmann::json::parse(a);
    CHECK(j["torsion"] == nlohmann::json::array({"7"}));
    CHECK(j["linking"][0][0] == "6/7");
    CHECK(j["nu"] == -12);
    CHECK(j["nu_mod48"] == 36);
}

TEST_CASE("comparison of 2-connected reports") {
    auto r3 = full_report(example("8.3")), r4 = full_report(example("8.4"));
    auto c34 = compare_2connected(r3, r4);
    CHECK(c34.oriented == Verdict::distinct);
    CHECK(c34.reversed == Verdict::distinct);
    auto c910 = compare_2connected(full_report(example("8.9")), full_report(example("8.10")));
    CHECK(c910.oriented == Verdict::diffeo_candidate);
    auto flipped = example("8.12");
    auto r12 = full_report(make_configuration(flipped.plus, flipped.minus,
                                              make_angle(Rat(1, 4), flipped.plus.kind, flipped.minus.kind), flipped.raw));
    CHECK(r12.linking.pairing[0][0] == Rat(2, 3));
    auto c1112 = compare_2connected(full_report(example("8.11")), r12);
    CHECK(c1112.oriented == Verdict::distinct);
    CHECK(c1112.reversed == Verdict::diffeo_candidate);
    auto c33 = compare_2connected(r3, r3);
    CHECK(c33.oriented == Verdict::inconclusive);
    auto c1617 = compare_2connected(full_report(example("8.16")), full_report(example("8.17")));
    CHECK(c1617.oriented == Verdict::distinct);
    auto r17 = full_report(example("8.17"));
    CHECK(compare_2connected(r17, r17).oriented == Verdict::homeo_candidate);
    CHECK(compare_2connected(full_report(example("8.1")), full_report(example("8.7"))).reason == "b3 differs");
    auto r14 = full_report(configuration_from_json(
        nlohmann::json::parse(R"({"plus": "3.23_8", "minus": "3.11", "theta": "1/4pi",
          "pushout": {"base_gram": [[196, 0, 98], [0, -98, 0], [98, 0, 98]],
                      "glue": [["9/49", "8/49", 0], [0, "3/14", "5/14"]],
                      "plus_basis": [["9/49", "8/49", 0], ["5/49", "-1/49", 0]],
                      "minus_basis": [[0, "-1/14", "3/14"], [0, "3/14", "5/14"]]}})"),
        catalog()));
    CHECK(r14.b2 == 1);
    CHECK(r14.b3 == 49);
    CHECK(r14.nu_bar == -39);
    CHECK_THROWS_AS(compare_2connected(r14, r14), std::invalid_argument);
}

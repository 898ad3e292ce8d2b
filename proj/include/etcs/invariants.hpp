#pragma once

#include "etcs/configuration.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etcs {

struct Betti {
    int b2 = 0, b3 = 0, d_theta = 0;
};

Betti betti(const Configuration& cfg);

struct BoundaryData {
    IMat What;  // codomain x domain
    IVec p_class;
    IMat plus_domain, minus_domain;  // domain bases, rows in N+ resp. N- coordinates
    std::vector<std::string> domain_labels, codomain_labels;
};

bool boundary_supported(const Configuration& cfg);
BoundaryData boundary_data(const Configuration& cfg);

struct TorsionResult {
    FiniteAbelianGroup torsion;
    DiscriminantForm linking;
};

TorsionResult torsion_report(const Configuration& cfg);

struct PDivisor {
    int d_free = 24;
    std::optional<int> d_full;
    bool clean() const { return d_full && *d_full == d_free; }
};

PDivisor p_divisor(const Configuration& cfg);

struct PureTorsion {
    DiscriminantForm delta;
    FiniteAbelianGroup torsion;
    DiscriminantForm linking;
    QMat free_lattice;  // basis of the lattice carrying the free part, N- coordinates
    QVec p_free;        // the functional on N- coordinates
    std::vector<Rat> p_free_values;
    PDivisor divisor;  // d_full only when forced by the shortcut data
};

PureTorsion pure_angle_torsion(const Configuration& cfg);

int nu_bar(const AngleSpectrum& angles, const Rat& theta, int orientation);
int nu_symmetric(int nu_bar);
int nu_mod48(int nu_bar);

struct InvariantReport {
    std::string plus_id, minus_id, theta;
    std::string pi1;
    int b2 = 0, b3 = 0, d_theta = 0;
    bool pure = false;
    bool torsion_supported = false;
    FiniteAbelianGroup torsion;
    DiscriminantForm linking;
    std::string linking_class;
    int d_free = 0;
    std::optional<int> d_full;
    bool p_torsion_clean = false;
    IVec p_class;
    AngleSpectrum angles;
    int nu_bar = 0, nu = 0, nu48 = 0;
    bool parity_ok = false;
    std::vector<std::string> notes;
};

InvariantReport full_report(const Configuration& cfg);
nlohmann::json to_json(const InvariantReport& r);

enum class Verdict { distinct, homeo_candidate, diffeo_candidate, inconclusive };
std::string to_string(Verdict v);

struct Comparison {
    Verdict oriented = Verdict::distinct;
    Verdict reversed = Verdict::distinct;  // after reversing the orientation of the second manifold
    std::string reason;
    std::vector<std::string> notes;
};

Comparison compare_2connected(const InvariantReport& a, const InvariantReport& b);

}  // namespace etcs

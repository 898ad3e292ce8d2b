#pragma once

#include "etcs/catalog.hpp"
#include "etcs/lattice.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace etcs {

enum class Family { square, hexagonal };
enum class Pi1 { simply_connected, z2, z3, inadmissible };

std::string to_string(Family f);
std::string to_string(Pi1 p);

// angles are exact rational multiples of pi
Rat parse_theta(const std::string& s);
std::string theta_string(const Rat& t);

struct GluingAngle {
    Family family = Family::square;
    Rat raw;    // as supplied, signed
    Rat theta;  // canonical, in (0, 1/2]
    int epsilon = 1;
    int orientation = 1;
    int b_plus = 1, b_minus = 0;
};

struct Admissibility {
    Pi1 pi1 = Pi1::inadmissible;
    std::string reason;
};

Admissibility admissible_angle(BlockKind kplus, BlockKind kminus, Family family, int b_plus, int b_minus,
                               const Rat& theta);

// family and b flags inferred from the block kinds when not given
GluingAngle make_angle(const Rat& raw, BlockKind kplus, BlockKind kminus, std::optional<Family> family = {},
                       std::optional<int> b_plus = {}, std::optional<int> b_minus = {});
Admissibility admissible_angle(const GluingAngle& a, BlockKind kplus, BlockKind kminus);

// cos^2 of the canonical angle, for the supported angles
Rat cos_squared(const Rat& theta);

struct Configuration {
    BuildingBlock plus, minus;
    GluingAngle angle;
    IMat raw;  // (rho+ + rho-) square, possibly degenerate
    RadicalSplit split;
    std::optional<QMat> glue;  // present when built from glue vectors
    std::vector<std::string> construction_violations;

    size_t rho_plus() const { return plus.N.rank(); }
    size_t rho_minus() const { return minus.N.rank(); }
    QMat A() const;
    QMat B() const;
    QMat C() const;
    // does the side act through its involution (b = 1, or hexagonal family)
    bool plus_involutive() const;
    bool minus_involutive() const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Configuration make_configuration(const BuildingBlock& plus, const BuildingBlock& minus, const GluingAngle& angle,
                                 const IMat& w);
Configuration configuration_from_glue(const BuildingBlock& plus, const BuildingBlock& minus, const GluingAngle& angle,
                                      const IMat& base, const QMat& glue, const QMat& plus_basis,
                                      const QMat& minus_basis);
Configuration configuration_from_json(const nlohmann::json& doc, const Catalog& catalog);

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> notes;
    Signature quotient_signature;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_configuration(const Configuration& cfg);

// pi+ pi- acting on N+ coordinates, and pi- pi+ on N- coordinates
QMat plus_operator(const Configuration& cfg);
QMat minus_operator(const Configuration& cfg);

struct AngleEigenspaces {
    std::vector<QVec> plus, minus;  // coordinate vectors in N+ resp. N-
    size_t multiplicity = 0;
};

AngleEigenspaces angle_eigenspaces(const Configuration& cfg, const Rat& cos2);
bool is_pure_angle(const Configuration& cfg);
int d_theta(const Configuration& cfg);

struct Angle {
    Rat cos;       // exact cosine
    int sign = 0;  // +1 or -1 away from 0 and pi, 0 at 0 and pi

    bool is_zero() const { return sign == 0 && cos == 1; }
    bool is_pi() const { return sign == 0 && cos == -1; }
    std::string str() const;
    bool operator==(const Angle& o) const = default;
    bool operator<(const Angle& o) const { return cos != o.cos ? cos > o.cos : sign > o.sign; }
};

struct AngleSpectrum {
    std::vector<Angle> alpha_plus, alpha_minus;
};

AngleSpectrum configuration_angles(const Configuration& cfg);

struct Rank1Pushout {
    Int w;
    std::optional<std::array<Int, 3>> decomposition;  // (m, q+, q-)
};

std::optional<Rank1Pushout> rank1_pushout(const Int& n_plus, const Int& n_minus, const Rat& theta);

struct Feasibility {
    bool feasible = false;
    QVec witness;  // in N+ coordinates
    QVec image;    // epsilon * pi_- of the witness, in N- coordinates
};

// strict system G t > 0, decided by elimination; returns a point when feasible
std::optional<QVec> strict_cone_point(const QMat& g);
Feasibility feasibility_cone_check(const Configuration& cfg);

struct LambdaLattices {
    SubLattice plus, minus;
};

LambdaLattices lambda_lattices(const Configuration& cfg);

}  // namespace etcs

#pragma once

#include "etcs/exact.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace etcs {

struct GramLattice {
    IMat gram;
    std::vector<std::string> labels;

    GramLattice() = default;
    explicit GramLattice(IMat g, std::vector<std::string> l = {});
    size_t rank() const { return gram.size(); }
    bool is_even() const;
};

struct FiniteAbelianGroup {
    std::vector<Int> factors;  // d1 | d2 | ... , each >= 2
    int free_rank = 0;

    Int torsion_order() const;
    bool trivial() const { return factors.empty() && free_rank == 0; }
    std::string str() const;
    bool operator==(const FiniteAbelianGroup& o) const = default;
};

struct DiscriminantForm {
    FiniteAbelianGroup group;
    QMat pairing;  // values in [0,1)
    IMat gens;     // generator representatives, one row each

    DiscriminantForm negated() const;
};

// U * A * V = diag
struct SmithForm {
    IMat U, Uinv, V, Vinv;
    std::vector<Int> diag;
    size_t rank = 0;
};

SmithForm smith_form(const IMat& a);

struct Cokernel {
    FiniteAbelianGroup group;
    SmithForm snf;
    size_t rows = 0, cols = 0;
    std::vector<size_t> torsion_idx;
    std::vector<size_t> free_idx;

    // torsion coordinates (reduced mod the factors) and free coordinates of the class of t
    std::pair<IVec, IVec> classify(const IVec& t) const;
    IVec torsion_generator(size_t k) const;
    IVec free_functional(size_t j) const;

    struct Preimage {
        Int m;
        IVec x;
    };
    // minimal m >= 1 with m t in the image, plus x with A x = m t
    std::optional<Preimage> solve(const IVec& t) const;
};

Cokernel cokernel_presentation(const IMat& a);

DiscriminantForm discriminant_form(const GramLattice& g);
DiscriminantForm discriminant_form(const IMat& g);
DiscriminantForm quotient_by_2torsion(const DiscriminantForm& d);

bool forms_isomorphic(const DiscriminantForm& a, const DiscriminantForm& b);
std::string describe_linking(const DiscriminantForm& d);

struct RadicalSplit {
    IMat radical;     // rows span {v : G v = 0}
    IMat complement;  // rows; together with radical a basis of Z^n
    IMat quotient;    // r x n: raw coordinates -> coordinates on the complement
    GramLattice reduced;
};

RadicalSplit radical_and_quotient(const IMat& g);

IMat hnf_rows(IMat gens);
IMat saturate_rows(const IMat& rows);
IMat integer_kernel(const IMat& a);
QMat intersect_lattices(const QMat& a, const QMat& b);

struct SubLattice {
    QMat basis;  // rows in ambient coordinates
    GramLattice lattice;
};

SubLattice saturated_sum(const QMat& ambient, const QMat& generators);
GramLattice overlattice_from_glue(const IMat& g, const QMat& glue);
SubLattice overlattice_with_basis(const IMat& g, const QMat& glue);
IMat even_dual_kernel(const IMat& g);

struct Signature {
    int pos = 0, neg = 0, zero = 0;
    bool operator==(const Signature& o) const = default;
};

Signature signature(const IMat& g);
Signature signature(const QMat& g);

struct Projections {
    QMat plus_of_minus;  // rho+ x rho-: pi_+ of the N_- basis, columns in N_+ coordinates
    QMat minus_of_plus;  // rho- x rho+
};

Projections block_projections(const IMat& w, size_t rho_plus);

struct Eigenstructure {
    std::vector<std::pair<Rat, int>> roots;
    QVec residual;  // monic factor without rational roots, low degree first
    bool irrational() const { return residual.size() > 1; }
};

QVec characteristic_polynomial(const QMat& m);
Eigenstructure rational_eigenstructure(const QMat& m);

}  // namespace etcs

#pragma once

#include <string>
#include <vector>

#include "cdmrg/rep.hpp"

namespace cdmrg {

/// Orthogonal basis of splitting maps c -> a (x) b. Each tensor is (da*db) x dc with T^dag T = 1_c,
/// row index ia * db + ib, and its first entry above 1e-10 in (ia, ib, ic) order is real positive.
struct IntertwinerBasis {
    int                 da = 0, db = 0, dc = 0;
    std::string         a, b, c;
    std::vector<Matrix> tensors;

    [[nodiscard]] int multiplicity() const { return static_cast<int>(tensors.size()); }
};

/// dim Hom(c, a (x) b), from the rank of the isotypic projector; zero when cocycles do not match.
int fusion_multiplicity(const ProjRep &a, const ProjRep &b, const ProjRep &c);

/// Same quantity from characters, (1/|G|) sum chi_a chi_b conj(chi_c).
int fusion_multiplicity_character(const ProjRep &a, const ProjRep &b, const ProjRep &c);

IntertwinerBasis intertwiner_basis(const ProjRep &a, const ProjRep &b, const ProjRep &c);

/// max over g and basis elements of |(a(g) (x) b(g)) T - T c(g)|.
double equivariance_residual(const IntertwinerBasis &basis, const ProjRep &a, const ProjRep &b, const ProjRep &c);

/// max |Tr(T_i^dag T_j) - dc delta_ij|.
double orthogonality_residual(const IntertwinerBasis &basis);

}

#pragma once

#include "cdmrg/oracle.hpp"

namespace cdmrg::testing {

inline ChainHamiltonian chain(DualModelLabel label, int length, double J1 = 1, double J2 = 1, int left = 0, int right = 0) {
    ModelSpec s;
    s.J1     = J1;
    s.J2     = J2;
    s.length = length;
    s.dual   = label;
    return with_boundaries(hamiltonian_terms(s), left, right);
}

/// MPS with bond dimension one along a single path of the basis.
inline ConstrainedMps path_mps(const ChainHamiltonian &h, const ConstrainedBasis &basis, long state) {
    ConstrainedMps mps;
    mps.cat   = h.cat;
    mps.label = h.dual;
    const int L = basis.length();
    mps.bonds.resize(size_t(L + 1));
    mps.sites.resize(size_t(L));
    for(int b = 0; b <= L; ++b) mps.bonds[size_t(b)].set(basis.sector(state, b), 1);
    for(int i = 0; i < L; ++i) mps.sites[size_t(i)].blocks[{basis.sector(state, i), basis.sector(state, i + 1), basis.mult(state, i)}] = Matrix::Ones(1, 1);
    return mps;
}

}

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cdmrg/group.hpp"
#include "cdmrg/linalg.hpp"

namespace cdmrg {

enum class CocycleClass { Trivial, Nontrivial };

/// U(1)-valued 2-cocycle stored as a full table.
struct Cocycle {
    GroupPtr            group;
    std::vector<Scalar> values; // values[g * order + h] = psi(g, h)
    CocycleClass        cls = CocycleClass::Trivial;

    [[nodiscard]] Scalar operator()(int g, int h) const { return values[static_cast<size_t>(g * group->order + h)]; }
};

Cocycle trivial_cocycle(const GroupPtr &g);

/// Cocycle of the SU(2) lift of the rotations of `h`. Throws if it is a coboundary on `h`.
Cocycle nontrivial_cocycle(const GroupPtr &h);

/// Cocycle of the SU(2) lift, whatever its class.
Cocycle spin_lift_cocycle(const GroupPtr &h);

Cocycle restrict_cocycle(const Cocycle &psi, const SubgroupEmbedding &emb);
Cocycle operator*(const Cocycle &a, const Cocycle &b);
bool    same_cocycle(const Cocycle &a, const Cocycle &b, double tol = 1e-12);

/// max |psi(g,h) psi(gh,k) - psi(h,k) psi(g,hk)| together with unit-modulus and normalization deviations.
double cocycle_residual(const Cocycle &psi);

/// Whether psi = d(beta) for some U(1)-valued beta; decided by existence of a 1-dimensional psi-representation.
bool is_coboundary(const Cocycle &psi);

/// Unitary projective representation: rho(g) rho(h) = psi(g, h) rho(gh).
struct ProjRep {
    GroupPtr            group;
    Cocycle             cocycle;
    int                 dim = 0;
    std::vector<Matrix> matrices;
    std::string         label;

    [[nodiscard]] const Matrix &operator()(int g) const { return matrices[static_cast<size_t>(g)]; }
    [[nodiscard]] Scalar        character(int g) const { return matrices[static_cast<size_t>(g)].trace(); }
};
using ProjIrrep = ProjRep;

double projective_residual(const ProjRep &r);
double unitarity_residual(const ProjRep &r);

/// Dimension of the space of matrices commuting with every rho(g).
int commutant_dimension(const ProjRep &r);

/// Complete list of inequivalent irreducible psi-representations, ordered by dimension then label.
/// The regular psi-representation is split with random Hermitian averages drawn from `seed`.
std::vector<ProjRep> irreps(const GroupPtr &g, const Cocycle &psi, std::uint64_t seed = 0x6a09e667f3bcc909ULL);

/// Cartesian spin-1 representation u(g) = R(g) of a rotation group; labelled "3".
ProjRep spin1_irrep(const GroupPtr &g);

/// Spin-1/2 lift s(g) carrying the cocycle spin_lift_cocycle(g).
ProjRep spin_half_rep(const GroupPtr &g);

ProjRep restriction(const ProjRep &v, const SubgroupEmbedding &emb);
ProjRep tensor_product(const ProjRep &a, const ProjRep &b);

/// Decomposition of v restricted along emb into psi-irreps of emb.sub, as (irrep, multiplicity) pairs.
std::vector<std::pair<ProjRep, int>> restrict(const ProjRep &v, const SubgroupEmbedding &emb, const Cocycle &psi);

/// (1/|G|) sum conj(chi_a) chi_b.
Scalar character_inner(const ProjRep &a, const ProjRep &b);

/// Unitary U with a(g) U = U b(g) for all g; throws if a and b are inequivalent.
Matrix equivalence_unitary(const ProjRep &a, const ProjRep &b);

}

#include <doctest.h>

#include <map>

#include "cdmrg/category.hpp"

using namespace cdmrg;

namespace {
    std::vector<int> dims(const std::vector<ProjRep> &reps) {
        std::vector<int> d;
        for(const auto &r : reps) d.push_back(r.dim);
        return d;
    }
    std::vector<std::string> labels(const std::vector<ProjRep> &reps) {
        std::vector<std::string> d;
        for(const auto &r : reps) d.push_back(r.label);
        return d;
    }
    // psi = d(beta) for some beta valued in 4th roots of unity (enough for +-1 cocycles on D2).
    bool coboundary_brute_force(const Cocycle &psi) {
        const GroupData &g = *psi.group;
        const Scalar     I(0, 1);
        const Scalar     roots[4] = {1.0, I, -1.0, -I};
        std::vector<int> b(static_cast<size_t>(g.order), 0);
        long             total = 1;
        for(int i = 0; i < g.order; ++i) total *= 4;
        for(long code = 0; code < total; ++code) {
            long c = code;
            for(int i = 0; i < g.order; ++i, c /= 4) b[size_t(i)] = static_cast<int>(c % 4);
            bool ok = true;
            for(int x = 0; x < g.order && ok; ++x)
                for(int y = 0; y < g.order && ok; ++y) {
                    Scalar d = roots[b[size_t(x)]] * roots[b[size_t(y)]] / roots[b[size_t(g.product(x, y))]];
                    ok       = std::abs(d - psi(x, y)) < 1e-12;
                }
            if(ok) return true;
        }
        return false;
    }
}

TEST_CASE("cocycles of the SU(2) lift") {
    auto a4 = build_a4();
    auto psi = nontrivial_cocycle(a4);
    CHECK(cocycle_residual(psi) < 1e-14);
    CHECK(psi.cls == CocycleClass::Nontrivial);
    auto d2  = find_subgroup(a4, "D2");
    auto pd2 = nontrivial_cocycle(d2.sub);
    CHECK(same_cocycle(pd2, restrict_cocycle(psi, d2)));
    CHECK_FALSE(coboundary_brute_force(pd2));
    CHECK(coboundary_brute_force(trivial_cocycle(d2.sub)));
    // A4 class is nontrivial because its restriction to D2 is.
    CHECK(restrict_cocycle(psi, d2).cls == CocycleClass::Nontrivial);
    CHECK_THROWS_AS(nontrivial_cocycle(find_subgroup(a4, "Z2").sub), Error);
    CHECK_THROWS_AS(nontrivial_cocycle(find_subgroup(a4, "Z3").sub), Error);
    CHECK(trivial_cocycle(a4).cls == CocycleClass::Trivial);
    auto half = spin_half_rep(a4);
    CHECK(projective_residual(half) < 1e-14);
}

TEST_CASE("linear and projective irreps") {
    auto a4   = build_a4();
    auto lin  = irreps(a4, trivial_cocycle(a4));
    CHECK(dims(lin) == std::vector<int>{1, 1, 1, 3});
    CHECK(labels(lin) == std::vector<std::string>{"0", "1", "1*", "3"});
    auto proj = irreps(a4, nontrivial_cocycle(a4));
    CHECK(dims(proj) == std::vector<int>{2, 2, 2});
    CHECK(labels(proj) == std::vector<std::string>{"2", "2'", "2''"});
    auto d2   = find_subgroup(a4, "D2");
    CHECK(dims(irreps(d2.sub, nontrivial_cocycle(d2.sub))) == std::vector<int>{2});
    CHECK(labels(irreps(d2.sub, trivial_cocycle(d2.sub))) == std::vector<std::string>{"0", "x", "y", "z"});
    auto z3 = find_subgroup(a4, "Z3");
    CHECK(labels(irreps(z3.sub, trivial_cocycle(z3.sub))) == std::vector<std::string>{"0", "1", "1*"});
    for(const auto *list : {&lin, &proj}) {
        for(const auto &r : *list) {
            CHECK(projective_residual(r) < 1e-12);
            CHECK(unitarity_residual(r) < 1e-12);
            CHECK(commutant_dimension(r) == 1);
        }
        for(size_t i = 0; i < list->size(); ++i)
            for(size_t j = 0; j < list->size(); ++j)
                CHECK(std::abs(character_inner((*list)[i], (*list)[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
    // Characters of the 3 on the classes {e}, {pi rotations}, {two 3-cycle classes}.
    CHECK(std::abs(lin[3].character(0) - 3.0) < 1e-12);
    for(int g = 1; g < 12; ++g) {
        int ord = element_order(*a4, g);
        CHECK(std::abs(lin[3].character(g) - (ord == 2 ? -1.0 : 0.0)) < 1e-12);
    }
    // Irreps are reproducible for a fixed seed.
    auto again = irreps(a4, nontrivial_cocycle(a4));
    for(size_t i = 0; i < again.size(); ++i)
        for(int g = 0; g < 12; ++g) CHECK(max_abs(Matrix(again[i](g) - proj[i](g))) == 0.0);
}

TEST_CASE("spin-1 is the three-dimensional irrep") {
    auto a4   = build_a4();
    auto lin  = irreps(a4, trivial_cocycle(a4));
    auto spin = spin1_irrep(a4);
    Matrix u  = equivalence_unitary(lin[3], spin);
    for(int g = 0; g < 12; ++g) CHECK(max_abs(Matrix(lin[3](g) * u - u * spin(g))) < 1e-12);
    CHECK_THROWS_AS(equivalence_unitary(lin[1], lin[2]), Error);
}

TEST_CASE("restriction of the 3") {
    auto a4   = build_a4();
    auto spin = spin1_irrep(a4);
    auto lbl  = [](const std::vector<std::pair<ProjRep, int>> &d) {
        std::map<std::string, int> m;
        for(const auto &[r, n] : d) m[r.label] = n;
        return m;
    };
    auto z3 = find_subgroup(a4, "Z3");
    CHECK(lbl(restrict(spin, z3, trivial_cocycle(z3.sub))) == std::map<std::string, int>{{"0", 1}, {"1", 1}, {"1*", 1}});
    auto d2 = find_subgroup(a4, "D2");
    CHECK(lbl(restrict(spin, d2, trivial_cocycle(d2.sub))) == std::map<std::string, int>{{"x", 1}, {"y", 1}, {"z", 1}});
    auto z2 = find_subgroup(a4, "Z2");
    CHECK(lbl(restrict(spin, z2, trivial_cocycle(z2.sub))) == std::map<std::string, int>{{"0", 1}, {"1", 2}});
    CHECK_THROWS_AS(restrict(spin, d2, nontrivial_cocycle(d2.sub)), Error);
}

TEST_CASE("fusion multiplicities and intertwiners") {
    auto a4   = build_a4();
    auto objs = a4_objects(a4);
    // 3 x 3 = 0 + 1 + 1* + 2*3
    std::vector<int> n33;
    for(const auto &c : objs) n33.push_back(fusion_multiplicity(objs[3], objs[3], c));
    CHECK(n33 == std::vector<int>{1, 1, 1, 2});
    auto proj = irreps(a4, nontrivial_cocycle(a4));
    for(const auto &a : proj)
        for(const auto &c : proj) CHECK(fusion_multiplicity(a, objs[3], c) == 1);
    CHECK(fusion_multiplicity(proj[0], objs[3], objs[0]) == 0);
    for(const auto *la : {&objs, &proj})
        for(const auto &a : *la)
            for(const auto &b : objs)
                for(const auto *lc : {&objs, &proj})
                    for(const auto &c : *lc) {
                        int n = fusion_multiplicity(a, b, c);
                        CHECK(n == fusion_multiplicity_character(a, b, c));
                        auto basis = intertwiner_basis(a, b, c);
                        CHECK(basis.multiplicity() == n);
                        CHECK(equivariance_residual(basis, a, b, c) < 1e-12);
                        CHECK(orthogonality_residual(basis) < 1e-12);
                        for(const auto &t : basis.tensors) {
                            CHECK(max_abs(Matrix(t.adjoint() * t - Matrix::Identity(c.dim, c.dim))) < 1e-12);
                            Scalar first = 0;
                            for(int ia = 0; ia < a.dim && first == 0.0; ++ia)
                                for(int ib = 0; ib < b.dim && first == 0.0; ++ib)
                                    for(int ic = 0; ic < c.dim && first == 0.0; ++ic)
                                        if(std::abs(t(ia * b.dim + ib, ic)) > 1e-10) first = t(ia * b.dim + ib, ic);
                            CHECK(std::abs(first.imag()) < 1e-14);
                            CHECK(first.real() > 0);
                        }
                    }
}

TEST_CASE("trivial group intertwiners are the unit vectors") {
    auto a4  = build_a4();
    auto one = find_subgroup(a4, "1");
    auto m   = irreps(one.sub, trivial_cocycle(one.sub));
    REQUIRE(m.size() == 1);
    auto basis = intertwiner_basis(m[0], restriction(spin1_irrep(a4), one), m[0]);
    REQUIRE(basis.multiplicity() == 3);
    for(int i = 0; i < 3; ++i) CHECK(max_abs(Matrix(basis.tensors[size_t(i)] - Matrix::Identity(3, 3).col(i))) < 1e-14);
}

#include <doctest.h>

#include <cmath>
#include <functional>

#include "cdmrg/oracle.hpp"
#include "helpers.hpp"

using namespace cdmrg;
using cdmrg::testing::chain;

namespace {
    long brute_force_count(const ChainHamiltonian &h) {
        const auto &cat = *h.cat;
        const int   nm = cat.num_modules(), p = cat.physical();
        std::function<long(int, int)> rec = [&](int site, int m) -> long {
            if(site == h.length) return m == h.right ? 1 : 0;
            long n = 0;
            for(int m2 = 0; m2 < nm; ++m2) n += cat.n_action(m, p, m2) * rec(site + 1, m2);
            return n;
        };
        return rec(0, h.left);
    }
}

TEST_CASE("basis dimensions") {
    for(int L = 2; L <= 6; ++L) CHECK(basis_dimension(chain(DualModelLabel::Original, L)) == std::pow(3.0, L));
    CHECK(enumerate_basis(chain(DualModelLabel::Original, 5)).dim() == 243);
    CHECK(enumerate_basis(chain(DualModelLabel::RepPsiD2, 4)).dim() == 81);
    auto z3 = enumerate_basis(chain(DualModelLabel::RepZ3, 2));
    CHECK(z3.dim() == 3);
    for(long s = 0; s < 3; ++s) CHECK(z3.sector(s, 1) == s);

    for(const auto &info : dual_labels())
        for(int L = 2; L <= 6; ++L) {
            auto base = chain(info.label, L);
            for(int l = 0; l < base.cat->num_modules(); ++l)
                for(int r = 0; r < base.cat->num_modules(); ++r) {
                    auto h = with_boundaries(base, l, r);
                    long n = brute_force_count(h);
                    CHECK(basis_dimension(h) == double(n));
                    if(L <= 4) CHECK(enumerate_basis(h).dim() == n);
                }
        }
}

TEST_CASE("basis ordering and lookup") {
    auto h     = chain(DualModelLabel::RepA4, 4, 1, 1, 0, 3);
    auto basis = enumerate_basis(h);
    for(long s = 0; s < basis.dim(); ++s) {
        CHECK(basis.find(basis.path(s)) == s);
        CHECK(basis.sector(s, 0) == 0);
        CHECK(basis.sector(s, 4) == 3);
        if(s > 0)
            CHECK(std::lexicographical_compare(basis.path(s - 1), basis.path(s - 1) + basis.stride(), basis.path(s), basis.path(s) + basis.stride()));
    }
    CHECK_THROWS_AS(enumerate_basis(chain(DualModelLabel::Original, 8), 1000), Error);
}

TEST_CASE("assembled Hamiltonians") {
    for(const auto &info : dual_labels()) {
        auto   h     = chain(info.label, 4, -5, 1);
        auto   basis = enumerate_basis(h);
        Matrix H     = Matrix(assemble(h, basis));
        CHECK(hermiticity_residual(H) < 1e-12);
    }
    auto h0 = chain(DualModelLabel::Original, 2, 0, 0);
    auto e0 = ground_and_spectrum(h0, 9);
    CHECK(std::abs(e0.values[0] + 2) < 1e-12);
    for(auto [J1, J2] : {std::pair{1.0, 1.0}, {-2.0, -5.0}, {-5.0, 1.0}}) {
        auto   h  = chain(DualModelLabel::Original, 2, J1, J2);
        auto   ev = full_spectrum(assemble(h, enumerate_basis(h)));
        Matrix h2 = reconstruct(*h.cat, model_coefficients(*h.cat, J1, J2));
        CHECK(sorted_deviation(ev, hermitian_eigenvalues(h2)) < 1e-12);
    }
}

TEST_CASE("pinned L=6 ground energy") {
    auto e = ground_and_spectrum(chain(DualModelLabel::Original, 6), 2);
    CHECK(std::abs(e.values[0] - (-1.1077222247590)) < 1e-10);
    CHECK(std::abs(e.ground.norm() - 1) < 1e-12);
    CHECK(e.residual < 1e-10);
}

TEST_CASE("sparse Lanczos path") {
    auto h     = chain(DualModelLabel::Original, 8);
    auto basis = enumerate_basis(h);
    CHECK(basis.dim() == 6561);
    auto H = assemble(h, basis);
    auto e = ground_and_spectrum(H, 3);
    CHECK(e.residual < 1e-8);
    CHECK(e.values[0] <= e.values[1]);
    CHECK(std::abs(e.ground.norm() - 1) < 1e-12);
    Vector r = H * e.ground - e.values[0] * e.ground;
    CHECK(r.norm() < 1e-8);
}

TEST_CASE("sector relabelling symmetry of abelian duals") {
    for(auto label : {DualModelLabel::RepZ2, DualModelLabel::RepZ3, DualModelLabel::RepD2}) {
        auto base = chain(label, 4, -5, 1);
        auto ref  = full_spectrum(assemble(base, enumerate_basis(base)));
        for(int m = 1; m < base.cat->num_modules(); ++m) {
            auto h = with_boundaries(base, m, m);
            CHECK(sorted_deviation(full_spectrum(assemble(h, enumerate_basis(h))), ref) < 1e-10);
        }
    }
}

TEST_CASE("spectra agree across all duals at L=4") {
    for(auto [J1, J2] : {std::pair{1.0, 1.0}, {-2.0, -5.0}, {-5.0, 1.0}}) {
        auto orig = chain(DualModelLabel::Original, 4, J1, J2);
        auto ref  = full_spectrum(assemble(orig, enumerate_basis(orig)));
        for(const auto &info : dual_labels()) {
            auto                             base = chain(info.label, 4, J1, J2);
            const int                        nm   = base.cat->num_modules();
            std::vector<std::pair<std::vector<double>, int>> parts;
            for(int l = 0; l < nm; ++l)
                for(int r = 0; r < nm; ++r) {
                    auto h = with_boundaries(base, l, r);
                    if(basis_dimension(h) == 0) continue;
                    auto ev = full_spectrum(assemble(h, enumerate_basis(h)));
                    parts.emplace_back(std::move(ev), base.cat->module_dim(l) * base.cat->module_dim(r));
                }
            auto uni = weighted_spectrum_union(parts, base.cat->embedding().sub->order);
            CHECK_MESSAGE(sorted_deviation(uni, ref) < 1e-9, info.display);
        }
    }
}

TEST_CASE("exact entanglement") {
    auto   h     = chain(DualModelLabel::Original, 4);
    auto   basis = enumerate_basis(h);
    Vector e     = Vector::Zero(basis.dim());
    e(17)        = 1;
    for(int cut = 1; cut < 4; ++cut) {
        auto es = exact_entanglement(*h.cat, basis, e, cut);
        REQUIRE(es.values.size() == 1);
        CHECK(std::abs(es.values[0].lambda - 1) < 1e-14);
    }
}

TEST_CASE("SPT point at L=8: open-chain ground state is a triplet") {
    auto h  = chain(DualModelLabel::Original, 8);
    auto gs = ground_and_spectrum(h, 4);
    for(int k = 0; k < 3; ++k) CHECK(gs.values[size_t(k)] == doctest::Approx(-1.244103851585).epsilon(1e-11));
    CHECK(gs.values[3] == doctest::Approx(-1.198361187207).epsilon(1e-11));
    CHECK(gs.residual < 1e-8);
}

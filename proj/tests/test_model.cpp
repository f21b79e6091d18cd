#include <doctest.h>

#include <random>

#include "cdmrg/model.hpp"

using namespace cdmrg;

namespace {
    Matrix random_matrix(int n, std::mt19937_64 &rng) {
        std::normal_distribution<double> nd;
        Matrix                           m(n, n);
        for(int i = 0; i < n; ++i)
            for(int j = 0; j < n; ++j) m(i, j) = Scalar(nd(rng), nd(rng));
        return m;
    }
}

TEST_CASE("spin-1 operators") {
    auto         s = spin1_operators();
    const Scalar I(0, 1);
    CHECK(max_abs(Matrix(s.sx * s.sy - s.sy * s.sx - I * s.sz)) < 1e-15);
    CHECK(max_abs(Matrix(s.sy * s.sz - s.sz * s.sy - I * s.sx)) < 1e-15);
    CHECK(max_abs(Matrix(s.sz * s.sx - s.sx * s.sz - I * s.sy)) < 1e-15);
    CHECK(max_abs(Matrix(s.sx * s.sx + s.sy * s.sy + s.sz * s.sz - 2.0 * Matrix::Identity(3, 3))) < 1e-15);
}

TEST_CASE("local terms") {
    auto t   = build_local_terms();
    auto cat = module_category(DualModelLabel::RepA4);
    CHECK(sorted_deviation(hermitian_eigenvalues(t.h0), {-2, -1, -1, -1, 1, 1, 1, 1, 1}) < 1e-12);
    for(const auto *h : {&t.h0, &t.h1, &t.h2}) {
        CHECK(hermiticity_residual(*h) < 1e-15);
        CHECK(symmetry_residual(*cat, *h) < 1e-12);
    }
    CHECK(std::abs(t.h2.trace()) < 1e-14);
    CHECK(max_abs(Matrix(t.h2.real())) < 1e-15);
    // h2 is not SO(3) invariant: it does not commute with a generic rotation.
    Matrix r = Matrix::Identity(3, 3);
    r(0, 0) = r(1, 1) = std::cos(0.3);
    r(1, 0) = std::sin(0.3);
    r(0, 1) = -std::sin(0.3);
    Matrix rr = kron(r, r);
    CHECK(max_abs(Matrix(rr * t.h0 - t.h0 * rr)) < 1e-12);
    CHECK(max_abs(Matrix(rr * t.h2 - t.h2 * rr)) > 1e-3);
}

TEST_CASE("coefficient extraction") {
    auto cat = module_category(DualModelLabel::RepA4);
    auto t   = build_local_terms();
    auto c0  = extract_coefficients(*cat, t.h0, "h0");
    REQUIRE(c0.blocks.size() == 4);
    CHECK(std::abs(c0.blocks[0](0, 0) + 2.0) < 1e-12);
    CHECK(std::abs(c0.blocks[1](0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(c0.blocks[2](0, 0) - 1.0) < 1e-12);
    CHECK(hermiticity_residual(c0.blocks[3]) < 1e-12);
    CHECK(sorted_deviation(hermitian_eigenvalues(c0.blocks[3]), {-1, 1}) < 1e-12);
    for(const auto *h : {&t.h0, &t.h1, &t.h2}) CHECK(max_abs(Matrix(reconstruct(*cat, extract_coefficients(*cat, *h)) - *h)) < 1e-10);
    auto id = extract_coefficients(*cat, Matrix::Identity(9, 9));
    for(const auto &b : id.blocks) CHECK(max_abs(Matrix(b - Matrix::Identity(b.rows(), b.cols()))) < 1e-12);
    std::mt19937_64 rng(7);
    for(int k = 0; k < 20; ++k) {
        Matrix op = symmetrize(*cat, random_matrix(9, rng));
        CHECK(max_abs(Matrix(reconstruct(*cat, extract_coefficients(*cat, op)) - op)) < 1e-10);
    }
    CHECK_THROWS_AS(extract_coefficients(*cat, random_matrix(9, rng)), Error);
    auto c1 = extract_coefficients(*cat, t.h1), c2 = extract_coefficients(*cat, t.h2);
    auto cm = model_coefficients(*cat, 1.5, -0.5);
    for(size_t v = 0; v < 4; ++v) CHECK(max_abs(Matrix(cm.blocks[v] - (c0.blocks[v] + 1.5 * c1.blocks[v] - 0.5 * c2.blocks[v]))) < 1e-14);
}

TEST_CASE("two-site duality") {
    auto t = build_local_terms();
    for(auto [J1, J2] : {std::pair{1.0, 1.0}, {-2.0, -5.0}, {-5.0, 1.0}}) {
        Matrix h     = t.h0 + J1 * t.h1 + J2 * t.h2;
        auto   exact = hermitian_eigenvalues(h);
        for(const auto &info : dual_labels()) {
            CAPTURE(info.display);
            auto cat = module_category(info.label);
            auto op  = build_dual_operator(model_coefficients(*cat, J1, J2), cat);
            for(int a = 0; a < cat->num_modules(); ++a)
                for(int b = 0; b < cat->num_modules(); ++b)
                    if(!op.block(a, b).empty()) CHECK(hermiticity_residual(op.block(a, b).h) < 1e-12);
            CHECK(sorted_deviation(weighted_two_site_spectrum(op), exact) < 1e-10);
        }
    }
}

TEST_CASE("Original dual operator is the input operator") {
    auto   cat = module_category(DualModelLabel::Original);
    auto   t   = build_local_terms();
    Matrix h   = t.h0 + t.h1 + t.h2;
    auto   op  = build_dual_operator(model_coefficients(*cat, 1, 1), cat);
    CHECK(max_abs(Matrix(op.block(0, 0).h - h)) < 1e-10);
    CHECK(op.block(0, 0).index(0, 2, 1) == 7);
}

TEST_CASE("Rep^psi(D2) bond block") {
    auto cat = module_category(DualModelLabel::RepPsiD2);
    auto op  = build_dual_operator(model_coefficients(*cat, 1, 1), cat);
    CHECK(op.block(0, 0).h.rows() == 9);
    CHECK(op.sector_block(0, 0, 0, 0).rows() == 9);
}

TEST_CASE("label parsing") {
    CHECK(parse_dual_label("Rep^psi(A4)") == DualModelLabel::RepPsiA4);
    CHECK(parse_dual_label("repz3") == DualModelLabel::RepZ3);
    CHECK(parse_dual_label("original") == DualModelLabel::Original);
    try {
        parse_dual_label("Rep(S4)");
        CHECK(false);
    } catch(const Error &e) {
        std::string msg = e.what();
        for(const auto &l : dual_labels()) CHECK(msg.find(l.display) != std::string::npos);
    }
    CHECK_THROWS_AS(validate(ModelSpec{0, 0, 1, DualModelLabel::Original, "", ""}), Error);
    CHECK_THROWS_AS(validate(ModelSpec{0, 0, 4, DualModelLabel::RepZ3, "0", "w"}), Error);
    CHECK_NOTHROW(validate(ModelSpec{0, 0, 4, DualModelLabel::RepZ3, "0", "1*"}));
}

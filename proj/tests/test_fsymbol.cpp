#include <doctest.h>

#include <sstream>

#include "cdmrg/dump.hpp"
#include "cdmrg/model.hpp"

using namespace cdmrg;

TEST_CASE("plain A4 F-symbols") {
    auto         cat = ModuleCategory::regular(build_a4());
    FSymbolTable table(cat);
    const int    n = cat.num_objects();
    for(int a = 0; a < n; ++a)
        for(int b = 0; b < n; ++b)
            for(int c = 0; c < n; ++c)
                for(int d = 0; d < n; ++d) {
                    const auto &blk = table(a, b, c, d);
                    CHECK(blk.F.rows() == blk.F.cols());
                    if(blk.left.empty()) continue;
                    CHECK(unitarity_residual(blk.F) < 1e-12);
                    CHECK(tree_expansion_residual(cat, blk) < 1e-12);
                    if(b == 0) {
                        // trivial object: both trees coincide
                        CHECK(max_abs(Matrix(blk.F - Matrix::Identity(blk.F.rows(), blk.F.cols()))) < 1e-12);
                    }
                }
    CHECK(max_pentagon_residual(table, table) < 1e-10);
}

TEST_CASE("mixed F-symbols for every dual label") {
    auto         plain = ModuleCategory::regular(build_a4());
    FSymbolTable ptable(plain);
    for(const auto &info : dual_labels()) {
        CAPTURE(info.display);
        auto         cat = module_category(info.label);
        FSymbolTable table(*cat);
        for(int a = 0; a < cat->num_modules(); ++a)
            for(int b = 0; b < cat->num_objects(); ++b)
                for(int c = 0; c < cat->num_objects(); ++c)
                    for(int d = 0; d < cat->num_modules(); ++d) {
                        const auto &blk = table(a, b, c, d);
                        if(blk.left.empty()) continue;
                        CHECK(unitarity_residual(blk.F) < 1e-12);
                        CHECK(tree_expansion_residual(*cat, blk) < 1e-12);
                    }
        CHECK(max_pentagon_residual(table, ptable) < 1e-10);
    }
}

TEST_CASE("module categories of the dual labels") {
    auto count = [](DualModelLabel l) { return module_category(l)->num_modules(); };
    CHECK(count(DualModelLabel::Original) == 1);
    CHECK(count(DualModelLabel::RepZ2) == 2);
    CHECK(count(DualModelLabel::RepZ3) == 3);
    CHECK(count(DualModelLabel::RepD2) == 4);
    CHECK(count(DualModelLabel::RepPsiD2) == 1);
    CHECK(count(DualModelLabel::RepA4) == 4);
    CHECK(count(DualModelLabel::RepPsiA4) == 3);
    auto psd2 = module_category(DualModelLabel::RepPsiD2);
    CHECK(psd2->module_dim(0) == 2);
    CHECK(psd2->n_action(0, psd2->physical(), 0) == 3);
    auto orig = module_category(DualModelLabel::Original);
    CHECK(orig->n_action(0, orig->physical(), 0) == 3);
}

TEST_CASE("category dump") {
    std::ostringstream os;
    dump_category(os, *module_category(DualModelLabel::RepPsiD2));
    auto text = os.str();
    CHECK(text.find("subgroup D2") != std::string::npos);
    CHECK(text.find("2 x 3 -> 3*2") != std::string::npos);
    CHECK(text.find("F[2 3 3 -> 2]") != std::string::npos);
}

#include <doctest.h>

#include <set>

#include "cdmrg/group.hpp"
#include "cdmrg/linalg.hpp"

using namespace cdmrg;

namespace {
    // Independent subgroup count: every subset containing the identity that is closed under products.
    std::set<std::vector<int>> brute_force_subgroups(const GroupData &g) {
        std::set<std::vector<int>> out;
        for(unsigned mask = 0; mask < (1u << g.order); ++mask) {
            if(!(mask & 1u << g.identity)) continue;
            bool closed = true;
            for(int a = 0; a < g.order && closed; ++a)
                for(int b = 0; b < g.order && closed; ++b)
                    if((mask >> a & 1u) && (mask >> b & 1u)) closed = mask >> g.product(a, b) & 1u;
            if(!closed) continue;
            std::vector<int> s;
            for(int a = 0; a < g.order; ++a)
                if(mask >> a & 1u) s.push_back(a);
            out.insert(s);
        }
        return out;
    }
}

TEST_CASE("A4 multiplication table") {
    auto a4 = build_a4();
    CHECK(a4->order == 12);
    CHECK(a4->identity == 0);
    CHECK_NOTHROW(validate_group(*a4));
    std::multiset<int> orders;
    for(int x = 0; x < 12; ++x) orders.insert(element_order(*a4, x));
    CHECK(orders.count(1) == 1);
    CHECK(orders.count(2) == 3);
    CHECK(orders.count(3) == 8);
    CHECK(conjugacy_classes(*a4).size() == 4);
    for(const auto &r : a4->rotation) {
        CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(r.determinant() == doctest::Approx(1.0));
    }
    int cyc = a4_axis_cycle(*a4);
    CHECK(element_order(*a4, cyc) == 3);
}

TEST_CASE("make_group rejects a non-group table") {
    CHECK_THROWS_AS(make_group("bad", 2, {0, 1, 1, 1}), Error);
    CHECK_THROWS_AS(make_group("bad", 2, {0, 1}), Error);
}

TEST_CASE("subgroup enumeration matches brute force") {
    auto a4   = build_a4();
    auto all  = brute_force_subgroups(*a4);
    CHECK(all.size() == 10); // 1 + 3 Z2 + 4 Z3 + D2 + A4
    auto reps = enumerate_subgroups(a4);
    REQUIRE(reps.size() == 5);
    std::vector<std::string> names;
    for(const auto &e : reps) {
        names.push_back(e.sub->name);
        CHECK(homomorphism_residual(e) == 0);
        CHECK(all.count(e.map) == 1);
        CHECK(e.sub->identity == 0);
    }
    CHECK(names == std::vector<std::string>{"1", "Z2", "Z3", "D2", "A4"});
    // D2 is the normal subgroup of pi rotations about the coordinate axes.
    auto d2 = find_subgroup(a4, "D2");
    for(const auto &r : d2.sub->rotation) CHECK((r - Eigen::Matrix3d(r.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0);
    CHECK_THROWS_AS(find_subgroup(a4, "Z4"), Error);
}

TEST_CASE("kron index convention") {
    Matrix a = Matrix::Random(2, 3), b = Matrix::Random(3, 2);
    Matrix k = kron(a, b);
    CHECK(std::abs(k(1 * 3 + 2, 2 * 2 + 1) - a(1, 2) * b(2, 1)) < 1e-15);
}

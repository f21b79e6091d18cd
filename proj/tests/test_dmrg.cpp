#include <doctest.h>

#include <fstream>
#include <random>

#include "cdmrg/dmrg.hpp"
#include "cdmrg/oracle.hpp"
#include "helpers.hpp"

using namespace cdmrg;
using cdmrg::testing::chain;

namespace {
    Vector random_vector(Eigen::Index n, std::uint64_t seed) {
        std::mt19937_64                  rng(seed);
        std::normal_distribution<double> nd;
        Vector                           v(n);
        for(Eigen::Index i = 0; i < n; ++i) v(i) = Scalar(nd(rng), nd(rng));
        return v;
    }

    double dense_energy(const ChainHamiltonian &h, const ConstrainedMps &mps) {
        auto   basis = enumerate_basis(h);
        Vector psi   = to_dense(mps, basis);
        return psi.dot(assemble(h, basis) * psi).real() / psi.squaredNorm();
    }

    // Map from the two-site block space at `site` into the path basis, with the other tensors fixed.
    Matrix embedding_matrix(const ConstrainedMps &mps, const TwoSiteLayout &layout, const ConstrainedBasis &basis) {
        const int i = layout.site, L = mps.length();
        Matrix    P = Matrix::Zero(basis.dim(), layout.size);
        for(long s = 0; s < basis.dim(); ++s) {
            Matrix left = Matrix::Ones(1, 1);
            for(int k = 0; k < i; ++k) left = left * mps.sites[size_t(k)].blocks.at({basis.sector(s, k), basis.sector(s, k + 1), basis.mult(s, k)});
            Matrix right = Matrix::Ones(1, 1);
            for(int k = L - 1; k > i + 1; --k) right = mps.sites[size_t(k)].blocks.at({basis.sector(s, k), basis.sector(s, k + 1), basis.mult(s, k)}) * right;
            const auto *sec = layout.find(basis.sector(s, i + 1));
            const auto *r   = sec->rows.find(basis.sector(s, i), basis.mult(s, i));
            const auto *c   = sec->cols.find(basis.sector(s, i + 2), basis.mult(s, i + 1));
            for(int a = 0; a < r->dim; ++a)
                for(int b = 0; b < c->dim; ++b) {
                    const Eigen::Index col = sec->offset + Eigen::Index(c->offset + b) * sec->rows.size + r->offset + a;
                    P(s, col)              = left(0, a) * right(b, 0);
                }
        }
        return P;
    }

    ConstrainedMps canonical_random(const ChainHamiltonian &h, int bond, std::uint64_t seed, int center) {
        auto mps = random_init(h, bond, seed);
        canonicalize(mps, center);
        return mps;
    }

    DmrgConfig tight() {
        DmrgConfig cfg;
        cfg.lambda_min = 1e-10;
        cfg.energy_tol = 1e-11;
        cfg.eig_tol    = 1e-9;
        return cfg;
    }
}

TEST_CASE("two-site block") {
    auto h   = chain(DualModelLabel::RepA4, 4, 1, 1, 0, 3);
    auto mps = canonical_random(h, 3, 21, 1);
    auto lay = two_site_layout(mps, 1);
    auto th  = two_site_block(mps, lay);
    const int p = h.physical();
    int       paths = 0;
    for(const auto &[m1, d1] : mps.bonds[1].sectors)
        for(const auto &[m3, d3] : mps.bonds[3].sectors)
            for(int m2 = 0; m2 < h.cat->num_modules(); ++m2)
                for(int a = 0; a < h.cat->n_action(m1, p, m2); ++a)
                    for(int b = 0; b < h.cat->n_action(m2, p, m3); ++b) {
                        ++paths;
                        const auto *sec = lay.find(m2);
                        REQUIRE(sec != nullptr);
                        const auto *r = sec->rows.find(m1, a);
                        const auto *c = sec->cols.find(m3, b);
                        REQUIRE(r != nullptr);
                        REQUIRE(c != nullptr);
                        Matrix ref = Matrix::Zero(d1, d3);
                        auto   ia  = mps.sites[1].blocks.find({m1, m2, a});
                        auto   ib  = mps.sites[2].blocks.find({m2, m3, b});
                        if(ia != mps.sites[1].blocks.end() && ib != mps.sites[2].blocks.end()) ref = ia->second * ib->second;
                        CHECK(max_abs(Matrix(sector_view(th, *sec).block(r->offset, c->offset, d1, d3) - ref)) < 1e-13);
                    }
    int parts = 0;
    for(const auto &s : lay.sectors)
        for(const auto &r : s.rows.parts)
            for(const auto &c : s.cols.parts) parts += (r.dim > 0 && c.dim > 0);
    CHECK(parts == paths);

    DmrgConfig cfg;
    cfg.lambda_min = 0;
    auto copy      = mps;
    auto split     = split_truncate(copy, lay, th / th.norm(), cfg, Direction::LeftToRight);
    CHECK(split.discarded_weight < 1e-15);
    CHECK_NOTHROW(validate(copy));
    CHECK(left_isometry_residual(copy, 1) < 1e-12);
    Vector back = two_site_block(copy, two_site_layout(copy, 1));
    CHECK((back - th / th.norm()).norm() < 1e-12);
}

TEST_CASE("effective Hamiltonian on two sites is the bond operator") {
    for(const auto &info : dual_labels()) {
        auto   h     = chain(info.label, 2, -2, -5);
        auto   mps   = canonical_random(h, 2, 1, 0);
        auto   env   = build_environment(h, mps);
        auto   heff  = effective_hamiltonian(h, mps, env, 0);
        auto   basis = enumerate_basis(h);
        Matrix P     = embedding_matrix(mps, heff.layout(), basis);
        Matrix H     = Matrix(assemble(h, basis));
        CHECK(max_abs(Matrix(P.adjoint() * P - Matrix::Identity(P.cols(), P.cols()))) < 1e-13);
        CHECK(max_abs(Matrix(heff.dense() - P.adjoint() * H * P)) < 1e-12);
    }
}

TEST_CASE("effective Hamiltonian is Hermitian") {
    for(auto label : {DualModelLabel::Original, DualModelLabel::RepD2, DualModelLabel::RepPsiA4}) {
        auto h   = chain(label, 6, -5, 1);
        auto mps = canonical_random(h, 4, 8, 2);
        auto env = build_environment(h, mps);
        auto he  = effective_hamiltonian(h, mps, env, 2);
        auto b1  = random_vector(he.layout().size, 1);
        auto b2  = random_vector(he.layout().size, 2);
        CHECK(std::abs(b1.dot(he.apply(b2)) - std::conj(b2.dot(he.apply(b1)))) < 1e-12 * b1.norm() * b2.norm() * 10);
    }
}

TEST_CASE("effective Hamiltonian in the environment gauge") {
    auto h     = chain(DualModelLabel::RepZ3, 4, 1, 1);
    auto basis = enumerate_basis(h);
    Matrix H   = Matrix(assemble(h, basis));
    for(int site = 0; site < 3; ++site) {
        auto mps  = canonical_random(h, 3, 4, site);
        auto env  = build_environment(h, mps);
        auto heff = effective_hamiltonian(h, mps, env, site);
        Matrix P  = embedding_matrix(mps, heff.layout(), basis);
        CHECK(max_abs(Matrix(P.adjoint() * P - Matrix::Identity(P.cols(), P.cols()))) < 1e-12);
        CHECK(max_abs(Matrix(heff.dense() - P.adjoint() * H * P)) < 1e-10);
    }
}

TEST_CASE("environment consistency against dense energies") {
    for(const auto &info : dual_labels()) {
        auto   h   = chain(info.label, 5, -5, 1, 0, info.label == DualModelLabel::RepD2 ? 1 : 0);
        auto   mps = random_init(h, 3, 17);
        double ref = dense_energy(h, mps);
        CHECK(std::abs(energy_expectation(h, mps) - ref) < 1e-10);
        for(int c = 0; c < 4; ++c) {
            auto   m    = mps;
            canonicalize(m, c);
            auto   env  = build_environment(h, m);
            auto   heff = effective_hamiltonian(h, m, env, c);
            Vector th   = two_site_block(m, heff.layout());
            CHECK(std::abs(th.dot(heff.apply(th)).real() - ref) < 1e-10);
        }
    }
}

TEST_CASE("Lanczos ground pairs") {
    KrylovOptions opt;
    auto          id = lowest_eigenpair([](const Vector &v) { return v; }, random_vector(20, 3), opt);
    CHECK(std::abs(id.value - 1) < 1e-14);
    CHECK(id.converged);

    std::mt19937_64 rng(5);
    for(int n : {5, 40, 120}) {
        Matrix a = Matrix::Zero(n, n);
        std::normal_distribution<double> nd;
        for(int i = 0; i < n; ++i)
            for(int j = 0; j < n; ++j) a(i, j) = Scalar(nd(rng), nd(rng));
        Matrix hm = (a + a.adjoint()) * 0.5;
        opt.tol      = 1e-12;
        opt.max_iter = 2000;
        auto pair    = lowest_eigenpair([&](const Vector &v) { return Vector(hm * v); }, random_vector(n, 9), opt);
        CHECK(std::abs(pair.value - hermitian_eigenvalues(hm)[0]) < 1e-10);
    }
    CHECK_THROWS_AS(lowest_eigenpair([](const Vector &v) { return v; }, Vector(), opt), Error);
}

TEST_CASE("split and truncation accounting") {
    auto h   = chain(DualModelLabel::RepD2, 6, -5, 1, 0, 1);
    auto mps = canonical_random(h, 6, 2, 2);
    auto lay = two_site_layout(mps, 2);
    Vector th = random_vector(lay.size, 4);
    th.normalize();
    DmrgConfig cfg;
    cfg.lambda_min = 0.3;
    auto copy      = mps;
    auto res       = split_truncate(copy, lay, th, cfg, Direction::RightToLeft);
    CHECK(res.kept > 0);
    CHECK(res.discarded_weight > 0);
    CHECK(std::abs(res.spectrum.weighted_norm(*h.cat) + res.discarded_weight - 1) < 1e-12);
    CHECK(right_isometry_residual(copy, 3) < 1e-12);
    CHECK(copy.center == 2);
    Vector trunc = two_site_block(copy, lay) * std::sqrt(1 - res.discarded_weight);
    CHECK(std::abs((th - trunc).squaredNorm() - res.discarded_weight) < 1e-12);
    for(const auto &v : res.spectrum.values) CHECK(v.lambda * std::sqrt(h.cat->module_dim(v.sector)) >= 0.3 * res.spectrum.values[0].lambda - 1e-12);

    Vector rank1 = Vector::Zero(lay.size);
    const auto &s = lay.sectors.front();
    Eigen::Map<Matrix>(rank1.data() + s.offset, s.rows.size, s.cols.size) = Vector::Ones(s.rows.size) * Vector::Ones(s.cols.size).transpose();
    rank1.normalize();
    auto copy1 = mps;
    auto r1    = split_truncate(copy1, lay, rank1, DmrgConfig{}, Direction::LeftToRight);
    REQUIRE(r1.spectrum.values.size() == 1);
    CHECK(std::abs(r1.spectrum.values[0].lambda * std::sqrt(h.cat->module_dim(s.mid)) - 1) < 1e-12);

    cfg.lambda_min = 0.999;
    Vector two     = Vector::Zero(lay.size);
    two(0)         = 1;
    auto copy2     = mps;
    CHECK_NOTHROW(split_truncate(copy2, lay, two, cfg, Direction::LeftToRight));
    CHECK_THROWS_AS(split_truncate(copy2, lay, Vector::Zero(lay.size), cfg, Direction::LeftToRight), Error);
}

TEST_CASE("degenerate multiplets are kept whole") {
    auto h   = chain(DualModelLabel::Original, 4);
    auto mps = canonical_random(h, 9, 3, 1);
    auto lay = two_site_layout(mps, 1);
    REQUIRE(lay.sectors.size() == 1);
    const auto &s = lay.sectors[0];
    Matrix      m = Matrix::Zero(s.rows.size, s.cols.size);
    m(0, 0)       = 1.0;
    m(1, 1) = m(2, 2) = 0.5;
    Vector th(lay.size);
    Eigen::Map<Matrix>(th.data(), s.rows.size, s.cols.size) = m;
    th.normalize();
    DmrgConfig cfg;
    cfg.lambda_min          = 0.4;
    cfg.max_bond_per_sector = 2;
    auto capped             = mps;
    CHECK(split_truncate(capped, lay, th, cfg, Direction::LeftToRight).kept == 2);
    cfg.max_bond_per_sector = 10;
    auto copy               = mps;
    CHECK(split_truncate(copy, lay, th, cfg, Direction::LeftToRight).kept == 3);
}

TEST_CASE("DMRG ground energies") {
    DmrgConfig cfg = tight();
    auto       r2  = run(chain(DualModelLabel::Original, 2, 0, 0), cfg);
    CHECK(std::abs(r2.energy + 2) < 1e-10);

    for(auto [J1, J2] : {std::pair{1.0, 1.0}, {-2.0, -5.0}, {-5.0, 1.0}}) {
        auto   orig = chain(DualModelLabel::Original, 8, J1, J2);
        double ed   = ground_and_spectrum(orig, 1).values[0];
        auto   r    = run(orig, cfg);
        CHECK(r.converged);
        CHECK(std::abs(r.energy - ed) < 1e-8);
        CHECK_NOTHROW(validate(r.mps));
        for(size_t k = 1; k < r.history.size(); ++k) CHECK(r.history[k].energy <= r.history[k - 1].energy + 1e-9);
        for(const auto &info : dual_labels()) {
            auto scan = scan_boundaries(chain(info.label, 8, J1, J2), cfg);
            CHECK_MESSAGE(std::abs(scan.best.energy - ed) < 1e-8, info.display);
            for(auto [l, rr, e] : scan.energies) {
                auto hb = chain(info.label, 8, J1, J2, l, rr);
                CHECK(e >= ground_and_spectrum(hb, 1).values[0] - 1e-9);
            }
        }
    }
}

TEST_CASE("DMRG state against the exact entanglement spectrum") {
    auto h     = chain(DualModelLabel::RepA4, 8, 1, 1, 0, 3);
    auto basis = enumerate_basis(h);
    auto ed    = ground_and_spectrum(assemble(h, basis), 2);
    REQUIRE(ed.values[1] - ed.values[0] > 1e-3);
    auto r     = run(h, tight());
    auto a     = entanglement_spectrum(r.mps, 4);
    auto b     = exact_entanglement(*h.cat, basis, ed.ground, 4);
    size_t n   = 0;
    for(const auto &v : b.values)
        if(v.lambda > 1e-5) ++n;
    REQUIRE(a.values.size() >= n);
    for(size_t k = 0; k < n; ++k) {
        CHECK(a.values[k].sector == b.values[k].sector);
        CHECK(std::abs(a.values[k].lambda - b.values[k].lambda) < 1e-6);
    }
}

TEST_CASE("intertwined ground states keep their energy") {
    for(const auto &info : dual_labels()) {
        auto   dual  = chain(info.label, 6, -5, 1);
        auto   scan  = scan_boundaries(dual, tight());
        auto   orig  = chain(DualModelLabel::Original, 6, -5, 1);
        auto   mapped = intertwine_to_original(scan.best.mps);
        CHECK(std::abs(energy_expectation(orig, mapped) - scan.best.energy) < 1e-8);
        auto   basis = enumerate_basis(orig);
        Matrix cols  = to_dense_open(mapped, basis);
        auto   H     = assemble(orig, basis);
        const double scale = cols.colwise().norm().maxCoeff();
        for(Eigen::Index k = 0; k < cols.cols(); ++k) {
            Vector v = cols.col(k);
            if(v.norm() < 1e-4 * scale) continue;
            CHECK(std::abs(v.dot(H * v).real() / v.squaredNorm() - scan.best.energy) < 1e-6);
        }
        const int d0 = dual.cat->module_dim(scan.left), dl = dual.cat->module_dim(scan.right);
        auto      closed = project_boundary(mapped, d0 - 1, dl - 1);
        CHECK(std::abs(energy_expectation(orig, closed) - scan.best.energy) < 1e-6);
    }
}

TEST_CASE("deterministic runs") {
    auto h   = chain(DualModelLabel::RepPsiA4, 10, -2, -5);
    auto cfg = DmrgConfig{};
    cfg.lambda_min = 1e-5;
    cfg.seed       = 99;
    auto a         = run(h, cfg);
    auto b         = run(h, cfg);
    CHECK(a.energy == b.energy);
    CHECK(a.sweeps == b.sweeps);
    REQUIRE(a.mps.bonds == b.mps.bonds);
    for(int i = 0; i < 10; ++i)
        for(const auto &[key, blk] : a.mps.sites[size_t(i)].blocks) CHECK(blk == b.mps.sites[size_t(i)].blocks.at(key));

    auto path = std::filesystem::temp_directory_path() / "cdmrg_tests";
    std::filesystem::create_directories(path);
    write_report_csv(path / "report.csv", a.history);
    std::ifstream is(path / "report.csv");
    std::string   header;
    std::getline(is, header);
    CHECK(header == "sweep,direction,energy,variance,discarded_weight,total_bond_dim,matvecs,seconds");
    int rows = 0;
    for(std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == static_cast<int>(a.history.size()));
}

TEST_CASE("initial-state bias and configuration checks") {
    auto h   = chain(DualModelLabel::RepZ3, 6);
    auto mps = random_init(h, 2, 1, {1});
    for(int i = 1; i < 5; ++i)
        for(const auto &[key, blk] : mps.sites[size_t(i)].blocks)
            if(key.left == 1 || key.right == 1) CHECK(blk.norm() == 0.0);
    DmrgConfig bad;
    bad.lambda_min = 1.5;
    CHECK_THROWS_AS(validate(bad), Error);
    bad            = DmrgConfig{};
    bad.energy_tol = 0;
    CHECK_THROWS_AS(validate(bad), Error);
    DmrgConfig cfg;
    cfg.bias = {"nope"};
    CHECK_THROWS_AS(run(h, cfg), Error);
}

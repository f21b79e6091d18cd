#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "cdmrg/linalg.hpp"

namespace cdmrg {

struct KrylovOptions {
    double        tol          = 1e-10; // residual <= tol * max(1, |E|)
    int           max_iter     = 200;   // total matrix-vector products
    int           krylov_dim   = 30;
    int           max_restarts = 3;     // random restarts after a zero start vector
    std::uint64_t seed         = 1;
};

struct EigenPair {
    double value     = 0.0;
    Vector vector;
    double residual  = 0.0;
    int    matvecs   = 0;
    bool   converged = false;
};

/// Lowest eigenpair of a Hermitian operator by restarted Lanczos with full reorthogonalization.
/// Restarts from the current Ritz vector; the search stays orthogonal to `deflate`.
template <class Apply>
EigenPair lowest_eigenpair(Apply &&apply, Vector v0, const KrylovOptions &opt, const std::vector<Vector> &deflate = {}) {
    const Eigen::Index n = v0.size();
    if(n == 0) throw Error("lowest_eigenpair: empty problem");
    auto project = [&](Vector &v) {
        for(int pass = 0; pass < 2; ++pass)
            for(const auto &d : deflate) v -= d * d.dot(v);
    };
    std::mt19937_64 rng(opt.seed);
    auto            random_vector = [&]() {
        std::normal_distribution<double> nd;
        Vector                           r(n);
        for(Eigen::Index i = 0; i < n; ++i) r(i) = Scalar(nd(rng), nd(rng));
        return r;
    };
    project(v0);
    int restarts = 0;
    while(v0.norm() < 1e-14) {
        if(restarts++ >= opt.max_restarts) throw Error("lowest_eigenpair: start vector vanishes after restarts");
        v0 = random_vector();
        project(v0);
    }
    const int m_cap = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, n - static_cast<Eigen::Index>(deflate.size())));
    EigenPair out;
    out.vector = v0.normalized();
    std::vector<Vector> basis;
    basis.reserve(size_t(std::max(1, m_cap)));
    while(true) {
        basis.clear();
        basis.push_back(out.vector);
        std::vector<double> alpha, beta;
        Vector              ritz_coeffs;
        bool                done = false;
        for(int j = 0;; ++j) {
            Vector w = apply(basis[size_t(j)]);
            ++out.matvecs;
            alpha.push_back(basis[size_t(j)].dot(w).real());
            for(int pass = 0; pass < 2; ++pass) {
                for(const auto &b : basis) w -= b * b.dot(w);
                for(const auto &d : deflate) w -= d * d.dot(w);
            }
            const double b = w.norm();
            const int    k = j + 1;
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
            for(int i = 0; i < k; ++i) {
                t(i, i) = alpha[size_t(i)];
                if(i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[size_t(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            out.value     = es.eigenvalues()(0);
            ritz_coeffs   = es.eigenvectors().col(0).cast<Scalar>();
            out.residual  = b * std::abs(es.eigenvectors()(k - 1, 0));
            const double scale = std::max(1.0, std::abs(out.value));
            if(out.residual <= opt.tol * scale || b <= 1e-14 * scale) {
                out.converged = true;
                done          = true;
                break;
            }
            if(out.matvecs >= opt.max_iter || k >= m_cap) break;
            beta.push_back(b);
            basis.push_back(w / b);
        }
        Vector x = Vector::Zero(n);
        for(size_t i = 0; i < basis.size(); ++i) x += ritz_coeffs(static_cast<Eigen::Index>(i)) * basis[i];
        out.vector = x.normalized();
        if(done || out.matvecs >= opt.max_iter) return out;
    }
}

}

#include "cdmrg/intertwiner.hpp"

#include <cmath>

#include <fmt/format.h>

namespace cdmrg {

namespace {
    bool cocycles_match(const ProjRep &a, const ProjRep &b, const ProjRep &c) {
        if(a.group->order != c.group->order || b.group->order != c.group->order) throw Error("intertwiner: different groups");
        for(size_t i = 0; i < c.cocycle.values.size(); ++i)
            if(std::abs(a.cocycle.values[i] * b.cocycle.values[i] - c.cocycle.values[i]) > 1e-12) return false;
        return true;
    }

    void fix_phase(Matrix &t, int db) {
        const int da = static_cast<int>(t.rows()) / db;
        for(int ia = 0; ia < da; ++ia)
            for(int ib = 0; ib < db; ++ib)
                for(int ic = 0; ic < t.cols(); ++ic) {
                    Scalar x = t(ia * db + ib, ic);
                    if(std::abs(x) > 1e-10) {
                        t *= std::conj(x) / std::abs(x);
                        return;
                    }
                }
    }
}

int fusion_multiplicity(const ProjRep &a, const ProjRep &b, const ProjRep &c) {
    if(!cocycles_match(a, b, c)) return 0;
    const int n = a.dim * b.dim;
    Matrix    q = Matrix::Zero(n, n);
    for(int g = 0; g < c.group->order; ++g) q += std::conj(c.character(g)) * kron(a(g), b(g));
    q *= double(c.dim) / c.group->order;
    auto      ev   = hermitian_eigenvalues(Matrix((q + q.adjoint()) * 0.5));
    int       rank = 0;
    for(double x : ev) rank += x > 0.5;
    if(rank % c.dim != 0) throw Error("fusion_multiplicity: isotypic rank is not a multiple of the target dimension");
    return rank / c.dim;
}

int fusion_multiplicity_character(const ProjRep &a, const ProjRep &b, const ProjRep &c) {
    if(!cocycles_match(a, b, c)) return 0;
    Scalar s = 0;
    for(int g = 0; g < c.group->order; ++g) s += a.character(g) * b.character(g) * std::conj(c.character(g));
    return static_cast<int>(std::lround(s.real() / c.group->order));
}

IntertwinerBasis intertwiner_basis(const ProjRep &a, const ProjRep &b, const ProjRep &c) {
    IntertwinerBasis out{a.dim, b.dim, c.dim, a.label, b.label, c.label, {}};
    if(!cocycles_match(a, b, c)) return out;
    const int n   = a.dim * b.dim;
    const int dim = n * c.dim;
    // vec(T) column-major; T -> (a (x) b)(g) T c(g)^dag is conj(c(g)) (x) (a (x) b)(g) on vec(T).
    Matrix p = Matrix::Zero(dim, dim);
    for(int g = 0; g < c.group->order; ++g) p += kron(c(g).conjugate(), kron(a(g), b(g)));
    p /= double(c.group->order);
    const int           mult = fusion_multiplicity(a, b, c);
    std::vector<Vector> basis;
    Matrix              rest = p;
    for(int k = 0; k < mult; ++k) {
        RealVector   norms = rest.colwise().norm();
        const double top   = norms.maxCoeff();
        Eigen::Index pick  = 0;
        for(Eigen::Index i = 0; i < norms.size(); ++i)
            if(norms(i) >= top - 1e-12) {
                pick = i;
                break;
            }
        if(top < 1e-8) throw Error(fmt::format("intertwiner_basis: projector rank below multiplicity for {} x {} -> {}", a.label, b.label, c.label));
        Vector v = rest.col(pick) / top;
        for(const auto &u : basis) v -= u * u.dot(v);
        v.normalize();
        basis.push_back(v);
        rest -= v * (v.adjoint() * rest);
    }
    for(auto &v : basis) {
        Matrix t = Eigen::Map<Matrix>(v.data(), n, c.dim) * std::sqrt(double(c.dim));
        fix_phase(t, b.dim);
        out.tensors.push_back(std::move(t));
    }
    return out;
}

double equivariance_residual(const IntertwinerBasis &basis, const ProjRep &a, const ProjRep &b, const ProjRep &c) {
    double res = 0;
    for(const auto &t : basis.tensors)
        for(int g = 0; g < c.group->order; ++g) res = std::max(res, max_abs(Matrix(kron(a(g), b(g)) * t - t * c(g))));
    return res;
}

double orthogonality_residual(const IntertwinerBasis &basis) {
    double res = 0;
    for(size_t i = 0; i < basis.tensors.size(); ++i)
        for(size_t j = 0; j < basis.tensors.size(); ++j) {
            Scalar ip = (basis.tensors[i].adjoint() * basis.tensors[j]).trace();
            res       = std::max(res, std::abs(ip - (i == j ? double(basis.dc) : 0.0)));
        }
    return res;
}

}

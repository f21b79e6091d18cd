#include "cdmrg/fsymbol.hpp"

#include <fmt/format.h>

namespace cdmrg {

Matrix left_tree(const ModuleCategory &cat, int m1, int v2, int v3, int m4, const TreeIndex &t) {
    const auto &ti = cat.action(m1, v2, t.mid).tensors.at(static_cast<size_t>(t.first));
    const auto &tj = cat.action(t.mid, v3, m4).tensors.at(static_cast<size_t>(t.second));
    return kron(ti, Matrix::Identity(cat.object_dim(v3), cat.object_dim(v3))) * tj;
}

Matrix right_tree(const ModuleCategory &cat, int m1, int v2, int v3, int m4, const TreeIndex &t) {
    const auto &tk = cat.fusion(v2, v3, t.mid).tensors.at(static_cast<size_t>(t.first));
    const auto &tl = cat.action(m1, t.mid, m4).tensors.at(static_cast<size_t>(t.second));
    return kron(Matrix::Identity(cat.module_dim(m1), cat.module_dim(m1)), tk) * tl;
}

FSymbolBlock f_symbols(const ModuleCategory &cat, int m1, int v2, int v3, int m4) {
    FSymbolBlock b;
    b.m1 = m1, b.v2 = v2, b.v3 = v3, b.m4 = m4;
    for(int m5 = 0; m5 < cat.num_modules(); ++m5) {
        b.left_start.push_back(static_cast<int>(b.left.size()));
        const int ni = cat.n_action(m1, v2, m5), nj = cat.n_action(m5, v3, m4);
        for(int i = 0; i < ni; ++i)
            for(int j = 0; j < nj; ++j) b.left.push_back({m5, i, j});
    }
    for(int v6 = 0; v6 < cat.num_objects(); ++v6) {
        b.right_start.push_back(static_cast<int>(b.right.size()));
        const int nk = cat.n_fusion(v2, v3, v6), nl = cat.n_action(m1, v6, m4);
        for(int k = 0; k < nk; ++k)
            for(int l = 0; l < nl; ++l) b.right.push_back({v6, k, l});
    }
    if(b.left.size() != b.right.size())
        throw Error(fmt::format("f_symbols: tree counts differ ({} vs {})", b.left.size(), b.right.size()));
    const auto n = static_cast<Eigen::Index>(b.left.size());
    b.F          = Matrix::Zero(n, n);
    std::vector<Matrix> rt;
    for(const auto &r : b.right) rt.push_back(right_tree(cat, m1, v2, v3, m4, r));
    const double d4 = cat.module_dim(m4);
    for(Eigen::Index l = 0; l < n; ++l) {
        Matrix lt = left_tree(cat, m1, v2, v3, m4, b.left[static_cast<size_t>(l)]);
        for(Eigen::Index r = 0; r < n; ++r) b.F(l, r) = (rt[static_cast<size_t>(r)].adjoint() * lt).trace() / d4;
    }
    return b;
}

double tree_expansion_residual(const ModuleCategory &cat, const FSymbolBlock &block) {
    double res = 0;
    for(size_t l = 0; l < block.left.size(); ++l) {
        Matrix diff = left_tree(cat, block.m1, block.v2, block.v3, block.m4, block.left[l]);
        for(size_t r = 0; r < block.right.size(); ++r)
            diff -= block.F(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r)) *
                    right_tree(cat, block.m1, block.v2, block.v3, block.m4, block.right[r]);
        res = std::max(res, max_abs(diff));
    }
    return res;
}

FSymbolTable::FSymbolTable(const ModuleCategory &cat) : cat_(&cat) {
    const int nm = cat.num_modules(), nv = cat.num_objects();
    blocks_.reserve(static_cast<size_t>(nm * nv * nv * nm));
    for(int a = 0; a < nm; ++a)
        for(int b = 0; b < nv; ++b)
            for(int c = 0; c < nv; ++c)
                for(int d = 0; d < nm; ++d) blocks_.push_back(f_symbols(cat, a, b, c, d));
}

const FSymbolBlock &FSymbolTable::operator()(int m1, int v2, int v3, int m4) const {
    const int nm = cat_->num_modules(), nv = cat_->num_objects();
    return blocks_[static_cast<size_t>(((m1 * nv + v2) * nv + v3) * nm + m4)];
}

double pentagon_residual(const FSymbolTable &mixed, const FSymbolTable &plain, int a, int b, int c, int d, int e) {
    const ModuleCategory &mc = mixed.category();
    const int             nm = mc.num_modules(), nv = mc.num_objects();
    auto                  NA = [&](int m1, int v, int m2) { return mc.n_action(m1, v, m2); };
    auto                  NF = [&](int v1, int v2, int v3) { return mc.n_fusion(v1, v2, v3); };
    double                res = 0;
    for(int f = 0; f < nm; ++f)
        for(int g = 0; g < nm; ++g)
            for(int h = 0; h < nv; ++h)
                for(int k = 0; k < nv; ++k) {
                    const auto &Ffcd = mixed(f, c, d, e);
                    const auto &Fabh = mixed(a, b, h, e);
                    const auto &Fabc = mixed(a, b, c, g);
                    const auto &Fbcd = plain(b, c, d, k);
                    for(int al = 0; al < NA(a, b, f); ++al)
                        for(int be = 0; be < NA(f, c, g); ++be)
                            for(int ga = 0; ga < NA(g, d, e); ++ga)
                                for(int ep = 0; ep < NF(c, d, h); ++ep)
                                    for(int mu = 0; mu < NF(b, h, k); ++mu)
                                        for(int nu = 0; nu < NA(a, k, e); ++nu) {
                                            Scalar lhs = 0;
                                            for(int de = 0; de < NA(f, h, e); ++de)
                                                lhs += Ffcd.F(Ffcd.row(g, be, ga, NA(g, d, e)), Ffcd.col(h, ep, de, NA(f, h, e))) *
                                                       Fabh.F(Fabh.row(f, al, de, NA(f, h, e)), Fabh.col(k, mu, nu, NA(a, k, e)));
                                            Scalar rhs = 0;
                                            for(int m = 0; m < nv; ++m) {
                                                const auto &Famd = mixed(a, m, d, e);
                                                for(int rh = 0; rh < NF(b, c, m); ++rh)
                                                    for(int si = 0; si < NA(a, m, g); ++si)
                                                        for(int ta = 0; ta < NF(m, d, k); ++ta)
                                                            rhs += Fabc.F(Fabc.row(f, al, be, NA(f, c, g)), Fabc.col(m, rh, si, NA(a, m, g))) *
                                                                   Famd.F(Famd.row(g, si, ga, NA(g, d, e)), Famd.col(k, ta, nu, NA(a, k, e))) *
                                                                   Fbcd.F(Fbcd.row(m, rh, ta, NF(m, d, k)), Fbcd.col(h, ep, mu, NF(b, h, k)));
                                            }
                                            res = std::max(res, std::abs(lhs - rhs));
                                        }
                }
    return res;
}

double max_pentagon_residual(const FSymbolTable &mixed, const FSymbolTable &plain) {
    const int nm = mixed.category().num_modules(), nv = mixed.category().num_objects();
    double    res = 0;
    for(int a = 0; a < nm; ++a)
        for(int b = 0; b < nv; ++b)
            for(int c = 0; c < nv; ++c)
                for(int d = 0; d < nv; ++d)
                    for(int e = 0; e < nm; ++e) res = std::max(res, pentagon_residual(mixed, plain, a, b, c, d, e));
    return res;
}

}

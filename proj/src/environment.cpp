#include <fmt/format.h>

#include "cdmrg/dmrg.hpp"

namespace cdmrg {

namespace {
    using BlockRef = std::pair<BlockKey, const Matrix *>;

    std::vector<BlockRef> block_list(const MpsTensor &t) {
        std::vector<BlockRef> out;
        for(const auto &[key, m] : t.blocks) out.emplace_back(key, &m);
        return out;
    }
}

SectorMatrices zero_environment(const SectorSpace &bond) {
    SectorMatrices out;
    for(const auto &[m, d] : bond.sectors) out[m] = Matrix::Zero(d, d);
    return out;
}

SectorMatrices left_block_operator(const ChainHamiltonian &h, const ConstrainedMps &mps, const SectorMatrices &hl, int site) {
    const auto    &cat = *mps.cat;
    const int      nm = cat.num_modules(), p = cat.physical();
    const auto    &bond = mps.bonds[size_t(site)];
    SectorMatrices out;
    std::map<int, Grouping> groups;
    for(int m2 = 0; m2 < nm; ++m2) {
        Grouping g = left_grouping(cat, bond, m2);
        if(g.size == 0) continue;
        Matrix e = Matrix::Zero(g.size, g.size);
        for(const auto &part : g.parts) {
            auto it = hl.find(part.sector);
            if(it != hl.end()) e.block(part.offset, part.offset, part.dim, part.dim) += it->second;
        }
        out[m2]    = std::move(e);
        groups[m2] = std::move(g);
    }
    if(site == 0) return out;
    const auto &term   = h.term(site - 1);
    auto        blocks = block_list(mps.sites[size_t(site - 1)]);
    for(const auto &[kp, xp] : blocks)
        for(const auto &[k, x] : blocks) {
            if(kp.left != k.left) continue;
            const Matrix pm = xp->adjoint() * *x;
            for(auto &[m2, e] : out) {
                const auto &blk = term.block(k.left, m2);
                if(blk.empty()) continue;
                const int   na = cat.n_action(k.right, p, m2), nap = cat.n_action(kp.right, p, m2);
                const auto &g  = groups.at(m2);
                for(int ap = 0; ap < nap; ++ap)
                    for(int a = 0; a < na; ++a) {
                        const Scalar v = blk.h(blk.index(kp.right, kp.mult, ap), blk.index(k.right, k.mult, a));
                        if(v == Scalar(0)) continue;
                        const auto *rp = g.find(kp.right, ap);
                        const auto *r  = g.find(k.right, a);
                        e.block(rp->offset, r->offset, rp->dim, r->dim) += v * pm;
                    }
            }
        }
    return out;
}

SectorMatrices right_block_operator(const ChainHamiltonian &h, const ConstrainedMps &mps, const SectorMatrices &hr, int site) {
    const auto    &cat = *mps.cat;
    const int      nm = cat.num_modules(), p = cat.physical(), L = mps.length();
    const auto    &bond = mps.bonds[size_t(site + 1)];
    SectorMatrices out;
    std::map<int, Grouping> groups;
    for(int m2 = 0; m2 < nm; ++m2) {
        Grouping g = right_grouping(cat, m2, bond);
        if(g.size == 0) continue;
        Matrix e = Matrix::Zero(g.size, g.size);
        for(const auto &part : g.parts) {
            auto it = hr.find(part.sector);
            if(it != hr.end()) e.block(part.offset, part.offset, part.dim, part.dim) += it->second;
        }
        out[m2]    = std::move(e);
        groups[m2] = std::move(g);
    }
    if(site + 1 >= L) return out;
    const auto &term   = h.term(site);
    auto        blocks = block_list(mps.sites[size_t(site + 1)]);
    for(const auto &[kp, yp] : blocks)
        for(const auto &[k, y] : blocks) {
            if(kp.right != k.right) continue;
            const Matrix q = yp->conjugate() * y->transpose();
            for(auto &[m2, e] : out) {
                const auto &blk = term.block(m2, k.right);
                if(blk.empty()) continue;
                const int   nb = cat.n_action(m2, p, k.left), nbp = cat.n_action(m2, p, kp.left);
                const auto &g  = groups.at(m2);
                for(int bp = 0; bp < nbp; ++bp)
                    for(int b = 0; b < nb; ++b) {
                        const Scalar v = blk.h(blk.index(kp.left, bp, kp.mult), blk.index(k.left, b, k.mult));
                        if(v == Scalar(0)) continue;
                        const auto *cp = g.find(kp.left, bp);
                        const auto *c  = g.find(k.left, b);
                        e.block(cp->offset, c->offset, cp->dim, c->dim) += v * q;
                    }
            }
        }
    return out;
}

SectorMatrices grow_left(const ConstrainedMps &mps, const SectorMatrices &el, int site) {
    SectorMatrices out;
    for(const auto &[m2, d2] : mps.bonds[size_t(site + 1)].sectors) {
        Matrix a = group_left(mps.sites[size_t(site)], left_grouping(*mps.cat, mps.bonds[size_t(site)], m2), m2, d2);
        out[m2]  = a.adjoint() * el.at(m2) * a;
    }
    return out;
}

SectorMatrices grow_right(const ConstrainedMps &mps, const SectorMatrices &er, int site) {
    SectorMatrices out;
    for(const auto &[m1, d1] : mps.bonds[size_t(site)].sectors) {
        Matrix b = group_right(mps.sites[size_t(site)], right_grouping(*mps.cat, m1, mps.bonds[size_t(site + 1)]), m1, d1);
        out[m1]  = b.conjugate() * er.at(m1) * b.transpose();
    }
    return out;
}

Environment build_environment(const ChainHamiltonian &h, const ConstrainedMps &mps) {
    const int L = mps.length(), c = mps.center;
    if(c < 0 || c >= L) throw Error("build_environment: the MPS has no orthogonality center");
    Environment env;
    env.left.resize(size_t(L + 1));
    env.right.resize(size_t(L + 1));
    env.left[0]        = zero_environment(mps.bonds.front());
    env.right[size_t(L)] = zero_environment(mps.bonds.back());
    for(int b = 0; b < c; ++b) env.left[size_t(b + 1)] = grow_left(mps, left_block_operator(h, mps, env.left[size_t(b)], b), b);
    for(int j = L - 1; j >= c + 2; --j) env.right[size_t(j)] = grow_right(mps, right_block_operator(h, mps, env.right[size_t(j + 1)], j), j);
    return env;
}

double energy_expectation(const ChainHamiltonian &h, const ConstrainedMps &mps) {
    const int L = mps.length();
    if(L < 2) return 0.0;
    ConstrainedMps c = mps;
    canonicalize(c, L - 2);
    auto   env   = build_environment(h, c);
    auto   heff  = effective_hamiltonian(h, c, env, L - 2);
    Vector theta = two_site_block(c, heff.layout());
    return theta.dot(heff.apply(theta)).real() / theta.squaredNorm();
}

}

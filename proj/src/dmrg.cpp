#include "cdmrg/dmrg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

namespace cdmrg {

void validate(const DmrgConfig &cfg) {
    if(!(cfg.lambda_min >= 0 && cfg.lambda_min < 1)) throw Error(fmt::format("dmrg: lambda_min must lie in [0, 1), got {}", cfg.lambda_min));
    if(cfg.max_bond_per_sector < 1) throw Error("dmrg: max_bond_per_sector must be positive");
    if(cfg.max_sweeps < 1 || cfg.min_sweeps < 1) throw Error("dmrg: sweep counts must be positive");
    if(!(cfg.energy_tol > 0) || !(cfg.eig_tol > 0)) throw Error("dmrg: tolerances must be positive");
    if(cfg.eig_max_iter < 1 || cfg.krylov_dim < 2) throw Error("dmrg: eigensolver limits must be positive");
    if(cfg.init_bond < 1) throw Error("dmrg: init_bond must be positive");
}

const TwoSiteLayout::Sector *TwoSiteLayout::find(int mid) const {
    for(const auto &s : sectors)
        if(s.mid == mid) return &s;
    return nullptr;
}

TwoSiteLayout two_site_layout(const ConstrainedMps &mps, int site) {
    if(site < 0 || site + 1 >= mps.length()) throw Error("two_site_layout: site out of range");
    TwoSiteLayout out;
    out.site = site;
    for(int mid = 0; mid < mps.cat->num_modules(); ++mid) {
        TwoSiteLayout::Sector s;
        s.mid  = mid;
        s.rows = left_grouping(*mps.cat, mps.bonds[size_t(site)], mid);
        s.cols = right_grouping(*mps.cat, mid, mps.bonds[size_t(site + 2)]);
        if(s.rows.size == 0 || s.cols.size == 0) continue;
        s.offset = out.size;
        out.size += Eigen::Index(s.rows.size) * s.cols.size;
        out.sectors.push_back(std::move(s));
    }
    return out;
}

Eigen::Map<const Matrix> sector_view(const Vector &theta, const TwoSiteLayout::Sector &s) {
    return {theta.data() + s.offset, s.rows.size, s.cols.size};
}

namespace {
    Eigen::Map<Matrix> sector_view_mut(Vector &theta, const TwoSiteLayout::Sector &s) { return {theta.data() + s.offset, s.rows.size, s.cols.size}; }
}

Vector two_site_block(const ConstrainedMps &mps, const TwoSiteLayout &layout) {
    Vector    theta = Vector::Zero(layout.size);
    const int i     = layout.site;
    for(const auto &s : layout.sectors) {
        const int d = mps.bonds[size_t(i + 1)].dim(s.mid);
        if(d == 0) continue;
        sector_view_mut(theta, s) = group_left(mps.sites[size_t(i)], s.rows, s.mid, d) * group_right(mps.sites[size_t(i + 1)], s.cols, s.mid, d);
    }
    return theta;
}

EffectiveHamiltonian::EffectiveHamiltonian(const ChainHamiltonian &h, TwoSiteLayout layout, SectorMatrices left, SectorMatrices right)
    : layout_(std::move(layout)), left_(std::move(left)), right_(std::move(right)) {
    const auto &term = h.term(layout_.site);
    for(size_t si = 0; si < layout_.sectors.size(); ++si) {
        const auto &s = layout_.sectors[si];
        for(const auto &pr : s.rows.parts)
            for(const auto &pc : s.cols.parts) {
                const auto &blk = term.block(pr.sector, pc.sector);
                const int   col = blk.index(s.mid, pr.mult, pc.mult);
                for(Eigen::Index r = 0; r < blk.h.rows(); ++r) {
                    const Scalar v = blk.h(r, col);
                    if(std::abs(v) < 1e-14) continue;
                    const auto &st = blk.basis[size_t(r)];
                    size_t      ti = 0;
                    while(layout_.sectors[ti].mid != st.mid) ++ti;
                    const auto &t  = layout_.sectors[ti];
                    const auto *tr = t.rows.find(pr.sector, st.first);
                    const auto *tc = t.cols.find(pc.sector, st.second);
                    center_.push_back({static_cast<int>(si), static_cast<int>(ti), pr.offset, pc.offset, tr->offset, tc->offset, pr.dim, pc.dim, v});
                }
            }
    }
}

Vector EffectiveHamiltonian::apply(const Vector &theta) const {
    Vector out(theta.size());
    for(const auto &s : layout_.sectors) {
        auto t                    = sector_view(theta, s);
        auto o                    = sector_view_mut(out, s);
        o.noalias()               = left_.at(s.mid) * t;
        o.noalias()              += t * right_.at(s.mid).transpose();
    }
    for(const auto &c : center_) {
        auto t = sector_view(theta, layout_.sectors[size_t(c.from)]);
        auto o = sector_view_mut(out, layout_.sectors[size_t(c.to)]);
        o.block(c.to_row, c.to_col, c.rows, c.cols) += c.value * t.block(c.from_row, c.from_col, c.rows, c.cols);
    }
    return out;
}

Matrix EffectiveHamiltonian::dense() const {
    const Eigen::Index n = layout_.size;
    Matrix             out(n, n);
    for(Eigen::Index j = 0; j < n; ++j) out.col(j) = apply(Vector::Unit(n, j));
    return out;
}

EffectiveHamiltonian effective_hamiltonian(const ChainHamiltonian &h, const ConstrainedMps &mps, const Environment &env, int site) {
    return {h, two_site_layout(mps, site), left_block_operator(h, mps, env.left[size_t(site)], site),
            right_block_operator(h, mps, env.right[size_t(site + 2)], site + 1)};
}

EigenPair solve_ground(const EffectiveHamiltonian &heff, const Vector &theta0, const DmrgConfig &cfg) {
    KrylovOptions opt;
    opt.tol        = cfg.eig_tol;
    opt.max_iter   = cfg.eig_max_iter;
    opt.krylov_dim = cfg.krylov_dim;
    opt.seed       = cfg.seed;
    return lowest_eigenpair([&](const Vector &v) { return heff.apply(v); }, theta0, opt);
}

SplitResult split_truncate(ConstrainedMps &mps, const TwoSiteLayout &layout, const Vector &theta, const DmrgConfig &cfg, Direction dir) {
    struct Part {
        const TwoSiteLayout::Sector *sector;
        Matrix                        u, v;
        RealVector                    s;
        int                           keep = 0;
    };
    std::vector<Part> parts;
    double            total = 0, smax = 0;
    for(const auto &s : layout.sectors) {
        Eigen::BDCSVD<Matrix> svd(sector_view(theta, s), Eigen::ComputeThinU | Eigen::ComputeThinV);
        Part                  p{&s, svd.matrixU(), svd.matrixV(), svd.singularValues()};
        total += p.s.squaredNorm();
        if(p.s.size() > 0) smax = std::max(smax, p.s(0));
        parts.push_back(std::move(p));
    }
    if(total <= 0) throw Error("split_truncate: two-site block vanishes");
    const double thr = cfg.lambda_min * smax;
    double       edge = smax;
    for(auto &p : parts) {
        const int cap = std::min<int>(static_cast<int>(p.s.size()), cfg.max_bond_per_sector);
        while(p.keep < cap && p.s(p.keep) >= thr && p.s(p.keep) > 0) ++p.keep;
        if(p.keep > 0) edge = std::min(edge, p.s(p.keep - 1));
    }
    for(auto &p : parts) {
        const int cap = std::min<int>(static_cast<int>(p.s.size()), cfg.max_bond_per_sector);
        while(p.keep < cap && p.s(p.keep) > 0 && edge - p.s(p.keep) <= 1e-12 * smax) ++p.keep;
    }
    double kept2 = 0;
    int    kept  = 0;
    for(const auto &p : parts) {
        kept2 += p.s.head(p.keep).squaredNorm();
        kept += p.keep;
    }
    if(kept == 0) throw Error("split_truncate: every singular value fell below lambda_min");
    SplitResult out;
    out.kept             = kept;
    out.discarded_weight = std::max(0.0, (total - kept2) / total);
    const int i          = layout.site;
    auto     &a          = mps.sites[size_t(i)];
    auto     &b          = mps.sites[size_t(i + 1)];
    a.blocks.clear();
    b.blocks.clear();
    SectorSpace bond;
    std::vector<std::pair<int, RealVector>> sv;
    const double renorm = 1.0 / std::sqrt(kept2);
    for(const auto &p : parts) {
        if(p.keep == 0) continue;
        const int  m = p.sector->mid, k = p.keep;
        RealVector s = p.s.head(k) * renorm;
        Matrix     u = p.u.leftCols(k), vh = p.v.leftCols(k).adjoint();
        if(dir == Direction::LeftToRight)
            vh = s.cast<Scalar>().asDiagonal() * vh;
        else
            u = u * s.cast<Scalar>().asDiagonal();
        scatter_left(a, p.sector->rows, m, u);
        scatter_right(b, p.sector->cols, m, vh);
        bond.set(m, k);
        sv.emplace_back(m, p.s.head(k));
    }
    mps.bonds[size_t(i + 1)] = bond;
    mps.center               = dir == Direction::LeftToRight ? i + 1 : i;
    out.spectrum = spectrum_from_singular_values(*mps.cat, i + 1, sv);
    for(auto &v : out.spectrum.values) v.lambda *= std::sqrt(kept2 / total);
    return out;
}

DmrgResult run(const ChainHamiltonian &h, const DmrgConfig &cfg, const ConstrainedMps *init) {
    validate(cfg);
    const int L = h.length;
    if(L < 2) throw Error("dmrg: the chain needs at least two sites");
    DmrgResult res;
    if(init) {
        if(init->length() != L || init->left_sector() != h.left || init->right_sector() != h.right || init->cat != h.cat)
            throw Error("dmrg: initial state does not match the chain");
        res.mps = *init;
    } else {
        std::vector<int> bias;
        for(const auto &b : cfg.bias) bias.push_back(h.cat->find_module(b));
        res.mps = random_init(h, cfg.init_bond, cfg.seed, bias);
    }
    auto &mps = res.mps;
    canonicalize(mps, 0);
    Environment env = build_environment(h, mps);
    double      previous = 0;
    for(int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        for(Direction dir : {Direction::LeftToRight, Direction::RightToLeft}) {
            const auto  t0 = std::chrono::steady_clock::now();
            SweepReport rep;
            rep.sweep     = sweep;
            rep.direction = dir;
            for(int step = 0; step < L - 1; ++step) {
                const int i    = dir == Direction::LeftToRight ? step : L - 2 - step;
                auto      heff = effective_hamiltonian(h, mps, env, i);
                Vector    th0  = two_site_block(mps, heff.layout());
                EigenPair gs;
                try {
                    gs = solve_ground(heff, th0, cfg);
                } catch(const Error &e) {
                    throw Error(fmt::format("dmrg: sweep {} at sites ({}, {}): {}", sweep, i, i + 1, e.what()));
                }
                rep.matvecs += gs.matvecs;
                rep.eig_converged = rep.eig_converged && gs.converged;
                rep.variance      = std::max(rep.variance, gs.residual * gs.residual);
                auto split        = split_truncate(mps, heff.layout(), gs.vector, cfg, dir);
                rep.discarded_weight = std::max(rep.discarded_weight, split.discarded_weight);
                rep.energy           = gs.value;
                if(dir == Direction::LeftToRight)
                    env.left[size_t(i + 1)] = grow_left(mps, heff.left(), i);
                else
                    env.right[size_t(i + 1)] = grow_right(mps, heff.right(), i + 1);
            }
            rep.mid_bond       = mps.bonds[size_t(mid_site(L) + 1)];
            rep.total_bond_dim = rep.mid_bond.total();
            rep.seconds        = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            res.history.push_back(rep);
            if(cfg.observer) cfg.observer(rep);
        }
        res.sweeps       = sweep;
        const double cur   = res.history.back().energy;
        const double noise = std::max(res.history.back().discarded_weight, res.history[res.history.size() - 2].discarded_weight) * std::max(1.0, std::abs(cur));
        if(sweep >= cfg.min_sweeps && std::abs(cur - previous) < std::max(cfg.energy_tol, noise)) {
            res.converged = true;
            break;
        }
        previous = cur;
    }
    res.energy = energy_expectation(h, mps);
    return res;
}

DmrgResult run(const ModelSpec &spec, const DmrgConfig &cfg) { return run(hamiltonian_terms(spec), cfg); }

namespace {
    bool reachable(const ModuleCategory &cat, int length, int left, int right) {
        const int           nm = cat.num_modules(), p = cat.physical();
        std::vector<bool>   cur(size_t(nm), false);
        cur[size_t(left)] = true;
        for(int i = 0; i < length; ++i) {
            std::vector<bool> next(size_t(nm), false);
            for(int a = 0; a < nm; ++a)
                for(int b = 0; b < nm; ++b)
                    if(cur[size_t(a)] && cat.n_action(a, p, b) > 0) next[size_t(b)] = true;
            cur = std::move(next);
        }
        return cur[size_t(right)];
    }
}

BoundaryScan scan_boundaries(const ChainHamiltonian &h, const DmrgConfig &cfg, double degeneracy_tol,
                             const std::map<std::pair<int, int>, ConstrainedMps> *warm, std::map<std::pair<int, int>, ConstrainedMps> *states) {
    const int    nm = h.cat->num_modules();
    BoundaryScan scan;
    bool         have = false;
    std::size_t  best_mem = 0;
    for(int right = 0; right < nm; ++right) {
        if(!reachable(*h.cat, h.length, h.left, right)) continue;
        const ConstrainedMps *init = nullptr;
        if(warm) {
            auto it = warm->find({h.left, right});
            if(it == warm->end()) continue;
            init = &it->second;
        }
        DmrgResult r = run(with_boundaries(h, h.left, right), cfg, init);
        scan.energies.emplace_back(h.left, right, r.energy);
        const std::size_t mem = mid_memory_bytes(r.mps);
        if(states) (*states)[{h.left, right}] = r.mps;
        const bool better = !have || r.energy < scan.best.energy - degeneracy_tol ||
                            (std::abs(r.energy - scan.best.energy) <= degeneracy_tol && mem < best_mem);
        if(better) {
            scan.best  = std::move(r);
            scan.left  = h.left;
            scan.right = right;
            best_mem   = mem;
            have       = true;
        }
    }
    if(!have) throw Error("scan_boundaries: no boundary pair to scan");
    return scan;
}

void write_report_csv(const std::filesystem::path &path, const std::vector<SweepReport> &history) {
    auto out = fmt::output_file(path.string());
    out.print("sweep,direction,energy,variance,discarded_weight,total_bond_dim,matvecs,seconds\n");
    for(const auto &r : history)
        out.print("{},{},{:.17g},{:.17g},{:.17g},{},{},{:.6f}\n", r.sweep, r.direction == Direction::LeftToRight ? "LR" : "RL", r.energy, r.variance,
                  r.discarded_weight, r.total_bond_dim, r.matvecs, r.seconds);
}

}

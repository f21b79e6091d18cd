#include "cdmrg/mps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <fmt/os.h>

namespace cdmrg {

int SectorSpace::dim(int m) const {
    for(const auto &[s, d] : sectors)
        if(s == m) return d;
    return 0;
}

int SectorSpace::total() const {
    int t = 0;
    for(const auto &[s, d] : sectors) t += d;
    return t;
}

void SectorSpace::set(int m, int d) {
    auto it = std::lower_bound(sectors.begin(), sectors.end(), m, [](const auto &p, int v) { return p.first < v; });
    if(it != sectors.end() && it->first == m) {
        if(d > 0)
            it->second = d;
        else
            sectors.erase(it);
    } else if(d > 0) {
        sectors.insert(it, {m, d});
    }
}

void validate(const ConstrainedMps &mps) {
    const int L = mps.length();
    if(L < 1 || static_cast<int>(mps.bonds.size()) != L + 1) throw Error("mps: bond count does not match length");
    if(mps.bonds.front().sectors.size() != 1 || mps.bonds.back().sectors.size() != 1)
        throw Error("mps: boundary bonds must carry a single sector");
    const int p = mps.physical();
    for(int i = 0; i < L; ++i)
        for(const auto &[key, m] : mps.sites[size_t(i)].blocks) {
            const int d1 = mps.bonds[size_t(i)].dim(key.left), d2 = mps.bonds[size_t(i + 1)].dim(key.right);
            if(d1 == 0 || d2 == 0) throw Error(fmt::format("mps: site {} block on a sector absent from its bond", i));
            if(key.mult < 0 || key.mult >= mps.cat->n_action(key.left, p, key.right))
                throw Error(fmt::format("mps: site {} has an inadmissible block ({}, {}, {})", i, mps.cat->module_label(key.left),
                                        mps.cat->module_label(key.right), key.mult));
            if(m.rows() != d1 || m.cols() != d2) throw Error(fmt::format("mps: site {} block shape does not match bonds", i));
        }
}

std::vector<SectorSpace> admissible_bonds(const ModuleCategory &cat, int length, int left, int right, const std::vector<int> &budget) {
    const int nm = cat.num_modules(), p = cat.physical();
    if(static_cast<int>(budget.size()) != nm) throw Error("admissible_bonds: budget must list every sector");
    const double                     cap = 1e15;
    std::vector<std::vector<double>> nl(size_t(length + 1), std::vector<double>(size_t(nm), 0.0)), nr = nl;
    nl[0][size_t(left)]      = 1;
    nr[size_t(length)][size_t(right)] = 1;
    for(int b = 0; b < length; ++b)
        for(int m1 = 0; m1 < nm; ++m1)
            for(int m2 = 0; m2 < nm; ++m2)
                nl[size_t(b + 1)][size_t(m2)] = std::min(cap, nl[size_t(b + 1)][size_t(m2)] + nl[size_t(b)][size_t(m1)] * cat.n_action(m1, p, m2));
    for(int b = length; b > 0; --b)
        for(int m1 = 0; m1 < nm; ++m1)
            for(int m2 = 0; m2 < nm; ++m2)
                nr[size_t(b - 1)][size_t(m1)] = std::min(cap, nr[size_t(b - 1)][size_t(m1)] + cat.n_action(m1, p, m2) * nr[size_t(b)][size_t(m2)]);
    std::vector<SectorSpace> bonds(size_t(length + 1));
    for(int b = 0; b <= length; ++b) {
        for(int m = 0; m < nm; ++m) {
            double n = std::min(nl[size_t(b)][size_t(m)], nr[size_t(b)][size_t(m)]);
            if(n <= 0) continue;
            int d = (b == 0 || b == length) ? 1 : static_cast<int>(std::min<double>(budget[size_t(m)], n));
            bonds[size_t(b)].set(m, d);
        }
        if(bonds[size_t(b)].sectors.empty())
            throw Error(fmt::format("no admissible fusion path from sector {} to sector {} over {} sites (bond {} is empty)",
                                    cat.module_label(left), cat.module_label(right), length, b));
    }
    return bonds;
}

ConstrainedMps random_init(const ChainHamiltonian &h, const std::vector<int> &budget, std::uint64_t seed, const std::vector<int> &bias) {
    ConstrainedMps mps;
    mps.cat   = h.cat;
    mps.label = h.dual;
    mps.bonds = admissible_bonds(*h.cat, h.length, h.left, h.right, budget);
    mps.sites.resize(size_t(h.length));
    std::mt19937_64                  rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int                        p = h.physical();
    for(int i = 0; i < h.length; ++i) {
        const auto &lb = mps.bonds[size_t(i)];
        const auto &rb = mps.bonds[size_t(i + 1)];
        for(const auto &[m1, d1] : lb.sectors)
            for(const auto &[m2, d2] : rb.sectors) {
                const int n = h.cat->n_action(m1, p, m2);
                for(int a = 0; a < n; ++a) {
                    Matrix       blk(d1, d2);
                    const double s = 1.0 / std::sqrt(3.0 * d1);
                    for(int r = 0; r < d1; ++r)
                        for(int c = 0; c < d2; ++c) blk(r, c) = Scalar(nd(rng), nd(rng)) * s;
                    bool zero = (i > 0 && std::count(bias.begin(), bias.end(), m1)) || (i + 1 < h.length && std::count(bias.begin(), bias.end(), m2));
                    if(zero) blk.setZero();
                    mps.sites[size_t(i)].blocks[{m1, m2, a}] = std::move(blk);
                }
            }
    }
    validate(mps);
    return mps;
}

ConstrainedMps random_init(const ChainHamiltonian &h, int budget_per_sector, std::uint64_t seed, const std::vector<int> &bias) {
    return random_init(h, std::vector<int>(size_t(h.cat->num_modules()), budget_per_sector), seed, bias);
}

const Grouping::Part *Grouping::find(int sector, int mult) const {
    for(const auto &p : parts)
        if(p.sector == sector && p.mult == mult) return &p;
    return nullptr;
}

Grouping left_grouping(const ModuleCategory &cat, const SectorSpace &left_bond, int m2) {
    Grouping  g;
    const int p = cat.physical();
    for(const auto &[m1, d1] : left_bond.sectors) {
        const int n = cat.n_action(m1, p, m2);
        for(int a = 0; a < n; ++a) {
            g.parts.push_back({m1, a, g.size, d1});
            g.size += d1;
        }
    }
    return g;
}

Grouping right_grouping(const ModuleCategory &cat, int m1, const SectorSpace &right_bond) {
    Grouping  g;
    const int p = cat.physical();
    for(const auto &[m3, d3] : right_bond.sectors) {
        const int n = cat.n_action(m1, p, m3);
        for(int b = 0; b < n; ++b) {
            g.parts.push_back({m3, b, g.size, d3});
            g.size += d3;
        }
    }
    return g;
}

Matrix group_left(const MpsTensor &t, const Grouping &g, int m2, int d2) {
    Matrix out = Matrix::Zero(g.size, d2);
    for(const auto &p : g.parts) {
        auto it = t.blocks.find({p.sector, m2, p.mult});
        if(it != t.blocks.end()) out.middleRows(p.offset, p.dim) = it->second;
    }
    return out;
}

Matrix group_right(const MpsTensor &t, const Grouping &g, int m1, int d1) {
    Matrix out = Matrix::Zero(d1, g.size);
    for(const auto &p : g.parts) {
        auto it = t.blocks.find({m1, p.sector, p.mult});
        if(it != t.blocks.end()) out.middleCols(p.offset, p.dim) = it->second;
    }
    return out;
}

void scatter_left(MpsTensor &t, const Grouping &g, int m2, const Matrix &m) {
    for(const auto &p : g.parts) t.blocks[{p.sector, m2, p.mult}] = m.middleRows(p.offset, p.dim);
}

void scatter_right(MpsTensor &t, const Grouping &g, int m1, const Matrix &m) {
    for(const auto &p : g.parts) t.blocks[{m1, p.sector, p.mult}] = m.middleCols(p.offset, p.dim);
}

namespace {
    void erase_sector(MpsTensor &t, int sector, bool as_left) {
        for(auto it = t.blocks.begin(); it != t.blocks.end();) {
            if((as_left ? it->first.left : it->first.right) == sector)
                it = t.blocks.erase(it);
            else
                ++it;
        }
    }

    // Thin QR with a real positive diagonal of R.
    std::pair<Matrix, Matrix> positive_qr(const Matrix &a) {
        const Eigen::Index          r = std::min(a.rows(), a.cols());
        Eigen::HouseholderQR<Matrix> qr(a);
        Matrix                       q   = qr.householderQ() * Matrix::Identity(a.rows(), r);
        Matrix                       rr  = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
        for(Eigen::Index i = 0; i < r; ++i) {
            Scalar d = rr(i, i);
            if(std::abs(d) < 1e-300) continue;
            Scalar ph = d / std::abs(d);
            rr.row(i) *= std::conj(ph);
            q.col(i) *= ph;
        }
        return {q, rr};
    }
}

namespace {
    void left_step(ConstrainedMps &mps, int i) {
        auto &site    = mps.sites[size_t(i)];
        auto &next    = mps.sites[size_t(i + 1)];
        auto  sectors = mps.bonds[size_t(i + 1)].sectors;
        for(const auto &[m2, d2] : sectors) {
            Grouping g = left_grouping(*mps.cat, mps.bonds[size_t(i)], m2);
            if(g.size == 0) {
                erase_sector(site, m2, false);
                erase_sector(next, m2, true);
                mps.bonds[size_t(i + 1)].set(m2, 0);
                continue;
            }
            auto [q, r] = positive_qr(group_left(site, g, m2, d2));
            erase_sector(site, m2, false);
            scatter_left(site, g, m2, q);
            for(auto &[key, blk] : next.blocks)
                if(key.left == m2) blk = r * blk;
            mps.bonds[size_t(i + 1)].set(m2, static_cast<int>(q.cols()));
        }
    }
}

void canonicalize_left(ConstrainedMps &mps, int up_to) {
    const int L = mps.length();
    if(up_to < 0 || up_to >= L) throw Error("canonicalize_left: center out of range");
    for(int i = 0; i < up_to; ++i) left_step(mps, i);
    mps.center = up_to;
}

void canonicalize_right(ConstrainedMps &mps, int down_to) {
    const int L = mps.length();
    if(down_to < 0 || down_to >= L) throw Error("canonicalize_right: center out of range");
    for(int i = L - 1; i > down_to; --i) {
        auto &site    = mps.sites[size_t(i)];
        auto &prev    = mps.sites[size_t(i - 1)];
        auto  sectors = mps.bonds[size_t(i)].sectors;
        for(const auto &[m1, d1] : sectors) {
            Grouping g = right_grouping(*mps.cat, m1, mps.bonds[size_t(i + 1)]);
            if(g.size == 0) {
                erase_sector(site, m1, true);
                erase_sector(prev, m1, false);
                mps.bonds[size_t(i)].set(m1, 0);
                continue;
            }
            auto [q, r] = positive_qr(group_right(site, g, m1, d1).adjoint());
            erase_sector(site, m1, true);
            scatter_right(site, g, m1, q.adjoint());
            Matrix l = r.adjoint();
            for(auto &[key, blk] : prev.blocks)
                if(key.right == m1) blk = blk * l;
            mps.bonds[size_t(i)].set(m1, static_cast<int>(q.cols()));
        }
    }
    mps.center = down_to;
}

void canonicalize(ConstrainedMps &mps, int center) {
    canonicalize_left(mps, center);
    canonicalize_right(mps, center);
    double n = 0;
    for(const auto &[key, blk] : mps.sites[size_t(center)].blocks) n += blk.squaredNorm();
    n = std::sqrt(n);
    if(n == 0) throw Error("canonicalize: state has zero norm");
    for(auto &[key, blk] : mps.sites[size_t(center)].blocks) blk /= n;
}

double norm(const ConstrainedMps &mps) {
    std::map<int, Matrix> rho;
    for(const auto &[m, d] : mps.bonds.front().sectors) rho[m] = Matrix::Identity(d, d);
    for(int i = 0; i < mps.length(); ++i) {
        std::map<int, Matrix> next;
        for(const auto &[m, d] : mps.bonds[size_t(i + 1)].sectors) next[m] = Matrix::Zero(d, d);
        for(const auto &[key, blk] : mps.sites[size_t(i)].blocks) next[key.right] += blk.adjoint() * rho[key.left] * blk;
        rho = std::move(next);
    }
    double n2 = 0;
    for(const auto &[m, r] : rho) n2 += r.trace().real();
    return std::sqrt(std::max(0.0, n2));
}

void scale(ConstrainedMps &mps, Scalar s) {
    const int c = mps.center >= 0 ? mps.center : 0;
    for(auto &[key, blk] : mps.sites[size_t(c)].blocks) blk *= s;
}

double left_isometry_residual(const ConstrainedMps &mps, int site) {
    double res = 0;
    for(const auto &[m2, d2] : mps.bonds[size_t(site + 1)].sectors) {
        Matrix a = group_left(mps.sites[size_t(site)], left_grouping(*mps.cat, mps.bonds[size_t(site)], m2), m2, d2);
        res      = std::max(res, max_abs(Matrix(a.adjoint() * a - Matrix::Identity(d2, d2))));
    }
    return res;
}

double right_isometry_residual(const ConstrainedMps &mps, int site) {
    double res = 0;
    for(const auto &[m1, d1] : mps.bonds[size_t(site)].sectors) {
        Matrix b = group_right(mps.sites[size_t(site)], right_grouping(*mps.cat, m1, mps.bonds[size_t(site + 1)]), m1, d1);
        res      = std::max(res, max_abs(Matrix(b * b.adjoint() - Matrix::Identity(d1, d1))));
    }
    return res;
}

double EntanglementSpectrum::weighted_norm(const ModuleCategory &cat) const {
    double s = 0;
    for(const auto &v : values) s += cat.module_dim(v.sector) * v.lambda * v.lambda;
    return s;
}

EntanglementSpectrum spectrum_from_singular_values(const ModuleCategory &cat, int cut, const std::vector<std::pair<int, RealVector>> &sv,
                                                   double floor) {
    double total = 0;
    for(const auto &[m, s] : sv) total += s.squaredNorm();
    EntanglementSpectrum es;
    es.cut = cut;
    if(total <= 0) return es;
    for(const auto &[m, s] : sv)
        for(Eigen::Index k = 0; k < s.size(); ++k) {
            double lambda = s(k) / std::sqrt(total) / std::sqrt(double(cat.module_dim(m)));
            if(lambda > floor) es.values.push_back({m, lambda});
        }
    std::stable_sort(es.values.begin(), es.values.end(), [](const SchmidtValue &a, const SchmidtValue &b) {
        if(a.lambda != b.lambda) return a.lambda > b.lambda;
        return a.sector < b.sector;
    });
    return es;
}

EntanglementSpectrum entanglement_spectrum(const ConstrainedMps &mps, int cut) {
    if(cut < 1 || cut >= mps.length()) throw Error("entanglement_spectrum: cut out of range");
    ConstrainedMps c = mps;
    canonicalize(c, cut - 1);
    std::vector<std::pair<int, RealVector>> sv;
    for(const auto &[m, d] : c.bonds[size_t(cut)].sectors) {
        Matrix a = group_left(c.sites[size_t(cut - 1)], left_grouping(*c.cat, c.bonds[size_t(cut - 1)], m), m, d);
        sv.emplace_back(m, Eigen::BDCSVD<Matrix>(a).singularValues());
    }
    return spectrum_from_singular_values(*c.cat, cut, sv);
}

std::vector<EntanglementSpectrum> entanglement_spectra(const ConstrainedMps &mps) {
    std::vector<EntanglementSpectrum> out;
    if(mps.length() < 2) return out;
    ConstrainedMps c = mps;
    canonicalize(c, 0);
    for(int cut = 1; cut < c.length(); ++cut) {
        std::vector<std::pair<int, RealVector>> sv;
        for(const auto &[m, d] : c.bonds[size_t(cut)].sectors) {
            Matrix a = group_left(c.sites[size_t(cut - 1)], left_grouping(*c.cat, c.bonds[size_t(cut - 1)], m), m, d);
            sv.emplace_back(m, Eigen::BDCSVD<Matrix>(a).singularValues());
        }
        out.push_back(spectrum_from_singular_values(*c.cat, cut, sv));
        left_step(c, cut - 1);
    }
    return out;
}

std::size_t memory_bytes(const MpsTensor &t) {
    std::size_t b = 0;
    for(const auto &[key, blk] : t.blocks) b += 16u * static_cast<std::size_t>(blk.rows() * blk.cols());
    return b;
}

std::size_t memory_bytes(const ConstrainedMps &mps) {
    std::size_t b = 0;
    for(const auto &t : mps.sites) b += memory_bytes(t);
    return b;
}

int mid_site(int length) { return std::max(0, length / 2 - 1); }

std::size_t mid_memory_bytes(const ConstrainedMps &mps) { return memory_bytes(mps.sites[size_t(mid_site(mps.length()))]); }

std::vector<std::size_t> memory_breakdown(const ConstrainedMps &mps) {
    std::vector<std::size_t> out;
    for(const auto &t : mps.sites) out.push_back(memory_bytes(t));
    return out;
}

ConstrainedMps intertwine_to_original(const ConstrainedMps &mps) {
    const auto    &cat = *mps.cat;
    const int      L   = mps.length();
    const int      p   = mps.physical();
    ConstrainedMps out;
    out.cat   = module_category(DualModelLabel::Original);
    out.label = DualModelLabel::Original;
    out.sites.resize(size_t(L));
    std::vector<std::map<int, int>> offset(size_t(L + 1));
    for(int b = 0; b <= L; ++b) {
        int total = 0;
        for(const auto &[m, d] : mps.bonds[size_t(b)].sectors) {
            offset[size_t(b)][m] = total;
            total += cat.module_dim(m) * d;
        }
        SectorSpace s;
        s.set(0, total);
        out.bonds.push_back(s);
    }
    for(int i = 0; i < L; ++i) {
        const int           D1 = out.bonds[size_t(i)].total(), D2 = out.bonds[size_t(i + 1)].total();
        std::vector<Matrix> phys(3, Matrix::Zero(D1, D2));
        for(const auto &[key, blk] : mps.sites[size_t(i)].blocks) {
            const Matrix &t  = cat.action(key.left, p, key.right).tensors.at(size_t(key.mult));
            const int     n1 = cat.module_dim(key.left), n2 = cat.module_dim(key.right);
            const int     o1 = offset[size_t(i)].at(key.left), o2 = offset[size_t(i + 1)].at(key.right);
            for(int s = 0; s < 3; ++s)
                for(int m1 = 0; m1 < n1; ++m1)
                    for(int m2 = 0; m2 < n2; ++m2) {
                        Scalar c = t(m1 * 3 + s, m2);
                        if(c == 0.0) continue;
                        phys[size_t(s)].block(o1 + m1 * blk.rows(), o2 + m2 * blk.cols(), blk.rows(), blk.cols()) += c * blk;
                    }
        }
        for(int s = 0; s < 3; ++s) out.sites[size_t(i)].blocks[{0, 0, s}] = std::move(phys[size_t(s)]);
    }
    out.center = -1;
    validate(out);
    return out;
}

ConstrainedMps project_boundary(const ConstrainedMps &mps, int m0, int mL) {
    if(mps.label != DualModelLabel::Original) throw Error("project_boundary: expects an Original-label MPS");
    ConstrainedMps out = mps;
    for(auto &[key, blk] : out.sites.front().blocks) blk = Matrix(blk.row(m0));
    for(auto &[key, blk] : out.sites.back().blocks) blk = Matrix(blk.col(mL));
    out.bonds.front().set(0, 1);
    out.bonds.back().set(0, 1);
    out.center = -1;
    validate(out);
    return out;
}

void write_spectrum_csv(const std::filesystem::path &path, const ModuleCategory &cat, const std::vector<EntanglementSpectrum> &spectra) {
    std::ofstream os(path);
    if(!os) throw Error(fmt::format("cannot write {}", path.string()));
    os << "cut,sector,lambda\n";
    for(const auto &es : spectra)
        for(const auto &v : es.values) os << fmt::format("{},{},{:.17g}\n", es.cut, cat.module_label(v.sector), v.lambda);
    if(!os) throw Error(fmt::format("I/O error writing {}", path.string()));
}

std::vector<EntanglementSpectrum> read_spectrum_csv(const std::filesystem::path &path, const ModuleCategory &cat) {
    std::ifstream is(path);
    if(!is) throw Error(fmt::format("cannot read {}", path.string()));
    std::string line;
    std::getline(is, line);
    if(line != "cut,sector,lambda") throw Error(fmt::format("{}: unexpected header", path.string()));
    std::vector<EntanglementSpectrum> out;
    while(std::getline(is, line)) {
        if(line.empty()) continue;
        std::stringstream ss(line);
        std::string       cut, sector, lambda;
        std::getline(ss, cut, ',');
        std::getline(ss, sector, ',');
        std::getline(ss, lambda, ',');
        int c = std::stoi(cut);
        if(out.empty() || out.back().cut != c) out.push_back({c, {}});
        out.back().values.push_back({cat.find_module(sector), std::stod(lambda)});
    }
    return out;
}

}

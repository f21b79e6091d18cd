#include "cdmrg/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <mutex>

#include <fmt/format.h>

namespace cdmrg {

SpinOperators spin1_operators() {
    const Scalar I(0, 1);
    SpinOperators s{Matrix::Zero(3, 3), Matrix::Zero(3, 3), Matrix::Zero(3, 3)};
    // (S^a)_{bc} = -i eps_{abc}
    s.sx(1, 2) = -I, s.sx(2, 1) = I;
    s.sy(2, 0) = -I, s.sy(0, 2) = I;
    s.sz(0, 1) = -I, s.sz(1, 0) = I;
    return s;
}

LocalTerms build_local_terms() {
    auto                    s  = spin1_operators();
    std::array<Matrix, 3>   op = {s.sx, s.sy, s.sz};
    LocalTerms              t{Matrix::Zero(9, 9), Matrix::Zero(9, 9), Matrix::Zero(9, 9)};
    for(const auto &a : op) {
        Matrix p = kron(a, a);
        t.h0 += p;
        t.h1 += p * p;
    }
    auto anti = [](const Matrix &a, const Matrix &b) { return Matrix(a * b + b * a); };
    t.h2 = kron(anti(s.sx, s.sy), s.sz) + kron(anti(s.sz, s.sx), s.sy) + kron(anti(s.sy, s.sz), s.sx);
    return t;
}

LocalCoefficients &LocalCoefficients::operator+=(const LocalCoefficients &other) {
    if(blocks.size() != other.blocks.size()) throw Error("LocalCoefficients: mismatched object count");
    for(size_t v = 0; v < blocks.size(); ++v) blocks[v] += other.blocks[v];
    provenance = provenance + "+" + other.provenance;
    return *this;
}

LocalCoefficients operator*(double s, const LocalCoefficients &c) {
    LocalCoefficients out = c;
    for(auto &b : out.blocks) b *= s;
    out.provenance = fmt::format("{}*{}", s, c.provenance);
    return out;
}

LocalCoefficients operator+(LocalCoefficients a, const LocalCoefficients &b) {
    a += b;
    return a;
}

namespace {
    std::vector<Matrix> diagonal_action(const ModuleCategory &cat) {
        const auto         &u = cat.objects()[static_cast<size_t>(cat.physical())];
        std::vector<Matrix> out;
        for(int g = 0; g < u.group->order; ++g) out.push_back(kron(u(g), u(g)));
        return out;
    }
}

double symmetry_residual(const ModuleCategory &cat, const Matrix &op) {
    double res = 0;
    for(const auto &uu : diagonal_action(cat)) res = std::max(res, max_abs(Matrix(op * uu - uu * op)));
    return res;
}

Matrix symmetrize(const ModuleCategory &cat, const Matrix &op) {
    auto   acts = diagonal_action(cat);
    Matrix out  = Matrix::Zero(op.rows(), op.cols());
    for(const auto &uu : acts) out += uu * op * uu.adjoint();
    return out / double(acts.size());
}

LocalCoefficients extract_coefficients(const ModuleCategory &cat, const Matrix &op, std::string provenance) {
    if(op.rows() != 9 || op.cols() != 9) throw Error("extract_coefficients: operator must be 9x9");
    if(max_abs(Matrix(symmetrize(cat, op) - op)) > 1e-10)
        throw Error("extract_coefficients: operator does not commute with the diagonal A4 action");
    const int         p = cat.physical();
    LocalCoefficients c{{}, std::move(provenance)};
    for(int v = 0; v < cat.num_objects(); ++v) {
        const auto &t = cat.fusion(p, p, v).tensors;
        const int   n = static_cast<int>(t.size());
        Matrix      h(n, n);
        for(int i = 0; i < n; ++i)
            for(int j = 0; j < n; ++j)
                h(i, j) = Matrix(t[size_t(i)] * t[size_t(j)].adjoint()).conjugate().cwiseProduct(op).sum() / double(cat.object_dim(v));
        c.blocks.push_back(std::move(h));
    }
    return c;
}

Matrix reconstruct(const ModuleCategory &cat, const LocalCoefficients &c) {
    const int p   = cat.physical();
    Matrix    out = Matrix::Zero(9, 9);
    for(int v = 0; v < cat.num_objects(); ++v) {
        const auto &t = cat.fusion(p, p, v).tensors;
        for(size_t i = 0; i < t.size(); ++i)
            for(size_t j = 0; j < t.size(); ++j)
                out += c.blocks[size_t(v)](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * t[i] * t[j].adjoint();
    }
    return out;
}

LocalCoefficients model_coefficients(const ModuleCategory &cat, double J1, double J2) {
    auto t  = build_local_terms();
    auto c0 = extract_coefficients(cat, t.h0, "h0");
    auto c1 = extract_coefficients(cat, t.h1, "h1");
    auto c2 = extract_coefficients(cat, t.h2, "h2");
    auto c  = c0 + J1 * c1 + J2 * c2;
    c.provenance = fmt::format("h0+{}*h1+{}*h2", J1, J2);
    return c;
}

namespace {
    constexpr std::array<DualLabelInfo, 7> kLabels = {{
        {DualModelLabel::Original, "Original", "Original", "1", false},
        {DualModelLabel::RepZ2, "Rep(Z2)", "RepZ2", "Z2", false},
        {DualModelLabel::RepZ3, "Rep(Z3)", "RepZ3", "Z3", false},
        {DualModelLabel::RepD2, "Rep(D2)", "RepD2", "D2", false},
        {DualModelLabel::RepPsiD2, "Rep^psi(D2)", "RepPsiD2", "D2", true},
        {DualModelLabel::RepA4, "Rep(A4)", "RepA4", "A4", false},
        {DualModelLabel::RepPsiA4, "Rep^psi(A4)", "RepPsiA4", "A4", true},
    }};

    std::string lower(std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    std::shared_ptr<const ModuleCategory> make_category(DualModelLabel label) {
        const auto &info = label_info(label);
        GroupPtr    a4   = build_a4();
        if(label == DualModelLabel::RepA4) return std::make_shared<const ModuleCategory>(ModuleCategory::regular(a4));
        auto objs = a4_objects(a4);
        int  phys = 0;
        for(size_t i = 0; i < objs.size(); ++i)
            if(objs[i].label == "3") phys = static_cast<int>(i);
        SubgroupEmbedding emb = std::string(info.subgroup) == "A4" ? identity_embedding(a4) : find_subgroup(a4, info.subgroup);
        Cocycle           psi = info.twisted ? nontrivial_cocycle(emb.sub) : trivial_cocycle(emb.sub);
        auto              mods = irreps(emb.sub, psi);
        return std::make_shared<const ModuleCategory>(std::move(objs), std::move(emb), std::move(psi), std::move(mods), phys);
    }
}

std::span<const DualLabelInfo> dual_labels() { return kLabels; }

const DualLabelInfo &label_info(DualModelLabel label) {
    for(const auto &l : kLabels)
        if(l.label == label) return l;
    throw Error("label_info: unknown label");
}

DualModelLabel parse_dual_label(std::string_view text) {
    const std::string t = lower(text);
    std::string       valid;
    for(const auto &l : kLabels) {
        if(t == lower(l.display) || t == lower(l.slug)) return l.label;
        valid += fmt::format("{}{} ({})", valid.empty() ? "" : ", ", l.display, l.slug);
    }
    throw Error(fmt::format("unknown dual model label '{}'; valid labels: {}", text, valid));
}

std::shared_ptr<const ModuleCategory> module_category(DualModelLabel label) {
    static std::mutex                                            mutex;
    static std::array<std::shared_ptr<const ModuleCategory>, 7> cache;
    const auto                                                   idx = static_cast<size_t>(label);
    std::lock_guard                                              lock(mutex);
    if(!cache[idx]) cache[idx] = make_category(label);
    return cache[idx];
}

DualLocalOperator::DualLocalOperator(std::shared_ptr<const ModuleCategory> cat, std::vector<DualBlock> blocks)
    : cat_(std::move(cat)), blocks_(std::move(blocks)) {}

const DualBlock &DualLocalOperator::block(int left, int right) const {
    return blocks_[static_cast<size_t>(left * cat_->num_modules() + right)];
}

Matrix DualLocalOperator::sector_block(int m1, int m2, int m2p, int m3) const {
    const auto &b  = block(m1, m3);
    const int   p  = cat_->physical();
    const int   n  = cat_->n_action(m1, p, m2) * cat_->n_action(m2, p, m3);
    const int   np = cat_->n_action(m1, p, m2p) * cat_->n_action(m2p, p, m3);
    if(b.empty() || n == 0 || np == 0) return Matrix::Zero(np, n);
    return b.h.block(b.start[size_t(m2p)], b.start[size_t(m2)], np, n);
}

DualLocalOperator build_dual_operator(const LocalCoefficients &coeffs, std::shared_ptr<const ModuleCategory> cat) {
    const int              nm = cat->num_modules();
    const int              p  = cat->physical();
    std::vector<DualBlock> blocks(static_cast<size_t>(nm * nm));
    if(static_cast<int>(coeffs.blocks.size()) != cat->num_objects()) throw Error("build_dual_operator: coefficient set does not match category");
    for(int m1 = 0; m1 < nm; ++m1)
        for(int m3 = 0; m3 < nm; ++m3) {
            FSymbolBlock f = f_symbols(*cat, m1, p, p, m3);
            DualBlock   &b = blocks[static_cast<size_t>(m1 * nm + m3)];
            b.left = m1, b.right = m3;
            for(const auto &t : f.left) b.basis.push_back({t.mid, t.first, t.second});
            b.start = f.left_start;
            for(int m2 = 0; m2 < nm; ++m2) b.n_second.push_back(cat->n_action(m2, p, m3));
            const auto n = static_cast<Eigen::Index>(f.left.size());
            if(n == 0) continue;
            if(f.F.rows() != f.F.cols() || unitarity_residual(f.F) > 1e-10)
                throw Error(fmt::format("build_dual_operator: mixed F block ({}, {}) is not unitary", cat->module_label(m1), cat->module_label(m3)));
            Matrix hr = Matrix::Zero(n, n);
            for(Eigen::Index r = 0; r < n; ++r)
                for(Eigen::Index s = 0; s < n; ++s) {
                    const auto &tr = f.right[size_t(r)];
                    const auto &ts = f.right[size_t(s)];
                    if(tr.mid == ts.mid && tr.second == ts.second) hr(r, s) = coeffs.blocks[size_t(tr.mid)](tr.first, ts.first);
                }
            b.h = f.F.conjugate() * hr * f.F.transpose();
        }
    return DualLocalOperator(std::move(cat), std::move(blocks));
}

std::vector<double> weighted_two_site_spectrum(const DualLocalOperator &op) {
    const auto                                       &cat = op.category();
    std::vector<std::pair<std::vector<double>, int>> parts;
    for(int m1 = 0; m1 < cat.num_modules(); ++m1)
        for(int m3 = 0; m3 < cat.num_modules(); ++m3) {
            const auto &b = op.block(m1, m3);
            if(b.empty()) continue;
            parts.emplace_back(hermitian_eigenvalues(Matrix((b.h + b.h.adjoint()) * 0.5)), cat.module_dim(m1) * cat.module_dim(m3));
        }
    return weighted_spectrum_union(parts, cat.embedding().sub->order);
}

void validate(const ModelSpec &spec) {
    if(spec.length < 2) throw Error(fmt::format("model: chain length must be at least 2 (got {})", spec.length));
    if(!std::isfinite(spec.J1) || !std::isfinite(spec.J2)) throw Error("model: couplings must be finite");
    auto cat = module_category(spec.dual);
    if(!spec.left.empty()) (void) cat->find_module(spec.left);
    if(!spec.right.empty()) (void) cat->find_module(spec.right);
}

ChainHamiltonian hamiltonian_terms(const ModelSpec &spec) {
    validate(spec);
    ChainHamiltonian h;
    h.cat    = module_category(spec.dual);
    h.bond   = std::make_shared<const DualLocalOperator>(build_dual_operator(model_coefficients(*h.cat, spec.J1, spec.J2), h.cat));
    h.dual   = spec.dual;
    h.length = spec.length;
    h.left   = spec.left.empty() ? 0 : h.cat->find_module(spec.left);
    h.right  = spec.right.empty() ? 0 : h.cat->find_module(spec.right);
    h.J1     = spec.J1;
    h.J2     = spec.J2;
    return h;
}

ChainHamiltonian with_boundaries(const ChainHamiltonian &h, int left, int right) {
    ChainHamiltonian out = h;
    if(left < 0 || left >= h.cat->num_modules() || right < 0 || right >= h.cat->num_modules()) throw Error("with_boundaries: sector out of range");
    out.left  = left;
    out.right = right;
    return out;
}

}

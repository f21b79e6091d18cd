#include "cdmrg/rep.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace cdmrg {

namespace {
    constexpr double kPi = 3.14159265358979323846;

    Eigen::Vector4d quaternion_of(const Eigen::Matrix3d &r) {
        // Shepperd's method; returns (w, x, y, z) with r v = q v q*.
        const double tr = r.trace();
        Eigen::Vector4d q;
        if(tr >= r(0, 0) && tr >= r(1, 1) && tr >= r(2, 2)) {
            double s = std::sqrt(1.0 + tr) * 2.0;
            q << 0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s;
        } else if(r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
            double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
            q << (r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s;
        } else if(r(1, 1) >= r(2, 2)) {
            double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
            q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s;
        } else {
            double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
            q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s;
        }
        q.normalize();
        for(int i = 0; i < 4; ++i) {
            if(std::abs(q(i)) > 1e-12) {
                if(q(i) < 0) q = -q;
                break;
            }
        }
        return q;
    }

    Matrix su2_of(const Eigen::Vector4d &q) {
        const Scalar I(0, 1);
        Matrix       u(2, 2);
        u(0, 0) = q(0) - I * q(3);
        u(0, 1) = -I * q(1) - q(2);
        u(1, 0) = -I * q(1) + q(2);
        u(1, 1) = q(0) + I * q(3);
        return u;
    }

    std::vector<Matrix> spin_half_matrices(const GroupData &g) {
        if(!g.has_rotations()) throw Error(fmt::format("group {} carries no rotation data", g.name));
        std::vector<Matrix> s;
        for(const auto &r : g.rotation) s.push_back(su2_of(quaternion_of(r)));
        return s;
    }

    Scalar root_of_unity(int k, int n) { return std::polar(1.0, 2.0 * kPi * k / n); }

    int first_of_order(const GroupData &g, int ord) {
        for(int x = 0; x < g.order; ++x)
            if(element_order(g, x) == ord) return x;
        return -1;
    }

    int labelling_cycle(const GroupData &g) {
        if(g.name == "A4" && g.has_rotations()) return a4_axis_cycle(g);
        return first_of_order(g, 3);
    }

    void assign_labels(const GroupData &g, std::vector<ProjRep> &reps) {
        const bool rot    = g.has_rotations();
        const int  cycle  = rot ? labelling_cycle(g) : -1;
        const Scalar w    = root_of_unity(1, 3);
        std::vector<Scalar> half_chi;
        if(rot) {
            auto s = spin_half_matrices(g);
            for(auto &m : s) half_chi.push_back(m.trace());
        }
        for(size_t i = 0; i < reps.size(); ++i) {
            ProjRep &r       = reps[i];
            const bool linear = r.cocycle.cls == CocycleClass::Trivial;
            bool trivial      = linear && r.dim == 1;
            for(int x = 0; x < g.order && trivial; ++x) trivial = std::abs(r.character(x) - 1.0) < 1e-8;
            r.label = fmt::format("r{}", i);
            if(trivial) {
                r.label = "0";
            } else if(rot && linear && r.dim == 1 && cycle >= 0) {
                r.label = std::abs(r.character(cycle) - w) < 1e-8 ? "1" : "1*";
            } else if(rot && linear && r.dim == 1 && g.order == 4) {
                for(int x = 0; x < g.order; ++x) {
                    if(x == g.identity || std::abs(r.character(x) - 1.0) > 1e-8) continue;
                    const auto &m = g.rotation[static_cast<size_t>(x)];
                    r.label       = m(0, 0) > 0 ? "x" : (m(1, 1) > 0 ? "y" : "z");
                }
            } else if(rot && linear && r.dim == 1 && g.order == 2) {
                r.label = "1";
            } else if(rot && linear && r.dim == 3) {
                r.label = "3";
            } else if(rot && !linear && r.dim == 2) {
                if(cycle < 0) {
                    r.label = "2";
                } else {
                    Scalar ratio = r.character(cycle) / half_chi[static_cast<size_t>(cycle)];
                    r.label      = std::abs(ratio - 1.0) < 1e-8 ? "2" : (std::abs(ratio - w) < 1e-8 ? "2'" : "2''");
                }
            }
        }
        std::stable_sort(reps.begin(), reps.end(), [](const ProjRep &a, const ProjRep &b) {
            if(a.dim != b.dim) return a.dim < b.dim;
            return a.label < b.label;
        });
        for(size_t i = 0; i + 1 < reps.size(); ++i)
            if(reps[i].label == reps[i + 1].label) throw Error(fmt::format("irreps: duplicate label {} on {}", reps[i].label, g.name));
    }

    Matrix random_hermitian(int n, std::mt19937_64 &rng) {
        std::normal_distribution<double> nd(0.0, 1.0);
        Matrix                           x(n, n);
        for(int i = 0; i < n; ++i)
            for(int j = 0; j < n; ++j) x(i, j) = Scalar(nd(rng), nd(rng));
        return (x + x.adjoint()) * 0.5;
    }

    // Splits the invariant subspace spanned by the orthonormal columns of q into irreducible pieces.
    void split_invariant(const std::vector<Matrix> &regular, const Matrix &q, std::mt19937_64 &rng, std::vector<Matrix> &out,
                         int depth = 0) {
        const int           n = static_cast<int>(regular.size());
        std::vector<Matrix> r;
        r.reserve(regular.size());
        for(const auto &l : regular) r.push_back(q.adjoint() * l * q);
        double cd = 0;
        for(const auto &m : r) cd += std::norm(m.trace());
        cd /= n;
        if(std::lround(cd) == 1) {
            out.push_back(q);
            return;
        }
        if(depth > 16) throw Error("irreps: failed to split an invariant subspace");
        const int k = static_cast<int>(q.cols());
        Matrix    x = random_hermitian(k, rng);
        Matrix    a = Matrix::Zero(k, k);
        for(const auto &m : r) a += m * x * m.adjoint();
        a /= n;
        Eigen::SelfAdjointEigenSolver<Matrix> es(a);
        const auto                           &ev    = es.eigenvalues();
        const double                          scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
        int                                   start = 0;
        int                                   parts = 0;
        std::vector<std::pair<int, int>>      ranges;
        for(int i = 1; i <= k; ++i) {
            if(i == k || ev(i) - ev(i - 1) > 1e-8 * scale) {
                ranges.emplace_back(start, i - start);
                start = i;
                ++parts;
            }
        }
        if(parts == 1) {
            split_invariant(regular, q, rng, out, depth + 1);
            return;
        }
        for(auto [s, len] : ranges) split_invariant(regular, q * es.eigenvectors().middleCols(s, len), rng, out, depth + 1);
    }
}

Cocycle trivial_cocycle(const GroupPtr &g) {
    return Cocycle{g, std::vector<Scalar>(static_cast<size_t>(g->order * g->order), Scalar(1.0)), CocycleClass::Trivial};
}

Cocycle spin_lift_cocycle(const GroupPtr &h) {
    auto    s = spin_half_matrices(*h);
    Cocycle psi{h, std::vector<Scalar>(static_cast<size_t>(h->order * h->order)), CocycleClass::Trivial};
    for(int a = 0; a < h->order; ++a)
        for(int b = 0; b < h->order; ++b) {
            Matrix m = s[static_cast<size_t>(a)] * s[static_cast<size_t>(b)] * s[static_cast<size_t>(h->product(a, b))].adjoint();
            double sign = m(0, 0).real() > 0 ? 1.0 : -1.0;
            if(max_abs(m - sign * Matrix::Identity(2, 2)) > 1e-10) throw Error("spin_lift_cocycle: lift is not projective");
            psi.values[static_cast<size_t>(a * h->order + b)] = sign;
        }
    psi.cls = is_coboundary(psi) ? CocycleClass::Trivial : CocycleClass::Nontrivial;
    return psi;
}

Cocycle nontrivial_cocycle(const GroupPtr &h) {
    Cocycle psi = spin_lift_cocycle(h);
    if(psi.cls != CocycleClass::Nontrivial)
        throw Error(fmt::format("nontrivial_cocycle: the SU(2) lift is a coboundary on {} (order {})", h->name, h->order));
    return psi;
}

Cocycle restrict_cocycle(const Cocycle &psi, const SubgroupEmbedding &emb) {
    Cocycle out{emb.sub, std::vector<Scalar>(static_cast<size_t>(emb.sub->order * emb.sub->order)), CocycleClass::Trivial};
    for(int a = 0; a < emb.sub->order; ++a)
        for(int b = 0; b < emb.sub->order; ++b) out.values[static_cast<size_t>(a * emb.sub->order + b)] = psi(emb(a), emb(b));
    out.cls = is_coboundary(out) ? CocycleClass::Trivial : CocycleClass::Nontrivial;
    return out;
}

Cocycle operator*(const Cocycle &a, const Cocycle &b) {
    if(a.group->order != b.group->order) throw Error("cocycle product over different groups");
    Cocycle out = a;
    for(size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
    if(a.cls == CocycleClass::Trivial && b.cls == CocycleClass::Trivial)
        out.cls = CocycleClass::Trivial;
    else
        out.cls = is_coboundary(out) ? CocycleClass::Trivial : CocycleClass::Nontrivial;
    return out;
}

bool same_cocycle(const Cocycle &a, const Cocycle &b, double tol) {
    if(a.values.size() != b.values.size()) return false;
    for(size_t i = 0; i < a.values.size(); ++i)
        if(std::abs(a.values[i] - b.values[i]) > tol) return false;
    return true;
}

double cocycle_residual(const Cocycle &psi) {
    const GroupData &g   = *psi.group;
    double           res = 0;
    for(int a = 0; a < g.order; ++a)
        for(int b = 0; b < g.order; ++b) {
            res = std::max(res, std::abs(std::abs(psi(a, b)) - 1.0));
            for(int c = 0; c < g.order; ++c)
                res = std::max(res, std::abs(psi(a, b) * psi(g.product(a, b), c) - psi(b, c) * psi(a, g.product(b, c))));
        }
    for(int a = 0; a < g.order; ++a) res = std::max(res, std::abs(psi(g.identity, a) - 1.0) + std::abs(psi(a, g.identity) - 1.0));
    return res;
}

bool is_coboundary(const Cocycle &psi) {
    Cocycle probe = psi;
    probe.cls     = CocycleClass::Nontrivial; // keeps irreps() from recursing into this test
    auto reps     = irreps(psi.group, probe);
    return std::any_of(reps.begin(), reps.end(), [](const ProjRep &r) { return r.dim == 1; });
}

double projective_residual(const ProjRep &r) {
    const GroupData &g   = *r.group;
    double           res = 0;
    for(int a = 0; a < g.order; ++a)
        for(int b = 0; b < g.order; ++b)
            res = std::max(res, max_abs(Matrix(r(a) * r(b) - r.cocycle(a, b) * r(g.product(a, b)))));
    return res;
}

double unitarity_residual(const ProjRep &r) {
    double res = 0;
    for(const auto &m : r.matrices) res = std::max(res, cdmrg::unitarity_residual(m));
    return res;
}

int commutant_dimension(const ProjRep &r) {
    Matrix p = Matrix::Zero(r.dim * r.dim, r.dim * r.dim);
    for(const auto &m : r.matrices) p += kron(m.conjugate(), m);
    return static_cast<int>(std::lround(p.trace().real() / r.group->order));
}

std::vector<ProjRep> irreps(const GroupPtr &g, const Cocycle &psi, std::uint64_t seed) {
    const int n = g->order;
    if(psi.group->order != n) throw Error("irreps: cocycle belongs to a different group");
    if(cocycle_residual(psi) > 1e-10) throw Error("irreps: input is not a normalized 2-cocycle");
    std::vector<Matrix> regular;
    for(int a = 0; a < n; ++a) {
        Matrix l = Matrix::Zero(n, n);
        for(int b = 0; b < n; ++b) l(g->product(a, b), b) = psi(a, b);
        regular.push_back(l);
    }
    std::mt19937_64     rng(seed);
    std::vector<Matrix> pieces;
    split_invariant(regular, Matrix::Identity(n, n), rng, pieces);

    std::vector<ProjRep>             reps;
    std::vector<std::vector<Scalar>> chars;
    for(const auto &q : pieces) {
        ProjRep r{g, psi, static_cast<int>(q.cols()), {}, ""};
        for(const auto &l : regular) r.matrices.push_back(q.adjoint() * l * q);
        std::vector<Scalar> chi;
        for(int a = 0; a < n; ++a) chi.push_back(r.character(a));
        bool known = false;
        for(const auto &c : chars) {
            Scalar ip = 0;
            for(int a = 0; a < n; ++a) ip += std::conj(c[static_cast<size_t>(a)]) * chi[static_cast<size_t>(a)];
            if(std::abs(ip / double(n)) > 0.5) known = true;
        }
        if(known) continue;
        chars.push_back(chi);
        reps.push_back(std::move(r));
    }
    int sum = 0;
    for(const auto &r : reps) sum += r.dim * r.dim;
    if(sum != n) throw Error(fmt::format("irreps: dimension check failed on {} (sum d^2 = {}, |G| = {})", g->name, sum, n));
    for(const auto &r : reps)
        if(projective_residual(r) > 1e-10 || unitarity_residual(r) > 1e-10 || commutant_dimension(r) != 1)
            throw Error(fmt::format("irreps: numerical tolerance failure on {}", g->name));
    assign_labels(*g, reps);
    return reps;
}

ProjRep spin1_irrep(const GroupPtr &g) {
    if(!g->has_rotations()) throw Error("spin1_irrep: group has no rotation data");
    ProjRep r{g, trivial_cocycle(g), 3, {}, "3"};
    for(const auto &m : g->rotation) r.matrices.push_back(m.cast<Scalar>());
    return r;
}

ProjRep spin_half_rep(const GroupPtr &g) {
    return ProjRep{g, spin_lift_cocycle(g), 2, spin_half_matrices(*g), "1/2"};
}

ProjRep restriction(const ProjRep &v, const SubgroupEmbedding &emb) {
    ProjRep r{emb.sub, restrict_cocycle(v.cocycle, emb), v.dim, {}, v.label};
    for(int h = 0; h < emb.sub->order; ++h) r.matrices.push_back(v(emb(h)));
    return r;
}

ProjRep tensor_product(const ProjRep &a, const ProjRep &b) {
    if(a.group->order != b.group->order) throw Error("tensor_product: different groups");
    ProjRep r{a.group, a.cocycle * b.cocycle, a.dim * b.dim, {}, a.label + "x" + b.label};
    for(int g = 0; g < a.group->order; ++g) r.matrices.push_back(kron(a(g), b(g)));
    return r;
}

Scalar character_inner(const ProjRep &a, const ProjRep &b) {
    Scalar s = 0;
    for(int g = 0; g < a.group->order; ++g) s += std::conj(a.character(g)) * b.character(g);
    return s / double(a.group->order);
}

std::vector<std::pair<ProjRep, int>> restrict(const ProjRep &v, const SubgroupEmbedding &emb, const Cocycle &psi) {
    ProjRep res = restriction(v, emb);
    if(!same_cocycle(res.cocycle, psi)) throw Error("restrict: restricted cocycle differs from the target cocycle");
    std::vector<std::pair<ProjRep, int>> out;
    int                                  total = 0;
    for(auto &m : irreps(emb.sub, psi)) {
        int mult = static_cast<int>(std::lround(character_inner(m, res).real()));
        total += mult * m.dim;
        if(mult > 0) out.emplace_back(std::move(m), mult);
    }
    if(total != v.dim) throw Error("restrict: multiplicities do not account for the full dimension");
    return out;
}

Matrix equivalence_unitary(const ProjRep &a, const ProjRep &b) {
    if(a.dim != b.dim || !same_cocycle(a.cocycle, b.cocycle)) throw Error("equivalence_unitary: representations are inequivalent");
    const int d = a.dim;
    Matrix    p = Matrix::Zero(d * d, d * d);
    for(int g = 0; g < a.group->order; ++g) p += kron(b(g).conjugate(), a(g));
    p /= double(a.group->order);
    Eigen::Index best = 0;
    p.colwise().norm().maxCoeff(&best);
    Vector col = p.col(best);
    if(col.norm() < 1e-8) throw Error("equivalence_unitary: representations are inequivalent");
    Matrix x = Eigen::Map<Matrix>(col.data(), d, d);
    Matrix u = x / std::sqrt((x.adjoint() * x)(0, 0).real());
    if(cdmrg::unitarity_residual(u) > 1e-10) throw Error("equivalence_unitary: representations are inequivalent");
    return u;
}

}

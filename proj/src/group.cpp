#include "cdmrg/group.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include <fmt/format.h>

#include "cdmrg/linalg.hpp"

namespace cdmrg {

GroupData make_group(std::string name, int order, std::vector<int> mul, std::vector<Eigen::Matrix3d> rotation,
                     std::vector<std::string> element_names) {
    if(order <= 0) throw Error("make_group: order must be positive");
    if(mul.size() != static_cast<size_t>(order * order)) throw Error("make_group: table size does not match order");
    GroupData g;
    g.name          = std::move(name);
    g.order         = order;
    g.mul           = std::move(mul);
    g.rotation      = std::move(rotation);
    g.element_names = std::move(element_names);
    for(int x : g.mul)
        if(x < 0 || x >= order) throw Error("make_group: table entry out of range");
    g.identity = -1;
    for(int e = 0; e < order && g.identity < 0; ++e) {
        bool ok = true;
        for(int x = 0; x < order && ok; ++x) ok = g.product(e, x) == x && g.product(x, e) == x;
        if(ok) g.identity = e;
    }
    if(g.identity < 0) throw Error("make_group: no identity element");
    g.inverse.assign(static_cast<size_t>(order), -1);
    for(int x = 0; x < order; ++x)
        for(int y = 0; y < order; ++y)
            if(g.product(x, y) == g.identity) g.inverse[static_cast<size_t>(x)] = y;
    validate_group(g);
    return g;
}

void validate_group(const GroupData &g) {
    const int n = g.order;
    for(int x = 0; x < n; ++x) {
        std::vector<char> row(static_cast<size_t>(n), 0), col(static_cast<size_t>(n), 0);
        for(int y = 0; y < n; ++y) {
            row[static_cast<size_t>(g.product(x, y))] = 1;
            col[static_cast<size_t>(g.product(y, x))] = 1;
        }
        if(std::count(row.begin(), row.end(), 1) != n || std::count(col.begin(), col.end(), 1) != n)
            throw Error(fmt::format("group {}: table row/column {} is not a permutation", g.name, x));
        int inv = g.inverse[static_cast<size_t>(x)];
        if(inv < 0 || g.product(x, inv) != g.identity || g.product(inv, x) != g.identity)
            throw Error(fmt::format("group {}: element {} has no two-sided inverse", g.name, x));
    }
    for(int a = 0; a < n; ++a)
        for(int b = 0; b < n; ++b)
            for(int c = 0; c < n; ++c)
                if(g.product(g.product(a, b), c) != g.product(a, g.product(b, c)))
                    throw Error(fmt::format("group {}: associativity fails at ({}, {}, {})", g.name, a, b, c));
    if(g.has_rotations()) {
        if(g.rotation.size() != static_cast<size_t>(n)) throw Error("group: rotation list has wrong length");
        for(int a = 0; a < n; ++a)
            for(int b = 0; b < n; ++b)
                if((g.rotation[static_cast<size_t>(a)] * g.rotation[static_cast<size_t>(b)] -
                    g.rotation[static_cast<size_t>(g.product(a, b))])
                       .cwiseAbs()
                       .maxCoeff() > 1e-12)
                    throw Error(fmt::format("group {}: rotations are not a homomorphism", g.name));
    }
}

GroupPtr build_a4() {
    const std::array<Eigen::Vector3d, 4> vertex = {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1),
                                                   Eigen::Vector3d(-1, 1, -1), Eigen::Vector3d(-1, -1, 1)};
    std::vector<std::array<int, 4>> perms;
    std::array<int, 4>              p = {0, 1, 2, 3};
    do {
        int inversions = 0;
        for(int i = 0; i < 4; ++i)
            for(int j = i + 1; j < 4; ++j) inversions += p[static_cast<size_t>(i)] > p[static_cast<size_t>(j)];
        if(inversions % 2 == 0) perms.push_back(p);
    } while(std::next_permutation(p.begin(), p.end()));

    std::map<std::array<int, 4>, int> index;
    for(size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
    const int        n = static_cast<int>(perms.size());
    std::vector<int> mul(static_cast<size_t>(n * n));
    for(int a = 0; a < n; ++a)
        for(int b = 0; b < n; ++b) {
            std::array<int, 4> c{};
            for(size_t i = 0; i < 4; ++i) c[i] = perms[static_cast<size_t>(a)][static_cast<size_t>(perms[static_cast<size_t>(b)][i])];
            mul[static_cast<size_t>(a * n + b)] = index.at(c);
        }
    std::vector<Eigen::Matrix3d> rot;
    std::vector<std::string>     names;
    for(const auto &q : perms) {
        Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
        for(size_t i = 0; i < 4; ++i) r += 0.25 * vertex[static_cast<size_t>(q[i])] * vertex[i].transpose();
        rot.push_back(r.array().round().matrix());
        names.push_back(fmt::format("({}{}{}{})", q[0], q[1], q[2], q[3]));
    }
    return std::make_shared<const GroupData>(make_group("A4", n, std::move(mul), std::move(rot), std::move(names)));
}

int element_order(const GroupData &g, int x) {
    int k = 1, y = x;
    while(y != g.identity) {
        y = g.product(y, x);
        ++k;
    }
    return k;
}

std::vector<std::vector<int>> conjugacy_classes(const GroupData &g) {
    std::vector<int>              seen(static_cast<size_t>(g.order), 0);
    std::vector<std::vector<int>> classes;
    for(int x = 0; x < g.order; ++x) {
        if(seen[static_cast<size_t>(x)]) continue;
        std::set<int> cls;
        for(int h = 0; h < g.order; ++h) cls.insert(g.product(g.product(h, x), g.inverse[static_cast<size_t>(h)]));
        for(int y : cls) seen[static_cast<size_t>(y)] = 1;
        classes.emplace_back(cls.begin(), cls.end());
    }
    return classes;
}

int a4_axis_cycle(const GroupData &a4) {
    Eigen::Matrix3d target;
    target << 0, 0, 1, 1, 0, 0, 0, 1, 0; // e_x -> e_y -> e_z
    for(int x = 0; x < a4.order; ++x)
        if(a4.has_rotations() && (a4.rotation[static_cast<size_t>(x)] - target).cwiseAbs().maxCoeff() < 1e-12) return x;
    throw Error("a4_axis_cycle: group has no axis-cycling rotation");
}

namespace {
    std::vector<int> generate(const GroupData &g, std::vector<int> gens) {
        std::set<int> s{g.identity};
        std::vector<int> frontier{g.identity};
        while(!frontier.empty()) {
            std::vector<int> next;
            for(int x : frontier)
                for(int y : gens) {
                    int z = g.product(x, y);
                    if(s.insert(z).second) next.push_back(z);
                }
            frontier = std::move(next);
        }
        return {s.begin(), s.end()};
    }

    bool is_cyclic(const GroupData &g) {
        for(int x = 0; x < g.order; ++x)
            if(element_order(g, x) == g.order) return true;
        return false;
    }

    std::string structural_name(const GroupData &sub, const GroupData &parent) {
        if(sub.order == 1) return "1";
        if(sub.order == parent.order) return parent.name;
        if(is_cyclic(sub)) return fmt::format("Z{}", sub.order);
        if(sub.order == 4) return "D2";
        return fmt::format("H{}", sub.order);
    }
}

SubgroupEmbedding identity_embedding(const GroupPtr &g) {
    SubgroupEmbedding e{g, g, {}};
    for(int x = 0; x < g->order; ++x) e.map.push_back(x);
    return e;
}

SubgroupEmbedding subgroup_from_elements(const GroupPtr &parent, std::vector<int> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if(elements.empty() || elements.front() != parent->identity) {
        auto it = std::find(elements.begin(), elements.end(), parent->identity);
        if(it == elements.end()) throw Error("subgroup_from_elements: identity missing");
        std::rotate(elements.begin(), it, it + 1);
    }
    std::map<int, int> local;
    for(size_t i = 0; i < elements.size(); ++i) local[elements[i]] = static_cast<int>(i);
    const int        n = static_cast<int>(elements.size());
    std::vector<int> mul(static_cast<size_t>(n * n));
    for(int a = 0; a < n; ++a)
        for(int b = 0; b < n; ++b) {
            auto it = local.find(parent->product(elements[static_cast<size_t>(a)], elements[static_cast<size_t>(b)]));
            if(it == local.end()) throw Error("subgroup_from_elements: element set is not closed");
            mul[static_cast<size_t>(a * n + b)] = it->second;
        }
    std::vector<Eigen::Matrix3d> rot;
    std::vector<std::string>     names;
    for(int x : elements) {
        if(parent->has_rotations()) rot.push_back(parent->rotation[static_cast<size_t>(x)]);
        if(!parent->element_names.empty()) names.push_back(parent->element_names[static_cast<size_t>(x)]);
    }
    GroupData sub = make_group("", n, std::move(mul), std::move(rot), std::move(names));
    sub.name      = structural_name(sub, *parent);
    return SubgroupEmbedding{std::make_shared<const GroupData>(std::move(sub)), parent, std::move(elements)};
}

double homomorphism_residual(const SubgroupEmbedding &emb) {
    double bad = 0;
    for(int a = 0; a < emb.sub->order; ++a)
        for(int b = 0; b < emb.sub->order; ++b)
            if(emb(emb.sub->product(a, b)) != emb.parent->product(emb(a), emb(b))) bad = 1;
    std::set<int> image(emb.map.begin(), emb.map.end());
    if(image.size() != emb.map.size()) bad = 1;
    return bad;
}

std::vector<SubgroupEmbedding> enumerate_subgroups(const GroupPtr &parent) {
    const GroupData           &g = *parent;
    std::set<std::vector<int>> all{{g.identity}};
    std::vector<std::vector<int>> queue{{g.identity}};
    for(size_t i = 0; i < queue.size(); ++i) {
        for(int x = 0; x < g.order; ++x) {
            const auto &s = queue[i];
            if(std::binary_search(s.begin(), s.end(), x)) continue;
            std::vector<int> gens = s;
            gens.push_back(x);
            auto t = generate(g, gens);
            if(all.insert(t).second) queue.push_back(t);
        }
    }
    std::set<std::vector<int>>    classified;
    std::vector<std::vector<int>> reps;
    for(const auto &s : all) {
        if(classified.count(s)) continue;
        std::set<std::vector<int>> conj;
        for(int h = 0; h < g.order; ++h) {
            std::vector<int> c;
            for(int x : s) c.push_back(g.product(g.product(h, x), g.inverse[static_cast<size_t>(h)]));
            std::sort(c.begin(), c.end());
            conj.insert(c);
        }
        classified.insert(conj.begin(), conj.end());
        reps.push_back(*conj.begin());
    }
    std::sort(reps.begin(), reps.end(), [](const auto &a, const auto &b) {
        if(a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<SubgroupEmbedding> out;
    for(const auto &r : reps) out.push_back(subgroup_from_elements(parent, r));
    return out;
}

SubgroupEmbedding find_subgroup(const GroupPtr &parent, const std::string &name) {
    for(auto &e : enumerate_subgroups(parent))
        if(e.sub->name == name) return e;
    throw Error(fmt::format("find_subgroup: {} has no subgroup named {}", parent->name, name));
}

}

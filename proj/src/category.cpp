#include "cdmrg/category.hpp"

#include <fmt/format.h>

namespace cdmrg {

std::vector<ProjRep> a4_objects(const GroupPtr &a4) {
    auto reps = irreps(a4, trivial_cocycle(a4));
    for(auto &r : reps) {
        if(r.label != "3") continue;
        ProjRep spin = spin1_irrep(a4);
        if(std::abs(character_inner(r, spin) - 1.0) > 1e-10) throw Error("a4_objects: spin-1 is not the 3-dimensional irrep");
        r = std::move(spin);
    }
    return reps;
}

ModuleCategory::ModuleCategory(std::vector<ProjRep> fusion_objects, SubgroupEmbedding emb, Cocycle psi,
                               std::vector<ProjRep> module_objects, int physical)
    : objects_(std::move(fusion_objects)), emb_(std::move(emb)), psi_(std::move(psi)), modules_(std::move(module_objects)),
      physical_(physical) {
    const int nv = num_objects();
    const int nm = num_modules();
    if(physical_ < 0 || physical_ >= nv) throw Error("ModuleCategory: physical object out of range");
    for(const auto &v : objects_) restricted_.push_back(emb_.sub == emb_.parent ? v : restriction(v, emb_));
    fusion_.reserve(static_cast<size_t>(nv * nv * nv));
    for(int a = 0; a < nv; ++a)
        for(int b = 0; b < nv; ++b)
            for(int c = 0; c < nv; ++c) fusion_.push_back(intertwiner_basis(objects_[size_t(a)], objects_[size_t(b)], objects_[size_t(c)]));
    action_.reserve(static_cast<size_t>(nm * nv * nm));
    for(int a = 0; a < nm; ++a)
        for(int v = 0; v < nv; ++v)
            for(int c = 0; c < nm; ++c)
                action_.push_back(intertwiner_basis(modules_[size_t(a)], restricted_[size_t(v)], modules_[size_t(c)]));
}

ModuleCategory ModuleCategory::regular(const GroupPtr &g) {
    auto objs = a4_objects(g);
    int  phys = 0;
    for(size_t i = 0; i < objs.size(); ++i)
        if(objs[i].label == "3") phys = static_cast<int>(i);
    return ModuleCategory(objs, identity_embedding(g), trivial_cocycle(g), objs, phys);
}

int ModuleCategory::find_module(std::string_view label) const {
    std::string valid;
    for(int m = 0; m < num_modules(); ++m) {
        if(module_label(m) == label) return m;
        valid += (m ? ", " : "") + module_label(m);
    }
    throw Error(fmt::format("unknown sector label '{}' (valid: {})", label, valid));
}

int ModuleCategory::find_object(std::string_view label) const {
    for(int v = 0; v < num_objects(); ++v)
        if(object_label(v) == label) return v;
    throw Error(fmt::format("unknown fusion object '{}'", label));
}

const IntertwinerBasis &ModuleCategory::fusion(int v1, int v2, int v3) const {
    const int nv = num_objects();
    return fusion_[static_cast<size_t>((v1 * nv + v2) * nv + v3)];
}

const IntertwinerBasis &ModuleCategory::action(int m1, int v, int m2) const {
    const int nv = num_objects(), nm = num_modules();
    return action_[static_cast<size_t>((m1 * nv + v) * nm + m2)];
}

}

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cdmrg/intertwiner.hpp"

namespace cdmrg {

/// Irreps of A4 used as fusion objects: "0", "1", "1*" and the Cartesian spin-1 "3".
std::vector<ProjRep> a4_objects(const GroupPtr &a4);

/// Rep^psi(H) as a module category over Rep(G): objects are psi-irreps of H, acted on by G-irreps via
/// restriction. Holds every fusion space Hom_G(v1 (x) v2 -> v3) and action space Hom_H(m1 (x) Res v -> m2).
class ModuleCategory {
  public:
    ModuleCategory(std::vector<ProjRep> fusion_objects, SubgroupEmbedding emb, Cocycle psi, std::vector<ProjRep> module_objects,
                   int physical);

    /// Rep(G) as a module over itself; module objects coincide with the fusion objects.
    static ModuleCategory regular(const GroupPtr &g);

    [[nodiscard]] const std::vector<ProjRep> &objects() const { return objects_; }
    [[nodiscard]] const std::vector<ProjRep> &modules() const { return modules_; }
    [[nodiscard]] const SubgroupEmbedding    &embedding() const { return emb_; }
    [[nodiscard]] const Cocycle              &cocycle() const { return psi_; }
    [[nodiscard]] int                         physical() const { return physical_; }
    [[nodiscard]] int                         num_objects() const { return static_cast<int>(objects_.size()); }
    [[nodiscard]] int                         num_modules() const { return static_cast<int>(modules_.size()); }
    [[nodiscard]] int                         module_dim(int m) const { return modules_[static_cast<size_t>(m)].dim; }
    [[nodiscard]] int                         object_dim(int v) const { return objects_[static_cast<size_t>(v)].dim; }
    [[nodiscard]] const std::string          &module_label(int m) const { return modules_[static_cast<size_t>(m)].label; }
    [[nodiscard]] const std::string          &object_label(int v) const { return objects_[static_cast<size_t>(v)].label; }

    /// Index of the module object with this label; throws with the valid labels otherwise.
    [[nodiscard]] int find_module(std::string_view label) const;
    [[nodiscard]] int find_object(std::string_view label) const;

    [[nodiscard]] const IntertwinerBasis &fusion(int v1, int v2, int v3) const;
    [[nodiscard]] const IntertwinerBasis &action(int m1, int v, int m2) const;
    [[nodiscard]] int n_fusion(int v1, int v2, int v3) const { return fusion(v1, v2, v3).multiplicity(); }
    [[nodiscard]] int n_action(int m1, int v, int m2) const { return action(m1, v, m2).multiplicity(); }

    /// Restriction of a fusion object to H, used as the acting representation.
    [[nodiscard]] const ProjRep &restricted(int v) const { return restricted_[static_cast<size_t>(v)]; }

  private:
    std::vector<ProjRep>          objects_;
    SubgroupEmbedding             emb_;
    Cocycle                       psi_;
    std::vector<ProjRep>          modules_;
    std::vector<ProjRep>          restricted_;
    int                           physical_ = 0;
    std::vector<IntertwinerBasis> fusion_;
    std::vector<IntertwinerBasis> action_;
};

}

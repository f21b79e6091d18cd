#include "cdmrg/dump.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace cdmrg {

namespace {
    std::string num(Scalar x) {
        double re = std::abs(x.real()) < 1e-12 ? 0.0 : x.real();
        double im = std::abs(x.imag()) < 1e-12 ? 0.0 : x.imag();
        if(im == 0.0) return fmt::format("{:.6f}", re);
        return fmt::format("{:.6f}{:+.6f}i", re, im);
    }

    void dump_reps(std::ostream &os, const std::vector<ProjRep> &reps) {
        for(const auto &r : reps) {
            fmt::print(os, "  {:>4} dim {} chi:", r.label, r.dim);
            for(int g = 0; g < r.group->order; ++g) fmt::print(os, " {}", num(r.character(g)));
            fmt::print(os, "\n");
        }
    }
}

void dump_category(std::ostream &os, const ModuleCategory &cat, bool with_fsymbols) {
    const auto &emb = cat.embedding();
    fmt::print(os, "group {} (order {}), subgroup {} (order {}), twisted cocycle: {}\n", emb.parent->name, emb.parent->order,
               emb.sub->name, emb.sub->order, cat.cocycle().cls == CocycleClass::Nontrivial ? "yes" : "no");
    fmt::print(os, "subgroup elements:");
    for(int x : emb.map) fmt::print(os, " {}", x);
    fmt::print(os, "\nfusion objects:\n");
    dump_reps(os, cat.objects());
    fmt::print(os, "module objects:\n");
    dump_reps(os, cat.modules());
    fmt::print(os, "fusion multiplicities N(v1 x v2 -> v3):\n");
    for(int a = 0; a < cat.num_objects(); ++a)
        for(int b = 0; b < cat.num_objects(); ++b) {
            fmt::print(os, "  {} x {} ->", cat.object_label(a), cat.object_label(b));
            for(int c = 0; c < cat.num_objects(); ++c)
                if(cat.n_fusion(a, b, c) > 0) fmt::print(os, " {}*{}", cat.n_fusion(a, b, c), cat.object_label(c));
            fmt::print(os, "\n");
        }
    fmt::print(os, "action multiplicities N(m1 x v -> m2):\n");
    for(int a = 0; a < cat.num_modules(); ++a)
        for(int v = 0; v < cat.num_objects(); ++v) {
            fmt::print(os, "  {} x {} ->", cat.module_label(a), cat.object_label(v));
            for(int c = 0; c < cat.num_modules(); ++c)
                if(cat.n_action(a, v, c) > 0) fmt::print(os, " {}*{}", cat.n_action(a, v, c), cat.module_label(c));
            fmt::print(os, "\n");
        }
    if(!with_fsymbols) return;
    fmt::print(os, "F-symbols F[(mid,i,j);(mid,k,l)] (nonzero entries):\n");
    FSymbolTable table(cat);
    for(int a = 0; a < cat.num_modules(); ++a)
        for(int b = 0; b < cat.num_objects(); ++b)
            for(int c = 0; c < cat.num_objects(); ++c)
                for(int d = 0; d < cat.num_modules(); ++d) {
                    const auto &blk = table(a, b, c, d);
                    if(blk.left.empty()) continue;
                    fmt::print(os, "  F[{} {} {} -> {}]\n", cat.module_label(a), cat.object_label(b), cat.object_label(c), cat.module_label(d));
                    for(size_t l = 0; l < blk.left.size(); ++l)
                        for(size_t r = 0; r < blk.right.size(); ++r) {
                            Scalar x = blk.F(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r));
                            if(std::abs(x) < 1e-12) continue;
                            fmt::print(os, "    ({},{},{}) ({},{},{}) {}\n", cat.module_label(blk.left[l].mid), blk.left[l].first,
                                       blk.left[l].second, cat.object_label(blk.right[r].mid), blk.right[r].first,
                                       blk.right[r].second, num(x));
                        }
                }
}

}

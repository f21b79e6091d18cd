#pragma once

#include <vector>

#include "cdmrg/category.hpp"

namespace cdmrg {

/// Fusion-tree vertex labels: intermediate object and the multiplicity indices of the two vertices.
struct TreeIndex {
    int mid    = 0;
    int first  = 0;
    int second = 0;
};

/// F-move between the two fusion trees m1 (x) v2 (x) v3 -> m4. Left trees go through a module object,
/// ((m1 v2)_mid v3); right trees through a fusion object, (m1 (v2 v3)_mid). left_tree(l) = sum_r F(l, r) right_tree(r).
struct FSymbolBlock {
    int                    m1 = 0, v2 = 0, v3 = 0, m4 = 0;
    std::vector<TreeIndex> left, right;
    std::vector<int>       left_start, right_start; // offset of the first row/column with a given intermediate
    Matrix                 F;

    [[nodiscard]] int row(int mid, int first, int second, int n_second) const {
        return left_start[static_cast<size_t>(mid)] + first * n_second + second;
    }
    [[nodiscard]] int col(int mid, int first, int second, int n_second) const {
        return right_start[static_cast<size_t>(mid)] + first * n_second + second;
    }
};

/// Explicit tree maps m4 -> m1 (x) v2 (x) v3 as (d1 d2 d3) x d4 matrices.
Matrix left_tree(const ModuleCategory &cat, int m1, int v2, int v3, int m4, const TreeIndex &t);
Matrix right_tree(const ModuleCategory &cat, int m1, int v2, int v3, int m4, const TreeIndex &t);

FSymbolBlock f_symbols(const ModuleCategory &cat, int m1, int v2, int v3, int m4);

/// max |left_tree(l) - sum_r F(l, r) right_tree(r)| over the block.
double tree_expansion_residual(const ModuleCategory &cat, const FSymbolBlock &block);

/// Every F block of a category, indexed by (m1, v2, v3, m4).
class FSymbolTable {
  public:
    explicit FSymbolTable(const ModuleCategory &cat);
    [[nodiscard]] const FSymbolBlock   &operator()(int m1, int v2, int v3, int m4) const;
    [[nodiscard]] const ModuleCategory &category() const { return *cat_; }

  private:
    const ModuleCategory     *cat_;
    std::vector<FSymbolBlock> blocks_;
};

/// Largest violation of the pentagon for external labels a, e (module) and b, c, d (fusion objects).
/// `plain` must be the table of the regular category built on the same fusion objects.
double pentagon_residual(const FSymbolTable &mixed, const FSymbolTable &plain, int a, int b, int c, int d, int e);

/// Maximum of pentagon_residual over all external labels.
double max_pentagon_residual(const FSymbolTable &mixed, const FSymbolTable &plain);

}

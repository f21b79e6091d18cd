#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cdmrg/fsymbol.hpp"

namespace cdmrg {

struct SpinOperators {
    Matrix sx, sy, sz;
};

/// Spin-1 operators in the Cartesian basis, (S^a)_{bc} = -i eps_{abc}; they generate spin1_irrep.
SpinOperators spin1_operators();

struct LocalTerms {
    Matrix h0, h1, h2;
};

/// h0 = S.S, h1 = sum_a (S^a S^a)^2, h2 = {Sx,Sy} Sz + {Sz,Sx} Sy + {Sy,Sz} Sx; 9x9 with row index s1 * 3 + s2.
LocalTerms build_local_terms();

/// h(V, i, j) for every fusion object V of the category, as N(3 x 3 -> V) square matrices.
struct LocalCoefficients {
    std::vector<Matrix> blocks;
    std::string         provenance;

    LocalCoefficients &operator+=(const LocalCoefficients &other);
};
LocalCoefficients operator*(double s, const LocalCoefficients &c);
LocalCoefficients operator+(LocalCoefficients a, const LocalCoefficients &b);

/// max over A4 of |[op, u(g) (x) u(g)]|.
double symmetry_residual(const ModuleCategory &cat, const Matrix &op);

/// Group average of op under the diagonal A4 action.
Matrix symmetrize(const ModuleCategory &cat, const Matrix &op);

/// Coefficients of a symmetric 9x9 operator in the basis T_i T_j^dag; throws if op is not A4-symmetric.
LocalCoefficients extract_coefficients(const ModuleCategory &cat, const Matrix &op, std::string provenance = "custom");
Matrix            reconstruct(const ModuleCategory &cat, const LocalCoefficients &c);

/// Coefficients of h0 + J1 h1 + J2 h2.
LocalCoefficients model_coefficients(const ModuleCategory &cat, double J1, double J2);

enum class DualModelLabel { Original, RepZ2, RepZ3, RepD2, RepPsiD2, RepA4, RepPsiA4 };

struct DualLabelInfo {
    DualModelLabel label;
    const char    *display;
    const char    *slug;
    const char    *subgroup;
    bool           twisted;
};

std::span<const DualLabelInfo> dual_labels();
const DualLabelInfo           &label_info(DualModelLabel label);

/// Accepts display names ("Rep^psi(A4)") or slugs ("RepPsiA4"), case-insensitively; the error lists all seven.
DualModelLabel parse_dual_label(std::string_view text);

/// Rep^psi(H) over Rep(A4) for the label.
std::shared_ptr<const ModuleCategory> module_category(DualModelLabel label);

/// Local basis state (M2, a, b) of a bond between fixed outer sectors (M1, M3).
struct LocalState {
    int mid    = 0;
    int first  = 0;
    int second = 0;
};

struct DualBlock {
    int                     left = -1, right = -1;
    std::vector<LocalState> basis;
    std::vector<int>        start;    // first basis index with a given mid sector
    std::vector<int>        n_second; // N(mid x 3 -> right) per mid sector
    Matrix                  h;

    [[nodiscard]] bool empty() const { return basis.empty(); }
    [[nodiscard]] int  index(int mid, int first, int second) const {
        return start[static_cast<size_t>(mid)] + first * n_second[static_cast<size_t>(mid)] + second;
    }
};

/// Two-site dual operator as dense blocks per outer sector pair (M1, M3).
class DualLocalOperator {
  public:
    DualLocalOperator(std::shared_ptr<const ModuleCategory> cat, std::vector<DualBlock> blocks);

    [[nodiscard]] const DualBlock      &block(int left, int right) const;
    [[nodiscard]] const ModuleCategory &category() const { return *cat_; }
    [[nodiscard]] const std::shared_ptr<const ModuleCategory> &category_ptr() const { return cat_; }

    /// Sub-block (M1, M2) -> (M1, M2') at fixed M3, acting on (a, b) pairs.
    [[nodiscard]] Matrix sector_block(int m1, int m2, int m2p, int m3) const;

  private:
    std::shared_ptr<const ModuleCategory> cat_;
    std::vector<DualBlock>                blocks_;
};

/// Changes to the right-tree basis with mixed F-symbols, applies h(V, i, j), and changes back.
DualLocalOperator build_dual_operator(const LocalCoefficients &coeffs, std::shared_ptr<const ModuleCategory> cat);

/// Union over (M1, M3) of block spectra, each repeated dim(M1) dim(M3) times, divided by |H|.
std::vector<double> weighted_two_site_spectrum(const DualLocalOperator &op);

struct ModelSpec {
    double         J1     = 0.0;
    double         J2     = 0.0;
    int            length = 2;
    DualModelLabel dual   = DualModelLabel::Original;
    std::string    left;  // boundary sector labels; empty selects the first sector
    std::string    right;
};

/// Bond Hamiltonian shared by every bond of an open chain with fixed boundary sectors.
struct ChainHamiltonian {
    std::shared_ptr<const ModuleCategory>    cat;
    std::shared_ptr<const DualLocalOperator> bond;
    DualModelLabel                           dual   = DualModelLabel::Original;
    int                                      length = 0;
    int                                      left   = 0;
    int                                      right  = 0;
    double                                   J1 = 0, J2 = 0;

    [[nodiscard]] const DualLocalOperator &term(int) const { return *bond; }
    [[nodiscard]] int                      physical() const { return cat->physical(); }
};

void             validate(const ModelSpec &spec);
ChainHamiltonian hamiltonian_terms(const ModelSpec &spec);

/// Same bond operator with different boundary sectors.
ChainHamiltonian with_boundaries(const ChainHamiltonian &h, int left, int right);

}

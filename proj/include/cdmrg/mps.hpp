#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cdmrg/model.hpp"

namespace cdmrg {

/// Bond space: sector labels (indices into the module objects) with degeneracies, sorted by sector.
struct SectorSpace {
    std::vector<std::pair<int, int>> sectors;

    [[nodiscard]] int  dim(int m) const;
    [[nodiscard]] bool contains(int m) const { return dim(m) > 0; }
    [[nodiscard]] int  total() const;
    void               set(int m, int d); // d == 0 removes the sector

    bool operator==(const SectorSpace &) const = default;
};

struct BlockKey {
    int left  = 0;
    int right = 0;
    int mult  = 0;

    auto operator<=>(const BlockKey &) const = default;
};

/// Blocks (M1, M2, a) of one site, each a d(M1) x d(M2) matrix.
struct MpsTensor {
    std::map<BlockKey, Matrix> blocks;
};

/// MPS on the constrained Hilbert space of a dual model: site i sits between bonds i and i+1.
struct ConstrainedMps {
    std::shared_ptr<const ModuleCategory> cat;
    DualModelLabel                        label = DualModelLabel::Original;
    std::vector<SectorSpace>              bonds; // length + 1
    std::vector<MpsTensor>                sites;
    int                                   center = -1;

    [[nodiscard]] int length() const { return static_cast<int>(sites.size()); }
    [[nodiscard]] int physical() const { return cat->physical(); }
    [[nodiscard]] int left_sector() const { return bonds.front().sectors.at(0).first; }
    [[nodiscard]] int right_sector() const { return bonds.back().sectors.at(0).first; }
};

/// Checks admissibility of every block key, block shapes against the bonds and single-sector boundaries.
void validate(const ConstrainedMps &mps);

/// Per-bond sector degeneracies reachable from both boundaries, capped by `budget` (indexed by sector).
std::vector<SectorSpace> admissible_bonds(const ModuleCategory &cat, int length, int left, int right, const std::vector<int> &budget);

/// Random Gaussian MPS on the admissible bonds. Sectors listed in `bias` get zero blocks in the bulk.
ConstrainedMps random_init(const ChainHamiltonian &h, const std::vector<int> &budget, std::uint64_t seed, const std::vector<int> &bias = {});
ConstrainedMps random_init(const ChainHamiltonian &h, int budget_per_sector, std::uint64_t seed, const std::vector<int> &bias = {});

/// Rows (M1, a) of a site tensor feeding right sector M2, or columns (M3, b) leaving left sector M1.
struct Grouping {
    struct Part {
        int sector = 0;
        int mult   = 0;
        int offset = 0;
        int dim    = 0;
    };
    std::vector<Part> parts;
    int               size = 0;

    [[nodiscard]] const Part *find(int sector, int mult) const;
};

Grouping left_grouping(const ModuleCategory &cat, const SectorSpace &left_bond, int m2);
Grouping right_grouping(const ModuleCategory &cat, int m1, const SectorSpace &right_bond);

/// [K(M2) x d(M2)] matrix stacking blocks (M1, M2, a); missing blocks read as zero.
Matrix group_left(const MpsTensor &t, const Grouping &g, int m2, int d2);
/// [d(M1) x K'(M1)] matrix concatenating blocks (M1, M3, b).
Matrix group_right(const MpsTensor &t, const Grouping &g, int m1, int d1);
void   scatter_left(MpsTensor &t, const Grouping &g, int m2, const Matrix &m);
void   scatter_right(MpsTensor &t, const Grouping &g, int m1, const Matrix &m);

/// Left-canonicalizes sites [0, up_to) and moves the center to up_to.
void canonicalize_left(ConstrainedMps &mps, int up_to);
/// Right-canonicalizes sites (down_to, L) and moves the center to down_to.
void canonicalize_right(ConstrainedMps &mps, int down_to);
/// Mixed canonical form with the given center, normalized to unit norm.
void canonicalize(ConstrainedMps &mps, int center);

double norm(const ConstrainedMps &mps);
void   scale(ConstrainedMps &mps, Scalar s);

/// max over right sectors of |A^dag A - 1| for site i, or of |B B^dag - 1| for right isometries.
double left_isometry_residual(const ConstrainedMps &mps, int site);
double right_isometry_residual(const ConstrainedMps &mps, int site);

struct SchmidtValue {
    int    sector = 0;
    double lambda = 0.0;
};

/// Schmidt values across one bond. lambda = sigma / sqrt(dim M) where sigma are the singular values of the
/// sector blocks normalized to sum sigma^2 = 1, so that sum dim(M) lambda^2 = 1. Sorted descending.
struct EntanglementSpectrum {
    int                       cut = 0;
    std::vector<SchmidtValue> values;

    [[nodiscard]] double weighted_norm(const ModuleCategory &cat) const;
};

/// Spectrum across bond `cut` (1 <= cut <= L-1); works on a canonicalized copy.
EntanglementSpectrum entanglement_spectrum(const ConstrainedMps &mps, int cut);
/// Spectra across every bond 1..L-1 from one sweep.
std::vector<EntanglementSpectrum> entanglement_spectra(const ConstrainedMps &mps);
/// Spectrum from per-sector singular values; drops values below `floor` after normalization.
EntanglementSpectrum spectrum_from_singular_values(const ModuleCategory &cat, int cut, const std::vector<std::pair<int, RealVector>> &sv,
                                                   double floor = 0.0);

std::size_t memory_bytes(const MpsTensor &t);
std::size_t memory_bytes(const ConstrainedMps &mps);
int         mid_site(int length);
std::size_t mid_memory_bytes(const ConstrainedMps &mps);
std::vector<std::size_t> memory_breakdown(const ConstrainedMps &mps);

/// Maps a dual MPS to an MPS of the original spin chain. Bond b carries sum_M dim(M) d(M) states ordered by
/// (M, m, d); the boundary bonds keep their dim(M0) and dim(ML) internal states open.
ConstrainedMps intertwine_to_original(const ConstrainedMps &mps);

/// Closes open boundary legs of an Original-label MPS with unit vectors e_m0 and e_mL.
ConstrainedMps project_boundary(const ConstrainedMps &mps, int m0, int mL);

/// Spectrum as CSV rows "cut,sector,lambda"; lambda at 17 significant digits.
void                 write_spectrum_csv(const std::filesystem::path &path, const ModuleCategory &cat, const std::vector<EntanglementSpectrum> &spectra);
std::vector<EntanglementSpectrum> read_spectrum_csv(const std::filesystem::path &path, const ModuleCategory &cat);

/// Container: magic line, manifest JSON line, then raw little-endian complex doubles per block (row-major,
/// blocks in (site, M1, M2, a) order).
void           save_mps(const std::filesystem::path &path, const ConstrainedMps &mps);
ConstrainedMps load_mps(const std::filesystem::path &path);

}

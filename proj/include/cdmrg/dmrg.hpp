#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdmrg/krylov.hpp"
#include "cdmrg/mps.hpp"

namespace cdmrg {

struct SweepReport;

struct DmrgConfig {
    double                   lambda_min          = 1e-6; // relative to the largest singular value at the cut
    int                      max_bond_per_sector = 512;
    int                      max_sweeps          = 30;
    int                      min_sweeps          = 2;
    double                   energy_tol          = 1e-10; // sweep-to-sweep; raised to the discarded weight times max(1, |E|)
    double                   eig_tol             = 1e-10;
    int                      eig_max_iter        = 200;
    int                      krylov_dim          = 30;
    int                      init_bond           = 4;
    std::uint64_t            seed                = 1;
    std::vector<std::string> bias; // sector labels suppressed in the bulk of the initial state

    std::function<void(const SweepReport &)> observer; // called after every half-sweep
};

void validate(const DmrgConfig &cfg);

/// Per-sector square matrices on one bond.
using SectorMatrices = std::map<int, Matrix>;

/// left[b] is the Hamiltonian of sites [0, b) on bond b, right[b] that of sites [b, L).
struct Environment {
    std::vector<SectorMatrices> left, right;
};

/// Operator on the left index (M1, k, a) of a two-site block at (site, site+1), one matrix per middle sector:
/// hl acting on k plus the bond (site-1, site) contracted through site-1.
SectorMatrices left_block_operator(const ChainHamiltonian &h, const ConstrainedMps &mps, const SectorMatrices &hl, int site);
/// Operator on the right index (M3, k, b) of a two-site block ending at `site`, one matrix per left sector of `site`.
SectorMatrices right_block_operator(const ChainHamiltonian &h, const ConstrainedMps &mps, const SectorMatrices &hr, int site);
/// left[site+1] from a left isometry at `site`.
SectorMatrices grow_left(const ConstrainedMps &mps, const SectorMatrices &el, int site);
/// right[site] from a right isometry at `site`.
SectorMatrices grow_right(const ConstrainedMps &mps, const SectorMatrices &er, int site);

SectorMatrices zero_environment(const SectorSpace &bond);

/// Environments for a mixed-canonical MPS: left up to the center, right from center+2.
Environment build_environment(const ChainHamiltonian &h, const ConstrainedMps &mps);

/// <psi|H|psi> / <psi|psi>; open boundary legs are traced over.
double energy_expectation(const ChainHamiltonian &h, const ConstrainedMps &mps);

/// Two-site block at (site, site+1) as one matrix per middle sector, rows (M1, k1, a), columns (M3, k3, b).
struct TwoSiteLayout {
    struct Sector {
        int          mid = 0;
        Grouping     rows, cols;
        Eigen::Index offset = 0;
    };
    int                 site = 0;
    std::vector<Sector> sectors;
    Eigen::Index        size = 0;

    [[nodiscard]] const Sector *find(int mid) const;
};

/// Middle sectors with nonempty row and column groupings, including sectors absent from the current bond.
TwoSiteLayout two_site_layout(const ConstrainedMps &mps, int site);
Vector        two_site_block(const ConstrainedMps &mps, const TwoSiteLayout &layout);
Eigen::Map<const Matrix> sector_view(const Vector &theta, const TwoSiteLayout::Sector &s);

class EffectiveHamiltonian {
  public:
    EffectiveHamiltonian(const ChainHamiltonian &h, TwoSiteLayout layout, SectorMatrices left, SectorMatrices right);

    [[nodiscard]] Vector               apply(const Vector &theta) const;
    [[nodiscard]] Matrix               dense() const;
    [[nodiscard]] const TwoSiteLayout &layout() const { return layout_; }
    [[nodiscard]] const SectorMatrices &left() const { return left_; }
    [[nodiscard]] const SectorMatrices &right() const { return right_; }

  private:
    struct CenterTerm {
        int          from, to;
        Eigen::Index from_row, from_col, to_row, to_col;
        int          rows, cols;
        Scalar       value;
    };
    TwoSiteLayout           layout_;
    SectorMatrices          left_, right_;
    std::vector<CenterTerm> center_;
};

EffectiveHamiltonian effective_hamiltonian(const ChainHamiltonian &h, const ConstrainedMps &mps, const Environment &env, int site);

EigenPair solve_ground(const EffectiveHamiltonian &heff, const Vector &theta0, const DmrgConfig &cfg);

enum class Direction { LeftToRight, RightToLeft };

struct SplitResult {
    EntanglementSpectrum spectrum; // kept values, normalized against the full block
    double               discarded_weight = 0.0;
    int                  kept             = 0;
};

/// Per-sector SVD of theta; writes sites (site, site+1) and bond site+1 and moves the center in `dir`.
SplitResult split_truncate(ConstrainedMps &mps, const TwoSiteLayout &layout, const Vector &theta, const DmrgConfig &cfg, Direction dir);

struct SweepReport {
    int         sweep = 0;
    Direction   direction = Direction::LeftToRight;
    double      energy           = 0.0;
    double      variance         = 0.0; // max over steps of the two-site residual norm squared
    double      discarded_weight = 0.0; // max over steps
    int         total_bond_dim   = 0;   // mid-chain bond
    SectorSpace mid_bond;
    int         matvecs = 0;
    bool        eig_converged = true;
    double      seconds = 0.0;
};

struct DmrgResult {
    ConstrainedMps           mps;
    std::vector<SweepReport> history;
    double                   energy    = 0.0;
    int                      sweeps    = 0;
    bool                     converged = false;
};

/// Two-site sweeps from a random state, or from `init` when given.
DmrgResult run(const ChainHamiltonian &h, const DmrgConfig &cfg, const ConstrainedMps *init = nullptr);
DmrgResult run(const ModelSpec &spec, const DmrgConfig &cfg);

struct BoundaryScan {
    DmrgResult                                best;
    int                                       left = 0, right = 0;
    std::vector<std::tuple<int, int, double>> energies; // (left, right, energy) per scanned pair
};

/// Boundary pairs (first sector, M) for every reachable M; the lowest energy wins, ties within `degeneracy_tol`
/// go to the smaller mid-chain memory. With `warm`, only its pairs are scanned, each starting from the stored state.
BoundaryScan scan_boundaries(const ChainHamiltonian &h, const DmrgConfig &cfg, double degeneracy_tol = 1e-8,
                             const std::map<std::pair<int, int>, ConstrainedMps> *warm = nullptr,
                             std::map<std::pair<int, int>, ConstrainedMps> *states = nullptr);

/// Columns sweep, direction, energy, variance, discarded_weight, total_bond_dim, matvecs, seconds.
void write_report_csv(const std::filesystem::path &path, const std::vector<SweepReport> &history);

}

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdmrg/config.hpp"

namespace cdmrg {

/// One (point, label, L, lambda_min) run. Paths are relative to the output directory.
struct RunRecord {
    std::string label; // slug
    double      J1 = 0, J2 = 0;
    int         length     = 0;
    double      lambda_min = 0;
    std::string left, right; // boundary sectors of the selected state
    double      energy           = 0;
    int         sweeps           = 0;
    bool        converged        = false;
    std::size_t mid_memory_bytes = 0;
    int         mid_bond_dim     = 0;
    double      discarded_weight = 0;
    double      oracle_energy    = 0; // NaN when not computed
    std::string spectrum_file, report_file, state_file;
    bool        ok = false;
    std::string error;
    double      seconds = 0; // wall time, excluded from determinism

    [[nodiscard]] bool has_oracle() const { return oracle_energy == oracle_energy; }
};

struct RunSummary {
    std::vector<RunRecord> runs;

    [[nodiscard]] bool all_ok() const;
};

/// Per-run directory below the output directory, e.g. "J1_1_J2_1/RepA4_L40".
std::string run_directory(double J1, double J2, const std::string &slug, int length);
std::string run_stem(const std::string &slug, int length, double lambda_min);

/// Runs every (point, label, L) job over the descending lambda_min list, warm-starting each lambda from the
/// previous one. Jobs run on cfg.workers threads; failures are recorded and the suite continues.
RunSummary run_suite(const RunConfig &cfg, std::ostream *log = nullptr);

/// summary.jsonl and summary.csv in `dir`; fields in a fixed order, floats at 17 significant digits.
void       emit_summary(const RunSummary &summary, const std::filesystem::path &dir);
RunSummary read_summary_jsonl(const std::filesystem::path &path);
RunSummary read_summary_csv(const std::filesystem::path &path);

/// Field names in output order.
const std::vector<std::string> &summary_fields();

}

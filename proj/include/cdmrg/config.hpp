#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cdmrg/dmrg.hpp"

namespace cdmrg {

inline constexpr const char *config_schema = "cdmrg-run/1";

/// Batch configuration. YAML with the sections model, dmrg, boundaries and run; see README for the keys.
struct RunConfig {
    std::vector<std::pair<double, double>> points{{1, 1}, {-2, -5}, {-5, 1}};
    std::vector<int>                       lengths{40};
    std::vector<DualModelLabel>            labels;
    std::vector<double>                    lambda_min{1e-4, 1e-5, 1e-6}; // descending
    DmrgConfig                             dmrg;

    std::string left;                  // boundary sector label, empty for the first sector
    std::string right;                 // boundary sector label, empty to scan every reachable sector
    double      degeneracy_tol = 1e-8; // energy ties between boundary pairs
    double      window         = 1e-6; // relative energy window for pairs kept after the first lambda_min

    std::filesystem::path output = "out";
    std::uint64_t         seed   = 1;
    int                   workers        = 1;
    bool                  oracle         = false;
    double                oracle_max_dim = 20000;
    bool                  save_states    = true;
};

/// Throws Error with the offending key and line on any problem.
RunConfig   parse_config(const std::filesystem::path &path);
RunConfig   parse_config_string(const std::string &text, const std::string &origin = "<string>");
std::string serialize_config(const RunConfig &cfg);
void        validate(const RunConfig &cfg);

/// Labels from a comma-separated list.
std::vector<DualModelLabel> parse_label_list(const std::string &list);

}

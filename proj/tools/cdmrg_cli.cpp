#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cdmrg/suite.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Constraint-preserving DMRG for the A4-symmetric spin-1 chain and its duals"};

    std::string                  config_path, out_dir, labels;
    std::optional<int>           workers;
    std::optional<std::uint64_t> seed;
    bool                         oracle = false, quiet = false;
    app.add_option("config", config_path, "run configuration (YAML, schema cdmrg-run/1)")->required();
    app.add_option("--out", out_dir, "output directory (overrides run.output)");
    app.add_option("--workers", workers, "concurrent runs")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed (overrides run.seed)");
    app.add_flag("--oracle", oracle, "exact diagonalization cross-check where the dimension permits");
    app.add_option("--labels", labels, "comma-separated dual labels (overrides model.labels)");
    app.add_flag("-q,--quiet", quiet, "no per-run log lines");

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 2);
    }

    cdmrg::RunConfig cfg;
    try {
        cfg = cdmrg::parse_config(config_path);
        if(!out_dir.empty()) cfg.output = out_dir;
        if(workers) cfg.workers = *workers;
        if(seed) cfg.seed = *seed;
        if(oracle) cfg.oracle = true;
        if(!labels.empty()) cfg.labels = cdmrg::parse_label_list(labels);
        cdmrg::validate(cfg);
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        auto summary = cdmrg::run_suite(cfg, quiet ? nullptr : &std::cerr);
        cdmrg::emit_summary(summary, cfg.output);
        int failed = 0;
        for(const auto &r : summary.runs) failed += r.ok ? 0 : 1;
        std::cout << fmt::format("{} runs, {} failed; summary in {}\n", summary.runs.size(), failed, (cfg.output / "summary.jsonl").string());
        return failed ? 1 : 0;
    } catch(const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

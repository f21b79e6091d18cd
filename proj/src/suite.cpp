#include "cdmrg/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "cdmrg/oracle.hpp"

namespace cdmrg {

namespace fs = std::filesystem;

bool RunSummary::all_ok() const {
    for(const auto &r : runs)
        if(!r.ok) return false;
    return true;
}

const std::vector<std::string> &summary_fields() {
    static const std::vector<std::string> f{"label",        "J1",           "J2",           "length",           "lambda_min",
                                            "left",         "right",        "energy",       "sweeps",           "converged",
                                            "mid_memory_bytes", "mid_bond_dim", "discarded_weight", "oracle_energy", "spectrum_file",
                                            "report_file",  "state_file",   "status",       "error",            "seconds"};
    return f;
}

std::string run_directory(double J1, double J2, const std::string &slug, int length) {
    return fmt::format("J1_{:g}_J2_{:g}/{}_L{}", J1, J2, slug, length);
}

std::string run_stem(const std::string &slug, int length, double lambda_min) { return fmt::format("{}_L{}_lm{:g}", slug, length, lambda_min); }

namespace {
    using Clock = std::chrono::steady_clock;

    struct Job {
        double         J1, J2;
        DualModelLabel label;
        int            length;
    };

    using States = std::map<std::pair<int, int>, ConstrainedMps>;

    std::vector<RunRecord> run_job(const RunConfig &cfg, const Job &job, std::ostream *log, std::mutex &log_mutex) {
        const std::string slug = label_info(job.label).slug;
        const std::string dir  = run_directory(job.J1, job.J2, slug, job.length);
        std::vector<RunRecord> out;

        auto note = [&](const std::string &msg) {
            if(!log) return;
            std::lock_guard lock(log_mutex);
            *log << msg << '\n' << std::flush;
        };

        ChainHamiltonian h;
        std::string      setup_error;
        int              fixed_right = -1;
        try {
            h = hamiltonian_terms(ModelSpec{job.J1, job.J2, job.length, job.label, cfg.left, ""});
            if(!cfg.right.empty()) {
                fixed_right = h.cat->find_module(cfg.right);
                if(fixed_right < 0) throw Error(fmt::format("unknown right boundary sector '{}' for {}", cfg.right, slug));
                h = with_boundaries(h, h.left, fixed_right);
            }
            fs::create_directories(cfg.output / dir);
        } catch(const std::exception &e) { setup_error = e.what(); }

        double oracle = std::numeric_limits<double>::quiet_NaN();
        bool   oracle_done = false;
        States warm;

        for(size_t k = 0; k < cfg.lambda_min.size(); ++k) {
            const double lm = cfg.lambda_min[k];
            RunRecord    rec;
            rec.label         = slug;
            rec.J1            = job.J1;
            rec.J2            = job.J2;
            rec.length        = job.length;
            rec.lambda_min    = lm;
            rec.oracle_energy = std::numeric_limits<double>::quiet_NaN();
            const auto t0     = Clock::now();
            try {
                if(!setup_error.empty()) throw Error(setup_error);
                DmrgConfig d = cfg.dmrg;
                d.lambda_min = lm;
                d.seed       = cfg.seed;
                d.observer   = nullptr;

                BoundaryScan sc;
                States       states;
                if(fixed_right >= 0) {
                    auto it    = warm.find({h.left, fixed_right});
                    sc.best    = run(h, d, it == warm.end() ? nullptr : &it->second);
                    sc.left    = h.left;
                    sc.right   = fixed_right;
                    states[{h.left, fixed_right}] = sc.best.mps;
                    sc.energies.emplace_back(h.left, fixed_right, sc.best.energy);
                } else {
                    sc = scan_boundaries(h, d, cfg.degeneracy_tol, warm.empty() ? nullptr : &warm, &states);
                }
                const double emin = sc.best.energy;
                warm.clear();
                for(auto &[key, st] : states)
                    for(const auto &[l, r, e] : sc.energies)
                        if(l == key.first && r == key.second && e <= emin + cfg.window * std::max(1.0, std::abs(emin))) warm[key] = std::move(st);

                const auto &mps  = sc.best.mps;
                const auto  stem = run_stem(slug, job.length, lm);
                rec.spectrum_file = dir + "/spectrum_" + stem + ".csv";
                rec.report_file   = dir + "/report_" + stem + ".csv";
                write_spectrum_csv(cfg.output / rec.spectrum_file, *mps.cat, entanglement_spectra(mps));
                write_report_csv(cfg.output / rec.report_file, sc.best.history);
                if(cfg.save_states) {
                    rec.state_file = dir + "/state_" + stem + ".cdmps";
                    save_mps(cfg.output / rec.state_file, mps);
                }

                rec.left             = h.cat->module_label(sc.left);
                rec.right            = h.cat->module_label(sc.right);
                rec.energy           = sc.best.energy;
                rec.sweeps           = sc.best.sweeps;
                rec.converged        = sc.best.converged;
                rec.mid_memory_bytes = mid_memory_bytes(mps);
                rec.mid_bond_dim     = mps.bonds[size_t(job.length / 2)].total();
                for(const auto &r : sc.best.history) rec.discarded_weight = std::max(rec.discarded_weight, r.discarded_weight);

                if(cfg.oracle && !oracle_done) {
                    oracle_done   = true;
                    auto hb       = with_boundaries(h, sc.left, sc.right);
                    if(basis_dimension(hb) <= cfg.oracle_max_dim) oracle = ground_and_spectrum(hb, 1).values.front();
                }
                rec.oracle_energy = oracle;
                rec.ok            = true;
            } catch(const std::exception &e) {
                rec.ok    = false;
                rec.error = e.what();
                std::replace(rec.error.begin(), rec.error.end(), '\n', ' ');
                warm.clear();
            }
            rec.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
            note(rec.ok ? fmt::format("{} J=({:g},{:g}) L={} lm={:g}: E={:.12f} ({},{}) mem={} sweeps={} {:.1f}s", slug, job.J1, job.J2, job.length, lm,
                                      rec.energy, rec.left, rec.right, rec.mid_memory_bytes, rec.sweeps, rec.seconds)
                        : fmt::format("{} J=({:g},{:g}) L={} lm={:g}: FAILED {}", slug, job.J1, job.J2, job.length, lm, rec.error));
            out.push_back(std::move(rec));
        }
        return out;
    }

    std::string dbl(double x) {
        if(std::isnan(x)) return "";
        return fmt::format("{:.17g}", x);
    }

    std::string csv_quote(const std::string &s) {
        if(s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for(char c : s) {
            if(c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }

    std::vector<std::string> csv_split(const std::string &line) {
        std::vector<std::string> out;
        std::string              cur;
        bool                     quoted = false;
        for(size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if(quoted) {
                if(c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else if(c == '"') quoted = false;
                else cur += c;
            } else if(c == '"') quoted = true;
            else if(c == ',') {
                out.push_back(cur);
                cur.clear();
            } else cur += c;
        }
        out.push_back(cur);
        return out;
    }

    std::vector<std::string> fields_of(const RunRecord &r) {
        return {r.label,
                dbl(r.J1),
                dbl(r.J2),
                std::to_string(r.length),
                dbl(r.lambda_min),
                r.left,
                r.right,
                dbl(r.energy),
                std::to_string(r.sweeps),
                r.converged ? "true" : "false",
                std::to_string(r.mid_memory_bytes),
                std::to_string(r.mid_bond_dim),
                dbl(r.discarded_weight),
                dbl(r.oracle_energy),
                r.spectrum_file,
                r.report_file,
                r.state_file,
                r.ok ? "ok" : "failed",
                r.error,
                dbl(r.seconds)};
    }

    double parse_double(const std::string &s) { return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s); }

    RunRecord from_fields(const std::vector<std::string> &f) {
        if(f.size() != summary_fields().size()) throw Error(fmt::format("summary: expected {} fields, got {}", summary_fields().size(), f.size()));
        RunRecord r;
        r.label            = f[0];
        r.J1               = parse_double(f[1]);
        r.J2               = parse_double(f[2]);
        r.length           = std::stoi(f[3]);
        r.lambda_min       = parse_double(f[4]);
        r.left             = f[5];
        r.right            = f[6];
        r.energy           = parse_double(f[7]);
        r.sweeps           = std::stoi(f[8]);
        r.converged        = f[9] == "true";
        r.mid_memory_bytes = std::stoull(f[10]);
        r.mid_bond_dim     = std::stoi(f[11]);
        r.discarded_weight = parse_double(f[12]);
        r.oracle_energy    = parse_double(f[13]);
        r.spectrum_file    = f[14];
        r.report_file      = f[15];
        r.state_file       = f[16];
        r.ok               = f[17] == "ok";
        r.error            = f[18];
        r.seconds          = parse_double(f[19]);
        return r;
    }

    // fields whose JSON form is a number
    bool numeric_field(size_t i) { return i == 1 || i == 2 || i == 3 || i == 4 || i == 7 || i == 8 || i == 10 || i == 11 || i == 12 || i == 13 || i == 19; }
}

RunSummary run_suite(const RunConfig &cfg, std::ostream *log) {
    validate(cfg);
    std::vector<Job> jobs;
    for(auto [J1, J2] : cfg.points)
        for(auto label : cfg.labels)
            for(int L : cfg.lengths) jobs.push_back({J1, J2, label, L});

    std::vector<std::vector<RunRecord>> results(jobs.size());
    std::atomic<size_t>                 next{0};
    std::mutex                          log_mutex;
    auto                                worker = [&] {
        for(size_t j = next++; j < jobs.size(); j = next++) results[j] = run_job(cfg, jobs[j], log, log_mutex);
    };
    const int nthreads = std::min<int>(cfg.workers, static_cast<int>(jobs.size()));
    if(nthreads <= 1) worker();
    else {
        std::vector<std::jthread> pool;
        for(int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }

    RunSummary s;
    for(auto &rs : results)
        for(auto &r : rs) s.runs.push_back(std::move(r));
    return s;
}

void emit_summary(const RunSummary &summary, const fs::path &dir) {
    fs::create_directories(dir);
    const auto &names = summary_fields();
    {
        std::ofstream js(dir / "summary.jsonl");
        if(!js) throw Error(fmt::format("emit_summary: cannot write {}", (dir / "summary.jsonl").string()));
        for(const auto &r : summary.runs) {
            auto        f = fields_of(r);
            std::string line = "{";
            for(size_t i = 0; i < f.size(); ++i) {
                std::string v;
                if(numeric_field(i)) v = f[i].empty() ? "null" : f[i];
                else if(i == 9) v = f[i];
                else v = nlohmann::json(f[i]).dump();
                line += fmt::format("{}\"{}\":{}", i ? "," : "", names[i], v);
            }
            js << line << "}\n";
        }
        if(!js) throw Error("emit_summary: write failed for summary.jsonl");
    }
    std::ofstream cs(dir / "summary.csv");
    if(!cs) throw Error(fmt::format("emit_summary: cannot write {}", (dir / "summary.csv").string()));
    for(size_t i = 0; i < names.size(); ++i) cs << (i ? "," : "") << names[i];
    cs << '\n';
    for(const auto &r : summary.runs) {
        auto f = fields_of(r);
        for(size_t i = 0; i < f.size(); ++i) cs << (i ? "," : "") << csv_quote(f[i]);
        cs << '\n';
    }
    if(!cs) throw Error("emit_summary: write failed for summary.csv");
}

RunSummary read_summary_jsonl(const fs::path &path) {
    std::ifstream is(path);
    if(!is) throw Error(fmt::format("cannot read {}", path.string()));
    RunSummary s;
    const auto &names = summary_fields();
    for(std::string line; std::getline(is, line);) {
        if(line.empty()) continue;
        auto                     j = nlohmann::json::parse(line);
        std::vector<std::string> f;
        for(size_t i = 0; i < names.size(); ++i) {
            const auto &v = j.at(names[i]);
            if(v.is_null()) f.emplace_back();
            else if(v.is_string()) f.push_back(v.get<std::string>());
            else if(v.is_boolean()) f.emplace_back(v.get<bool>() ? "true" : "false");
            else if(v.is_number_float()) f.push_back(fmt::format("{:.17g}", v.get<double>()));
            else f.push_back(v.dump());
        }
        s.runs.push_back(from_fields(f));
    }
    return s;
}

RunSummary read_summary_csv(const fs::path &path) {
    std::ifstream is(path);
    if(!is) throw Error(fmt::format("cannot read {}", path.string()));
    std::string header;
    std::getline(is, header);
    if(csv_split(header) != summary_fields()) throw Error(fmt::format("{}: unexpected header", path.string()));
    RunSummary s;
    for(std::string line; std::getline(is, line);)
        if(!line.empty()) s.runs.push_back(from_fields(csv_split(line)));
    return s;
}

}

#include "cdmrg/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace cdmrg {

namespace {
    std::string where(const std::string &origin, const YAML::Node &n) {
        const auto m = n.Mark();
        if(m.is_null()) return origin;
        return fmt::format("{}:{}:{}", origin, m.line + 1, m.column + 1);
    }

    void check_keys(const std::string &origin, const YAML::Node &n, const std::string &section, const std::set<std::string> &allowed) {
        if(!n.IsMap()) throw Error(fmt::format("{}: '{}' must be a mapping", where(origin, n), section));
        for(const auto &kv : n) {
            auto key = kv.first.as<std::string>();
            if(!allowed.count(key)) {
                std::string list;
                for(const auto &a : allowed) list += (list.empty() ? "" : ", ") + a;
                throw Error(fmt::format("{}: unknown key '{}' in {} (expected one of: {})", where(origin, kv.first), key, section, list));
            }
        }
    }

    template <class T>
    T scalar(const std::string &origin, const YAML::Node &n, const std::string &key) {
        try {
            return n.as<T>();
        } catch(const YAML::Exception &) {
            throw Error(fmt::format("{}: '{}' has an invalid value", where(origin, n), key));
        }
    }

    template <class T>
    std::vector<T> sequence(const std::string &origin, const YAML::Node &n, const std::string &key) {
        std::vector<T> out;
        if(n.IsScalar()) {
            out.push_back(scalar<T>(origin, n, key));
            return out;
        }
        if(!n.IsSequence()) throw Error(fmt::format("{}: '{}' must be a list", where(origin, n), key));
        for(const auto &x : n) out.push_back(scalar<T>(origin, x, key));
        return out;
    }

    template <class T>
    void read(const std::string &origin, const YAML::Node &sec, const char *key, T &dst) {
        if(auto n = sec[key]) dst = scalar<T>(origin, n, key);
    }
}

std::vector<DualModelLabel> parse_label_list(const std::string &list) {
    std::vector<DualModelLabel> out;
    std::stringstream           ss(list);
    for(std::string item; std::getline(ss, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if(!item.empty()) out.push_back(parse_dual_label(item));
    }
    return out;
}

void validate(const RunConfig &cfg) {
    if(cfg.labels.empty()) throw Error("config: at least one label is required");
    if(cfg.points.empty()) throw Error("config: at least one model point is required");
    if(cfg.lengths.empty()) throw Error("config: at least one length is required");
    for(int L : cfg.lengths)
        if(L < 2) throw Error(fmt::format("config: length {} is below 2", L));
    if(cfg.lambda_min.empty()) throw Error("config: lambda_min needs at least one value");
    for(size_t k = 1; k < cfg.lambda_min.size(); ++k)
        if(!(cfg.lambda_min[k] < cfg.lambda_min[k - 1])) throw Error("config: lambda_min must be strictly descending");
    for(double lm : cfg.lambda_min) {
        DmrgConfig d = cfg.dmrg;
        d.lambda_min = lm;
        validate(d);
    }
    if(cfg.workers < 1) throw Error("config: workers must be positive");
    if(!(cfg.degeneracy_tol >= 0) || !(cfg.window >= 0)) throw Error("config: boundary tolerances must be non-negative");
}

RunConfig parse_config_string(const std::string &text, const std::string &origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch(const YAML::Exception &e) {
        throw Error(fmt::format("{}:{}:{}: {}", origin, e.mark.line + 1, e.mark.column + 1, e.msg));
    }
    if(!root || !root.IsMap()) throw Error(fmt::format("{}: expected a mapping at the top level", origin));
    check_keys(origin, root, "the top level", {"schema", "model", "dmrg", "boundaries", "run"});
    if(!root["schema"]) throw Error(fmt::format("{}: missing 'schema' (expected {})", origin, config_schema));
    auto schema = scalar<std::string>(origin, root["schema"], "schema");
    if(schema != config_schema) throw Error(fmt::format("{}: unsupported schema '{}' (expected {})", where(origin, root["schema"]), schema, config_schema));

    RunConfig cfg;
    auto      model = root["model"];
    if(!model) throw Error(fmt::format("{}: missing section 'model'", origin));
    check_keys(origin, model, "model", {"points", "lengths", "labels"});
    if(auto pts = model["points"]) {
        if(!pts.IsSequence()) throw Error(fmt::format("{}: 'points' must be a list of [J1, J2] pairs", where(origin, pts)));
        cfg.points.clear();
        for(const auto &p : pts) {
            auto v = sequence<double>(origin, p, "points");
            if(v.size() != 2) throw Error(fmt::format("{}: each point needs exactly two couplings", where(origin, p)));
            cfg.points.emplace_back(v[0], v[1]);
        }
    }
    if(auto n = model["lengths"]) cfg.lengths = sequence<int>(origin, n, "lengths");
    if(auto n = model["labels"]) {
        for(const auto &name : sequence<std::string>(origin, n, "labels")) {
            try {
                cfg.labels.push_back(parse_dual_label(name));
            } catch(const Error &e) {
                throw Error(fmt::format("{}: {}", where(origin, n), e.what()));
            }
        }
    }

    if(auto d = root["dmrg"]) {
        check_keys(origin, d, "dmrg",
                   {"lambda_min", "max_bond_per_sector", "max_sweeps", "min_sweeps", "energy_tol", "eig_tol", "eig_max_iter", "krylov_dim", "init_bond", "bias"});
        if(auto n = d["lambda_min"]) cfg.lambda_min = sequence<double>(origin, n, "lambda_min");
        read(origin, d, "max_bond_per_sector", cfg.dmrg.max_bond_per_sector);
        read(origin, d, "max_sweeps", cfg.dmrg.max_sweeps);
        read(origin, d, "min_sweeps", cfg.dmrg.min_sweeps);
        read(origin, d, "energy_tol", cfg.dmrg.energy_tol);
        read(origin, d, "eig_tol", cfg.dmrg.eig_tol);
        read(origin, d, "eig_max_iter", cfg.dmrg.eig_max_iter);
        read(origin, d, "krylov_dim", cfg.dmrg.krylov_dim);
        read(origin, d, "init_bond", cfg.dmrg.init_bond);
        if(auto n = d["bias"]) cfg.dmrg.bias = sequence<std::string>(origin, n, "bias");
    }
    if(auto b = root["boundaries"]) {
        check_keys(origin, b, "boundaries", {"left", "right", "degeneracy_tol", "window"});
        read(origin, b, "left", cfg.left);
        read(origin, b, "right", cfg.right);
        if(cfg.right == "scan") cfg.right.clear();
        read(origin, b, "degeneracy_tol", cfg.degeneracy_tol);
        read(origin, b, "window", cfg.window);
    }
    if(auto r = root["run"]) {
        check_keys(origin, r, "run", {"output", "seed", "workers", "oracle", "oracle_max_dim", "save_states"});
        std::string out = cfg.output.string();
        read(origin, r, "output", out);
        cfg.output = out;
        read(origin, r, "seed", cfg.seed);
        read(origin, r, "workers", cfg.workers);
        read(origin, r, "oracle", cfg.oracle);
        read(origin, r, "oracle_max_dim", cfg.oracle_max_dim);
        read(origin, r, "save_states", cfg.save_states);
    }
    cfg.dmrg.seed = cfg.seed;
    try {
        validate(cfg);
    } catch(const Error &e) {
        throw Error(fmt::format("{}: {}", origin, e.what()));
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path &path) {
    std::ifstream is(path);
    if(!is) throw Error(fmt::format("cannot read configuration {}", path.string()));
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_string(ss.str(), path.string());
}

std::string serialize_config(const RunConfig &cfg) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "schema" << YAML::Value << config_schema;
    e << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "points" << YAML::Value << YAML::BeginSeq;
    for(auto [a, b] : cfg.points) e << YAML::Flow << YAML::BeginSeq << a << b << YAML::EndSeq;
    e << YAML::EndSeq;
    e << YAML::Key << "lengths" << YAML::Value << YAML::Flow << cfg.lengths;
    e << YAML::Key << "labels" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for(auto l : cfg.labels) e << label_info(l).slug;
    e << YAML::EndSeq << YAML::EndMap;
    e << YAML::Key << "dmrg" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "lambda_min" << YAML::Value << YAML::Flow << cfg.lambda_min;
    e << YAML::Key << "max_bond_per_sector" << YAML::Value << cfg.dmrg.max_bond_per_sector;
    e << YAML::Key << "max_sweeps" << YAML::Value << cfg.dmrg.max_sweeps;
    e << YAML::Key << "min_sweeps" << YAML::Value << cfg.dmrg.min_sweeps;
    e << YAML::Key << "energy_tol" << YAML::Value << cfg.dmrg.energy_tol;
    e << YAML::Key << "eig_tol" << YAML::Value << cfg.dmrg.eig_tol;
    e << YAML::Key << "eig_max_iter" << YAML::Value << cfg.dmrg.eig_max_iter;
    e << YAML::Key << "krylov_dim" << YAML::Value << cfg.dmrg.krylov_dim;
    e << YAML::Key << "init_bond" << YAML::Value << cfg.dmrg.init_bond;
    e << YAML::Key << "bias" << YAML::Value << YAML::Flow << cfg.dmrg.bias;
    e << YAML::EndMap;
    e << YAML::Key << "boundaries" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "left" << YAML::Value << cfg.left;
    e << YAML::Key << "right" << YAML::Value << (cfg.right.empty() ? std::string("scan") : cfg.right);
    e << YAML::Key << "degeneracy_tol" << YAML::Value << cfg.degeneracy_tol;
    e << YAML::Key << "window" << YAML::Value << cfg.window;
    e << YAML::EndMap;
    e << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "output" << YAML::Value << cfg.output.string();
    e << YAML::Key << "seed" << YAML::Value << cfg.seed;
    e << YAML::Key << "workers" << YAML::Value << cfg.workers;
    e << YAML::Key << "oracle" << YAML::Value << cfg.oracle;
    e << YAML::Key << "oracle_max_dim" << YAML::Value << cfg.oracle_max_dim;
    e << YAML::Key << "save_states" << YAML::Value << cfg.save_states;
    e << YAML::EndMap << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

}

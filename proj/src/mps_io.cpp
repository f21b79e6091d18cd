#include <bit>
#include <cstdint>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "cdmrg/mps.hpp"

namespace cdmrg {

namespace {
    constexpr const char *kMagic = "CDMRG-MPS 1";

    void put_double(std::ostream &os, double x) {
        auto u = std::bit_cast<std::uint64_t>(x);
        char b[8];
        for(int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xffu);
        os.write(b, 8);
    }

    double get_double(std::istream &is) {
        unsigned char b[8];
        is.read(reinterpret_cast<char *>(b), 8);
        if(!is) throw Error("load_mps: truncated payload");
        std::uint64_t u = 0;
        for(int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
        return std::bit_cast<double>(u);
    }
}

void save_mps(const std::filesystem::path &path, const ConstrainedMps &mps) {
    using nlohmann::json;
    const auto &cat = *mps.cat;
    json        manifest;
    manifest["label"]  = label_info(mps.label).slug;
    manifest["length"] = mps.length();
    manifest["left"]   = cat.module_label(mps.left_sector());
    manifest["right"]  = cat.module_label(mps.right_sector());
    manifest["center"] = mps.center;
    json bonds         = json::array();
    for(const auto &b : mps.bonds) {
        json s = json::array();
        for(const auto &[m, d] : b.sectors) s.push_back({cat.module_label(m), d});
        bonds.push_back(s);
    }
    manifest["bonds"] = bonds;
    json blocks       = json::array();
    for(int i = 0; i < mps.length(); ++i)
        for(const auto &[key, blk] : mps.sites[size_t(i)].blocks)
            blocks.push_back({{"site", i}, {"left", cat.module_label(key.left)}, {"right", cat.module_label(key.right)},
                              {"mult", key.mult}, {"rows", blk.rows()}, {"cols", blk.cols()}});
    manifest["blocks"] = blocks;
    std::ofstream os(path, std::ios::binary);
    if(!os) throw Error(fmt::format("save_mps: cannot open {}", path.string()));
    os << kMagic << '\n' << manifest.dump() << '\n';
    for(int i = 0; i < mps.length(); ++i)
        for(const auto &[key, blk] : mps.sites[size_t(i)].blocks)
            for(Eigen::Index r = 0; r < blk.rows(); ++r)
                for(Eigen::Index c = 0; c < blk.cols(); ++c) {
                    put_double(os, blk(r, c).real());
                    put_double(os, blk(r, c).imag());
                }
    if(!os) throw Error(fmt::format("save_mps: I/O error writing {}", path.string()));
}

ConstrainedMps load_mps(const std::filesystem::path &path) {
    using nlohmann::json;
    std::ifstream is(path, std::ios::binary);
    if(!is) throw Error(fmt::format("load_mps: cannot open {}", path.string()));
    std::string magic, line;
    std::getline(is, magic);
    if(magic != kMagic) throw Error(fmt::format("load_mps: {} is not an MPS container", path.string()));
    std::getline(is, line);
    json           manifest = json::parse(line);
    ConstrainedMps mps;
    mps.label      = parse_dual_label(manifest.at("label").get<std::string>());
    mps.cat        = module_category(mps.label);
    mps.center     = manifest.at("center").get<int>();
    const int L    = manifest.at("length").get<int>();
    mps.sites.resize(size_t(L));
    for(const auto &b : manifest.at("bonds")) {
        SectorSpace s;
        for(const auto &e : b) s.set(mps.cat->find_module(e.at(0).get<std::string>()), e.at(1).get<int>());
        mps.bonds.push_back(s);
    }
    for(const auto &b : manifest.at("blocks")) {
        const int site = b.at("site").get<int>();
        BlockKey  key{mps.cat->find_module(b.at("left").get<std::string>()), mps.cat->find_module(b.at("right").get<std::string>()),
                     b.at("mult").get<int>()};
        Matrix    blk(b.at("rows").get<Eigen::Index>(), b.at("cols").get<Eigen::Index>());
        for(Eigen::Index r = 0; r < blk.rows(); ++r)
            for(Eigen::Index c = 0; c < blk.cols(); ++c) {
                double re = get_double(is);
                double im = get_double(is);
                blk(r, c) = Scalar(re, im);
            }
        mps.sites.at(size_t(site)).blocks[key] = std::move(blk);
    }
    validate(mps);
    return mps;
}

}

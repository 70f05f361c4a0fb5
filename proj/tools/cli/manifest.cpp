#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>

#include <openssl/evp.h>

#include "bridgerank/error.hpp"
#include "bridgerank/util/tsv.hpp"
#include "cli.hpp"

namespace bridgerank::cli {

namespace fs = std::filesystem;

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> md(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!md || EVP_DigestInit_ex(md.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 unavailable");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        EVP_DigestUpdate(md.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
    unsigned len = 0;
    EVP_DigestFinal_ex(md.get(), digest.data(), &len);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

RunManifest::RunManifest(std::string subcommand)
    : subcommand_(std::move(subcommand)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const std::string& role, const std::string& path) {
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        json digests = json::object();
        for (const auto& f : files) digests[f.filename().string()] = sha256_file(f.string());
        inputs_[role] = {{"path", path}, {"files", digests}};
    } else {
        inputs_[role] = {{"path", path}, {"sha256", sha256_file(path)}};
    }
}

void RunManifest::write(const std::string& out_dir) const {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    json j;
    j["subcommand"] = subcommand_;
    j["version"] = std::string(kVersion);
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["seed"] = seed_ ? json(*seed_) : json(nullptr);
    j["threads"] = threads_;
    j["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    auto out = util::open_output(out_path(out_dir, "manifest.json"));
    out << j.dump(2) << '\n';
}

}  // namespace bridgerank::cli

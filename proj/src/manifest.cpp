#include "gethlab/manifest.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <fmt/format.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace gethlab::io {

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

void RunManifest::add_output(const std::filesystem::path& root, const std::filesystem::path& file) {
    outputs[std::filesystem::relative(file, root).generic_string()] = sha256_file(file);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["cache_keys"] = cache_keys;
    auto& stages = j["stage_seconds"] = nlohmann::ordered_json::array();
    for (const auto& [name, s] : stage_seconds) stages.push_back({{"stage", name}, {"seconds", s}});
    j["outputs"] = outputs;
    return j.dump();
}

void RunManifest::append_to(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::app);
    if (!f) throw std::runtime_error("cannot append to " + path.string());
    f << to_json() << '\n';
}

StageTimer::StageTimer(RunManifest& m, std::string stage)
    : manifest_(m), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}

StageTimer::~StageTimer() {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_.stage_seconds.emplace_back(stage_, s);
}

}  // namespace gethlab::io

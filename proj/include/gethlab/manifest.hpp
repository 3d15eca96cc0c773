#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gethlab::io {

inline constexpr const char* kToolVersion = "geth-lab 0.1.0";

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Record of one CLI invocation: config snapshot, cache keys, per-stage wall clock and output hashes.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::vector<std::string> cache_keys;
    std::vector<std::pair<std::string, double>> stage_seconds;
    std::map<std::string, std::string> outputs;  // path relative to the output directory -> sha256

    void add_output(const std::filesystem::path& root, const std::filesystem::path& file);
    std::string to_json() const;
    /// Appends one JSON line to `path` (manifests are never rewritten).
    void append_to(const std::filesystem::path& path) const;
};

class StageTimer {
public:
    StageTimer(RunManifest& m, std::string stage);
    ~StageTimer();
    StageTimer(const StageTimer&) = delete;
    StageTimer& operator=(const StageTimer&) = delete;

private:
    RunManifest& manifest_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace gethlab::io

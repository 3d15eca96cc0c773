#pragma once

#include "gethlab/spectra.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gethlab::io {

/// On-disk store of sector spectra keyed by {format version, N, J, U, sector}. Files carry a
/// binary header; anything that does not match (bad magic, version, key, truncated payload)
/// is reported as a warning and treated as a miss.
class SpectrumCache {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    /// An empty directory disables the cache.
    explicit SpectrumCache(std::filesystem::path dir = {});

    bool enabled() const { return !dir_.empty(); }
    const std::filesystem::path& directory() const { return dir_; }

    static std::string key(const spectra::ModelParams& p, const fock::SectorLabel& label);
    std::filesystem::path path_for(const spectra::ModelParams& p, const fock::SectorLabel& label) const;

    /// Cached spectrum if present and valid; with `need_vectors`, entries without vectors are misses.
    std::optional<spectra::SectorSpectrum> load(const spectra::ModelParams& p, const fock::SectorLabel& label,
                                                bool need_vectors);
    void store(const spectra::ModelParams& p, const spectra::SectorSpectrum& s);
    /// The omega^2 entry: energies only, marked as the conjugate of the omega sector.
    void store_conjugate_marker(const spectra::ModelParams& p, const spectra::SectorSpectrum& omega);

    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    const std::vector<std::string>& keys_used() const { return keys_; }

private:
    void write_entry(const spectra::ModelParams& p, const fock::SectorLabel& label, const Eigen::VectorXd& energies,
                     const Eigen::MatrixXcd* vectors, std::uint8_t kind);

    std::filesystem::path dir_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
    std::vector<std::string> warnings_;
    std::vector<std::string> keys_;
};

}  // namespace gethlab::io

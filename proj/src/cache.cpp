#include "gethlab/cache.hpp"

#include <fmt/format.h>

#include <array>
#include <cstring>
#include <fstream>
#include <iostream>

namespace gethlab::io {

namespace {

constexpr std::array<char, 8> kMagic{'G', 'E', 'T', 'H', 'S', 'P', 'E', 'C'};

enum VectorKind : std::uint8_t { none = 0, real = 1, complex = 2, conjugate_of_omega = 3 };

#pragma pack(push, 1)
struct Header {
    char magic[8];
    std::uint32_t version;
    std::int32_t N;
    double J;
    double U;
    std::int32_t r;
    std::int32_t s;  // 0 when absent
    std::int64_t dim;
    std::uint8_t kind;
};
#pragma pack(pop)

std::string double_key(double v) { return fmt::format("{:.17g}", v); }

bool is_real(const Eigen::MatrixXcd& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j).imag() != 0.0) return false;
        }
    }
    return true;
}

}  // namespace

SpectrumCache::SpectrumCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (enabled()) std::filesystem::create_directories(dir_);
}

std::string SpectrumCache::key(const spectra::ModelParams& p, const fock::SectorLabel& label) {
    return fmt::format("v{}_N{}_J{}_U{}_{}", kFormatVersion, p.N, double_key(p.J), double_key(p.U), label.name());
}

std::filesystem::path SpectrumCache::path_for(const spectra::ModelParams& p, const fock::SectorLabel& label) const {
    std::string k = key(p, label);
    for (char& c : k) {
        if (c == '+') c = 'p';
        if (c == '-') c = 'm';
    }
    return dir_ / (k + ".bin");
}

std::optional<spectra::SectorSpectrum> SpectrumCache::load(const spectra::ModelParams& p, const fock::SectorLabel& label,
                                                           bool need_vectors) {
    if (!enabled()) return std::nullopt;
    const auto path = path_for(p, label);
    const std::string k = key(p, label);
    auto miss = [&](const std::string& why) -> std::optional<spectra::SectorSpectrum> {
        ++misses_;
        if (!why.empty()) {
            warnings_.push_back("cache entry " + path.string() + " unusable (" + why + "); recomputing");
            std::cerr << "warning: " << warnings_.back() << '\n';
        }
        return std::nullopt;
    };
    std::ifstream in(path, std::ios::binary);
    if (!in) return miss("");
    Header h{};
    if (!in.read(reinterpret_cast<char*>(&h), sizeof h)) return miss("truncated header");
    if (std::memcmp(h.magic, kMagic.data(), kMagic.size()) != 0) return miss("bad magic");
    if (h.version != kFormatVersion) return miss("format version " + std::to_string(h.version));
    if (h.N != p.N || h.J != p.J || h.U != p.U || h.r != static_cast<int>(label.r) || h.s != label.s.value_or(0)) {
        return miss("key mismatch");
    }
    if (h.dim < 0 || h.kind > conjugate_of_omega) return miss("bad header fields");
    const auto n = static_cast<Eigen::Index>(h.dim);
    std::uintmax_t expected = sizeof(Header) + static_cast<std::uintmax_t>(n) * sizeof(double);
    if (h.kind == real) expected += static_cast<std::uintmax_t>(n) * n * sizeof(double);
    if (h.kind == complex) expected += static_cast<std::uintmax_t>(n) * n * 2 * sizeof(double);
    std::error_code ec;
    if (std::filesystem::file_size(path, ec) != expected || ec) return miss("size mismatch");
    if (need_vectors && (h.kind == none || h.kind == conjugate_of_omega)) return miss("");

    spectra::SectorSpectrum s;
    s.label = label;
    s.energies.resize(n);
    in.read(reinterpret_cast<char*>(s.energies.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (need_vectors) {
        if (h.kind == real) {
            Eigen::MatrixXd v(n, n);
            in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * n * sizeof(double)));
            s.eigenvectors = v.cast<std::complex<double>>();
        } else {
            s.eigenvectors.resize(n, n);
            in.read(reinterpret_cast<char*>(s.eigenvectors.data()),
                    static_cast<std::streamsize>(n * n * 2 * sizeof(double)));
        }
    }
    if (!in) return miss("read failure");
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(s.energies(i) >= s.energies(i - 1))) return miss("energies not ascending");
    }
    ++hits_;
    keys_.push_back(k);
    return s;
}

void SpectrumCache::write_entry(const spectra::ModelParams& p, const fock::SectorLabel& label,
                                const Eigen::VectorXd& energies, const Eigen::MatrixXcd* vectors, std::uint8_t kind) {
    if (!enabled()) return;
    Header h{};
    std::memcpy(h.magic, kMagic.data(), kMagic.size());
    h.version = kFormatVersion;
    h.N = p.N;
    h.J = p.J;
    h.U = p.U;
    h.r = static_cast<int>(label.r);
    h.s = label.s.value_or(0);
    h.dim = energies.size();
    h.kind = kind;
    const auto path = path_for(p, label);
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out.write(reinterpret_cast<const char*>(&h), sizeof h);
        out.write(reinterpret_cast<const char*>(energies.data()),
                  static_cast<std::streamsize>(energies.size() * sizeof(double)));
        if (kind == real) {
            const Eigen::MatrixXd v = vectors->real();
            out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
        } else if (kind == complex) {
            out.write(reinterpret_cast<const char*>(vectors->data()),
                      static_cast<std::streamsize>(vectors->size() * 2 * sizeof(double)));
        }
        if (!out) throw std::runtime_error("short write to cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
    keys_.push_back(key(p, label));
}

void SpectrumCache::store(const spectra::ModelParams& p, const spectra::SectorSpectrum& s) {
    std::uint8_t kind = none;
    if (s.has_vectors()) kind = is_real(s.eigenvectors) ? real : complex;
    write_entry(p, s.label, s.energies, s.has_vectors() ? &s.eigenvectors : nullptr, kind);
}

void SpectrumCache::store_conjugate_marker(const spectra::ModelParams& p, const spectra::SectorSpectrum& omega) {
    write_entry(p, fock::SectorLabel::make(fock::Rotation::omega2), omega.energies, nullptr, conjugate_of_omega);
}

}  // namespace gethlab::io

#pragma once

#include "gethlab/csv.hpp"
#include "gethlab/pipeline.hpp"

#include <filesystem>
#include <string>
#include <vector>

// Standard CSV tables written by the subcommands and read back by figure/report.
namespace gethlab::tables {

inline constexpr const char* kMicrocanonical = "microcanonical.csv";
inline constexpr const char* kClassicalSummary = "classical/summary.csv";
inline constexpr const char* kChaosProfile = "chaos_profile.csv";

std::string trajectory_file(double energy);
std::string spectrum_file(int N);
std::string subspace_file(int N);

io::CsvTable spectrum_table(const spectra::SectorSet& set);
io::CsvTable subspace_table(const pipeline::SizeAnalysis& a, const microcan::McGrid* me);

io::CsvTable microcanonical_table(const microcan::McGrid& grid);
microcan::McGrid read_microcanonical(const std::filesystem::path& path, const std::string& producer);

io::CsvTable trajectory_table(const pipeline::EnsemblePoint& p);
std::vector<classical::TrajectoryResult> read_trajectories(const std::filesystem::path& path,
                                                           const std::string& producer);
io::CsvTable classical_summary_table(const std::vector<pipeline::EnsemblePoint>& points);
/// Summaries only (no per-trajectory data).
std::vector<pipeline::EnsemblePoint> read_classical_summary(const std::filesystem::path& path,
                                                            const std::string& producer);

io::CsvTable chaos_profile_table(const rmtstats::ChaosProfile& profile);
rmtstats::ChaosProfile read_chaos_profile(const std::filesystem::path& path, const std::string& producer);

}  // namespace gethlab::tables

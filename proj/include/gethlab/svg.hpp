#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

// Minimal native SVG plots: scatter and line series on linear or log-log axes.
namespace gethlab::io {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
    enum class Style { scatter, line } style = Style::scatter;
    std::string color;  // empty: palette
};

struct Plot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
    std::vector<std::pair<double, std::string>> vertical_markers;  // x positions with labels
    int width = 640;
    int height = 420;

    /// Deterministic SVG text (no timestamps). Non-finite or non-positive (on log axes) points are dropped.
    std::string render() const;
    void write(const std::filesystem::path& path) const;
};

/// Several plots stacked vertically in one document.
std::string render_panels(const std::vector<Plot>& panels);
void write_panels(const std::vector<Plot>& panels, const std::filesystem::path& path);

}  // namespace gethlab::io

#include "gethlab/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace gethlab::io {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        switch (c) {
            case '<': o += "&lt;"; break;
            case '>': o += "&gt;"; break;
            case '&': o += "&amp;"; break;
            case '"': o += "&quot;"; break;
            default: o += c;
        }
    }
    return o;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        return (x - a) / (b - a);
    }

    std::vector<double> ticks() const {
        std::vector<double> t;
        if (log) {
            for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
                for (double m : {1.0, 2.0, 5.0}) {
                    const double v = m * std::pow(10.0, e);
                    if (v >= lo * (1 - 1e-9) && v <= hi * (1 + 1e-9)) t.push_back(v);
                }
            }
            return t;
        }
        const double raw = (hi - lo) / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
        return t;
    }
};

Axis make_axis(std::vector<double> vals, bool log) {
    Axis a;
    a.log = log;
    vals.erase(std::remove_if(vals.begin(), vals.end(), [&](double v) { return !std::isfinite(v) || (log && v <= 0); }),
               vals.end());
    if (vals.empty()) {
        a.lo = log ? 1.0 : 0.0;
        a.hi = log ? 10.0 : 1.0;
        return a;
    }
    const auto [mn, mx] = std::minmax_element(vals.begin(), vals.end());
    a.lo = *mn;
    a.hi = *mx;
    if (log) {
        a.lo /= 1.2;
        a.hi *= 1.2;
    } else {
        const double pad = (a.hi - a.lo) > 0 ? 0.05 * (a.hi - a.lo) : std::max(1.0, std::abs(a.lo)) * 0.1;
        a.lo -= pad;
        a.hi += pad;
    }
    return a;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string tick_label(double v) { return fmt::format("{:.3g}", v); }

std::string render_body(const Plot& p, double y0) {
    std::vector<double> xs, ys;
    for (const auto& s : p.series) {
        for (auto [x, y] : s.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    for (const auto& m : p.vertical_markers) xs.push_back(m.first);
    const Axis ax = make_axis(xs, p.log_x);
    const Axis ay = make_axis(ys, p.log_y);
    const double left = 70, right = 150, top = 30, bottom = 50;
    const double pw = p.width - left - right, ph = p.height - top - bottom;
    auto X = [&](double v) { return left + ax.map(v) * pw; };
    auto Y = [&](double v) { return y0 + top + (1.0 - ay.map(v)) * ph; };

    std::string o;
    o += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n", num(left + pw / 2),
                     num(y0 + 18), escape(p.title));
    o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n", num(left),
                     num(y0 + top), num(pw), num(ph));
    for (double t : ax.ticks()) {
        o += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#333\"/>", num(X(t)), num(y0 + top + ph),
                         num(y0 + top + ph + 5));
        o += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n", num(X(t)),
                         num(y0 + top + ph + 18), tick_label(t));
    }
    for (double t : ay.ticks()) {
        o += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#333\"/>", num(left - 5), num(Y(t)), num(left));
        o += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n", num(left - 8),
                         num(Y(t) + 4), tick_label(t));
    }
    o += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n", num(left + pw / 2),
                     num(y0 + p.height - 8), escape(p.xlabel));
    o += fmt::format("<text x=\"14\" y=\"{0}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">{1}</text>\n",
                     num(y0 + top + ph / 2), escape(p.ylabel));
    for (const auto& [x, label] : p.vertical_markers) {
        if (!std::isfinite(x)) continue;
        o += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>", num(X(x)),
                         num(y0 + top), num(y0 + top + ph));
        o += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#666\">{}</text>\n", num(X(x) + 2), num(y0 + top + 10),
                         escape(label));
    }

    std::size_t idx = 0;
    for (const auto& s : p.series) {
        const std::string color = s.color.empty() ? kPalette[idx % std::size(kPalette)] : s.color;
        std::vector<std::pair<double, double>> pts;
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if ((p.log_x && x <= 0) || (p.log_y && y <= 0)) continue;
            pts.emplace_back(X(x), Y(y));
        }
        if (s.style == Series::Style::line && pts.size() > 1) {
            o += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pts.size(); ++i) o += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
            o += "\"/>\n";
        } else {
            for (auto [x, y] : pts) {
                o += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{}\" fill-opacity=\"0.7\"/>\n", num(x), num(y), color);
            }
        }
        const double ly = y0 + top + 14 + 16.0 * static_cast<double>(idx);
        o += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>", num(left + pw + 10), num(ly - 9), color);
        o += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", num(left + pw + 25), num(ly), escape(s.name));
        ++idx;
    }
    return o;
}

}  // namespace

std::string render_panels(const std::vector<Plot>& panels) {
    if (panels.empty()) throw std::invalid_argument("render_panels: no panels");
    int width = 0, height = 0;
    for (const auto& p : panels) {
        width = std::max(width, p.width);
        height += p.height;
    }
    std::string o = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        width, height);
    double y0 = 0.0;
    for (const auto& p : panels) {
        o += render_body(p, y0);
        y0 += p.height;
    }
    return o + "</svg>\n";
}

std::string Plot::render() const { return render_panels({*this}); }

void write_panels(const std::vector<Plot>& panels, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << render_panels(panels);
}

void Plot::write(const std::filesystem::path& path) const { write_panels({*this}, path); }

}  // namespace gethlab::io

// Copyright 2026 The scarkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli_support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace scarkit::cli {

std::string num(double value) {
    if (std::isnan(value)) return "";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return buf;
}

double round15(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(num(value).c_str(), nullptr);
}

Artifacts::Artifacts(std::filesystem::path directory, bool svg) : dir_(std::move(directory)), svg_(svg) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("out", "cannot create directory " + dir_.string() + ": " + ec.message());
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_row(std::ofstream& out, const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i != 0) out << ',';
        out << row[i];
    }
    out << '\n';
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

void Artifacts::csv(const std::string& name, const CsvRow& header, const std::vector<CsvRow>& rows) {
    std::ofstream out = open_output(dir_ / name);
    write_row(out, header);
    for (const CsvRow& r : rows) write_row(out, r);
    written_.push_back(name);
}

void Artifacts::text(const std::string& name, const std::string& content) {
    std::ofstream out = open_output(dir_ / name);
    out << content;
    written_.push_back(name);
}

void Artifacts::json(const std::string& name, const nlohmann::json& value) { text(name, value.dump(2) + "\n"); }

void Artifacts::line_chart(const std::string& name, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel, const std::vector<Series>& series) {
    if (!svg_) return;
    constexpr double W = 720, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n"
        << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << escape(xlabel) << "</text>\n"
        << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">" << escape(ylabel) << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x0 + t * (x1 - x0) / 4, yv = y0 + t * (y1 - y0) / 4;
        char xs[32], ys[32];
        std::snprintf(xs, sizeof xs, "%.4g", xv);
        std::snprintf(ys, sizeof ys, "%.4g", yv);
        svg << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">" << xs
            << "</text>\n"
            << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << ys
            << "</text>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.y[i])) svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        svg << "\"/>\n"
            << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 15 * static_cast<double>(k)
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colour << "\">" << escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    text(name, svg.str());
}

void Artifacts::heat_map(const std::string& name, const std::string& title, int nx, int ny,
                         const std::vector<double>& values) {
    if (!svg_) return;
    constexpr double cell = 3, margin = 30;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values)
        if (std::isfinite(v) && v > 0) {
            lo = std::min(lo, std::log10(v));
            hi = std::max(hi, std::log10(v));
        }
    if (!(hi > lo)) hi = lo + 1;
    std::ostringstream svg;
    const double w = 2 * margin + nx * cell, h = 2 * margin + ny * cell;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
        << "</text>\n";
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double v = values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) +
                                    static_cast<std::size_t>(ix)];
            if (!std::isfinite(v) || v <= 0) continue;
            const double t = (std::log10(v) - lo) / (hi - lo);
            const int r = static_cast<int>(255 * t), b = static_cast<int>(255 * (1 - t));
            svg << "<rect x=\"" << margin + ix * cell << "\" y=\"" << h - margin - (iy + 1) * cell << "\" width=\""
                << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << r << ",40," << b << ")\"/>\n";
        }
    svg << "</svg>\n";
    text(name, svg.str());
}

}  // namespace scarkit::cli

#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "caperc/csv.hpp"

namespace caperc::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
};

struct Axes {
    bool log_x = false;
    bool log_y = false;
    std::string x_label;
    std::string y_label;
    std::string title;
};

struct Plot {
    Series series;
    Axes axes;
};

// Fixed layout; data coordinates are mapped exactly, styling is free.
inline constexpr double plot_width = 640.0;
inline constexpr double plot_height = 480.0;
inline constexpr double plot_margin = 64.0;

namespace detail {

inline double axis_coord(double v, bool log_scale) {
    if (!log_scale) return v;
    if (!(v > 0.0)) throw std::invalid_argument("emit_svg: log axis needs positive values");
    return std::log10(v);
}

}  // namespace detail

/// Standalone single-series scatter+line plot, no external assets.
inline void emit_svg(const Plot& plot, std::ostream& out) {
    const auto& s = plot.series;
    if (s.x.empty() || s.x.size() != s.y.size())
        throw std::invalid_argument("emit_svg: series must be non-empty with matching lengths");

    std::vector<double> tx(s.x.size()), ty(s.y.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        tx[i] = detail::axis_coord(s.x[i], plot.axes.log_x);
        ty[i] = detail::axis_coord(s.y[i], plot.axes.log_y);
    }
    const auto [xmin_it, xmax_it] = std::minmax_element(tx.begin(), tx.end());
    const auto [ymin_it, ymax_it] = std::minmax_element(ty.begin(), ty.end());
    const double xmin = *xmin_it, xmax = *xmax_it, ymin = *ymin_it, ymax = *ymax_it;

    auto map_x = [&](double t) {
        const double span = xmax - xmin;
        const double f = span > 0.0 ? (t - xmin) / span : 0.5;
        return plot_margin + f * (plot_width - 2.0 * plot_margin);
    };
    auto map_y = [&](double t) {
        const double span = ymax - ymin;
        const double f = span > 0.0 ? (t - ymin) / span : 0.5;
        return plot_height - plot_margin - f * (plot_height - 2.0 * plot_margin);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot_width << "\" height=\""
        << plot_height << "\" viewBox=\"0 0 " << plot_width << " " << plot_height << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!plot.axes.title.empty())
        out << "  <text x=\"" << plot_width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << plot.axes.title << "</text>\n";

    // axes
    const double x0 = plot_margin, x1 = plot_width - plot_margin;
    const double y0 = plot_height - plot_margin, y1 = plot_margin;
    out << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";

    // range labels
    out << "  <text x=\"" << x0 << "\" y=\"" << y0 + 20 << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << csv::format_double(*std::min_element(s.x.begin(), s.x.end()))
        << "</text>\n";
    out << "  <text x=\"" << x1 << "\" y=\"" << y0 + 20 << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">"
        << csv::format_double(*std::max_element(s.x.begin(), s.x.end())) << "</text>\n";
    out << "  <text x=\"" << x0 - 6 << "\" y=\"" << y0 << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">"
        << csv::format_double(*std::min_element(s.y.begin(), s.y.end())) << "</text>\n";
    out << "  <text x=\"" << x0 - 6 << "\" y=\"" << y1 << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">"
        << csv::format_double(*std::max_element(s.y.begin(), s.y.end())) << "</text>\n";
    if (!plot.axes.x_label.empty())
        out << "  <text x=\"" << (x0 + x1) / 2 << "\" y=\"" << plot_height - 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << plot.axes.x_label << (plot.axes.log_x ? " (log scale)" : "") << "</text>\n";
    if (!plot.axes.y_label.empty())
        out << "  <text x=\"18\" y=\"" << (y0 + y1) / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
            << "transform=\"rotate(-90 18 " << (y0 + y1) / 2 << ")\">" << plot.axes.y_label
            << (plot.axes.log_y ? " (log scale)" : "") << "</text>\n";

    // polyline through the data
    out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < tx.size(); ++i) {
        if (i) out << ' ';
        out << csv::format_double(map_x(tx[i])) << ',' << csv::format_double(map_y(ty[i]));
    }
    out << "\"/>\n";

    // exact data markers
    for (std::size_t i = 0; i < tx.size(); ++i)
        out << "  <circle cx=\"" << csv::format_double(map_x(tx[i])) << "\" cy=\""
            << csv::format_double(map_y(ty[i])) << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";

    out << "</svg>\n";
    if (!out) throw std::runtime_error("emit_svg: stream failure");
}

}  // namespace caperc::svg

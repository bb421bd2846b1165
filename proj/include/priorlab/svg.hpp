#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace priorlab::svg {

struct Series {
    std::string label;
    std::vector<double> x;  // typically the n-grid
    std::vector<double> y;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Minimal hand-rolled line chart: log-x, linear-y, one polyline per series.
inline std::string line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& x_label = "n",
                              const std::string& y_label = "value") {
    const int W = 720, H = 420, ML = 70, MR = 160, MT = 40, MB = 50;
    const double PW = W - ML - MR, PH = H - MT - MB;
    static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) { xmin = 1.0; xmax = 10.0; }
    if (ymin > ymax) { ymin = 0.0; ymax = 1.0; }
    if (ymax - ymin < 1e-12) { ymax += 0.5; ymin -= 0.5; }
    const double lxmin = std::log10(xmin), lxmax = std::log10(std::max(xmax, xmin * 10.0));
    auto X = [&](double v) { return ML + PW * (std::log10(v) - lxmin) / (lxmax - lxmin); };
    auto Y = [&](double v) { return MT + PH * (1.0 - (v - ymin) / (ymax - ymin)); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << detail::esc(title) << "</text>\n";
    // axes
    os << "<line x1=\"" << ML << "\" y1=\"" << MT + PH << "\" x2=\"" << ML + PW << "\" y2=\""
       << MT + PH << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << MT + PH
       << "\" stroke=\"black\"/>\n";
    // x ticks at powers of ten
    for (int d = int(std::floor(lxmin)); d <= int(std::ceil(lxmax)); ++d) {
        const double v = std::pow(10.0, d);
        if (v < xmin * 0.999 || std::log10(v) > lxmax + 1e-9) continue;
        const double px = X(v);
        os << "<line x1=\"" << detail::fmt(px) << "\" y1=\"" << MT + PH << "\" x2=\""
           << detail::fmt(px) << "\" y2=\"" << MT + PH + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << detail::fmt(px) << "\" y=\"" << MT + PH + 20
           << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    }
    // y ticks
    for (int i = 0; i <= 4; ++i) {
        const double v = ymin + (ymax - ymin) * i / 4.0;
        const double py = Y(v);
        os << "<line x1=\"" << ML - 5 << "\" y1=\"" << detail::fmt(py) << "\" x2=\"" << ML
           << "\" y2=\"" << detail::fmt(py) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ML - 8 << "\" y=\"" << detail::fmt(py + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << detail::fmt(v) << "</text>\n";
    }
    os << "<text x=\"" << ML + PW / 2 << "\" y=\"" << H - 10
       << "\" text-anchor=\"middle\" font-size=\"12\">" << detail::esc(x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << MT + PH / 2
       << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 "
       << MT + PH / 2 << ")\">" << detail::esc(y_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* col = kColors[si % 10];
        std::ostringstream pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !std::isfinite(s.y[i])) continue;
            pts << detail::fmt(X(s.x[i])) << "," << detail::fmt(Y(s.y[i])) << " ";
        }
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\""
           << pts.str() << "\"/>\n";
        const double ly = MT + 16.0 * double(si);
        os << "<line x1=\"" << ML + PW + 10 << "\" y1=\"" << detail::fmt(ly) << "\" x2=\""
           << ML + PW + 30 << "\" y2=\"" << detail::fmt(ly) << "\" stroke=\"" << col
           << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << ML + PW + 35 << "\" y=\"" << detail::fmt(ly + 4)
           << "\" font-size=\"11\">" << detail::esc(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace priorlab::svg

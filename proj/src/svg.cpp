#include "kerr_ring/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace kerr_ring {

namespace {

constexpr double W = 840.0, H = 600.0;
constexpr double ML = 80.0, MR = 30.0, MT = 50.0, MB = 60.0;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double x) {
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    void pad() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

double xmap(double x, const Range& r) {
    return ML + (x - r.lo) / (r.hi - r.lo) * (W - ML - MR);
}
double ymap(double y, const Range& r) {
    return H - MB - (y - r.lo) / (r.hi - r.lo) * (H - MT - MB);
}

void axes(std::ofstream& out, const std::string& title, const std::string& xlabel,
          const std::string& ylabel, const Range& xr, const Range& yr, bool logx,
          bool logy = false) {
    out << "<rect x='" << ML << "' y='" << MT << "' width='" << W - ML - MR
        << "' height='" << H - MT - MB << "' fill='none' stroke='#333'/>\n";
    out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << title << "</text>\n";
    out << "<text x='" << W / 2 << "' y='" << H - 14
        << "' text-anchor='middle' font-size='13'>" << xlabel << "</text>\n";
    out << "<text x='20' y='" << H / 2
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 20 " << H / 2
        << ")'>" << ylabel << "</text>\n";
    for (int i = 0; i <= 5; ++i) {
        double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        double px = xmap(fx, xr);
        out << "<line x1='" << px << "' y1='" << H - MB << "' x2='" << px << "' y2='"
            << H - MB + 5 << "' stroke='#333'/>\n";
        out << "<text x='" << px << "' y='" << H - MB + 20
            << "' text-anchor='middle' font-size='11'>"
            << num(logx ? std::pow(10.0, fx) : fx) << "</text>\n";
        double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
        double py = ymap(fy, yr);
        out << "<line x1='" << ML - 5 << "' y1='" << py << "' x2='" << ML << "' y2='"
            << py << "' stroke='#333'/>\n";
        out << "<text x='" << ML - 8 << "' y='" << py + 4
            << "' text-anchor='end' font-size='11'>"
            << num(logy ? std::pow(10.0, fy) : fy) << "</text>\n";
    }
}

// 5-stop blue->yellow colormap.
std::string colormap(double t) {
    static const double stops[5][3] = {{68, 1, 84},
                                       {59, 82, 139},
                                       {33, 145, 140},
                                       {94, 201, 98},
                                       {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    int k = std::min(3, static_cast<int>(t));
    double f = t - k;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)",
                  static_cast<int>(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])),
                  static_cast<int>(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])),
                  static_cast<int>(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
    return buf;
}

} // namespace

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::string& xlabel, const std::string& ylabel,
                   const std::vector<Series>& series, const std::vector<VLine>& vlines,
                   bool logx) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    Range xr, yr;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xr.add(logx ? std::log10(s.x[i]) : s.x[i]);
            yr.add(s.y[i]);
        }
    for (const auto& v : vlines) xr.add(logx ? std::log10(v.x) : v.x);
    xr.pad();
    yr.pad();

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n";
    out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
    axes(out, title, xlabel, ylabel, xr, yr, logx);

    for (const auto& v : vlines) {
        double px = xmap(logx ? std::log10(v.x) : v.x, xr);
        out << "<line x1='" << px << "' y1='" << MT << "' x2='" << px << "' y2='"
            << H - MB << "' stroke='" << v.color << "' stroke-dasharray='4,3'/>\n";
    }

    double ly = MT + 16.0;
    for (const auto& s : series) {
        if (s.markers_only) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                out << "<circle cx='" << xmap(logx ? std::log10(s.x[i]) : s.x[i], xr)
                    << "' cy='" << ymap(s.y[i], yr) << "' r='2.5' fill='" << s.color
                    << "'/>\n";
            }
        } else {
            out << "<polyline fill='none' stroke='" << s.color
                << "' stroke-width='1.5' points='";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.y[i])) continue;
                out << xmap(logx ? std::log10(s.x[i]) : s.x[i], xr) << ','
                    << ymap(s.y[i], yr) << ' ';
            }
            out << "'/>\n";
        }
        if (!s.name.empty()) {
            out << "<rect x='" << W - MR - 150 << "' y='" << ly - 9
                << "' width='10' height='10' fill='" << s.color << "'/>\n";
            out << "<text x='" << W - MR - 135 << "' y='" << ly << "' font-size='12'>"
                << s.name << "</text>\n";
            ly += 16.0;
        }
    }
    out << "</svg>\n";
}

void svg_heatmap(const std::string& path, const std::string& title,
                 const std::string& xlabel, const std::string& ylabel,
                 const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<double>& values, bool logy) {
    if (values.size() != xs.size() * ys.size())
        throw std::runtime_error("heatmap grid size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    Range xr, yr, vr;
    for (double x : xs) xr.add(x);
    for (double y : ys) yr.add(logy ? std::log10(y) : y);
    for (double v : values) vr.add(v);
    xr.pad();
    yr.pad();
    vr.pad();

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "' viewBox='0 0 " << W << " " << H << "'>\n";
    out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";

    double cw = (W - ML - MR) / xs.size();
    double ch = (H - MT - MB) / ys.size();
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j) {
            double v = values[i * ys.size() + j];
            if (!std::isfinite(v)) continue;
            double t = (v - vr.lo) / (vr.hi - vr.lo);
            // cell (i, j) anchored by index so irregular grids still render
            out << "<rect x='" << ML + i * cw << "' y='" << H - MB - (j + 1) * ch
                << "' width='" << cw + 0.5 << "' height='" << ch + 0.5 << "' fill='"
                << colormap(t) << "'/>\n";
        }
    axes(out, title + "  [" + num(vr.lo) + ", " + num(vr.hi) + "]", xlabel, ylabel, xr,
         yr, false, logy);
    out << "</svg>\n";
}

} // namespace kerr_ring

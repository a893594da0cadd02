#include "sdlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sdlab {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 80, kRight = 200, kTop = 44, kBottom = 60;

std::string escape(const std::string& s)
{
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

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Axis {
    bool log = false;
    double lo = 0.0, hi = 1.0; // in transformed units

    double map(double v) const { return log ? std::log10(v) : v; }
    bool valid(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

    std::vector<double> ticks() const
    {
        std::vector<double> out;
        if (log && hi - lo >= 1.0) {
            for (double e = std::ceil(lo); e <= hi + 1e-9; e += std::max(1.0, std::floor((hi - lo) / 8.0)))
                out.push_back(std::pow(10.0, e));
            return out;
        }
        const double a = log ? std::pow(10.0, lo) : lo;
        const double b = log ? std::pow(10.0, hi) : hi;
        const double raw = (b - a) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        const double norm = raw / mag;
        const double step = (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0) * mag;
        for (double t = std::ceil(a / step) * step; t <= b + 1e-9 * step; t += step)
            out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
        return out;
    }
};

Axis fit_axis(bool log, const std::vector<const std::vector<double>*>& data)
{
    Axis ax;
    ax.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* d : data)
        for (double v : *d)
            if (ax.valid(v)) {
                lo = std::min(lo, ax.map(v));
                hi = std::max(hi, ax.map(v));
            }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
        const double pad = std::max(1e-3 * std::abs(hi), 1e-3);
        lo -= pad;
        hi += pad;
    }
    const double pad = 0.05 * (hi - lo);
    ax.lo = lo - pad;
    ax.hi = hi + pad;
    return ax;
}

} // namespace

std::string render_svg(const SvgPlot& plot)
{
    std::vector<const std::vector<double>*> xs, ys;
    for (const auto& s : plot.series) {
        xs.push_back(&s.x);
        ys.push_back(&s.y);
    }
    const Axis ax = fit_axis(plot.logx, xs);
    const Axis ay = fit_axis(plot.logy, ys);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double v) { return kTop + ph - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    for (const auto& line : plot.header)
        os << "<!-- " << escape(line) << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(plot.title) << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ax.ticks()) {
        const double x = px(t);
        if (x < kLeft - 1e-6 || x > kLeft + pw + 1e-6)
            continue;
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\"" << num(x) << "\" y2=\"" << num(kTop + ph)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 19) << "\" text-anchor=\"middle\">"
           << tick_label(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = py(t);
        if (y < kTop - 1e-6 || y > kTop + ph + 1e-6)
            continue;
        os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft << "\" y2=\"" << num(y)
           << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\"" << num(y)
           << "\" stroke=\"#dddddd\"/>\n";
        os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_label(t)
           << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16) << "\" text-anchor=\"middle\">"
       << escape(plot.xlabel) << "</text>\n";
    os << "<text transform=\"translate(20," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(plot.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const SvgSeries& s = plot.series[k];
        std::ostringstream pts;
        std::vector<std::pair<double, double>> drawn;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (ax.valid(s.x[i]) && ay.valid(s.y[i]))
                drawn.emplace_back(px(s.x[i]), py(s.y[i]));
        if (s.line && drawn.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\""
               << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
            for (std::size_t i = 0; i < drawn.size(); ++i)
                os << (i ? " " : "") << num(drawn[i].first) << "," << num(drawn[i].second);
            os << "\"/>\n";
        }
        if (s.markers)
            for (const auto& [x, y] : drawn)
                os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3.5\" fill=\"" << s.color
                   << "\"/>\n";
        const double ly = kTop + 14 + 20 * double(k);
        const double lx = kLeft + pw + 14;
        os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24) << "\" y2=\"" << num(ly)
           << "\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
           << "/>\n";
        os << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace sdlab

#include "slspec/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slspec/errors.hpp"

namespace slspec {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::header(const std::string& key, const std::string& value) {
    buf_ += "# " + key + " = " + value + "\n";
}

void CsvWriter::columns(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += names[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(fmt17(v));
    row(s);
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << buf_;
}

namespace {

struct Ticks {
    std::vector<double> at;
};

// 1-2-5 tick rule.
Ticks nice_ticks(double lo, double hi) {
    Ticks t;
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step;
    if (frac < 1.5)
        step = 1.0 * mag;
    else if (frac < 3.5)
        step = 2.0 * mag;
    else if (frac < 7.5)
        step = 5.0 * mag;
    else
        step = 10.0 * mag;
    const double first = std::ceil(lo / step) * step;
    for (double x = first; x <= hi + 0.5 * step; x += step) t.at.push_back(x);
    return t;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v + 0.0); // +0.0 normalizes -0
    return buf;
}

} // namespace

void write_svg(const std::string& path, const std::string& title,
               const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& x_label, const std::string& y_label) {
    if (xs.size() != ys.size() || xs.empty()) throw Error("write_svg: bad series");
    const double width = 840, height = 540;
    const double ml = 80, mr = 25, mt = 45, mb = 55;

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(ys[i])) continue;
        xlo = std::min(xlo, xs[i]);
        xhi = std::max(xhi, xs[i]);
        ylo = std::min(ylo, ys[i]);
        yhi = std::max(yhi, ys[i]);
    }
    if (!(xhi > xlo)) xhi = xlo + 1.0;
    if (!(yhi > ylo)) {
        ylo -= 1.0;
        yhi += 1.0;
    }
    const double ypad = 0.05 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;

    auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";

    const Ticks tx = nice_ticks(xlo, xhi);
    const Ticks ty = nice_ticks(ylo, yhi);
    svg << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (double x : tx.at)
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << py(ylo) << "\" x2=\"" << px(x) << "\" y2=\""
            << py(yhi) << "\"/>\n";
    for (double y : ty.at)
        svg << "<line x1=\"" << px(xlo) << "\" y1=\"" << py(y) << "\" x2=\"" << px(xhi)
            << "\" y2=\"" << py(y) << "\"/>\n";
    svg << "</g>\n";
    svg << "<g font-size=\"12\" font-family=\"sans-serif\" fill=\"#333333\">\n";
    for (double x : tx.at)
        svg << "<text x=\"" << px(x) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\">" << fmt_tick(x) << "</text>\n";
    for (double y : ty.at)
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
            << fmt_tick(y) << "</text>\n";
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (mt + height - mb) / 2
        << ")\">" << y_label << "</text>\n";
    svg << "</g>\n";
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
        << "\" height=\"" << height - mt - mb
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    bool open = false;
    std::ostringstream pts;
    auto flush = [&]() {
        if (open) {
            svg << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\""
                << pts.str() << "\"/>\n";
            pts.str("");
            open = false;
        }
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(ys[i])) {
            flush();
            continue;
        }
        pts << px(xs[i]) << ',' << py(ys[i]) << ' ';
        open = true;
    }
    flush();
    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << svg.str();
}

} // namespace slspec

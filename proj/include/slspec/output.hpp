#ifndef SLSPEC_OUTPUT_HPP
#define SLSPEC_OUTPUT_HPP

#include <string>
#include <utility>
#include <vector>

namespace slspec {

/// Fixed 17-significant-digit formatting used by every CSV cell, so that a
/// given config reproduces byte-identical output.
std::string fmt17(double v);

/// CSV with '#'-prefixed header lines echoing the effective configuration.
class CsvWriter {
public:
    void header(const std::string& key, const std::string& value);
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& cells);
    const std::string& text() const { return buf_; }
    void write(const std::string& path) const;

private:
    std::string buf_;
};

/// Minimal standalone SVG line chart of one series; axis ticks follow a
/// 1-2-5 rule. NaN gaps split the polyline.
void write_svg(const std::string& path, const std::string& title,
               const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& x_label, const std::string& y_label);

} // namespace slspec

#endif

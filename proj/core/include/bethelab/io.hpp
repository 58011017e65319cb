#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bethe {

// Shortest decimal form that round-trips the IEEE-754 double exactly.
std::string format_double(double v);
std::string format_complex(double re, double im); // "re+imi" / "re-imi"

// Key/value block echoed at the top of every artifact, one "# key = value"
// line per entry, in insertion order.
class ConfigEcho {
public:
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::int64_t value);
    void add(const std::string& key, std::uint64_t value);
    std::string comment_block() const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// Writes `contents` to `path`; failures carry the path and errno cause.
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

// Minimal polyline chart, one series per (label, points) pair.
struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};
std::string svg_line_chart(const std::vector<SvgSeries>& series, const std::string& x_label,
                           const std::string& y_label, int width = 720, int height = 480);

} // namespace bethe

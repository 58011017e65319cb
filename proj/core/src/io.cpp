#include "bethelab/io.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bethe {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::string format_complex(double re, double im)
{
    std::string s = format_double(re);
    if (!(im < 0.0))
        s += '+';
    s += format_double(im);
    s += 'i';
    return s;
}

void ConfigEcho::add(const std::string& key, const std::string& value)
{
    entries_.emplace_back(key, value);
}

void ConfigEcho::add(const std::string& key, double value)
{
    entries_.emplace_back(key, format_double(value));
}

void ConfigEcho::add(const std::string& key, std::int64_t value)
{
    entries_.emplace_back(key, std::to_string(value));
}

void ConfigEcho::add(const std::string& key, std::uint64_t value)
{
    entries_.emplace_back(key, std::to_string(value));
}

std::string ConfigEcho::comment_block() const
{
    std::string out;
    for (const auto& [key, value] : entries_) {
        out += "# ";
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& contents)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open '" + path + "' for writing: " +
                                 std::strerror(errno));
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    os.flush();
    if (!os)
        throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

std::string read_text_file(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "' for reading: " +
                                 std::strerror(errno));
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

static std::string svg_coord(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string svg_line_chart(const std::vector<SvgSeries>& series, const std::string& x_label,
                           const std::string& y_label, int width, int height)
{
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const double ml = 64, mr = 16, mt = 16, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    if (xmax == xmin)
        xmax = xmin + 1;
    if (ymax == ymin)
        ymax = ymin + 1;

    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out += "<line x1=\"" + svg_coord(ml) + "\" y1=\"" + svg_coord(mt + ph) + "\" x2=\"" +
           svg_coord(ml + pw) + "\" y2=\"" + svg_coord(mt + ph) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line x1=\"" + svg_coord(ml) + "\" y1=\"" + svg_coord(mt) + "\" x2=\"" +
           svg_coord(ml) + "\" y2=\"" + svg_coord(mt + ph) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        out += "<text x=\"" + svg_coord(sx(fx)) + "\" y=\"" + svg_coord(mt + ph + 16) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + format_double(fx) + "</text>\n";
        out += "<text x=\"" + svg_coord(ml - 6) + "\" y=\"" + svg_coord(sy(fy) + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + format_double(fy) + "</text>\n";
    }
    out += "<text x=\"" + svg_coord(ml + pw / 2) + "\" y=\"" + svg_coord(mt + ph + 36) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + x_label + "</text>\n";
    out += "<text x=\"14\" y=\"" + svg_coord(mt + ph / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           svg_coord(mt + ph / 2) + ")\">" + y_label + "</text>\n";

    std::size_t color = 0;
    double legend_y = mt + 14;
    for (const auto& s : series) {
        const char* stroke = palette[color % (sizeof(palette) / sizeof(palette[0]))];
        ++color;
        out += "<polyline fill=\"none\" stroke=\"";
        out += stroke;
        out += "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                continue;
            out += svg_coord(sx(x)) + "," + svg_coord(sy(y)) + " ";
        }
        out += "\"/>\n";
        if (!s.label.empty()) {
            out += "<text x=\"" + svg_coord(ml + pw - 150) + "\" y=\"" + svg_coord(legend_y) +
                   "\" font-size=\"11\" fill=\"" + std::string(stroke) + "\">" + s.label +
                   "</text>\n";
            legend_y += 14;
        }
    }
    out += "</svg>\n";
    return out;
}

} // namespace bethe

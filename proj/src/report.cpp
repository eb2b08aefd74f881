#include "qcl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qcl/errors.hpp"

namespace qcl {

bool RunReport::passed() const {
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const Assertion& a) { return a.pass; });
}

void RunReport::add(const std::string& id, bool pass, const std::string& detail) {
    assertions.push_back({id, pass, detail});
}

std::string RunReport::to_text() const {
    std::ostringstream os;
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash));
    os << "experiment: " << experiment << "\nconfig_hash: " << hash << "\n";
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    for (const auto& a : assertions)
        os << (a.pass ? "PASS" : "FAIL") << " " << a.invariant_id << " " << a.detail << "\n";
    for (const auto& f : artifacts) os << "artifact: " << f << "\n";
    os << (passed() ? "result: PASS\n" : "result: FAIL\n");
    return os.str();
}

void RunReport::write_text(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write report: " + path);
    f << to_text();
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write csv: " + path);
    for (std::size_t c = 0; c < columns.size(); ++c)
        f << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    char buf[40];
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw ArgumentError("write_csv: ragged row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.12e", row[c]);
            f << buf << (c + 1 < row.size() ? "," : "\n");
        }
    }
}

namespace {

struct Extent {
    double lo = 0.0, hi = 1.0;
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_svg_lineplot(const std::string& path, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        const std::vector<PlotSeries>& series, bool log_y) {
    const int width = 720, height = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    bool first = true;
    Extent ex, ey;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y) {
                if (!(y > 0.0)) continue;
                y = std::log10(y);
            }
            if (first) {
                ex = {s.x[i], s.x[i]};
                ey = {y, y};
                first = false;
            } else {
                ex.grow(s.x[i]);
                ey.grow(y);
            }
        }
    }
    if (ex.hi == ex.lo) ex.hi = ex.lo + 1.0;
    if (ey.hi == ey.lo) ey.hi = ey.lo + 1.0;

    auto px = [&](double x) {
        return ml + (x - ex.lo) / (ex.hi - ex.lo) * (width - ml - mr);
    };
    auto py = [&](double y) {
        if (log_y) y = std::log10(y);
        return height - mb - (y - ey.lo) / (ey.hi - ey.lo) * (height - mt - mb);
    };

    std::ofstream f(path);
    if (!f) throw DataError("cannot write svg: " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n"
      << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n"
      << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << height / 2
      << ")\">" << y_label << (log_y ? " (log10)" : "") << "</text>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
      << "\" height=\"" << height - mt - mb << "\" fill=\"none\" stroke=\"#888\"/>\n";

    char buf[64];
    for (int t = 0; t <= 4; ++t) {
        const double xv = ex.lo + t * (ex.hi - ex.lo) / 4;
        const double yv = ey.lo + t * (ey.hi - ey.lo) / 4;
        std::snprintf(buf, sizeof(buf), "%.3g", xv);
        f << "<text x=\"" << px(xv) << "\" y=\"" << height - mb + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof(buf), "%.3g", yv);
        f << "<text x=\"" << ml - 6 << "\" y=\""
          << height - mb - t * (height - mt - mb) / 4.0 + 3
          << "\" text-anchor=\"end\" font-size=\"10\">" << buf << "</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % 6];
        f << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (log_y && !(series[s].y[i] > 0.0)) continue;
            f << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
        }
        f << "\"/>\n";
        f << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16 + 14 * s
          << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
          << series[s].name << "</text>\n";
    }
    f << "</svg>\n";
}

}  // namespace qcl

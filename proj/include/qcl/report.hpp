#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcl {

struct Assertion {
    std::string invariant_id;
    bool pass = false;
    std::string detail;
};

struct RunReport {
    std::string experiment;
    std::uint64_t config_hash = 0;
    std::vector<Assertion> assertions;
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;

    bool passed() const;
    void add(const std::string& id, bool pass, const std::string& detail);
    /// Human-readable summary; one PASS/FAIL line per assertion.
    void write_text(const std::string& path) const;
    std::string to_text() const;
};

/// CSV with %.12e-formatted numeric cells; byte-identical for identical data.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal standalone SVG line plot (axes, series polylines, legend).
void write_svg_lineplot(const std::string& path, const std::string& title,
                        const std::string& x_label, const std::string& y_label,
                        const std::vector<PlotSeries>& series, bool log_y = false);

}  // namespace qcl

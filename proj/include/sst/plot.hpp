#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sst {

enum class PlotKind { Dof, Risk };

PlotKind parse_plot_kind(std::string_view name);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

/// Builds the series for a sweep CSV (the format written by sweep_csv).
/// Dof: d1, d2, d1+d2 of the first scaled-soft method (or the first method
/// with a DOF) plus ht_d2_theory. Risk: risk of every method and SURE of
/// every method that has one. Throws InputError on schema mismatch or an
/// empty table.
std::vector<Series> sweep_series(std::string_view csv_text, PlotKind kind);

/// Standalone SVG line chart, log-scaled x axis, one polyline per series.
/// Points with x <= 0 or non-finite y are skipped. Output depends only on
/// the inputs.
std::string render_svg(const std::vector<Series>& series, std::string_view title,
                       std::string_view y_label);

}  // namespace sst

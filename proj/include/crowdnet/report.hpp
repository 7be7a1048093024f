#pragma once

// Human-readable artifacts built from stage documents: per-belt bar charts
// (SVG) and a Markdown report. Nothing here computes new statistics.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crowdnet/json_format.hpp"

namespace crowdnet {

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> groups;  // one bar group per cluster
  std::vector<std::string> series;  // one bar per belt
  /// values[group][series]; nullopt draws nothing (a gap).
  std::vector<std::vector<std::optional<double>>> values;
};

/// Plot area height in SVG units; a value v on the fixed [0,1] axis draws a
/// bar of height v * kChartPlotHeight.
inline constexpr double kChartPlotHeight = 240.0;

/// Standalone SVG document. Bars carry class="bar" plus data-group,
/// data-series and data-value attributes.
std::string render_bar_chart(const BarChart& chart);

struct ChartFile {
  std::string file;  // e.g. "reliability.svg"
  std::string metric;
  BarChart chart;
};

/// Charts for RL, TL, SL, EF and EL from a metrics document.
std::vector<ChartFile> charts_for(const json& metrics_doc);

std::string render_report(const json& graph_doc, const json& partition_doc, const json& summary_doc,
                          const json& metrics_doc, const json& anova_doc);

/// Reads the stage documents in `run_dir`, writes report.md and charts/*.svg.
void write_report(const std::filesystem::path& run_dir);

}  // namespace crowdnet

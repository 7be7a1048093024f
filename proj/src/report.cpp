#include "crowdnet/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "crowdnet/error.hpp"

namespace crowdnet {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 130.0;
constexpr double kTop = 40.0;

const std::map<std::string, std::string, std::less<>> kBeltColors = {
    {"Gray", "#8c8c8c"}, {"Green", "#3a9d4a"}, {"Blue", "#3070c0"}, {"Yellow", "#e0b020"}, {"Red", "#c03030"}};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string coord(double v) { return fmt("%.2f", v); }

std::string escape(std::string_view s) {
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

std::string color_for(const std::string& series, std::size_t i) {
  if (auto it = kBeltColors.find(series); it != kBeltColors.end()) return it->second;
  static constexpr std::array<const char*, 4> fallback = {"#4477aa", "#ee6677", "#228833", "#ccbb44"};
  return fallback[i % fallback.size()];
}

// Markdown cell text for a possibly-null number.
std::string cell(const json& v, const char* spec = "%.3f") {
  if (v.is_null()) return "n/a";
  return fmt(spec, v.get<double>());
}

std::string percent(const json& v) {
  if (v.is_null()) return "n/a";
  return fmt("%.1f%%", 100.0 * v.get<double>());
}

std::string mean_std(const json& s) { return cell(s.at("mean"), "%.4g") + " (" + cell(s.at("std"), "%.4g") + ")"; }

const std::array<std::array<const char*, 3>, 5> kCharts = {{
    {"RL", "reliability.svg", "Reliability"},
    {"TL", "trustworthiness.svg", "Trustworthiness"},
    {"SL", "success.svg", "Success"},
    {"EF", "efficiency.svg", "Efficiency"},
    {"EL", "elasticity.svg", "Elasticity"},
}};

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_doc(const std::filesystem::path& p) {
  try {
    return json::parse(read_text(p));
  } catch (const json::parse_error& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  out << text;
}

}  // namespace

std::string render_bar_chart(const BarChart& chart) {
  const double plot_w = kWidth - kLeft - kRight;
  const double base = kTop + kChartPlotHeight;
  const std::size_t groups = std::max<std::size_t>(chart.groups.size(), 1);
  const std::size_t series = std::max<std::size_t>(chart.series.size(), 1);
  const double group_w = plot_w / static_cast<double>(groups);
  const double bar_w = group_w * 0.8 / static_cast<double>(series);

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"#ffffff\"/>\n";
  s << "<text x=\"" << coord(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">"
    << escape(chart.title) << "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    const double y = base - v * kChartPlotHeight;
    s << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(y) << "\" x2=\"" << coord(kLeft + plot_w)
      << "\" y2=\"" << coord(y) << "\" stroke=\"#dddddd\"/>\n";
    s << "<text x=\"" << coord(kLeft - 6) << "\" y=\"" << coord(y + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.2f", v) << "</text>\n";
  }
  s << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(kTop) << "\" x2=\"" << coord(kLeft) << "\" y2=\""
    << coord(base) << "\" stroke=\"#000000\"/>\n";
  s << "<line x1=\"" << coord(kLeft) << "\" y1=\"" << coord(base) << "\" x2=\"" << coord(kLeft + plot_w)
    << "\" y2=\"" << coord(base) << "\" stroke=\"#000000\"/>\n";
  s << "<text transform=\"translate(18," << coord(kTop + kChartPlotHeight / 2)
    << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
    << escape(chart.y_label) << "</text>\n";
  s << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 12)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Cluster</text>\n";

  bool any = false;
  for (std::size_t g = 0; g < chart.groups.size(); ++g) {
    const double gx = kLeft + group_w * static_cast<double>(g) + group_w * 0.1;
    for (std::size_t k = 0; k < chart.series.size(); ++k) {
      const auto& v = g < chart.values.size() && k < chart.values[g].size() ? chart.values[g][k]
                                                                             : std::optional<double>{};
      if (!v) continue;
      any = true;
      const double h = std::clamp(*v, 0.0, 1.0) * kChartPlotHeight;
      s << "<rect class=\"bar\" data-group=\"" << escape(chart.groups[g]) << "\" data-series=\""
        << escape(chart.series[k]) << "\" data-value=\"" << fmt("%.9g", *v) << "\" x=\""
        << coord(gx + bar_w * static_cast<double>(k)) << "\" y=\"" << coord(base - h) << "\" width=\""
        << coord(bar_w) << "\" height=\"" << coord(h) << "\" fill=\"" << color_for(chart.series[k], k)
        << "\"/>\n";
    }
    s << "<text x=\"" << coord(kLeft + group_w * (static_cast<double>(g) + 0.5)) << "\" y=\"" << coord(base + 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << escape(chart.groups[g])
      << "</text>\n";
  }
  if (!any) {
    s << "<text class=\"no-data\" x=\"" << coord(kLeft + plot_w / 2) << "\" y=\""
      << coord(kTop + kChartPlotHeight / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#666666\">no data</text>\n";
  }

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const double y = kTop + 18.0 * static_cast<double>(k);
    const double x = kWidth - kRight + 20;
    s << "<rect x=\"" << coord(x) << "\" y=\"" << coord(y) << "\" width=\"12\" height=\"12\" fill=\""
      << color_for(chart.series[k], k) << "\"/>\n";
    s << "<text x=\"" << coord(x + 18) << "\" y=\"" << coord(y + 10)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(chart.series[k]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<ChartFile> charts_for(const json& metrics) {
  const auto k = metrics.at("cluster_count").get<std::size_t>();
  const auto belts = metrics.at("belts").get<std::vector<std::string>>();
  std::vector<ChartFile> out;
  for (const auto& [metric, file, label] : kCharts) {
    BarChart chart;
    chart.title = std::string("Average worker ") + label + " per belt per cluster";
    chart.y_label = std::string(label) + " (" + metric + ")";
    chart.series = belts;
    const auto& grid = metrics.at("cells").at(metric);
    for (std::size_t c = 0; c < k; ++c) {
      chart.groups.push_back("C" + std::to_string(c));
      std::vector<std::optional<double>> row;
      for (const auto& v : grid.at(c)) row.push_back(v.is_null() ? std::nullopt : std::optional(v.get<double>()));
      chart.values.push_back(std::move(row));
    }
    out.push_back({file, metric, std::move(chart)});
  }
  return out;
}

std::string render_report(const json& graph, const json& partition, const json& summary, const json& metrics,
                          const json& anova) {
  std::ostringstream r;
  const auto k = partition.at("cluster_count").get<std::size_t>();
  const auto belts = metrics.at("belts").get<std::vector<std::string>>();

  r << "# Worker network analysis\n\n";
  r << "## Network\n\n";
  r << "| Quantity | Value |\n|---|---|\n";
  r << "| Workers in dataset | " << graph.at("workers_total").get<std::size_t>() << " |\n";
  r << "| Active workers | " << graph.at("workers_active").get<std::size_t>() << " |\n";
  r << "| Activity window | "
    << (graph.at("active_window").is_null() ? "n/a" : graph.at("active_window").get<std::string>()) << " |\n";
  r << "| Workers without co-registrations (dropped) | " << graph.at("isolated_dropped").get<std::size_t>()
    << " |\n";
  r << "| Network nodes | " << graph.at("node_count").get<std::size_t>() << " |\n";
  r << "| Network edges | " << graph.at("edge_count").get<std::size_t>() << " |\n";
  r << "| Minimum co-registration weight | " << graph.at("min_weight").get<std::size_t>() << " |\n";
  r << "| Clustering | greedy modularity, " << partition.at("weighting").get<std::string>() << " |\n";
  r << "| Modularity Q | " << cell(partition.at("modularity"), "%.6f") << " |\n";
  r << "| Clusters | " << k << " |\n\n";

  r << "Cluster sizes (largest first):";
  for (const auto& s : partition.at("sizes_descending")) r << ' ' << s.get<std::size_t>();
  r << "\n\n";

  r << "## Clusters\n\n";
  r << "Mean (std) of common neighbors (#CN, " << summary.at("cn_scope").get<std::string>()
    << " scope), worker rank (WR), closeness (CC) and betweenness (BC).\n\n";
  r << "| Cluster | Workers |";
  for (const auto& b : belts) r << ' ' << b << " |";
  r << " Red | #CN | WR | CC | BC |\n|---|---|";
  for (std::size_t i = 0; i < belts.size() + 5; ++i) r << "---|";
  r << "\n";
  for (std::size_t c = 0; c < k; ++c) {
    const auto& row = summary.at("clusters").at(c);
    const auto& comp = metrics.at("belt_composition").at(c);
    r << "| C" << c << " | " << row.at("size").get<std::size_t>() << " |";
    for (const auto& b : belts) r << ' ' << percent(comp.at("shares").at(b)) << " |";
    r << ' ' << percent(comp.at("shares").at("Red")) << " | " << mean_std(row.at("common_neighbors")) << " | "
      << mean_std(row.at("worker_rank")) << " | " << mean_std(row.at("closeness")) << " | "
      << mean_std(row.at("betweenness")) << " |\n";
  }
  r << "\nWorker rank: " << summary.at("worker_rank_method").get<std::string>() << ".\n\n";

  r << "## Per-belt averages\n\n";
  r << "Red belt workers are left out of per-belt tables. n/a marks an empty cell.\n\n";
  for (const auto& [metric, file, label] : kCharts) {
    r << "### " << label << " (" << metric << ")\n\n";
    r << "| Cluster |";
    for (const auto& b : belts) r << ' ' << b << " |";
    r << "\n|---|";
    for (std::size_t i = 0; i < belts.size(); ++i) r << "---|";
    r << "\n";
    const auto& grid = metrics.at("cells").at(metric);
    for (std::size_t c = 0; c < k; ++c) {
      r << "| C" << c << " |";
      for (const auto& v : grid.at(c)) r << ' ' << cell(v) << " |";
      r << "\n";
    }
    if (std::string_view(metric) == "EL") {
      r << "\nCluster-level elasticity:";
      for (std::size_t c = 0; c < k; ++c) r << " C" << c << " " << cell(metrics.at("elasticity").at(c));
      r << "\n";
    }
    r << "\n![" << label << "](charts/" << file << ")\n\n";
  }

  r << "## Strategy (Blue and Yellow workers)\n\n";
  r << "| Cluster | Workers | R | CL | CT | DL |\n|---|---|---|---|---|---|\n";
  for (std::size_t c = 0; c < k; ++c) {
    const auto& s = metrics.at("strategy").at(c);
    r << "| C" << c << " | " << s.at("workers").get<std::size_t>() << " | " << cell(s.at("R"), "%.2f") << " | "
      << cell(s.at("CL"), "%.2f") << " | " << cell(s.at("CT")) << " | " << cell(s.at("DL")) << " |\n";
  }

  r << "\n## Differences across clusters (ANOVA)\n\n";
  r << anova.at("design").get<std::string>() << ". Observation unit: " << anova.at("unit").get<std::string>()
    << ".\n\n";
  r << "| Metric | Observations | F | df | p | Result |\n|---|---|---|---|---|---|\n";
  for (const char* metric : {"RL", "TL", "SL", "EF", "EL"}) {
    const auto& e = anova.at("metrics").at(metric);
    r << "| " << metric << " | " << e.at("observation").get<std::string>() << " | ";
    if (!e.at("available").get<bool>()) {
      r << "n/a | n/a | n/a | not available: " << e.at("reason").get<std::string>() << " |\n";
      continue;
    }
    const bool degenerate = e.at("degenerate").get<bool>();
    r << (degenerate ? std::string("inf") : cell(e.at("f"), "%.4g")) << " | ("
      << e.at("df_between").get<std::size_t>() << ", " << e.at("df_within").get<std::size_t>() << ") | "
      << cell(e.at("p_value"), "%.4g") << " | ";
    const double p = e.at("p_value").get<double>();
    r << (p < 0.05 ? "significant at 0.05" : "not significant at 0.05");
    if (degenerate) r << " (zero within-cluster variance)";
    r << " |\n";
  }
  return r.str();
}

void write_report(const std::filesystem::path& dir) {
  const auto graph = read_doc(dir / "graph.json");
  const auto partition = read_doc(dir / "partition.json");
  const auto summary = read_doc(dir / "network_summary.json");
  const auto metrics = read_doc(dir / "metrics.json");
  const auto anova = read_doc(dir / "anova.json");
  std::filesystem::create_directories(dir / "charts");
  for (const auto& c : charts_for(metrics)) write_text(dir / "charts" / c.file, render_bar_chart(c.chart));
  write_text(dir / "report.md", render_report(graph, partition, summary, metrics, anova));
}

}  // namespace crowdnet

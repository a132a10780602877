#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterbandit/harness/runner.hpp"

namespace clusterbandit {

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rounds written for a horizon: every `stride`-th round plus the last.
inline std::vector<std::size_t> logged_rounds(std::size_t horizon, std::size_t stride) {
  std::vector<std::size_t> ts;
  if (stride == 0) stride = 1;
  for (std::size_t t = stride; t <= horizon; t += stride) ts.push_back(t);
  if (ts.empty() || ts.back() != horizon) ts.push_back(horizon);
  return ts;
}

namespace detail {

inline std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no infinity; non-finite values travel as strings.
inline nlohmann::json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline double from_num(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw ExportError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ExportError("write failed for '" + path.string() + "'");
}

inline std::string file_stem(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return s;
}

}  // namespace detail

// experiment_id,policy,seed,t,cumulative_regret
inline std::string to_csv(const ExperimentResult& result) {
  const auto rounds = logged_rounds(result.config.horizon, result.config.effective_stride());
  std::string out = "experiment_id,policy,seed,t,cumulative_regret\n";
  for (const auto& run : result.runs) {
    const std::string prefix = result.config.points[run.point].id + "," + result.config.policies[run.policy].label + "," +
                               std::to_string(run.seed) + ",";
    for (std::size_t t : rounds) {
      out += prefix;
      out += std::to_string(t);
      out += ',';
      out += detail::g17(run.curve[t - 1]);
      out += '\n';
    }
  }
  return out;
}

inline nlohmann::json summaries_to_json(const std::vector<PolicySummary>& summaries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : summaries) {
    arr.push_back({{"experiment_id", s.point_id},
                   {"policy", s.policy},
                   {"runs", s.summary.runs},
                   {"final_mean", s.summary.final_mean},
                   {"final_std", s.summary.final_std},
                   {"finals", s.finals},
                   {"mean_curve", s.summary.mean_curve},
                   {"std_curve", s.summary.std_curve}});
  }
  return arr;
}

inline std::vector<PolicySummary> summaries_from_json(const nlohmann::json& arr) {
  std::vector<PolicySummary> out;
  for (const auto& j : arr) {
    PolicySummary s;
    s.point_id = j.at("experiment_id").get<std::string>();
    s.policy = j.at("policy").get<std::string>();
    s.summary.runs = j.at("runs").get<std::size_t>();
    s.summary.final_mean = j.at("final_mean").get<double>();
    s.summary.final_std = j.at("final_std").get<double>();
    s.summary.mean_curve = j.at("mean_curve").get<std::vector<double>>();
    s.summary.std_curve = j.at("std_curve").get<std::vector<double>>();
    s.finals = j.at("finals").get<std::vector<double>>();
    out.push_back(std::move(s));
  }
  return out;
}

inline nlohmann::json bounds_to_json(const std::vector<BoundSummary>& bounds) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : bounds) {
    arr.push_back({{"experiment_id", b.point_id},
                   {"name", b.name},
                   {"horizon", b.horizon},
                   {"mean_value", detail::num(b.mean_value)},
                   {"min_value", detail::num(b.min_value)},
                   {"max_value", detail::num(b.max_value)},
                   {"seeds", b.seeds},
                   {"assumption_holds", b.assumption_holds},
                   {"unbounded", b.unbounded},
                   {"caveat", b.caveat}});
  }
  return arr;
}

inline std::vector<BoundSummary> bounds_from_json(const nlohmann::json& arr) {
  std::vector<BoundSummary> out;
  for (const auto& j : arr) {
    BoundSummary b;
    b.point_id = j.at("experiment_id").get<std::string>();
    b.name = j.at("name").get<std::string>();
    b.horizon = j.at("horizon").get<double>();
    b.mean_value = detail::from_num(j.at("mean_value"));
    b.min_value = detail::from_num(j.at("min_value"));
    b.max_value = detail::from_num(j.at("max_value"));
    b.seeds = j.at("seeds").get<std::size_t>();
    b.assumption_holds = j.at("assumption_holds").get<std::size_t>();
    b.unbounded = j.at("unbounded").get<std::size_t>();
    b.caveat = j.at("caveat").get<std::string>();
    out.push_back(std::move(b));
  }
  return out;
}

inline nlohmann::json to_json(const ExperimentResult& result) {
  return {{"config", to_json(result.config)},
          {"summaries", summaries_to_json(result.summaries)},
          {"bounds", bounds_to_json(result.bounds)}};
}

struct ImportedResult {
  ExperimentConfig config;
  std::vector<PolicySummary> summaries;
  std::vector<BoundSummary> bounds;
};

inline ImportedResult import_result(const nlohmann::json& j) {
  ImportedResult r;
  r.config = config_from_json(j.at("config"));
  r.summaries = summaries_from_json(j.at("summaries"));
  if (j.contains("bounds")) r.bounds = bounds_from_json(j.at("bounds"));
  return r;
}

// Mean regret curve per policy with a shaded +-1 std band.
inline std::string to_svg(const ExperimentResult& result, const std::string& point_id) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  constexpr double width = 720, height = 440, left = 70, right = 150, top = 30, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  std::vector<const PolicySummary*> series;
  for (const auto& s : result.summaries) {
    if (s.point_id == point_id) series.push_back(&s);
  }
  if (series.empty()) throw ExportError("no results for experiment id '" + point_id + "'");
  const std::size_t horizon = series.front()->summary.mean_curve.size();
  double ymax = 0.0;
  for (const auto* s : series) {
    for (std::size_t t = 0; t < horizon; ++t) ymax = std::max(ymax, s->summary.mean_curve[t] + s->summary.std_curve[t]);
  }
  if (ymax <= 0.0) ymax = 1.0;

  // At most ~400 vertices per curve.
  const auto rounds = logged_rounds(horizon, std::max<std::size_t>(1, horizon / 400));
  auto px = [&](std::size_t t) { return left + pw * static_cast<double>(t) / static_cast<double>(horizon); };
  auto py = [&](double y) { return top + ph * (1.0 - y / ymax); };
  auto pt = [&](double x, double y) { return detail::g17(std::round(x * 100) / 100) + "," + detail::g17(std::round(y * 100) / 100); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::g17(width) + "\" height=\"" +
                    detail::g17(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<title>" + point_id + "</title>\n";
  svg += "<rect x=\"" + detail::g17(left) + "\" y=\"" + detail::g17(top) + "\" width=\"" + detail::g17(pw) +
         "\" height=\"" + detail::g17(ph) + "\" fill=\"none\" stroke=\"#000\"/>\n";
  svg += "<text x=\"" + detail::g17(left + pw / 2) + "\" y=\"" + detail::g17(height - 12) +
         "\" text-anchor=\"middle\">t</text>\n";
  svg += "<text x=\"16\" y=\"" + detail::g17(top + ph / 2) + "\" transform=\"rotate(-90 16 " + detail::g17(top + ph / 2) +
         ")\" text-anchor=\"middle\">cumulative regret</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = ymax * i / 4.0;
    const std::size_t t = horizon * static_cast<std::size_t>(i) / 4;
    svg += "<text x=\"" + detail::g17(left - 6) + "\" y=\"" + detail::g17(py(y) + 4) + "\" text-anchor=\"end\">" +
           detail::g17(std::round(y * 10) / 10) + "</text>\n";
    svg += "<text x=\"" + detail::g17(px(t)) + "\" y=\"" + detail::g17(top + ph + 18) + "\" text-anchor=\"middle\">" +
           std::to_string(t) + "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k]->summary;
    const char* colour = palette[k % 10];
    std::string band, line;
    for (std::size_t t : rounds) band += pt(px(t), py(s.mean_curve[t - 1] + s.std_curve[t - 1])) + " ";
    for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
      band += pt(px(*it), py(std::max(0.0, s.mean_curve[*it - 1] - s.std_curve[*it - 1]))) + " ";
    }
    for (std::size_t t : rounds) line += pt(px(t), py(s.mean_curve[t - 1])) + " ";
    band.pop_back();
    line.pop_back();
    svg += "<polygon class=\"std-band\" fill=\"" + std::string(colour) + "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"" +
           band + "\"/>\n";
    svg += "<polyline class=\"mean\" data-policy=\"" + series[k]->policy + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"1.5\" points=\"" + line + "\"/>\n";
    const double ly = top + 14 + 18 * static_cast<double>(k);
    svg += "<line x1=\"" + detail::g17(left + pw + 12) + "\" y1=\"" + detail::g17(ly - 4) + "\" x2=\"" +
           detail::g17(left + pw + 32) + "\" y2=\"" + detail::g17(ly - 4) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + detail::g17(left + pw + 38) + "\" y=\"" + detail::g17(ly) + "\">" + series[k]->policy + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

// Writes the requested formats under `dir` and returns the paths written.
inline std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::filesystem::path& dir,
                                                        const std::vector<std::string>& formats) {
  std::vector<std::filesystem::path> written;
  const std::string stem = detail::file_stem(result.config.name);
  for (const auto& f : formats) {
    if (f == "csv") {
      written.push_back(dir / (stem + ".csv"));
      detail::write_file(written.back(), to_csv(result));
    } else if (f == "json") {
      written.push_back(dir / (stem + ".json"));
      detail::write_file(written.back(), to_json(result).dump(1) + "\n");
    } else if (f == "svg") {
      for (const auto& p : result.config.points) {
        written.push_back(dir / (p.id == result.config.name ? stem + ".svg" : stem + "_" + detail::file_stem(p.id) + ".svg"));
        detail::write_file(written.back(), to_svg(result, p.id));
      }
    } else {
      throw ConfigError("unknown output format '" + f + "' (expected csv, json or svg)");
    }
  }
  return written;
}

}  // namespace clusterbandit

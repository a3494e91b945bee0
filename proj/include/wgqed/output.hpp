#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/scenario_runner.hpp"

namespace wgqed {

inline constexpr std::string_view kCsvHeader =
    "t_over_tau1,re_B1,im_B1,re_B2,im_B2,population,concurrence";

/// One row per sample, 17 significant digits, newline-terminated.
std::string format_trajectory_csv(const std::vector<SamplePoint>& samples, double time_unit);
void write_text_file(const std::filesystem::path& path, std::string_view text);

struct PlotCurve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart (concurrence versus t / tau1).
std::string render_svg_plot(std::string_view title, const std::vector<PlotCurve>& curves);
PlotCurve concurrence_curve(std::string label, const std::vector<SamplePoint>& samples,
                            double time_unit);

}  // namespace wgqed

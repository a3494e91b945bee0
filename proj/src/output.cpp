#include "wgqed/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "wgqed/errors.hpp"

namespace wgqed {

std::string format_trajectory_csv(const std::vector<SamplePoint>& samples, double time_unit) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", s.t / time_unit,
                       s.bare.B1.real(), s.bare.B1.imag(), s.bare.B2.real(), s.bare.B2.imag(),
                       s.population, s.concurrence);
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

PlotCurve concurrence_curve(std::string label, const std::vector<SamplePoint>& samples,
                            double time_unit) {
  PlotCurve curve{std::move(label), {}, {}};
  curve.x.reserve(samples.size());
  curve.y.reserve(samples.size());
  for (const auto& s : samples) {
    curve.x.push_back(s.t / time_unit);
    curve.y.push_back(s.concurrence);
  }
  return curve;
}

std::string render_svg_plot(std::string_view title, const std::vector<PlotCurve>& curves) {
  constexpr double width = 720.0;
  constexpr double height = 420.0;
  constexpr double left = 60.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 50.0;
  constexpr std::array<const char*, 6> colors{"#000000", "#1f4fd1", "#2a9d3a",
                                              "#d1301f", "#8a2be2", "#d18a1f"};

  double x_max = 0.0;
  for (const auto& c : curves) {
    if (!c.x.empty()) x_max = std::max(x_max, c.x.back());
  }
  if (!(x_max > 0.0)) x_max = 1.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + plot_w * x / x_max; };
  auto py = [&](double y) { return top + plot_h * (1.0 - std::clamp(y, 0.0, 1.0)); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  svg += fmt::format("<text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
                     "text-anchor=\"middle\">{}</text>\n",
                     width / 2, title);
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
                     "stroke=\"#444\"/>\n",
                     left, top, plot_w, plot_h);
  for (int i = 0; i <= 4; ++i) {
    const double y = 0.25 * i;
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"end\">{:.2f}</text>\n",
                       left - 6, py(y) + 4, y);
    const double x = x_max * 0.25 * i;
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "text-anchor=\"middle\">{:.3g}</text>\n",
                       px(x), top + plot_h + 16, x);
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "text-anchor=\"middle\">t / tau1</text>\n",
                     left + plot_w / 2, height - 12);
  svg += fmt::format("<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
                     "transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">concurrence</text>\n",
                     top + plot_h / 2, top + plot_h / 2);

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = colors[i % colors.size()];
    std::string points;
    for (std::size_t k = 0; k < c.x.size(); ++k) {
      points += fmt::format("{:.2f},{:.2f} ", px(c.x[k]), py(c.y[k]));
    }
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.4\" "
                       "points=\"{}\"/>\n",
                       color, points);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
                       "fill=\"{}\" text-anchor=\"end\">{}</text>\n",
                       width - right - 6, top + 14 + 14 * static_cast<double>(i), color, c.label);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace wgqed

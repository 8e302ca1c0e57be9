#pragma once

// Minimal static SVG charts: line plots and a classification strip.

#include <string>
#include <vector>

#include "heatlab/threshold.hpp"

namespace heatlab::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Non-finite points are skipped. With log_y, nonpositive values are skipped.
std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series, bool log_y = false);

/// One tick per probe on a lambda axis, coloured by classification.
std::string classification_strip(const std::string& title, const std::vector<ProbeRow>& probes);

}  // namespace heatlab::cli

#pragma once

#include <string>
#include <vector>

namespace pdem::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Axes, one polyline per series and a legend. Non-finite points are skipped.
std::string render(const LineChart& chart, int width = 720, int height = 480);

}  // namespace pdem::svg

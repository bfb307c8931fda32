#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dshock {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line plot written as plain SVG; axes autoscale to the data.
struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 720;
  int height = 440;

  void write(std::ostream& os) const;
  void save(const std::string& path) const;
};

}  // namespace dshock

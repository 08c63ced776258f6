#include "trackmon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trackmon {

BoundingBox::BoundingBox(double x_, double y_, double w_, double h_)
    : x(x_), y(y_), w(w_), h(h_) {
  if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(w) &&
        std::isfinite(h))) {
    throw std::invalid_argument("BoundingBox: all fields must be finite");
  }
  if (!(w > 0.0 && h > 0.0)) {
    throw std::invalid_argument(
        "BoundingBox: width and height must be positive");
  }
}

namespace {

double overlap(double lo1, double hi1, double lo2, double hi2) {
  return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  return overlap(a.x, a.right(), b.x, b.right()) *
         overlap(a.y, a.bottom(), b.y, b.bottom());
}

}  // namespace

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return inter / uni;  // uni > 0: both boxes have positive area
}

double giou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  const double hull_w = std::max(a.right(), b.right()) - std::min(a.x, b.x);
  const double hull_h = std::max(a.bottom(), b.bottom()) - std::min(a.y, b.y);
  const double hull = hull_w * hull_h;
  return inter / uni - (hull - uni) / hull;
}

double ngiou(const BoundingBox& a, const BoundingBox& b) {
  return (giou(a, b) + 1.0) / 2.0;
}

}  // namespace trackmon

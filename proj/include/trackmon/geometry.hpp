#pragma once

namespace trackmon {

// Axis-aligned box in (left, top, width, height) convention with continuous
// geometry, matching OTB-style annotation files. Degenerate boxes are
// rejected at construction.
struct BoundingBox {
  double x;
  double y;
  double w;
  double h;

  BoundingBox(double x, double y, double w, double h);

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
};

/// Intersection over union, in [0, 1]. Zero for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Generalized IoU: IoU minus the hull slack |H \ (a u b)| / |H|, where H is
/// the smallest axis-aligned rectangle enclosing both boxes. Range (-1, 1].
double giou(const BoundingBox& a, const BoundingBox& b);

/// GIoU rescaled to (0, 1]: (giou + 1) / 2.
double ngiou(const BoundingBox& a, const BoundingBox& b);

}  // namespace trackmon

#pragma once

namespace ppk {

/// Axis-aligned box in continuous pixel coordinates, corner convention.
/// Covers [x1, x2) x [y1, y2); a well-formed box has x1 <= x2 and y1 <= y2.
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double area() const { return width() * height(); }

    bool well_formed() const { return x1 <= x2 && y1 <= y2; }
    bool degenerate() const { return !(width() > 0.0 && height() > 0.0); }

    bool contains(const BoundingBox& o) const
    {
        return x1 <= o.x1 && y1 <= o.y1 && o.x2 <= x2 && o.y2 <= y2;
    }

    bool operator==(const BoundingBox&) const = default;
};

}  // namespace ppk

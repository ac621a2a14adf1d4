#pragma once

#include <cassert>
#include <vector>

#include "semnav/core/geometry.hpp"

namespace semnav {

/** Dense row-major 2D grid. Index (x, y) with y selecting the row. */
template <class T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int w, int h, T fill = T{}) : w_(w), h_(h), v_(size_t(w) * size_t(h), fill) {
    assert(w >= 0 && h >= 0);
  }

  int width() const { return w_; }
  int height() const { return h_; }
  size_t size() const { return v_.size(); }

  bool in_bounds(int x, int y) const { return x >= 0 && x < w_ && y >= 0 && y < h_; }
  bool in_bounds(Cell c) const { return in_bounds(c.x, c.y); }

  T& at(int x, int y) {
    assert(in_bounds(x, y));
    return v_[size_t(y) * w_ + x];
  }
  const T& at(int x, int y) const {
    assert(in_bounds(x, y));
    return v_[size_t(y) * w_ + x];
  }
  T& at(Cell c) { return at(c.x, c.y); }
  const T& at(Cell c) const { return at(c.x, c.y); }

  T& operator[](size_t i) { return v_[i]; }
  const T& operator[](size_t i) const { return v_[i]; }

  void fill(T value) { std::fill(v_.begin(), v_.end(), value); }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }

  bool operator==(const Grid2D&) const = default;

 private:
  int w_ = 0;
  int h_ = 0;
  std::vector<T> v_;
};

/** Integer bounding box over cells; empty until grown. Max bounds are inclusive. */
struct CellBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;

  bool empty() const { return x1 < x0 || y1 < y0; }
  void grow(int x, int y) {
    if (empty()) {
      x0 = x1 = x;
      y0 = y1 = y;
    } else {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  void grow(const CellBox& o) {
    if (o.empty()) return;
    grow(o.x0, o.y0);
    grow(o.x1, o.y1);
  }
  CellBox expanded(int m) const {
    if (empty()) return *this;
    return {x0 - m, y0 - m, x1 + m, y1 + m};
  }
  CellBox clamped(int w, int h) const {
    if (empty()) return *this;
    return {std::max(x0, 0), std::max(y0, 0), std::min(x1, w - 1), std::min(y1, h - 1)};
  }
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
};

}  // namespace semnav

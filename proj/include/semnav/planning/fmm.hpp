#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "semnav/core/binio.hpp"
#include "semnav/core/error.hpp"
#include "semnav/core/grid.hpp"

namespace semnav::planning {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct FmmOptions {
  CellBox window;                // empty box = march the whole grid
  std::vector<Cell> stop_cells;  // stop once all of these are accepted
  std::vector<double>* acceptance_trace = nullptr;  // diagnostics
};

/**
 * First-order upwind Fast Marching for |grad T| = 1 with multi-source goal
 * sets. Goal cells seed at zero even when they sit on obstacles (the goal
 * channel usually does); all other blocked cells stay unreachable. At each
 * update T solves (T-Tx)^2 + (T-Ty)^2 = h^2 with Tx, Ty the smaller value of
 * each axis pair, falling back to min+h when |Tx-Ty| >= h.
 *
 * Buffers persist across calls so the per-step replan allocates nothing.
 */
class FastMarcher {
 public:
  Grid2D<double> compute(const Grid2D<uint8_t>& traversable, const std::vector<Cell>& goal,
                         double cell_m, const FmmOptions& opt = {}) {
    Grid2D<double> field(traversable.width(), traversable.height(), kUnreachable);
    compute_into(traversable, goal, cell_m, opt, field);
    return field;
  }

  void compute_into(const Grid2D<uint8_t>& traversable, const std::vector<Cell>& goal,
                    double cell_m, const FmmOptions& opt, Grid2D<double>& field) {
    require(!goal.empty(), "fmm_distance: goal set must be non-empty");
    const int w = traversable.width(), h = traversable.height();
    if (field.width() != w || field.height() != h) field = Grid2D<double>(w, h, kUnreachable);
    else field.fill(kUnreachable);

    state_.assign(size_t(w) * h, 0);  // 0 far, 1 narrow, 2 accepted
    heap_.clear();

    CellBox win = opt.window.empty() ? CellBox{0, 0, w - 1, h - 1}
                                     : opt.window.clamped(w, h);

    int stop_pending = 0;
    if (!opt.stop_cells.empty()) {
      stop_set_.assign(size_t(w) * h, 0);
      for (auto c : opt.stop_cells)
        if (traversable.in_bounds(c) && !stop_set_[idx(c, w)]) {
          stop_set_[idx(c, w)] = 1;
          ++stop_pending;
        }
    }

    for (auto c : goal) {
      if (!traversable.in_bounds(c) || !win.contains(c.x, c.y)) continue;
      if (field.at(c) > 0.0) {
        field.at(c) = 0.0;
        push(0.0, idx(c, w));
        state_[idx(c, w)] = 1;
      }
    }
    // Exact near-field initialization: the first-order stencil starts a point
    // source 20% long on the diagonal and the startup error never decays, so
    // cells within a small disk of each boundary seed get exact Euclidean
    // values when the straight line to the seed is clear. Interior seeds of a
    // goal region never minimize the set distance and are skipped.
    const int init_r = 10;
    seed_mask_.assign(size_t(w) * h, 0);
    for (auto c : goal)
      if (traversable.in_bounds(c)) seed_mask_[idx(c, w)] = 1;
    for (auto c : goal) {
      if (!traversable.in_bounds(c) || !win.contains(c.x, c.y)) continue;
      bool boundary = false;
      const int ddx[4] = {1, -1, 0, 0}, ddy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4 && !boundary; ++k) {
        int nx = c.x + ddx[k], ny = c.y + ddy[k];
        boundary = !traversable.in_bounds(nx, ny) || !seed_mask_[idx({nx, ny}, w)];
      }
      if (!boundary) continue;
      for (int dy = -init_r; dy <= init_r; ++dy)
        for (int dx = -init_r; dx <= init_r; ++dx) {
          if (!dx && !dy) continue;
          if (dx * dx + dy * dy > init_r * init_r) continue;
          int nx = c.x + dx, ny = c.y + dy;
          if (nx < win.x0 || nx > win.x1 || ny < win.y0 || ny > win.y1) continue;
          if (!traversable.in_bounds(nx, ny) || !traversable.at(nx, ny)) continue;
          size_t ni = idx({nx, ny}, w);
          if (state_[ni] == 2) continue;
          double dist = std::sqrt(double(dx * dx + dy * dy));
          bool clear = true;
          int samples = 2 * init_r;
          for (int s = 1; s < samples && clear; ++s) {
            int mx = c.x + int(std::lround(dx * double(s) / samples));
            int my = c.y + int(std::lround(dy * double(s) / samples));
            clear = (mx == c.x && my == c.y) || (traversable.in_bounds(mx, my) &&
                                                 traversable.at(mx, my));
          }
          if (!clear) continue;
          double cand = dist * cell_m;
          if (cand < field.at(nx, ny)) {
            field.at(nx, ny) = cand;
            push(cand, ni);
            state_[ni] = 1;
          }
        }
    }

    const double cell = cell_m;
    while (!heap_.empty()) {
      auto [t, i] = pop();
      if (state_[i] == 2) continue;  // stale heap entry
      state_[i] = 2;
      if (opt.acceptance_trace) opt.acceptance_trace->push_back(t);
      if (!opt.stop_cells.empty() && stop_set_[i]) {
        if (--stop_pending == 0) break;
      }
      int x = int(i % size_t(w)), y = int(i / size_t(w));
      const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int nx = x + dx[k], ny = y + dy[k];
        if (nx < win.x0 || nx > win.x1 || ny < win.y0 || ny > win.y1) continue;
        size_t ni = idx({nx, ny}, w);
        if (state_[ni] == 2 || !traversable.at(nx, ny)) continue;
        double tx = std::min(value_at(field, nx - 1, ny), value_at(field, nx + 1, ny));
        double ty = std::min(value_at(field, nx, ny - 1), value_at(field, nx, ny + 1));
        double tnew;
        if (std::abs(tx - ty) >= cell) {
          tnew = std::min(tx, ty) + cell;
        } else {
          double diff = tx - ty;
          tnew = 0.5 * (tx + ty + std::sqrt(2.0 * cell * cell - diff * diff));
        }
        if (tnew < field.at(nx, ny)) {
          field.at(nx, ny) = tnew;
          push(tnew, ni);
          state_[ni] = 1;
        }
      }
    }
  }

 private:
  static size_t idx(Cell c, int w) { return size_t(c.y) * size_t(w) + size_t(c.x); }
  static double value_at(const Grid2D<double>& f, int x, int y) {
    return f.in_bounds(x, y) ? f.at(x, y) : kUnreachable;
  }

  void push(double t, size_t i) {
    heap_.push_back({t, i});
    std::push_heap(heap_.begin(), heap_.end(), cmp);
  }
  std::pair<double, size_t> pop() {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    auto e = heap_.back();
    heap_.pop_back();
    return e;
  }
  static bool cmp(const std::pair<double, size_t>& a, const std::pair<double, size_t>& b) {
    return a.first > b.first;
  }

  std::vector<uint8_t> state_;
  std::vector<uint8_t> stop_set_;
  std::vector<uint8_t> seed_mask_;
  std::vector<std::pair<double, size_t>> heap_;
};

/** One-shot form of the solver. */
inline Grid2D<double> fmm_distance(const Grid2D<uint8_t>& traversable,
                                   const std::vector<Cell>& goal, double cell_m,
                                   const FmmOptions& opt = {}) {
  FastMarcher m;
  return m.compute(traversable, goal, cell_m, opt);
}

/**
 * Length of the path a field implies: the shortest 16-connected path from
 * `start` along which the field decreases strictly at every step, down to a
 * zero-value (goal) cell. Knight moves sweep two cells that must both be
 * traversable. On an exact distance field this reproduces the shortest grid
 * path; on an FMM field the extra length is the field's planning error.
 * Returns meters; infinite when the start has no finite value or no
 * descending route reaches the goal set.
 */
inline double descent_path_length(const Grid2D<double>& field,
                                  const Grid2D<uint8_t>& traversable, Cell start,
                                  double cell_m) {
  if (!field.in_bounds(start) || !std::isfinite(field.at(start))) return kUnreachable;

  auto value = [&](int x, int y) {
    return field.in_bounds(x, y) ? field.at(x, y) : kUnreachable;
  };
  auto free_cell = [&](int x, int y) {
    return traversable.in_bounds(x, y) && traversable.at(x, y);
  };
  struct Step {
    int dx, dy;
    double len;
  };
  static const Step steps[] = {
      {1, 0, 1},  {-1, 0, 1}, {0, 1, 1},  {0, -1, 1},
      {1, 1, std::sqrt(2.0)},  {1, -1, std::sqrt(2.0)},
      {-1, 1, std::sqrt(2.0)}, {-1, -1, std::sqrt(2.0)},
      {2, 1, std::sqrt(5.0)},  {2, -1, std::sqrt(5.0)},
      {-2, 1, std::sqrt(5.0)}, {-2, -1, std::sqrt(5.0)},
      {1, 2, std::sqrt(5.0)},  {1, -2, std::sqrt(5.0)},
      {-1, 2, std::sqrt(5.0)}, {-1, -2, std::sqrt(5.0)},
  };

  // Dijkstra over the descent DAG the field induces.
  const int w = field.width(), h = field.height();
  Grid2D<double> best(w, h, kUnreachable);
  using QItem = std::pair<double, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> q;
  best.at(start) = 0.0;
  q.push({0.0, start.y * w + start.x});
  while (!q.empty()) {
    auto [len, idx] = q.top();
    q.pop();
    Cell c{int(idx % w), int(idx / w)};
    if (len > best.at(c)) continue;
    double here = field.at(c);
    if (here == 0.0) return len * cell_m;
    for (const auto& s : steps) {
      double t = value(c.x + s.dx, c.y + s.dy);
      if (t >= here) continue;  // only strictly descending edges
      if (s.len > 2.0) {        // knight move: swept cells must be free
        int ax, ay, bx, by;
        if (std::abs(s.dx) == 2) {
          ax = c.x + s.dx / 2; ay = c.y;
          bx = c.x + s.dx / 2; by = c.y + s.dy;
        } else {
          ax = c.x; ay = c.y + s.dy / 2;
          bx = c.x + s.dx; by = c.y + s.dy / 2;
        }
        if (!free_cell(ax, ay) || !free_cell(bx, by)) continue;
      }
      double nlen = len + s.len;
      Cell n{c.x + s.dx, c.y + s.dy};
      if (nlen < best.at(n)) {
        best.at(n) = nlen;
        q.push({nlen, n.y * w + n.x});
      }
    }
  }
  return kUnreachable;
}

/** Distance-field dump: the SMAP container with magic DFLD, one f32 channel. */
inline void save_distance_field(const Grid2D<double>& field, const std::string& path) {
  BinWriter w;
  w.magic("DFLD");
  w.u16(1);
  w.u16(1);
  w.u16(uint16_t(field.width()));
  for (size_t i = 0; i < field.size(); ++i) w.f32(float(field[i]));
  w.save(path);
}

inline Grid2D<double> load_distance_field(const std::string& path) {
  BinReader r = BinReader::from_file(path);
  r.expect_magic("DFLD");
  if (r.u16() != 1) throw ParseError("unsupported DFLD version");
  if (r.u16() != 1) throw ParseError("DFLD must carry one channel");
  int m = r.u16();
  Grid2D<double> field(m, m, kUnreachable);
  for (size_t i = 0; i < field.size(); ++i) field[i] = double(r.f32());
  if (r.remaining() != 0) throw ParseError("trailing bytes in DFLD", long(r.offset()));
  return field;
}

}  // namespace semnav::planning

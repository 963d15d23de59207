#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kinn {

/// Weight/bias trajectory w(t), b(t): constant or a piecewise-constant table.
/// Entries are sorted by time; the value before the first breakpoint equals
/// the first entry and the last entry is held for all later times.
/// 1D uses (w[0], b[0]); 2D uses the row-major 2x2 block and both biases.
struct NetworkParams {
  struct Entry {
    double t = 0.0;
    std::array<double, 4> w{};  // row-major: w_xx, w_xy, w_yx, w_yy
    std::array<double, 2> b{};
  };

  int dim = 1;
  std::vector<Entry> table;

  static NetworkParams constant1d(double w, double b) {
    NetworkParams p;
    p.dim = 1;
    p.table.push_back({0.0, {w, 0, 0, 0}, {b, 0}});
    return p;
  }

  static NetworkParams constant2d(const std::array<double, 4>& w,
                                  const std::array<double, 2>& b) {
    NetworkParams p;
    p.dim = 2;
    p.table.push_back({0.0, w, b});
    return p;
  }

  static NetworkParams table1d(const std::vector<std::array<double, 3>>& rows) {
    // rows of (t, w, b), t ascending
    NetworkParams p;
    p.dim = 1;
    for (const auto& r : rows) p.table.push_back({r[0], {r[1], 0, 0, 0}, {r[2], 0}});
    p.check_sorted();
    return p;
  }

  void check_sorted() const {
    if (table.empty()) throw std::invalid_argument("params: empty table");
    for (std::size_t i = 1; i < table.size(); ++i)
      if (!(table[i].t > table[i - 1].t))
        throw std::invalid_argument("params: table times must be increasing");
  }

  bool constant() const { return table.size() == 1; }

  const Entry& entry_at(double t) const {
    std::size_t i = table.size();
    while (i > 1 && table[i - 1].t > t) --i;
    return table[i - 1];
  }

  double w1(double t) const { return entry_at(t).w[0]; }
  double b1(double t) const { return entry_at(t).b[0]; }
  const std::array<double, 4>& w2(double t) const { return entry_at(t).w; }
  const std::array<double, 2>& b2(double t) const { return entry_at(t).b; }
};

}  // namespace kinn

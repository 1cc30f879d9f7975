#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fuzzyreq {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return std::clamp(x, lo, hi); }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Cartesian product of closed intervals. Space_context, Space_config and
/// Space_satDegree are all instances.
class SpaceBox {
 public:
  SpaceBox() = default;
  explicit SpaceBox(std::vector<Interval> dims) : dims_(std::move(dims)) {
    for (const auto& d : dims_) {
      if (!(d.lo <= d.hi)) throw std::invalid_argument("SpaceBox: interval with lo > hi");
    }
  }

  std::size_t size() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }
  const Interval& operator[](std::size_t i) const { return dims_[i]; }
  std::span<const Interval> dims() const { return dims_; }

  bool contains(std::span<const double> x) const {
    if (x.size() != dims_.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!dims_[i].contains(x[i])) return false;
    }
    return true;
  }

  /// Clamps x into the box; returns true if any coordinate moved.
  bool clamp(std::span<double> x) const {
    bool moved = false;
    for (std::size_t i = 0; i < x.size() && i < dims_.size(); ++i) {
      const double c = dims_[i].clamp(x[i]);
      moved |= c != x[i];
      x[i] = c;
    }
    return moved;
  }

  /// Maps x to [0,1]^n per dimension. Degenerate dimensions map to 0.
  std::vector<double> normalize(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = dims_[i].width();
      out[i] = w > 0.0 ? (x[i] - dims_[i].lo) / w : 0.0;
    }
    return out;
  }

  std::vector<double> denormalize(std::span<const double> u) const {
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = dims_[i].lo + dims_[i].width() * u[i];
    return out;
  }

  friend bool operator==(const SpaceBox&, const SpaceBox&) = default;

 private:
  std::vector<Interval> dims_;
};

}  // namespace fuzzyreq

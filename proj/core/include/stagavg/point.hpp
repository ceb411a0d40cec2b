#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace stagavg {

/// Dense real vector of fixed dimension. Binary operations require equal
/// dimensions and throw InvalidArgument otherwise.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }

  double norm() const noexcept;
  double squared_norm() const noexcept;
  bool all_finite() const noexcept;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(double scale) noexcept;

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator*(Point a, double scale);
Point operator*(double scale, Point a);

double dot(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);

void require_same_dim(std::size_t expected, std::size_t actual, const char* context);

/// ĝ(w) together with its cached Euclidean norm.
struct SubgradientSample {
  Point vector;
  double norm = 0.0;

  static SubgradientSample from(Point v) {
    const double n = v.norm();
    return {std::move(v), n};
  }
};

}  // namespace stagavg

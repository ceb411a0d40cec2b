#include "stagavg/point.hpp"

#include <cmath>
#include <string>

#include "stagavg/errors.hpp"

namespace stagavg {

void require_same_dim(std::size_t expected, std::size_t actual, const char* context) {
  if (expected != actual) {
    throw InvalidArgument(std::string(context) + ": dimension mismatch (expected " +
                          std::to_string(expected) + ", got " + std::to_string(actual) + ")");
  }
}

double Point::squared_norm() const noexcept {
  double s = 0.0;
  for (double x : coords_) s += x * x;
  return s;
}

double Point::norm() const noexcept { return std::sqrt(squared_norm()); }

bool Point::all_finite() const noexcept {
  for (double x : coords_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Point& Point::operator+=(const Point& other) {
  require_same_dim(dim(), other.dim(), "Point::operator+=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_same_dim(dim(), other.dim(), "Point::operator-=");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(double scale) noexcept {
  for (double& x : coords_) x *= scale;
  return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator*(Point a, double scale) { return a *= scale; }
Point operator*(double scale, Point a) { return a *= scale; }

double dot(const Point& a, const Point& b) {
  require_same_dim(a.dim(), b.dim(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance(const Point& a, const Point& b) {
  require_same_dim(a.dim(), b.dim(), "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace stagavg

#include "polext/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "polext/errors.hpp"

namespace polext::svg {

using numerics::dot;
using numerics::norm;
using numerics::Vector;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

Vector cross(const Vector& a, const Vector& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vector unit(Vector v) {
  const double len = norm(v);
  for (double& c : v) c /= len;
  return v;
}

// Any unit vector orthogonal to v (v unit, d = 3).
Vector orthogonal_to(const Vector& v) {
  std::size_t axis = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(v[i]) < std::abs(v[axis])) axis = i;
  Vector e(3, 0.0);
  e[axis] = 1.0;
  numerics::axpy(-dot(e, v), v, e);
  return unit(e);
}

struct Canvas {
  double size;
  double center() const { return size / 2.0; }
  double radius() const { return 0.45 * size; }
  std::string x(double a) const { return fmt(center() + radius() * a); }
  std::string y(double b) const { return fmt(center() - radius() * b); }
};

std::string header(double size) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(size)
     << "\" height=\"" << fmt(size) << "\" viewBox=\"0 0 " << fmt(size) << " " << fmt(size)
     << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << fmt(size) << "\" height=\"" << fmt(size)
     << "\" fill=\"white\"/>\n";
  return os.str();
}

double max_mu(const std::vector<extrema::ExtremalPoint>& points) {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.weight_mu);
  return m;
}

double dot_radius(double mu, double mu_max) {
  return 2.0 + 6.0 * std::sqrt(mu_max > 0.0 ? mu / mu_max : 1.0);
}

std::string render_planar(const systems::VectorSystem& sys,
                          const std::vector<extrema::ExtremalPoint>& points,
                          const PlotOptions& opt) {
  const Canvas cv{opt.size};
  std::ostringstream os;
  os << header(opt.size);
  os << "<circle cx=\"" << fmt(cv.center()) << "\" cy=\"" << fmt(cv.center()) << "\" r=\""
     << fmt(cv.radius()) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  os << "<g class=\"hyperplanes\" stroke=\"#1f4e9c\" stroke-width=\"1.2\">\n";
  for (const auto& v : sys.vectors()) {
    // v^perp is the diameter along (-v_y, v_x).
    os << "<line x1=\"" << cv.x(-v[1]) << "\" y1=\"" << cv.y(v[0]) << "\" x2=\"" << cv.x(v[1])
       << "\" y2=\"" << cv.y(-v[0]) << "\"/>\n";
  }
  os << "</g>\n<g class=\"extrema\" fill=\"#c0392b\">\n";
  const double mu_max = max_mu(points);
  for (const auto& p : points)
    os << "<circle cx=\"" << cv.x(p.u[0]) << "\" cy=\"" << cv.y(p.u[1]) << "\" r=\""
       << fmt(dot_radius(p.weight_mu, mu_max)) << "\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

std::string render_sphere(const systems::VectorSystem& sys,
                          const std::vector<extrema::ExtremalPoint>& points,
                          const PlotOptions& opt) {
  if (opt.view.size() != 3 || !(norm(opt.view) > 0.0))
    throw DimensionError("view direction must be a nonzero 3-vector");
  const Vector view = unit(opt.view);
  Vector up0 = std::abs(view[2]) < 0.9 ? Vector{0, 0, 1} : Vector{0, 1, 0};
  numerics::axpy(-dot(up0, view), view, up0);
  const Vector up = unit(up0);
  const Vector right = cross(up, view);
  const Canvas cv{opt.size};

  std::ostringstream os;
  os << header(opt.size);
  os << "<circle cx=\"" << fmt(cv.center()) << "\" cy=\"" << fmt(cv.center()) << "\" r=\""
     << fmt(cv.radius()) << "\" fill=\"#f4f6fa\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  os << "<g class=\"great-circles\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\">\n";
  const int half = std::max(4, opt.circle_samples / 2);
  for (const auto& v : sys.vectors()) {
    // a spans the horizon crossing, b points to the visible side, so the
    // front arc is phi in [0, pi] and the back arc is phi in [pi, 2 pi].
    Vector a = cross(v, view);
    if (norm(a) < 1e-12) a = orthogonal_to(v);
    a = unit(a);
    Vector b = cross(v, a);
    if (dot(b, view) < 0)
      for (double& c : b) c = -c;
    for (int side = 0; side < 2; ++side) {
      os << "<polyline" << (side ? " stroke-dasharray=\"4 3\" stroke-opacity=\"0.5\"" : "")
         << " points=\"";
      for (int k = 0; k <= half; ++k) {
        const double phi = std::numbers::pi * (side + static_cast<double>(k) / half);
        Vector p(3);
        for (int i = 0; i < 3; ++i) p[i] = std::cos(phi) * a[i] + std::sin(phi) * b[i];
        os << (k ? " " : "") << cv.x(dot(p, right)) << "," << cv.y(dot(p, up));
      }
      os << "\"/>\n";
    }
  }
  os << "</g>\n<g class=\"extrema\" fill=\"#c0392b\">\n";
  const double mu_max = max_mu(points);
  for (const auto& p : points) {
    const bool front = dot(p.u, view) >= 0.0;
    os << "<circle cx=\"" << cv.x(dot(p.u, right)) << "\" cy=\"" << cv.y(dot(p.u, up))
       << "\" r=\"" << fmt(dot_radius(p.weight_mu, mu_max)) << "\""
       << (front ? "" : " fill-opacity=\"0.35\"") << "/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace

std::string render(const systems::VectorSystem& sys,
                   const std::vector<extrema::ExtremalPoint>& points, const PlotOptions& options) {
  if (sys.dim() == 2) return render_planar(sys, points, options);
  if (sys.dim() == 3) return render_sphere(sys, points, options);
  throw DimensionError("plot supports d = 2 or d = 3 only, got d = " + std::to_string(sys.dim()));
}

}  // namespace polext::svg

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/sparse_operator.hpp"
#include "splitpar/tensor.hpp"

namespace splitpar {

enum class Coefficient { a1, a2, a3, a4, a5 };

inline std::string to_string(Coefficient c) {
  static constexpr const char* names[] = {"a1", "a2", "a3", "a4", "a5"};
  return names[static_cast<int>(c)];
}

inline Coefficient parse_coefficient(std::string_view s) {
  if (s == "a1") return Coefficient::a1;
  if (s == "a2") return Coefficient::a2;
  if (s == "a3") return Coefficient::a3;
  if (s == "a4") return Coefficient::a4;
  if (s == "a5") return Coefficient::a5;
  throw InvalidInput("unknown coefficient '" + std::string(s) + "' (expected a1..a5)");
}

namespace coeff {

constexpr double pi = std::numbers::pi;

// 1 / (2 + cos(3 pi x) cos(2 pi y))
inline double a2(double x, double y) { return 1.0 / (2.0 + std::cos(3 * pi * x) * std::cos(2 * pi * y)); }
inline double a2_dx(double x, double y) {
  const double d = 2.0 + std::cos(3 * pi * x) * std::cos(2 * pi * y);
  return 3 * pi * std::sin(3 * pi * x) * std::cos(2 * pi * y) / (d * d);
}
inline double a2_dy(double x, double y) {
  const double d = 2.0 + std::cos(3 * pi * x) * std::cos(2 * pi * y);
  return 2 * pi * std::cos(3 * pi * x) * std::sin(2 * pi * y) / (d * d);
}

// Piecewise in x; x == 0.5 belongs to the left branch.
inline double a3(double x, double y) {
  if (x <= 0.5) return 1.0 + 0.5 * std::sin(5 * pi * x) + y * y * y;
  const double s = x - 0.5;
  return 1.5 / (1.0 + s * s) + y * y * y;
}
inline double a3_dx(double x, double) {
  if (x <= 0.5) return 2.5 * pi * std::cos(5 * pi * x);
  const double s = x - 0.5, d = 1.0 + s * s;
  return -3.0 * s / (d * d);
}
inline double a3_dy(double, double y) { return 3.0 * y * y; }

}  // namespace coeff

inline DiffusionTensor make_coefficient(Coefficient id) {
  const auto zero = constant_field(0.0);
  switch (id) {
    case Coefficient::a1:
      return scalar_tensor("a1", constant_field(1.0), zero, zero);
    case Coefficient::a2:
      return scalar_tensor("a2", coeff::a2, coeff::a2_dx, coeff::a2_dy);
    case Coefficient::a3:
      return scalar_tensor("a3", coeff::a3, coeff::a3_dx, coeff::a3_dy);
    case Coefficient::a4: {
      DiffusionTensor t;
      t.name = "a4";
      t.a11 = coeff::a2;
      t.dx_a11 = coeff::a2_dx;
      t.dy_a11 = coeff::a2_dy;
      t.a22 = coeff::a3;
      t.dx_a22 = coeff::a3_dx;
      t.dy_a22 = coeff::a3_dy;
      t.a12 = t.dx_a12 = t.dy_a12 = zero;
      return t;
    }
    case Coefficient::a5: {
      DiffusionTensor t = scalar_tensor("a5", coeff::a2, coeff::a2_dx, coeff::a2_dy);
      t.a12 = constant_field(0.25);
      t.has_mixed = true;
      return t;
    }
  }
  throw InvalidInput("unknown coefficient id");
}

/// u_t - div(a grad u) + c u = f on the unit square, u = 0 on the boundary,
/// with exact solution u = sin(2 pi t) sin(2 pi x) sin(2 pi y).
struct ManufacturedProblem {
  DiffusionTensor diffusion;
  ScalarField c = constant_field(0.0);
  double final_time = 1.0;

  static double exact(double x, double y, double t) {
    constexpr double tp = 2 * std::numbers::pi;
    return std::sin(tp * t) * std::sin(tp * x) * std::sin(tp * y);
  }
  static double initial(double x, double y) { return exact(x, y, 0.0); }
};

inline ManufacturedProblem make_problem(Coefficient id) {
  ManufacturedProblem p;
  p.diffusion = make_coefficient(id);
  return p;
}

/// f = u_t - a11 u_xx - a22 u_yy - 2 a12 u_xy - (d_x a11 + d_y a12) u_x
///        - (d_x a12 + d_y a22) u_y + c u, all factors analytic.
inline double forcing(const ManufacturedProblem& p, double x, double y, double t) {
  constexpr double tp = 2 * std::numbers::pi;
  const double st = std::sin(tp * t), ct = std::cos(tp * t);
  const double sx = std::sin(tp * x), cx = std::cos(tp * x);
  const double sy = std::sin(tp * y), cy = std::cos(tp * y);

  const double u = st * sx * sy;
  const double ut = tp * ct * sx * sy;
  const double ux = tp * st * cx * sy;
  const double uy = tp * st * sx * cy;
  const double uxx = -tp * tp * u;
  const double uyy = -tp * tp * u;
  const double uxy = tp * tp * st * cx * cy;

  const auto& a = p.diffusion;
  return ut - a.a11(x, y) * uxx - a.a22(x, y) * uyy - 2.0 * a.a12(x, y) * uxy -
         (a.dx_a11(x, y) + a.dy_a12(x, y)) * ux - (a.dx_a12(x, y) + a.dy_a22(x, y)) * uy +
         p.c(x, y) * u;
}

/// Values of `field` at the interior nodes in linear-index order.
inline Vector sample_on_grid(const ScalarField& field, const Grid& g) {
  Vector v(static_cast<Eigen::Index>(g.size()));
  for (int j = 1; j < g.M(); ++j)
    for (int i = 1; i < g.M(); ++i) v[static_cast<Eigen::Index>(g.index(i, j))] = field(g.coord(i), g.coord(j));
  return v;
}

inline Vector sample_on_grid(const SpaceTimeField& field, const Grid& g, double t) {
  return sample_on_grid([&](double x, double y) { return field(x, y, t); }, g);
}

inline Vector sample_exact(const Grid& g, double t) { return sample_on_grid(ManufacturedProblem::exact, g, t); }

inline Vector sample_forcing(const ManufacturedProblem& p, const Grid& g, double t) {
  return sample_on_grid([&](double x, double y) { return forcing(p, x, y, t); }, g);
}

}  // namespace splitpar

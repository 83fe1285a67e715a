#pragma once

#include <functional>
#include <string>

namespace splitpar {

using ScalarField = std::function<double(double, double)>;
using SpaceTimeField = std::function<double(double, double, double)>;

inline ScalarField constant_field(double value) {
  return [value](double, double) { return value; };
}

/// Symmetric 2x2 diffusion coefficient a(x, y) with its first partials.
/// The partials are only consumed by manufactured forcing; assembly uses the
/// values alone.
struct DiffusionTensor {
  std::string name;
  ScalarField a11, a12, a22;
  ScalarField dx_a11, dy_a11;
  ScalarField dx_a12, dy_a12;
  ScalarField dx_a22, dy_a22;
  bool has_mixed = false;
  /// Lower off-diagonal entry. Empty means a21 == a12; only set to describe
  /// (and reject) non-symmetric input.
  ScalarField a21;
};

/// Diagonal tensor s(x, y) I with partials (sx, sy).
inline DiffusionTensor scalar_tensor(std::string name, ScalarField s, ScalarField sx, ScalarField sy) {
  DiffusionTensor t;
  t.name = std::move(name);
  t.a11 = s;
  t.a22 = std::move(s);
  t.a12 = constant_field(0.0);
  t.dx_a11 = sx;
  t.dy_a11 = sy;
  t.dx_a22 = std::move(sx);
  t.dy_a22 = std::move(sy);
  t.dx_a12 = constant_field(0.0);
  t.dy_a12 = constant_field(0.0);
  return t;
}

}  // namespace splitpar

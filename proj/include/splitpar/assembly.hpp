#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/sparse_operator.hpp"
#include "splitpar/tensor.hpp"

namespace splitpar {

/// Which pieces of -div(rho a grad u) + rho c u go into an assembled operator.
struct AssemblyTerms {
  bool x_flux = true;        // -(rho a11 u_x)_x
  bool y_flux = true;        // -(rho a22 u_y)_y
  bool mixed = true;         // -(rho a12 u_y)_x - (rho a12 u_x)_y
  double reaction = 1.0;     // multiplier on rho c

  static AssemblyTerms all() { return {}; }
  static AssemblyTerms x_direction() { return {true, false, false, 0.5}; }
  static AssemblyTerms y_direction() { return {false, true, false, 0.5}; }
};

namespace detail {

inline void check_weight(double rho, double x, double y) {
  constexpr double slack = 1e-14;
  if (!(rho >= -slack && rho <= 1.0 + slack))
    throw InvalidInput("assembly weight must lie in [0,1]; got " + std::to_string(rho) + " at (" +
                       std::to_string(x) + ", " + std::to_string(y) + ")");
}

inline void check_symmetric(const Grid& g, const DiffusionTensor& a) {
  if (!a.a21) return;
  for (int j = 0; j <= g.M(); ++j) {
    for (int i = 0; i <= g.M(); ++i) {
      const double x = g.coord(i), y = g.coord(j);
      const double u = a.a12(x, y), l = a.a21(x, y);
      if (std::abs(u - l) > 1e-14 * std::max({1.0, std::abs(u), std::abs(l)}))
        throw InvalidInput("diffusion tensor '" + a.name + "' is not symmetric at (" +
                           std::to_string(x) + ", " + std::to_string(y) + ")");
    }
  }
}

}  // namespace detail

/// Finite-difference discretization of u -> -div(rho a grad u) + rho c u on
/// the interior nodes with homogeneous Dirichlet data eliminated.
///
/// Diagonal fluxes sample rho * a11 (rho * a22) at edge midpoints; the mixed
/// terms use centered 2h differences with rho * a12 sampled at the nodes
/// (x_{i+-1}, y_j) and (x_i, y_{j+-1}). The result is symmetric for symmetric
/// a, five-point when the mixed term is absent or a12 vanishes, and additive
/// in rho because every sample point is shared between weights.
inline SparseOperator assemble_operator(const Grid& g, const DiffusionTensor& a, const ScalarField& c,
                                        const std::optional<ScalarField>& weight = std::nullopt,
                                        AssemblyTerms terms = {}) {
  detail::check_symmetric(g, a);

  auto rho = [&](double x, double y) {
    if (!weight) return 1.0;
    const double r = (*weight)(x, y);
    detail::check_weight(r, x, y);
    return r;
  };

  const int M = g.M();
  const double inv_h2 = static_cast<double>(M) * M;
  const double inv_4h2 = 0.25 * inv_h2;
  const bool mixed = terms.mixed && a.has_mixed;

  std::vector<SparseOperator::Triplet> entries;
  entries.reserve(g.size() * (mixed ? 9 : 5));

  for (int j = 1; j < M; ++j) {
    const double y = g.coord(j);
    for (int i = 1; i < M; ++i) {
      const double x = g.coord(i);
      // stencil[dj + 1][di + 1]
      std::array<std::array<double, 3>, 3> s{};
      double xdiag = 0.0, ydiag = 0.0;

      if (terms.x_flux) {
        const double e = rho(g.midpoint(i), y) * a.a11(g.midpoint(i), y) * inv_h2;
        const double w = rho(g.midpoint(i - 1), y) * a.a11(g.midpoint(i - 1), y) * inv_h2;
        xdiag = e + w;
        s[1][2] -= e;
        s[1][0] -= w;
      }
      if (terms.y_flux) {
        const double n = rho(x, g.midpoint(j)) * a.a22(x, g.midpoint(j)) * inv_h2;
        const double so = rho(x, g.midpoint(j - 1)) * a.a22(x, g.midpoint(j - 1)) * inv_h2;
        ydiag = n + so;
        s[2][1] -= n;
        s[0][1] -= so;
      }
      if (mixed) {
        auto p = [&](double px, double py) { return rho(px, py) * a.a12(px, py) * inv_4h2; };
        const double pe = p(g.coord(i + 1), y), pw = p(g.coord(i - 1), y);
        const double pn = p(x, g.coord(j + 1)), ps = p(x, g.coord(j - 1));
        s[2][2] -= pe + pn;
        s[0][2] += pe + ps;
        s[2][0] += pw + pn;
        s[0][0] -= pw + ps;
      }
      s[1][1] = xdiag + ydiag;
      if (terms.reaction != 0.0) s[1][1] += terms.reaction * rho(x, y) * c(x, y);

      const auto row = static_cast<Eigen::Index>(g.index(i, j));
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const double v = s[dj + 1][di + 1];
          if (v == 0.0 || !g.interior(i + di, j + dj)) continue;
          entries.emplace_back(row, static_cast<Eigen::Index>(g.index(i + di, j + dj)), v);
        }
      }
    }
  }
  return SparseOperator::from_triplets(g.size(), entries);
}

}  // namespace splitpar

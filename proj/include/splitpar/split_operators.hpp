#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "splitpar/assembly.hpp"
#include "splitpar/decomposition.hpp"
#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/sparse_operator.hpp"
#include "splitpar/tensor.hpp"

namespace splitpar {

enum class SplitKind { unsplit, adi, dd };

/// A_h together with parts A_1h..A_mh whose sum is A_h.
struct SplitOperators {
  SparseOperator full;
  std::vector<SparseOperator> parts;
  SplitKind kind = SplitKind::unsplit;
  /// Uncoupled blocks of each part; filled for dd splits.
  ComponentMap components;

  std::size_t size() const noexcept { return full.size(); }
  std::size_t stages() const noexcept { return parts.size(); }
};

/// Wraps user-supplied parts (surrogate systems, tests). The full operator is
/// their sum.
inline SplitOperators make_split(std::vector<SparseOperator> parts, SplitKind kind = SplitKind::unsplit) {
  if (parts.empty()) throw InvalidInput("a splitting needs at least one part");
  SplitOperators s;
  s.full = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) s.full = s.full + parts[k];
  s.parts = std::move(parts);
  s.kind = kind;
  return s;
}

inline SplitOperators build_unsplit(const Grid& g, const DiffusionTensor& a, const ScalarField& c) {
  SplitOperators s;
  s.full = assemble_operator(g, a, c);
  s.parts = {s.full};
  s.kind = SplitKind::unsplit;
  return s;
}

/// A_1h = -(a11 u_x)_x + c/2 u, A_2h = -(a22 u_y)_y + c/2 u.
inline SplitOperators build_adi_split(const Grid& g, const DiffusionTensor& a, const ScalarField& c) {
  if (a.has_mixed)
    throw UnsupportedSplitting("coefficient '" + a.name +
                               "' has mixed derivative terms; alternating direction splittings cannot be applied");
  SplitOperators s;
  s.kind = SplitKind::adi;
  s.parts.push_back(assemble_operator(g, a, c, std::nullopt, AssemblyTerms::x_direction()));
  s.parts.push_back(assemble_operator(g, a, c, std::nullopt, AssemblyTerms::y_direction()));
  s.full = assemble_operator(g, a, c);
  return s;
}

/// A_kh = discretization of -div(rho_k a grad u) + rho_k c u.
inline SplitOperators build_dd_split(const Grid& g, const DiffusionTensor& a, const ScalarField& c,
                                     const PartitionOfUnity& pou) {
  SplitOperators s;
  s.kind = SplitKind::dd;
  s.full = assemble_operator(g, a, c);
  for (std::size_t k = 0; k < pou.size(); ++k) {
    s.parts.push_back(assemble_operator(g, a, c, pou.weight(k)));
    s.components.push_back(component_blocks(pou.decomposition(), g, k, s.parts.back()));
  }
  return s;
}

/// B_h v for B_h = theta^2 tau sum_{i<j} A_i A_j + ... + theta^m tau^{m-1} A_1...A_m,
/// i.e. tau B_h v = prod_k (I + theta tau A_k) v - v - theta tau A_h v.
///
/// The product is applied right to left while tracking only its deviation
/// from v: with d_{m+1} = 0 and d_k = d_{k+1} + theta tau A_k (v + d_{k+1}),
/// tau B_h v = theta tau sum_k A_k d_{k+1}. Costs 2m matvecs and no product
/// matrix is formed.
inline Vector bh_apply(const SplitOperators& split, double theta, double tau, const Vector& v) {
  if (!(tau > 0.0)) throw InvalidInput("bh_apply needs tau > 0");
  if (static_cast<std::size_t>(v.size()) != split.size()) throw InvalidInput("bh_apply: vector size mismatch");
  const double s = theta * tau;
  Vector d = Vector::Zero(v.size());
  Vector out = Vector::Zero(v.size());
  for (std::size_t k = split.stages(); k-- > 0;) {
    const auto& A = split.parts[k];
    const Vector Ad = A.apply(d);
    out += Ad;
    if (k > 0) d += s * (A.apply(v) + Ad);
  }
  return theta * out;
}

}  // namespace splitpar

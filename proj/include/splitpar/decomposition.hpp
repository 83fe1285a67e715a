#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "splitpar/errors.hpp"
#include "splitpar/grid.hpp"
#include "splitpar/sparse_operator.hpp"
#include "splitpar/tensor.hpp"

namespace splitpar {

/// Closed x-interval [a, b]; the component it describes is [a, b] x [0, 1].
struct Strip {
  double a = 0.0;
  double b = 0.0;

  double width() const noexcept { return b - a; }
  bool contains(double x) const noexcept { return x >= a && x <= b; }
  bool operator==(const Strip&) const = default;
};

/// Overlapping covering of the unit square by m subdomains, each the union of
/// pairwise disjoint vertical strips.
class Decomposition {
 public:
  Decomposition(std::vector<std::vector<Strip>> subdomains, double overlap)
      : subdomains_(std::move(subdomains)), overlap_(overlap) {
    validate();
  }

  std::size_t subdomain_count() const noexcept { return subdomains_.size(); }
  std::size_t component_count(std::size_t k) const { return subdomain(k).size(); }
  const std::vector<Strip>& subdomain(std::size_t k) const {
    if (k >= subdomains_.size())
      throw InvalidInput("subdomain index " + std::to_string(k) + " out of range");
    return subdomains_[k];
  }
  const Strip& strip(std::size_t k, std::size_t l) const {
    const auto& s = subdomain(k);
    if (l >= s.size())
      throw InvalidInput("component index " + std::to_string(l) + " out of range for subdomain " +
                         std::to_string(k));
    return s[l];
  }
  double overlap() const noexcept { return overlap_; }

 private:
  void validate() const {
    if (subdomains_.empty()) throw InvalidInput("decomposition needs at least one subdomain");
    std::vector<Strip> all;
    for (std::size_t k = 0; k < subdomains_.size(); ++k) {
      const auto& s = subdomains_[k];
      if (s.empty()) throw InvalidInput("subdomain " + std::to_string(k) + " has no components");
      for (std::size_t l = 0; l < s.size(); ++l) {
        if (!(s[l].a >= 0.0 && s[l].b <= 1.0 && s[l].a < s[l].b))
          throw InvalidInput("strip " + std::to_string(l) + " of subdomain " + std::to_string(k) +
                             " is not a proper subinterval of [0,1]");
        // Open components must be disjoint; closures may touch.
        if (l > 0 && s[l - 1].b > s[l].a)
          throw InvalidInput("components " + std::to_string(l - 1) + " and " + std::to_string(l) +
                             " of subdomain " + std::to_string(k) + " overlap or are unsorted");
      }
      all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end(), [](const Strip& p, const Strip& q) { return p.a < q.a; });
    double reach = 0.0;
    for (const auto& s : all) {
      if (s.a > reach) throw InvalidInput("strips leave a gap at x = " + std::to_string(reach));
      reach = std::max(reach, s.b);
    }
    if (reach < 1.0) throw InvalidInput("strips do not cover [0,1]");
  }

  std::vector<std::vector<Strip>> subdomains_;
  double overlap_;
};

/// Two subdomains of q strips each. The unit interval is cut at multiples of
/// w = 1/(2q); cuts alternate between the subdomains and every interior strip
/// end moves outward by xi/2, so neighbouring strips of different subdomains
/// share a band of width xi. For q = 4 this yields
///   I1 = (0, 1/8 + xi/2) u (1/4 - xi/2, 3/8 + xi/2) u ...,
///   I2 = (1/8 - xi/2, 1/4 + xi/2) u ... u (7/8 - xi/2, 1).
/// Same-subdomain strips stay disjoint iff xi <= w; at xi == w they touch.
inline Decomposition make_strip_decomposition(int q, double xi) {
  if (q < 1) throw InvalidInput("need q >= 1 components per subdomain, got " + std::to_string(q));
  const double w = 1.0 / (2.0 * q);
  if (!(xi > 0.0)) throw InvalidInput("overlap size xi must be positive");
  if (xi > w)
    throw InvalidInput("overlap size xi = " + std::to_string(xi) + " exceeds 1/(2q) = " + std::to_string(w) +
                       ": strips of one subdomain would no longer be disjoint");
  std::vector<std::vector<Strip>> sub(2);
  const int cuts = 2 * q;
  for (int s = 0; s < cuts; ++s) {
    const double lo = s == 0 ? 0.0 : static_cast<double>(s) / cuts - xi / 2;
    const double hi = s == cuts - 1 ? 1.0 : static_cast<double>(s + 1) / cuts + xi / 2;
    sub[static_cast<std::size_t>(s % 2)].push_back({lo, hi});
  }
  return Decomposition(std::move(sub), xi);
}

/// Single subdomain covering everything; splitting with it is no splitting.
inline Decomposition make_trivial_decomposition() { return Decomposition({{Strip{0.0, 1.0}}}, 0.0); }

/// rho_k = sum_i w_k^i / sum_l sum_i w_l^i with the sine bumps
/// w_k^i(x) = sin(pi (x - a_k^i) / (b_k^i - a_k^i)) on strip i of subdomain k.
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(Decomposition d) : d_(std::move(d)) {}

  const Decomposition& decomposition() const noexcept { return d_; }
  std::size_t size() const noexcept { return d_.subdomain_count(); }

  /// Sine bump of one strip; exactly zero at both ends and outside.
  static double bump(const Strip& s, double x) {
    if (!s.contains(x)) return 0.0;
    const double t = (x - s.a) / s.width();
    return std::sin(std::numbers::pi * std::min(t, 1.0 - t));
  }

  double subdomain_weight(std::size_t k, double x) const {
    double r = 0.0;
    for (const auto& s : d_.subdomain(k)) r += bump(s, x);
    return r;
  }

  double operator()(std::size_t k, double x, double /*y*/ = 0.0) const {
    double total = 0.0;
    for (std::size_t l = 0; l < size(); ++l) total += subdomain_weight(l, x);
    if (total > 0.0) return subdomain_weight(k, x) / total;
    // Every covering bump vanishes: only at the ends of [0,1] or at a shared
    // strip end. Split evenly among the subdomains whose closures contain x.
    std::size_t owners = 0;
    bool mine = false;
    for (std::size_t l = 0; l < size(); ++l) {
      const auto& strips = d_.subdomain(l);
      const bool covers = std::any_of(strips.begin(), strips.end(), [x](const Strip& s) { return s.contains(x); });
      owners += covers ? 1 : 0;
      if (l == k) mine = covers;
    }
    assert(owners > 0 && "point not covered by the decomposition");
    return owners == 0 || !mine ? 0.0 : 1.0 / static_cast<double>(owners);
  }

  ScalarField weight(std::size_t k) const {
    if (k >= size()) throw InvalidInput("partition index out of range");
    return [self = *this, k](double x, double y) { return self(k, x, y); };
  }

 private:
  Decomposition d_;
};

inline PartitionOfUnity make_partition_of_unity(const Decomposition& d) { return PartitionOfUnity(d); }

/// Interior nodes whose x lies in the closed strip (k, l) widened by `reach`
/// on each side (open at the widened ends). With reach = h/2, the default,
/// this is the row set where a five-point operator weighted by rho_k can be
/// nonzero; nine-point (mixed derivative) operators need reach = h.
inline std::vector<std::size_t> component_indices(const Decomposition& d, const Grid& g, std::size_t k,
                                                  std::size_t l, double reach = -1.0) {
  const Strip& s = d.strip(k, l);
  if (reach < 0.0) reach = 0.5 * g.h();
  auto inside = [&](double x) {
    if (reach == 0.0) return s.contains(x);
    return x > s.a - reach && x < s.b + reach;
  };
  std::vector<std::size_t> out;
  for (int j = 1; j < g.M(); ++j)
    for (int i = 1; i < g.M(); ++i)
      if (inside(g.coord(i))) out.push_back(g.index(i, j));
  std::sort(out.begin(), out.end());
  return out;
}

/// One uncoupled subsystem of a stage solve: the global rows it owns and the
/// decomposition strips it came from. Touching strips (xi == 1/(2q)) share
/// nodes and are merged into one block.
struct ComponentBlock {
  std::vector<std::size_t> indices;
  std::vector<std::size_t> strips;
};

/// Per subdomain k, the uncoupled blocks of the weighted operator A_kh.
using ComponentMap = std::vector<std::vector<ComponentBlock>>;

/// Blocks are read off the coupling graph of `part`, so they are exact for any
/// stencil; strips are attached by x-proximity for reporting.
inline std::vector<ComponentBlock> component_blocks(const Decomposition& d, const Grid& g, std::size_t k,
                                                    const SparseOperator& part) {
  std::vector<ComponentBlock> out;
  const auto& strips = d.subdomain(k);
  for (auto& idx : coupled_blocks(part)) {
    ComponentBlock b;
    double lo = 1.0, hi = 0.0;
    for (auto n : idx) {
      const double x = g.coord(g.node(n).first);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    for (std::size_t l = 0; l < strips.size(); ++l)
      if (strips[l].a < hi + g.h() && strips[l].b > lo - g.h()) b.strips.push_back(l);
    b.indices = std::move(idx);
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace splitpar

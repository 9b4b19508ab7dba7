#pragma once

#include "vexfd/varexp.hpp"

namespace vexfd {

// Discrete SBV function: nodal values plus a set of cracked grid edges.
// A cracked edge carries the jump u(b) - u(a) and no gradient; an uncracked
// edge carries the difference quotient. A cracked edge with zero jump is
// treated as uncracked everywhere (it is not part of the jump set).
// The crack set is shared by all components.
class SbvGridFunction {
 public:
  SbvGridFunction() = default;
  explicit SbvGridFunction(GridFunction base)
      : base_(std::move(base)), cracks_(base_.grid().edge_count(), 0) {}
  SbvGridFunction(GridFunction base, std::vector<char> cracks)
      : base_(std::move(base)), cracks_(std::move(cracks)) {
    if (static_cast<int>(cracks_.size()) != base_.grid().edge_count())
      throw StructuralError("crack flags do not match edge count");
  }

  const Grid& grid() const { return base_.grid(); }
  int components() const { return base_.components(); }
  const GridFunction& base() const { return base_; }
  GridFunction& base() { return base_; }
  double operator()(int n, int i) const { return base_(n, i); }
  double& operator()(int n, int i) { return base_(n, i); }
  Vec value(int n) const { return base_.value(n); }
  void set(int n, const Vec& v) { base_.set(n, v); }

  const std::vector<char>& crack_flags() const { return cracks_; }
  bool flagged(int e) const { return cracks_[e] != 0; }
  void set_crack(int e, bool on) { cracks_[e] = on ? 1 : 0; }

  double diff(int e, int i) const {
    const auto ed = grid().edge(e);
    return base_(ed.b, i) - base_(ed.a, i);
  }
  Vec jump(int e) const {
    Vec j(components());
    for (int i = 0; i < components(); ++i) j[i] = diff(e, i);
    return j;
  }
  bool has_jump(int e) const {
    if (!cracks_[e]) return false;
    for (int i = 0; i < components(); ++i)
      if (diff(e, i) != 0.0) return true;
    return false;
  }
  // Difference quotient D_e u, or zero on a jumping edge.
  double edge_gradient(int e, int i) const { return has_jump(e) ? 0.0 : diff(e, i) / grid().h(); }

  // Discrete gradient of a cell: column k comes from the cell's axis-k edge.
  Gradient cell_gradient(int c) const {
    const Grid& g = grid();
    Gradient xi(components(), g.dim());
    const auto edges = g.cell_edges(c);
    for (int k = 0; k < g.dim(); ++k) {
      const int e = edges[k];
      if (has_jump(e)) continue;
      for (int i = 0; i < components(); ++i) xi(i, k) = diff(e, i) / g.h();
    }
    return xi;
  }
  // True when every gradient edge of the cell jumps, so the cell carries no bulk.
  bool cell_fully_cracked(int c) const {
    const auto edges = grid().cell_edges(c);
    for (int k = 0; k < grid().dim(); ++k)
      if (!has_jump(edges[k])) return false;
    return true;
  }

  int jump_count(const Region& region = Region::whole()) const {
    int count = 0;
    for (int e = 0; e < grid().edge_count(); ++e)
      if (has_jump(e) && region.contains(grid().edge_midpoint(e))) ++count;
    return count;
  }
  // H^{d-1}(J_u cap region) with the lattice facet measure.
  double jump_measure(const Region& region = Region::whole()) const {
    return jump_count(region) * grid().facet_measure();
  }
  // Clears flags on edges whose jump vanished.
  void drop_null_cracks() {
    for (int e = 0; e < grid().edge_count(); ++e)
      if (cracks_[e] && !has_jump(e)) cracks_[e] = 0;
  }

 private:
  GridFunction base_;
  std::vector<char> cracks_;
};

}  // namespace vexfd

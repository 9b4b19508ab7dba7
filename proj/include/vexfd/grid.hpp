#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <vector>

#include "vexfd/core.hpp"

namespace vexfd {

// Uniform tensor grid in one or two dimensions. Nodes sit at origin + (i, j) * h.
// Edges join axis neighbours; in 2D each cell (i, j) owns its bottom x-edge and
// its left y-edge, which carry the cell's discrete gradient.
class Grid {
 public:
  struct Edge {
    int a;     // lower node
    int b;     // upper node (a + unit step along axis)
    int axis;  // 0 or 1
  };

  Grid() = default;

  Grid(int dim, std::array<int, 2> cells, double h, Point origin = {0.0, 0.0})
      : dim_(dim), cells_(cells), h_(h), origin_(origin) {
    if (dim != 1 && dim != 2) throw StructuralError("grid dimension must be 1 or 2");
    if (!(h > 0.0) || !std::isfinite(h)) throw StructuralError("grid spacing must be positive");
    if (cells[0] < 2 || (dim == 2 && cells[1] < 2))
      throw StructuralError("grid needs at least 2 cells per axis");
    if (dim == 1) cells_[1] = 0;
  }

  static Grid line(int cells, double h, double x0 = 0.0) { return Grid(1, {cells, 0}, h, {x0, 0.0}); }
  static Grid square(int nx, int ny, double h, Point origin = {0.0, 0.0}) {
    return Grid(2, {nx, ny}, h, origin);
  }
  // n cells covering [lo, hi] (1D) or [lo, hi]^2 (2D).
  static Grid covering(int dim, int n, double lo, double hi) {
    const double h = (hi - lo) / n;
    return dim == 1 ? line(n, h, lo) : square(n, n, h, {lo, lo});
  }

  int dim() const { return dim_; }
  double h() const { return h_; }
  Point origin() const { return origin_; }
  int cells(int axis) const { return cells_[axis]; }
  int nodes_x() const { return cells_[0] + 1; }
  int nodes_y() const { return dim_ == 2 ? cells_[1] + 1 : 1; }
  int node_count() const { return nodes_x() * nodes_y(); }
  int node_index(int i, int j = 0) const { return j * nodes_x() + i; }
  int node_i(int n) const { return n % nodes_x(); }
  int node_j(int n) const { return n / nodes_x(); }
  Point node_point(int n) const {
    return {origin_[0] + node_i(n) * h_, dim_ == 2 ? origin_[1] + node_j(n) * h_ : 0.0};
  }

  int x_edge_count() const { return cells_[0] * nodes_y(); }
  int edge_count() const { return x_edge_count() + (dim_ == 2 ? nodes_x() * cells_[1] : 0); }
  int x_edge(int i, int j) const { return j * cells_[0] + i; }
  int y_edge(int i, int j) const { return x_edge_count() + j * nodes_x() + i; }
  Edge edge(int e) const {
    if (e < x_edge_count()) {
      const int j = e / cells_[0], i = e % cells_[0];
      return {node_index(i, j), node_index(i + 1, j), 0};
    }
    const int r = e - x_edge_count();
    const int j = r / nodes_x(), i = r % nodes_x();
    return {node_index(i, j), node_index(i, j + 1), 1};
  }
  Point edge_midpoint(int e) const {
    const Edge ed = edge(e);
    return 0.5 * (node_point(ed.a) + node_point(ed.b));
  }
  // Unit normal of an edge's dual facet: the axis direction.
  Point edge_normal(int e) const { return edge(e).axis == 0 ? Point{1.0, 0.0} : Point{0.0, 1.0}; }

  int cell_count() const { return dim_ == 1 ? cells_[0] : cells_[0] * cells_[1]; }
  int cell_index(int i, int j = 0) const { return j * cells_[0] + i; }
  // Edges carrying the gradient of a cell; second entry is -1 in 1D.
  std::array<int, 2> cell_edges(int c) const {
    if (dim_ == 1) return {c, -1};
    const int i = c % cells_[0], j = c / cells_[0];
    return {x_edge(i, j), y_edge(i, j)};
  }
  // Lower-left node of a cell.
  int cell_anchor(int c) const {
    if (dim_ == 1) return c;
    return node_index(c % cells_[0], c / cells_[0]);
  }
  Point cell_center(int c) const {
    if (dim_ == 1) return {origin_[0] + (c + 0.5) * h_, 0.0};
    const int i = c % cells_[0], j = c / cells_[0];
    return {origin_[0] + (i + 0.5) * h_, origin_[1] + (j + 0.5) * h_};
  }
  double cell_volume() const { return dim_ == 1 ? h_ : h_ * h_; }
  double facet_measure() const { return dim_ == 1 ? 1.0 : h_; }

  // Quadrature weight of a node: the measure of its dual cell inside the domain.
  double node_weight(int n) const {
    double w = cell_volume();
    const int i = node_i(n);
    if (i == 0 || i == cells_[0]) w *= 0.5;
    if (dim_ == 2) {
      const int j = node_j(n);
      if (j == 0 || j == cells_[1]) w *= 0.5;
    }
    return w;
  }
  double domain_measure() const { return cell_count() * cell_volume(); }

  // Cells that use a node in their gradient stencil.
  std::vector<int> cells_touching(int n) const {
    std::vector<int> out;
    const int i = node_i(n), j = node_j(n);
    if (dim_ == 1) {
      if (i < cells_[0]) out.push_back(i);
      if (i > 0) out.push_back(i - 1);
      return out;
    }
    if (i < cells_[0] && j < cells_[1]) out.push_back(cell_index(i, j));
    if (i > 0 && j < cells_[1]) out.push_back(cell_index(i - 1, j));
    if (j > 0 && i < cells_[0]) out.push_back(cell_index(i, j - 1));
    return out;
  }
  // Cells whose gradient uses an edge.
  std::vector<int> cells_of_edge(int e) const {
    if (dim_ == 1) return {e};
    const Edge ed = edge(e);
    const int i = node_i(ed.a), j = node_j(ed.a);
    if (ed.axis == 0) {
      if (j < cells_[1]) return {cell_index(i, j)};
    } else {
      if (i < cells_[0]) return {cell_index(i, j)};
    }
    return {};
  }
  std::vector<int> edges_at(int n) const {
    std::vector<int> out;
    const int i = node_i(n), j = node_j(n);
    if (i < cells_[0]) out.push_back(x_edge(i, j));
    if (i > 0) out.push_back(x_edge(i - 1, j));
    if (dim_ == 2) {
      if (j < cells_[1]) out.push_back(y_edge(i, j));
      if (j > 0) out.push_back(y_edge(i, j - 1));
    }
    return out;
  }
  std::vector<int> neighbours(int n) const {
    std::vector<int> out;
    for (int e : edges_at(n)) {
      const Edge ed = edge(e);
      out.push_back(ed.a == n ? ed.b : ed.a);
    }
    return out;
  }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && cells_ == o.cells_ && h_ == o.h_ && origin_ == o.origin_;
  }

 private:
  int dim_ = 1;
  std::array<int, 2> cells_{2, 0};
  double h_ = 0.5;
  Point origin_{0.0, 0.0};
};

// A geometric subset of R^d. Grid objects belong to a region when their
// representative point (node, edge midpoint, cell centre) lies inside it, so
// disjoint regions never share an element.
class Region {
 public:
  using Predicate = std::function<bool(const Point&)>;

  Region() : pred_([](const Point&) { return true; }) {}
  explicit Region(Predicate p) : pred_(std::move(p)) {}

  static Region whole() { return Region(); }
  static Region empty() { return Region([](const Point&) { return false; }); }
  // Open ball {x : |x - c| < r}.
  static Region ball(Point c, double r) {
    return Region([c, r](const Point& x) { return distance(x, c) < r; });
  }
  // Half-open box [lo, hi).
  static Region box(Point lo, Point hi) {
    return Region([lo, hi](const Point& x) {
      return x[0] >= lo[0] && x[0] < hi[0] && x[1] >= lo[1] && x[1] < hi[1];
    });
  }
  // Open interval (lo, hi) along the first axis.
  static Region interval(double lo, double hi) {
    return Region([lo, hi](const Point& x) { return x[0] > lo && x[0] < hi; });
  }

  bool contains(const Point& x) const { return pred_(x); }

  friend Region operator|(const Region& a, const Region& b) {
    return Region([a, b](const Point& x) { return a.contains(x) || b.contains(x); });
  }
  friend Region operator&(const Region& a, const Region& b) {
    return Region([a, b](const Point& x) { return a.contains(x) && b.contains(x); });
  }
  friend Region operator-(const Region& a, const Region& b) {
    return Region([a, b](const Point& x) { return a.contains(x) && !b.contains(x); });
  }

  std::vector<int> nodes(const Grid& g) const {
    std::vector<int> out;
    for (int n = 0; n < g.node_count(); ++n)
      if (contains(g.node_point(n))) out.push_back(n);
    return out;
  }
  std::vector<char> node_mask(const Grid& g) const {
    std::vector<char> out(g.node_count(), 0);
    for (int n = 0; n < g.node_count(); ++n) out[n] = contains(g.node_point(n)) ? 1 : 0;
    return out;
  }
  std::vector<int> edges(const Grid& g) const {
    std::vector<int> out;
    for (int e = 0; e < g.edge_count(); ++e)
      if (contains(g.edge_midpoint(e))) out.push_back(e);
    return out;
  }
  std::vector<int> cells(const Grid& g) const {
    std::vector<int> out;
    for (int c = 0; c < g.cell_count(); ++c)
      if (contains(g.cell_center(c))) out.push_back(c);
    return out;
  }
  // Quadrature measure of the region: sum of node weights of contained nodes.
  double measure(const Grid& g) const {
    double s = 0.0;
    for (int n = 0; n < g.node_count(); ++n)
      if (contains(g.node_point(n))) s += g.node_weight(n);
    return s;
  }

 private:
  Predicate pred_;
};

}  // namespace vexfd

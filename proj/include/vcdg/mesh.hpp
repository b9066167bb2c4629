#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace vcdg {

enum class BcMode { periodic, natural };

// One interior face of the skeleton. For the periodic closure face the
// position is the left domain endpoint and `right` wraps to element 0.
struct Face {
  double x = 0.0;
  int left = -1;
  int right = -1;
  double h_left = 0.0;   // width of the element on the minus side
  double h_right = 0.0;  // width of the element on the plus side
  double h_mean = 0.0;   // arithmetic mean of the two widths
};

// 1D partition of [a,b] with face skeleton and width metadata.
// Immutable after construction; safe to share across threads.
class Mesh1D {
public:
  Mesh1D(std::vector<double> nodes, BcMode bc);

  int n_elements() const { return static_cast<int>(nodes_.size()) - 1; }
  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double length() const { return b() - a(); }
  BcMode bc() const { return bc_; }

  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& nodes() const { return nodes_; }
  double width(int elem) const { return nodes_[elem + 1] - nodes_[elem]; }
  double max_width() const { return hmax_; }
  double min_width() const { return hmin_; }
  // quasi-uniformity ratio max h / min h
  double width_ratio() const { return hmax_ / hmin_; }

  // Skeleton: interior faces x_1..x_{N-1}; periodic mode appends the
  // closure face at x_0 (left endpoint identified with the right one).
  const std::vector<Face>& faces() const { return faces_; }
  int n_faces() const { return static_cast<int>(faces_.size()); }

  // Element containing x; ties at interior nodes resolve to the right
  // element unless `prefer_left`. x must lie in [a,b].
  int locate(double x, bool prefer_left = false) const;

  // Left/right neighbour with periodic wrap; -1 at a natural boundary.
  int neighbour_left(int elem) const;
  int neighbour_right(int elem) const;

  // FNV-1a over node bytes and bc mode; used by serialization sidecars.
  std::uint64_t content_hash() const;

private:
  std::vector<double> nodes_;
  std::vector<Face> faces_;
  BcMode bc_;
  double hmin_ = 0.0, hmax_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

enum class Grading { uniform, random_perturbed };

// Uniform partition of [a,b] into n elements.
MeshPtr build_mesh(double a, double b, int n, BcMode bc);

// Partition with nodes perturbed by up to strength*h (strength < 1/2 so
// nodes cannot cross); deterministic in the seed.
MeshPtr build_mesh_perturbed(double a, double b, int n, BcMode bc,
                             std::uint64_t seed, double strength);

} // namespace vcdg

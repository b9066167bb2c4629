#include "vcdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace vcdg {

Mesh1D::Mesh1D(std::vector<double> nodes, BcMode bc)
    : nodes_(std::move(nodes)), bc_(bc) {
  if (nodes_.size() < 3)
    throw std::invalid_argument("Mesh1D: need at least 2 elements");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw std::invalid_argument("Mesh1D: nodes must be strictly increasing");

  const int n = n_elements();
  hmin_ = hmax_ = width(0);
  for (int i = 0; i < n; ++i) {
    hmin_ = std::min(hmin_, width(i));
    hmax_ = std::max(hmax_, width(i));
  }

  faces_.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i < n; ++i) {
    Face f;
    f.x = nodes_[static_cast<std::size_t>(i)];
    f.left = i - 1;
    f.right = i;
    f.h_left = width(i - 1);
    f.h_right = width(i);
    f.h_mean = 0.5 * (f.h_left + f.h_right);
    faces_.push_back(f);
  }
  if (bc_ == BcMode::periodic) {
    Face f;
    f.x = nodes_.front();
    f.left = n - 1;
    f.right = 0;
    f.h_left = width(n - 1);
    f.h_right = width(0);
    f.h_mean = 0.5 * (f.h_left + f.h_right);
    faces_.push_back(f);
  }
}

int Mesh1D::locate(double x, bool prefer_left) const {
  if (x < a() || x > b())
    throw std::out_of_range("Mesh1D::locate: x outside domain");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  int elem = static_cast<int>(it - nodes_.begin()) - 1;
  elem = std::min(std::max(elem, 0), n_elements() - 1);
  if (prefer_left && elem > 0 && x == nodes_[static_cast<std::size_t>(elem)])
    --elem;
  return elem;
}

int Mesh1D::neighbour_left(int elem) const {
  if (elem > 0) return elem - 1;
  return bc_ == BcMode::periodic ? n_elements() - 1 : -1;
}

int Mesh1D::neighbour_right(int elem) const {
  if (elem < n_elements() - 1) return elem + 1;
  return bc_ == BcMode::periodic ? 0 : -1;
}

std::uint64_t Mesh1D::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  for (double x : nodes_) mix(&x, sizeof(x));
  const int mode = bc_ == BcMode::periodic ? 0 : 1;
  mix(&mode, sizeof(mode));
  return h;
}

MeshPtr build_mesh(double a, double b, int n, BcMode bc) {
  if (n < 2) throw std::invalid_argument("build_mesh: n_elements must be >= 2");
  if (!(a < b)) throw std::invalid_argument("build_mesh: empty domain");
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i)
    nodes[static_cast<std::size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  nodes.front() = a;
  nodes.back() = b;
  return std::make_shared<Mesh1D>(std::move(nodes), bc);
}

MeshPtr build_mesh_perturbed(double a, double b, int n, BcMode bc,
                             std::uint64_t seed, double strength) {
  if (n < 2) throw std::invalid_argument("build_mesh: n_elements must be >= 2");
  if (!(strength >= 0.0 && strength < 0.5))
    throw std::invalid_argument("build_mesh: strength must lie in [0, 1/2)");
  const double h = (b - a) / n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-strength * h, strength * h);
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  nodes.front() = a;
  nodes.back() = b;
  for (int i = 1; i < n; ++i) nodes[static_cast<std::size_t>(i)] = a + i * h + shift(rng);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw std::invalid_argument("build_mesh: node collision after perturbation");
  return std::make_shared<Mesh1D>(std::move(nodes), bc);
}

} // namespace vcdg

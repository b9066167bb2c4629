#include <doctest.h>

#include "vcdg/mesh.hpp"

#include <random>

using namespace vcdg;

TEST_CASE("uniform periodic partition of the unit interval") {
  MeshPtr m = build_mesh(0.0, 1.0, 4, BcMode::periodic);
  REQUIRE(m->n_elements() == 4);
  const double expect[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i <= 4; ++i) CHECK(m->node(i) == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(m->n_faces() == 4); // three interior plus the closure face
  for (const Face& f : m->faces()) CHECK(f.h_mean == doctest::Approx(0.25));
}

TEST_CASE("uniform natural partition keeps only interior faces") {
  MeshPtr m = build_mesh(-1.0, 1.0, 16, BcMode::natural);
  CHECK(m->n_faces() == 15);
  for (int i = 0; i < 16; ++i) CHECK(m->width(i) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(m->width_ratio() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perturbed mesh face width is the mean of the two neighbours") {
  MeshPtr m = build_mesh_perturbed(0.0, 1.0, 2, BcMode::periodic, 7, 0.2);
  REQUIRE(m->n_elements() == 2);
  const double h0 = m->width(0), h1 = m->width(1);
  // recompute by hand from the perturbed node
  const Face& interior = m->faces()[0];
  CHECK(interior.h_mean == doctest::Approx(0.5 * (h0 + h1)).epsilon(1e-15));
  CHECK(interior.h_left == doctest::Approx(h0));
  CHECK(interior.h_right == doctest::Approx(h1));
}

TEST_CASE("invalid construction is rejected") {
  CHECK_THROWS(build_mesh(0.0, 1.0, 1, BcMode::periodic));
  CHECK_THROWS(build_mesh(1.0, 0.0, 4, BcMode::periodic));
  CHECK_THROWS(build_mesh_perturbed(0.0, 1.0, 8, BcMode::periodic, 1, 0.5));
  CHECK_THROWS(Mesh1D({0.0, 0.5, 0.5, 1.0}, BcMode::natural));
}

TEST_CASE("graded mesh face metadata") {
  // widths 1/2, 1/4, 1/4
  Mesh1D m({0.0, 0.5, 0.75, 1.0}, BcMode::natural);
  REQUIRE(m.n_faces() == 2);
  CHECK(m.faces()[0].x == doctest::Approx(0.5));
  CHECK(m.faces()[0].h_mean == doctest::Approx(0.375)); // mean of 1/2 and 1/4
  CHECK(m.faces()[1].h_mean == doctest::Approx(0.25));
}

TEST_CASE("width sum and face-mean invariants on random meshes") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const bool periodic = rng() % 2 == 0;
    MeshPtr m = build_mesh_perturbed(-2.0, 3.0, n,
                                     periodic ? BcMode::periodic : BcMode::natural,
                                     rng(), 0.35);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += m->width(i);
    CHECK(sum == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(m->n_faces() == (periodic ? n : n - 1));
    for (const Face& f : m->faces()) {
      CHECK(f.h_left == doctest::Approx(m->width(f.left)).epsilon(1e-15));
      CHECK(f.h_right == doctest::Approx(m->width(f.right)).epsilon(1e-15));
      CHECK(f.h_mean == doctest::Approx(0.5 * (f.h_left + f.h_right)).epsilon(1e-15));
    }
  }
}

TEST_CASE("periodic closure face wraps the last element to the first") {
  MeshPtr m = build_mesh(0.0, 1.0, 5, BcMode::periodic);
  const Face& wrap = m->faces().back();
  CHECK(wrap.left == 4);
  CHECK(wrap.right == 0);
  CHECK(wrap.x == doctest::Approx(0.0));
  CHECK(m->neighbour_left(0) == 4);
  CHECK(m->neighbour_right(4) == 0);
  MeshPtr nat = build_mesh(0.0, 1.0, 5, BcMode::natural);
  CHECK(nat->neighbour_left(0) == -1);
  CHECK(nat->neighbour_right(4) == -1);
}

TEST_CASE("locate and content hash") {
  MeshPtr m = build_mesh(0.0, 1.0, 4, BcMode::natural);
  CHECK(m->locate(0.1) == 0);
  CHECK(m->locate(0.25) == 1);
  CHECK(m->locate(0.25, true) == 0);
  CHECK_THROWS(m->locate(1.5));
  MeshPtr m2 = build_mesh(0.0, 1.0, 4, BcMode::natural);
  CHECK(m->content_hash() == m2->content_hash());
  MeshPtr m3 = build_mesh(0.0, 1.0, 4, BcMode::periodic);
  CHECK(m->content_hash() != m3->content_hash());
}

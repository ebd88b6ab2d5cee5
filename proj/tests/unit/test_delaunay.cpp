#include <algorithm>
#include <random>
#include <set>

#include <doctest.h>

#include "ifvc/delaunay.hpp"
#include "ifvc/errors.hpp"
#include "test_support.hpp"

using namespace ifvc;

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
}

// Monotone-chain hull area, independent of the triangulator.
double hull_area(std::vector<Eigen::Vector2d> p) {
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  std::vector<Eigen::Vector2d> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  double a = 0;
  for (std::size_t i = 0; i < h.size(); ++i) a += h[i].x() * h[(i + 1) % h.size()].y() - h[(i + 1) % h.size()].x() * h[i].y();
  return a / 2;
}

// Brute force: no input point strictly inside any circumcircle (small tolerance).
bool empty_circumcircles(const std::vector<Eigen::Vector2d>& p, const Triangulation& t) {
  for (const auto& tri : t.triangles) {
    const auto &a = p[tri[0]], &b = p[tri[1]], &c = p[tri[2]];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Eigen::Vector2d da = a - p[i], db = b - p[i], dc = c - p[i];
      const double det = da.squaredNorm() * (db.x() * dc.y() - db.y() * dc.x()) -
                         db.squaredNorm() * (da.x() * dc.y() - da.y() * dc.x()) +
                         dc.squaredNorm() * (da.x() * db.y() - da.y() * db.x());
      if (det > 1e-9) return false;
    }
  }
  return true;
}

void check_triangulation(const std::vector<Eigen::Vector2d>& p, const Triangulation& t) {
  double area = 0;
  for (const auto& tri : t.triangles) {
    const double a2 = cross(p[tri[0]], p[tri[1]], p[tri[2]]);
    CHECK(a2 > 0);
    area += a2 / 2;
  }
  CHECK(area == doctest::Approx(hull_area(p)).epsilon(1e-9));
  CHECK(empty_circumcircles(p, t));
  std::set<int> used;
  for (const auto& tri : t.triangles) used.insert(tri.begin(), tri.end());
  CHECK(used.size() == p.size() - t.duplicates.size());
}

}  // namespace

TEST_CASE("single triangle and square") {
  std::vector<Eigen::Vector2d> tri{{0, 0}, {1, 0}, {0, 1}};
  const auto t = delaunay_triangulate(tri);
  REQUIRE(t.triangles.size() == 1);
  check_triangulation(tri, t);

  std::vector<Eigen::Vector2d> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto s = delaunay_triangulate(sq);
  CHECK(s.triangles.size() == 2);
  check_triangulation(sq, s);
}

TEST_CASE("random point sets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial * 7;
    std::vector<Eigen::Vector2d> p;
    for (int i = 0; i < n; ++i) p.emplace_back(testing::uniform(rng, -50, 50), testing::uniform(rng, -20, 80));
    check_triangulation(p, delaunay_triangulate(p));
  }
}

TEST_CASE("regular grid with cocircular quads") {
  std::vector<Eigen::Vector2d> p;
  for (int y = 0; y < 12; ++y) {
    for (int x = 0; x < 15; ++x) p.emplace_back(x, y);
  }
  const auto t = delaunay_triangulate(p);
  CHECK(t.triangles.size() == 2 * 14 * 11);
  check_triangulation(p, t);
}

TEST_CASE("duplicates and degenerate input") {
  std::vector<Eigen::Vector2d> p{{0, 0}, {1, 0}, {0, 0}, {0, 1}, {1, 0}};
  const auto t = delaunay_triangulate(p);
  CHECK(t.duplicates == std::vector<int>{2, 4});
  CHECK(t.triangles.size() == 1);

  std::vector<Eigen::Vector2d> line{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(delaunay_triangulate(line), DegenerateError);
  std::vector<Eigen::Vector2d> two{{0, 0}, {1, 1}, {0, 0}};
  CHECK_THROWS_AS(delaunay_triangulate(two), DegenerateError);
  std::vector<Eigen::Vector2d> bad{{0, 0}, {1, 0}, {0, std::nan("")}};
  CHECK_THROWS_AS(delaunay_triangulate(bad), RangeError);
}

TEST_CASE("collinear points on the hull are kept") {
  std::vector<Eigen::Vector2d> p{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {1.5, 2}};
  const auto t = delaunay_triangulate(p);
  CHECK(t.triangles.size() == 3);
  check_triangulation(p, t);
}

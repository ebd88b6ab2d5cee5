#include "ifvc/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "ifvc/errors.hpp"

namespace ifvc {

namespace {

using i128 = __int128;

constexpr int kGhost = -1;
constexpr double kGridExtent = 67108863.0;  // 2^26 - 1

struct IPoint {
  std::int64_t x;
  std::int64_t y;
};

i128 orient(const IPoint& a, const IPoint& b, const IPoint& c) {
  return static_cast<i128>(b.x - a.x) * (c.y - a.y) - static_cast<i128>(b.y - a.y) * (c.x - a.x);
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle abc.
i128 incircle(const IPoint& a, const IPoint& b, const IPoint& c, const IPoint& d) {
  const i128 adx = a.x - d.x, ady = a.y - d.y;
  const i128 bdx = b.x - d.x, bdy = b.y - d.y;
  const i128 cdx = c.x - d.x, cdy = c.y - d.y;
  const i128 alift = adx * adx + ady * ady;
  const i128 blift = bdx * bdx + bdy * bdy;
  const i128 clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
}

struct Tri {
  std::array<int, 3> v;    // v[2] == kGhost marks a ghost (outside) triangle
  std::array<int, 3> nbr;  // nbr[i] lies across edge (v[i], v[i+1])
  bool alive = true;
};

class Builder {
 public:
  explicit Builder(std::vector<IPoint> pts) : pts_(std::move(pts)) {}

  void start(int a, int b, int c) {
    if (orient(pts_[a], pts_[b], pts_[c]) < 0) std::swap(b, c);
    const int t = add({a, b, c});
    const int g0 = add({b, a, kGhost});
    const int g1 = add({c, b, kGhost});
    const int g2 = add({a, c, kGhost});
    tris_[t].nbr = {g0, g1, g2};
    tris_[g0].nbr = {t, g2, g1};
    tris_[g1].nbr = {t, g0, g2};
    tris_[g2].nbr = {t, g1, g0};
    last_ = t;
  }

  void insert(int p) {
    const int seed = locate(p);
    collect_cavity(seed, p);
    retriangulate(p);
  }

  std::vector<std::array<int, 3>> real_triangles() const {
    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris_) {
      if (t.alive && t.v[2] != kGhost) out.push_back(t.v);
    }
    return out;
  }

 private:
  struct BoundaryEdge {
    int u;
    int w;
    int outside;
  };

  int add(std::array<int, 3> v) {
    Tri t{v, {-1, -1, -1}, true};
    if (!free_.empty()) {
      const int idx = free_.back();
      free_.pop_back();
      tris_[idx] = t;
      return idx;
    }
    tris_.push_back(t);
    stamp_.push_back(0);
    return static_cast<int>(tris_.size()) - 1;
  }

  bool conflicts(int t, int p) const {
    const auto& v = tris_[t].v;
    const IPoint& q = pts_[p];
    if (v[2] != kGhost) return incircle(pts_[v[0]], pts_[v[1]], pts_[v[2]], q) > 0;
    // Outside region of a ghost: open half-plane left of (a, b) plus the open
    // segment ab itself.
    const IPoint& a = pts_[v[0]];
    const IPoint& b = pts_[v[1]];
    const i128 o = orient(a, b, q);
    if (o != 0) return o > 0;
    const i128 dot = static_cast<i128>(q.x - a.x) * (b.x - a.x) + static_cast<i128>(q.y - a.y) * (b.y - a.y);
    const i128 len = static_cast<i128>(b.x - a.x) * (b.x - a.x) + static_cast<i128>(b.y - a.y) * (b.y - a.y);
    return dot > 0 && dot < len;
  }

  int locate(int p) {
    int t = last_;
    if (!tris_[t].alive) t = any_alive();
    const IPoint& q = pts_[p];
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const auto& tri = tris_[t];
      if (tri.v[2] == kGhost) {
        if (conflicts(t, p)) return t;
        break;
      }
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        if (orient(pts_[tri.v[i]], pts_[tri.v[(i + 1) % 3]], q) < 0) {
          next = tri.nbr[i];
          break;
        }
      }
      if (next < 0) return t;  // inside or on the boundary of t
      t = next;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (tris_[i].alive && conflicts(static_cast<int>(i), p)) return static_cast<int>(i);
    }
    throw DegenerateError("delaunay: no triangle conflicts with an inserted point");
  }

  int any_alive() const {
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      if (tris_[i].alive) return static_cast<int>(i);
    }
    return 0;
  }

  void collect_cavity(int seed, int p) {
    ++epoch_;
    cavity_.clear();
    boundary_.clear();
    stack_.assign(1, seed);
    stamp_[seed] = epoch_;
    while (!stack_.empty()) {
      const int t = stack_.back();
      stack_.pop_back();
      cavity_.push_back(t);
      for (int i = 0; i < 3; ++i) {
        const int n = tris_[t].nbr[i];
        if (stamp_[n] == epoch_) continue;
        if (conflicts(n, p)) {
          stamp_[n] = epoch_;
          stack_.push_back(n);
        } else {
          boundary_.push_back({tris_[t].v[i], tris_[t].v[(i + 1) % 3], n});
        }
      }
    }
  }

  void retriangulate(int p) {
    for (const int t : cavity_) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    created_.clear();
    for (const auto& e : boundary_) {
      std::array<int, 3> v{e.u, e.w, p};
      int outer_edge = 0;  // index of the edge (u, w) after rotation
      if (e.u == kGhost) {
        v = {e.w, p, kGhost};
        outer_edge = 2;
      } else if (e.w == kGhost) {
        v = {p, e.u, kGhost};
        outer_edge = 1;
      }
      const int t = add(v);
      tris_[t].nbr[outer_edge] = e.outside;
      auto& on = tris_[e.outside];
      for (int i = 0; i < 3; ++i) {
        if (on.v[i] == e.w && on.v[(i + 1) % 3] == e.u) on.nbr[i] = t;
      }
      created_.push_back(t);
    }
    // Stitch the fan around p: the edge (x, y) of one new triangle pairs with
    // (y, x) of another.
    for (const int t : created_) {
      for (int i = 0; i < 3; ++i) {
        if (tris_[t].nbr[i] >= 0) continue;
        const int x = tris_[t].v[i];
        const int y = tris_[t].v[(i + 1) % 3];
        for (const int s : created_) {
          if (s == t) continue;
          for (int j = 0; j < 3; ++j) {
            if (tris_[s].v[j] == y && tris_[s].v[(j + 1) % 3] == x) {
              tris_[t].nbr[i] = s;
              tris_[s].nbr[j] = t;
            }
          }
        }
      }
    }
    last_ = created_.front();
    for (const int t : created_) {
      if (tris_[t].v[2] != kGhost) {
        last_ = t;
        break;
      }
    }
  }

  std::vector<IPoint> pts_;
  std::vector<Tri> tris_;
  std::vector<int> free_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  int last_ = 0;
  std::vector<int> cavity_;
  std::vector<int> stack_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<int> created_;
};

}  // namespace

Triangulation delaunay_triangulate(std::span<const Eigen::Vector2d> points) {
  Triangulation result;
  if (points.size() < 3) throw DegenerateError("delaunay: fewer than three points");
  for (const auto& p : points) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw RangeError("delaunay: non-finite point");
  }
  if (points.size() > 0x3FFFFFFF) throw DegenerateError("delaunay: too many points");

  double minx = points[0].x(), maxx = minx, miny = points[0].y(), maxy = miny;
  for (const auto& p : points) {
    minx = std::min(minx, p.x());
    maxx = std::max(maxx, p.x());
    miny = std::min(miny, p.y());
    maxy = std::max(maxy, p.y());
  }
  const double extent = std::max(maxx - minx, maxy - miny);
  if (!(extent > 0.0)) throw DegenerateError("delaunay: all points coincide");
  const double scale = kGridExtent / extent;

  std::vector<IPoint> snapped(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    snapped[i] = {std::llround((points[i].x() - minx) * scale), std::llround((points[i].y() - miny) * scale)};
  }

  // Insertion order: sort along x (ties on y, then index) so consecutive
  // points are near each other; drop exact duplicates keeping the first.
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& pa = snapped[a];
    const auto& pb = snapped[b];
    if (pa.x != pb.x) return pa.x < pb.x;
    if (pa.y != pb.y) return pa.y < pb.y;
    return a < b;
  });
  std::vector<int> unique;
  unique.reserve(order.size());
  for (const int idx : order) {
    if (!unique.empty() && snapped[unique.back()].x == snapped[idx].x && snapped[unique.back()].y == snapped[idx].y) {
      result.duplicates.push_back(idx);
      continue;
    }
    unique.push_back(idx);
  }
  std::sort(result.duplicates.begin(), result.duplicates.end());
  if (unique.size() < 3) throw DegenerateError("delaunay: fewer than three distinct points");

  // Seed triangle: the first two points plus the first point off their line.
  const int a = unique[0];
  const int b = unique[1];
  std::size_t third = 2;
  while (third < unique.size() && orient(snapped[a], snapped[b], snapped[unique[third]]) == 0) ++third;
  if (third == unique.size()) throw DegenerateError("delaunay: all points are collinear");

  Builder builder(std::move(snapped));
  builder.start(a, b, unique[third]);
  for (std::size_t i = 2; i < unique.size(); ++i) {
    if (i != third) builder.insert(unique[i]);
  }
  result.triangles = builder.real_triangles();
  return result;
}

}  // namespace ifvc

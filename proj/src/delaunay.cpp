//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "hemofsi/error.hpp"

namespace hemofsi {

long double orient_exact(const Point2& a, const Point2& b, const Point2& c) {
  const long double acx = static_cast<long double>(a.x) - c.x;
  const long double bcx = static_cast<long double>(b.x) - c.x;
  const long double acy = static_cast<long double>(a.y) - c.y;
  const long double bcy = static_cast<long double>(b.y) - c.y;
  return acx * bcy - acy * bcx;
}

long double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const long double adx = static_cast<long double>(a.x) - d.x;
  const long double ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x;
  const long double bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x;
  const long double cdy = static_cast<long double>(c.y) - d.y;
  const long double alift = adx * adx + ady * ady;
  const long double blift = bdx * bdx + bdy * bdy;
  const long double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
         clift * (adx * bdy - ady * bdx);
}

Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c) {
  const long double bx = static_cast<long double>(b.x) - a.x;
  const long double by = static_cast<long double>(b.y) - a.y;
  const long double cx = static_cast<long double>(c.x) - a.x;
  const long double cy = static_cast<long double>(c.y) - a.y;
  const long double d = 2.0L * (bx * cy - by * cx);
  const long double b2 = bx * bx + by * by;
  const long double c2 = cx * cx + cy * cy;
  return {a.x + static_cast<double>((cy * b2 - by * c2) / d),
          a.y + static_cast<double>((bx * c2 - cx * b2) / d)};
}

namespace {

std::uint64_t key_of(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

std::array<int, 2> unkey(std::uint64_t k) {
  return {static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu)};
}

struct Tri {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};  // across edge (v[j], v[j+1])
  int region = -1;
  bool alive = true;
};

struct CavityEdge {
  int a, b, outer, inner;
};

class Mesher {
 public:
  Mesher(const Pslg& pslg, const MeshingOptions& opts) : pslg_(pslg), opts_(opts) {}

  Triangulation run(std::span<const RegionSeed> seeds) {
    init_super();
    for (const auto& p : pslg_.points) insert_free(p);
    recover_segments();
    flood_regions(seeds);
    refine();
    return extract();
  }

 private:
  const Point2& P(int i) const { return pts_[static_cast<std::size_t>(i)]; }
  Tri& T(int t) { return tris_[static_cast<std::size_t>(t)]; }
  const Tri& T(int t) const { return tris_[static_cast<std::size_t>(t)]; }

  bool constrained(int a, int b) const { return markers_.count(key_of(a, b)) != 0; }

  void init_super() {
    if (pslg_.points.size() < 3) throw MeshError("PSLG needs at least three points");
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& p : pslg_.points) {
      if (!is_finite(p)) throw MeshError("PSLG point with non-finite coordinates");
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    scale_ = std::max(xmax - xmin, ymax - ymin);
    if (!(scale_ > 0.0)) throw MeshError("PSLG points are coincident");
    const Point2 c{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    const double d = 50.0 * scale_;
    pts_ = {{c.x - d, c.y - d}, {c.x + d, c.y - d}, {c.x, c.y + d}};
    vert_tri_ = {0, 0, 0};
    tris_.push_back(Tri{{0, 1, 2}, {-1, -1, -1}, -1, true});
    last_ = 0;
  }

  // Visibility walk. With `respect` set, stops at the first constrained
  // edge it would cross and reports it in `blocked`.
  int walk(int start, const Point2& p, bool respect, std::uint64_t* blocked) const {
    int t = (start >= 0 && T(start).alive) ? start : last_alive();
    const int limit = static_cast<int>(tris_.size()) + 16;
    for (int step = 0; step < limit; ++step) {
      const Tri& tr = T(t);
      int next = -1;
      for (int k = 0; k < 3; ++k) {
        const int j = (k + step) % 3;
        const int a = tr.v[static_cast<std::size_t>(j)];
        const int b = tr.v[static_cast<std::size_t>((j + 1) % 3)];
        if (orient_exact(P(a), P(b), p) < 0.0L) {
          if (respect && constrained(a, b)) {
            if (blocked) *blocked = key_of(a, b);
            return -1;
          }
          next = tr.nb[static_cast<std::size_t>(j)];
          if (next < 0) throw MeshError("point outside the bounding triangle");
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    for (std::size_t k = 0; k < tris_.size(); ++k) {
      const Tri& tr = tris_[k];
      if (!tr.alive) continue;
      if (orient_exact(P(tr.v[0]), P(tr.v[1]), p) >= 0.0L &&
          orient_exact(P(tr.v[1]), P(tr.v[2]), p) >= 0.0L &&
          orient_exact(P(tr.v[2]), P(tr.v[0]), p) >= 0.0L) {
        return static_cast<int>(k);
      }
    }
    throw MeshError("point location failed");
  }

  int last_alive() const {
    if (T(last_).alive) return last_;
    for (int k = static_cast<int>(tris_.size()) - 1; k >= 0; --k) {
      if (T(k).alive) return k;
    }
    throw MeshError("empty triangulation");
  }

  bool in_circle(int t, const Point2& p) const {
    const Tri& tr = T(t);
    return incircle(P(tr.v[0]), P(tr.v[1]), P(tr.v[2]), p) > 0.0L;
  }

  // Bowyer-Watson cavity of p grown from `start`, not crossing constrained
  // edges other than `split`. Returns false when the cavity is not
  // star-shaped with respect to p.
  bool cavity(const Point2& p, int start, std::uint64_t split, std::vector<int>& cav,
              std::vector<CavityEdge>& boundary) {
    ++stamp_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    cav.assign(1, start);
    mark_[static_cast<std::size_t>(start)] = stamp_;
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (std::size_t i = 0; i < cav.size(); ++i) {
        const Tri& tr = T(cav[i]);
        for (int j = 0; j < 3; ++j) {
          const int n = tr.nb[static_cast<std::size_t>(j)];
          if (n < 0 || mark_[static_cast<std::size_t>(n)] == stamp_) continue;
          const int a = tr.v[static_cast<std::size_t>(j)];
          const int b = tr.v[static_cast<std::size_t>((j + 1) % 3)];
          const auto k = key_of(a, b);
          if (k == split) {
            mark_[static_cast<std::size_t>(n)] = stamp_;
            cav.push_back(n);
            continue;
          }
          if (constrained(a, b)) continue;
          if (in_circle(n, p)) {
            mark_[static_cast<std::size_t>(n)] = stamp_;
            cav.push_back(n);
          }
        }
      }
      boundary.clear();
      int bad_outer = -2;
      for (int t : cav) {
        const Tri& tr = T(t);
        for (int j = 0; j < 3; ++j) {
          const int n = tr.nb[static_cast<std::size_t>(j)];
          if (n >= 0 && mark_[static_cast<std::size_t>(n)] == stamp_) continue;
          const int a = tr.v[static_cast<std::size_t>(j)];
          const int b = tr.v[static_cast<std::size_t>((j + 1) % 3)];
          if (!(orient_exact(P(a), P(b), p) > 0.0L)) {
            if (n < 0 || constrained(a, b)) return false;
            bad_outer = n;
          }
          boundary.push_back({a, b, n, t});
        }
      }
      if (bad_outer == -2) return true;
      mark_[static_cast<std::size_t>(bad_outer)] = stamp_;
      cav.push_back(bad_outer);
    }
    return false;
  }

  int commit(const Point2& p, const std::vector<int>& cav, const std::vector<CavityEdge>& boundary,
             std::vector<int>* created) {
    const int pi = static_cast<int>(pts_.size());
    pts_.push_back(p);
    vert_tri_.push_back(-1);
    for (int t : cav) T(t).alive = false;
    std::unordered_map<int, int> by_a, by_b;
    const std::size_t first = tris_.size();
    for (const auto& e : boundary) {
      const int nt = static_cast<int>(tris_.size());
      tris_.push_back(Tri{{pi, e.a, e.b}, {-1, e.outer, -1}, T(e.inner).region, true});
      by_a[e.a] = nt;
      by_b[e.b] = nt;
      if (e.outer >= 0) {
        Tri& o = T(e.outer);
        for (int j = 0; j < 3; ++j) {
          if (o.v[static_cast<std::size_t>(j)] == e.b && o.v[static_cast<std::size_t>((j + 1) % 3)] == e.a) {
            o.nb[static_cast<std::size_t>(j)] = nt;
          }
        }
      }
      vert_tri_[static_cast<std::size_t>(e.a)] = nt;
      vert_tri_[static_cast<std::size_t>(e.b)] = nt;
      vert_tri_[static_cast<std::size_t>(pi)] = nt;
    }
    for (std::size_t k = first; k < tris_.size(); ++k) {
      Tri& tr = tris_[k];
      tr.nb[0] = by_b.at(tr.v[1]);
      tr.nb[2] = by_a.at(tr.v[2]);
      if (created) created->push_back(static_cast<int>(k));
    }
    last_ = static_cast<int>(tris_.size()) - 1;
    if (pts_.size() > opts_.max_points + 3) {
      throw MeshError("mesh point budget of " + std::to_string(opts_.max_points) + " exhausted");
    }
    return pi;
  }

  int insert_free(const Point2& p) {
    const int t = walk(last_, p, false, nullptr);
    for (int v : T(t).v) {
      if (distance(P(v), p) <= 1e-14 * scale_) throw MeshError("duplicate PSLG point");
    }
    std::vector<int> cav;
    std::vector<CavityEdge> boundary;
    if (!cavity(p, t, 0, cav, boundary)) throw MeshError("degenerate point insertion");
    return commit(p, cav, boundary, nullptr);
  }

  // Triangle on each side of edge (a, b), found by rotating around a.
  std::array<int, 2> edge_tris(int a, int b) const {
    std::array<int, 2> out{-1, -1};
    const int start = vert_tri_[static_cast<std::size_t>(a)];
    int t = start;
    int found = 0;
    for (int guard = 0; guard < 1024 && t >= 0; ++guard) {
      const Tri& tr = T(t);
      int i = 0;
      while (tr.v[static_cast<std::size_t>(i)] != a) ++i;
      for (int v : tr.v) {
        if (v == b && found < 2) out[static_cast<std::size_t>(found++)] = t;
      }
      t = tr.nb[static_cast<std::size_t>((i + 2) % 3)];
      if (t == start) break;
    }
    return out;
  }

  bool has_edge(int a, int b) const { return edge_tris(a, b)[0] >= 0; }

  void recover_segments() {
    if (pslg_.segment_markers.size() != pslg_.segments.size()) {
      throw MeshError("segment marker count does not match segment count");
    }
    // PSLG point i is vertex i + 3.
    std::vector<std::array<int, 3>> stack;
    for (std::size_t s = pslg_.segments.size(); s-- > 0;) {
      const auto& seg = pslg_.segments[s];
      const int n = static_cast<int>(pslg_.points.size());
      if (seg[0] < 0 || seg[0] >= n || seg[1] < 0 || seg[1] >= n || seg[0] == seg[1]) {
        throw MeshError("segment " + std::to_string(s) + " has invalid endpoints");
      }
      stack.push_back({seg[0] + 3, seg[1] + 3, pslg_.segment_markers[s]});
    }
    while (!stack.empty()) {
      const auto [a, b, marker] = stack.back();
      stack.pop_back();
      if (has_edge(a, b)) {
        markers_[key_of(a, b)] = marker;
        continue;
      }
      if (distance(P(a), P(b)) < 1e-9 * scale_) throw MeshError("segment recovery failed");
      const Point2 m = midpoint(P(a), P(b));
      const int t = walk(last_, m, false, nullptr);
      std::vector<int> cav;
      std::vector<CavityEdge> boundary;
      if (!cavity(m, t, 0, cav, boundary)) throw MeshError("segments intersect or overlap");
      const int mi = commit(m, cav, boundary, nullptr);
      stack.push_back({mi, b, marker});
      stack.push_back({a, mi, marker});
    }
  }

  void flood_regions(std::span<const RegionSeed> seeds) {
    for (const auto& seed : seeds) {
      const int t0 = walk(last_, seed.point, false, nullptr);
      if (T(t0).region >= 0) continue;
      std::vector<int> stack{t0};
      T(t0).region = seed.region;
      while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        const Tri& tr = T(t);
        for (int v : tr.v) {
          if (v < 3) throw MeshError("region seed is not enclosed by segments");
        }
        for (int j = 0; j < 3; ++j) {
          const int n = tr.nb[static_cast<std::size_t>(j)];
          if (n < 0 || T(n).region >= 0) continue;
          if (constrained(tr.v[static_cast<std::size_t>(j)], tr.v[static_cast<std::size_t>((j + 1) % 3)])) continue;
          T(n).region = seed.region;
          stack.push_back(n);
        }
      }
    }
  }

  bool encroached_by(int a, int b, const Point2& c) const {
    return dot(P(a) - c, P(b) - c) < 0.0;
  }

  bool encroached(std::uint64_t k) const {
    const auto [a, b] = unkey(k);
    for (int t : edge_tris(a, b)) {
      if (t < 0 || T(t).region < 0) continue;
      for (int v : T(t).v) {
        if (v != a && v != b && encroached_by(a, b, P(v))) return true;
      }
    }
    return false;
  }

  bool is_bad(int t) const {
    const Tri& tr = T(t);
    if (!tr.alive || tr.region < 0) return false;
    const Point2& a = P(tr.v[0]);
    const Point2& b = P(tr.v[1]);
    const Point2& c = P(tr.v[2]);
    std::array<double, 3> l2{dot(b - c, b - c), dot(c - a, c - a), dot(a - b, a - b)};
    std::sort(l2.begin(), l2.end());
    const double h = opts_.size((a + b + c) * (1.0 / 3.0), tr.region);
    if (l2[2] > h * h) return true;
    const double cos_min = (l2[1] + l2[2] - l2[0]) / (2.0 * std::sqrt(l2[1] * l2[2]));
    return cos_min > cos_bound_;
  }

  void split_segment(std::uint64_t k, std::vector<int>& created) {
    const auto [a, b] = unkey(k);
    const auto sides = edge_tris(a, b);
    if (sides[0] < 0) throw MeshError("constrained edge lost during refinement");
    const Point2 m = midpoint(P(a), P(b));
    std::vector<int> cav;
    std::vector<CavityEdge> boundary;
    if (!cavity(m, sides[0], k, cav, boundary)) throw MeshError("segment split failed");
    const int marker = markers_.at(k);
    const int mi = commit(m, cav, boundary, &created);
    markers_.erase(k);
    markers_[key_of(a, mi)] = marker;
    markers_[key_of(mi, b)] = marker;
  }

  void refine() {
    cos_bound_ = std::cos(opts_.min_angle_deg * std::numbers::pi / 180.0);
    std::deque<std::pair<std::uint64_t, bool>> segq;
    {
      std::vector<std::uint64_t> keys;
      for (const auto& kv : markers_) keys.push_back(kv.first);
      std::sort(keys.begin(), keys.end());
      for (auto k : keys) segq.emplace_back(k, false);
    }
    std::deque<int> triq;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      if (tris_[t].alive && tris_[t].region >= 0) triq.push_back(static_cast<int>(t));
    }
    std::vector<int> created;
    const auto after_insert = [&]() {
      for (int t : created) {
        const Tri& tr = T(t);
        for (int j = 0; j < 3; ++j) {
          const int a = tr.v[static_cast<std::size_t>(j)];
          const int b = tr.v[static_cast<std::size_t>((j + 1) % 3)];
          if (constrained(a, b)) segq.emplace_back(key_of(a, b), false);
        }
        triq.push_back(t);
      }
      created.clear();
    };
    std::vector<int> cav;
    std::vector<CavityEdge> boundary;
    while (!segq.empty() || !triq.empty()) {
      if (!segq.empty()) {
        const auto [k, force] = segq.front();
        segq.pop_front();
        if (markers_.count(k) == 0) continue;
        if (!force && !encroached(k)) continue;
        split_segment(k, created);
        after_insert();
        continue;
      }
      const int t = triq.front();
      triq.pop_front();
      if (!is_bad(t)) continue;
      const Tri& tr = T(t);
      const Point2 c = circumcenter(P(tr.v[0]), P(tr.v[1]), P(tr.v[2]));
      std::uint64_t blocked = 0;
      const int loc = walk(t, c, true, &blocked);
      if (loc < 0) {
        segq.emplace_back(blocked, true);
        triq.push_back(t);
        continue;
      }
      if (T(loc).region < 0) continue;
      if (!cavity(c, loc, 0, cav, boundary)) {
        // c sits on a constrained edge of its triangle.
        bool split = false;
        const Tri& lt = T(loc);
        for (int j = 0; j < 3; ++j) {
          const int a = lt.v[static_cast<std::size_t>(j)];
          const int b = lt.v[static_cast<std::size_t>((j + 1) % 3)];
          if (constrained(a, b) && !(orient_exact(P(a), P(b), c) > 0.0L)) {
            segq.emplace_back(key_of(a, b), true);
            split = true;
          }
        }
        if (split) triq.push_back(t);
        continue;
      }
      bool rejected = false;
      for (const auto& e : boundary) {
        if (constrained(e.a, e.b) && encroached_by(e.a, e.b, c)) {
          segq.emplace_back(key_of(e.a, e.b), true);
          rejected = true;
        }
      }
      if (rejected) {
        triq.push_back(t);
        continue;
      }
      commit(c, cav, boundary, &created);
      after_insert();
    }
  }

  Triangulation extract() const {
    Triangulation out;
    std::vector<int> index(pts_.size(), -1);
    for (const auto& tr : tris_) {
      if (!tr.alive || tr.region < 0) continue;
      for (int v : tr.v) index[static_cast<std::size_t>(v)] = 0;
    }
    for (std::size_t v = 0; v < pts_.size(); ++v) {
      if (index[v] == 0) {
        index[v] = static_cast<int>(out.points.size());
        out.points.push_back(pts_[v]);
      }
    }
    for (const auto& tr : tris_) {
      if (!tr.alive || tr.region < 0) continue;
      out.triangles.push_back({index[static_cast<std::size_t>(tr.v[0])],
                               index[static_cast<std::size_t>(tr.v[1])],
                               index[static_cast<std::size_t>(tr.v[2])]});
      out.triangle_regions.push_back(tr.region);
    }
    std::vector<std::uint64_t> keys;
    for (const auto& kv : markers_) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    for (auto k : keys) {
      const auto [a, b] = unkey(k);
      if (index[static_cast<std::size_t>(a)] < 0 || index[static_cast<std::size_t>(b)] < 0) continue;
      out.segments.push_back({{index[static_cast<std::size_t>(a)], index[static_cast<std::size_t>(b)]},
                              markers_.at(k)});
    }
    return out;
  }

  const Pslg& pslg_;
  const MeshingOptions& opts_;
  std::vector<Point2> pts_;
  std::vector<Tri> tris_;
  std::vector<int> vert_tri_;
  std::unordered_map<std::uint64_t, int> markers_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
  double scale_ = 1.0;
  double cos_bound_ = 1.0;
};

}  // namespace

Triangulation triangulate(const Pslg& pslg, std::span<const RegionSeed> seeds,
                          const MeshingOptions& options) {
  if (!options.size) throw MeshError("meshing size function not set");
  if (!(options.min_angle_deg > 0.0 && options.min_angle_deg <= 30.0)) {
    throw MeshError("minimum angle must lie in (0, 30] degrees");
  }
  Mesher mesher(pslg, options);
  return mesher.run(seeds);
}

}  // namespace hemofsi

#pragma once

// Boolean operations on closed rings via a planar edge arrangement.
//
// Every input edge is split at all of its intersections, coincident pieces are merged
// with their winding deltas summed, and each resulting edge is classified by the
// winding numbers on its two sides. Edges separating a filled side from an empty side
// form the result boundary. Areas come straight from the boundary edges; rings are
// recovered by walking boundary edges with the filled region on the left.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "shrinkmask/geometry/polygon.hpp"

namespace shrinkmask::clip {

struct Vec {
    double x = 0.0;
    double y = 0.0;
};

inline Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
inline Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
inline Vec operator*(Vec a, double s) { return {a.x * s, a.y * s}; }
inline double cross(Vec a, Vec b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec a) { return std::hypot(a.x, a.y); }

/// Winding numbers of the two operands at a point.
struct Winding {
    int a = 0;
    int b = 0;
};

struct Ring {
    std::vector<Vec> points;
    double signed_area = 0.0;
};

struct BooleanResult {
    double area = 0.0;
    std::vector<Ring> outers;  // positive orientation
    std::vector<Ring> holes;   // negative orientation
};

namespace detail {

struct InputSegment {
    Vec a, b;
    int operand;
};

struct Split {
    double t;
    Vec p;
};

struct Edge {
    std::uint32_t u, v;  // u < v
    int da, db;          // winding increase crossing the edge from its right to its left (u->v)
};

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::uint32_t> parent_;
};

/// Buckets edges by the interval they span along one axis for stabbing queries.
class BandIndex {
public:
    BandIndex(double lo, double hi, std::size_t bands) : lo_(lo), bands_(std::max<std::size_t>(bands, 1)) {
        const double span = hi - lo;
        scale_ = span > 0 ? static_cast<double>(bands_) / span : 0.0;
        buckets_.resize(bands_);
    }
    void insert(std::uint32_t id, double a, double b) {
        const std::size_t i0 = band(std::min(a, b));
        const std::size_t i1 = band(std::max(a, b));
        for (std::size_t i = i0; i <= i1; ++i) buckets_[i].push_back(id);
    }
    [[nodiscard]] const std::vector<std::uint32_t>& at(double c) const { return buckets_[band(c)]; }

private:
    [[nodiscard]] std::size_t band(double c) const {
        const double f = (c - lo_) * scale_;
        if (!(f > 0)) return 0;
        return std::min(static_cast<std::size_t>(f), bands_ - 1);
    }
    double lo_;
    double scale_ = 0.0;
    std::size_t bands_;
    std::vector<std::vector<std::uint32_t>> buckets_;
};

inline void add_split(std::vector<Split>& splits, double t, Vec p) {
    if (t <= 0.0 || t >= 1.0) return;
    splits.push_back({t, p});
}

inline void intersect_pair(const InputSegment& s1, const InputSegment& s2, std::vector<Split>& sp1,
                           std::vector<Split>& sp2) {
    const Vec r = s1.b - s1.a;
    const Vec s = s2.b - s2.a;
    const double lr = norm(r), ls = norm(s);
    const double tol_t = kCoordEpsilon / lr;
    const double tol_u = kCoordEpsilon / ls;
    const double denom = cross(r, s);
    const Vec qp = s2.a - s1.a;

    if (std::abs(denom) <= 1e-12 * lr * ls) {
        if (std::abs(cross(r, qp)) / lr > kCoordEpsilon) return;  // parallel, apart
        // Collinear: endpoints of each segment strictly inside the other become splits.
        for (Vec p : {s2.a, s2.b}) {
            const double t = dot(p - s1.a, r) / (lr * lr);
            if (t > tol_t && t < 1.0 - tol_t) add_split(sp1, t, p);
        }
        for (Vec p : {s1.a, s1.b}) {
            const double u = dot(p - s2.a, s) / (ls * ls);
            if (u > tol_u && u < 1.0 - tol_u) add_split(sp2, u, p);
        }
        return;
    }

    const double t = cross(qp, s) / denom;
    const double u = cross(qp, r) / denom;
    if (t < -tol_t || t > 1.0 + tol_t || u < -tol_u || u > 1.0 + tol_u) return;

    const bool t_lo = t <= tol_t, t_hi = t >= 1.0 - tol_t;
    const bool u_lo = u <= tol_u, u_hi = u >= 1.0 - tol_u;
    Vec p;
    if (t_lo) {
        p = s1.a;
    } else if (t_hi) {
        p = s1.b;
    } else if (u_lo) {
        p = s2.a;
    } else if (u_hi) {
        p = s2.b;
    } else {
        p = s1.a + r * t;
    }
    if (!t_lo && !t_hi) add_split(sp1, t, p);
    if (!u_lo && !u_hi) add_split(sp2, u, p);
}

}  // namespace detail

/// Accumulates oriented rings of up to two operands and evaluates a fill predicate
/// over their arrangement.
class Arrangement {
public:
    void add_ring(std::span<const Vec> ring, int operand) {
        const std::size_t n = ring.size();
        if (n < 2) return;
        built_ = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec a = ring[i];
            const Vec b = ring[(i + 1) % n];
            if (a.x == b.x && a.y == b.y) continue;
            segments_.push_back({a, b, operand});
        }
    }

    void add_polygon(const Polygon& poly, int operand) {
        std::vector<Vec> pts;
        pts.reserve(poly.size());
        for (const auto& p : poly.vertices()) pts.push_back({p.x, p.y});
        add_ring(pts, operand);
    }

    /// `fill(Winding) -> bool` decides which regions belong to the result.
    template <class Fill>
    [[nodiscard]] BooleanResult evaluate(Fill&& fill, bool want_rings) {
        BooleanResult result;
        if (segments_.empty()) return result;
        build();
        if (edges_.empty()) return result;

        const std::vector<Winding> right = right_windings();

        // Boundary edges oriented with the filled side on the left.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary;
        boundary.reserve(edges_.size());
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            const Winding wr = right[i];
            const Winding wl{wr.a + e.da, wr.b + e.db};
            const bool fr = fill(wr);
            const bool fl = fill(wl);
            if (fr == fl) continue;
            if (fl) {
                boundary.emplace_back(e.u, e.v);
            } else {
                boundary.emplace_back(e.v, e.u);
            }
        }

        const Vec ref = vertices_.front();
        double acc = 0.0;
        for (const auto& [from, to] : boundary) {
            acc += cross(vertices_[from] - ref, vertices_[to] - ref);
        }
        result.area = 0.5 * acc;
        if (want_rings) link_rings(boundary, result);
        return result;
    }

private:
    void build() {
        if (built_) return;
        built_ = true;
        const std::size_t n = segments_.size();
        std::vector<std::vector<detail::Split>> splits(n);

        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        auto lo_x = [&](std::uint32_t i) { return std::min(segments_[i].a.x, segments_[i].b.x); };
        auto hi_x = [&](std::uint32_t i) { return std::max(segments_[i].a.x, segments_[i].b.x); };
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double la = lo_x(a), lb = lo_x(b);
            return la < lb || (la == lb && a < b);
        });
        for (std::size_t oi = 0; oi < n; ++oi) {
            const auto i = order[oi];
            const auto& s1 = segments_[i];
            const double xmax = hi_x(i) + kCoordEpsilon;
            const double ymin = std::min(s1.a.y, s1.b.y) - kCoordEpsilon;
            const double ymax = std::max(s1.a.y, s1.b.y) + kCoordEpsilon;
            for (std::size_t oj = oi + 1; oj < n; ++oj) {
                const auto j = order[oj];
                if (lo_x(j) > xmax) break;
                const auto& s2 = segments_[j];
                if (std::max(s2.a.y, s2.b.y) < ymin || std::min(s2.a.y, s2.b.y) > ymax) continue;
                detail::intersect_pair(s1, s2, splits[i], splits[j]);
            }
        }

        // Cluster every endpoint and split point into shared vertices.
        struct Tagged {
            Vec p;
            std::uint32_t slot;
        };
        std::vector<Tagged> pts;
        std::vector<std::size_t> first_slot(n + 1, 0);
        for (std::size_t i = 0; i < n; ++i) first_slot[i + 1] = first_slot[i] + 2 + splits[i].size();
        pts.reserve(first_slot[n]);
        for (std::size_t i = 0; i < n; ++i) {
            auto& sp = splits[i];
            std::sort(sp.begin(), sp.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
            std::uint32_t slot = static_cast<std::uint32_t>(first_slot[i]);
            pts.push_back({segments_[i].a, slot++});
            for (const auto& s : sp) pts.push_back({s.p, slot++});
            pts.push_back({segments_[i].b, slot++});
        }
        std::vector<std::uint32_t> by_x(pts.size());
        std::iota(by_x.begin(), by_x.end(), 0u);
        std::sort(by_x.begin(), by_x.end(), [&](std::uint32_t a, std::uint32_t b) {
            return pts[a].p.x < pts[b].p.x || (pts[a].p.x == pts[b].p.x && pts[a].p.y < pts[b].p.y);
        });
        detail::DisjointSet dsu(pts.size());
        for (std::size_t k = 0; k < by_x.size(); ++k) {
            const Vec p = pts[by_x[k]].p;
            for (std::size_t m = k + 1; m < by_x.size(); ++m) {
                const Vec q = pts[by_x[m]].p;
                if (q.x - p.x > kCoordEpsilon) break;
                if (std::abs(q.y - p.y) <= kCoordEpsilon) dsu.unite(by_x[k], by_x[m]);
            }
        }
        std::vector<std::uint32_t> vertex_of(pts.size(), UINT32_MAX);
        std::vector<std::uint32_t> root_vertex(pts.size(), UINT32_MAX);
        vertices_.clear();
        for (std::uint32_t k : by_x) {
            const std::uint32_t r = dsu.find(k);
            if (root_vertex[r] == UINT32_MAX) {
                root_vertex[r] = static_cast<std::uint32_t>(vertices_.size());
                vertices_.push_back(pts[k].p);
            }
            vertex_of[pts[k].slot] = root_vertex[r];
        }

        // Sub-edges, merged by their undirected vertex pair.
        std::unordered_map<std::uint64_t, std::uint32_t> index;
        index.reserve(first_slot[n] * 2);
        edges_.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const int da = segments_[i].operand == 0 ? 1 : 0;
            const int db = segments_[i].operand == 0 ? 0 : 1;
            for (std::size_t s = first_slot[i]; s + 1 < first_slot[i + 1]; ++s) {
                const std::uint32_t from = vertex_of[s];
                const std::uint32_t to = vertex_of[s + 1];
                if (from == to) continue;
                const std::uint32_t u = std::min(from, to), v = std::max(from, to);
                const int sign = from == u ? 1 : -1;
                const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
                auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(edges_.size()));
                if (inserted) edges_.push_back({u, v, 0, 0});
                auto& e = edges_[it->second];
                e.da += sign * da;
                e.db += sign * db;
            }
        }
        std::erase_if(edges_, [](const detail::Edge& e) { return e.da == 0 && e.db == 0; });
    }

    /// Winding pair on the right-hand side of every merged edge, by ray casting from its
    /// midpoint away from the edge.
    [[nodiscard]] std::vector<Winding> right_windings() const {
        BoundingBox box;
        for (const auto& p : vertices_) box.extend(p.x, p.y);
        const std::size_t bands = static_cast<std::size_t>(std::sqrt(static_cast<double>(edges_.size()))) + 1;
        detail::BandIndex ybands(box.min_y, box.max_y, bands);
        detail::BandIndex xbands(box.min_x, box.max_x, bands);
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            const Vec a = vertices_[edges_[i].u], b = vertices_[edges_[i].v];
            ybands.insert(i, a.y, b.y);
            xbands.insert(i, a.x, b.x);
        }

        std::vector<Winding> out(edges_.size());
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            const Vec a = vertices_[e.u], b = vertices_[e.v];
            const Vec m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
            const Vec d = b - a;
            Winding w;
            if (std::abs(d.y) >= std::abs(d.x)) {
                // Ray towards +x; upward crossings add, downward subtract.
                for (std::uint32_t j : ybands.at(m.y)) {
                    if (j == i) continue;
                    const auto& f = edges_[j];
                    const Vec p = vertices_[f.u], q = vertices_[f.v];
                    const bool up = p.y <= m.y && m.y < q.y;
                    const bool down = q.y <= m.y && m.y < p.y;
                    if (!up && !down) continue;
                    const double xi = p.x + (m.y - p.y) * (q.x - p.x) / (q.y - p.y);
                    if (xi <= m.x) continue;
                    const int s = up ? 1 : -1;
                    w.a += s * f.da;
                    w.b += s * f.db;
                }
                if (d.y < 0) {  // +x lies on the left of a downward edge
                    w.a -= e.da;
                    w.b -= e.db;
                }
            } else {
                // Ray towards +y; leftward crossings add, rightward subtract.
                for (std::uint32_t j : xbands.at(m.x)) {
                    if (j == i) continue;
                    const auto& f = edges_[j];
                    const Vec p = vertices_[f.u], q = vertices_[f.v];
                    const bool right = p.x <= m.x && m.x < q.x;
                    const bool left = q.x <= m.x && m.x < p.x;
                    if (!right && !left) continue;
                    const double yi = p.y + (m.x - p.x) * (q.y - p.y) / (q.x - p.x);
                    if (yi <= m.y) continue;
                    const int s = left ? 1 : -1;
                    w.a += s * f.da;
                    w.b += s * f.db;
                }
                if (d.x > 0) {  // +y lies on the left of a rightward edge
                    w.a -= e.da;
                    w.b -= e.db;
                }
            }
            out[i] = w;
        }
        return out;
    }

    void link_rings(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& boundary,
                    BooleanResult& result) const {
        std::vector<std::vector<std::uint32_t>> outgoing(vertices_.size());
        for (std::uint32_t k = 0; k < boundary.size(); ++k) outgoing[boundary[k].first].push_back(k);
        std::vector<bool> used(boundary.size(), false);

        for (std::uint32_t start = 0; start < boundary.size(); ++start) {
            if (used[start]) continue;
            std::vector<std::uint32_t> chain;
            std::uint32_t cur = start;
            while (true) {
                used[cur] = true;
                chain.push_back(boundary[cur].first);
                const std::uint32_t at = boundary[cur].second;
                const Vec din = vertices_[at] - vertices_[boundary[cur].first];
                std::uint32_t best = UINT32_MAX;
                double best_angle = -10.0;
                for (std::uint32_t k : outgoing[at]) {
                    if (used[k]) continue;
                    const Vec dout = vertices_[boundary[k].second] - vertices_[at];
                    const double ang = std::atan2(cross(din, dout), dot(din, dout));
                    if (ang > best_angle) {
                        best_angle = ang;
                        best = k;
                    }
                }
                if (best == UINT32_MAX) break;
                cur = best;
            }
            Ring ring = simplify(chain);
            if (ring.points.size() < 3) continue;
            if (ring.signed_area > 0) {
                result.outers.push_back(std::move(ring));
            } else if (ring.signed_area < 0) {
                result.holes.push_back(std::move(ring));
            }
        }
    }

    [[nodiscard]] Ring simplify(const std::vector<std::uint32_t>& chain) const {
        std::vector<Vec> pts;
        pts.reserve(chain.size());
        for (std::uint32_t id : chain) pts.push_back(vertices_[id]);
        // Drop vertices where the boundary continues straight on.
        bool changed = true;
        while (changed && pts.size() >= 3) {
            changed = false;
            std::vector<Vec> kept;
            kept.reserve(pts.size());
            const std::size_t n = pts.size();
            for (std::size_t i = 0; i < n; ++i) {
                const Vec prev = kept.empty() ? pts[(i + n - 1) % n] : kept.back();
                const Vec cur = pts[i];
                const Vec next = pts[(i + 1) % n];
                const Vec d1 = cur - prev, d2 = next - cur;
                const double scale = std::max(norm(d1), norm(d2));
                if (std::abs(cross(d1, d2)) <= kCoordEpsilon * scale && dot(d1, d2) > 0) {
                    changed = true;
                    continue;
                }
                kept.push_back(cur);
            }
            pts.swap(kept);
        }
        Ring ring;
        if (pts.size() < 3) return ring;
        const Vec o = pts[0];
        double acc = 0.0;
        for (std::size_t i = 1; i + 1 < pts.size(); ++i) acc += cross(pts[i] - o, pts[i + 1] - o);
        ring.signed_area = 0.5 * acc;
        ring.points = std::move(pts);
        return ring;
    }

    std::vector<detail::InputSegment> segments_;
    bool built_ = false;
    std::vector<Vec> vertices_;
    std::vector<detail::Edge> edges_;
};

inline std::vector<Vec> to_vecs(const Polygon& poly) {
    std::vector<Vec> pts;
    pts.reserve(poly.size());
    for (const auto& p : poly.vertices()) pts.push_back({p.x, p.y});
    return pts;
}

inline std::vector<Point2> to_points(const Ring& ring) {
    std::vector<Point2> pts;
    pts.reserve(ring.points.size());
    for (const auto& v : ring.points) pts.emplace_back(v.x, v.y);
    return pts;
}

}  // namespace shrinkmask::clip

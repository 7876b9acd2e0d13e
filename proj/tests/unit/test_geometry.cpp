#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shrinkmask/geometry.hpp"

using namespace shrinkmask;

namespace {

Polygon unit_square() { return make_polygon({0, 0, 1, 0, 1, 1, 0, 1}); }

Polygon square(double x, double y, double s) { return make_polygon({x, y, x + s, y, x + s, y + s, x, y + s}); }

Polygon transform(const Polygon& p, double angle, double tx, double ty) {
    std::vector<Point2> v;
    const double c = std::cos(angle), s = std::sin(angle);
    for (const auto& q : p.vertices()) v.emplace_back(c * q.x - s * q.y + tx, s * q.x + c * q.y + ty);
    return Polygon(v);
}

double sym_diff(const Polygon& a, const Polygon& b) { return area(a) + area(b) - 2.0 * intersection_area(a, b); }

}  // namespace

TEST(Point2, RejectsNonFinite) {
    EXPECT_THROW(Point2(NAN, 0), InvalidArgument);
    EXPECT_THROW(Point2(0, INFINITY), InvalidArgument);
}

TEST(Polygon, Validation) {
    EXPECT_THROW(make_polygon({0, 0, 1, 0}), InvalidArgument);
    EXPECT_THROW(make_polygon({0, 0, 0, 0, 1, 1}), InvalidArgument);
    EXPECT_THROW(make_polygon({0, 0, 1, 1, 2, 2}), InvalidArgument);
    try {
        (void)make_polygon({0, 0, 2, 2, 2, 0, 0, 2});
        FAIL() << "bow-tie accepted";
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("segment 0"), std::string::npos) << msg;
        EXPECT_NE(msg.find("segment 2"), std::string::npos) << msg;
    }
}

TEST(Polygon, NormalizedCounterClockwise) {
    const Polygon cw = make_polygon({0, 0, 0, 1, 1, 1, 1, 0});
    EXPECT_GT(detail::signed_area(cw.vertices()), 0.0);
    EXPECT_DOUBLE_EQ(area(cw), 1.0);
}

TEST(Area, Examples) {
    EXPECT_DOUBLE_EQ(area(unit_square()), 1.0);
    EXPECT_DOUBLE_EQ(area(make_polygon({0, 0, 2, 0, 0, 2})), 2.0);
}

TEST(Area, MonteCarloOracle) {
    std::mt19937_64 gen(11);
    const Polygon p = oracle::star(gen, 0, 0, 2.0, 10.0, 12);
    const auto v = oracle::pts(p);
    const auto& bb = p.bounds();
    std::uniform_real_distribution<double> ux(bb.min_x, bb.max_x), uy(bb.min_y, bb.max_y);
    const int n = 1'000'000;
    int hit = 0;
    for (int i = 0; i < n; ++i) hit += oracle::inside(v, ux(gen), uy(gen));
    const double mc = hit * (bb.max_x - bb.min_x) * (bb.max_y - bb.min_y) / n;
    EXPECT_NEAR(area(p), mc, 0.01 * mc);
}

TEST(Perimeter, Examples) {
    EXPECT_DOUBLE_EQ(perimeter(unit_square()), 4.0);
    EXPECT_DOUBLE_EQ(perimeter(make_polygon({0, 0, 3, 0, 0, 4})), 12.0);
}

TEST(ShrinkOffset, Examples) {
    EXPECT_NEAR(shrink_offset(unit_square(), ShrinkParams(0.4)), 0.21, 1e-15);
    EXPECT_NEAR(shrink_offset(square(0, 0, 10), ShrinkParams(0.4)), 2.1, 1e-14);
    EXPECT_LT(shrink_offset(square(0, 0, 10), ShrinkParams(0.999999)), 1e-5);
    EXPECT_THROW(ShrinkParams(0.0), InvalidArgument);
    EXPECT_THROW(ShrinkParams(1.0), InvalidArgument);
}

TEST(ShrinkOffset, ScalesLinearly) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 100; ++i) {
        const Polygon p = oracle::star(gen, 0, 0, 1, 5, 9);
        const double k = std::uniform_real_distribution<double>(0.1, 10)(gen);
        std::vector<Point2> v;
        for (const auto& q : p.vertices()) v.emplace_back(k * q.x, k * q.y);
        const double a = shrink_offset(Polygon(v), ShrinkParams(0.4));
        const double b = k * shrink_offset(p, ShrinkParams(0.4));
        EXPECT_NEAR(a, b, 1e-9 * b);
    }
}

TEST(FixedOffset, Examples) {
    EXPECT_DOUBLE_EQ(fixed_offset(unit_square(), FixedExtendParams(1.5)), 0.375);
    EXPECT_NEAR(fixed_offset(square(0, 0, 0.58), FixedExtendParams(1.5)), 0.2175, 1e-12);
    EXPECT_DOUBLE_EQ(fixed_offset(unit_square(), FixedExtendParams(0.0)), 0.0);
}

TEST(OffsetPolygon, InsetSquare) {
    const auto parts = offset_polygon(unit_square(), -0.21);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_NEAR(area(parts[0]), 0.3364, 1e-12);
    for (const auto& q : parts[0].vertices()) {
        EXPECT_NEAR(std::min(std::abs(q.x - 0.21), std::abs(q.x - 0.79)), 0.0, 1e-12);
        EXPECT_NEAR(std::min(std::abs(q.y - 0.21), std::abs(q.y - 0.79)), 0.0, 1e-12);
    }
}

TEST(OffsetPolygon, ZeroIsIdentity) {
    const auto parts = offset_polygon(unit_square(), 0.0);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_EQ(parts[0], unit_square());
}

TEST(OffsetPolygon, CollapseThrows) { EXPECT_THROW((void)offset_polygon(unit_square(), -0.6), EmptyResult); }

TEST(OffsetPolygon, USplitMatchesErosionOracle) {
    // Two thick arms joined by a thin base of height w; eroding by w/2 cuts the base.
    const double w = 1.0;
    const Polygon u = make_polygon({0, 0, 7, 0, 7, 6, 4, 6, 4, w, 3, w, 3, 6, 0, 6});
    const double d = w / 2;
    const auto parts = offset_polygon(u, -d);
    ASSERT_EQ(parts.size(), 2u);

    // Sample at 0.05 px: a point survives erosion when it is inside and at least d from the boundary.
    const double step = 0.05;
    const int nx = static_cast<int>(7 / step), ny = static_cast<int>(6 / step);
    BitMask kept(nx, ny, 0);
    const auto v = oracle::pts(u);
    for (int r = 0; r < ny; ++r) {
        for (int c = 0; c < nx; ++c) {
            const double x = (c + 0.5) * step, y = (r + 0.5) * step;
            if (!oracle::inside(v, x, y)) continue;
            double best = 1e9;
            for (std::size_t i = 0; i < v.size(); ++i) {
                const auto& a = v[i];
                const auto& b = v[(i + 1) % v.size()];
                best = std::min(best, detail::point_segment_distance(x, y, a.x, a.y, b.x, b.y));
            }
            kept(r, c) = best >= d;
        }
    }
    EXPECT_EQ(oracle::count_components(kept, false), 2);
    for (const auto& part : parts) {
        std::size_t n = 0;
        for (int r = 0; r < ny; ++r) {
            for (int c = 0; c < nx; ++c) {
                if (kept(r, c) && oracle::inside(part, (c + 0.5) * step, (r + 0.5) * step)) ++n;
            }
        }
        const double oracle_area = n * step * step;
        EXPECT_NEAR(area(part), oracle_area, 0.02 * oracle_area);
    }
}

TEST(OffsetPolygon, ShrinkReducesArea) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 200; ++i) {
        const Polygon p = oracle::star(gen, 0, 0, 3, 10, 10);
        const double d = std::uniform_real_distribution<double>(0.05, 2.0)(gen);
        try {
            for (const auto& part : offset_polygon(p, -d)) EXPECT_LT(area(part), area(p));
        } catch (const EmptyResult&) {
        }
    }
}

TEST(OffsetPolygon, ShrinkThenExpandRecoversConvex) {
    std::mt19937_64 gen(9);
    for (int i = 0; i < 200; ++i) {
        const int n = std::uniform_int_distribution<int>(3, 10)(gen);
        const Polygon p = oracle::convex(gen, 0, 0, 10, n);
        double inr = 1e9;  // distance from the centre to the nearest edge bounds the inradius below
        for (std::size_t k = 0; k < p.size(); ++k) {
            const auto& a = p[k];
            const auto& b = p[(k + 1) % p.size()];
            inr = std::min(inr, detail::point_segment_distance(0, 0, a.x, a.y, b.x, b.y));
        }
        const double d = std::uniform_real_distribution<double>(0.01, 0.25)(gen) * inr;
        const auto shrunk = offset_polygon(p, -d);
        ASSERT_EQ(shrunk.size(), 1u);
        const auto back = offset_polygon(shrunk[0], d);
        ASSERT_EQ(back.size(), 1u);
        EXPECT_LE(sym_diff(back[0], p), 0.02 * area(p)) << "trial " << i;
    }
}

TEST(Boolean, Examples) {
    const Polygon a = unit_square();
    const Polygon b = square(0.5, 0, 1);
    const Polygon far = square(5, 5, 1);
    EXPECT_DOUBLE_EQ(intersection_area(a, a), 1.0);
    EXPECT_NEAR(intersection_area(a, b), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(union_area(a, a), 1.0);
    EXPECT_DOUBLE_EQ(union_area(a, far), 2.0);
    EXPECT_NEAR(union_area(a, b), 1.5, 1e-12);
    EXPECT_DOUBLE_EQ(polygon_iou(a, a), 1.0);
    EXPECT_DOUBLE_EQ(polygon_iou(a, far), 0.0);
    EXPECT_NEAR(polygon_iou(a, b), 1.0 / 3.0, 1e-12);
}

TEST(Boolean, NestedGivesSmallerArea) {
    const Polygon outer = square(0, 0, 10);
    const Polygon inner = square(2, 3, 4);
    EXPECT_NEAR(intersection_area(outer, inner), 16.0, 1e-9);
    EXPECT_NEAR(union_area(outer, inner), 100.0, 1e-9);
}

TEST(Boolean, ConvexPairsMatchScanlineOracle) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> off(-4, 4);
    for (int i = 0; i < 200; ++i) {
        const Polygon a = oracle::convex(gen, 0, 0, 5, 5);
        const Polygon b = oracle::convex(gen, off(gen), off(gen), 5, 5);
        const auto ref = oracle::scanline_areas(a, b);
        const double inter = intersection_area(a, b);
        EXPECT_NEAR(inter, ref.inter, 0.01 * std::max(ref.inter, 1e-3)) << "pair " << i;
        EXPECT_NEAR(union_area(a, b), ref.uni, 0.01 * ref.uni) << "pair " << i;
    }
}

TEST(Boolean, Properties) {
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> off(-6, 6), ang(0, 2 * M_PI);
    for (int i = 0; i < 200; ++i) {
        const Polygon a = oracle::star(gen, 0, 0, 2, 8, 9);
        const Polygon b = oracle::star(gen, off(gen), off(gen), 2, 8, 7);
        const double in = intersection_area(a, b), un = union_area(a, b);
        EXPECT_LE(in, std::min(area(a), area(b)) + 1e-9);
        EXPECT_GE(un, std::max(area(a), area(b)) - 1e-9);
        EXPECT_NEAR(un, area(a) + area(b) - in, 1e-6 * un);
        const double iou = polygon_iou(a, b);
        EXPECT_NEAR(iou, polygon_iou(b, a), 1e-9);
        const double t = ang(gen), tx = off(gen), ty = off(gen);
        EXPECT_NEAR(iou, polygon_iou(transform(a, t, tx, ty), transform(b, t, tx, ty)), 1e-9);
    }
}

TEST(Boolean, ClipToRect) {
    const Polygon p = square(-2, -2, 4);
    const auto parts = clip_to_rect(p, 10, 10);
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_NEAR(area(parts[0]), 4.0, 1e-12);
    EXPECT_TRUE(clip_to_rect(square(20, 20, 1), 10, 10).empty());
    const Polygon inside = square(1, 1, 2);
    EXPECT_EQ(clip_to_rect(inside, 10, 10).front(), inside);
}

TEST(Distance, Regions) {
    EXPECT_DOUBLE_EQ(distance(unit_square(), square(3, 0, 1)), 2.0);
    EXPECT_DOUBLE_EQ(distance(unit_square(), square(0.5, 0.5, 1)), 0.0);
    EXPECT_DOUBLE_EQ(distance(square(0, 0, 10), square(2, 2, 1)), 0.0);
}

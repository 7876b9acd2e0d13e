#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "shrinkmask/eval.hpp"

using namespace shrinkmask;

namespace {

Polygon rect(double x0, double y0, double x1, double y1) { return make_polygon({x0, y0, x1, y0, x1, y1, x0, y1}); }

/// Exact IoU of two axis-aligned rectangles given as (x0, y0, x1, y1).
double rect_iou(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    const double iw = std::max(0.0, std::min(a[2], b[2]) - std::max(a[0], b[0]));
    const double ih = std::max(0.0, std::min(a[3], b[3]) - std::max(a[1], b[1]));
    const double inter = iw * ih;
    const double ua = (a[2] - a[0]) * (a[3] - a[1]) + (b[2] - b[0]) * (b[3] - b[1]) - inter;
    return inter / ua;
}

struct RandomCase {
    std::vector<Polygon> dets, gts, ignores;
};

RandomCase random_case(std::mt19937& gen) {
    std::uniform_real_distribution<double> pos(0, 200), size(10, 50), jitter(-8, 8);
    std::uniform_int_distribution<int> count(0, 6);
    RandomCase c;
    const int ngt = count(gen);
    for (int i = 0; i < ngt; ++i) {
        const double x = pos(gen), y = pos(gen), w = size(gen), h = size(gen);
        c.gts.push_back(rect(x, y, x + w, y + h));
        if (std::bernoulli_distribution(0.7)(gen)) {
            c.dets.push_back(rect(x + jitter(gen), y + jitter(gen), x + w + jitter(gen), y + h + jitter(gen)));
        }
    }
    const int extra = count(gen) / 2;
    for (int i = 0; i < extra; ++i) {
        const double x = pos(gen), y = pos(gen);
        c.dets.push_back(rect(x, y, x + size(gen), y + size(gen)));
    }
    if (std::bernoulli_distribution(0.3)(gen)) {
        const double x = pos(gen), y = pos(gen);
        c.ignores.push_back(rect(x, y, x + 60, y + 60));
    }
    std::shuffle(c.dets.begin(), c.dets.end(), gen);
    return c;
}

void expect_prf(const ThresholdMetrics& m, double p, double r, double f) {
    EXPECT_NEAR(m.precision, p, 1e-12);
    EXPECT_NEAR(m.recall, r, 1e-12);
    EXPECT_NEAR(m.f_measure, f, 1e-12);
}

}  // namespace

TEST(Match, IdenticalSets) {
    const std::vector<Polygon> gts{rect(0, 0, 10, 5), rect(20, 20, 40, 30), rect(50, 0, 60, 40)};
    const EvalReport r = match_polygons(gts, gts, {});
    ASSERT_EQ(r.per_threshold.size(), 2u);
    for (const auto& m : r.per_threshold) {
        expect_prf(m, 1, 1, 1);
        EXPECT_EQ(m.tp, 3u);
        for (const auto& match : m.matches) EXPECT_EQ(match.det, match.gt);
    }
}

TEST(Match, HalfRecall) {
    const std::vector<Polygon> gts{rect(0, 0, 10, 5), rect(20, 20, 40, 30)};
    const std::vector<Polygon> dets{rect(20, 20, 40, 30)};
    const EvalReport r = match_polygons(dets, gts, {});
    for (const auto& m : r.per_threshold) {
        expect_prf(m, 1.0, 0.5, 2.0 / 3.0);
        EXPECT_EQ(m.fn, 1u);
        ASSERT_EQ(m.matches.size(), 1u);
        EXPECT_EQ(m.matches[0], (Match{0, 1, 1.0}));
    }
}

TEST(Match, IgnoredDetectionEmptyGroundTruth) {
    const std::vector<Polygon> dets{rect(5, 5, 15, 15)};
    const std::vector<Polygon> ignores{rect(0, 0, 20, 20)};
    const EvalReport r = match_polygons(dets, {}, ignores);
    EXPECT_EQ(r.ignored_dets, 1u);
    for (const auto& m : r.per_threshold) {
        expect_prf(m, 1, 1, 1);
        EXPECT_EQ(m.fp, 0u);
    }
    // without the ignore region the same detection is a false positive
    for (const auto& m : match_polygons(dets, {}, {}).per_threshold) expect_prf(m, 0, 1, 0);
}

TEST(Match, EmptyConventions) {
    for (const auto& m : match_polygons({}, {}, {}).per_threshold) expect_prf(m, 1, 1, 1);
    const std::vector<Polygon> gts{rect(0, 0, 4, 4)};
    for (const auto& m : match_polygons({}, gts, {}).per_threshold) expect_prf(m, 0, 0, 0);
}

TEST(Match, IgnoreOverlapThreshold) {
    const std::vector<Polygon> ignores{rect(0, 0, 10, 10)};
    // 40% of this detection lies in the ignore region: kept
    const std::vector<Polygon> forty{rect(6, 0, 16, 10)};
    EXPECT_EQ(match_polygons(forty, {}, ignores).ignored_dets, 0u);
    // 60%: removed
    const std::vector<Polygon> sixty{rect(4, 0, 14, 10)};
    EXPECT_EQ(match_polygons(sixty, {}, ignores).ignored_dets, 1u);
    MatchConfig strict;
    strict.ignore_overlap = 0.7;
    EXPECT_EQ(match_polygons(sixty, {}, ignores, strict).ignored_dets, 0u);
}

TEST(Match, ThresholdsSplitTruePositives) {
    const std::vector<Polygon> gts{rect(0, 0, 10, 10), rect(20, 0, 30, 10)};
    // IoU 1.0 and 0.6 against their gts
    const std::vector<Polygon> dets{rect(0, 0, 10, 10), rect(20, 0, 30, 6)};
    const EvalReport r = match_polygons(dets, gts, {});
    EXPECT_EQ(r.per_threshold[0].tp, 2u);
    EXPECT_EQ(r.per_threshold[1].tp, 1u);
    EXPECT_EQ(r.per_threshold[1].fp, 1u);
    EXPECT_EQ(r.per_threshold[1].fn, 1u);
}

TEST(Match, GreedyPrefersHigherIou) {
    const std::vector<Polygon> gts{rect(0, 0, 10, 10)};
    const std::vector<Polygon> dets{rect(0, 0, 10, 7), rect(0, 0, 10, 9)};
    const EvalReport r = match_polygons(dets, gts, {});
    ASSERT_EQ(r.per_threshold[0].matches.size(), 1u);
    EXPECT_EQ(r.per_threshold[0].matches[0].det, 1u);
    EXPECT_NEAR(r.per_threshold[0].matches[0].iou, 0.9, 1e-12);
}

TEST(Match, ConfigValidation) {
    MatchConfig cfg;
    cfg.iou_thresholds = {0.75, 0.5};
    EXPECT_THROW((void)match_polygons({}, {}, {}, cfg), InvalidArgument);
    cfg.iou_thresholds = {};
    EXPECT_THROW((void)match_polygons({}, {}, {}, cfg), InvalidArgument);
    cfg.iou_thresholds = {0.0};
    EXPECT_THROW((void)match_polygons({}, {}, {}, cfg), InvalidArgument);
    cfg.iou_thresholds = {0.5, 1.0};
    EXPECT_NO_THROW((void)match_polygons({}, {}, {}, cfg));
}

TEST(Match, IouMatchesRectangleOracle) {
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> u(0, 30);
    for (int t = 0; t < 200; ++t) {
        std::array<double, 4> a{u(gen), u(gen), 0, 0}, b{u(gen), u(gen), 0, 0};
        a[2] = a[0] + 1 + u(gen);
        a[3] = a[1] + 1 + u(gen);
        b[2] = b[0] + 1 + u(gen);
        b[3] = b[1] + 1 + u(gen);
        const std::vector<Polygon> dets{rect(a[0], a[1], a[2], a[3])};
        const std::vector<Polygon> gts{rect(b[0], b[1], b[2], b[3])};
        MatchConfig cfg;
        cfg.iou_thresholds = {1e-9};
        const EvalReport r = match_polygons(dets, gts, {}, cfg);
        const double want = rect_iou(a, b);
        if (want > 1e-9) {
            ASSERT_EQ(r.per_threshold[0].matches.size(), 1u) << "trial " << t;
            EXPECT_NEAR(r.per_threshold[0].matches[0].iou, want, 1e-9);
        } else {
            EXPECT_TRUE(r.per_threshold[0].matches.empty());
        }
    }
}

TEST(Match, Invariants) {
    std::mt19937 gen(2);
    std::uniform_real_distribution<double> ang(0, 2 * M_PI), shift(-100, 100);
    MatchConfig cfg;
    cfg.iou_thresholds = {0.3, 0.5, 0.7, 0.9};
    for (int t = 0; t < 300; ++t) {
        const RandomCase c = random_case(gen);
        const EvalReport r = match_polygons(c.dets, c.gts, c.ignores, cfg);
        for (std::size_t i = 0; i < r.per_threshold.size(); ++i) {
            const auto& m = r.per_threshold[i];
            std::set<std::size_t> ds, gs;
            for (const auto& match : m.matches) {
                ASSERT_TRUE(ds.insert(match.det).second);
                ASSERT_TRUE(gs.insert(match.gt).second);
                ASSERT_GE(match.iou, m.threshold);
            }
            EXPECT_LE(m.tp, std::min(c.dets.size(), c.gts.size()));
            EXPECT_EQ(m.tp + m.fp + r.ignored_dets, c.dets.size());
            EXPECT_EQ(m.tp + m.fn, c.gts.size());
            const double s = m.precision + m.recall;
            EXPECT_NEAR(m.f_measure, s > 0 ? 2 * m.precision * m.recall / s : 0.0, 1e-15);
            if (i > 0) {
                EXPECT_GE(r.per_threshold[i - 1].tp, m.tp);
            }
        }

        // a detection far from every ground truth lowers precision and keeps recall
        std::vector<Polygon> more = c.dets;
        more.push_back(rect(1000, 1000, 1010, 1010));
        const EvalReport r2 = match_polygons(more, c.gts, c.ignores, cfg);
        for (std::size_t i = 0; i < r.per_threshold.size(); ++i) {
            EXPECT_EQ(r2.per_threshold[i].recall, r.per_threshold[i].recall);
            EXPECT_LT(r2.per_threshold[i].precision, r.per_threshold[i].precision + 1e-15);
            if (r.per_threshold[i].tp > 0) {
                EXPECT_LT(r2.per_threshold[i].precision, r.per_threshold[i].precision);
            }
        }

        // rigid motion of everything leaves the metrics unchanged
        const double a = ang(gen), dx = shift(gen), dy = shift(gen);
        auto move = [&](const std::vector<Polygon>& ps) {
            std::vector<Polygon> out;
            for (const auto& p : ps) {
                std::vector<Point2> v;
                for (const auto& q : p.vertices()) {
                    v.emplace_back(std::cos(a) * q.x - std::sin(a) * q.y + dx, std::sin(a) * q.x + std::cos(a) * q.y + dy);
                }
                out.emplace_back(v);
            }
            return out;
        };
        const EvalReport r3 = match_polygons(move(c.dets), move(c.gts), move(c.ignores), cfg);
        EXPECT_EQ(r3.ignored_dets, r.ignored_dets);
        for (std::size_t i = 0; i < r.per_threshold.size(); ++i) {
            EXPECT_EQ(r3.per_threshold[i].tp, r.per_threshold[i].tp) << "trial " << t;
            EXPECT_EQ(r3.per_threshold[i].fp, r.per_threshold[i].fp);
        }
    }
}

TEST(Match, DetectionWrapper) {
    const std::vector<Polygon> gts{rect(0, 0, 10, 10)};
    const std::vector<Detection> dets{Detection{rect(0, 0, 10, 10), 0.9, rect(2, 2, 8, 8), 2.0, ExtendMode::Adaptive}};
    const EvalReport r = match_detections(dets, gts, {});
    expect_prf(r.per_threshold[0], 1, 1, 1);
}

TEST(Aggregate, Examples) {
    const std::vector<Polygon> gts{rect(0, 0, 10, 10), rect(20, 0, 30, 10)};
    const std::vector<Polygon> one{rect(0, 0, 10, 10)};
    const EvalReport a = match_polygons(one, gts, {});  // (TP, FP, FN) = (1, 0, 1)
    const std::vector<Polygon> gt1{rect(0, 0, 10, 10)};
    const std::vector<Polygon> two{rect(0, 0, 10, 10), rect(50, 50, 60, 60)};
    const EvalReport b = match_polygons(two, gt1, {});  // (1, 1, 0)

    const std::vector<EvalReport> pair{a, b};
    const EvalReport agg = aggregate(pair);
    for (const auto& m : agg.per_threshold) {
        EXPECT_EQ(m.tp, 2u);
        EXPECT_NEAR(m.precision, 2.0 / 3.0, 1e-15);
        EXPECT_NEAR(m.recall, 2.0 / 3.0, 1e-15);
        EXPECT_EQ(m.matches.size(), 2u);
    }

    const std::vector<EvalReport> single{a};
    const EvalReport same = aggregate(single);
    for (std::size_t i = 0; i < a.per_threshold.size(); ++i) {
        EXPECT_EQ(same.per_threshold[i].tp, a.per_threshold[i].tp);
        EXPECT_EQ(same.per_threshold[i].precision, a.per_threshold[i].precision);
        EXPECT_EQ(same.per_threshold[i].recall, a.per_threshold[i].recall);
        EXPECT_EQ(same.per_threshold[i].matches, a.per_threshold[i].matches);
    }

    MatchConfig other;
    other.iou_thresholds = {0.5};
    const std::vector<EvalReport> mixed{a, match_polygons(one, gts, {}, other)};
    EXPECT_THROW((void)aggregate(mixed), ThresholdMismatch);
    other.iou_thresholds = {0.5, 0.8};
    const std::vector<EvalReport> shifted{a, match_polygons(one, gts, {}, other)};
    EXPECT_THROW((void)aggregate(shifted), ThresholdMismatch);
    EXPECT_THROW((void)aggregate({}), InvalidArgument);
}

TEST(Aggregate, SplitEqualsUnsplit) {
    std::mt19937 gen(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<RandomCase> cases;
        for (int i = 0; i < 8; ++i) cases.push_back(random_case(gen));
        std::vector<EvalReport> all;
        for (const auto& c : cases) all.push_back(match_polygons(c.dets, c.gts, c.ignores));
        const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, 7)(gen);
        const std::vector<EvalReport> head(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut));
        const std::vector<EvalReport> tail(all.begin() + static_cast<std::ptrdiff_t>(cut), all.end());
        const std::vector<EvalReport> parts{aggregate(head), aggregate(tail)};
        const EvalReport split = aggregate(parts);
        const EvalReport whole = aggregate(all);
        EXPECT_EQ(split.ignored_dets, whole.ignored_dets);
        for (std::size_t i = 0; i < whole.per_threshold.size(); ++i) {
            EXPECT_EQ(split.per_threshold[i].tp, whole.per_threshold[i].tp);
            EXPECT_EQ(split.per_threshold[i].fp, whole.per_threshold[i].fp);
            EXPECT_EQ(split.per_threshold[i].fn, whole.per_threshold[i].fn);
            EXPECT_EQ(split.per_threshold[i].precision, whole.per_threshold[i].precision);
            EXPECT_EQ(split.per_threshold[i].recall, whole.per_threshold[i].recall);
            EXPECT_EQ(split.per_threshold[i].f_measure, whole.per_threshold[i].f_measure);
            EXPECT_EQ(split.per_threshold[i].matches, whole.per_threshold[i].matches);
        }
    }
}

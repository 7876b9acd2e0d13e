#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "shrinkmask/io/annotation.hpp"
#include "shrinkmask/io/detections.hpp"
#include "shrinkmask/io/mapfile.hpp"
#include "shrinkmask/io/render.hpp"
#include "shrinkmask/synth.hpp"

using namespace shrinkmask;
using namespace shrinkmask::io;

namespace {

SceneAnnotation parse(const std::string& text) {
    std::istringstream in(text);
    return parse_annotation(in, "mem");
}

std::string parse_error(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

std::string map_error(const std::string& bytes) {
    try {
        (void)decode_map(bytes, "m");
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("shrinkmask_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Annotation, ParsesTextsIgnoresAndSize) {
    const auto ann = parse("# size 64x48\n0,0,10,0,10,10,0,10\n\n# comment\n 20 , 20,30,20,30,25 ,###\n1.5,2,8,2,8,9\n");
    EXPECT_EQ(ann.width, 64);
    EXPECT_EQ(ann.height, 48);
    ASSERT_EQ(ann.texts.size(), 2u);
    ASSERT_EQ(ann.ignores.size(), 1u);
    EXPECT_DOUBLE_EQ(area(ann.texts[0]), 100.0);
    EXPECT_DOUBLE_EQ(ann.texts[1][0].x, 1.5);
    EXPECT_DOUBLE_EQ(area(ann.ignores[0]), 25.0);
}

TEST(Annotation, SizeInferredFromCoordinates) {
    const auto ann = parse("0,0,10.2,0,10.2,7,0,7\n");
    EXPECT_EQ(ann.width, 11);
    EXPECT_EQ(ann.height, 7);
    const auto empty = parse("# nothing\n");
    EXPECT_EQ(empty.width, 1);
    EXPECT_EQ(empty.height, 1);
    EXPECT_TRUE(empty.texts.empty());
}

TEST(Annotation, SizeHeaderOnlyOnFirstLine) {
    const auto ann = parse("# hello\n# size 64x48\n0,0,4,0,4,4\n");
    EXPECT_EQ(ann.width, 4);
}

TEST(Annotation, ErrorsCarryLineNumber) {
    EXPECT_NE(parse_error("0,0,1,0,1,1\n0,0,1,0,1\n").find("mem:2"), std::string::npos);
    EXPECT_NE(parse_error("0,0,1,0\n").find("mem:1"), std::string::npos);
    EXPECT_NE(parse_error("0,0,1,0,x,1\n").find("'x'"), std::string::npos);
    EXPECT_NE(parse_error("0,0,1,0,nan,1\n"), "");
    EXPECT_NE(parse_error("0,0,1,0,inf,1\n"), "");
    EXPECT_NE(parse_error("0,0,2,2,2,0,0,2\n").find("mem:1"), std::string::npos);
    EXPECT_NE(parse_error("0,0,1,1,2,2\n"), "");
    EXPECT_NE(parse_error("# size 0x5\n"), "");
    EXPECT_NE(parse_error("# size 5by5\n"), "");
    EXPECT_NE(parse_error(",###\n"), "");
}

TEST(Annotation, SelfRoundTrip) {
    SynthConfig cfg;
    cfg.ignore_probability = 0.3;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const SceneAnnotation ann = generate_scene(cfg, i);
        std::ostringstream out;
        write_annotation(out, ann);
        const SceneAnnotation back = parse(out.str());
        ASSERT_EQ(back.width, ann.width);
        ASSERT_EQ(back.height, ann.height);
        ASSERT_EQ(back.texts.size(), ann.texts.size());
        ASSERT_EQ(back.ignores.size(), ann.ignores.size());
        for (std::size_t k = 0; k < ann.texts.size(); ++k) {
            ASSERT_TRUE(std::ranges::equal(back.texts[k].vertices(), ann.texts[k].vertices()));
        }
        for (std::size_t k = 0; k < ann.ignores.size(); ++k) {
            ASSERT_TRUE(std::ranges::equal(back.ignores[k].vertices(), ann.ignores[k].vertices()));
        }
        std::ostringstream again;
        write_annotation(again, back);
        ASSERT_EQ(again.str(), out.str());
    }
}

TEST(Annotation, FileRoundTrip) {
    const auto dir = temp_dir("ann");
    const auto ann = parse("# size 20x20\n1,1,9,1,9,9,1,9\n10,10,19,10,19,19,###\n");
    write_annotation(dir / "a.txt", ann);
    const auto back = read_annotation(dir / "a.txt");
    EXPECT_EQ(back.texts.size(), 1u);
    EXPECT_EQ(back.ignores.size(), 1u);
    EXPECT_THROW((void)read_annotation(dir / "missing.txt"), ParseError);
}

TEST(MapFile, MaskBitOrderAndHeader) {
    BitMask m(10, 2, 0);
    m(0, 0) = 1;
    m(0, 9) = 1;
    m(1, 1) = 1;
    m(1, 8) = 1;
    const std::string bytes = encode_map(m);
    ASSERT_EQ(bytes.size(), 14u + 4u);
    EXPECT_EQ(bytes.substr(0, 4), "MAPF");
    EXPECT_EQ(bytes[4], 1);
    EXPECT_EQ(bytes[5], 0);
    EXPECT_EQ(bytes.substr(6, 8), std::string("\x0a\0\0\0\x02\0\0\0", 8));
    EXPECT_EQ(static_cast<unsigned char>(bytes[14]), 0x80);
    EXPECT_EQ(static_cast<unsigned char>(bytes[15]), 0x40);
    EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 0x40);
    EXPECT_EQ(static_cast<unsigned char>(bytes[17]), 0x80);
}

TEST(MapFile, FloatLayout) {
    FloatMap f(2, 1, 0.0);
    f(0, 0) = 1.0;
    f(0, 1) = -2.5;
    const std::string bytes = encode_map(f);
    ASSERT_EQ(bytes.size(), 14u + 8u);
    EXPECT_EQ(bytes[5], 1);
    EXPECT_EQ(bytes.substr(14), std::string("\x00\x00\x80\x3f\x00\x00\x20\xc0", 8));
}

TEST(MapFile, RandomRoundTripsAreBitExact) {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> side(1, 70);
    for (int trial = 0; trial < 1000; ++trial) {
        const int w = side(gen), h = side(gen);
        if (trial % 2 == 0) {
            BitMask m(w, h, 0);
            for (auto& v : m.data()) v = static_cast<std::uint8_t>(gen() & 1u);
            const std::string bytes = encode_map(m);
            const MapData back = decode_map(bytes, "m");
            ASSERT_TRUE(std::holds_alternative<BitMask>(back));
            ASSERT_EQ(std::get<BitMask>(back), m);
            ASSERT_EQ(encode_map(std::get<BitMask>(back)), bytes);
        } else {
            FloatMap f(w, h, 0.0);
            for (auto& v : f.data()) {
                float x;
                do {
                    x = std::bit_cast<float>(static_cast<std::uint32_t>(gen()));
                } while (!std::isfinite(x));
                v = x;
            }
            const std::string bytes = encode_map(f);
            const MapData back = decode_map(bytes, "m");
            ASSERT_TRUE(std::holds_alternative<FloatMap>(back));
            const auto& g = std::get<FloatMap>(back);
            ASSERT_EQ(g.width(), w);
            ASSERT_EQ(g.height(), h);
            for (std::size_t i = 0; i < f.size(); ++i) {
                ASSERT_EQ(std::bit_cast<std::uint64_t>(g[i]), std::bit_cast<std::uint64_t>(f[i]));
            }
            ASSERT_EQ(encode_map(g), bytes);
        }
    }
}

TEST(MapFile, RejectsMalformedInput) {
    BitMask m(9, 3, 1);
    const std::string good = encode_map(m);
    EXPECT_NE(map_error(good.substr(0, 10)).find("truncated"), std::string::npos);
    std::string bad = good;
    bad[0] = 'X';
    EXPECT_NE(map_error(bad).find("magic"), std::string::npos);
    bad = good;
    bad[4] = 2;
    EXPECT_NE(map_error(bad).find("version"), std::string::npos);
    bad = good;
    bad[5] = 7;
    EXPECT_NE(map_error(bad).find("dtype"), std::string::npos);
    EXPECT_NE(map_error(good + "x").find("payload"), std::string::npos);
    EXPECT_NE(map_error(good.substr(0, good.size() - 1)).find("payload"), std::string::npos);
    bad = good;
    bad[6] = 0;
    EXPECT_NE(map_error(bad).find("size"), std::string::npos);

    FloatMap f(1, 1, 0.0);
    std::string nan_map = encode_map(f);
    nan_map.replace(14, 4, std::string("\x00\x00\xc0\x7f", 4));
    EXPECT_NE(map_error(nan_map).find("non-finite"), std::string::npos);
}

TEST(MapFile, FileHelpers) {
    const auto dir = temp_dir("map");
    BitMask m(5, 4, 0);
    m(2, 3) = 1;
    write_map(dir / "m.map", m);
    EXPECT_EQ(read_mask(dir / "m.map"), m);
    const FloatMap asf = read_float_map(dir / "m.map");
    EXPECT_EQ(asf(2, 3), 1.0);
    EXPECT_EQ(asf(0, 0), 0.0);
    write_map(dir / "f.map", asf);
    EXPECT_THROW((void)read_mask(dir / "f.map"), ParseError);
    EXPECT_THROW((void)read_map(dir / "none.map"), ParseError);
}

TEST(DetectionFile, RoundTrip) {
    DetectionFile file;
    PostprocConfig cfg;
    cfg.extend_mode = ExtendMode::Fixed;
    cfg.delta_t = 1.37;
    cfg.offset_aggregation = OffsetAggregation::RegionMean;
    cfg.simplify_tolerance = 0.0;
    file.config = cfg;
    file.detections.push_back(Detection{make_polygon({0.1, 0.2, 10.123456789, 0, 10, 10}), 0.87654321,
                                        make_polygon({2, 2, 8, 2, 8, 8}), 3.0000000001, ExtendMode::Fixed});
    file.detections.push_back(Detection{make_polygon({20, 20, 30, 20, 30, 30, 20, 30}), 1.0,
                                        make_polygon({22, 22, 28, 22, 28, 28, 22, 28}), 2.0, ExtendMode::Adaptive});
    const std::string text = format_detections(file);
    EXPECT_TRUE(text.starts_with("# shrinkmask detections v1\n# config "));
    EXPECT_NE(text.find("score=0.876543 "), std::string::npos);
    EXPECT_EQ(text.find("# timing"), std::string::npos);

    std::istringstream in(text);
    const DetectionFile back = parse_detections(in, "d");
    ASSERT_EQ(back.detections.size(), 2u);
    ASSERT_TRUE(back.config.has_value());
    EXPECT_EQ(back.config->extend_mode, ExtendMode::Fixed);
    EXPECT_EQ(back.config->delta_t, 1.37);
    EXPECT_EQ(back.config->offset_aggregation, OffsetAggregation::RegionMean);
    EXPECT_EQ(back.config->simplify_tolerance, 0.0);
    EXPECT_EQ(back.detections[0].score, 0.876543);
    EXPECT_EQ(back.detections[0].offset_used, 3.0000000001);
    EXPECT_EQ(back.detections[0].mode, ExtendMode::Fixed);
    EXPECT_TRUE(std::ranges::equal(back.detections[0].contour.vertices(), file.detections[0].contour.vertices()));
    EXPECT_TRUE(std::ranges::equal(back.detections[1].shrink_contour.vertices(),
                                   file.detections[1].shrink_contour.vertices()));
    EXPECT_EQ(format_detections(back), text);
}

TEST(DetectionFile, TimingRoundTripAtStatedPrecision) {
    DetectionFile file;
    file.timing = TimingBreakdown{0.12345678, 1.0, 2.5, 3.25, 7.0};
    std::istringstream in(format_detections(file));
    const DetectionFile back = parse_detections(in, "d");
    ASSERT_TRUE(back.timing.has_value());
    EXPECT_NEAR(back.timing->binarize_ms, 0.12345678, 5e-5);
    EXPECT_EQ(back.timing->total_ms, 7.0);
    EXPECT_TRUE(back.detections.empty());
}

TEST(DetectionFile, ParseErrors) {
    auto err = [](const std::string& s) -> std::string {
        std::istringstream in(s);
        try {
            (void)parse_detections(in, "d");
        } catch (const ParseError& e) {
            return e.what();
        }
        return "";
    };
    EXPECT_NE(err("# shrinkmask detections v1\nbogus\n").find("d:2"), std::string::npos);
    EXPECT_NE(err("det score=0.5 mode=adaptive offset=1 contour=0,0,1,0,1,1\n").find("d:1"), std::string::npos);
    EXPECT_NE(err("det score=x mode=adaptive offset=1 contour=0,0,1,0,1,1 shrink=0,0,1,0,1,1\n"), "");
    EXPECT_NE(err("det score=0.5 mode=wide offset=1 contour=0,0,1,0,1,1 shrink=0,0,1,0,1,1\n"), "");
    EXPECT_NE(err("det score=0.5 mode=fixed offset=1 contour=0,0,1,0 shrink=0,0,1,0,1,1\n"), "");
    EXPECT_NE(err("# config mode=sideways\n"), "");
    EXPECT_EQ(err("# shrinkmask detections v1\n\n# note\n"), "");
}

TEST(Render, OverlayColours) {
    const auto ann = parse("# size 40x30\n5,5,15,5,15,15,5,15\n25,5,35,5,35,15,###\n");
    const std::vector<Detection> dets{
        Detection{make_polygon({2, 20, 12, 20, 12, 28, 2, 28}), 1.0, make_polygon({4, 22, 10, 22, 10, 26}), 1.0,
                  ExtendMode::Adaptive},
        Detection{make_polygon({20, 20, 30, 20, 30, 28}), 1.0, make_polygon({22, 21, 28, 21, 28, 26}), 1.0,
                  ExtendMode::Fixed}};
    const Canvas c = render_overlay(ann, dets);
    EXPECT_EQ(c.at(10, 5), kGroundTruthColor);
    EXPECT_EQ(c.at(30, 5), kIgnoreColor);
    EXPECT_EQ(c.at(7, 20), kAdaptiveColor);
    EXPECT_EQ(c.at(25, 20), kFixedColor);
    EXPECT_EQ(c.at(10, 10), (Rgb{16, 16, 16}));

    const auto dir = temp_dir("render");
    c.write_ppm(dir / "o.ppm");
    std::ifstream in(dir / "o.ppm", std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string head = "P6\n40 30\n255\n";
    ASSERT_EQ(bytes.size(), head.size() + 40u * 30u * 3u);
    EXPECT_EQ(bytes.substr(0, head.size()), head);
    const std::size_t at = head.size() + (5u * 40u + 10u) * 3u;
    EXPECT_EQ(static_cast<unsigned char>(bytes[at + 1]), 200);
}

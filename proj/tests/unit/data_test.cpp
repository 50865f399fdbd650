#include "pdm/data.hpp"
#include "pdm/errors.hpp"

#include "toys.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace pdm {
namespace {

std::vector<SparsePattern> parse(const std::string &text, ParseOptions opts = {}) {
    std::istringstream in(text);
    return parse_dataset(in, opts);
}

std::size_t error_line(const std::string &text) {
    try {
        (void)parse(text);
    } catch (const parse_error &e) {
        return e.line();
    }
    return 0;
}

TEST(Parse, StoresIndicesZeroBased) {
    const auto p = parse("+1 1:0.5 3:2.0\n");
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].label, 1);
    EXPECT_EQ(p[0].features, (std::vector<Feature>{{0, 0.5}, {2, 2.0}}));
}

TEST(Parse, LabelOnlyLineIsZeroVector) {
    const auto p = parse("-1\n");
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0].label, -1);
    EXPECT_TRUE(p[0].features.empty());
}

TEST(Parse, RejectsDescendingIndex) {
    EXPECT_EQ(error_line("1 3:1 2:1\n"), 1u);
    EXPECT_EQ(error_line("1 1:1\n1 2:1 2:1\n"), 2u);
}

TEST(Parse, RejectsMalformedInput) {
    EXPECT_EQ(error_line("1 0:1\n"), 1u);
    EXPECT_EQ(error_line("1 1:x\n"), 1u);
    EXPECT_EQ(error_line("1 1:inf\n"), 1u);
    EXPECT_EQ(error_line("1 1:nan\n"), 1u);
    EXPECT_EQ(error_line("1\nabc 1:1\n"), 2u);
    EXPECT_EQ(error_line("1 1:1 junk\n"), 1u);
}

TEST(Parse, SkipsCommentsAndBlankLines) {
    const auto p = parse("# header\n\n+1 1:1\n   \n# more\n-1 2:1\n");
    ASSERT_EQ(p.size(), 2u);
    EXPECT_EQ(p[1].label, -1);
}

TEST(Parse, CommentLinesCountTowardLineNumbers) {
    EXPECT_EQ(error_line("# c\n\n1 2:1 1:1\n"), 3u);
}

TEST(Parse, MapsLabels) {
    const auto p = parse("2 1:1\n0 1:1\n-3 1:1\n0.5 1:1\n");
    EXPECT_EQ(p[0].label, 1);
    EXPECT_EQ(p[1].label, -1);
    EXPECT_EQ(p[2].label, -1);
    EXPECT_EQ(p[3].label, 1);
}

TEST(Parse, OneVersusRest) {
    const auto p = parse("1 1:1\n2 1:1\n3 1:1\n", ParseOptions{2.0});
    EXPECT_EQ(p[0].label, -1);
    EXPECT_EQ(p[1].label, 1);
    EXPECT_EQ(p[2].label, -1);
}

TEST(Parse, InstancesMayOmitLabels) {
    std::istringstream in("1:1 2:3\n-1 1:2\n");
    const auto inst = parse_instances(in);
    ASSERT_EQ(inst.size(), 2u);
    EXPECT_FALSE(inst[0].raw_label);
    EXPECT_EQ(inst[0].features.size(), 2u);
    EXPECT_EQ(inst[1].raw_label, -1.0);
}

TEST(Parse, DatasetRequiresLabels) { EXPECT_EQ(error_line("1:1\n"), 1u); }

TEST(Load, MissingFileIsIoError) {
    EXPECT_THROW((void)load_dataset("/nonexistent/file.txt"), io_error);
}

TEST(BuildWorking, ReflectsAndAugments) {
    const std::vector<SparsePattern> p{{{{0, 1.0}}, -1}, {{{1, 0.0}}, 1}};
    const auto ds = build_working(p, 0.0, 1.0);
    EXPECT_EQ(ds.explicit_dim(), 3u);
    std::vector<double> dense{1.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(ds.explicit_dot(dense, 0), -1.0);
    dense = {0.0, 0.0, 1.0};
    EXPECT_DOUBLE_EQ(ds.explicit_dot(dense, 0), -1.0);
    EXPECT_DOUBLE_EQ(ds.norm_sq(0), 2.0);
}

TEST(BuildWorking, RadiusIncludesExtension) {
    const std::vector<SparsePattern> p{{{{0, 3.0}, {1, 4.0}}, 1}, {{{0, 1.0}}, -1}};
    const auto ds = build_working(p, 1.0, 1.0);
    // componentwise: 9 + 16 + rho^2 + delta^2
    EXPECT_DOUBLE_EQ(ds.norm_sq(0), 9.0 + 16.0 + 1.0 + 1.0);
    EXPECT_DOUBLE_EQ(ds.radius(), std::sqrt(27.0));
    EXPECT_GE(ds.radius(), ds.rho());
}

TEST(BuildWorking, ExtensionIsPrivate) {
    const std::vector<SparsePattern> p{{{{0, 1.0}}, 1}, {{{0, 1.0}}, -1}};
    const auto ds = build_working(p, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(ds.pattern_dot(0, 1), -2.0);
    EXPECT_DOUBLE_EQ(ds.pattern_dot(0, 0), 3.0);
}

TEST(BuildWorking, ScaleAppliesToFeaturesOnly) {
    const std::vector<SparsePattern> p{{{{0, 2.0}}, 1}};
    const auto ds = build_working(p, 0.0, 1.0, 0.001);
    EXPECT_NEAR(ds.explicit_norm_sq(0), 0.002 * 0.002 + 1.0, 1e-15);
}

TEST(BuildWorking, RejectsBadParameters) {
    const std::vector<SparsePattern> p{{{{0, 1.0}}, 1}};
    EXPECT_THROW((void)build_working(p, 0.0, 0.0), invalid_parameter);
    EXPECT_THROW((void)build_working(p, -1.0, 1.0), invalid_parameter);
    EXPECT_THROW((void)build_working(p, 0.0, 1.0, 0.0), invalid_parameter);
    EXPECT_THROW((void)build_working({}, 0.0, 1.0), invalid_parameter);
}

TEST(MarginFloor, Values) {
    EXPECT_DOUBLE_EQ(margin_floor(1.0, 1), 1.0);
    EXPECT_DOUBLE_EQ(margin_floor(1.0, 4), 0.5);
    EXPECT_NEAR(margin_floor(0.3, 9), 0.1, 1e-16);
    EXPECT_THROW((void)margin_floor(0.0, 3), invalid_parameter);
    EXPECT_THROW((void)margin_floor(1.0, 0), invalid_parameter);
}

// Implicit inner products against the fully materialized extended patterns.
TEST(BuildWorking, ImplicitExtensionMatchesMaterialized) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        testing::ToySpec spec;
        spec.m = 2 + trial % 15;
        spec.dim = 1 + trial % 6;
        spec.delta = 0.1 * (trial % 7);
        spec.density = 0.6;
        spec.gap = 0.0;
        const auto toy = testing::random_toy(rng, spec);
        const auto full = testing::materialize(toy.ds);
        for (std::size_t k = 0; k < toy.ds.size(); ++k) {
            for (std::size_t j = 0; j < toy.ds.size(); ++j) {
                const double want = testing::dense_dot(full[k], full[j]);
                EXPECT_NEAR(toy.ds.pattern_dot(k, j), want, 1e-12 * std::max(1.0, std::abs(want)));
            }
            EXPECT_NEAR(toy.ds.norm_sq(k), testing::dense_dot(full[k], full[k]), 1e-12);
        }
    }
}

TEST(BuildWorking, NormIndependentOfLabel) {
    std::vector<SparsePattern> p{{{{0, 0.3}, {4, -2.0}}, 1}};
    const auto pos = build_working(p, 0.5, 1.0);
    p[0].label = -1;
    const auto neg = build_working(p, 0.5, 1.0);
    EXPECT_DOUBLE_EQ(pos.norm_sq(0), neg.norm_sq(0));
}

}  // namespace
}  // namespace pdm

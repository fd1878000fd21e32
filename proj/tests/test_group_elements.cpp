#include <gtest/gtest.h>

#include <random>

#include "klab/group_elements.hpp"
#include "test_util.hpp"

using namespace klab;

namespace {

ProjLine span(int i, int j) { return line_through(point_e(i), point_e(j)); }

GroupElement diag_el(cplx a, cplx b, cplx c) { return element_new(Mat3::diag(a, b, c)); }

// Hausdorff distance between two small line sets.
double line_gap(const std::vector<ProjLine>& a, const std::vector<ProjLine>& b) { return hausdorff(a, b); }

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InputError;
}

}  // namespace

TEST(GroupElement, LiftIsUnimodularAndScaleFree) {
    auto g = element_new(Mat3::diag(2.0, 3.0, 5.0));
    EXPECT_NEAR(std::abs(det(g.lift) - 1.0), 0.0, 1e-14);
    auto h = element_new(Mat3::diag(2.0, 3.0, 5.0) * cplx(0, -7));
    EXPECT_TRUE(element_eq(g, h));
    EXPECT_EQ(kind_of([] { element_new(Mat3::diag(1.0, 0.0, 1.0)); }), ErrorKind::SingularMatrix);
}

TEST(GroupElement, ComposeInverse) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        auto g = element_new(testutil::random_conjugator(rng));
        EXPECT_TRUE(is_identity(compose(g, inverse(g))));
        EXPECT_TRUE(is_identity(compose(inverse(g), g)));
    }
}

TEST(Classify, Examples) {
    EXPECT_EQ(classify(diag_el(0.5, 2.0, 1.0)), ElementClass::Loxodromic);
    EXPECT_EQ(classify(element_new(Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}))),
              ElementClass::Parabolic);
    EXPECT_EQ(classify(diag_el(std::polar(1.0, 0.3), std::polar(1.0, -0.1), 1.0)), ElementClass::Elliptic);
    // Jordan block with an eigenvalue of different modulus is loxodromic.
    EXPECT_EQ(classify(element_new(Mat3::rows({2.0, 0.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0}))),
              ElementClass::Loxodromic);
    EXPECT_EQ(kind_of([] { classify(identity_element()); }), ErrorKind::IdentityElement);
}

TEST(Classify, ConjugationInvariant) {
    std::mt19937_64 rng(32);
    std::vector<Mat3> samples = {Mat3::diag(0.5, 2.0, 1.0), Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}),
                                 Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0}),
                                 Mat3::diag(std::polar(1.0, 1.0), std::polar(1.0, 2.0), 1.0)};
    for (const auto& m : samples) {
        auto base = classify(element_new(m));
        for (int i = 0; i < 50; ++i) {
            Mat3 h = testutil::random_conjugator(rng);
            EXPECT_EQ(classify(element_new(h * m * adjugate(h))), base);
        }
    }
}

TEST(FixedPoints, TriangularExample) {
    const double a = 0.5, b = 1.0, c = 2.0;
    auto g = element_new(Mat3::rows({a, 0.0, 0.0}, {1.0, b, 0.0}, {0.0, 0.0, c}));
    auto f = fixed_points(g);
    ASSERT_EQ(f.points.size(), 3u);
    EXPECT_TRUE(f.lines.empty());
    std::vector<ProjPoint> expect = {point_e(1), point_e(2), point_new({a - b, 1.0, 0.0})};
    EXPECT_LT(hausdorff(f.points, expect), 1e-12);
}

TEST(FixedPoints, ReflectionFixesALine) {
    auto f = fixed_points(diag_el(2.0, 2.0, 0.25));
    ASSERT_EQ(f.lines.size(), 1u);
    ASSERT_EQ(f.points.size(), 1u);
    EXPECT_LT(fs_distance(f.lines[0], span(0, 1)), 1e-12);
    EXPECT_LT(fs_distance(f.points[0], point_e(2)), 1e-12);
}

TEST(InvariantLines, DualOfFixedPoints) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 50; ++i) {
        auto g = element_new(testutil::random_conjugator(rng));
        auto fp = fixed_points(g);
        auto il = invariant_lines(g);
        ASSERT_EQ(fp.points.size(), 3u);
        ASSERT_EQ(il.lines.size(), 3u);
        // every invariant line passes through exactly two of the fixed points
        for (const auto& l : il.lines) {
            int on = 0;
            for (const auto& p : fp.points) on += incidence_residual(p, l) < 1e-8;
            EXPECT_EQ(on, 2);
        }
    }
}

TEST(OrderOf, FiniteAndInfinite) {
    auto perm = element_new(Mat3::rows({0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}));
    EXPECT_EQ(order_of(perm), 3);
    EXPECT_EQ(order_of(diag_el(1.0, -1.0, -1.0)), 2);
    auto w = std::polar(1.0, 2 * M_PI / 7);
    EXPECT_EQ(order_of(diag_el(w, w * w, 1.0)), 7);
    // A scalar multiple of the identity is the identity of PSL(3,C).
    EXPECT_EQ(order_of(diag_el(w, w, w)), 1);
    EXPECT_FALSE(order_of(diag_el(std::polar(1.0, 1.0), 1.0, 1.0)).has_value());
    EXPECT_FALSE(order_of(diag_el(0.5, 2.0, 1.0)).has_value());
    EXPECT_FALSE(order_of(element_new(Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}))).has_value());
}

// Table of cyclic limit sets for A = diag(l1, l2, 1) with |l1| < |l2|, plus the
// Jordan cases, written out by hand.
struct CyclicCase {
    const char* name;
    Mat3 m;
    std::vector<ProjLine> lines;
    std::vector<ProjPoint> points;
};

std::vector<CyclicCase> cyclic_table() {
    const cplx u = std::polar(1.0, 0.7);
    return {
        {"l2_unit", Mat3::diag(0.5, u, 1.0), {span(1, 2)}, {point_e(0)}},
        {"l1_unit", Mat3::diag(u, 3.0, 1.0), {span(0, 2)}, {point_e(1)}},
        {"both_small", Mat3::diag(0.25, 0.5, 1.0), {span(1, 0), span(1, 2)}, {}},
        {"straddle", Mat3::diag(0.5, 2.0, 1.0), {span(0, 2), span(1, 2)}, {}},
        {"both_large", Mat3::diag(2.0, 4.0, 1.0), {span(0, 2), span(1, 0)}, {}},
        {"jordan_B", Mat3::rows({3.0, 0.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0}), {span(0, 1), span(2, 1)}, {}},
        {"unipotent", Mat3::rows({1.0, 2.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}), {span(0, 2)}, {}},
    };
}

TEST(CyclicLimitSet, CaseTable) {
    for (const auto& c : cyclic_table()) {
        SCOPED_TRACE(c.name);
        auto e = cyclic_limit_set(element_new(c.m));
        EXPECT_LT(line_gap(e.lines, c.lines), 1e-12);
        EXPECT_LT(hausdorff(e.points, c.points), 1e-12);
        EXPECT_EQ(e.points.size(), c.points.size());
    }
}

TEST(CyclicLimitSet, Equivariance) {
    std::mt19937_64 rng(34);
    for (const auto& c : cyclic_table()) {
        SCOPED_TRACE(c.name);
        for (int i = 0; i < 20; ++i) {
            Mat3 h = testutil::random_conjugator(rng);
            auto conj = cyclic_limit_set(element_new(h * c.m * adjugate(h)));
            std::vector<ProjLine> moved;
            for (const auto& l : c.lines) moved.push_back(act(h, l));
            std::vector<ProjPoint> pmoved;
            for (const auto& p : c.points) pmoved.push_back(act(h, p));
            EXPECT_LT(line_gap(conj.lines, moved), 1e-6);
            EXPECT_LT(hausdorff(conj.points, pmoved), 1e-6);
        }
    }
}

TEST(CyclicLimitSet, PowerInvariance) {
    for (const auto& c : cyclic_table()) {
        SCOPED_TRACE(c.name);
        auto g = element_new(c.m);
        auto a = cyclic_limit_set(g);
        auto b = cyclic_limit_set(compose(g, compose(g, g)));
        auto ginv = cyclic_limit_set(inverse(g));
        EXPECT_LT(line_gap(a.lines, b.lines), 1e-9);
        EXPECT_LT(line_gap(a.lines, ginv.lines), 1e-9);
    }
}

TEST(CyclicLimitSet, Errors) {
    EXPECT_EQ(kind_of([] { cyclic_limit_set(diag_el(std::polar(1.0, 1.0), 1.0, 1.0)); }),
              ErrorKind::EllipticUnsupported);
    EXPECT_EQ(kind_of([] { cyclic_limit_set(identity_element()); }), ErrorKind::IdentityElement);
}

TEST(CyclicLimitSet, FullJordanBlockAndEllipticParabolic) {
    auto j3 = cyclic_limit_set(element_new(Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0})));
    ASSERT_EQ(j3.lines.size(), 1u);
    EXPECT_LT(fs_distance(j3.lines[0], span(0, 1)), 1e-12);
    auto ep = cyclic_limit_set(
        element_new(Mat3::rows({std::polar(1.0, 0.5), 0.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0})));
    ASSERT_EQ(ep.lines.size(), 1u);
    EXPECT_LT(fs_distance(ep.lines[0], span(0, 1)), 1e-9);
}

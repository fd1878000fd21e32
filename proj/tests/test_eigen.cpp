#include <gtest/gtest.h>

#include <random>

#include "klab/eigen.hpp"
#include "test_util.hpp"

using namespace klab;

namespace {

// Real root of x^3 - x - 1 by bisection: independent of the Cardano path.
double plastic_by_bisection() {
    double lo = 1.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = (lo + hi) / 2;
        (mid * mid * mid - mid - 1 > 0 ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

// Largest singular value by power iteration on M^H M.
double sigma_max_oracle(const Mat3& m) {
    Vec3 v{1.0, 0.7, cplx(0.3, 0.2)};
    Mat3 h = adjoint(m) * m;
    double lam = 0;
    for (int i = 0; i < 2000; ++i) {
        Vec3 w = h * v;
        lam = norm(w) / norm(v);
        v = scale(w, 1.0 / norm(w));
    }
    return std::sqrt(lam);
}

double residual(const Mat3& m, cplx lam, const Vec3& v) { return norm(sub(m * v, scale(v, lam))); }

}  // namespace

TEST(Cubic, CompanionOfPlasticPolynomial) {
    Mat3 c = Mat3::rows({0.0, 0.0, 1.0}, {1.0, 0.0, 1.0}, {0.0, 1.0, 0.0});
    auto e = eigen3(c);
    double alpha = plastic_by_bisection();
    EXPECT_NEAR(alpha, 1.324717957244746, 1e-14);
    EXPECT_NEAR(std::abs(e.values[2] - alpha), 0.0, 1e-12);
    // complex pair: |beta|^2 = 1/alpha
    EXPECT_NEAR(std::abs(e.values[0]), std::sqrt(1 / alpha), 1e-12);
    EXPECT_NEAR(std::abs(e.values[0].real()), 0.662358978622373, 1e-12);
    EXPECT_NEAR(std::abs(e.values[0].imag()), 0.562279512062301, 1e-12);
}

TEST(Cubic, VietaAndCharacteristicRoots) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        Mat3 m = testutil::random_matrix(rng);
        auto e = eigen3(m);
        cplx tr = m(0, 0) + m(1, 1) + m(2, 2);
        EXPECT_LT(std::abs(e.values[0] + e.values[1] + e.values[2] - tr), 1e-9 * (1 + std::abs(tr)));
        EXPECT_LT(std::abs(e.values[0] * e.values[1] * e.values[2] - det(m)), 1e-9 * (1 + std::abs(det(m))));
        for (auto v : e.values) EXPECT_LT(std::abs(det(m - Mat3::identity() * v)), 1e-8 * std::pow(frob(m), 3));
        EXPECT_LE(std::abs(e.values[0]), std::abs(e.values[1]) + 1e-12);
        EXPECT_LE(std::abs(e.values[1]), std::abs(e.values[2]) + 1e-12);
    }
}

TEST(Eigen, ResidualsOnRandomMatrices) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 300; ++i) {
        Mat3 m = testutil::random_disk_matrix(rng);
        auto e = eigen3(m);
        if (e.ill_conditioned) continue;
        for (int k = 0; k < 3; ++k) EXPECT_LT(residual(m, e.values[k], e.vectors[k]), 1e-8 * frob(m));
        for (int k = 0; k < 3; ++k)
            EXPECT_LT(norm(sub(transpose(m) * e.left[k], scale(e.left[k], e.values[k]))), 1e-8 * frob(m));
    }
}

TEST(Eigen, DiagonalMultiplicities) {
    auto e = eigen3(Mat3::diag(2.0, 2.0, 0.25));
    ASSERT_EQ(e.groups.size(), 2u);
    EXPECT_TRUE(e.diagonalizable);
    for (const auto& g : e.groups)
        if (g.algebraic == 2) EXPECT_EQ(g.geometric, 2);
    auto s = eigen3(Mat3::identity() * cplx(3.0));
    ASSERT_EQ(s.groups.size(), 1u);
    EXPECT_EQ(s.groups[0].geometric, 3);
}

TEST(Eigen, JordanStructures) {
    Mat3 j2 = Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0});
    auto e = eigen3(j2);
    ASSERT_EQ(e.groups.size(), 1u);
    EXPECT_EQ(e.groups[0].algebraic, 3);
    EXPECT_EQ(e.groups[0].geometric, 2);
    EXPECT_FALSE(e.diagonalizable);

    Mat3 j3 = Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}, {0.0, 0.0, 1.0});
    auto f = eigen3(j3);
    EXPECT_EQ(f.groups[0].geometric, 1);
    EXPECT_FALSE(f.diagonalizable);

    Mat3 c = Mat3::rows({4.0, 0.0, 0.0}, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.5});
    auto g = eigen3(c);
    ASSERT_EQ(g.groups.size(), 2u);
    EXPECT_FALSE(g.diagonalizable);
}

TEST(Eigen, ConjugatedJordanStillDetected) {
    std::mt19937_64 rng(23);
    Mat3 j = Mat3::rows({1.0, 1.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0});
    Mat3 c = Mat3::rows({2.0, 0.0, 0.0}, {0.0, 0.5, 1.0}, {0.0, 0.0, 0.5});
    for (int i = 0; i < 100; ++i) {
        Mat3 h = testutil::random_conjugator(rng);
        Mat3 hi = adjugate(h);
        EXPECT_FALSE(eigen3(h * j * hi).diagonalizable);
        EXPECT_FALSE(eigen3(h * c * hi).diagonalizable);
        EXPECT_TRUE(eigen3(h * Mat3::diag(2.0, 2.0, 0.25) * hi).diagonalizable);
    }
}

TEST(SingularValues, MatchPowerIterationAndInvariants) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 200; ++i) {
        Mat3 m = testutil::random_matrix(rng);
        auto s = singular_values(m);
        EXPECT_NEAR(s[0], sigma_max_oracle(m), 1e-9 * s[0]);
        EXPECT_NEAR(s[0] * s[1] * s[2], std::abs(det(m)), 1e-9 * s[0] * s[0] * s[0]);
        EXPECT_NEAR(s[0] * s[0] + s[1] * s[1] + s[2] * s[2], frob2(m), 1e-9 * frob2(m));
    }
}

TEST(SingularValues, SmallValuesKeepRelativeAccuracy) {
    Mat3 m = Mat3::diag(1.0, 1e-9, 1e-13);
    auto s = singular_values(m);
    EXPECT_NEAR(s[1], 1e-9, 1e-20);
    EXPECT_NEAR(s[2], 1e-13, 1e-24);
    Mat3 r1 = Mat3::rows({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {-1.0, -2.0, -3.0});
    auto t = singular_values(r1);
    EXPECT_LT(t[1] / t[0], 1e-15);
}

TEST(SymEigen, KnownSpectrum) {
    std::array<std::array<double, 3>, 3> s{{{2, 1, 0}, {1, 2, 0}, {0, 0, 5}}};
    auto ev = sym_eigenvalues(s);
    EXPECT_NEAR(ev[0], 1, 1e-12);
    EXPECT_NEAR(ev[1], 3, 1e-12);
    EXPECT_NEAR(ev[2], 5, 1e-12);
}

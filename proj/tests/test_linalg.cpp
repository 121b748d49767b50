#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "selgrade/linalg.hpp"
#include "selgrade/util.hpp"

using namespace selgrade;

namespace {

Mat random_mat(RandomStream& rng, int n, double scale) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.next_in(-scale, scale);
    return m;
}

double det(const Mat& m) {
    Mat lu = m;
    std::array<int, kMaxDim> perm{};
    double sign;
    try {
        sign = detail::lu_decompose(lu, perm, 1e-300);
    } catch (const singular_matrix_error&) {
        return 0.0;
    }
    double d = sign;
    for (int i = 0; i < m.rows(); ++i) d *= lu(i, i);
    return d;
}

// roots of x^3 + px^2 + qx + r, trigonometric/Cardano form; independent of the QR path
std::vector<std::complex<double>> cubic_roots(double p, double q, double r) {
    const double a = q - p * p / 3.0;
    const double b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    const double shift = -p / 3.0;
    const double disc = b * b / 4.0 + a * a * a / 27.0;
    std::vector<std::complex<double>> roots;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double u = std::cbrt(-b / 2.0 + sq);
        const double v = std::cbrt(-b / 2.0 - sq);
        roots.emplace_back(u + v + shift, 0.0);
        roots.emplace_back(-(u + v) / 2.0 + shift, std::sqrt(3.0) / 2.0 * (u - v));
        roots.emplace_back(-(u + v) / 2.0 + shift, -std::sqrt(3.0) / 2.0 * (u - v));
    } else {
        const double m = 2.0 * std::sqrt(std::max(0.0, -a / 3.0));
        const double arg = std::clamp(3.0 * b / (a * m == 0.0 ? 1.0 : a * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.emplace_back(m * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift, 0.0);
    }
    return roots;
}

}  // namespace

TEST_CASE("expm identity and closed forms") {
    RandomStream rng(11);
    Mat m = random_mat(rng, 3, 2.0);
    Mat e0 = expm(m, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(e0(i, j) == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-15));

    Mat d = expm(Mat::diagonal({1.0, -1.0}), 1.0);
    CHECK(d(0, 0) == Catch::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(d(1, 1) == Catch::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(std::abs(d(0, 1)) < 1e-14);

    Mat nil = expm(Mat(2, 2, {0, 1, 0, 0}), 1.0);
    CHECK(nil(0, 0) == Catch::Approx(1.0));
    CHECK(nil(0, 1) == Catch::Approx(1.0));
    CHECK(nil(1, 0) == Catch::Approx(0.0).margin(1e-16));
    CHECK(nil(1, 1) == Catch::Approx(1.0));
}

TEST_CASE("expm rejects non-square input") {
    CHECK_THROWS_AS(expm(Mat(2, 3), 1.0), dimension_error);
}

TEST_CASE("expm cocycle property") {
    RandomStream rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + rng.next_index(3);
        Mat m = random_mat(rng, n, 2.0 / n);
        double s = rng.next_in(-2.0, 2.0);
        double t = rng.next_in(-2.0, 2.0);
        Mat lhs = expm(m, s + t);
        Mat rhs = expm(m, s) * expm(m, t);
        CHECK((lhs - rhs).max_abs() < 1e-10);
    }
}

TEST_CASE("expm Liouville identity") {
    RandomStream rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + rng.next_index(3);
        Mat m = random_mat(rng, n, 2.0 / n);
        double t = rng.next_in(-2.0, 2.0);
        CHECK(det(expm(m, t)) == Catch::Approx(std::exp(t * m.trace())).epsilon(1e-8));
    }
}

TEST_CASE("solve_linear basic cases") {
    Vec b{1.0, 2.0, 3.0};
    Vec x = solve_linear(Mat::identity(3), b);
    CHECK(x[0] == 1.0);
    CHECK(x[1] == 2.0);
    CHECK(x[2] == 3.0);

    Vec y = solve_linear(Mat::diagonal({1.0, -1.0}), Vec{1.0, 1.0});
    CHECK(y[0] == Catch::Approx(1.0));
    CHECK(y[1] == Catch::Approx(-1.0));

    CHECK_THROWS_AS(solve_linear(Mat(2, 2, {1, 2, 2, 4}), Vec{1.0, 1.0}), singular_matrix_error);
}

TEST_CASE("solve_linear residual bound") {
    RandomStream rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + rng.next_index(4);
        Mat m = random_mat(rng, n, 2.0);
        Vec b(n);
        for (int i = 0; i < n; ++i) b[i] = rng.next_in(-2.0, 2.0);
        Vec x;
        try {
            x = solve_linear(m, b);
        } catch (const singular_matrix_error&) {
            continue;
        }
        CHECK((m * x - b).norm() <= 1e-10 * (1.0 + b.norm()));
    }
}

TEST_CASE("eigen on fixed matrices") {
    Spectrum s = eigen(Mat::diagonal({1.0, -1.0}));
    REQUIRE(s.groups.size() == 2);
    CHECK(s.groups[0].real_part == Catch::Approx(-1.0));
    CHECK(s.groups[0].multiplicity == 1);
    CHECK(s.groups[1].real_part == Catch::Approx(1.0));
    CHECK(s.groups[1].multiplicity == 1);

    Spectrum nil = eigen(Mat(2, 2, {0, 1, 0, 0}));
    REQUIRE(nil.groups.size() == 1);
    CHECK(nil.groups[0].real_part == Catch::Approx(0.0).margin(1e-9));
    CHECK(nil.groups[0].multiplicity == 2);

    Spectrum rot = eigen(Mat(2, 2, {0, -1, 1, 0}));
    REQUIRE(rot.eigenvalues.size() == 2);
    CHECK(rot.eigenvalues[0].imag() == Catch::Approx(-1.0));
    CHECK(rot.eigenvalues[1].imag() == Catch::Approx(1.0));
    REQUIRE(rot.groups.size() == 1);
    CHECK(rot.groups[0].multiplicity == 2);
}

TEST_CASE("eigen of 3x3 matches cubic-root oracle") {
    RandomStream rng(51);
    for (int trial = 0; trial < 200; ++trial) {
        Mat m = random_mat(rng, 3, 2.0);
        // characteristic polynomial x^3 - tr x^2 + m2 x - det, via principal minors
        double tr = m.trace();
        double m2 = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) m2 += m(i, i) * m(j, j) - m(i, j) * m(j, i);
        double d = det(m);
        auto expected = cubic_roots(-tr, m2, -d);
        auto sort_c = [](std::vector<std::complex<double>>& v) {
            std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
                return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
        };
        sort_c(expected);
        Spectrum s = eigen(m);
        REQUIRE(s.eigenvalues.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(s.eigenvalues[i] - expected[i]) < 1e-7 * (1.0 + std::abs(expected[i])));
        }
    }
}

TEST_CASE("eigen invariants on random matrices") {
    RandomStream rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + rng.next_index(4);
        Mat m = random_mat(rng, n, 2.0);
        Spectrum s = eigen(m);
        REQUIRE(static_cast<int>(s.eigenvalues.size()) == n);

        double sum = 0.0;
        for (const auto& ev : s.eigenvalues) sum += ev.real();
        CHECK(sum == Catch::Approx(m.trace()).margin(1e-8 * (1.0 + std::abs(m.trace()))));

        int mult = 0;
        for (const auto& g : s.groups) mult += g.multiplicity;
        CHECK(mult == n);
        for (size_t i = 1; i < s.groups.size(); ++i)
            CHECK(s.groups[i].real_part - s.groups[i - 1].real_part > kEigGroupTol);
    }
}

TEST_CASE("eigen characteristic polynomial residual") {
    RandomStream rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + rng.next_index(4);
        Mat m = random_mat(rng, n, 2.0);
        // coefficients by Faddeev-LeVerrier on the balanced copy
        Mat b = m;
        detail::balance(b);
        std::array<double, kMaxDim + 1> c{};
        c[0] = 1.0;
        Mat mk = Mat::identity(n);
        for (int k = 1; k <= n; ++k) {
            mk = b * mk;
            c[k] = -mk.trace() / k;
            for (int i = 0; i < n; ++i) mk(i, i) += c[k];
        }
        Spectrum s = eigen(m);
        for (const auto& ev : s.eigenvalues) {
            std::complex<double> p = 0.0;
            for (int k = 0; k <= n; ++k) p = p * ev + c[k];
            CHECK(std::abs(p) < 1e-8);
        }
    }
}

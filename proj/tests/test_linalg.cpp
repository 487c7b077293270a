#include <cmath>

#include "doctest.h"
#include "levyhit/linalg.hpp"
#include "levyhit/rng.hpp"

using namespace levyhit;

TEST_CASE("solve 2x2 with known inverse") {
    Matrix a(2, 2);
    a(0, 0) = 2.0; a(0, 1) = 1.0;
    a(1, 0) = 1.0; a(1, 1) = 3.0;
    // det = 5; solution of a x = (1, 2) is (1/5, 3/5)
    auto r = solve_checked(a, {1.0, 2.0});
    CHECK(r.x[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(r.x[1] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(r.residual < 1e-14);
}

TEST_CASE("inverse reproduces identity") {
    PathRng rng(42, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 6;
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = 2.0 * rng.uniform() - 1.0 + (i == j ? 3.0 : 0.0);
        LuFactor lu(a);
        Matrix inv = lu.inverse();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += a(i, k) * inv(k, j);
                CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("condition number of identity and of a scaled identity") {
    Matrix id = Matrix::identity(4);
    CHECK(LuFactor(id).condition() == doctest::Approx(1.0));
    Matrix s(3, 3);
    s(0, 0) = 100.0; s(1, 1) = 1.0; s(2, 2) = 0.01;
    CHECK(LuFactor(s).condition() == doctest::Approx(1e4).epsilon(1e-12));
}

TEST_CASE("singular matrix raises") {
    Matrix a(2, 2);
    a(0, 0) = 1.0; a(0, 1) = 2.0;
    a(1, 0) = 2.0; a(1, 1) = 4.0;
    CHECK_THROWS_AS(solve_checked(a, {1.0, 1.0}), singular_matrix);
}

TEST_CASE("condition limit enforcement") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 1.0 + 1e-14;
    CHECK_THROWS_AS(solve_checked(a, {1.0, 1.0}, 1e6), singular_matrix);
}

TEST_CASE("pivoting handles zero leading entry") {
    Matrix a(2, 2);
    a(0, 0) = 0.0; a(0, 1) = 1.0;
    a(1, 0) = 1.0; a(1, 1) = 0.0;
    auto r = solve_checked(a, {3.0, 5.0});
    CHECK(r.x[0] == doctest::Approx(5.0));
    CHECK(r.x[1] == doctest::Approx(3.0));
}

TEST_CASE("mat_vec and norm_inf") {
    Matrix a(2, 3);
    a(0, 0) = 1.0; a(0, 1) = -2.0; a(0, 2) = 3.0;
    a(1, 0) = 0.0; a(1, 1) = 4.0;  a(1, 2) = -1.0;
    auto y = mat_vec(a, {1.0, 1.0, 1.0});
    CHECK(y[0] == doctest::Approx(2.0));
    CHECK(y[1] == doctest::Approx(3.0));
    CHECK(a.norm_inf() == doctest::Approx(6.0));
}

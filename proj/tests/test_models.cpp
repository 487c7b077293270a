#include <cmath>
#include <complex>

#include "doctest.h"
#include "levyhit/models.hpp"
#include "levyhit/rng.hpp"

using namespace levyhit;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("psi: Brownian motion") {
    auto bm = ProcessModel::brownian(1.0, 0.0);
    CHECK(bm.psi(2.0).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(bm.psi(2.0).imag() == 0.0);
    CHECK(bm.psi(0.0) == std::complex<double>(0.0, 0.0));

    auto drift = ProcessModel::brownian(2.0, -0.5);
    CHECK(drift.psi(3.0).real() == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(drift.psi(3.0).imag() == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("psi: Hermitian symmetry and nonnegative real part") {
    const std::vector<ProcessModel> models = {
        ProcessModel::brownian(1.0, 0.0),
        ProcessModel::brownian(0.7, 1.3),
        ProcessModel::stable_beta(1.5, 0.0),
        ProcessModel::stable_beta(1.2, 0.5),
        ProcessModel::stable_beta(1.8, -1.0),
        ProcessModel::spectrally_negative_stable(1.5),
    };
    for (const auto& m : models) {
        for (double lam : {0.1, 0.5, 1.0, 3.0, 17.0, 123.0}) {
            const auto p = m.psi(lam);
            const auto q = m.psi(-lam);
            CHECK(q.real() == doctest::Approx(p.real()).epsilon(1e-13));
            CHECK(q.imag() == doctest::Approx(-p.imag()).epsilon(1e-13));
            CHECK(p.real() >= 0.0);
        }
    }
}

TEST_CASE("psi: symmetric stable is real") {
    auto m = ProcessModel::stable(1.5, 0.5, 0.5);
    for (double lam : {0.2, 1.0, 8.0}) CHECK(m.psi(lam).imag() == 0.0);
}

TEST_CASE("classification") {
    CHECK(ProcessModel::brownian(1.0, 0.0).is_recurrent());
    CHECK_FALSE(ProcessModel::brownian(1.0, 1.0).is_recurrent());
    CHECK(ProcessModel::stable_beta(1.5, 0.5).is_recurrent());
    CHECK(ProcessModel::spectrally_negative_stable(1.3).is_recurrent());

    CustomExponent ce;
    ce.psi = [](double lam) { return std::complex<double>(lam * lam, 0.0); };
    CHECK_THROWS_AS(ProcessModel::custom(ce).recurrence(),
                    classification_unavailable);
    ce.recurrence = Recurrence::Recurrent;
    CHECK(ProcessModel::custom(ce).is_recurrent());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ProcessModel::brownian(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProcessModel::stable(1.0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ProcessModel::stable(2.0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ProcessModel::stable(1.5, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProcessModel::stable_beta(1.5, 1.5), std::invalid_argument);
}

TEST_CASE("closed_form_h: Brownian motion") {
    auto bm = ProcessModel::brownian(1.0, 0.0);
    CHECK(*bm.closed_form_h(-3.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(*bm.closed_form_h(0.0) == 0.0);
    auto bm2 = ProcessModel::brownian(2.0, 0.0);
    CHECK(*bm2.closed_form_h(3.0) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("closed_form_h: stable") {
    auto m = ProcessModel::stable_beta(1.5, 0.0);
    // independent evaluation of K(alpha) for beta = 0:
    // K = -pi / (alpha tan(pi alpha / 2)), c_sum = 1
    const double K = -kPi / (1.5 * std::tan(kPi * 0.75));
    CHECK(K > 0.0);
    CHECK(m.K_alpha() == doctest::Approx(K).epsilon(1e-14));
    CHECK(*m.closed_form_h(0.25) == doctest::Approx(0.5 / K).epsilon(1e-14));
    CHECK(*m.closed_form_h(-0.25) == doctest::Approx(0.5 / K).epsilon(1e-14));
}

TEST_CASE("closed_form_h: one-sided at beta = +-1") {
    auto up = ProcessModel::stable_beta(1.5, 1.0);  // no negative jumps hit from below
    CHECK(*up.closed_form_h(2.0) == 0.0);
    CHECK(*up.closed_form_h(-2.0) > 0.0);
    auto dn = ProcessModel::stable_beta(1.5, -1.0);
    CHECK(*dn.closed_form_h(-2.0) == 0.0);
    CHECK(*dn.closed_form_h(2.0) > 0.0);
}

TEST_CASE("closed_form_h: nonnegative and subadditive on a random grid") {
    const std::vector<ProcessModel> models = {
        ProcessModel::brownian(1.0, 0.0),   ProcessModel::brownian(1.0, 0.7),
        ProcessModel::brownian(0.5, -1.2),  ProcessModel::stable_beta(1.5, 0.3),
        ProcessModel::stable_beta(1.2, -0.8),
        ProcessModel::spectrally_negative_stable(1.7),
    };
    PathRng rng(987654321, 0);
    for (const auto& m : models) {
        for (int k = 0; k < 200; ++k) {
            const double x = 10.0 * (rng.uniform() - 0.5);
            const double y = 10.0 * (rng.uniform() - 0.5);
            const double hx = *m.closed_form_h(x);
            const double hy = *m.closed_form_h(y);
            const double hxy = *m.closed_form_h(x + y);
            CHECK(hx >= 0.0);
            CHECK(hxy <= hx + hy + 1e-12 * (1.0 + hx + hy));
        }
        CHECK(*m.closed_form_h(0.0) == 0.0);
    }
}

TEST_CASE("stable_K positive across the parameter square") {
    for (double alpha : {1.05, 1.2, 1.5, 1.8, 1.95})
        for (double beta : {-1.0, -0.5, 0.0, 0.5, 1.0})
            CHECK(stable_K(alpha, beta, 1.0) > 0.0);
}

TEST_CASE("kappa") {
    CHECK(ProcessModel::brownian(1.0, 1.0).kappa() == doctest::Approx(1.0));
    CHECK(ProcessModel::brownian(1.0, 2.0).kappa() == doctest::Approx(2.0));
    CHECK_THROWS_AS(ProcessModel::brownian(1.0, 0.0).kappa(), std::domain_error);
}

TEST_CASE("kappa consistency with h for drifting Brownian motion") {
    // h(x) = (1/kappa) P_x(T_0 = infinity); for mu > 0, sigma2 = s the
    // escape probability from x > 0 is 1 - e^{-2 mu x / s}.
    for (double mu : {0.5, 1.0, 2.0}) {
        for (double s : {1.0, 2.0}) {
            auto m = ProcessModel::brownian(s, mu);
            for (double x : {0.3, 1.0, 4.0}) {
                const double escape = 1.0 - std::exp(-2.0 * mu * x / s);
                CHECK(*m.closed_form_h(x) ==
                      doctest::Approx(escape / m.kappa()).epsilon(1e-13));
            }
            CHECK(*m.closed_form_h(-1.0) == 0.0);
        }
    }
}

TEST_CASE("scale_function") {
    auto bm = ProcessModel::brownian(1.0, 0.0);
    CHECK(bm.scale_function(1.0) == doctest::Approx(2.0));
    CHECK(bm.scale_function(-0.5) == 0.0);
    auto drift = ProcessModel::brownian(1.0, 1.0);
    CHECK(drift.scale_function(1.0) ==
          doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    auto sn = ProcessModel::spectrally_negative_stable(1.5);
    CHECK(sn.scale_function(4.0) ==
          doctest::Approx(2.0 / std::tgamma(1.5)).epsilon(1e-14));
    CHECK(sn.scale_function(-1.0) == 0.0);
    CHECK_THROWS_AS(ProcessModel::stable_beta(1.5, 0.0).scale_function(1.0),
                    unsupported_family);
}

TEST_CASE("spectrally negative stable h equals the scale function") {
    // The beta = -1 stable normalization must reproduce W = x^{alpha-1}/Gamma(alpha):
    // K(alpha) at beta = -1 with c_sum chosen so Psi = -(i lambda)^alpha.
    auto sn = ProcessModel::spectrally_negative_stable(1.6);
    for (double x : {0.5, 1.0, 3.0})
        CHECK(*sn.closed_form_h(x) ==
              doctest::Approx(sn.scale_function(x)).epsilon(1e-14));
    CHECK(*sn.closed_form_h(-1.0) == 0.0);
}

TEST_CASE("spectrally negative stable psi matches -(i lambda)^alpha") {
    const double a = 1.5;
    auto sn = ProcessModel::spectrally_negative_stable(a);
    for (double lam : {0.3, 1.0, 5.0}) {
        const auto expect =
            -std::pow(std::complex<double>(0.0, lam), std::complex<double>(a, 0.0));
        const auto got = sn.psi(lam);
        CHECK(got.real() == doctest::Approx(expect.real()).epsilon(1e-12));
        CHECK(got.imag() == doctest::Approx(expect.imag()).epsilon(1e-12));
        CHECK(got.real() > 0.0);
    }
}

TEST_CASE("stable scale constant") {
    // Psi(lambda) = d |lambda|^alpha (1 - i beta tan(pi alpha/2) sgn lambda)
    // with d = -Gamma(-alpha) cos(pi alpha / 2) (c+ + c-).
    auto m = ProcessModel::stable(1.5, 0.75, 0.25);
    const double d = -std::tgamma(-1.5) * std::cos(kPi * 0.75);
    CHECK(m.stable_scale() == doctest::Approx(d).epsilon(1e-13));
    CHECK(m.psi(2.0).real() ==
          doctest::Approx(d * std::pow(2.0, 1.5)).epsilon(1e-13));
    CHECK(m.beta() == doctest::Approx(0.5));
}

#include <cmath>
#include <complex>

#include "doctest.h"
#include "levyhit/hitting.hpp"
#include "levyhit/mc.hpp"
#include "levyhit/rng.hpp"

using namespace levyhit;

TEST_CASE("path rng: deterministic and stream-separated") {
    PathRng a(1, 0), b(1, 0), c(1, 1);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() == b.next_u64());
    CHECK(PathRng(1, 0).next_u64() != c.next_u64());
    PathRng u(42, 7);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("bm hitting: gambler's ruin within 3 standard errors") {
    PathConfig cfg;
    cfg.paths = 100000;
    auto rep = simulate_bm_hitting(2.0, PointSet({0.0, 1.0, 3.0}), cfg);
    CHECK(rep.estimates[0] == 0.0);
    CHECK(std::abs(rep.estimates[1] - 0.5) < 3.0 * rep.std_errors[1]);
    CHECK(std::abs(rep.estimates[2] - 0.5) < 3.0 * rep.std_errors[2]);
    CHECK(rep.censored_fraction == 0.0);
}

TEST_CASE("bm hitting with drift matches the scale-function law") {
    PathConfig cfg;
    cfg.paths = 100000;
    const double p0 = 1.0 / (1.0 + std::exp(1.0));
    auto rep = simulate_bm_hitting(0.5, PointSet({0.0, 1.0}), cfg, 1.0, 1.0);
    CHECK(std::abs(rep.estimates[0] - p0) < 3.0 * rep.std_errors[0]);
    CHECK(std::abs(rep.estimates[1] - (1.0 - p0)) < 3.0 * rep.std_errors[1]);
}

TEST_CASE("bm hitting: start on a point is exact") {
    PathConfig cfg;
    cfg.paths = 1000;
    auto rep = simulate_bm_hitting(1.0, PointSet({0.0, 1.0, 3.0}), cfg);
    CHECK(rep.estimates == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("bm hitting: escape mass outside the hull") {
    PathConfig cfg;
    cfg.paths = 200000;
    // drift +1 starting above the single target at distance 1:
    // hit probability e^{-2}
    auto rep = simulate_bm_hitting(1.0, PointSet({0.0}), cfg, 1.0, 1.0);
    const double p = std::exp(-2.0);
    CHECK(std::abs(rep.estimates[0] - 1.0) < 1e-12);  // normalized over decided
    CHECK(std::abs((1.0 - rep.censored_fraction) - p) <
          3.0 * std::sqrt(p * (1.0 - p) / 200000.0));
}

TEST_CASE("bm hitting: parallel and serial tallies are identical") {
    PathConfig cfg;
    cfg.paths = 50000;
    cfg.seed = 777;
    auto par = simulate_bm_hitting(2.0, PointSet({0.0, 1.0, 3.0}), cfg);
    auto ser = simulate_bm_hitting_serial(2.0, PointSet({0.0, 1.0, 3.0}), cfg);
    CHECK(par.counts == ser.counts);
    CHECK(par.estimates == ser.estimates);
    auto par2 = simulate_bm_hitting(2.0, PointSet({0.0, 1.0, 3.0}), cfg);
    CHECK(par.counts == par2.counts);
}

TEST_CASE("stable sampler: empirical characteristic function") {
    const double alpha = 1.5;
    for (double beta : {0.0, 0.5}) {
        auto m = ProcessModel::stable_beta(alpha, beta);
        const double d = m.stable_scale();
        const long long n = 200000;
        PathRng rng(2024, 3);
        std::vector<double> xs(n);
        const double scale = std::pow(d, 1.0 / alpha);  // unit time increment
        for (auto& x : xs)
            x = scale * stable_standard_sample(alpha, beta, rng.uniform(),
                                               rng.uniform());
        const double tol = 4.0 / std::sqrt(static_cast<double>(n));
        for (double lam : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            std::complex<double> ecf(0.0, 0.0);
            for (double x : xs)
                ecf += std::complex<double>(std::cos(lam * x), std::sin(lam * x));
            ecf /= static_cast<double>(n);
            const auto expect = std::exp(-m.psi(lam));
            CHECK(std::abs(ecf - expect) < tol);
        }
    }
}

TEST_CASE("stable eps hitting: symmetry start point") {
    auto m = ProcessModel::stable_beta(1.5, 0.0);
    PathConfig cfg;
    cfg.paths = 20000;
    cfg.eps = 5e-3;
    cfg.step = 2e-3;
    cfg.horizon = 30.0;
    auto rep = simulate_stable_eps_hitting(m, 0.5, PointSet({0.0, 1.0}), cfg);
    CHECK(std::abs(rep.estimates[0] - 0.5) < 0.03);
    CHECK(rep.censored_fraction < 0.5);
}

TEST_CASE("stable eps hitting: parallel equals serial, seeds reproduce") {
    auto m = ProcessModel::stable_beta(1.5, 0.0);
    PathConfig cfg;
    cfg.paths = 4000;
    cfg.eps = 5e-3;
    cfg.step = 2e-3;
    cfg.horizon = 10.0;
    cfg.seed = 31337;
    auto par = simulate_stable_eps_hitting(m, 0.25, PointSet({0.0, 1.0}), cfg);
    auto ser = simulate_stable_eps_hitting_serial(m, 0.25, PointSet({0.0, 1.0}),
                                                  cfg);
    CHECK(par.counts == ser.counts);
    auto again = simulate_stable_eps_hitting(m, 0.25, PointSet({0.0, 1.0}), cfg);
    CHECK(par.counts == again.counts);
}

TEST_CASE("stable eps extrapolation approaches the analytic law") {
    auto m = ProcessModel::stable_beta(1.5, 0.0);
    ResolventEvaluator ev(m);
    const double expect = two_point(ev, 0.25, 0.0, 1.0);
    CHECK(expect == doctest::Approx(0.6830127).epsilon(1e-6));
    PathConfig cfg;
    cfg.paths = 30000;
    cfg.eps = 2e-3;
    cfg.step = 1e-3;
    cfg.horizon = 30.0;
    auto rep = simulate_stable_eps_extrapolated(m, 0.25, PointSet({0.0, 1.0}),
                                                cfg);
    CHECK(rep.eps_schedule.size() == 3);
    CHECK(std::abs(rep.estimates[0] - expect) < 0.02);
    CHECK(std::abs(rep.estimates[0] + rep.estimates[1] - 1.0) < 1e-12);
}

TEST_CASE("path config validation") {
    PathConfig bad;
    bad.paths = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    PathConfig eps;
    eps.eps = 0.4;
    auto m = ProcessModel::stable_beta(1.5, 0.0);
    CHECK_THROWS_AS(
        simulate_stable_eps_hitting(m, 0.5, PointSet({0.0, 0.5}), eps),
        std::invalid_argument);
}

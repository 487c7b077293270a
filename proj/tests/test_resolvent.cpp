#include <cmath>

#include "doctest.h"
#include "levyhit/models.hpp"
#include "levyhit/resolvent.hpp"

using namespace levyhit;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Brownian motion with drift mu and variance s:
// r_q(x) = exp((mu x - |x| sqrt(mu^2 + 2 q s)) / s) / sqrt(mu^2 + 2 q s)
double bm_resolvent(double q, double x, double mu, double s) {
    const double root = std::sqrt(mu * mu + 2.0 * q * s);
    return std::exp((mu * x - std::abs(x) * root) / s) / root;
}

}  // namespace

TEST_CASE("resolvent density: standard Brownian motion closed form") {
    ResolventEvaluator ev(ProcessModel::brownian(1.0, 0.0));
    for (double q : {0.25, 1.0, 4.0}) {
        for (double x : {-2.5, -1.0, 0.0, 0.3, 1.0, 3.0}) {
            const double expect = bm_resolvent(q, x, 0.0, 1.0);
            CHECK(ev.resolvent_density(q, x) ==
                  doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("resolvent density: Brownian motion with drift (asymmetric)") {
    for (double mu : {0.5, -1.0}) {
        ResolventEvaluator ev(ProcessModel::brownian(2.0, mu));
        for (double q : {0.5, 2.0}) {
            for (double x : {-1.5, -0.25, 0.75, 2.0}) {
                const double expect = bm_resolvent(q, x, mu, 2.0);
                CHECK(ev.resolvent_density(q, x) ==
                      doctest::Approx(expect).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("resolvent density at zero: symmetric stable scaling identity") {
    // r_q(0) = q^{1/alpha - 1} d^{-1/alpha} / (alpha sin(pi/alpha)),
    // by substituting u = (d/q)^{1/alpha} lambda in the inversion integral.
    for (double alpha : {1.2, 1.5, 1.8}) {
        auto m = ProcessModel::stable_beta(alpha, 0.0);
        const double d = m.stable_scale();
        ResolventEvaluator ev(m);
        for (double q : {0.5, 1.0, 3.0}) {
            const double expect = std::pow(q, 1.0 / alpha - 1.0) *
                                  std::pow(d, -1.0 / alpha) /
                                  (alpha * std::sin(kPi / alpha));
            CHECK(ev.resolvent_density(q, 0.0) ==
                  doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("resolvent density: mirror symmetry under c+ <-> c-") {
    ResolventEvaluator ev_p(ProcessModel::stable(1.5, 0.8, 0.2));
    ResolventEvaluator ev_m(ProcessModel::stable(1.5, 0.2, 0.8));
    for (double q : {0.5, 2.0})
        for (double x : {0.4, 1.3})
            CHECK(ev_p.resolvent_density(q, x) ==
                  doctest::Approx(ev_m.resolvent_density(q, -x)).epsilon(1e-8));
}

TEST_CASE("resolvent difference equals the difference of densities") {
    for (const auto& m : {ProcessModel::brownian(1.0, 0.0),
                          ProcessModel::stable_beta(1.5, 0.5)}) {
        ResolventEvaluator ev(m);
        for (double q : {0.25, 1.0}) {
            for (double x : {-1.5, 0.5, 2.0}) {
                const double direct =
                    ev.resolvent_density(q, 0.0) - ev.resolvent_density(q, -x);
                CHECK(ev.resolvent_difference(q, x) ==
                      doctest::Approx(direct).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("h integral: Brownian motion gives |x| / sigma2") {
    for (double s : {1.0, 2.0}) {
        ResolventEvaluator ev(ProcessModel::brownian(s, 0.0));
        for (double x = -5.0; x <= 5.0; x += 1.25) {
            if (x == 0.0) continue;
            CHECK(ev.h_tsukada(x) ==
                  doctest::Approx(std::abs(x) / s).epsilon(1e-8));
        }
    }
}

TEST_CASE("h integral: stable closed-form calibration") {
    for (double alpha : {1.2, 1.5, 1.8}) {
        for (double beta : {-0.5, 0.0, 0.5}) {
            auto m = ProcessModel::stable_beta(alpha, beta);
            ResolventEvaluator ev(m);
            for (double x : {-2.0, -0.5, 0.7, 1.0, 3.0}) {
                const double expect = *m.closed_form_h(x);
                CHECK(ev.h_tsukada(x) == doctest::Approx(expect).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("h integral: spectrally negative stable") {
    auto m = ProcessModel::spectrally_negative_stable(1.5);
    ResolventEvaluator ev(m);
    CHECK(ev.h_tsukada(2.0) ==
          doctest::Approx(*m.closed_form_h(2.0)).epsilon(1e-6));
    CHECK(std::abs(ev.h_tsukada(-2.0)) < 1e-6);
}

TEST_CASE("h limit agrees with the h integral") {
    for (const auto& m :
         {ProcessModel::brownian(1.0, 0.0), ProcessModel::stable_beta(1.5, 0.0),
          ProcessModel::stable_beta(1.8, 0.5)}) {
        ResolventEvaluator ev(m);
        for (double x : {-1.5, 0.5, 2.0}) {
            const double ht = ev.h_tsukada(x);
            const double hl = ev.h_limit(x);
            CHECK(hl == doctest::Approx(ht).epsilon(1e-5));
        }
    }
}

TEST_CASE("h dispatch") {
    ResolventEvaluator bm(ProcessModel::brownian(1.0, 0.0));
    CHECK(bm.h_tagged(2.0).method == HMethod::ClosedForm);
    CHECK(bm.h(2.0) == doctest::Approx(2.0));

    CustomExponent ce;
    ce.psi = [](double lam) {
        return std::complex<double>(lam * lam, 0.0);  // BM with sigma2 = 2
    };
    ce.recurrence = Recurrence::Recurrent;
    ResolventEvaluator cu(ProcessModel::custom(ce));
    const auto tagged = cu.h_tagged(3.0);
    CHECK(tagged.method == HMethod::Tsukada);
    CHECK(tagged.value == doctest::Approx(1.5).epsilon(1e-7));
}

TEST_CASE("h_B and excursion rates: recurrent closed forms") {
    ResolventEvaluator bm(ProcessModel::brownian(1.0, 0.0));
    CHECK(bm.h_B(2.0) == doctest::Approx(4.0));
    CHECK(bm.excursion_rate(2.0) == doctest::Approx(0.25));
    CHECK(bm.excursion_rate(-2.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(bm.h_B(0.0), std::domain_error);

    // stable: h_B(a) = (h(a) + h(-a)) = 2 |a|^{alpha-1} / K for beta = 0
    auto st = ProcessModel::stable_beta(1.5, 0.0);
    ResolventEvaluator ev(st);
    const double K = st.K_alpha();
    CHECK(ev.h_B(4.0) == doctest::Approx(4.0 / K).epsilon(1e-12));
}

TEST_CASE("transient Brownian motion: kappa and excursion rate") {
    auto m = ProcessModel::brownian(1.0, 1.0);
    ResolventEvaluator ev(m);
    CHECK(ev.kappa() == doctest::Approx(1.0));
    // numeric route must recover kappa = |mu| from r_q(0)
    CHECK(std::abs(ev.kappa_numeric() - 1.0) < 1e-4);

    // one-sided h: excursions from 0 reach a < 0 with the full rate
    // n(T_a < T_0) = (1 - kappa h(-a)) / h_B(a); h(a) = 0 for a < 0.
    const double a = -1.0;
    const double hm = *m.closed_form_h(1.0);  // h(-a)
    const double expect = (1.0 - 1.0 * hm) / hm;
    CHECK(ev.excursion_rate(a) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("kappa throws for recurrent models") {
    ResolventEvaluator ev(ProcessModel::brownian(1.0, 0.0));
    CHECK_THROWS_AS(ev.kappa(), std::domain_error);
    CHECK_THROWS_AS(ev.kappa_numeric(), std::domain_error);
}

TEST_CASE("extrapolate_to_zero on polynomial data") {
    std::vector<double> nodes, values;
    for (double t : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
        nodes.push_back(t);
        values.push_back(7.0 + 3.0 * t - 2.0 * t * t);
    }
    auto [v, err] = extrapolate_to_zero(nodes, values);
    CHECK(v == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(err < 1e-10);
}

TEST_CASE("quadrature config validation") {
    QuadratureConfig cfg;
    cfg.q_sequence = QuadratureConfig::default_q_sequence();
    CHECK_NOTHROW(cfg.validate());
    cfg.abs_tol = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.abs_tol = 1e-10;
    cfg.q_sequence = {0.5, 0.5};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

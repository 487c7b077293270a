#include "levyhit/models.hpp"

#include <cmath>

namespace levyhit {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_alpha(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("stable index alpha must lie strictly in (1,2)");
}

}  // namespace

double stable_K(double alpha, double beta, double c_sum) {
    const double t = std::tan(kPi * alpha / 2.0);
    return -c_sum * kPi / (alpha * t) * (1.0 + beta * beta * t * t);
}

ProcessModel::ProcessModel(Family f, std::string name)
    : family_(std::move(f)), name_(std::move(name)) {}

ProcessModel ProcessModel::brownian(double sigma2, double mu) {
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("Brownian variance sigma2 must be > 0");
    return ProcessModel(BrownianMotion{sigma2, mu}, "bm");
}

ProcessModel ProcessModel::stable(double alpha, double c_plus, double c_minus) {
    check_alpha(alpha);
    if (c_plus < 0.0 || c_minus < 0.0 || !(c_plus + c_minus > 0.0))
        throw std::invalid_argument("stable requires c+ >= 0, c- >= 0, c+ + c- > 0");
    return ProcessModel(StrictlyStable{alpha, c_plus, c_minus}, "stable");
}

ProcessModel ProcessModel::stable_beta(double alpha, double beta) {
    if (beta < -1.0 || beta > 1.0)
        throw std::invalid_argument("stable skewness beta must lie in [-1,1]");
    return stable(alpha, (1.0 + beta) / 2.0, (1.0 - beta) / 2.0);
}

ProcessModel ProcessModel::spectrally_negative_stable(double alpha) {
    check_alpha(alpha);
    return ProcessModel(SpectrallyNegativeStable{alpha}, "snstable");
}

ProcessModel ProcessModel::custom(CustomExponent spec) {
    if (!spec.psi)
        throw std::invalid_argument("custom model needs a characteristic exponent");
    std::string n = spec.name;
    return ProcessModel(std::move(spec), std::move(n));
}

std::complex<double> ProcessModel::psi(double lambda) const {
    using C = std::complex<double>;
    if (lambda == 0.0) return C(0.0, 0.0);
    return std::visit(
        [lambda](const auto& fam) -> C {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BrownianMotion>) {
                return C(0.5 * fam.sigma2 * lambda * lambda, -fam.mu * lambda);
            } else if constexpr (std::is_same_v<T, StrictlyStable>) {
                const double a = fam.alpha;
                const double c = fam.c_plus + fam.c_minus;
                const double d = -std::tgamma(-a) * std::cos(kPi * a / 2.0) * c;
                const double mag = d * std::pow(std::abs(lambda), a);
                const double skew = fam.beta() * std::tan(kPi * a / 2.0);
                const double sgn = lambda > 0.0 ? 1.0 : -1.0;
                return C(mag, -mag * skew * sgn);
            } else if constexpr (std::is_same_v<T, SpectrallyNegativeStable>) {
                // Psi(lambda) = -(i lambda)^alpha
                const double a = fam.alpha;
                const double mag = std::pow(std::abs(lambda), a);
                const double sgn = lambda > 0.0 ? 1.0 : -1.0;
                return C(-mag * std::cos(kPi * a / 2.0),
                         -mag * std::sin(kPi * a / 2.0) * sgn);
            } else {
                return fam.psi(lambda);
            }
        },
        family_);
}

Recurrence ProcessModel::recurrence() const {
    return std::visit(
        [](const auto& fam) -> Recurrence {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BrownianMotion>) {
                return fam.mu == 0.0 ? Recurrence::Recurrent : Recurrence::Transient;
            } else if constexpr (std::is_same_v<T, StrictlyStable>) {
                return Recurrence::Recurrent;  // alpha in (1,2)
            } else if constexpr (std::is_same_v<T, SpectrallyNegativeStable>) {
                return Recurrence::Recurrent;  // oscillates: psi'(0+) = 0
            } else {
                if (!fam.recurrence)
                    throw classification_unavailable(
                        "custom model has no declared recurrence class");
                return *fam.recurrence;
            }
        },
        family_);
}

std::optional<double> ProcessModel::closed_form_h(double x) const {
    return std::visit(
        [x](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BrownianMotion>) {
                const double s = fam.sigma2;
                if (fam.mu == 0.0) return std::abs(x) / s;
                // transient: h(x) = (1/kappa) P_x(T_0 = infinity)
                const double mu = fam.mu;
                if (mu > 0.0) {
                    // drifts to +infinity: h = W
                    if (x <= 0.0) return 0.0;
                    return (1.0 - std::exp(-2.0 * mu * x / s)) / mu;
                }
                // drifts to -infinity: h(x) = W(x) + (1 - e^{Phi0 x})/psi'(Phi0)
                // with Phi0 = -2 mu / s and psi'(Phi0) = -mu; the x >= 0 parts
                // cancel and only the downward escape remains.
                if (x >= 0.0) return 0.0;
                return (1.0 - std::exp(-2.0 * mu * x / s)) / (-mu);
            } else if constexpr (std::is_same_v<T, StrictlyStable>) {
                if (x == 0.0) return 0.0;
                const double K = stable_K(fam.alpha, fam.beta(),
                                          fam.c_plus + fam.c_minus);
                const double sgn = x > 0.0 ? 1.0 : -1.0;
                return (1.0 - fam.beta() * sgn) *
                       std::pow(std::abs(x), fam.alpha - 1.0) / K;
            } else if constexpr (std::is_same_v<T, SpectrallyNegativeStable>) {
                // oscillating case with E[X_1^2] = infinity: h = W
                if (x <= 0.0) return 0.0;
                return std::pow(x, fam.alpha - 1.0) / std::tgamma(fam.alpha);
            } else {
                if (fam.closed_form_h) return fam.closed_form_h(x);
                return std::nullopt;
            }
        },
        family_);
}

std::optional<double> ProcessModel::closed_form_kappa() const {
    if (recurrence() == Recurrence::Recurrent)
        throw std::domain_error("kappa is undefined for a recurrent model");
    return std::visit(
        [](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BrownianMotion>) {
                return std::abs(fam.mu);
            } else if constexpr (std::is_same_v<T, CustomExponent>) {
                return fam.kappa;
            } else {
                return std::nullopt;
            }
        },
        family_);
}

double ProcessModel::kappa() const {
    auto k = closed_form_kappa();
    if (!k)
        throw unsupported_family(
            "no closed-form kappa for this family; use "
            "ResolventEvaluator::kappa() for the numeric limit");
    return *k;
}

double ProcessModel::scale_function(double x) const {
    if (x < 0.0) return 0.0;
    return std::visit(
        [x](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, BrownianMotion>) {
                const double s = fam.sigma2;
                if (fam.mu == 0.0) return 2.0 * x / s;
                return (1.0 - std::exp(-2.0 * fam.mu * x / s)) / fam.mu;
            } else if constexpr (std::is_same_v<T, SpectrallyNegativeStable>) {
                return std::pow(x, fam.alpha - 1.0) / std::tgamma(fam.alpha);
            } else {
                throw unsupported_family(
                    "no closed-form scale function for this family");
            }
        },
        family_);
}

double ProcessModel::beta() const {
    if (const auto* s = std::get_if<StrictlyStable>(&family_)) return s->beta();
    throw unsupported_family("beta is defined for the stable family only");
}

double ProcessModel::K_alpha() const {
    if (const auto* s = std::get_if<StrictlyStable>(&family_))
        return stable_K(s->alpha, s->beta(), s->c_plus + s->c_minus);
    throw unsupported_family("K(alpha) is defined for the stable family only");
}

double ProcessModel::stable_scale() const {
    if (const auto* s = std::get_if<StrictlyStable>(&family_)) {
        const double c = s->c_plus + s->c_minus;
        return -std::tgamma(-s->alpha) * std::cos(kPi * s->alpha / 2.0) * c;
    }
    throw unsupported_family("stable_scale is defined for the stable family only");
}

}  // namespace levyhit

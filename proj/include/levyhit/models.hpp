#ifndef LEVYHIT_MODELS_HPP
#define LEVYHIT_MODELS_HPP

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace levyhit {

enum class Recurrence { Recurrent, Transient };

/// Brownian motion with variance sigma2 > 0 and drift mu.
struct BrownianMotion {
    double sigma2 = 1.0;
    double mu = 0.0;
};

/// Strictly alpha-stable process, alpha in (1,2), with Levy measure
/// density c_plus * x^{-alpha-1} on (0,inf) and c_minus * |x|^{-alpha-1}
/// on (-inf,0).  c_plus + c_minus > 0.
struct StrictlyStable {
    double alpha;
    double c_plus;
    double c_minus;

    double beta() const { return (c_plus - c_minus) / (c_plus + c_minus); }
};

/// Spectrally negative stable process with Laplace exponent
/// psi(theta) = theta^alpha, alpha in (1,2).  Oscillates, hence recurrent;
/// scale function W(x) = x^{alpha-1} / Gamma(alpha).
struct SpectrallyNegativeStable {
    double alpha;
};

/// User-supplied characteristic exponent.  The recurrence class is
/// declared, not derived; kappa and a closed-form h may be supplied.
struct CustomExponent {
    std::function<std::complex<double>(double)> psi;
    std::optional<Recurrence> recurrence;
    std::optional<double> kappa;
    std::function<double(double)> closed_form_h;  // may be empty
    std::string name = "custom";
};

class classification_unavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class unsupported_family : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalization constant K(alpha) of the stable renormalized zero
/// resolvent h(x) = (1 - beta sgn x) |x|^{alpha-1} / K(alpha).
/// tan(pi alpha / 2) is negative on (1,2); the formula is evaluated as
/// written and comes out strictly positive.
double stable_K(double alpha, double beta, double c_sum);

/// Immutable description of a Levy process family.  Safe to share
/// between threads once constructed.
class ProcessModel {
public:
    using Family = std::variant<BrownianMotion, StrictlyStable,
                                SpectrallyNegativeStable, CustomExponent>;

    static ProcessModel brownian(double sigma2, double mu);
    static ProcessModel stable(double alpha, double c_plus, double c_minus);
    /// Stable with c_plus + c_minus = 1 and the given skewness beta.
    static ProcessModel stable_beta(double alpha, double beta);
    static ProcessModel spectrally_negative_stable(double alpha);
    static ProcessModel custom(CustomExponent spec);

    /// Characteristic exponent Psi(lambda); Psi(0) = 0 and
    /// Psi(-lambda) = conj Psi(lambda).
    std::complex<double> psi(double lambda) const;

    /// Recurrence class; throws classification_unavailable for a custom
    /// model without a declared class.
    Recurrence recurrence() const;

    bool is_recurrent() const { return recurrence() == Recurrence::Recurrent; }

    /// Renormalized zero resolvent h(x) where a closed form is known.
    std::optional<double> closed_form_h(double x) const;

    /// kappa = n^0(T_0 = infinity) where a closed form is known.
    /// Throws std::domain_error for a recurrent model.
    std::optional<double> closed_form_kappa() const;

    /// Closed-form kappa or a domain/unsupported error.  Numeric fallback
    /// lives in ResolventEvaluator::kappa().
    double kappa() const;

    /// 0-scale function W(x) for the spectrally negative families
    /// (Brownian motion with or without drift, spectrally negative
    /// stable).  W(x) = 0 for x < 0.
    double scale_function(double x) const;

    const Family& family() const { return family_; }
    const std::string& name() const { return name_; }

    /// Stable skewness beta; only meaningful for the stable family.
    double beta() const;
    /// Stable normalization K(alpha); only for the stable family.
    double K_alpha() const;
    /// Scale d of the stable exponent Psi(lambda) = d |lambda|^alpha (...).
    double stable_scale() const;

private:
    explicit ProcessModel(Family f, std::string name);

    Family family_;
    std::string name_;
};

}  // namespace levyhit

#endif  // LEVYHIT_MODELS_HPP

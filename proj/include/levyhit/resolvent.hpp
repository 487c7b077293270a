#ifndef LEVYHIT_RESOLVENT_HPP
#define LEVYHIT_RESOLVENT_HPP

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyhit/models.hpp"

namespace levyhit {

/// Thrown when an integral or extrapolation fails to converge to the
/// configured tolerances.  Carries the achieved error estimate.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double error_estimate)
        : std::runtime_error(what), error_estimate_(error_estimate) {}
    double error_estimate() const { return error_estimate_; }

private:
    double error_estimate_;
};

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_panels = 1 << 14;   // subdivision limit per integral
    double tail_growth = 2.0;   // interval growth when probing tails
    double split_point = 1.0;   // boundary between head and Fourier tail
    /// Decreasing q values for the q -> 0+ limits (h_limit, kappa).
    std::vector<double> q_sequence;

    static std::vector<double> default_q_sequence();
    void validate() const;
};

enum class HMethod { Auto, ClosedForm, Tsukada, Limit };

const char* h_method_name(HMethod m);

struct HValue {
    double value;
    HMethod method;  // never Auto in a result
};

/// Numerical evaluation of the resolvent density r_q(x), the
/// renormalized zero resolvent h(x) and the excursion rates derived
/// from it.  Pure given (model, config); results are cached keyed on
/// arguments rounded to 12 significant digits, so evaluation order and
/// threading do not change answers.
class ResolventEvaluator {
public:
    explicit ResolventEvaluator(ProcessModel model,
                                QuadratureConfig config = QuadratureConfig{},
                                HMethod method = HMethod::Auto);

    const ProcessModel& model() const { return model_; }
    const QuadratureConfig& config() const { return config_; }

    /// r_q(x) = (1/2pi) int e^{-i lambda x} / (q + Psi(lambda)) dlambda.
    double resolvent_density(double q, double x) const;

    /// r_q(0) - r_q(-x), evaluated as a single integral so the
    /// cancellation between the two densities never reaches floating
    /// point.
    double resolvent_difference(double q, double x) const;

    /// Tsukada integral h(x) = (1/pi) int_0^inf Re((1-e^{i lambda x})/Psi) dlambda.
    double h_tsukada(double x) const;

    /// h(x) as the extrapolated limit of r_q(0) - r_q(-x) along
    /// config.q_sequence.
    double h_limit(double x) const;

    /// Dispatch: closed form if the model has one, else Tsukada
    /// integral, else the limit definition.
    HValue h_tagged(double x) const;
    double h(double x) const { return h_tagged(x).value; }

    /// h^B(a) = P_0[L^0_{T_a}]; requires a != 0.
    double h_B(double a) const;

    /// n^0(T_a < T_0); requires a != 0.
    double excursion_rate(double a) const;

    /// kappa: closed form if known, otherwise the extrapolated limit of
    /// 1/r_q(0).  Throws std::domain_error for recurrent models.
    double kappa() const;

    /// Always-numeric kappa via 1/r_q(0) extrapolation.
    double kappa_numeric() const;

private:
    double h_dispatch_raw(double x, HMethod m) const;

    ProcessModel model_;
    QuadratureConfig config_;
    HMethod method_;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::string, double> cache_;
};

/// Polynomial extrapolation to zero of values v_k given at nodes t_k
/// (Neville tableau).  Returns the extrapolant and the magnitude of the
/// final correction as an error estimate.
std::pair<double, double> extrapolate_to_zero(const std::vector<double>& nodes,
                                              const std::vector<double>& values);

}  // namespace levyhit

#endif  // LEVYHIT_RESOLVENT_HPP

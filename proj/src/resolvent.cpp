#include "levyhit/resolvent.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>

namespace levyhit {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct GslInit {
    GslInit() { gsl_set_error_handler_off(); }
};
const GslInit gsl_init_once{};

struct Workspace {
    gsl_integration_workspace* w;
    explicit Workspace(std::size_t limit) : w(gsl_integration_workspace_alloc(limit)) {}
    ~Workspace() { gsl_integration_workspace_free(w); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
};

struct QawoTable {
    gsl_integration_qawo_table* t;
    QawoTable(double omega, gsl_integration_qawo_enum kind)
        : t(gsl_integration_qawo_table_alloc(omega, 1.0, kind, 28)) {}
    ~QawoTable() { gsl_integration_qawo_table_free(t); }
    QawoTable(const QawoTable&) = delete;
    QawoTable& operator=(const QawoTable&) = delete;
};

double trampoline(double x, void* p) {
    return (*static_cast<std::function<double(double)>*>(p))(x);
}

struct Integrand {
    std::function<double(double)> f;
    gsl_function gf;
    explicit Integrand(std::function<double(double)> fn) : f(std::move(fn)) {
        gf.function = &trampoline;
        gf.params = &f;
    }
};

void check_quadrature(int status, double result, double abserr,
                      const QuadratureConfig& cfg, const char* what) {
    const double budget =
        50.0 * (cfg.abs_tol + cfg.rel_tol * std::abs(result));
    if (status != 0 && abserr > budget)
        throw numeric_error(std::string(what) + ": quadrature failed (" +
                                gsl_strerror(status) + "), error estimate " +
                                std::to_string(abserr),
                            abserr);
}

double qags(const std::function<double(double)>& f, double a, double b,
            const QuadratureConfig& cfg, const char* what) {
    Integrand in(f);
    Workspace ws(cfg.max_panels);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qags(&in.gf, a, b, cfg.abs_tol, cfg.rel_tol,
                                      cfg.max_panels, ws.w, &result, &abserr);
    check_quadrature(status, result, abserr, cfg, what);
    return result;
}

double qagiu(const std::function<double(double)>& f, double a,
             const QuadratureConfig& cfg, const char* what) {
    Integrand in(f);
    Workspace ws(cfg.max_panels);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qagiu(&in.gf, a, cfg.abs_tol, cfg.rel_tol,
                                       cfg.max_panels, ws.w, &result, &abserr);
    check_quadrature(status, result, abserr, cfg, what);
    return result;
}

double qagil(const std::function<double(double)>& f, double b,
             const QuadratureConfig& cfg, const char* what) {
    Integrand in(f);
    Workspace ws(cfg.max_panels);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qagil(&in.gf, b, cfg.abs_tol, cfg.rel_tol,
                                       cfg.max_panels, ws.w, &result, &abserr);
    check_quadrature(status, result, abserr, cfg, what);
    return result;
}

/// int_a^inf f(lambda) * {cos,sin}(omega lambda) dlambda, omega > 0.
double qawf(const std::function<double(double)>& f, double a, double omega,
            bool sine, const QuadratureConfig& cfg, const char* what) {
    Integrand in(f);
    Workspace ws(cfg.max_panels);
    Workspace cyc(cfg.max_panels);
    QawoTable table(omega, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qawf(&in.gf, a, cfg.abs_tol, cfg.max_panels,
                                      ws.w, cyc.w, table.t, &result, &abserr);
    check_quadrature(status, result, abserr, cfg, what);
    return result;
}

std::string cache_key(const char* tag, double a, double b) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%s:%.12e:%.12e", tag, a, b);
    return buf;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double e : v)
        if (out.empty() || e - out.back() > 1e-9) out.push_back(e);
    return out;
}

/// Exponent ladder of the error of r_q(0) - r_q(-x) as q -> 0+.  Scaling
/// lambda = q^{1/alpha} u in the inversion integral expands the error in
/// powers q^{(m+1)/alpha - 1 + i}; symmetric exponents kill the odd m
/// terms, and the analytic large-lambda remainder contributes integer
/// powers.  Richardson elimination along this ladder is exact for each
/// term, unlike plain polynomial extrapolation in a single power.
std::vector<double> limit_ladder(double alpha, bool symmetric) {
    std::vector<double> lad = {1.0, 2.0, 3.0};
    for (int m = symmetric ? 2 : 1; m <= 7; m += symmetric ? 2 : 1)
        for (int i = 0; i <= 2; ++i) {
            const double e = (m + 1) / alpha - 1.0 + i;
            if (e > 1e-6 && e < 3.5) lad.push_back(e);
        }
    return sorted_unique(std::move(lad));
}

std::vector<double> limit_ladder(const ProcessModel& m) {
    if (const auto* bm = std::get_if<BrownianMotion>(&m.family()))
        return bm->mu == 0.0 ? limit_ladder(2.0, true)
                             : std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0};
    if (const auto* st = std::get_if<StrictlyStable>(&m.family()))
        return limit_ladder(st->alpha, st->beta() == 0.0);
    if (const auto* sn = std::get_if<SpectrallyNegativeStable>(&m.family()))
        return limit_ladder(sn->alpha, false);
    return {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
}

/// Sequential Richardson elimination of the terms c_j t^{theta_j} from
/// v(t_k), theta_j ascending; past the end of the ladder the exponent
/// keeps growing by 1.  Returns the value with the smallest last
/// correction across levels.
std::pair<double, double> richardson_ladder(const std::vector<double>& nodes,
                                            std::vector<double> v,
                                            const std::vector<double>& ladder) {
    std::size_t len = v.size();
    if (nodes.size() != len || len == 0)
        throw std::invalid_argument("richardson_ladder: bad input");
    double best = v.back();
    double best_err = std::numeric_limits<double>::infinity();
    double prev = v.back();
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        const double th = j < ladder.size()
                              ? ladder[j]
                              : ladder.back() + static_cast<double>(
                                                    j - ladder.size() + 1);
        for (std::size_t k = 0; k + 1 < len; ++k) {
            const double a = std::pow(nodes[k], th);
            const double b = std::pow(nodes[k + 1], th);
            v[k] = (a * v[k + 1] - b * v[k]) / (a - b);
        }
        --len;
        const double cur = v[len - 1];
        const double err = std::abs(cur - prev);
        if (err < best_err) {
            best_err = err;
            best = cur;
        }
        prev = cur;
    }
    return {best, best_err};
}

}  // namespace

std::vector<double> QuadratureConfig::default_q_sequence() {
    std::vector<double> qs;
    double q = 1.0;
    for (int k = 0; k <= 12; ++k, q *= 0.25) qs.push_back(q);
    return qs;
}

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0 && abs_tol < 1.0) || !(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("tolerances must lie in (0,1)");
    if (max_panels < 16) throw std::invalid_argument("max_panels must be >= 16");
    if (!(tail_growth > 1.0)) throw std::invalid_argument("tail_growth must be > 1");
    for (std::size_t i = 1; i < q_sequence.size(); ++i)
        if (!(q_sequence[i] < q_sequence[i - 1]) || !(q_sequence[i] > 0.0))
            throw std::invalid_argument("q_sequence must decrease strictly to 0");
}

const char* h_method_name(HMethod m) {
    switch (m) {
        case HMethod::Auto: return "auto";
        case HMethod::ClosedForm: return "closed-form";
        case HMethod::Tsukada: return "tsukada";
        case HMethod::Limit: return "limit";
    }
    return "?";
}

ResolventEvaluator::ResolventEvaluator(ProcessModel model, QuadratureConfig config,
                                       HMethod method)
    : model_(std::move(model)), config_(std::move(config)), method_(method) {
    if (config_.q_sequence.empty())
        config_.q_sequence = QuadratureConfig::default_q_sequence();
    config_.validate();
}

double ResolventEvaluator::resolvent_density(double q, double x) const {
    if (!(q > 0.0)) throw std::domain_error("resolvent_density needs q > 0");
    const std::string key = cache_key("rq", q, x);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    auto re_g = [this, q](double lam) {
        return (1.0 / (q + model_.psi(lam))).real();
    };
    auto im_g = [this, q](double lam) {
        return (1.0 / (q + model_.psi(lam))).imag();
    };

    double value;
    if (x == 0.0) {
        // split so the adaptive rule resolves the O(q)-wide peak at the
        // origin that the infinite-range transformation can step over
        // integrate the head in log(lambda) so the O(q)-wide peak of height
        // 1/q at the origin becomes an O(1)-wide bump the adaptive rule can
        // resolve at any q
        auto log_g = [&](double u) {
            const double lam = std::exp(u);
            return re_g(lam) * lam;
        };
        value = (qagil(log_g, std::log(config_.split_point), config_,
                       "resolvent_density head") +
                 qagiu(re_g, config_.split_point, config_,
                       "resolvent_density tail")) /
                kPi;
    } else {
        const double c = config_.split_point;
        const double w = std::abs(x);
        const double sgn = x > 0.0 ? 1.0 : -1.0;
        // r_q(x) = (1/pi) Re int_0^inf e^{-i lambda x} / (q + Psi) dlambda
        auto head = [this, q, x](double lam) {
            const std::complex<double> e(std::cos(lam * x), -std::sin(lam * x));
            return (e / (q + model_.psi(lam))).real();
        };
        value = (qags(head, 0.0, c, config_, "resolvent_density head") +
                 qawf(re_g, c, w, false, config_, "resolvent_density cos tail") +
                 sgn * qawf(im_g, c, w, true, config_, "resolvent_density sin tail")) /
                kPi;
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, value);
    return value;
}

double ResolventEvaluator::resolvent_difference(double q, double x) const {
    if (!(q > 0.0)) throw std::domain_error("resolvent_difference needs q > 0");
    if (x == 0.0) return 0.0;
    const std::string key = cache_key("rdiff", q, x);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    const double c = config_.split_point;
    const double w = std::abs(x);
    const double sgn = x > 0.0 ? 1.0 : -1.0;
    // (1/pi) int_0^inf Re((1 - e^{i lambda x}) / (q + Psi)) dlambda
    auto head = [this, q, x](double lam) {
        const double th = lam * x;
        const double s = std::sin(th / 2.0);
        const std::complex<double> one_minus_e(2.0 * s * s, -std::sin(th));
        return (one_minus_e / (q + model_.psi(lam))).real();
    };
    auto re_g = [this, q](double lam) {
        return (1.0 / (q + model_.psi(lam))).real();
    };
    auto im_g = [this, q](double lam) {
        return (1.0 / (q + model_.psi(lam))).imag();
    };
    const double value =
        (qags(head, 0.0, c, config_, "resolvent_difference head") +
         qagiu(re_g, c, config_, "resolvent_difference dc tail") -
         qawf(re_g, c, w, false, config_, "resolvent_difference cos tail") +
         sgn * qawf(im_g, c, w, true, config_, "resolvent_difference sin tail")) /
        kPi;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, value);
    return value;
}

double ResolventEvaluator::h_tsukada(double x) const {
    if (x == 0.0) return 0.0;
    const std::string key = cache_key("hts", x, 0.0);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    const double c = config_.split_point;
    const double w = std::abs(x);
    const double sgn = x > 0.0 ? 1.0 : -1.0;
    auto head = [this, x](double lam) {
        if (lam == 0.0) return 0.0;  // removable at lambda = 0
        const double th = lam * x;
        const double s = std::sin(th / 2.0);
        const std::complex<double> one_minus_e(2.0 * s * s, -std::sin(th));
        return (one_minus_e / model_.psi(lam)).real();
    };
    auto re_g = [this](double lam) { return (1.0 / model_.psi(lam)).real(); };
    auto im_g = [this](double lam) { return (1.0 / model_.psi(lam)).imag(); };

    const double value =
        (qags(head, 0.0, c, config_, "h_tsukada head") +
         qagiu(re_g, c, config_, "h_tsukada dc tail") -
         qawf(re_g, c, w, false, config_, "h_tsukada cos tail") +
         sgn * qawf(im_g, c, w, true, config_, "h_tsukada sin tail")) /
        kPi;
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, value);
    return value;
}

std::pair<double, double> extrapolate_to_zero(const std::vector<double>& nodes,
                                              const std::vector<double>& values) {
    const std::size_t n = nodes.size();
    if (n != values.size() || n == 0)
        throw std::invalid_argument("extrapolate_to_zero: bad input");
    std::vector<double> cur = values;
    double best = cur[0];
    double best_err = std::numeric_limits<double>::infinity();
    double prev_diag = cur.back();
    for (std::size_t m = 1; m < n; ++m) {
        for (std::size_t i = 0; i + m < n; ++i) {
            cur[i] = (nodes[i + m] * cur[i] - nodes[i] * cur[i + 1]) /
                     (nodes[i + m] - nodes[i]);
        }
        // diagonal entry using the last m+1 points
        const double diag = cur[n - 1 - m];
        const double err = std::abs(diag - prev_diag);
        if (err < best_err) {
            best_err = err;
            best = diag;
        }
        prev_diag = diag;
    }
    return {best, best_err};
}

double ResolventEvaluator::h_limit(double x) const {
    if (x == 0.0) return 0.0;
    const std::string key = cache_key("hlim", x, 0.0);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    const auto& qs = config_.q_sequence;
    std::vector<double> d(qs.size());
    for (std::size_t k = 0; k < qs.size(); ++k)
        d[k] = resolvent_difference(qs[k], x);

    auto [best, best_err] = richardson_ladder(qs, d, limit_ladder(model_));
    const double gate = 1e-4 * std::abs(best) + 100.0 * config_.abs_tol;
    if (!(best_err < gate))
        throw numeric_error(
            "h_limit extrapolation did not converge at x=" + std::to_string(x) +
                " (last correction " + std::to_string(best_err) + ")",
            best_err);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, best);
    return best;
}

double ResolventEvaluator::h_dispatch_raw(double x, HMethod m) const {
    switch (m) {
        case HMethod::ClosedForm: {
            auto v = model_.closed_form_h(x);
            if (!v) throw unsupported_family("no closed-form h for this model");
            return *v;
        }
        case HMethod::Tsukada: return h_tsukada(x);
        case HMethod::Limit: return h_limit(x);
        case HMethod::Auto: break;
    }
    throw std::logic_error("h_dispatch_raw: unexpected method");
}

HValue ResolventEvaluator::h_tagged(double x) const {
    if (method_ != HMethod::Auto) return {h_dispatch_raw(x, method_), method_};
    if (auto v = model_.closed_form_h(x)) return {*v, HMethod::ClosedForm};
    // The Tsukada representation is established for the recurrent case;
    // transient models without a closed form go through the limit.
    if (model_.is_recurrent()) {
        try {
            return {h_tsukada(x), HMethod::Tsukada};
        } catch (const numeric_error&) {
            return {h_limit(x), HMethod::Limit};
        }
    }
    return {h_limit(x), HMethod::Limit};
}

double ResolventEvaluator::h_B(double a) const {
    if (a == 0.0) throw std::domain_error("h_B requires a != 0");
    const double hp = h(a);
    const double hm = h(-a);
    if (model_.is_recurrent()) return hp + hm;
    const double k = kappa();
    return hp + hm - k * hp * hm;
}

double ResolventEvaluator::excursion_rate(double a) const {
    if (a == 0.0) throw std::domain_error("excursion_rate requires a != 0");
    if (model_.is_recurrent()) return 1.0 / h_B(a);
    return (1.0 - kappa() * h(-a)) / h_B(a);
}

double ResolventEvaluator::kappa_numeric() const {
    if (model_.is_recurrent())
        throw std::domain_error("kappa is undefined for a recurrent model");
    const std::string key = cache_key("kappa", 0.0, 0.0);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const auto& qs = config_.q_sequence;
    std::vector<double> v(qs.size());
    for (std::size_t k = 0; k < qs.size(); ++k)
        v[k] = 1.0 / resolvent_density(qs[k], 0.0);

    double best = v.back();
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& ladder :
         {std::vector<double>{1.0, 2.0, 3.0, 4.0},
          std::vector<double>{0.5, 1.0, 1.5, 2.0, 2.5}}) {
        auto [val, err] = richardson_ladder(qs, v, ladder);
        if (err < best_err) {
            best_err = err;
            best = val;
        }
    }
    if (!(best_err < 1e-3 * std::abs(best) + 100.0 * config_.abs_tol))
        throw numeric_error("kappa extrapolation did not converge", best_err);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, best);
    return best;
}

double ResolventEvaluator::kappa() const {
    if (auto k = model_.closed_form_kappa()) return *k;
    return kappa_numeric();
}

}  // namespace levyhit

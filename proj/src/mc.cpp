#include "levyhit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyhit/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace levyhit {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

McReport finalize(std::vector<long long> counts, long long censored,
                  const PathConfig& cfg) {
    McReport rep;
    rep.counts = std::move(counts);
    rep.seed = cfg.seed;
    rep.paths = cfg.paths;
    rep.censored_fraction =
        static_cast<double>(censored) / static_cast<double>(cfg.paths);
    const long long decided = cfg.paths - censored;
    rep.estimates.assign(rep.counts.size(), 0.0);
    rep.std_errors.assign(rep.counts.size(), 0.0);
    if (decided > 0) {
        const double nd = static_cast<double>(decided);
        for (std::size_t i = 0; i < rep.counts.size(); ++i) {
            const double p = static_cast<double>(rep.counts[i]) / nd;
            rep.estimates[i] = p;
            rep.std_errors[i] = std::sqrt(std::max(0.0, p * (1.0 - p)) / nd);
        }
    }
    return rep;
}

/// Exit-left probability for BM with drift mu, variance s on (a, b).
double bm_exit_left(double x, double a, double b, double mu, double s) {
    if (mu == 0.0) return (b - x) / (b - a);
    // scale function phi(y) = e^{-2 mu y / s}; expm1 keeps small-drift
    // differences accurate.
    const double c = -2.0 * mu / s;
    return std::expm1(c * (x - b)) / std::expm1(c * (a - b));
}

enum class BmOutcome { Interval, BelowAll, AboveAll, AtPoint };

struct BmSetup {
    BmOutcome kind;
    std::size_t left = 0, right = 0;  // indices into the set
    double p_left = 0.0;              // Interval: P(exit left)
    double p_hit = 1.0;               // outside hull: P(reach the edge point)
};

BmSetup bm_setup(double x, const PointSet& set, double mu, double s) {
    BmSetup st;
    if (auto at = set.index_of(x)) {
        st.kind = BmOutcome::AtPoint;
        st.left = *at;
        return st;
    }
    const auto& a = set.points();
    if (x < a.front()) {
        st.kind = BmOutcome::BelowAll;
        st.left = 0;
        st.p_hit = mu >= 0.0 ? 1.0 : std::exp(2.0 * mu * (a.front() - x) / s);
        return st;
    }
    if (x > a.back()) {
        st.kind = BmOutcome::AboveAll;
        st.left = set.size() - 1;
        st.p_hit = mu <= 0.0 ? 1.0 : std::exp(-2.0 * mu * (x - a.back()) / s);
        return st;
    }
    st.kind = BmOutcome::Interval;
    std::size_t i = 0;
    while (a[i + 1] < x) ++i;
    st.left = i;
    st.right = i + 1;
    st.p_left = bm_exit_left(x, a[i], a[i + 1], mu, s);
    return st;
}

template <class PathFn>
void run_paths(long long paths, bool parallel, std::size_t bins,
               std::vector<long long>& counts, long long& censored,
               const PathFn& one_path) {
    counts.assign(bins, 0);
    censored = 0;
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel
        {
            std::vector<long long> local(bins, 0);
            long long local_censored = 0;
#pragma omp for schedule(static)
            for (long long p = 0; p < paths; ++p) {
                const int hit = one_path(p);
                if (hit < 0)
                    ++local_censored;
                else
                    ++local[static_cast<std::size_t>(hit)];
            }
#pragma omp critical
            {
                for (std::size_t i = 0; i < bins; ++i) counts[i] += local[i];
                censored += local_censored;
            }
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (long long p = 0; p < paths; ++p) {
        const int hit = one_path(p);
        if (hit < 0)
            ++censored;
        else
            ++counts[static_cast<std::size_t>(hit)];
    }
}

McReport bm_impl(double x, const PointSet& set, const PathConfig& cfg, double mu,
                 double sigma2, bool parallel) {
    cfg.validate();
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    const BmSetup st = bm_setup(x, set, mu, sigma2);

    auto one_path = [&](long long p) -> int {
        switch (st.kind) {
            case BmOutcome::AtPoint: return static_cast<int>(st.left);
            case BmOutcome::Interval: {
                PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
                return rng.uniform() < st.p_left ? static_cast<int>(st.left)
                                                 : static_cast<int>(st.right);
            }
            case BmOutcome::BelowAll:
            case BmOutcome::AboveAll: {
                if (st.p_hit >= 1.0) return static_cast<int>(st.left);
                PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
                return rng.uniform() < st.p_hit ? static_cast<int>(st.left) : -1;
            }
        }
        return -1;
    };

    std::vector<long long> counts;
    long long censored = 0;
    run_paths(cfg.paths, parallel, set.size(), counts, censored, one_path);
    return finalize(std::move(counts), censored, cfg);
}

struct StableParams {
    double alpha;
    double beta;
    double scale;  // d in Psi(lambda) = d |lambda|^alpha (...)
};

StableParams stable_params(const ProcessModel& model) {
    const auto* st = std::get_if<StrictlyStable>(&model.family());
    if (!st)
        throw unsupported_family("stable path simulation needs the stable family");
    return {st->alpha, st->beta(), model.stable_scale()};
}

McReport stable_impl(const ProcessModel& model, double x, const PointSet& set,
                     const PathConfig& cfg, bool parallel) {
    cfg.validate();
    const StableParams sp = stable_params(model);
    const double min_gap = [&] {
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < set.size(); ++i)
            g = std::min(g, set[i] - set[i - 1]);
        return g;
    }();
    if (set.size() > 1 && !(cfg.eps < 0.5 * min_gap))
        throw std::invalid_argument("eps must be small relative to the point gaps");

    double horizon = cfg.horizon;
    if (horizon <= 0.0) {
        const double diam =
            set.size() > 1 ? set.points().back() - set.points().front() : 1.0;
        horizon = 1e3 * std::pow(diam, sp.alpha) / sp.scale;
    }
    const long long max_steps =
        static_cast<long long>(std::ceil(horizon / cfg.step));
    const double inc_scale = std::pow(sp.scale * cfg.step, 1.0 / sp.alpha);
    const auto& a = set.points();

    auto one_path = [&](long long p) -> int {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(p));
        double pos = x;
        for (long long s = 0; s < max_steps; ++s) {
            for (std::size_t i = 0; i < a.size(); ++i)
                if (std::abs(pos - a[i]) <= cfg.eps) return static_cast<int>(i);
            pos += inc_scale * stable_standard_sample(sp.alpha, sp.beta,
                                                      rng.uniform(), rng.uniform());
        }
        return -1;
    };

    std::vector<long long> counts;
    long long censored = 0;
    run_paths(cfg.paths, parallel, set.size(), counts, censored, one_path);
    McReport rep = finalize(std::move(counts), censored, cfg);
    rep.eps_schedule = {cfg.eps};
    rep.eps_bias_warning = rep.censored_fraction > 0.05;
    return rep;
}

}  // namespace

void PathConfig::validate() const {
    if (paths < 1) throw std::invalid_argument("paths must be >= 1");
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
}

double stable_standard_sample(double alpha, double beta, double u1, double u2) {
    const double U = kPi * (u1 - 0.5);
    const double W = -std::log(u2);
    const double t = beta * std::tan(kPi * alpha / 2.0);
    const double B = std::atan(t) / alpha;
    const double S = std::pow(1.0 + t * t, 0.5 / alpha);
    return S * std::sin(alpha * (U + B)) / std::pow(std::cos(U), 1.0 / alpha) *
           std::pow(std::cos(U - alpha * (U + B)) / W, (1.0 - alpha) / alpha);
}

McReport simulate_bm_hitting(double x, const PointSet& set, const PathConfig& cfg,
                             double mu, double sigma2, bool parallel) {
    return bm_impl(x, set, cfg, mu, sigma2, parallel);
}

McReport simulate_bm_hitting_serial(double x, const PointSet& set,
                                    const PathConfig& cfg, double mu,
                                    double sigma2) {
    return bm_impl(x, set, cfg, mu, sigma2, false);
}

McReport simulate_stable_eps_hitting(const ProcessModel& model, double x,
                                     const PointSet& set, const PathConfig& cfg,
                                     bool parallel) {
    return stable_impl(model, x, set, cfg, parallel);
}

McReport simulate_stable_eps_hitting_serial(const ProcessModel& model, double x,
                                            const PointSet& set,
                                            const PathConfig& cfg) {
    return stable_impl(model, x, set, cfg, false);
}

McReport simulate_stable_eps_extrapolated(const ProcessModel& model, double x,
                                          const PointSet& set,
                                          const PathConfig& cfg, bool parallel) {
    const StableParams sp = stable_params(model);
    const std::vector<double> eps_list = {4.0 * cfg.eps, 2.0 * cfg.eps, cfg.eps};
    std::vector<McReport> runs;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        PathConfig c = cfg;
        c.eps = eps_list[k];
        c.step = cfg.step * std::pow(eps_list[k] / cfg.eps, sp.alpha);
        c.seed = cfg.seed + k;  // independent streams per eps level
        runs.push_back(stable_impl(model, x, set, c, parallel));
    }

    // Linear least-squares fit p(eps) = p0 + c * eps^{2-alpha} per point.
    const double expo = 2.0 - sp.alpha;
    std::vector<double> z(eps_list.size());
    double zbar = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        z[k] = std::pow(eps_list[k], expo);
        zbar += z[k];
    }
    zbar /= static_cast<double>(z.size());
    double szz = 0.0;
    for (double zk : z) szz += (zk - zbar) * (zk - zbar);

    McReport rep = runs.back();  // smallest-eps run carries counts and SEs
    rep.eps_schedule = eps_list;
    double total = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        double pbar = 0.0;
        for (const auto& r : runs) pbar += r.estimates[i];
        pbar /= static_cast<double>(runs.size());
        double spz = 0.0;
        for (std::size_t k = 0; k < runs.size(); ++k)
            spz += (z[k] - zbar) * (runs[k].estimates[i] - pbar);
        const double slope = szz > 0.0 ? spz / szz : 0.0;
        rep.estimates[i] = std::clamp(pbar - slope * zbar, 0.0, 1.0);
        total += rep.estimates[i];
    }
    if (total > 0.0)
        for (auto& e : rep.estimates) e /= total;
    double worst_censor = 0.0;
    for (const auto& r : runs)
        worst_censor = std::max(worst_censor, r.censored_fraction);
    rep.eps_bias_warning = worst_censor > 0.05;
    return rep;
}

}  // namespace levyhit

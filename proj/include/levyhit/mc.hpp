#ifndef LEVYHIT_MC_HPP
#define LEVYHIT_MC_HPP

#include <cstdint>
#include <vector>

#include "levyhit/hitting.hpp"
#include "levyhit/models.hpp"

namespace levyhit {

struct PathConfig {
    long long paths = 100000;
    double step = 1e-3;    // time step for jump-process paths
    double eps = 1e-3;     // hitting radius for jump-process paths
    std::uint64_t seed = 12345;
    double horizon = 0.0;  // 0: heuristic default from the point set

    void validate() const;
};

struct McReport {
    std::vector<double> estimates;   // per point, normalized over decided paths
    std::vector<double> std_errors;  // binomial standard errors
    std::vector<long long> counts;   // raw hit tallies per point
    double censored_fraction = 0.0;  // undecided (or escaped) paths
    std::vector<double> eps_schedule;
    std::uint64_t seed = 0;
    long long paths = 0;
    bool eps_bias_warning = false;
};

/// Brownian motion with drift mu and variance sigma2: path continuity
/// reduces the first hit to an exact Bernoulli draw between the two
/// neighbors of x (or a single reachable endpoint outside the hull), so
/// there is no time-discretization error.  Undrawn mass outside the
/// hull with outward drift is reported as censored_fraction.
McReport simulate_bm_hitting(double x, const PointSet& set, const PathConfig& cfg,
                             double mu = 0.0, double sigma2 = 1.0,
                             bool parallel = true);

/// Serial reference for the kernel above; bitwise-identical tallies.
McReport simulate_bm_hitting_serial(double x, const PointSet& set,
                                    const PathConfig& cfg, double mu = 0.0,
                                    double sigma2 = 1.0);

/// Euler walk of a strictly stable process; a path is decided when a
/// sampled position falls within eps of a target point.  Loose-tolerance
/// validation only: eps-hitting converges to point hitting as eps -> 0.
McReport simulate_stable_eps_hitting(const ProcessModel& model, double x,
                                     const PointSet& set, const PathConfig& cfg,
                                     bool parallel = true);

McReport simulate_stable_eps_hitting_serial(const ProcessModel& model, double x,
                                            const PointSet& set,
                                            const PathConfig& cfg);

/// Runs eps, 2 eps and 4 eps and extrapolates the hit distribution to
/// eps -> 0 with a linear fit in eps^{2-alpha} (validation heuristic for
/// the bias of eps-ball hitting).  The step is scaled as eps^alpha.
McReport simulate_stable_eps_extrapolated(const ProcessModel& model, double x,
                                          const PointSet& set,
                                          const PathConfig& cfg,
                                          bool parallel = true);

/// One standard strictly stable variate (Chambers-Mallows-Stuck) with
/// exponent |t|^alpha (1 - i beta tan(pi alpha/2) sgn t), from two
/// uniforms in (0,1).
double stable_standard_sample(double alpha, double beta, double u1, double u2);

}  // namespace levyhit

#endif  // LEVYHIT_MC_HPP

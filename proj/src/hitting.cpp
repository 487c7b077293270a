#include "levyhit/hitting.hpp"

#include <algorithm>
#include <cmath>

namespace levyhit {

PointSet::PointSet(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("point set must be nonempty");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i] > points_[i - 1]))
            throw std::invalid_argument("points must be strictly increasing");
}

std::optional<std::size_t> PointSet::index_of(double x) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), x);
    if (it != points_.end() && *it == x)
        return static_cast<std::size_t>(it - points_.begin());
    return std::nullopt;
}

PointSet PointSet::without(std::size_t i) const {
    std::vector<double> pts = points_;
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
    return PointSet(std::move(pts));
}

double two_point(const ResolventEvaluator& ev, double x, double a, double b) {
    if (a == b) throw std::domain_error("two_point requires a != b");
    if (x == a) return 1.0;
    if (x == b) return 0.0;
    const double h_ba = ev.h(b - a);
    const double h_xb = ev.h(x - b);
    const double h_xa = ev.h(x - a);
    const double h_ab = ev.h(a - b);
    if (ev.model().is_recurrent())
        return (h_ba + h_xb - h_xa) / (h_ab + h_ba);
    const double k = ev.kappa();
    return (h_ba + h_xb - h_xa - k * h_xb * h_ba) /
           (h_ab + h_ba - k * h_ab * h_ba);
}

double single_point(const ResolventEvaluator& ev, double x, double a) {
    if (x == a) return 1.0;
    if (ev.model().is_recurrent()) return 1.0;
    return 1.0 - ev.kappa() * ev.h(x - a);
}

Matrix pairwise_matrix(const ResolventEvaluator& ev, const PointSet& set,
                       std::size_t pivot) {
    const std::size_t n = set.size();
    if (n < 2) throw std::invalid_argument("pairwise_matrix needs n >= 2");
    if (pivot >= n) throw std::invalid_argument("pivot out of range");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (i != pivot) idx.push_back(i);
    Matrix m(n - 1, n - 1);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            m(r, c) = (r == c) ? 1.0
                              : two_point(ev, set[idx[c]], set[idx[r]], set[pivot]);
        }
    }
    return m;
}

namespace {

/// Solve the pairwise system for one pivot; returns probabilities for
/// the non-pivot indices (in set order) plus the residual.
std::pair<std::vector<double>, SolveResult> pivot_solve(
    const ResolventEvaluator& ev, const PointSet& set, double x,
    std::size_t pivot, const HittingOptions& opts) {
    const std::size_t n = set.size();
    Matrix m = pairwise_matrix(ev, set, pivot);
    std::vector<double> v;
    v.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (i != pivot) v.push_back(two_point(ev, x, set[i], set[pivot]));
    SolveResult sol;
    try {
        sol = solve_checked(m, v, opts.condition_limit);
    } catch (const singular_matrix& e) {
        throw singular_matrix(
            std::string("pairwise hitting matrix not invertible (it should be, "
                        "as the Green matrix of a killed finite chain): ") +
            e.what());
    }
    return {sol.x, std::move(sol)};
}

}  // namespace

HittingDistribution multi_point(const ResolventEvaluator& ev,
                                const HittingProblem& problem,
                                const HittingOptions& opts) {
    const PointSet& set = problem.set;
    const double x = problem.start;
    const std::size_t n = set.size();
    HittingDistribution out;
    out.probs.assign(n, 0.0);
    out.raw.assign(n, 0.0);
    out.provenance.assign(n, EntryProvenance::Direct);

    if (auto at = set.index_of(x)) {
        out.probs[*at] = out.raw[*at] = 1.0;
        out.total = 1.0;
        return out;
    }
    if (n == 1) {
        const double p = single_point(ev, x, set[0]);
        out.raw[0] = p;
        out.probs[0] = std::clamp(p, 0.0, 1.0);
        out.total = out.probs[0];
        return out;
    }

    // Pivot a_n covers entries 1..n-1; pivot a_1 covers 2..n.  The
    // overlap is a consistency check, the pivot entry comes from the
    // second solve (no reliance on the recurrent sum-to-one identity).
    auto [p_last, sol_last] = pivot_solve(ev, set, x, n - 1, opts);
    auto [p_first, sol_first] = pivot_solve(ev, set, x, 0, opts);

    for (std::size_t i = 0; i + 1 < n; ++i) out.raw[i] = p_last[i];
    out.raw[n - 1] = p_first[n - 2];

    double overlap = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i)
        overlap = std::max(overlap, std::abs(p_last[i] - p_first[i - 1]));
    out.pivot_overlap = overlap;
    if (overlap > opts.consistency_tol)
        throw numeric_error("multi_point pivot solves disagree by " +
                                std::to_string(overlap),
                            overlap);

    out.residual = std::max(sol_last.residual, sol_first.residual);
    for (std::size_t i = 0; i < n; ++i) {
        out.probs[i] = std::clamp(out.raw[i], 0.0, 1.0);
        out.provenance[i] = EntryProvenance::Solved;
        out.total += out.probs[i];
    }
    return out;
}

GreenMatrix green_matrix(const ResolventEvaluator& ev, const PointSet& set,
                         std::size_t pivot) {
    const std::size_t n = set.size();
    if (n < 2) throw std::invalid_argument("green_matrix needs n >= 2");
    if (pivot >= n) throw std::invalid_argument("pivot out of range");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (i != pivot) idx.push_back(i);
    Matrix g(n - 1, n - 1);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            const double p =
                (r == c) ? 1.0
                         : two_point(ev, set[idx[r]], set[idx[c]], set[pivot]);
            g(r, c) = p * ev.h_B(set[idx[c]] - set[pivot]);
        }
    }
    LuFactor lu(g);
    return GreenMatrix{std::move(g), pivot, lu.condition()};
}

}  // namespace levyhit

#ifndef LEVYHIT_HITTING_HPP
#define LEVYHIT_HITTING_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "levyhit/linalg.hpp"
#include "levyhit/resolvent.hpp"

namespace levyhit {

/// Sorted distinct target points a_1 < ... < a_n, n >= 1.
class PointSet {
public:
    explicit PointSet(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }

    /// Index of x if it coincides exactly with a point.
    std::optional<std::size_t> index_of(double x) const;

    /// The set with point i removed.
    PointSet without(std::size_t i) const;

private:
    std::vector<double> points_;
};

struct HittingProblem {
    PointSet set;
    double start;
};

enum class EntryProvenance { Direct, Solved };

struct HittingDistribution {
    std::vector<double> probs;  // clamped to [0,1]
    std::vector<double> raw;    // pre-clamp values
    std::vector<EntryProvenance> provenance;
    double residual = 0.0;       // linear-solve residual (inf norm)
    double total = 0.0;          // sum of clamped entries
    double pivot_overlap = 0.0;  // max deviation between the two pivot solves
};

struct GreenMatrix {
    Matrix entries;     // (n-1) x (n-1), pivot row/column removed
    std::size_t pivot;  // index into the point set
    double condition;
};

struct HittingOptions {
    double consistency_tol = 1e-6;  // pivot-overlap gate
    double condition_limit = 1e12;
};

/// P_x(T_a < T_b); a != b.  Returns 1 at x = a and 0 at x = b.
double two_point(const ResolventEvaluator& ev, double x, double a, double b);

/// P_x(T_a < infinity): 1 for recurrent models, 1 - kappa h(x-a) otherwise.
double single_point(const ResolventEvaluator& ev, double x, double a);

/// (n-1)x(n-1) matrix with entry (k,l) = P_{a_l}(T_{a_k} < T_{a_pivot}),
/// k,l ranging over the non-pivot indices in order; unit diagonal.
Matrix pairwise_matrix(const ResolventEvaluator& ev, const PointSet& set,
                       std::size_t pivot);

/// First-hit distribution (P_x(T_{a_i} = T_A))_i via the pairwise linear
/// system, solved once with pivot a_n and once with pivot a_1.
HittingDistribution multi_point(const ResolventEvaluator& ev,
                                const HittingProblem& problem,
                                const HittingOptions& opts = HittingOptions{});

/// Diagnostic: G_{i,k} = P_{a_i}(T_{a_k} < T_{a_pivot}) h^B(a_k - a_pivot).
GreenMatrix green_matrix(const ResolventEvaluator& ev, const PointSet& set,
                         std::size_t pivot);

}  // namespace levyhit

#endif  // LEVYHIT_HITTING_HPP

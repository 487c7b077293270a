#ifndef LEVYHIT_TRACE_Q_HPP
#define LEVYHIT_TRACE_Q_HPP

#include <limits>
#include <vector>

#include "levyhit/hitting.hpp"

namespace levyhit {

struct QMatrix {
    Matrix q;                    // n x n generator
    std::vector<double> labels;  // the point set
    Recurrence recurrence;
    std::vector<double> row_sums;
    double min_offdiag = 0.0;
    double max_abs_row_sum = 0.0;
};

struct ExcursionVector {
    std::size_t base;            // index i of the excursion origin a_i
    std::vector<double> raw;     // n^{a_i}(T_{a_k} < T_{a_i}), k != i, in set order
    std::vector<double> solved;  // n^{a_i}(T_{a_k} = T_{A_n}), k != i
};

struct QBuildOptions {
    /// Negative slack tolerated on off-diagonal entries and (recurrent)
    /// row sums before declaring a construction error.  NaN: pick
    /// 1e-9 on the closed-form h path and 1e-5 on the quadrature path.
    double slack = std::numeric_limits<double>::quiet_NaN();
    HittingOptions hitting{};
    bool validate = true;
};

/// Raw excursion rates n^{a_i}(T_{a_k} < T_{a_i}) = n^0(T_{a_k-a_i} < T_0)
/// by spatial homogeneity; k != i, in set order.
std::vector<double> excursion_raw_vector(const ResolventEvaluator& ev,
                                         const PointSet& set, std::size_t i);

/// Solves the pairwise system (pivot a_i) against the raw rates.
ExcursionVector excursion_solved_vector(const ResolventEvaluator& ev,
                                        const PointSet& set, std::size_t i);

/// q_{i,i} = -sum_k n^{a_i}(T_{a_k} = T_{A_n}).
double q_diagonal(const ResolventEvaluator& ev, const PointSet& set,
                  std::size_t i);

/// q_{i,j} = -q_{i,i} P_{a_i}(T_{a_j} = T_{A_n \ {a_i}}).
double q_offdiagonal(const ResolventEvaluator& ev, const PointSet& set,
                     std::size_t i, std::size_t j);

QMatrix build_Q(const ResolventEvaluator& ev, const PointSet& set,
                const QBuildOptions& opts = QBuildOptions{});

/// Closed-form generators for n in {2,3}: Brownian motion, strictly
/// stable (the phi_1..phi_4 functions of A, B, C) and recurrent
/// spectrally negative families.  Golden oracle for build_Q.
QMatrix closed_form_Q(const ProcessModel& model, const PointSet& set);

/// Numeric route via the killed trace process: invert the resolvent
/// matrix U^lambda(i,j) = r_lambda(a_j - a_i) and extrapolate
/// Q^lambda = -(U^lambda)^{-1} entrywise as lambda -> 0+.
QMatrix getoor_limit_Q(const ResolventEvaluator& ev, const PointSet& set,
                       const std::vector<double>& lambda_sequence = {});

/// Q^lambda at a fixed lambda (no extrapolation).
Matrix getoor_Q_at(const ResolventEvaluator& ev, const PointSet& set,
                   double lambda);

}  // namespace levyhit

#endif  // LEVYHIT_TRACE_Q_HPP

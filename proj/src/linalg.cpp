#include "levyhit/linalg.hpp"

#include <cmath>
#include <limits>

namespace levyhit {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        if (s > best) best = s;
    }
    return best;
}

LuFactor::LuFactor(const Matrix& a) : lu_(a), perm_(a.rows()), norm_a_(a.norm_inf()) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("LU factorization needs a square matrix");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                p = i;
            }
        }
        if (best == 0.0) {
            singular_ = true;
            return;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu_(i, k) /= lu_(k, k);
            const double m = lu_(i, k);
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

std::vector<double> LuFactor::solve(const std::vector<double>& rhs) const {
    if (singular_) throw singular_matrix("matrix is singular");
    const std::size_t n = lu_.rows();
    if (rhs.size() != n) throw std::invalid_argument("rhs size mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

Matrix LuFactor::inverse() const {
    const std::size_t n = lu_.rows();
    Matrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        auto col = solve(e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

double LuFactor::condition() const {
    if (singular_) return std::numeric_limits<double>::infinity();
    return norm_a_ * inverse().norm_inf();
}

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

SolveResult solve_checked(const Matrix& a, const std::vector<double>& b,
                          double condition_limit) {
    LuFactor lu(a);
    if (lu.singular()) throw singular_matrix("linear system is singular");
    const double cond = lu.condition();
    if (cond > condition_limit)
        throw singular_matrix("linear system condition estimate " +
                              std::to_string(cond) + " exceeds limit");
    auto x = lu.solve(b);
    auto ax = mat_vec(a, x);
    double res = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
        res = std::max(res, std::abs(ax[i] - b[i]));
    return SolveResult{std::move(x), res, cond};
}

}  // namespace levyhit

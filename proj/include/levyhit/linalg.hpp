#ifndef LEVYHIT_LINALG_HPP
#define LEVYHIT_LINALG_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace levyhit {

/// Small dense row-major matrix.  Everything in this project is n <= 10
/// or so; no attempt at blocking or sparsity.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double norm_inf() const;  // max absolute row sum

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

class singular_matrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-pivoted LU factorization of a square matrix.
class LuFactor {
public:
    explicit LuFactor(const Matrix& a);

    std::vector<double> solve(const std::vector<double>& rhs) const;
    Matrix inverse() const;

    /// Infinity-norm condition estimate ||A|| * ||A^{-1}||, computed
    /// exactly via the inverse (the matrices here are tiny).
    double condition() const;

    bool singular() const { return singular_; }

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    double norm_a_;
    bool singular_ = false;
};

/// Solves a x = b and returns (x, residual_inf, condition).
struct SolveResult {
    std::vector<double> x;
    double residual;
    double condition;
};

SolveResult solve_checked(const Matrix& a, const std::vector<double>& b,
                          double condition_limit = 1e12);

std::vector<double> mat_vec(const Matrix& a, const std::vector<double>& x);

}  // namespace levyhit

#endif  // LEVYHIT_LINALG_HPP

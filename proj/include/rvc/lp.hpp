#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "rvc/types.hpp"

namespace rvc::lp {

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    /// Builds from nested rows; all rows must share a length.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Tolerances {
    /// Accepted equality residual and Phase-I infeasibility.
    double feas = 1e-9;
    /// Smallest magnitude accepted as a pivot; also the rank threshold of the
    /// dependent-row pre-pass.
    double pivot = 1e-11;
};

/// maximize alpha subject to a_eq * beta = b_eq, beta_i >= alpha, alpha <= alpha_cap.
struct MaxMinSlack {};
/// maximize beta[index] subject to a_eq * beta = b_eq, beta >= 0.
struct MaxVariable {
    std::size_t index = 0;
};

using Objective = std::variant<MaxMinSlack, MaxVariable>;

struct LinearProgram {
    Matrix a_eq;
    std::vector<double> b_eq;
    Objective objective = MaxMinSlack{};
    double alpha_cap = 1.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status s);

struct LpResult {
    Status status = Status::Infeasible;
    std::vector<double> beta;
    /// Achieved min_i beta_i (max-min-slack) or the objective value (MaxVariable).
    double alpha = 0.0;
};

/// Phase-I style program: the most interior point of {a_eq beta = b_eq} in the
/// min-coordinate sense, with alpha capped at lp.alpha_cap. Infeasible only
/// when the equality system itself is unsatisfiable.
LpResult solve_max_min_slack(const LinearProgram& lp, const Tolerances& tol = {});

/// Any beta with a_eq beta = b_eq (and beta >= 0 when nonneg), or Infeasible.
LpResult solve_feasibility(const Matrix& a_eq, std::span<const double> b_eq, bool nonneg,
                           const Tolerances& tol = {});

/// Dispatches on lp.objective.
LpResult solve(const LinearProgram& lp, const Tolerances& tol = {});

/// max_i |(a beta - b)_i|, computed directly from the inputs.
double residual_inf_norm(const Matrix& a, std::span<const double> beta, std::span<const double> b);

}  // namespace rvc::lp

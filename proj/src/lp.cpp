#include "rvc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace rvc::lp {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
    }
    return "unknown";
}

double residual_inf_norm(const Matrix& a, std::span<const double> beta, std::span<const double> b) {
    if (a.cols() != beta.size() || a.rows() != b.size())
        throw DimensionMismatch("residual: shapes do not match");
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double acc = -b[r];
        for (std::size_t c = 0; c < a.cols(); ++c) acc += a(r, c) * beta[c];
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

namespace {

constexpr std::size_t kMaxIterations = 200000;
constexpr std::size_t kBlandAfter = 50;
constexpr double kReducedCostTol = 1e-10;
// Ratio-test entries below this are treated as zero; pivoting on them wrecks
// the tableau.
constexpr double kRatioPivotTol = 1e-9;

void validate(const Matrix& a, std::span<const double> b) {
    if (a.rows() != b.size()) {
        throw DimensionMismatch("a_eq has " + std::to_string(a.rows()) + " rows but b_eq has " +
                                std::to_string(b.size()) + " entries");
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (!std::isfinite(b[r])) throw InvalidArgument("non-finite entry in b_eq");
        for (double v : a.row(r))
            if (!std::isfinite(v)) throw InvalidArgument("non-finite entry in a_eq");
    }
}

// Drops rows that are linear combinations of earlier ones. Returns nullopt if
// a dependent row disagrees with its right-hand side.
std::optional<std::vector<std::size_t>> independent_rows(const Matrix& a, std::span<const double> b,
                                                         const Tolerances& tol) {
    const std::size_t n = a.cols();
    std::vector<std::vector<double>> basis;  // reduced rows, pivot entry 1, rhs appended
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::vector<double> row(a.row(r).begin(), a.row(r).end());
        row.push_back(b[r]);
        double scale = 1.0;
        for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, std::abs(row[c]));
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const double f = row[pivots[k]];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= n; ++c) row[c] -= f * basis[k][c];
        }
        std::size_t best = n;
        double best_abs = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (std::abs(row[c]) > best_abs) {
                best_abs = std::abs(row[c]);
                best = c;
            }
        }
        if (best_abs <= tol.pivot * scale) {
            if (std::abs(row[n]) > tol.feas * std::max(1.0, std::abs(b[r]))) return std::nullopt;
            continue;
        }
        const double p = row[best];
        for (double& v : row) v /= p;
        basis.push_back(std::move(row));
        pivots.push_back(best);
        kept.push_back(r);
    }
    return kept;
}

// Solves the square system m x = rhs by Gaussian elimination with partial
// pivoting. Returns nullopt when m is numerically singular.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> m,
                                                std::vector<double> rhs, double pivot_tol) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) <= pivot_tol) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= m[i][c] * x[c];
        x[i] = acc / m[i][i];
    }
    return x;
}

struct StandardResult {
    Status status = Status::Infeasible;
    std::vector<double> x;
};

// Dense tableau for: minimize c'x subject to A x = b, x >= 0, b >= 0.
// Columns 0..n-1 are structural, n..n+m-1 artificial, the last is the rhs.
class Tableau {
public:
    Tableau(const Matrix& a, const std::vector<std::size_t>& rows, std::span<const double> b,
            const Tolerances& tol)
        : m_(rows.size()), n_(a.cols()), width_(n_ + m_ + 1), tol_(tol),
          t_(m_ * width_, 0.0), basis_(m_) {
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = b[rows[i]] < 0.0 ? -1.0 : 1.0;
            for (std::size_t c = 0; c < n_; ++c) at(i, c) = sign * a(rows[i], c);
            at(i, n_ + i) = 1.0;
            at(i, width_ - 1) = sign * b[rows[i]];
            basis_[i] = n_ + i;
        }
    }

    // Dantzig pricing with the largest-pivot tie-break while progress is
    // made; after a run of degenerate pivots switch to Bland's rule (lowest
    // index enters, lowest-index basic variable leaves on ties), which cannot
    // cycle.
    Status optimize(const std::vector<double>& cost, std::size_t allowed_cols) {
        std::size_t degenerate_run = 0;
        std::vector<double> reduced(allowed_cols);
        for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
            const bool bland = degenerate_run >= kBlandAfter;
            std::optional<std::size_t> entering;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                if (is_basic(j)) continue;
                double rc = cost[j];
                for (std::size_t i = 0; i < m_; ++i) rc -= cost[basis_[i]] * at(i, j);
                if (rc >= -kReducedCostTol) continue;
                if (!entering || (!bland && rc < reduced[*entering])) entering = j;
                reduced[j] = rc;
                if (bland) break;
            }
            if (!entering) return Status::Optimal;

            const std::size_t col = *entering;
            // Harris two-pass ratio test: allow each basic variable to overshoot
            // by feas_tol, then among the rows blocking within that bound take
            // the largest pivot. Under Bland's rule keep the exact minimum ratio
            // and break ties by basic index.
            double bound = INFINITY;
            for (std::size_t i = 0; i < m_; ++i) {
                const double coef = at(i, col);
                if (coef <= kRatioPivotTol) continue;
                const double relaxed = bland ? std::max(0.0, rhs(i)) / coef
                                             : (std::max(0.0, rhs(i)) + tol_.feas) / coef;
                bound = std::min(bound, relaxed);
            }
            std::optional<std::size_t> leaving;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double coef = at(i, col);
                if (coef <= kRatioPivotTol) continue;
                const double ratio = std::max(0.0, rhs(i)) / coef;
                if (ratio > bound + 1e-12 * std::max(1.0, bound)) continue;
                const bool better = !leaving || (bland ? basis_[i] < basis_[*leaving]
                                                       : coef > at(*leaving, col));
                if (better) {
                    leaving = i;
                    best_ratio = ratio;
                }
            }
            if (!leaving) return Status::Unbounded;
            degenerate_run = best_ratio <= 1e-13 ? degenerate_run + 1 : 0;
            // Bound shift: the ratios above treat an overshoot as zero, so the
            // pivot must too. Otherwise a small pivot on a row sitting at
            // -feas_tol sends the entering variable far negative.
            if (rhs(*leaving) < 0.0) at(*leaving, width_ - 1) = 0.0;
            pivot(*leaving, col);
        }
        throw SolverFailure("simplex iteration limit reached");
    }

    double artificial_mass() const {
        double total = 0.0;
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= n_) total += std::abs(rhs(i));
        return total;
    }

    // Pivots zero-level artificials out of the basis where a structural column
    // allows it. Rows where none does are redundant and stay inert.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::optional<std::size_t> best;
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic(j) || std::abs(at(i, j)) <= tol_.pivot) continue;
                if (!best || std::abs(at(i, j)) > std::abs(at(i, *best))) best = j;
            }
            if (best) pivot(i, *best);
        }
    }

    std::vector<double> solution() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = rhs(i);
        return x;
    }

    const std::vector<std::size_t>& basis() const { return basis_; }
    std::size_t structural() const { return n_; }

private:
    double& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
    double at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }
    double rhs(std::size_t r) const { return at(r, width_ - 1); }

    bool is_basic(std::size_t j) const {
        return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
    }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t k = 0; k < width_; ++k) at(r, k) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < width_; ++k) at(i, k) -= f * at(r, k);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    Tolerances tol_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

// Recomputes the basic variables from the original rows so the returned point
// carries no accumulated tableau round-off.
void refine(const Matrix& a, const std::vector<std::size_t>& rows, std::span<const double> b,
            const Tableau& tab, std::vector<double>& x, double pivot_tol) {
    std::vector<std::size_t> cols;
    for (std::size_t v : tab.basis()) {
        if (v >= tab.structural()) return;
        cols.push_back(v);
    }
    std::vector<std::vector<double>> m(rows.size(), std::vector<double>(cols.size()));
    std::vector<double> rhs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) m[i][k] = a(rows[i], cols[k]);
        rhs[i] = b[rows[i]];
    }
    auto sol = solve_square(std::move(m), std::move(rhs), pivot_tol);
    if (!sol) return;
    std::vector<double> refined(x.size(), 0.0);
    for (std::size_t k = 0; k < cols.size(); ++k) refined[cols[k]] = (*sol)[k];
    const bool nonneg = std::all_of(refined.begin(), refined.end(),
                                     [](double v) { return v >= -1e-12; });
    if (nonneg && residual_inf_norm(a, refined, b) <= residual_inf_norm(a, x, b))
        x = std::move(refined);
}

StandardResult solve_standard(const Matrix& a, std::span<const double> b,
                              const std::vector<double>& cost, const Tolerances& tol) {
    auto rows = independent_rows(a, b, tol);
    if (!rows) return {Status::Infeasible, {}};

    Tableau tab(a, *rows, b, tol);
    const std::size_t n = a.cols();
    const std::size_t m = rows->size();

    std::vector<double> phase1(n + m, 0.0);
    std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
    tab.optimize(phase1, n + m);
    if (tab.artificial_mass() > tol.feas) return {Status::Infeasible, {}};
    tab.expel_artificials();

    std::vector<double> phase2(n + m, 0.0);
    std::copy(cost.begin(), cost.end(), phase2.begin());
    if (tab.optimize(phase2, n) == Status::Unbounded) return {Status::Unbounded, {}};

    std::vector<double> x = tab.solution();
    refine(a, *rows, b, tab, x, tol.pivot);
    return {Status::Optimal, std::move(x)};
}

}  // namespace

LpResult solve_max_min_slack(const LinearProgram& lp, const Tolerances& tol) {
    validate(lp.a_eq, lp.b_eq);
    const std::size_t m = lp.a_eq.rows();
    const std::size_t n = lp.a_eq.cols();

    // beta = gamma + alpha * 1 with gamma >= 0 and alpha = a_plus - a_minus.
    // Columns: gamma (n), a_plus, a_minus, cap slack. Last row: alpha + s = cap.
    Matrix std_a(m + 1, n + 3);
    std::vector<double> std_b(m + 1);
    for (std::size_t r = 0; r < m; ++r) {
        double row_sum = 0.0;
        for (std::size_t c = 0; c < n; ++c) {
            std_a(r, c) = lp.a_eq(r, c);
            row_sum += lp.a_eq(r, c);
        }
        std_a(r, n) = row_sum;
        std_a(r, n + 1) = -row_sum;
        std_b[r] = lp.b_eq[r];
    }
    std_a(m, n) = 1.0;
    std_a(m, n + 1) = -1.0;
    std_a(m, n + 2) = 1.0;
    std_b[m] = lp.alpha_cap;

    std::vector<double> cost(n + 3, 0.0);
    cost[n] = -1.0;
    cost[n + 1] = 1.0;

    auto res = solve_standard(std_a, std_b, cost, tol);
    LpResult out;
    out.status = res.status;
    if (res.status != Status::Optimal) return out;
    out.alpha = res.x[n] - res.x[n + 1];
    out.beta.resize(n);
    for (std::size_t c = 0; c < n; ++c) out.beta[c] = res.x[c] + out.alpha;
    return out;
}

LpResult solve_feasibility(const Matrix& a_eq, std::span<const double> b_eq, bool nonneg,
                           const Tolerances& tol) {
    validate(a_eq, b_eq);
    const std::size_t m = a_eq.rows();
    const std::size_t n = a_eq.cols();
    LpResult out;
    if (nonneg) {
        auto res = solve_standard(a_eq, b_eq, std::vector<double>(n, 0.0), tol);
        out.status = res.status;
        out.beta = std::move(res.x);
    } else {
        Matrix split(m, 2 * n);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                split(r, c) = a_eq(r, c);
                split(r, n + c) = -a_eq(r, c);
            }
        }
        auto res = solve_standard(split, b_eq, std::vector<double>(2 * n, 0.0), tol);
        out.status = res.status;
        if (res.status == Status::Optimal) {
            out.beta.resize(n);
            for (std::size_t c = 0; c < n; ++c) out.beta[c] = res.x[c] - res.x[n + c];
        }
    }
    if (out.status == Status::Optimal && !out.beta.empty())
        out.alpha = *std::min_element(out.beta.begin(), out.beta.end());
    return out;
}

LpResult solve(const LinearProgram& lp, const Tolerances& tol) {
    if (std::holds_alternative<MaxMinSlack>(lp.objective)) return solve_max_min_slack(lp, tol);
    validate(lp.a_eq, lp.b_eq);
    const auto idx = std::get<MaxVariable>(lp.objective).index;
    if (idx >= lp.a_eq.cols()) throw DimensionMismatch("objective index out of range");
    std::vector<double> cost(lp.a_eq.cols(), 0.0);
    cost[idx] = -1.0;
    auto res = solve_standard(lp.a_eq, lp.b_eq, cost, tol);
    LpResult out;
    out.status = res.status;
    if (res.status == Status::Optimal) {
        out.beta = std::move(res.x);
        out.alpha = out.beta[idx];
    }
    return out;
}

}  // namespace rvc::lp

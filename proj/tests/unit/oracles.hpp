#pragma once

// Test-only reference implementations. They follow the textbook definitions
// literally and share no code with the library paths they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rvc/graph.hpp"
#include "rvc/lp.hpp"

namespace rvc::oracle {

// Assigns each node a label in {0: neither, 1: V1, 2: V2} by counting in base
// 3 and evaluates the (r,s) clauses with plain loops. s = 1 gives r-robustness.
inline bool robust_by_assignment(const Graph& g, int r, int s) {
    const std::size_t n = g.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;
    std::vector<int> label(n);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            label[i] = static_cast<int>(c % 3);
            c /= 3;
        }
        int size1 = 0, size2 = 0;
        for (int l : label) {
            size1 += l == 1;
            size2 += l == 2;
        }
        if (size1 == 0 || size2 == 0) continue;
        int reach1 = 0, reach2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (label[i] == 0) continue;
            int outside = 0;
            for (NodeId j : g.neighbors(i))
                if (label[j] != label[i]) ++outside;
            if (outside >= r) (label[i] == 1 ? reach1 : reach2)++;
        }
        const bool ok = reach1 == size1 || reach2 == size2 || reach1 + reach2 >= s;
        if (!ok) return false;
    }
    return true;
}

struct VertexOptimum {
    bool feasible = false;
    double alpha = 0.0;
};

// Maximizes alpha over {A beta = b, beta_i >= alpha, alpha <= cap} by visiting
// every basic solution: choose which inequalities are tight, solve the square
// system with Eigen, keep feasible points. Assumes the optimum is attained at
// a vertex (true whenever the cap row keeps the polytope pointed in alpha).
inline VertexOptimum max_min_slack_by_vertices(const lp::Matrix& a, const std::vector<double>& b,
                                               double cap) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t vars = n + 1;  // beta, alpha
    // Inequality rows g'x <= h: alpha - beta_i <= 0 and alpha <= cap.
    std::vector<Eigen::VectorXd> ineq;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vars));
        g(static_cast<Eigen::Index>(i)) = -1.0;
        g(static_cast<Eigen::Index>(n)) = 1.0;
        ineq.push_back(g);
        rhs.push_back(0.0);
    }
    {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vars));
        g(static_cast<Eigen::Index>(n)) = 1.0;
        ineq.push_back(g);
        rhs.push_back(cap);
    }
    Eigen::MatrixXd aeq(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(vars));
    aeq.setZero();
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            aeq(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c);
    Eigen::VectorXd beq(static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) beq(static_cast<Eigen::Index>(r)) = b[r];

    VertexOptimum best;
    const std::size_t k = ineq.size();
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        const int tight = __builtin_popcount(mask);
        Eigen::MatrixXd sys(static_cast<Eigen::Index>(m + tight), static_cast<Eigen::Index>(vars));
        Eigen::VectorXd srhs(static_cast<Eigen::Index>(m + tight));
        sys.topRows(static_cast<Eigen::Index>(m)) = aeq;
        srhs.head(static_cast<Eigen::Index>(m)) = beq;
        Eigen::Index row = static_cast<Eigen::Index>(m);
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask & (1u << i))) continue;
            sys.row(row) = ineq[i].transpose();
            srhs(row) = rhs[i];
            ++row;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
        lu.setThreshold(1e-10);
        if (lu.rank() != static_cast<Eigen::Index>(vars)) continue;
        Eigen::VectorXd x = lu.solve(srhs);
        if ((sys * x - srhs).lpNorm<Eigen::Infinity>() > 1e-8) continue;
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) ok = ineq[i].dot(x) <= rhs[i] + 1e-9;
        if (!ok) continue;
        const double alpha = x(static_cast<Eigen::Index>(n));
        if (!best.feasible || alpha > best.alpha) {
            best.feasible = true;
            best.alpha = alpha;
        }
    }
    return best;
}

}  // namespace rvc::oracle

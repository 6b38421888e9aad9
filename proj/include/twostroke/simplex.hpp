#pragma once

// Dense two-phase primal simplex for max c^T x s.t. A x = b, x >= 0, with
// Bland's rule against cycling.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace twostroke {

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexResult {
    SimplexStatus status = SimplexStatus::infeasible;
    Eigen::VectorXd x;      // primal solution over the columns of A
    double value = 0.0;
    Eigen::VectorXd duals;  // y with A^T y >= c and b^T y = value
    // Basic column per row; an index >= A.cols() marks an artificial left in
    // the basis of a redundant row.
    std::vector<std::size_t> basis;
    bool degenerate = false;  // some basic variable sits at zero
    std::size_t iterations = 0;
};

SimplexResult simplex_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c, double tol = 1e-11);

}  // namespace twostroke

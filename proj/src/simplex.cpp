#include "twostroke/simplex.hpp"

#include <cmath>
#include <limits>

#include "twostroke/error.hpp"

namespace twostroke {

namespace {

using Index = Eigen::Index;

class Tableau {
public:
    // Rows 0..m-1 hold constraints, row m the reduced costs r_j = c_B B^-1 A_j - c_j.
    // Column cols holds the right-hand side.
    Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
        : m_(a.rows()), n_(a.cols()), t_(Eigen::MatrixXd::Zero(a.rows() + 1, a.cols() + a.rows() + 1)) {
        for (Index i = 0; i < m_; ++i) {
            const double sign = b(i) < 0.0 ? -1.0 : 1.0;
            t_.row(i).head(n_) = sign * a.row(i);
            t_(i, n_ + i) = 1.0;
            t_(i, cols()) = sign * b(i);
        }
        basis_.resize(static_cast<std::size_t>(m_));
        for (Index i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = static_cast<std::size_t>(n_ + i);
    }

    Index cols() const { return n_ + m_; }
    std::vector<std::size_t>& basis() { return basis_; }
    double rhs(Index i) const { return t_(i, cols()); }
    double entry(Index i, Index j) const { return t_(i, j); }

    // Installs the objective: cost per column (size cols()).
    void set_objective(const Eigen::VectorXd& cost) {
        cost_ = cost;
        t_.row(m_).setZero();
        t_.row(m_).head(cols()) = -cost.transpose();
        for (Index i = 0; i < m_; ++i) {
            const double cb = cost(static_cast<Index>(basis_[static_cast<std::size_t>(i)]));
            if (cb != 0.0) t_.row(m_) += cb * t_.row(i);
        }
    }

    double objective() const { return t_(m_, cols()); }

    void pivot(Index row, Index col) {
        t_.row(row) /= t_(row, col);
        for (Index i = 0; i <= m_; ++i) {
            if (i == row) continue;
            const double f = t_(i, col);
            if (f != 0.0) t_.row(i) -= f * t_.row(row);
        }
        t_(row, col) = 1.0;
        basis_[static_cast<std::size_t>(row)] = static_cast<std::size_t>(col);
    }

    // Bland's rule over columns [0, limit). Returns false when unbounded.
    bool run(Index limit, double tol, std::size_t& iterations) {
        while (true) {
            Index enter = -1;
            for (Index j = 0; j < limit; ++j) {
                if (t_(m_, j) < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Index i = 0; i < m_; ++i) {
                const double e = t_(i, enter);
                if (e <= tol) continue;
                const double ratio = t_(i, cols()) / e;
                if (ratio < best - tol ||
                    (std::abs(ratio - best) <= tol &&
                     basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            ++iterations;
        }
    }

private:
    Index m_;
    Index n_;
    Eigen::MatrixXd t_;
    Eigen::VectorXd cost_;
    std::vector<std::size_t> basis_;
};

}  // namespace

SimplexResult simplex_maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& c, double tol) {
    const Index m = a.rows();
    const Index n = a.cols();
    if (b.size() != m || c.size() != n || m == 0 || n == 0) {
        throw Error(ErrorCode::shape_mismatch, "simplex data has inconsistent shapes");
    }

    SimplexResult result;
    Tableau tab(a, b);

    // Phase 1: maximize minus the sum of artificials.
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.cols());
    phase1.tail(m).setConstant(-1.0);
    tab.set_objective(phase1);
    tab.run(tab.cols(), tol, result.iterations);
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (tab.objective() < -1e-9 * scale) {
        result.status = SimplexStatus::infeasible;
        return result;
    }

    // Drive artificials out wherever a real column can replace them.
    for (Index i = 0; i < m; ++i) {
        if (tab.basis()[static_cast<std::size_t>(i)] < static_cast<std::size_t>(n)) continue;
        for (Index j = 0; j < n; ++j) {
            if (std::abs(tab.entry(i, j)) > 1e-9) {
                tab.pivot(i, j);
                break;
            }
        }
    }

    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(tab.cols());
    phase2.head(n) = c;
    tab.set_objective(phase2);
    if (!tab.run(n, tol, result.iterations)) {
        result.status = SimplexStatus::unbounded;
        return result;
    }

    result.status = SimplexStatus::optimal;
    result.basis = tab.basis();
    result.x = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < m; ++i) {
        const std::size_t j = result.basis[static_cast<std::size_t>(i)];
        const double v = tab.rhs(i);
        if (std::abs(v) <= tol) result.degenerate = true;
        if (j < static_cast<std::size_t>(n)) result.x(static_cast<Index>(j)) = std::max(v, 0.0);
    }
    result.value = c.dot(result.x);

    // Duals from B^T y = c_B in the original (unflipped) rows.
    Eigen::MatrixXd basis_matrix(m, m);
    Eigen::VectorXd cb(m);
    for (Index i = 0; i < m; ++i) {
        const std::size_t j = result.basis[static_cast<std::size_t>(i)];
        if (j < static_cast<std::size_t>(n)) {
            basis_matrix.col(i) = a.col(static_cast<Index>(j));
            cb(i) = c(static_cast<Index>(j));
        } else {
            const Index r = static_cast<Index>(j) - n;
            basis_matrix.col(i).setZero();
            basis_matrix(r, i) = b(r) < 0.0 ? -1.0 : 1.0;
            cb(i) = 0.0;
        }
    }
    result.duals = basis_matrix.transpose().fullPivLu().solve(cb);
    return result;
}

}  // namespace twostroke

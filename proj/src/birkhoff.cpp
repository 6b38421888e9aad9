#include "twostroke/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twostroke/error.hpp"

namespace twostroke {

BistochasticMatrix::BistochasticMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw Error(ErrorCode::shape_mismatch, "bistochastic matrix must be square and non-empty");
    }
    if (!entries_.allFinite() || entries_.minCoeff() < 0.0) {
        throw Error(ErrorCode::invalid_argument, "bistochastic matrix has negative or non-finite entries");
    }
    const double row_gap = (entries_.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col_gap = (entries_.colwise().sum().array() - 1.0).abs().maxCoeff();
    if (row_gap > kBistochasticTol || col_gap > kBistochasticTol) {
        throw Error(ErrorCode::invalid_argument, "rows and columns must sum to 1");
    }
}

BistochasticMatrix BistochasticMatrix::from_mixture(
    const std::vector<std::pair<double, PermutationMap>>& terms) {
    if (terms.empty()) throw Error(ErrorCode::invalid_argument, "empty mixture");
    const auto n = static_cast<Eigen::Index>(terms.front().second.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [w, perm] : terms) {
        if (static_cast<Eigen::Index>(perm.size()) != n) {
            throw Error(ErrorCode::shape_mismatch, "permutation size mismatch");
        }
        m += w * permutation_matrix(perm);
    }
    return BistochasticMatrix(std::move(m));
}

Eigen::MatrixXd permutation_matrix(const PermutationMap& perm) {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t x = 0; x < perm.size(); ++x) {
        m(static_cast<Eigen::Index>(perm[x]), static_cast<Eigen::Index>(x)) = 1.0;
    }
    return m;
}

namespace {

constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

// Kuhn's augmenting path from column x.
bool augment(const Eigen::MatrixXd& m, double threshold, std::size_t x, std::vector<bool>& visited,
             std::vector<std::size_t>& col_of_row) {
    const auto n = static_cast<std::size_t>(m.rows());
    for (std::size_t r = 0; r < n; ++r) {
        if (visited[r] || !(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(x)) > threshold)) {
            continue;
        }
        visited[r] = true;
        if (col_of_row[r] == kUnmatched || augment(m, threshold, col_of_row[r], visited, col_of_row)) {
            col_of_row[r] = x;
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<PermutationMap> positive_matching(const Eigen::MatrixXd& m, double threshold) {
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<std::size_t> col_of_row(n, kUnmatched);
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<bool> visited(n, false);
        if (!augment(m, threshold, x, visited, col_of_row)) return std::nullopt;
    }
    std::vector<std::size_t> image(n);
    for (std::size_t r = 0; r < n; ++r) image[col_of_row[r]] = r;
    return PermutationMap(std::move(image));
}

BirkhoffTerms birkhoff_decompose(const BistochasticMatrix& b) {
    const std::size_t n = b.size();
    if (n > kMaxBirkhoffSize) throw Error(ErrorCode::guard_exceeded, "matrix too large to decompose");
    constexpr double snap = 1e-14;

    Eigen::MatrixXd rest = b.entries();
    BirkhoffTerms terms;
    const std::size_t max_terms = (n - 1) * (n - 1) + 1;
    double remaining = 1.0;
    while (remaining > kBistochasticTol && terms.size() < max_terms) {
        auto perm = positive_matching(rest, snap);
        if (!perm) throw Error(ErrorCode::no_matching, "no perfect matching on positive support");
        double w = std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n; ++x) {
            w = std::min(w, rest(static_cast<Eigen::Index>((*perm)[x]), static_cast<Eigen::Index>(x)));
        }
        for (std::size_t x = 0; x < n; ++x) {
            double& e = rest(static_cast<Eigen::Index>((*perm)[x]), static_cast<Eigen::Index>(x));
            e -= w;
            if (e <= snap) e = 0.0;
        }
        remaining -= w;
        terms.emplace_back(w, std::move(*perm));
    }
    return terms;
}

double reconstruction_error(const BistochasticMatrix& b, const BirkhoffTerms& terms) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(b.entries().rows(), b.entries().cols());
    for (const auto& [w, perm] : terms) sum += w * permutation_matrix(perm);
    return (b.entries() - sum).cwiseAbs().maxCoeff();
}

}  // namespace twostroke

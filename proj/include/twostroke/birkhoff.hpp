#pragma once

// Doubly stochastic matrices and their greedy decomposition into permutations.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "twostroke/permutation.hpp"

namespace twostroke {

inline constexpr double kBistochasticTol = 1e-10;
inline constexpr std::size_t kMaxBirkhoffSize = 64;

class BistochasticMatrix {
public:
    explicit BistochasticMatrix(Eigen::MatrixXd entries);

    // Sum_i w_i P_i, with P_i the matrix of perm: P(image[x], x) = 1.
    static BistochasticMatrix from_mixture(const std::vector<std::pair<double, PermutationMap>>& terms);

    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }

private:
    Eigen::MatrixXd entries_;
};

// Column x of the matrix carries basis index x to row image[x].
Eigen::MatrixXd permutation_matrix(const PermutationMap& perm);

// Perfect matching x -> image[x] using only entries above threshold, or
// nullopt when none exists.
std::optional<PermutationMap> positive_matching(const Eigen::MatrixXd& m, double threshold);

using BirkhoffTerms = std::vector<std::pair<double, PermutationMap>>;

// Greedy Birkhoff-von Neumann decomposition; at most (n-1)^2 + 1 terms.
BirkhoffTerms birkhoff_decompose(const BistochasticMatrix& b);

// max |B - sum w_i P_i|
double reconstruction_error(const BistochasticMatrix& b, const BirkhoffTerms& terms);

}  // namespace twostroke

#pragma once

// Linear-programming relaxation of the catalytic work problem: the best
// mixture of permutations that returns the catalyst marginal to its start.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "twostroke/permutation.hpp"
#include "twostroke/thermo.hpp"

namespace twostroke {

inline constexpr std::size_t kMaxExactLpSize = 8;
inline constexpr double kSignatureGrid = 1e-12;

enum class LPStatus { optimal, infeasible, guard_exceeded };

std::string to_string(LPStatus status);

// One class of permutations with identical work and final catalyst marginal.
struct LPColumn {
    PermutationMap representative;
    double work = 0.0;
    std::vector<double> catalyst_marginal;  // a_m^(k), k = 0..d_s-1
    std::size_t multiplicity = 1;
};

struct LPProblem {
    std::vector<double> energies;         // total energy per basis index
    std::vector<double> initial;          // initial populations
    std::vector<double> target_marginal;  // a^(k), k = 0..d_s-1
    std::vector<LPColumn> columns;
    bool restricted = false;              // columns are a subset of all permutations
};

struct LPSolution {
    double value = 0.0;
    LPStatus status = LPStatus::infeasible;
    std::vector<std::pair<PermutationMap, double>> alphas;
    double dual_y = 0.0;
    std::vector<double> dual_x;         // one per catalyst level except the last
    double constraint_residual = 0.0;   // max |sum alpha a_m - a| over all k, and |sum alpha - 1|
    double duality_gap = 0.0;
    double dual_violation = 0.0;
    std::vector<double> final_populations;
    std::vector<std::size_t> basis;     // column indices; npos marks a redundant row
    bool degenerate = false;
    std::string note;
};

void to_json(nlohmann::json& j, const LPSolution& sol);

// Columns over every permutation of the full space (n <= kMaxExactLpSize),
// otherwise identity plus the simple permutations (qubit pairs only) with
// restricted = true.
LPProblem build_lp_problem(const Spectrum& working_body, const PopulationVector& initial,
                           std::size_t catalyst_dim);

LPSolution solve_lp(const LPProblem& problem);

// working_body is the spectrum of hot (x) cold, indexed j*d_c + k; the
// catalyst Hamiltonian is trivial. Above kMaxExactLpSize the status is
// guard_exceeded and the value comes from the restricted columns, which is
// not a valid upper bound.
LPSolution lp_work_upper_bound(const Spectrum& working_body, const PopulationVector& initial,
                               std::size_t catalyst_dim);

double dual_objective(double y, std::span<const double> x, const LPProblem& problem);
// max_m (w_m - y - sum_k a_m^(k) x_k), clamped at 0.
double dual_infeasibility(double y, std::span<const double> x, const LPProblem& problem);

// Max of the duality gap and the dual constraint violation.
double lp_dual_check(const LPSolution& sol, const LPProblem& problem);

// Weights from the optimal basis via B alpha_B = (1, a^(1..d_s-1)). Empty
// when the basis is degenerate or contains a redundant row.
std::optional<std::vector<double>> vertex_weights(const LPSolution& sol, const LPProblem& problem);

// Best work among single columns whose final catalyst marginal equals the target.
double best_preserving_column(const LPProblem& problem, double tol = 1e-10);

}  // namespace twostroke

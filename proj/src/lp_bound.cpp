#include "twostroke/lp_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "twostroke/catalysis.hpp"
#include "twostroke/error.hpp"
#include "twostroke/simplex.hpp"

namespace twostroke {

namespace {

constexpr std::size_t kNoColumn = std::numeric_limits<std::size_t>::max();

std::vector<double> marginal(std::span<const double> p, std::size_t catalyst_dim) {
    const std::size_t block = p.size() / catalyst_dim;
    std::vector<double> out(catalyst_dim, 0.0);
    for (std::size_t x = 0; x < p.size(); ++x) out[x / block] += p[x];
    return out;
}

double energy(std::span<const double> p, std::span<const double> e) {
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) s += p[x] * e[x];
    return s;
}

class ColumnBuilder {
public:
    ColumnBuilder(LPProblem& problem, std::size_t catalyst_dim)
        : problem_(problem), catalyst_dim_(catalyst_dim),
          initial_energy_(energy(problem.initial, problem.energies)) {}

    void add(const PermutationMap& perm) {
        const auto final_state = apply_permutation(problem_.initial, perm);
        const double w = initial_energy_ - energy(final_state, problem_.energies);
        auto a = marginal(final_state, catalyst_dim_);

        std::vector<long long> key;
        key.reserve(a.size() + 1);
        key.push_back(std::llround(w / kSignatureGrid));
        for (double v : a) key.push_back(std::llround(v / kSignatureGrid));
        auto [it, inserted] = seen_.emplace(std::move(key), problem_.columns.size());
        if (inserted) {
            problem_.columns.push_back({perm, w, std::move(a), 1});
        } else {
            ++problem_.columns[it->second].multiplicity;
        }
    }

private:
    LPProblem& problem_;
    std::size_t catalyst_dim_;
    double initial_energy_;
    std::map<std::vector<long long>, std::size_t> seen_;
};

}  // namespace

std::string to_string(LPStatus status) {
    switch (status) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::guard_exceeded: return "guard_exceeded";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const LPSolution& sol) {
    j = nlohmann::json::object();
    j["value"] = sol.value;
    j["status"] = to_string(sol.status);
    auto alphas = nlohmann::json::array();
    for (const auto& [perm, w] : sol.alphas) {
        alphas.push_back({{"image", std::vector<std::size_t>(perm.image().begin(), perm.image().end())},
                          {"weight", w}});
    }
    j["alphas"] = alphas;
    j["dual"] = {{"y", sol.dual_y}, {"x", sol.dual_x}};
    j["residuals"] = {{"constraints", sol.constraint_residual},
                      {"duality_gap", sol.duality_gap},
                      {"dual_violation", sol.dual_violation}};
    if (!sol.note.empty()) j["note"] = sol.note;
}

LPProblem build_lp_problem(const Spectrum& working_body, const PopulationVector& initial,
                           std::size_t catalyst_dim) {
    const BasisShape& shape = initial.shape();
    if (catalyst_dim == 0 || shape.catalyst != catalyst_dim ||
        shape.hot * shape.cold != working_body.dim()) {
        throw Error(ErrorCode::shape_mismatch, "initial state does not match catalyst and working body");
    }
    LPProblem problem;
    const std::size_t n = initial.size();
    problem.initial.assign(initial.probs().begin(), initial.probs().end());
    problem.energies.resize(n);
    for (std::size_t x = 0; x < n; ++x) problem.energies[x] = working_body[x % working_body.dim()];
    problem.target_marginal = initial.catalyst_marginal();

    ColumnBuilder builder(problem, catalyst_dim);
    if (n <= kMaxExactLpSize) {
        for (const PermutationMap& perm : enumerate_permutations(n)) builder.add(perm);
        return problem;
    }
    problem.restricted = true;
    builder.add(PermutationMap::identity(n));
    if (shape.hot == 2 && shape.cold == 2) {
        for (std::size_t k = 1; k <= catalyst_dim; ++k) {
            builder.add(build_simple_perm(SimplePermSpec(catalyst_dim - k, k)));
        }
    }
    return problem;
}

LPSolution solve_lp(const LPProblem& problem) {
    const std::size_t d_s = problem.target_marginal.size();
    const auto rows = static_cast<Eigen::Index>(d_s);  // normalization plus d_s - 1 marginals
    const auto cols = static_cast<Eigen::Index>(problem.columns.size());

    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows), c(cols);
    b(0) = 1.0;
    for (Eigen::Index k = 1; k < rows; ++k) b(k) = problem.target_marginal[static_cast<std::size_t>(k - 1)];
    for (Eigen::Index j = 0; j < cols; ++j) {
        const LPColumn& col = problem.columns[static_cast<std::size_t>(j)];
        a(0, j) = 1.0;
        for (Eigen::Index k = 1; k < rows; ++k) a(k, j) = col.catalyst_marginal[static_cast<std::size_t>(k - 1)];
        c(j) = col.work;
    }

    LPSolution sol;
    const SimplexResult res = simplex_maximize(a, b, c);
    if (res.status != SimplexStatus::optimal) {
        sol.status = LPStatus::infeasible;
        return sol;
    }
    sol.status = problem.restricted ? LPStatus::guard_exceeded : LPStatus::optimal;
    if (problem.restricted) sol.note = "restricted-column (not a valid upper bound)";
    sol.value = res.value;
    sol.degenerate = res.degenerate;
    sol.dual_y = res.duals(0);
    sol.dual_x.assign(res.duals.data() + 1, res.duals.data() + rows);
    for (std::size_t j : res.basis) sol.basis.push_back(j < problem.columns.size() ? j : kNoColumn);

    sol.final_populations.assign(problem.initial.size(), 0.0);
    std::vector<double> reached(d_s, 0.0);
    double total = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
        const double w = res.x(j);
        if (w <= 0.0) continue;
        const LPColumn& col = problem.columns[static_cast<std::size_t>(j)];
        sol.alphas.emplace_back(col.representative, w);
        total += w;
        const auto moved = apply_permutation(problem.initial, col.representative);
        for (std::size_t x = 0; x < moved.size(); ++x) sol.final_populations[x] += w * moved[x];
        for (std::size_t k = 0; k < d_s; ++k) reached[k] += w * col.catalyst_marginal[k];
    }
    std::sort(sol.alphas.begin(), sol.alphas.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    sol.constraint_residual = std::abs(total - 1.0);
    for (std::size_t k = 0; k < d_s; ++k) {
        sol.constraint_residual =
            std::max(sol.constraint_residual, std::abs(reached[k] - problem.target_marginal[k]));
    }
    sol.duality_gap = std::abs(dual_objective(sol.dual_y, sol.dual_x, problem) - sol.value);
    sol.dual_violation = dual_infeasibility(sol.dual_y, sol.dual_x, problem);
    if (sol.status == LPStatus::optimal && sol.alphas.size() == 1) {
        sol.note = "achievable by a unitary";
    }
    return sol;
}

LPSolution lp_work_upper_bound(const Spectrum& working_body, const PopulationVector& initial,
                               std::size_t catalyst_dim) {
    return solve_lp(build_lp_problem(working_body, initial, catalyst_dim));
}

double dual_objective(double y, std::span<const double> x, const LPProblem& problem) {
    double v = y;
    for (std::size_t k = 0; k < x.size(); ++k) v += problem.target_marginal[k] * x[k];
    return v;
}

double dual_infeasibility(double y, std::span<const double> x, const LPProblem& problem) {
    double worst = 0.0;
    for (const LPColumn& col : problem.columns) {
        double lhs = y;
        for (std::size_t k = 0; k < x.size(); ++k) lhs += col.catalyst_marginal[k] * x[k];
        worst = std::max(worst, col.work - lhs);
    }
    return worst;
}

double lp_dual_check(const LPSolution& sol, const LPProblem& problem) {
    const double gap = std::abs(dual_objective(sol.dual_y, sol.dual_x, problem) - sol.value);
    return std::max(gap, dual_infeasibility(sol.dual_y, sol.dual_x, problem));
}

std::optional<std::vector<double>> vertex_weights(const LPSolution& sol, const LPProblem& problem) {
    if (sol.degenerate || sol.basis.empty()) return std::nullopt;
    const auto m = static_cast<Eigen::Index>(sol.basis.size());
    Eigen::MatrixXd basis(m, m);
    Eigen::VectorXd rhs(m);
    rhs(0) = 1.0;
    for (Eigen::Index k = 1; k < m; ++k) rhs(k) = problem.target_marginal[static_cast<std::size_t>(k - 1)];
    for (Eigen::Index i = 0; i < m; ++i) {
        const std::size_t j = sol.basis[static_cast<std::size_t>(i)];
        if (j == kNoColumn) return std::nullopt;
        basis(0, i) = 1.0;
        for (Eigen::Index k = 1; k < m; ++k) {
            basis(k, i) = problem.columns[j].catalyst_marginal[static_cast<std::size_t>(k - 1)];
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd alpha = lu.solve(rhs);
    return std::vector<double>(alpha.data(), alpha.data() + m);
}

double best_preserving_column(const LPProblem& problem, double tol) {
    double best = -std::numeric_limits<double>::infinity();
    for (const LPColumn& col : problem.columns) {
        bool keeps = true;
        for (std::size_t k = 0; k < col.catalyst_marginal.size() && keeps; ++k) {
            keeps = std::abs(col.catalyst_marginal[k] - problem.target_marginal[k]) <= tol;
        }
        if (keeps) best = std::max(best, col.work);
    }
    return best;
}

}  // namespace twostroke

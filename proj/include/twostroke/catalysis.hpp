#pragma once

// Catalyst-assisted engines on a qubit/qubit working body: the simple
// permutations Pi_gen(m, n), the stationary catalyst state they require,
// subspace flow accounting, and the sweeps built on top of them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twostroke/permutation.hpp"
#include "twostroke/thermo.hpp"

namespace twostroke {

inline constexpr std::size_t kMaxRealizedCatalystDim = 64;

// Fraction in lowest terms with a positive denominator.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t numerator, std::int64_t denominator);

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const;
    bool operator==(const Fraction&) const = default;
};

// Parses "p/q" or a decimal such as "2.2" (converted with realize_ratio).
Fraction parse_fraction(const std::string& text, std::size_t max_numerator = kMaxRealizedCatalystDim);

// Convergent of the continued fraction of x with numerator <= max_numerator
// that is closest to x.
Fraction realize_ratio(double x, std::size_t max_numerator = kMaxRealizedCatalystDim);

// m swaps feed the next block's ground level, n swaps feed its cold-excited
// level; the catalyst dimension is d = m + n.
struct SimplePermSpec {
    std::size_t m = 0;
    std::size_t n = 1;

    SimplePermSpec() = default;
    SimplePermSpec(std::size_t m_swaps, std::size_t n_swaps);

    std::size_t dim() const noexcept { return m + n; }
};

struct CatalystState {
    std::vector<double> p;
    double delta_p = 0.0;
    double residual = 0.0;  // max abs residual of the flow equations and normalization
};

struct FlowAccount {
    double hot_flow = 0.0;   // net population leaving the excited hot subspace
    double cold_flow = 0.0;  // net population leaving the excited cold subspace
};

// Basis index of |i, j, k> for catalyst block i and qubit levels j (hot), k (cold).
constexpr std::size_t qubit_pair_index(std::size_t block, std::size_t hot, std::size_t cold) {
    return 4 * block + 2 * hot + cold;
}

PermutationMap build_simple_perm(const SimplePermSpec& spec);

// Requires qubit hot and cold factors.
FlowAccount subspace_flows(const PopulationVector& initial, const PopulationVector& final_state);

// Stationarity system for the catalyst populations under Pi_gen(m, n). The
// raw solution is returned without sign checks.
CatalystState solve_catalyst_system(const SimplePermSpec& spec, double a_hot, double a_cold);

// As above, but rejects solutions with populations below -1e-12
// (infeasible_catalyst) and clips the remaining tiny negatives.
CatalystState solve_catalyst_state(const SimplePermSpec& spec, double a_hot, double a_cold);

// The closed-form denominator f(a_h, a_c, m, n).
double flow_denominator(const SimplePermSpec& spec, double a_hot, double a_cold);

// N (a_h^(m+n) - a_c^n) / f. Throws degenerate_point at a_h == a_c or a_h == 1.
double delta_p_closed_form(const SimplePermSpec& spec, double a_hot, double a_cold);

struct SimplePermOutcome {
    CycleReport report;           // from the flow identities
    CycleReport explicit_report;  // stroke_report on the full 4d-dimensional vectors
    CatalystState catalyst;
    FlowAccount flows;
};

// 1 - n omega_c / (d omega_h), evaluated as (d omega_h - n omega_c) / (d omega_h).
double simple_perm_efficiency(const SimplePermSpec& spec, double omega_hot, double omega_cold);

// Exact efficiency for rational frequencies.
Fraction simple_perm_efficiency(const SimplePermSpec& spec, Fraction omega_hot, Fraction omega_cold);

SimplePermOutcome simple_perm_report(const SimplePermSpec& spec, double omega_hot,
                                     double omega_cold, const InverseTemperatures& beta);

struct SimpleSweepOptimum {
    double efficiency = 0.0;   // best engine efficiency over m + n = d
    std::size_t best_n = 0;
    std::vector<std::optional<double>> efficiency_by_n;  // index n-1; empty when not an engine
};

// Sweeps every Pi_gen(d - n, n) and keeps engine strokes. Throws
// window_violation unless omega_c/omega_h <= d <= beta_c omega_c / (beta_h omega_h).
SimpleSweepOptimum optimal_simple_perm_efficiency(std::size_t d, double omega_hot,
                                                  double omega_cold,
                                                  const InverseTemperatures& beta);

// Smallest catalyst dimension d (and then smallest n) with d/n inside the
// admissible window that realizes an engine.
std::optional<SimplePermSpec> realize_engine(double omega_hot, double omega_cold,
                                             const InverseTemperatures& beta,
                                             std::size_t max_dim = kMaxRealizedCatalystDim);

struct RegimeGrid {
    double beta_ratio_min = 1.0;
    double beta_ratio_max = 5.0;
    double freq_ratio_min = 0.0;
    double freq_ratio_max = 5.0;
    std::size_t resolution = 200;

    double beta_ratio_at(std::size_t i) const;
    double freq_ratio_at(std::size_t j) const;
};

enum class RegionLabel { carnot, otto, catalytic };

struct RegimeRow {
    double beta_ratio = 0.0;  // beta_c / beta_h
    double freq_ratio = 0.0;  // omega_c / omega_h
    std::optional<Fraction> d_over_n;
    bool feasible = false;
    RegionLabel label = RegionLabel::carnot;
};

std::string to_string(RegionLabel label);

// Region membership at one point, with beta_h = omega_h = 1.
bool carnot_feasible(double beta_ratio, double freq_ratio);
bool otto_feasible(double beta_ratio, double freq_ratio);
bool catalytic_feasible(double beta_ratio, double freq_ratio, Fraction d_over_n);

std::vector<RegimeRow> regime_map(const std::vector<Fraction>& d_over_n, const RegimeGrid& grid);
std::string regime_map_csv(const std::vector<RegimeRow>& rows, const RegimeGrid& grid);

struct WorkProfileRow {
    std::size_t n = 0;
    double work_catalytic = 0.0;
    double work_noncatalytic = 0.0;
    double efficiency = 0.0;
};

// Work of Pi_gen(d - n, n) for n = 1..d against the best non-catalytic work.
std::vector<WorkProfileRow> work_profile(std::size_t d, double omega_hot, double omega_cold,
                                         const InverseTemperatures& beta);
std::string work_profile_csv(const std::vector<WorkProfileRow>& rows);

}  // namespace twostroke

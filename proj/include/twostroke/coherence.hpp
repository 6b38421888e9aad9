#pragma once

// Complex density matrices for checking that coherence in the catalyst state
// does not change heats or work: a coherent catalyst and unitary are mapped to
// a diagonal catalyst and a conjugated unitary with identical performance.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include <Eigen/Dense>

#include "twostroke/thermo.hpp"

namespace twostroke {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kDensityTol = 1e-10;
// Efficiencies are compared only when |Q_h| exceeds this.
inline constexpr double kEfficiencyHeatFloor = 1e-6;

// Throw invalid_argument unless the matrix is unitary / a density matrix.
void require_unitary(const ComplexMatrix& u);
void require_density(const ComplexMatrix& rho);

// Zeroes coherences between eigenvectors of distinct energy.
ComplexMatrix dephase(const ComplexMatrix& rho, const Spectrum& h);

// Reduced states of a catalyst (x) hot (x) cold operator.
ComplexMatrix reduce_catalyst(const ComplexMatrix& rho, const BasisShape& shape);
ComplexMatrix reduce_hot(const ComplexMatrix& rho, const BasisShape& shape);
ComplexMatrix reduce_cold(const ComplexMatrix& rho, const BasisShape& shape);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(rho H) for a Hamiltonian diagonal in the computational basis.
double energy_expectation(const ComplexMatrix& rho, std::span<const double> energies);

struct StrokeHeats {
    double heat_hot = 0.0;
    double heat_cold = 0.0;
    double work = 0.0;  // Q_h + Q_c minus the catalyst energy change
    std::optional<double> efficiency;
    double cyclicity_residual = 0.0;  // max |Tr_hc(U rho U^dag) - rho_s|
};

StrokeHeats coherent_stroke(const ComplexMatrix& rho_s, const ComplexMatrix& u, const Spectrum& hot,
                            const Spectrum& cold, const InverseTemperatures& beta,
                            const std::optional<Spectrum>& catalyst_h = std::nullopt);

struct CoherenceComparison {
    StrokeHeats original;
    StrokeHeats constructed;
    ComplexMatrix k;  // eigenvectors of rho_s, eigenvalues descending
    // Over Q_h, Q_c, W and, above the heat floor, efficiency relative to max(1, |eta|).
    double max_residual = 0.0;
};

// Compares (rho_s, U) with (diag of eigenvalues, (K (x) 1)^dag U (K (x) 1)).
CoherenceComparison decohere_catalyst_construction(const ComplexMatrix& rho_s, const ComplexMatrix& u,
                                                   const Spectrum& hot, const Spectrum& cold,
                                                   const InverseTemperatures& beta,
                                                   const std::optional<Spectrum>& catalyst_h = std::nullopt);

// Haar-like random unitary from the QR decomposition of a complex Gaussian matrix.
ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng);

struct CoherenceInstance {
    ComplexMatrix rho_s;
    ComplexMatrix u;
    Spectrum hot;
    Spectrum cold;
    InverseTemperatures beta;
};

// Random coherent catalyst and a unitary that returns it to its initial state:
// (1 (x) V)(K (x) 1) Pi D (K^dag (x) 1), where Pi preserves the catalyst
// marginal of the diagonal state and D is a diagonal phase.
CoherenceInstance random_coherence_instance(std::size_t catalyst_dim, std::size_t hot_dim,
                                            std::size_t cold_dim, std::mt19937_64& rng);

struct CoherenceSuiteResult {
    std::size_t instances = 0;
    double max_heat_residual = 0.0;        // max |Q - Q~| over both baths
    double max_residual = 0.0;             // also including W and efficiency
    double max_cyclicity_residual = 0.0;   // both engines
};

// Instances at catalyst dimension 2 and 3 with total dimension <= 12.
CoherenceSuiteResult run_coherence_suite(std::uint64_t seed, std::size_t count);

}  // namespace twostroke

#pragma once

// Diagonal-state bookkeeping for a single work stroke of a two-stroke machine:
// Gibbs populations, product states over catalyst/hot/cold factors, heats,
// work, efficiency and operating-mode classification.

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace twostroke {

inline constexpr double kConservationTol = 1e-12;
inline constexpr double kCyclicityTol = 1e-9;
inline constexpr double kNormalizationTol = 1e-12;

// Energy levels of one subsystem. The ground level is pinned at zero.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> levels);

    // {0, omega}
    static Spectrum qubit(double omega);
    // All-zero spectrum of the given dimension (trivial catalyst Hamiltonian).
    static Spectrum trivial(std::size_t dim);

    std::span<const double> levels() const noexcept { return levels_; }
    std::size_t dim() const noexcept { return levels_.size(); }
    double operator[](std::size_t i) const { return levels_[i]; }

private:
    std::vector<double> levels_;
};

class InverseTemperatures {
public:
    InverseTemperatures(double beta_hot, double beta_cold);

    double hot() const noexcept { return hot_; }
    double cold() const noexcept { return cold_; }
    double carnot_efficiency() const noexcept { return 1.0 - hot_ / cold_; }

private:
    double hot_;
    double cold_;
};

// Dimensions of the catalyst, hot and cold factors. Index of |i,j,k> is
// i*hot*cold + j*cold + k.
struct BasisShape {
    std::size_t catalyst = 1;
    std::size_t hot = 1;
    std::size_t cold = 1;

    std::size_t size() const noexcept { return catalyst * hot * cold; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return (i * hot + j) * cold + k;
    }
    bool operator==(const BasisShape&) const = default;
};

class PopulationVector {
public:
    PopulationVector(std::vector<double> probs, BasisShape shape);

    std::span<const double> probs() const noexcept { return probs_; }
    const BasisShape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

    std::vector<double> catalyst_marginal() const;
    std::vector<double> hot_marginal() const;
    std::vector<double> cold_marginal() const;

private:
    std::vector<double> probs_;
    BasisShape shape_;
};

enum class Mode { engine, cooler, accelerator, degenerate };

using ModeSet = std::set<Mode>;

std::string to_string(Mode mode);

struct CycleReport {
    double work = 0.0;
    double heat_hot = 0.0;
    double heat_cold = 0.0;
    std::optional<double> efficiency;
    ModeSet modes;
};

void to_json(nlohmann::json& j, const CycleReport& report);

// p_k = exp(-beta E_k) / Z, evaluated with the minimum energy shifted out.
std::vector<double> gibbs_populations(const Spectrum& spectrum, double beta);

PopulationVector product_state(std::span<const double> catalyst, std::span<const double> hot,
                               std::span<const double> cold);

// Energies of H_s + H_h + H_c on the product basis.
std::vector<double> total_energies(const Spectrum& catalyst, const Spectrum& hot,
                                   const Spectrum& cold);

// Heats and work of the stroke initial -> final. Requires the catalyst marginal
// to be preserved within kCyclicityTol.
CycleReport stroke_report(const PopulationVector& initial, const PopulationVector& final_state,
                          const Spectrum& hot, const Spectrum& cold,
                          const InverseTemperatures& beta);

ModeSet classify_modes(double work, double heat_hot, double heat_cold,
                       double tol = kConservationTol);

inline double clausius_lhs(double heat_hot, double heat_cold, const InverseTemperatures& beta) {
    return beta.hot() * heat_hot + beta.cold() * heat_cold;
}

}  // namespace twostroke

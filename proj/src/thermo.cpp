#include "twostroke/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twostroke/error.hpp"

namespace twostroke {

namespace {

void require_probability_vector(std::span<const double> p, const char* what) {
    if (p.empty()) {
        throw Error(ErrorCode::invalid_argument, std::string(what) + ": empty probability vector");
    }
    double total = 0.0;
    for (double x : p) {
        if (!std::isfinite(x) || x < 0.0) {
            throw Error(ErrorCode::invalid_argument,
                        std::string(what) + ": negative or non-finite probability");
        }
        total += x;
    }
    if (std::abs(total - 1.0) > kNormalizationTol) {
        throw Error(ErrorCode::invalid_argument, std::string(what) + ": probabilities do not sum to 1");
    }
}

double expectation(std::span<const double> p, std::span<const double> energies) {
    return std::inner_product(p.begin(), p.end(), energies.begin(), 0.0);
}

}  // namespace

Spectrum::Spectrum(std::vector<double> levels) : levels_(std::move(levels)) {
    if (levels_.empty()) {
        throw Error(ErrorCode::invalid_argument, "spectrum needs at least one level");
    }
    if (levels_.front() != 0.0) {
        throw Error(ErrorCode::invalid_argument, "spectrum ground level must be 0");
    }
    for (double e : levels_) {
        if (!std::isfinite(e)) {
            throw Error(ErrorCode::invalid_argument, "spectrum levels must be finite");
        }
    }
}

Spectrum Spectrum::qubit(double omega) { return Spectrum({0.0, omega}); }

Spectrum Spectrum::trivial(std::size_t dim) { return Spectrum(std::vector<double>(dim, 0.0)); }

InverseTemperatures::InverseTemperatures(double beta_hot, double beta_cold)
    : hot_(beta_hot), cold_(beta_cold) {
    if (!(beta_hot > 0.0) || !(beta_cold > 0.0) || !std::isfinite(beta_hot) ||
        !std::isfinite(beta_cold)) {
        throw Error(ErrorCode::invalid_argument, "inverse temperatures must be positive and finite");
    }
    if (!(beta_cold > beta_hot)) {
        throw Error(ErrorCode::invalid_argument, "beta_c must exceed beta_h");
    }
}

PopulationVector::PopulationVector(std::vector<double> probs, BasisShape shape)
    : probs_(std::move(probs)), shape_(shape) {
    if (shape_.catalyst == 0 || shape_.hot == 0 || shape_.cold == 0) {
        throw Error(ErrorCode::shape_mismatch, "basis dimensions must be positive");
    }
    if (probs_.size() != shape_.size()) {
        throw Error(ErrorCode::shape_mismatch, "population length does not match basis shape");
    }
    require_probability_vector(probs_, "population vector");
}

std::vector<double> PopulationVector::catalyst_marginal() const {
    std::vector<double> out(shape_.catalyst, 0.0);
    const std::size_t block = shape_.hot * shape_.cold;
    for (std::size_t x = 0; x < probs_.size(); ++x) out[x / block] += probs_[x];
    return out;
}

std::vector<double> PopulationVector::hot_marginal() const {
    std::vector<double> out(shape_.hot, 0.0);
    for (std::size_t x = 0; x < probs_.size(); ++x) out[(x / shape_.cold) % shape_.hot] += probs_[x];
    return out;
}

std::vector<double> PopulationVector::cold_marginal() const {
    std::vector<double> out(shape_.cold, 0.0);
    for (std::size_t x = 0; x < probs_.size(); ++x) out[x % shape_.cold] += probs_[x];
    return out;
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::engine: return "engine";
        case Mode::cooler: return "cooler";
        case Mode::accelerator: return "accelerator";
        case Mode::degenerate: return "degenerate";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const CycleReport& report) {
    j = nlohmann::json::object();
    j["work"] = report.work;
    j["heat_hot"] = report.heat_hot;
    j["heat_cold"] = report.heat_cold;
    j["efficiency"] = report.efficiency ? nlohmann::json(*report.efficiency) : nlohmann::json(nullptr);
    auto modes = nlohmann::json::array();
    for (Mode m : report.modes) modes.push_back(to_string(m));
    j["modes"] = modes;
}

std::vector<double> gibbs_populations(const Spectrum& spectrum, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorCode::invalid_argument, "beta must be positive and finite");
    }
    const auto levels = spectrum.levels();
    const double ground = *std::min_element(levels.begin(), levels.end());
    std::vector<double> p(levels.size());
    double z = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        p[k] = std::exp(-beta * (levels[k] - ground));
        z += p[k];
    }
    for (double& x : p) {
        x /= z;
        if (!std::isfinite(x)) throw Error(ErrorCode::overflow, "beta-energy overflow");
    }
    return p;
}

PopulationVector product_state(std::span<const double> catalyst, std::span<const double> hot,
                               std::span<const double> cold) {
    require_probability_vector(catalyst, "catalyst factor");
    require_probability_vector(hot, "hot factor");
    require_probability_vector(cold, "cold factor");
    BasisShape shape{catalyst.size(), hot.size(), cold.size()};
    std::vector<double> probs(shape.size());
    for (std::size_t i = 0; i < shape.catalyst; ++i)
        for (std::size_t j = 0; j < shape.hot; ++j)
            for (std::size_t k = 0; k < shape.cold; ++k)
                probs[shape.index(i, j, k)] = catalyst[i] * hot[j] * cold[k];
    return PopulationVector(std::move(probs), shape);
}

std::vector<double> total_energies(const Spectrum& catalyst, const Spectrum& hot,
                                   const Spectrum& cold) {
    BasisShape shape{catalyst.dim(), hot.dim(), cold.dim()};
    std::vector<double> e(shape.size());
    for (std::size_t i = 0; i < shape.catalyst; ++i)
        for (std::size_t j = 0; j < shape.hot; ++j)
            for (std::size_t k = 0; k < shape.cold; ++k)
                e[shape.index(i, j, k)] = catalyst[i] + hot[j] + cold[k];
    return e;
}

CycleReport stroke_report(const PopulationVector& initial, const PopulationVector& final_state,
                          const Spectrum& hot, const Spectrum& cold,
                          const InverseTemperatures& /*beta*/) {
    const BasisShape& shape = initial.shape();
    if (!(shape == final_state.shape())) {
        throw Error(ErrorCode::shape_mismatch, "initial and final states have different shapes");
    }
    if (shape.hot != hot.dim() || shape.cold != cold.dim()) {
        throw Error(ErrorCode::shape_mismatch, "spectra do not match the basis shape");
    }
    const auto cat_i = initial.catalyst_marginal();
    const auto cat_f = final_state.catalyst_marginal();
    for (std::size_t i = 0; i < cat_i.size(); ++i) {
        if (std::abs(cat_i[i] - cat_f[i]) > kCyclicityTol) {
            throw Error(ErrorCode::cyclicity_violated, "cyclicity violated");
        }
    }

    CycleReport r;
    r.heat_hot = expectation(initial.hot_marginal(), hot.levels()) -
                 expectation(final_state.hot_marginal(), hot.levels());
    r.heat_cold = expectation(initial.cold_marginal(), cold.levels()) -
                  expectation(final_state.cold_marginal(), cold.levels());

    // Work from the total energy change; the catalyst Hamiltonian is trivial.
    const auto energies = total_energies(Spectrum::trivial(shape.catalyst), hot, cold);
    double work = 0.0;
    for (std::size_t x = 0; x < energies.size(); ++x) {
        work += energies[x] * (initial[x] - final_state[x]);
    }
    r.work = work;
    if (std::abs(r.heat_hot) > kConservationTol) r.efficiency = 1.0 + r.heat_cold / r.heat_hot;
    r.modes = classify_modes(r.work, r.heat_hot, r.heat_cold);
    return r;
}

ModeSet classify_modes(double work, double heat_hot, double heat_cold, double tol) {
    ModeSet modes;
    if (work > tol) modes.insert(Mode::engine);
    if (work < -tol && heat_cold > tol) modes.insert(Mode::cooler);
    if (work <= tol && heat_hot >= -tol) modes.insert(Mode::accelerator);
    if (std::abs(work) <= tol && std::abs(heat_hot) <= tol && std::abs(heat_cold) <= tol) {
        modes.insert(Mode::degenerate);
    }
    return modes;
}

}  // namespace twostroke

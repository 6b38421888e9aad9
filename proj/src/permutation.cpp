#include "twostroke/permutation.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>

#include "twostroke/error.hpp"
#include "twostroke/output.hpp"

namespace twostroke {

PermutationMap::PermutationMap(std::vector<std::size_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t y : image_) {
        if (y >= image_.size() || seen[y]) {
            throw Error(ErrorCode::invalid_argument, "permutation image is not a bijection");
        }
        seen[y] = true;
    }
}

PermutationMap PermutationMap::identity(std::size_t n) {
    std::vector<std::size_t> image(n);
    std::iota(image.begin(), image.end(), std::size_t{0});
    return PermutationMap(std::move(image));
}

PermutationMap PermutationMap::transposition(std::size_t n, std::size_t a, std::size_t b) {
    std::vector<std::size_t> image(n);
    std::iota(image.begin(), image.end(), std::size_t{0});
    if (a >= n || b >= n) throw Error(ErrorCode::invalid_argument, "transposition index out of range");
    std::swap(image[a], image[b]);
    return PermutationMap(std::move(image));
}

PermutationMap PermutationMap::inverse() const {
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t x = 0; x < image_.size(); ++x) inv[image_[x]] = x;
    return PermutationMap(std::move(inv));
}

PermutationMap PermutationMap::compose(const PermutationMap& other) const {
    if (other.size() != size()) throw Error(ErrorCode::shape_mismatch, "permutation size mismatch");
    std::vector<std::size_t> out(size());
    for (std::size_t x = 0; x < size(); ++x) out[x] = image_[other[x]];
    return PermutationMap(std::move(out));
}

bool PermutationMap::is_identity() const noexcept {
    for (std::size_t x = 0; x < image_.size(); ++x)
        if (image_[x] != x) return false;
    return true;
}

std::string PermutationMap::to_string() const {
    std::ostringstream os;
    for (std::size_t x = 0; x < image_.size(); ++x) {
        if (x) os << ' ';
        os << image_[x];
    }
    return os.str();
}

std::vector<double> apply_permutation(std::span<const double> p, const PermutationMap& perm) {
    if (p.size() != perm.size()) throw Error(ErrorCode::shape_mismatch, "permutation size mismatch");
    std::vector<double> out(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) out[perm[x]] = p[x];
    return out;
}

PopulationVector apply_permutation(const PopulationVector& p, const PermutationMap& perm) {
    return PopulationVector(apply_permutation(p.probs(), perm), p.shape());
}

PermutationRange::iterator& PermutationRange::iterator::operator++() {
    done_ = !std::next_permutation(current_.begin(), current_.end());
    return *this;
}

PermutationRange enumerate_permutations(std::size_t n) {
    if (n > kMaxEnumerationSize) throw Error(ErrorCode::guard_exceeded, "enumeration too large");
    return PermutationRange(n);
}

std::size_t factorial(std::size_t n) {
    std::size_t f = 1;
    for (std::size_t k = 2; k <= n; ++k) f *= k;
    return f;
}

OptimizationResult optimal_noncatalytic(const Spectrum& hot, const Spectrum& cold,
                                        const InverseTemperatures& beta, Objective objective) {
    if (hot.dim() * cold.dim() > kMaxEnumerationSize) {
        throw Error(ErrorCode::guard_exceeded, "enumeration too large");
    }
    const std::array<double, 1> trivial{1.0};
    const PopulationVector initial = product_state(trivial, gibbs_populations(hot, beta.hot()),
                                                   gibbs_populations(cold, beta.cold()));

    OptimizationResult result;
    struct Candidate {
        double value;
        PermutationMap perm;
        CycleReport report;
    };
    std::vector<Candidate> engines;
    for (const PermutationMap& perm : enumerate_permutations(initial.size())) {
        CycleReport r = stroke_report(initial, apply_permutation(initial, perm), hot, cold, beta);
        if (!(r.work > kEngineWorkTol)) continue;
        double value = r.work;
        if (objective == Objective::efficiency) {
            if (!r.efficiency) continue;
            value = *r.efficiency;
        }
        engines.push_back({value, perm, std::move(r)});
    }
    if (engines.empty()) return result;

    double best = engines.front().value;
    for (const auto& c : engines) best = std::max(best, c.value);
    result.best_value = best;
    result.engine_regime = true;
    for (auto& c : engines) {
        if (c.value >= best - kConservationTol) {
            if (!result.report) result.report = c.report;
            result.witnesses.push_back(c.perm);
        }
    }
    return result;
}

PermutationMap otto_swap() { return PermutationMap({0, 2, 1, 3}); }

namespace {

// Images in the conventional 24-row ordering.
constexpr std::array<std::array<std::size_t, 4>, 24> kStandardRowImages{{
    {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1}, {0, 1, 3, 2},
    {1, 0, 2, 3}, {1, 0, 3, 2}, {2, 0, 1, 3}, {2, 0, 3, 1}, {3, 0, 1, 2}, {3, 0, 2, 1},
    {1, 2, 0, 3}, {3, 2, 0, 1}, {1, 3, 0, 2}, {2, 3, 0, 1}, {2, 1, 0, 3}, {3, 1, 0, 2},
    {1, 2, 3, 0}, {3, 2, 1, 0}, {1, 3, 2, 0}, {2, 1, 3, 0}, {2, 3, 1, 0}, {3, 1, 2, 0},
}};

std::size_t standard_row_of(const PermutationMap& perm) {
    for (std::size_t r = 0; r < kStandardRowImages.size(); ++r) {
        if (std::equal(kStandardRowImages[r].begin(), kStandardRowImages[r].end(), perm.image().begin())) {
            return r + 1;
        }
    }
    return 0;
}

}  // namespace

std::vector<QubitTableRow> qubit_table(const InverseTemperatures& beta, double omega_hot,
                                       double omega_cold) {
    const Spectrum hot = Spectrum::qubit(omega_hot);
    const Spectrum cold = Spectrum::qubit(omega_cold);
    const std::array<double, 1> trivial{1.0};
    const PopulationVector initial = product_state(trivial, gibbs_populations(hot, beta.hot()),
                                                   gibbs_populations(cold, beta.cold()));

    std::vector<PermutationMap> order{PermutationMap::identity(4), otto_swap()};
    for (const PermutationMap& perm : enumerate_permutations(4)) {
        if (perm != order[0] && perm != order[1]) order.push_back(perm);
    }

    std::vector<QubitTableRow> rows;
    rows.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        CycleReport r = stroke_report(initial, apply_permutation(initial, order[i]), hot, cold, beta);
        rows.push_back({i + 1, order[i], standard_row_of(order[i]), r.work, r.efficiency, r.modes});
    }
    return rows;
}

std::string qubit_table_csv(const std::vector<QubitTableRow>& rows) {
    std::ostringstream os;
    os << "perm_index,image,work,efficiency\n";
    for (const auto& row : rows) {
        os << row.index << ',' << row.perm.to_string() << ',' << format_number(row.work) << ',';
        if (row.efficiency) os << format_number(*row.efficiency);
        os << '\n';
    }
    return os.str();
}

PermutationMap passive_permutation(std::span<const double> p, std::span<const double> energies) {
    if (p.size() != energies.size()) {
        throw Error(ErrorCode::shape_mismatch, "population and spectrum sizes differ");
    }
    const std::size_t n = p.size();
    std::vector<std::size_t> by_energy(n), by_prob(n);
    std::iota(by_energy.begin(), by_energy.end(), std::size_t{0});
    std::iota(by_prob.begin(), by_prob.end(), std::size_t{0});
    std::stable_sort(by_energy.begin(), by_energy.end(),
                     [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });
    std::stable_sort(by_prob.begin(), by_prob.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    std::vector<std::size_t> image(n);
    for (std::size_t r = 0; r < n; ++r) image[by_prob[r]] = by_energy[r];
    return PermutationMap(std::move(image));
}

std::vector<double> passive_populations(std::span<const double> p, const Spectrum& spectrum) {
    return apply_permutation(p, passive_permutation(p, spectrum.levels()));
}

double ergotropy(std::span<const double> p, std::span<const double> energies) {
    const auto passive = apply_permutation(p, passive_permutation(p, energies));
    double gap = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) gap += energies[x] * (p[x] - passive[x]);
    return std::max(gap, 0.0);
}

double ergotropy(std::span<const double> p, const Spectrum& spectrum) {
    return ergotropy(p, spectrum.levels());
}

}  // namespace twostroke

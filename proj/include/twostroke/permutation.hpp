#pragma once

// Permutations of basis populations, exhaustive sweeps over them, and the
// passivity / ergotropy quantities they induce.

#include <cstddef>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twostroke/thermo.hpp"

namespace twostroke {

inline constexpr std::size_t kMaxEnumerationSize = 9;
inline constexpr double kEngineWorkTol = 1e-12;

// image[x] is the destination of basis index x.
class PermutationMap {
public:
    explicit PermutationMap(std::vector<std::size_t> image);

    static PermutationMap identity(std::size_t n);
    // Exchanges a and b, identity elsewhere.
    static PermutationMap transposition(std::size_t n, std::size_t a, std::size_t b);

    std::span<const std::size_t> image() const noexcept { return image_; }
    std::size_t size() const noexcept { return image_.size(); }
    std::size_t operator[](std::size_t x) const { return image_[x]; }

    PermutationMap inverse() const;
    // (this o other)[x] = this[other[x]]
    PermutationMap compose(const PermutationMap& other) const;
    bool is_identity() const noexcept;

    // Space-separated image, e.g. "0 2 1 3".
    std::string to_string() const;

    bool operator==(const PermutationMap&) const = default;
    auto operator<=>(const PermutationMap&) const = default;

private:
    std::vector<std::size_t> image_;
};

// out[image[x]] = p[x]
std::vector<double> apply_permutation(std::span<const double> p, const PermutationMap& perm);
PopulationVector apply_permutation(const PopulationVector& p, const PermutationMap& perm);

// Lazily yields the n! permutations of {0..n-1} in lexicographic order of image.
class PermutationRange {
public:
    class iterator {
    public:
        using value_type = PermutationMap;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(std::size_t n) : current_(n), done_(false) {
            for (std::size_t i = 0; i < n; ++i) current_[i] = i;
        }

        PermutationMap operator*() const { return PermutationMap(current_); }
        iterator& operator++();
        void operator++(int) { ++*this; }
        bool operator==(std::default_sentinel_t) const noexcept { return done_; }

    private:
        std::vector<std::size_t> current_;
        bool done_ = true;
    };

    explicit PermutationRange(std::size_t n) : n_(n) {}

    iterator begin() const { return iterator(n_); }
    std::default_sentinel_t end() const noexcept { return {}; }

private:
    std::size_t n_;
};

// Throws guard_exceeded for n > kMaxEnumerationSize.
PermutationRange enumerate_permutations(std::size_t n);

std::size_t factorial(std::size_t n);

enum class Objective { efficiency, work };

struct OptimizationResult {
    double best_value = 0.0;
    std::vector<PermutationMap> witnesses;
    std::optional<CycleReport> report;
    bool engine_regime = false;
};

// Exhaustive sweep of tau_h (x) tau_c over all permutations, restricted to
// engine strokes (W > kEngineWorkTol).
OptimizationResult optimal_noncatalytic(const Spectrum& hot, const Spectrum& cold,
                                        const InverseTemperatures& beta, Objective objective);

struct QubitTableRow {
    std::size_t index = 0;      // 1-based position in canonical order
    PermutationMap perm;
    std::size_t standard_row = 0;  // row number in the conventional 24-row ordering
    double work = 0.0;
    std::optional<double> efficiency;
    ModeSet modes;
};

// The swap |0,1> <-> |1,0> of the hot/cold qubit pair.
PermutationMap otto_swap();

// All 24 permutations of the qubit-pair working body: identity, the Otto swap,
// then lexicographic order of image.
std::vector<QubitTableRow> qubit_table(const InverseTemperatures& beta, double omega_hot,
                                       double omega_cold);

// CSV with columns perm_index,image,work,efficiency.
std::string qubit_table_csv(const std::vector<QubitTableRow>& rows);

// Populations rearranged so that larger probabilities sit on lower energies.
std::vector<double> passive_populations(std::span<const double> p, const Spectrum& spectrum);
// Permutation that maps p onto its passive arrangement.
PermutationMap passive_permutation(std::span<const double> p, std::span<const double> energies);

double ergotropy(std::span<const double> p, const Spectrum& spectrum);
double ergotropy(std::span<const double> p, std::span<const double> energies);

}  // namespace twostroke

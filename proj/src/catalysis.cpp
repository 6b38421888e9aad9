#include "twostroke/catalysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "twostroke/error.hpp"
#include "twostroke/output.hpp"

namespace twostroke {

Fraction::Fraction(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw Error(ErrorCode::invalid_argument, "fraction with zero denominator");
    if (denominator < 0) {
        numerator = -numerator;
        denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    num = numerator / (g == 0 ? 1 : g);
    den = denominator / (g == 0 ? 1 : g);
}

std::string Fraction::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Fraction realize_ratio(double x, std::size_t max_numerator) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorCode::invalid_argument, "ratio must be positive and finite");
    }
    // Convergents h_k / k_k of the continued fraction of x.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
    std::int64_t k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    Fraction best(h, k);
    if (h == 0) best = Fraction(1, static_cast<std::int64_t>(std::max<double>(1.0, std::round(1.0 / x))));
    while (rem > 1e-12) {
        const double inv = 1.0 / rem;
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        rem = inv - std::floor(inv);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (h_next > static_cast<std::int64_t>(max_numerator)) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        best = Fraction(h, k);
    }
    if (best.num <= 0 || best.num > static_cast<std::int64_t>(max_numerator)) {
        throw Error(ErrorCode::invalid_argument, "ratio cannot be realized within the catalyst cap");
    }
    return best;
}

Fraction parse_fraction(const std::string& text, std::size_t max_numerator) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            return Fraction(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        }
        return realize_ratio(std::stod(text), max_numerator);
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::invalid_argument, "cannot parse ratio '" + text + "'");
    }
}

SimplePermSpec::SimplePermSpec(std::size_t m_swaps, std::size_t n_swaps) : m(m_swaps), n(n_swaps) {
    if (n == 0) throw Error(ErrorCode::invalid_argument, "simple permutation needs n >= 1");
    if (m + n > std::numeric_limits<std::size_t>::max() / 4) {
        throw Error(ErrorCode::guard_exceeded, "catalyst dimension overflows the basis index");
    }
}

PermutationMap build_simple_perm(const SimplePermSpec& spec) {
    const std::size_t d = spec.dim();
    std::vector<std::size_t> image(4 * d);
    std::iota(image.begin(), image.end(), std::size_t{0});
    auto swap_levels = [&](std::size_t a, std::size_t b) { std::swap(image[a], image[b]); };
    for (std::size_t i = 0; i < spec.m; ++i) {
        swap_levels(qubit_pair_index(i, 1, 0), qubit_pair_index(i + 1, 0, 0));
    }
    for (std::size_t j = spec.m; j + 1 < d; ++j) {
        swap_levels(qubit_pair_index(j, 1, 0), qubit_pair_index(j + 1, 0, 1));
    }
    swap_levels(qubit_pair_index(d - 1, 1, 0), qubit_pair_index(0, 0, 1));
    return PermutationMap(std::move(image));
}

FlowAccount subspace_flows(const PopulationVector& initial, const PopulationVector& final_state) {
    if (!(initial.shape() == final_state.shape())) {
        throw Error(ErrorCode::shape_mismatch, "initial and final states have different shapes");
    }
    if (initial.shape().hot != 2 || initial.shape().cold != 2) {
        throw Error(ErrorCode::shape_mismatch, "subspace flows need qubit hot and cold factors");
    }
    const auto hot_i = initial.hot_marginal(), hot_f = final_state.hot_marginal();
    const auto cold_i = initial.cold_marginal(), cold_f = final_state.cold_marginal();
    return {hot_i[1] - hot_f[1], cold_i[1] - cold_f[1]};
}

namespace {

void require_boltzmann_factors(double a_hot, double a_cold) {
    if (!(a_hot > 0.0 && a_hot < 1.0 && a_cold > 0.0 && a_cold < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "Boltzmann factors must lie in (0, 1)");
    }
}

}  // namespace

CatalystState solve_catalyst_system(const SimplePermSpec& spec, double a_hot, double a_cold) {
    require_boltzmann_factors(a_hot, a_cold);
    const std::size_t d = spec.dim();
    const double norm = 1.0 / ((1.0 + a_hot) * (1.0 + a_cold));
    const auto size = static_cast<Eigen::Index>(d + 1);

    // Row i: N (a_h p_i - c_i p_{i+1}) - dP = 0, with c_i = 1 while the swap
    // lands on |i+1,0,0> and a_c once it lands on |i+1,0,1>. Last row: sum p = 1.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
    for (std::size_t i = 0; i < d; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const auto next = static_cast<Eigen::Index>((i + 1) % d);
        const double c = i < spec.m ? 1.0 : a_cold;
        a(row, row) += norm * a_hot;
        a(row, next) -= norm * c;
        a(row, size - 1) = -1.0;
    }
    a.row(size - 1).head(size - 1).setOnes();
    b(size - 1) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw Error(ErrorCode::singular_system, "catalyst system is singular");
    const Eigen::VectorXd x = lu.solve(b);

    CatalystState state;
    state.p.assign(x.data(), x.data() + d);
    state.delta_p = x(size - 1);
    state.residual = (a * x - b).cwiseAbs().maxCoeff();
    return state;
}

CatalystState solve_catalyst_state(const SimplePermSpec& spec, double a_hot, double a_cold) {
    CatalystState state = solve_catalyst_system(spec, a_hot, a_cold);
    for (double& p : state.p) {
        if (p < -1e-12) throw Error(ErrorCode::infeasible_catalyst, "infeasible catalyst");
        p = std::max(p, 0.0);
    }
    if (state.residual > kCyclicityTol) {
        throw Error(ErrorCode::singular_system, "catalyst system residual too large");
    }
    return state;
}

double flow_denominator(const SimplePermSpec& spec, double a_hot, double a_cold) {
    const double m = static_cast<double>(spec.m);
    const double n = static_cast<double>(spec.n);
    const double ah_m = std::pow(a_hot, m);
    const double ah_n = std::pow(a_hot, n);
    const double ah_d = std::pow(a_hot, m + n);
    const double ac_n = std::pow(a_cold, n);
    const double gap = a_hot - a_cold;
    const double one_minus = 1.0 - a_hot;
    const double numerator =
        a_hot * (1.0 - a_cold) * (1.0 - a_cold) * ((1.0 - ah_m) * (ah_n - ac_n)) +
        (ah_d - ac_n) * gap * one_minus * (n * one_minus - m * gap);
    return numerator / (gap * gap * one_minus * one_minus);
}

double delta_p_closed_form(const SimplePermSpec& spec, double a_hot, double a_cold) {
    require_boltzmann_factors(a_hot, a_cold);
    if (std::abs(a_hot - a_cold) <= 1e-12 || std::abs(1.0 - a_hot) <= 1e-12) {
        throw Error(ErrorCode::degenerate_point, "use linear solver at degenerate point");
    }
    const double f = flow_denominator(spec, a_hot, a_cold);
    if (f == 0.0 || !std::isfinite(f)) {
        throw Error(ErrorCode::degenerate_point, "use linear solver at degenerate point");
    }
    const double norm = 1.0 / ((1.0 + a_hot) * (1.0 + a_cold));
    const double n = static_cast<double>(spec.n);
    return norm * (std::pow(a_hot, static_cast<double>(spec.dim())) - std::pow(a_cold, n)) / f;
}

double simple_perm_efficiency(const SimplePermSpec& spec, double omega_hot, double omega_cold) {
    const double d = static_cast<double>(spec.dim());
    const double n = static_cast<double>(spec.n);
    return (d * omega_hot - n * omega_cold) / (d * omega_hot);
}

Fraction simple_perm_efficiency(const SimplePermSpec& spec, Fraction omega_hot, Fraction omega_cold) {
    const auto d = static_cast<std::int64_t>(spec.dim());
    const auto n = static_cast<std::int64_t>(spec.n);
    // (d wh - n wc) / (d wh) with wh = a/b, wc = c/e.
    const std::int64_t num = d * omega_hot.num * omega_cold.den - n * omega_cold.num * omega_hot.den;
    const std::int64_t den = d * omega_hot.num * omega_cold.den;
    return Fraction(num, den);
}

SimplePermOutcome simple_perm_report(const SimplePermSpec& spec, double omega_hot,
                                     double omega_cold, const InverseTemperatures& beta) {
    if (!(omega_hot > 0.0) || !(omega_cold > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "frequencies must be positive");
    }
    const double a_hot = std::exp(-beta.hot() * omega_hot);
    const double a_cold = std::exp(-beta.cold() * omega_cold);

    SimplePermOutcome out;
    out.catalyst = solve_catalyst_state(spec, a_hot, a_cold);

    // The closed form keeps full relative accuracy when dP is far below the
    // solver's absolute resolution.
    double dp = out.catalyst.delta_p;
    try {
        dp = delta_p_closed_form(spec, a_hot, a_cold);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_point) throw;
    }

    // Every quantity is a fixed multiple of dP, so signs are exact.
    const double d = static_cast<double>(spec.dim());
    const double n = static_cast<double>(spec.n);
    out.report.heat_hot = d * omega_hot * dp;
    out.report.heat_cold = -n * omega_cold * dp;
    out.report.work = (d * omega_hot - n * omega_cold) * dp;
    if (out.report.heat_hot != 0.0) {
        out.report.efficiency = simple_perm_efficiency(spec, omega_hot, omega_cold);
    }
    out.report.modes = classify_modes(out.report.work, out.report.heat_hot, out.report.heat_cold, 0.0);

    const Spectrum hot = Spectrum::qubit(omega_hot);
    const Spectrum cold = Spectrum::qubit(omega_cold);
    const PopulationVector initial = product_state(out.catalyst.p, gibbs_populations(hot, beta.hot()),
                                                   gibbs_populations(cold, beta.cold()));
    const PopulationVector final_state = apply_permutation(initial, build_simple_perm(spec));
    out.explicit_report = stroke_report(initial, final_state, hot, cold, beta);
    out.flows = subspace_flows(initial, final_state);
    return out;
}

SimpleSweepOptimum optimal_simple_perm_efficiency(std::size_t d, double omega_hot,
                                                  double omega_cold,
                                                  const InverseTemperatures& beta) {
    const double dd = static_cast<double>(d);
    const double ceiling = beta.cold() * omega_cold / (beta.hot() * omega_hot);
    if (d == 0 || omega_cold / omega_hot > dd || dd > ceiling) {
        throw Error(ErrorCode::window_violation, "d outside the admissible catalyst window");
    }
    SimpleSweepOptimum best;
    best.efficiency = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= d; ++n) {
        const auto outcome = simple_perm_report(SimplePermSpec(d - n, n), omega_hot, omega_cold, beta);
        std::optional<double> eta;
        if (outcome.report.modes.contains(Mode::engine) && outcome.report.efficiency) {
            eta = outcome.report.efficiency;
            if (*eta > best.efficiency) {
                best.efficiency = *eta;
                best.best_n = n;
            }
        }
        best.efficiency_by_n.push_back(eta);
    }
    if (best.best_n == 0) {
        throw Error(ErrorCode::window_violation, "no simple permutation produces work at this d");
    }
    return best;
}

std::optional<SimplePermSpec> realize_engine(double omega_hot, double omega_cold,
                                             const InverseTemperatures& beta, std::size_t max_dim) {
    const double lo = std::max(1.0, omega_cold / omega_hot);
    const double hi = beta.cold() * omega_cold / (beta.hot() * omega_hot);
    if (!(hi > lo)) return std::nullopt;
    for (std::size_t d = 2; d <= max_dim; ++d) {
        for (std::size_t n = 1; n <= d; ++n) {
            const double r = static_cast<double>(d) / static_cast<double>(n);
            if (!(r > lo && r < hi) || std::gcd(d, n) != 1) continue;
            const SimplePermSpec spec(d - n, n);
            const auto outcome = simple_perm_report(spec, omega_hot, omega_cold, beta);
            if (outcome.report.modes.contains(Mode::engine)) return spec;
        }
    }
    return std::nullopt;
}

double RegimeGrid::beta_ratio_at(std::size_t i) const {
    return beta_ratio_min + (static_cast<double>(i) + 0.5) * (beta_ratio_max - beta_ratio_min) /
                                static_cast<double>(resolution);
}

double RegimeGrid::freq_ratio_at(std::size_t j) const {
    return freq_ratio_min + (static_cast<double>(j) + 0.5) * (freq_ratio_max - freq_ratio_min) /
                                static_cast<double>(resolution);
}

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::carnot: return "carnot";
        case RegionLabel::otto: return "otto";
        case RegionLabel::catalytic: return "catalytic";
    }
    return "unknown";
}

bool carnot_feasible(double beta_ratio, double /*freq_ratio*/) { return beta_ratio > 1.0; }

bool otto_feasible(double beta_ratio, double freq_ratio) {
    return freq_ratio < 1.0 && 1.0 < beta_ratio * freq_ratio;
}

bool catalytic_feasible(double beta_ratio, double freq_ratio, Fraction d_over_n) {
    if (!(beta_ratio > 1.0) || !(freq_ratio > 0.0)) return false;
    const double r = d_over_n.value();
    if (!(1.0 < r && r < beta_ratio * freq_ratio)) return false;
    const SimplePermSpec spec(static_cast<std::size_t>(d_over_n.num - d_over_n.den),
                              static_cast<std::size_t>(d_over_n.den));
    try {
        const auto outcome =
            simple_perm_report(spec, 1.0, freq_ratio, InverseTemperatures(1.0, beta_ratio));
        return outcome.report.modes.contains(Mode::engine);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::infeasible_catalyst || e.code() == ErrorCode::singular_system) {
            return false;
        }
        throw;
    }
}

std::vector<RegimeRow> regime_map(const std::vector<Fraction>& d_over_n, const RegimeGrid& grid) {
    if (grid.resolution == 0 || !(grid.beta_ratio_max > grid.beta_ratio_min) ||
        !(grid.freq_ratio_max > grid.freq_ratio_min)) {
        throw Error(ErrorCode::invalid_argument, "regime grid is empty");
    }
    for (const Fraction& r : d_over_n) {
        if (r.num < r.den || r.den <= 0 || r.num > static_cast<std::int64_t>(kMaxRealizedCatalystDim)) {
            throw Error(ErrorCode::invalid_argument,
                        "d/n must satisfy n <= d <= " + std::to_string(kMaxRealizedCatalystDim));
        }
    }
    std::vector<RegimeRow> rows;
    rows.reserve(grid.resolution * grid.resolution * (2 + d_over_n.size()));
    for (std::size_t i = 0; i < grid.resolution; ++i) {
        const double x = grid.beta_ratio_at(i);
        for (std::size_t j = 0; j < grid.resolution; ++j) {
            const double y = grid.freq_ratio_at(j);
            rows.push_back({x, y, std::nullopt, carnot_feasible(x, y), RegionLabel::carnot});
            rows.push_back({x, y, std::nullopt, otto_feasible(x, y), RegionLabel::otto});
            for (const Fraction& r : d_over_n) {
                rows.push_back({x, y, r, catalytic_feasible(x, y, r), RegionLabel::catalytic});
            }
        }
    }
    return rows;
}

std::string regime_map_csv(const std::vector<RegimeRow>& rows, const RegimeGrid& grid) {
    std::ostringstream os;
    os << "# beta_h=1 omega_h=1; d/n realized in lowest terms with d <= " << kMaxRealizedCatalystDim
       << "; grid " << grid.resolution << "x" << grid.resolution << " cell centers\n";
    os << "beta_ratio,freq_ratio,d_over_n,feasible,region_label\n";
    for (const auto& row : rows) {
        os << format_number(row.beta_ratio) << ',' << format_number(row.freq_ratio) << ','
           << (row.d_over_n ? row.d_over_n->to_string() : std::string()) << ','
           << (row.feasible ? 1 : 0) << ',' << to_string(row.label) << '\n';
    }
    return os.str();
}

std::vector<WorkProfileRow> work_profile(std::size_t d, double omega_hot, double omega_cold,
                                         const InverseTemperatures& beta) {
    if (d == 0) throw Error(ErrorCode::invalid_argument, "catalyst dimension must be positive");
    const Spectrum hot = Spectrum::qubit(omega_hot);
    const Spectrum cold = Spectrum::qubit(omega_cold);
    const std::vector<double> trivial{1.0};
    const PopulationVector initial = product_state(trivial, gibbs_populations(hot, beta.hot()),
                                                   gibbs_populations(cold, beta.cold()));
    const double baseline =
        ergotropy(initial.probs(), total_energies(Spectrum::trivial(1), hot, cold));

    std::vector<WorkProfileRow> rows;
    for (std::size_t n = 1; n <= d; ++n) {
        const SimplePermSpec spec(d - n, n);
        const auto outcome = simple_perm_report(spec, omega_hot, omega_cold, beta);
        rows.push_back({n, outcome.report.work, baseline,
                        simple_perm_efficiency(spec, omega_hot, omega_cold)});
    }
    return rows;
}

std::string work_profile_csv(const std::vector<WorkProfileRow>& rows) {
    std::ostringstream os;
    os << "n,W_catalytic,W_noncatalytic_baseline,efficiency\n";
    for (const auto& row : rows) {
        os << row.n << ',' << format_number(row.work_catalytic) << ','
           << format_number(row.work_noncatalytic) << ',' << format_number(row.efficiency) << '\n';
    }
    return os.str();
}

}  // namespace twostroke

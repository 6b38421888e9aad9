// Acceptance criteria. Run with one criterion name (ac1 ... ac9, ac1-count,
// ac6-nesting) or "all"; prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "twostroke/birkhoff.hpp"
#include "twostroke/catalysis.hpp"
#include "twostroke/coherence.hpp"
#include "twostroke/error.hpp"
#include "twostroke/lp_bound.hpp"
#include "twostroke/output.hpp"
#include "twostroke/permutation.hpp"

using namespace twostroke;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) { return format_number(x); }

struct QubitCase {
    double bh, bc, wh, wc;
};

std::vector<QubitCase> otto_cases(std::size_t count) {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    std::vector<QubitCase> out;
    while (out.size() < count) {
        QubitCase c{u(rng), u(rng), u(rng), u(rng)};
        if (c.bc > c.bh && c.wh > c.wc && c.bh * c.wh < c.bc * c.wc) out.push_back(c);
    }
    return out;
}

Outcome ac1() {
    const auto cases = otto_cases(1000);
    const auto start = Clock::now();
    double worst = 0.0;
    std::size_t otto_witness = 0;
    for (const auto& c : cases) {
        const auto r = optimal_noncatalytic(Spectrum::qubit(c.wh), Spectrum::qubit(c.wc), {c.bh, c.bc},
                                            Objective::efficiency);
        const double expected = 1.0 - c.wc / c.wh;
        worst = std::max(worst, r.engine_regime ? std::abs(r.best_value - expected) : 1.0);
        if (std::find(r.witnesses.begin(), r.witnesses.end(), otto_swap()) != r.witnesses.end()) ++otto_witness;
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst <= 1e-12 && otto_witness == cases.size() && elapsed < 1.0;
    return {pass, "max |eta_max - (1 - w_c/w_h)| = " + fmt(worst) + ", Otto witness in " +
                      std::to_string(otto_witness) + "/1000, " + fmt(elapsed) + " s"};
}

Outcome ac1_count() {
    const auto cases = otto_cases(1000);
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& c : cases) {
        std::size_t positive = 0;
        for (const auto& row : qubit_table({c.bh, c.bc}, c.wh, c.wc)) positive += row.work > kEngineWorkTol;
        ++histogram[positive];
    }
    std::string detail = "positive-work permutations per case:";
    for (const auto& [k, v] : histogram) detail += " " + std::to_string(k) + "->" + std::to_string(v);
    const bool pass = histogram.size() == 1 && histogram.begin()->first == 4;
    return {pass, detail + " (expected 4 in every case)"};
}

Outcome ac2() {
    const InverseTemperatures beta(6.0, 7.0);
    const SimplePermSpec spec(2, 3);
    const auto out = simple_perm_report(spec, 2.0, 3.0, beta);
    const Fraction exact = simple_perm_efficiency(spec, Fraction(2, 1), Fraction(3, 1));
    const auto sweep = optimal_noncatalytic(Spectrum::qubit(2.0), Spectrum::qubit(3.0), beta, Objective::efficiency);
    const bool eta_ok = out.report.efficiency && *out.report.efficiency == 0.1 && exact == Fraction(1, 10);
    const bool pass = eta_ok && out.report.work > 0.0 && !sweep.engine_regime;
    return {pass, "eta = " + exact.to_string() + " (" +
                      (out.report.efficiency ? fmt(*out.report.efficiency) : std::string("none")) +
                      "), W = " + fmt(out.report.work) +
                      ", non-catalytic engine regime: " + (sweep.engine_regime ? "yes" : "no")};
}

Outcome ac3() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> mk(0, 15), nk(1, 15);
    double worst = 0.0;
    std::size_t count = 0;
    while (count < 1000) {
        const double ah = u(rng), ac = u(rng);
        if (!(ah > 0.0 && ac > 0.0) || ah == ac) continue;
        const SimplePermSpec spec(mk(rng), nk(rng));
        const double linear = solve_catalyst_system(spec, ah, ac).delta_p;
        worst = std::max(worst, std::abs(delta_p_closed_form(spec, ah, ac) - linear));
        ++count;
    }

    double worst_w2 = 0.0, worst_eta2 = 0.0;
    std::uniform_real_distribution<double> v(0.1, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double wh = v(rng), wc = v(rng), bh = v(rng), bc = bh + v(rng);
        const double ah = std::exp(-bh * wh), ac = std::exp(-bc * wc);
        const double norm = 1.0 / ((1.0 + ah) * (1.0 + ac));
        const double w2 = (2.0 * wh - wc) * norm * (ah * ah - ac) / (1.0 + ac + 2.0 * ah);
        const auto out = simple_perm_report(SimplePermSpec(1, 1), wh, wc, {bh, bc});
        worst_w2 = std::max(worst_w2, std::abs(out.report.work - w2));
        if (out.report.efficiency) {
            worst_eta2 = std::max(worst_eta2, std::abs(*out.report.efficiency - (1.0 - wc / (2.0 * wh))));
        }
    }
    const bool pass = worst <= 1e-10 && worst_w2 <= 1e-12 && worst_eta2 <= 1e-12;
    return {pass, "max |dP_closed - dP_solve| = " + fmt(worst) + ", max |W - W_2| = " + fmt(worst_w2) +
                      ", max |eta - eta_2| = " + fmt(worst_eta2)};
}

Outcome ac4() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::size_t checked = 0, wrong_n = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const double wh = 0.5 + u(rng), wc = 0.2 + 2.0 * u(rng);
        const double bh = 0.05 + u(rng) * 0.3;
        const double bc = bh * wh * (11.0 + 4.0 * u(rng)) / wc;  // ratio above 10
        if (!(bc > bh)) continue;
        const InverseTemperatures beta(bh, bc);
        const double ratio = bc * wc / (bh * wh);
        for (std::size_t d = 2; d <= 10; ++d) {
            if (wc / wh > static_cast<double>(d) || static_cast<double>(d) > ratio) continue;
            const auto best = optimal_simple_perm_efficiency(d, wh, wc, beta);
            worst = std::max(worst, std::abs(best.efficiency - (1.0 - wc / (static_cast<double>(d) * wh))));
            wrong_n += best.best_n != 1;
            ++checked;
        }
    }
    const bool pass = checked > 0 && worst <= 1e-12 && wrong_n == 0;
    return {pass, std::to_string(checked) + " (d, params) cases, max error " + fmt(worst) +
                      ", maximum away from n = 1 in " + std::to_string(wrong_n)};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(std::move(cells));
    }
    return rows;
}

Outcome ac5() {
    // beta_h w_h = 0.02, beta_c w_c = 0.16, omega_h = 1, omega_c = 0.9
    const double wc = 0.9;
    const InverseTemperatures beta(0.02, 0.16 / wc);
    const auto csv = parse_csv(work_profile_csv(work_profile(30, 1.0, wc, beta)));
    std::vector<double> w;
    for (std::size_t i = 1; i < csv.size(); ++i) w.push_back(std::stod(csv[i][1]));
    bool signs = w.size() == 30;
    for (std::size_t i = 0; i < w.size(); ++i) signs = signs && ((w[i] > 0.0) == (i + 1 >= 4));
    bool concave = true;
    for (std::size_t i = 1; i + 1 < w.size(); ++i) concave = concave && (w[i - 1] + w[i + 1] <= 2.0 * w[i]);
    const std::size_t argmax = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
    const bool interior = argmax > 0 && argmax + 1 < w.size();
    return {signs && concave && interior,
            std::string("W > 0 exactly for n >= 4: ") + (signs ? "yes" : "no") +
                ", discretely concave: " + (concave ? "yes" : "no") + ", maximum at n = " +
                std::to_string(argmax + 1)};
}

struct RegimeCells {
    RegimeGrid grid;
    // (x index, y index, label or d/n) -> feasible
    std::map<std::string, std::vector<char>> layers;
};

RegimeCells emitted_regime_map() {
    RegimeCells cells;
    const std::vector<Fraction> ratios{Fraction(5, 3), parse_fraction("2.2"), parse_fraction("3.2"), parse_fraction("4")};
    const auto csv = parse_csv(regime_map_csv(regime_map(ratios, cells.grid), cells.grid));
    const std::size_t res = cells.grid.resolution;
    std::size_t row = 1;
    for (std::size_t i = 0; i < res; ++i) {
        for (std::size_t j = 0; j < res; ++j) {
            for (std::size_t k = 0; k < 2 + ratios.size(); ++k, ++row) {
                const auto& r = csv[row];
                const std::string key = r[4] == "catalytic" ? r[2] : r[4];
                auto& layer = cells.layers[key];
                layer.resize(res * res);
                layer[i * res + j] = r[3] == "1";
            }
        }
    }
    return cells;
}

std::size_t nearest_cell(double v, double lo, double hi, std::size_t res) {
    const double pos = (v - lo) / (hi - lo) * static_cast<double>(res) - 0.5;
    return static_cast<std::size_t>(std::clamp(std::floor(pos + 0.5 - 1e-9), 0.0, static_cast<double>(res - 1)));
}

Outcome ac6() {
    const auto start = Clock::now();
    const RegimeCells cells = emitted_regime_map();
    const auto& g = cells.grid;
    const std::size_t res = g.resolution;
    const std::size_t i = nearest_cell(7.0 / 6.0, g.beta_ratio_min, g.beta_ratio_max, res);
    const std::size_t j = nearest_cell(1.5, g.freq_ratio_min, g.freq_ratio_max, res);
    const bool point = cells.layers.at("5/3")[i * res + j] && !cells.layers.at("otto")[i * res + j];

    std::size_t violations = 0;
    for (const char* key : {"11/5", "16/5", "4"}) {
        const auto& cat = cells.layers.at(key);
        const auto& carnot = cells.layers.at("carnot");
        for (std::size_t c = 0; c < res * res; ++c) violations += cat[c] && !carnot[c];
    }
    return {point && violations == 0,
            "cell (" + fmt(g.beta_ratio_at(i)) + ", " + fmt(g.freq_ratio_at(j)) + "): catalytic 5/3 " +
                (cells.layers.at("5/3")[i * res + j] ? "feasible" : "infeasible") + ", otto " +
                (cells.layers.at("otto")[i * res + j] ? "feasible" : "infeasible") +
                "; carnot >= catalytic violations: " + std::to_string(violations) + " (" +
                fmt(seconds_since(start)) + " s)"};
}

Outcome ac6_nesting() {
    const RegimeCells cells = emitted_regime_map();
    const std::size_t n = cells.grid.resolution * cells.grid.resolution;
    std::string detail = "cells where otto holds but catalytic(d/n) does not:";
    std::size_t total = 0;
    for (const char* key : {"11/5", "16/5", "4"}) {
        std::size_t v = 0;
        for (std::size_t c = 0; c < n; ++c) v += cells.layers.at("otto")[c] && !cells.layers.at(key)[c];
        detail += std::string(" ") + key + "->" + std::to_string(v);
        total += v;
    }
    return {total == 0, detail};
}

struct Stroke {
    PopulationVector final_state;
};

Outcome ac7() {
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    struct Shape {
        std::size_t ds, dh, dc;
    };
    const Shape shapes[] = {{1, 2, 2}, {1, 2, 3}, {1, 3, 2}, {1, 2, 4}, {1, 4, 2}, {2, 2, 2}};
    constexpr std::size_t kGroups = 5000, kPerGroup = 20;

    std::size_t strokes = 0, first_law = 0, clausius = 0, heat_sign = 0, carnot = 0, ordering = 0;
    for (std::size_t g = 0; g < kGroups; ++g) {
        const Shape s = shapes[g % std::size(shapes)];
        auto levels = [&](std::size_t dim) {
            std::vector<double> e(dim, 0.0);
            for (std::size_t k = 1; k < dim; ++k) e[k] = e[k - 1] + 0.05 + 2.0 * u(rng);
            return Spectrum(e);
        };
        const Spectrum hot = levels(s.dh), cold = levels(s.dc);
        const double bh = 0.05 + 2.0 * u(rng);
        const InverseTemperatures beta(bh, bh * (1.05 + 4.0 * u(rng)));
        const std::size_t n = s.ds * s.dh * s.dc, block = s.dh * s.dc;

        // Catalyst-preserving pool: block-local permutations, plus a simple
        // permutation with its stationary catalyst on qubit pairs.
        std::vector<PermutationMap> pool;
        std::vector<double> cat(s.ds, 1.0 / static_cast<double>(s.ds));
        if (s.ds == 2) {
            const double ah = std::exp(-beta.hot() * hot[1]), ac = std::exp(-beta.cold() * cold[1]);
            const SimplePermSpec spec(u(rng) < 0.5 ? 1 : 0, u(rng) < 0.5 ? 1 : 2);
            const SimplePermSpec used = spec.dim() == 2 ? spec : SimplePermSpec(1, 1);
            try {
                cat = solve_catalyst_state(used, ah, ac).p;
                pool.push_back(build_simple_perm(used));
            } catch (const Error&) {
                const double c0 = 0.1 + 0.8 * u(rng);
                cat = {c0, 1.0 - c0};
            }
        }
        for (int k = 0; k < 6; ++k) {
            std::vector<std::size_t> image(n);
            for (std::size_t b = 0; b < s.ds; ++b) {
                std::vector<std::size_t> local(block);
                std::iota(local.begin(), local.end(), std::size_t{0});
                std::shuffle(local.begin(), local.end(), rng);
                for (std::size_t x = 0; x < block; ++x) image[b * block + x] = b * block + local[x];
            }
            pool.emplace_back(std::move(image));
        }
        const PopulationVector initial =
            product_state(cat, gibbs_populations(hot, beta.hot()), gibbs_populations(cold, beta.cold()));

        double acc_max = -INFINITY, eng_min = INFINITY, eng_max = -INFINITY, cool_min = INFINITY;
        for (std::size_t k = 0; k < kPerGroup; ++k) {
            std::vector<double> mixed(n, 0.0);
            const std::size_t terms = k % 2 == 0 ? 1 : 2 + rng() % 3;
            double total = 0.0;
            std::vector<double> weights(terms);
            for (double& w : weights) total += (w = 0.05 + u(rng));
            for (std::size_t t = 0; t < terms; ++t) {
                const auto out = apply_permutation(initial.probs(), pool[rng() % pool.size()]);
                for (std::size_t x = 0; x < n; ++x) mixed[x] += weights[t] / total * out[x];
            }
            const double sum = std::accumulate(mixed.begin(), mixed.end(), 0.0);
            for (double& x : mixed) x /= sum;
            const auto r = stroke_report(initial, PopulationVector(mixed, initial.shape()), hot, cold, beta);
            ++strokes;
            first_law += std::abs(r.work - (r.heat_hot + r.heat_cold)) > 1e-12;
            clausius += clausius_lhs(r.heat_hot, r.heat_cold, beta) > 1e-10;
            const bool engine = r.modes.contains(Mode::engine);
            heat_sign += engine && !(r.heat_hot > 0.0);
            carnot += engine && r.efficiency && *r.efficiency > beta.carnot_efficiency() + 1e-10;
            // Efficiency is ill-conditioned as Q_h -> 0.
            if (!r.efficiency || std::abs(r.heat_hot) <= 1e-9) continue;
            const double eta = *r.efficiency;
            if (engine) {
                eng_min = std::min(eng_min, eta);
                eng_max = std::max(eng_max, eta);
            }
            if (r.modes.contains(Mode::cooler)) cool_min = std::min(cool_min, eta);
            if (r.modes.contains(Mode::accelerator)) acc_max = std::max(acc_max, eta);
        }
        const bool ordered = acc_max <= std::min(eng_min, cool_min) + 1e-10 && eng_max <= cool_min + 1e-10 &&
                             (eng_max == -INFINITY || eng_min > 0.0);
        ordering += !ordered;
    }
    const bool pass = first_law + clausius + heat_sign + carnot + ordering == 0;
    return {pass, std::to_string(strokes) + " strokes; violations: first law " + std::to_string(first_law) +
                      ", Clausius " + std::to_string(clausius) + ", W>0 => Q_h>0 " + std::to_string(heat_sign) +
                      ", Carnot " + std::to_string(carnot) + ", efficiency ordering " + std::to_string(ordering)};
}

Spectrum body_spectrum(const Spectrum& hot, const Spectrum& cold) {
    std::vector<double> e;
    for (double h : hot.levels())
        for (double c : cold.levels()) e.push_back(h + c);
    return Spectrum(e);
}

Outcome ac8() {
    const auto start = Clock::now();
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto qubit = [&]() { return Spectrum::qubit(0.1 + 2.0 * u(rng)); };

    double worst_gap = 0.0, worst_dominance = 0.0, worst_residual = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Spectrum hot = qubit(), cold = qubit();
        const double bh = 0.05 + 2.0 * u(rng);
        const InverseTemperatures beta(bh, bh * (1.05 + 4.0 * u(rng)));
        const double c0 = 0.05 + 0.9 * u(rng);
        const std::vector<double> cat{c0, 1.0 - c0};
        const auto initial = product_state(cat, gibbs_populations(hot, beta.hot()), gibbs_populations(cold, beta.cold()));
        const auto problem = build_lp_problem(body_spectrum(hot, cold), initial, 2);
        const auto sol = solve_lp(problem);
        if (sol.status != LPStatus::optimal) return {false, "instance " + std::to_string(i) + " not optimal"};
        worst_gap = std::max(worst_gap, lp_dual_check(sol, problem));
        worst_dominance = std::max(worst_dominance, best_preserving_column(problem) - sol.value);
        worst_residual = std::max(worst_residual, sol.constraint_residual);
    }

    double worst_ergotropy = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t dh = 2 + rng() % 3, dc = dh == 2 ? 2 + rng() % 3 : 2;
        std::vector<double> eh(dh, 0.0), ec(dc, 0.0);
        for (std::size_t k = 1; k < dh; ++k) eh[k] = eh[k - 1] + 0.05 + 2.0 * u(rng);
        for (std::size_t k = 1; k < dc; ++k) ec[k] = ec[k - 1] + 0.05 + 2.0 * u(rng);
        const Spectrum hot(eh), cold(ec);
        const double bh = 0.05 + 2.0 * u(rng);
        const InverseTemperatures beta(bh, bh * (1.05 + 4.0 * u(rng)));
        const std::vector<double> none{1.0};
        const auto initial = product_state(none, gibbs_populations(hot, beta.hot()), gibbs_populations(cold, beta.cold()));
        const auto sol = lp_work_upper_bound(body_spectrum(hot, cold), initial, 1);
        const double erg = ergotropy(initial.probs(), total_energies(Spectrum::trivial(1), hot, cold));
        worst_ergotropy = std::max(worst_ergotropy, std::abs(sol.value - erg));
    }

    double worst_birkhoff = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + rng() % 7;
        BirkhoffTerms mix;
        double total = 0.0;
        for (std::size_t k = 0, terms = 1 + rng() % 6; k < terms; ++k) {
            std::vector<std::size_t> image(n);
            std::iota(image.begin(), image.end(), std::size_t{0});
            std::shuffle(image.begin(), image.end(), rng);
            mix.emplace_back(0.01 + u(rng), PermutationMap(image));
            total += mix.back().first;
        }
        for (auto& t : mix) t.first /= total;
        const auto b = BistochasticMatrix::from_mixture(mix);
        worst_birkhoff = std::max(worst_birkhoff, reconstruction_error(b, birkhoff_decompose(b)));
    }
    const bool pass = worst_gap <= 1e-8 && worst_dominance <= 1e-12 && worst_residual <= 1e-10 &&
                      worst_ergotropy <= 1e-10 && worst_birkhoff <= 1e-10;
    return {pass, "duality check " + fmt(worst_gap) + ", single-permutation excess " + fmt(worst_dominance) +
                      ", constraint residual " + fmt(worst_residual) + ", |LP - ergotropy| " +
                      fmt(worst_ergotropy) + ", Birkhoff error " + fmt(worst_birkhoff) + " (" +
                      fmt(seconds_since(start)) + " s)"};
}

Outcome ac9() {
    const auto start = Clock::now();
    const auto r = run_coherence_suite(kSeed, 200);
    const double elapsed = seconds_since(start);
    const bool pass = r.instances == 200 && r.max_heat_residual <= 1e-10 && elapsed < 10.0;
    return {pass, "max heat residual " + fmt(r.max_heat_residual) + ", max residual incl. W and eta " +
                      fmt(r.max_residual) + ", cyclicity " + fmt(r.max_cyclicity_residual) + ", " + fmt(elapsed) +
                      " s"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"ac1", ac1}, {"ac1-count", ac1_count}, {"ac2", ac2}, {"ac3", ac3},
        {"ac4", ac4}, {"ac5", ac5},             {"ac6", ac6}, {"ac6-nesting", ac6_nesting},
        {"ac7", ac7}, {"ac8", ac8},             {"ac9", ac9},
    };
    const std::string which = argc > 1 ? argv[1] : "all";
    bool any = false, all_pass = true;
    for (const auto& [name, run] : criteria) {
        if (which != "all" && which != name) continue;
        any = true;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        all_pass = all_pass && o.pass;
    }
    if (!any) {
        std::fprintf(stderr, "unknown criterion '%s'\n", which.c_str());
        return 2;
    }
    return all_pass ? 0 : 1;
}

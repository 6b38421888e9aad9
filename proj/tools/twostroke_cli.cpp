// Command-line front end: engine reports, the 24-row qubit table, sweeps,
// regime maps, work profiles, LP bounds and the coherence check.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twostroke/catalysis.hpp"
#include "twostroke/coherence.hpp"
#include "twostroke/error.hpp"
#include "twostroke/lp_bound.hpp"
#include "twostroke/output.hpp"
#include "twostroke/permutation.hpp"
#include "twostroke/thermo.hpp"

namespace {

using nlohmann::json;
using namespace twostroke;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitGuard = 4;

// Raised for conditions that are not library errors but map to exit 3.
struct NoRegime : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineFlags {
    std::optional<double> beta_h, beta_c, omega_h, omega_c;
    std::optional<double> bw_h, bw_c;
    std::size_t catalyst_dim = 1;
    bool otto = false;
    std::string simple;
    std::string perm;

    void attach(CLI::App* cmd, bool with_perm) {
        cmd->add_option("--beta-h", beta_h, "Inverse temperature of the hot bath");
        cmd->add_option("--beta-c", beta_c, "Inverse temperature of the cold bath");
        cmd->add_option("--omega-h", omega_h, "Hot qubit gap");
        cmd->add_option("--omega-c", omega_c, "Cold qubit gap (default 0.9 with --bw-h/--bw-c)");
        cmd->add_option("--bw-h", bw_h, "beta_h*omega_h with omega_h = 1");
        cmd->add_option("--bw-c", bw_c, "beta_c*omega_c with omega_h = 1");
        if (with_perm) {
            cmd->add_option("--catalyst-dim,-d", catalyst_dim, "Catalyst dimension")->check(CLI::PositiveNumber);
            cmd->add_flag("--otto", otto, "Swap |0,1> <-> |1,0>");
            cmd->add_option("--simple", simple, "Simple permutation m,n");
            cmd->add_option("--perm", perm, "'identity' or a comma-separated image");
        }
    }

    struct Resolved {
        double omega_h, omega_c;
        InverseTemperatures beta;
    };

    Resolved resolve() const {
        if (bw_h || bw_c) {
            if (!bw_h || !bw_c) throw Error(ErrorCode::invalid_argument, "--bw-h and --bw-c go together");
            if (beta_h || beta_c || omega_h) {
                throw Error(ErrorCode::invalid_argument, "dimensionless flags exclude --beta-h/--beta-c/--omega-h");
            }
            const double wc = omega_c.value_or(0.9);
            if (!(wc > 0.0)) throw Error(ErrorCode::invalid_argument, "--omega-c must be positive");
            return {1.0, wc, InverseTemperatures(*bw_h, *bw_c / wc)};
        }
        if (!beta_h || !beta_c || !omega_h || !omega_c) {
            throw Error(ErrorCode::invalid_argument,
                        "need --beta-h, --beta-c, --omega-h, --omega-c or --bw-h, --bw-c");
        }
        if (!(*omega_h > 0.0) || !(*omega_c > 0.0)) {
            throw Error(ErrorCode::invalid_argument, "frequencies must be positive");
        }
        return {*omega_h, *omega_c, InverseTemperatures(*beta_h, *beta_c)};
    }

    std::optional<SimplePermSpec> simple_spec() const {
        if (simple.empty()) return std::nullopt;
        const auto comma = simple.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::invalid_argument, "--simple expects m,n");
        std::size_t m = 0, n = 0;
        try {
            m = std::stoul(simple.substr(0, comma));
            n = std::stoul(simple.substr(comma + 1));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::invalid_argument, "--simple expects m,n");
        }
        if (catalyst_dim != 1 && catalyst_dim != m + n) {
            throw Error(ErrorCode::invalid_argument, "--simple m,n requires m + n = catalyst dimension");
        }
        return SimplePermSpec(m, n);
    }
};

PermutationMap parse_image(const std::string& text, std::size_t size) {
    if (text == "identity") return PermutationMap::identity(size);
    std::vector<std::size_t> image;
    std::stringstream ss(text);
    std::string item;
    try {
        while (std::getline(ss, item, ',')) image.push_back(std::stoul(item));
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::invalid_argument, "--perm expects 'identity' or a comma-separated image");
    }
    if (image.size() != size) throw Error(ErrorCode::invalid_argument, "--perm has the wrong length");
    return PermutationMap(std::move(image));
}

// Rounds every float to 12 significant digits so output is stable.
void round_numbers(json& j) {
    if (j.is_number_float()) {
        j = round_significant(j.get<double>());
    } else if (j.is_structured()) {
        for (auto& item : j) round_numbers(item);
    }
}

json images_json(const std::vector<PermutationMap>& perms) {
    json out = json::array();
    for (const auto& p : perms) out.push_back(std::vector<std::size_t>(p.image().begin(), p.image().end()));
    return out;
}

class Sink {
public:
    explicit Sink(const std::string& path) : path_(path) {}

    void write(const std::string& text) const {
        if (path_.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path_);
        if (!out) throw Error(ErrorCode::invalid_argument, "cannot open " + path_);
        out << text;
    }

    void write(json j) const {
        round_numbers(j);
        write(j.dump(2) + "\n");
    }

private:
    const std::string& path_;
};

int cmd_report(const EngineFlags& flags, const Sink& sink) {
    const auto cfg = flags.resolve();
    if (const auto spec = flags.simple_spec()) {
        const SimplePermOutcome out = simple_perm_report(*spec, cfg.omega_h, cfg.omega_c, cfg.beta);
        json j = out.report;
        j["catalyst"] = {{"m", spec->m}, {"n", spec->n}, {"p", out.catalyst.p},
                         {"delta_p", out.catalyst.delta_p}};
        sink.write(j);
        return kExitOk;
    }

    const Spectrum hot = Spectrum::qubit(cfg.omega_h);
    const Spectrum cold = Spectrum::qubit(cfg.omega_c);
    const std::size_t d = flags.catalyst_dim;
    const std::vector<double> catalyst(d, 1.0 / static_cast<double>(d));
    const PopulationVector initial = product_state(catalyst, gibbs_populations(hot, cfg.beta.hot()),
                                                   gibbs_populations(cold, cfg.beta.cold()));
    PermutationMap perm = PermutationMap::identity(initial.size());
    if (flags.otto) {
        if (d != 1) throw Error(ErrorCode::invalid_argument, "--otto acts without a catalyst");
        perm = otto_swap();
    } else if (!flags.perm.empty()) {
        perm = parse_image(flags.perm, initial.size());
    } else {
        throw Error(ErrorCode::invalid_argument, "choose --otto, --simple m,n or --perm");
    }
    const CycleReport report = stroke_report(initial, apply_permutation(initial, perm), hot, cold, cfg.beta);
    if (flags.otto && !(report.work > kEngineWorkTol)) {
        throw NoRegime("no engine regime");
    }
    sink.write(json(report));
    return kExitOk;
}

int cmd_table24(const EngineFlags& flags, const Sink& sink) {
    const auto cfg = flags.resolve();
    sink.write(qubit_table_csv(qubit_table(cfg.beta, cfg.omega_h, cfg.omega_c)));
    return kExitOk;
}

int cmd_optimize(const EngineFlags& flags, const std::string& objective, const Sink& sink) {
    const auto cfg = flags.resolve();
    const Objective obj = objective == "work" ? Objective::work : Objective::efficiency;
    const auto result =
        optimal_noncatalytic(Spectrum::qubit(cfg.omega_h), Spectrum::qubit(cfg.omega_c), cfg.beta, obj);
    json j = {{"objective", objective},
              {"engine_regime", result.engine_regime},
              {"best_value", result.best_value},
              {"witnesses", images_json(result.witnesses)},
              {"report", result.report ? json(*result.report) : json(nullptr)}};
    sink.write(j);
    if (!result.engine_regime) {
        std::cerr << "no engine regime\n";
        return kExitInfeasible;
    }
    return kExitOk;
}

int cmd_regime_map(const std::string& ratios, const RegimeGrid& grid, const Sink& sink) {
    std::vector<Fraction> values;
    std::stringstream ss(ratios);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(parse_fraction(item));
    sink.write(regime_map_csv(regime_map(values, grid), grid));
    return kExitOk;
}

int cmd_fig5(std::size_t d, const EngineFlags& flags, const Sink& sink) {
    const auto cfg = flags.resolve();
    sink.write(work_profile_csv(work_profile(d, cfg.omega_h, cfg.omega_c, cfg.beta)));
    return kExitOk;
}

int cmd_lp_bound(const EngineFlags& flags, const Sink& sink) {
    const auto cfg = flags.resolve();
    const Spectrum hot = Spectrum::qubit(cfg.omega_h);
    const Spectrum cold = Spectrum::qubit(cfg.omega_c);
    const std::size_t d = flags.catalyst_dim;
    std::vector<double> catalyst(d, 1.0 / static_cast<double>(d));
    if (const auto spec = flags.simple_spec()) {
        catalyst = solve_catalyst_state(*spec, std::exp(-cfg.beta.hot() * cfg.omega_h),
                                        std::exp(-cfg.beta.cold() * cfg.omega_c)).p;
    }
    const PopulationVector initial = product_state(catalyst, gibbs_populations(hot, cfg.beta.hot()),
                                                   gibbs_populations(cold, cfg.beta.cold()));
    const Spectrum body({0.0, cfg.omega_c, cfg.omega_h, cfg.omega_h + cfg.omega_c});
    const LPSolution sol = lp_work_upper_bound(body, initial, catalyst.size());
    sink.write(json(sol));
    if (sol.status == LPStatus::guard_exceeded) {
        std::cerr << "restricted-column (not a valid upper bound)\n";
        return kExitGuard;
    }
    if (sol.status == LPStatus::infeasible) return kExitInfeasible;
    return kExitOk;
}

int cmd_coherence_check(std::uint64_t seed, std::size_t count, const Sink& sink) {
    const CoherenceSuiteResult r = run_coherence_suite(seed, count);
    sink.write(json{{"instances", r.instances},
                    {"seed", seed},
                    {"max_residual", r.max_residual},
                    {"max_heat_residual", r.max_heat_residual},
                    {"max_cyclicity_residual", r.max_cyclicity_residual}});
    return kExitOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::infeasible_catalyst:
        case ErrorCode::cyclicity_violated:
        case ErrorCode::singular_system:
            return kExitInfeasible;
        case ErrorCode::guard_exceeded:
            return kExitGuard;
        default:
            return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stroke quantum heat engines with and without a catalyst"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string output;
    std::uint64_t seed = 20240601;
    app.add_option("--output,-o", output, "Write output to this file instead of stdout");
    app.add_option("--seed", seed, "Seed for randomized suites");

    EngineFlags report_flags, table_flags, optimize_flags, fig5_flags, lp_flags;

    auto* report = app.add_subcommand("report", "Heats, work and efficiency of one stroke");
    report_flags.attach(report, true);

    auto* table24 = app.add_subcommand("table24", "All 24 permutations of a qubit pair as CSV");
    table_flags.attach(table24, false);

    std::string objective = "efficiency";
    auto* optimize = app.add_subcommand("optimize", "Best non-catalytic permutation");
    optimize_flags.attach(optimize, false);
    optimize->add_option("--objective", objective)->check(CLI::IsMember({"efficiency", "work"}));

    RegimeGrid grid;
    std::string ratios = "2.2,3.2,4";
    auto* regime = app.add_subcommand("regime-map", "Operating regions on the (beta_c/beta_h, omega_c/omega_h) plane");
    regime->add_option("--d-over-n", ratios, "Comma-separated d/n values, as p/q or decimals");
    regime->add_option("--resolution", grid.resolution, "Grid cells per axis")->check(CLI::PositiveNumber);
    regime->add_option("--beta-ratio-min", grid.beta_ratio_min, "Lower edge of beta_c/beta_h");
    regime->add_option("--beta-ratio-max", grid.beta_ratio_max, "Upper edge of beta_c/beta_h");
    regime->add_option("--freq-ratio-min", grid.freq_ratio_min, "Lower edge of omega_c/omega_h");
    regime->add_option("--freq-ratio-max", grid.freq_ratio_max, "Upper edge of omega_c/omega_h");

    std::size_t fig5_d = 30;
    std::optional<double> fig5_ratio;
    auto* fig5 = app.add_subcommand("fig5", "Work of every simple permutation at fixed catalyst dimension");
    fig5_flags.attach(fig5, false);
    fig5->add_option("--catalyst-dim,-d", fig5_d, "Catalyst dimension")->check(CLI::PositiveNumber);
    fig5->add_option("--ratio", fig5_ratio, "beta_c*omega_c / (beta_h*omega_h); sets --bw-c from --bw-h");

    auto* lp = app.add_subcommand("lp-bound", "Linear-programming bound on catalytic work");
    lp_flags.attach(lp, true);

    std::size_t coherence_count = 200;
    auto* coherence = app.add_subcommand("coherence-check", "Randomized coherent-catalyst equivalence check");
    coherence->add_option("--count", coherence_count, "Number of random instances")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    const Sink sink(output);
    try {
        if (*report) return cmd_report(report_flags, sink);
        if (*table24) return cmd_table24(table_flags, sink);
        if (*optimize) return cmd_optimize(optimize_flags, objective, sink);
        if (*regime) return cmd_regime_map(ratios, grid, sink);
        if (*fig5) {
            if (fig5_flags.omega_h || fig5_flags.beta_h) {
                return cmd_fig5(fig5_d, fig5_flags, sink);
            }
            if (!fig5_flags.bw_h) fig5_flags.bw_h = 0.02;
            if (fig5_ratio) fig5_flags.bw_c = *fig5_ratio * *fig5_flags.bw_h;
            if (!fig5_flags.bw_c) fig5_flags.bw_c = 8.0 * *fig5_flags.bw_h;
            return cmd_fig5(fig5_d, fig5_flags, sink);
        }
        if (*lp) return cmd_lp_bound(lp_flags, sink);
        if (*coherence) return cmd_coherence_check(seed, coherence_count, sink);
    } catch (const NoRegime& e) {
        std::cerr << e.what() << '\n';
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kExitConfig;
}

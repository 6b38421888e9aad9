#include "twostroke/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "twostroke/catalysis.hpp"
#include "twostroke/error.hpp"
#include "twostroke/permutation.hpp"

namespace twostroke {

namespace {

using Index = Eigen::Index;
using Complex = std::complex<double>;

ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = values[i];
    return m;
}

ComplexMatrix permutation_unitary(const PermutationMap& perm) {
    const auto n = static_cast<Index>(perm.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (std::size_t x = 0; x < perm.size(); ++x) m(static_cast<Index>(perm[x]), static_cast<Index>(x)) = 1.0;
    return m;
}

std::vector<double> random_simplex_point(std::size_t n, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> p(n);
    for (double& x : p) x = expo(rng) + 1e-3;
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= s;
    return p;
}

}  // namespace

void require_unitary(const ComplexMatrix& u) {
    if (u.rows() != u.cols() || u.rows() == 0) {
        throw Error(ErrorCode::shape_mismatch, "unitary must be square");
    }
    const double err = (u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (err > kUnitaryTol) throw Error(ErrorCode::invalid_argument, "matrix is not unitary");
}

void require_density(const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw Error(ErrorCode::shape_mismatch, "density matrix must be square");
    }
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTol) {
        throw Error(ErrorCode::invalid_argument, "density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kNormalizationTol) {
        throw Error(ErrorCode::invalid_argument, "density matrix trace differs from 1");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kDensityTol) {
        throw Error(ErrorCode::invalid_argument, "density matrix is not positive semidefinite");
    }
}

ComplexMatrix dephase(const ComplexMatrix& rho, const Spectrum& h) {
    if (rho.rows() != static_cast<Index>(h.dim()) || rho.cols() != rho.rows()) {
        throw Error(ErrorCode::shape_mismatch, "state and spectrum dimensions differ");
    }
    ComplexMatrix out = rho;
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            if (h[static_cast<std::size_t>(i)] != h[static_cast<std::size_t>(j)]) out(i, j) = 0.0;
    return out;
}

ComplexMatrix reduce_catalyst(const ComplexMatrix& rho, const BasisShape& shape) {
    const auto block = static_cast<Index>(shape.hot * shape.cold);
    const auto ds = static_cast<Index>(shape.catalyst);
    ComplexMatrix out = ComplexMatrix::Zero(ds, ds);
    for (Index i = 0; i < ds; ++i)
        for (Index j = 0; j < ds; ++j) out(i, j) = rho.block(i * block, j * block, block, block).trace();
    return out;
}

ComplexMatrix reduce_hot(const ComplexMatrix& rho, const BasisShape& shape) {
    const auto dh = static_cast<Index>(shape.hot);
    ComplexMatrix out = ComplexMatrix::Zero(dh, dh);
    for (std::size_t s = 0; s < shape.catalyst; ++s)
        for (std::size_t c = 0; c < shape.cold; ++c)
            for (Index a = 0; a < dh; ++a)
                for (Index b = 0; b < dh; ++b)
                    out(a, b) += rho(static_cast<Index>(shape.index(s, static_cast<std::size_t>(a), c)),
                                     static_cast<Index>(shape.index(s, static_cast<std::size_t>(b), c)));
    return out;
}

ComplexMatrix reduce_cold(const ComplexMatrix& rho, const BasisShape& shape) {
    const auto dc = static_cast<Index>(shape.cold);
    ComplexMatrix out = ComplexMatrix::Zero(dc, dc);
    for (std::size_t s = 0; s < shape.catalyst; ++s)
        for (std::size_t h = 0; h < shape.hot; ++h)
            for (Index a = 0; a < dc; ++a)
                for (Index b = 0; b < dc; ++b)
                    out(a, b) += rho(static_cast<Index>(shape.index(s, h, static_cast<std::size_t>(a))),
                                     static_cast<Index>(shape.index(s, h, static_cast<std::size_t>(b))));
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double energy_expectation(const ComplexMatrix& rho, std::span<const double> energies) {
    if (rho.rows() != static_cast<Index>(energies.size())) {
        throw Error(ErrorCode::shape_mismatch, "state and spectrum dimensions differ");
    }
    double e = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) e += energies[i] * rho(static_cast<Index>(i), static_cast<Index>(i)).real();
    return e;
}

StrokeHeats coherent_stroke(const ComplexMatrix& rho_s, const ComplexMatrix& u, const Spectrum& hot,
                            const Spectrum& cold, const InverseTemperatures& beta,
                            const std::optional<Spectrum>& catalyst_h) {
    require_density(rho_s);
    require_unitary(u);
    const BasisShape shape{static_cast<std::size_t>(rho_s.rows()), hot.dim(), cold.dim()};
    if (u.rows() != static_cast<Index>(shape.size())) {
        throw Error(ErrorCode::shape_mismatch, "unitary does not act on catalyst, hot and cold");
    }
    if (catalyst_h && catalyst_h->dim() != shape.catalyst) {
        throw Error(ErrorCode::shape_mismatch, "catalyst spectrum dimension differs");
    }
    const auto tau_h = gibbs_populations(hot, beta.hot());
    const auto tau_c = gibbs_populations(cold, beta.cold());
    const ComplexMatrix initial = kron(rho_s, kron(diagonal(tau_h), diagonal(tau_c)));
    const ComplexMatrix final_state = u * initial * u.adjoint();

    StrokeHeats out;
    out.heat_hot = energy_expectation(reduce_hot(initial, shape), hot.levels()) -
                   energy_expectation(reduce_hot(final_state, shape), hot.levels());
    out.heat_cold = energy_expectation(reduce_cold(initial, shape), cold.levels()) -
                    energy_expectation(reduce_cold(final_state, shape), cold.levels());
    const ComplexMatrix cat_f = reduce_catalyst(final_state, shape);
    double catalyst_change = 0.0;
    if (catalyst_h) {
        catalyst_change = energy_expectation(cat_f, catalyst_h->levels()) -
                          energy_expectation(rho_s, catalyst_h->levels());
    }
    out.work = out.heat_hot + out.heat_cold - catalyst_change;
    if (std::abs(out.heat_hot) > kConservationTol) out.efficiency = 1.0 + out.heat_cold / out.heat_hot;
    out.cyclicity_residual = (cat_f - rho_s).cwiseAbs().maxCoeff();
    return out;
}

CoherenceComparison decohere_catalyst_construction(const ComplexMatrix& rho_s, const ComplexMatrix& u,
                                                   const Spectrum& hot, const Spectrum& cold,
                                                   const InverseTemperatures& beta,
                                                   const std::optional<Spectrum>& catalyst_h) {
    require_density(rho_s);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_s);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::singular_system, "eigendecomposition failed");
    const Index ds = rho_s.rows();

    CoherenceComparison out;
    out.k = es.eigenvectors().rowwise().reverse();
    std::vector<double> eigen(static_cast<std::size_t>(ds));
    for (Index i = 0; i < ds; ++i) eigen[static_cast<std::size_t>(i)] = std::max(es.eigenvalues()(ds - 1 - i), 0.0);
    const double total = std::accumulate(eigen.begin(), eigen.end(), 0.0);
    for (double& e : eigen) e /= total;

    const ComplexMatrix rest = ComplexMatrix::Identity(static_cast<Index>(hot.dim() * cold.dim()),
                                                       static_cast<Index>(hot.dim() * cold.dim()));
    const ComplexMatrix big_k = kron(out.k, rest);
    const ComplexMatrix u_tilde = big_k.adjoint() * u * big_k;

    // The catalyst Hamiltonian in the eigenbasis of rho_s is K^dag H_s K; only
    // its diagonal enters the energy of the dephased catalyst.
    std::optional<Spectrum> h_tilde;
    out.original = coherent_stroke(rho_s, u, hot, cold, beta, catalyst_h);
    if (catalyst_h) {
        const ComplexMatrix hs = out.k.adjoint() * diagonal(catalyst_h->levels()) * out.k;
        std::vector<double> levels(static_cast<std::size_t>(ds));
        for (Index i = 0; i < ds; ++i) levels[static_cast<std::size_t>(i)] = hs(i, i).real() - hs(0, 0).real();
        h_tilde = Spectrum(levels);
    }
    out.constructed = coherent_stroke(diagonal(eigen), u_tilde, hot, cold, beta, h_tilde);

    out.max_residual = std::max({std::abs(out.original.heat_hot - out.constructed.heat_hot),
                                 std::abs(out.original.heat_cold - out.constructed.heat_cold),
                                 std::abs(out.original.work - out.constructed.work)});
    // Efficiency is a ratio of heats and loses accuracy as Q_h -> 0.
    if (out.original.efficiency && out.constructed.efficiency &&
        std::abs(out.original.heat_hot) > kEfficiencyHeatFloor) {
        const double eta = *out.original.efficiency;
        out.max_residual = std::max(out.max_residual, std::abs(eta - *out.constructed.efficiency) /
                                                          std::max(1.0, std::abs(eta)));
    }
    return out;
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix z(static_cast<Index>(n), static_cast<Index>(n));
    for (Index i = 0; i < z.rows(); ++i)
        for (Index j = 0; j < z.cols(); ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < q.cols(); ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

CoherenceInstance random_coherence_instance(std::size_t catalyst_dim, std::size_t hot_dim,
                                            std::size_t cold_dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_spectrum = [&](std::size_t dim) {
        std::vector<double> levels(dim, 0.0);
        for (std::size_t i = 1; i < dim; ++i) levels[i] = levels[i - 1] + 0.1 + unit(rng);
        return Spectrum(levels);
    };
    const double beta_h = 0.2 + unit(rng);
    CoherenceInstance inst{ComplexMatrix(), ComplexMatrix(), random_spectrum(hot_dim),
                           random_spectrum(cold_dim), InverseTemperatures(beta_h, beta_h * (1.1 + 3.0 * unit(rng)))};
    const BasisShape shape{catalyst_dim, hot_dim, cold_dim};
    const std::size_t block = hot_dim * cold_dim;

    std::vector<double> p;
    std::optional<PermutationMap> perm;
    if (hot_dim == 2 && cold_dim == 2 && unit(rng) < 0.5) {
        // A simple permutation with its stationary catalyst keeps the marginal
        // while moving population between blocks.
        const std::size_t n = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(catalyst_dim));
        const SimplePermSpec spec(catalyst_dim - std::min(n, catalyst_dim), std::min(n, catalyst_dim));
        const double a_h = std::exp(-inst.beta.hot() * inst.hot[1]);
        const double a_c = std::exp(-inst.beta.cold() * inst.cold[1]);
        if (std::abs(a_h - a_c) > 1e-6) {
            const CatalystState state = solve_catalyst_system(spec, a_h, a_c);
            if (std::all_of(state.p.begin(), state.p.end(), [](double x) { return x > 1e-6; })) {
                p = state.p;
                perm = build_simple_perm(spec);
            }
        }
    }
    if (!perm) {
        p = random_simplex_point(catalyst_dim, rng);
        std::vector<std::size_t> image(shape.size());
        for (std::size_t s = 0; s < catalyst_dim; ++s) {
            std::vector<std::size_t> local(block);
            std::iota(local.begin(), local.end(), std::size_t{0});
            std::shuffle(local.begin(), local.end(), rng);
            for (std::size_t x = 0; x < block; ++x) image[s * block + x] = s * block + local[x];
        }
        perm = PermutationMap(std::move(image));
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= total;

    const ComplexMatrix k = random_unitary(catalyst_dim, rng);
    inst.rho_s = k * diagonal(p) * k.adjoint();
    inst.rho_s = 0.5 * (inst.rho_s + inst.rho_s.adjoint()).eval();

    ComplexMatrix phases = ComplexMatrix::Zero(static_cast<Index>(shape.size()), static_cast<Index>(shape.size()));
    for (Index i = 0; i < phases.rows(); ++i) phases(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
    const ComplexMatrix id_hc = ComplexMatrix::Identity(static_cast<Index>(block), static_cast<Index>(block));
    const ComplexMatrix big_k = kron(k, id_hc);
    const ComplexMatrix v = kron(ComplexMatrix::Identity(static_cast<Index>(catalyst_dim), static_cast<Index>(catalyst_dim)),
                                 random_unitary(block, rng));
    inst.u = v * big_k * permutation_unitary(*perm) * phases * big_k.adjoint();
    return inst;
}

CoherenceSuiteResult run_coherence_suite(std::uint64_t seed, std::size_t count) {
    struct Shape {
        std::size_t ds, dh, dc;
    };
    static constexpr Shape kShapes[] = {{2, 2, 2}, {2, 2, 3}, {2, 3, 2}, {3, 2, 2}};
    std::mt19937_64 rng(seed);
    CoherenceSuiteResult result;
    for (std::size_t i = 0; i < count; ++i) {
        const Shape& s = kShapes[i % std::size(kShapes)];
        const CoherenceInstance inst = random_coherence_instance(s.ds, s.dh, s.dc, rng);
        const CoherenceComparison cmp = decohere_catalyst_construction(inst.rho_s, inst.u, inst.hot, inst.cold, inst.beta);
        result.max_heat_residual = std::max({result.max_heat_residual,
                                             std::abs(cmp.original.heat_hot - cmp.constructed.heat_hot),
                                             std::abs(cmp.original.heat_cold - cmp.constructed.heat_cold)});
        result.max_residual = std::max(result.max_residual, cmp.max_residual);
        result.max_cyclicity_residual = std::max({result.max_cyclicity_residual, cmp.original.cyclicity_residual,
                                                  cmp.constructed.cyclicity_residual});
        ++result.instances;
    }
    return result;
}

}  // namespace twostroke

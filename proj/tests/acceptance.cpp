// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "phaseborn/cli.hpp"
#include "phaseborn/kernels.hpp"
#include "phaseborn/oscillator.hpp"
#include "phaseborn/reduction.hpp"

using namespace phaseborn;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

// Every DensityMatrix produced by the suite, re-checked by criterion 3.
std::vector<DensityMatrix> g_matrices;

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ClassicalState make_state(int variant, int d, std::uint64_t seed) {
    const auto phi = StateVector::normalized(testing::random_vector(d, seed));
    const auto chi = StateVector::normalized(testing::random_vector(d, seed + 7));
    switch (variant) {
    case 0:
        return PointMass{phi};
    case 1: {
        const double w = 0.1 + 0.8 * std::norm(phi[0]);
        return Mixture({{w, phi}, {1.0 - w, chi}});
    }
    case 2:
        return Uniform{};
    default:
        if (seed % 2 == 0) {
            return WeightedDensity{ProjectivePower{phi, static_cast<unsigned>(1 + seed % 3)}};
        }
        return WeightedDensity{ExponentialOverlap(phi, 0.5 + static_cast<double>(seed % 5))};
    }
}

// 1. Same-sample Born identity.
Outcome born_identity() {
    const auto t0 = Clock::now();
    const int dims[] = {1, 2, 3, 5};
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 100; ++i) {
        const int d = dims[i % 4];
        const int variant = (i / 4) % 4;
        const auto seed = static_cast<std::uint64_t>(i);
        const ModelConfig config(d, 0.5 + 0.25 * (i % 5));
        const HermitianObservable a(testing::random_hermitian(d, 10000 + seed));
        const ClassicalState state = make_state(variant, d, 20000 + seed);

        const SampleBatch batch = draw_samples(state, config, seed, 10000);
        const Expectation classical = classical_expectation(a, batch, config);
        const ReductionReport reduced = reduce_batch(batch, config);
        const double quantum = quantum_expectation(a, reduced.estimate);
        const double rel = relative_difference(classical.value, quantum);
        g_matrices.push_back(reduced.estimate);

        const auto report = born_rule_verify(a, state, config, seed, 10000);
        worst = std::max({worst, rel, report.relative_difference});
        failures += (rel <= 1e-10 && report.pass) ? 0 : 1;
    }
    const double elapsed = seconds_since(t0);
    return {failures == 0 && elapsed < 10.0,
            fmt("100 cases, max relative difference %.3g (tol 1e-10), %.2f s (limit 10 s)", worst,
                elapsed)};
}

// 2. Closed-form reductions.
Outcome closed_forms() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int d : {1, 2, 3, 5}) {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const ModelConfig config(d, 0.3 + static_cast<double>(s));
            const double hbar = config.hbar();
            const auto phi = StateVector::normalized(testing::random_vector(d, 300 + s));
            const auto chi = StateVector::normalized(testing::random_vector(d, 400 + s));
            const double w = 0.37;

            CMatrix pure(d, d), mixed(d, d);
            for (int m = 0; m < d; ++m) {
                for (int n = 0; n < d; ++n) {
                    pure(m, n) = hbar * phi[m] * std::conj(phi[n]);
                    mixed(m, n) = hbar * (w * phi[m] * std::conj(phi[n]) +
                                          (1 - w) * chi[m] * std::conj(chi[n]));
                }
            }
            const auto rho_pure = reduce_closed_form(PointMass{phi}, config);
            const auto rho_mix = reduce_closed_form(Mixture({{w, phi}, {1 - w, chi}}), config);
            g_matrices.push_back(rho_pure);
            g_matrices.push_back(rho_mix);
            const double scale = std::max(1.0, hbar);
            worst = std::max({worst, testing::max_abs(rho_pure.matrix() - pure) / scale,
                              testing::max_abs(rho_mix.matrix() - mixed) / scale});
        }
    }
    const ModelConfig c3(3);
    const auto uniform = reduce_closed_form(Uniform{}, c3);
    const auto mc = reduce_monte_carlo(Uniform{}, c3, 2718, 1000000);
    g_matrices.push_back(uniform);
    g_matrices.push_back(mc.estimate);
    const double exact_uniform = testing::max_abs(uniform.matrix() - CMatrix::Identity(3, 3) / 3.0);
    const double dev = testing::max_abs(mc.estimate.matrix() - uniform.matrix());
    const double se = mc.max_standard_error();
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-15 && exact_uniform <= 1e-15 && dev <= 5 * se && elapsed < 60.0;
    return {pass, fmt("point/mixture max error/max(1,hbar) %.3g (tol 1e-15); uniform d=3 N=1e6 "
                      "deviation %.3g <= 5 x SE = %.3g",
                      worst, dev, 5 * se) +
                      fmt(", %.2f s", elapsed)};
}

// 4. Uniform-measure moments and unitary invariance.
Outcome measure_validation() {
    bool pass = true;
    std::string detail;
    for (int d : {2, 3, 5}) {
        const ModelConfig config(d);
        const auto batch = sample_uniform(config, 500 + static_cast<std::uint64_t>(d), 100000);
        const auto plain = moment_report(batch, config);
        const CMatrix u = random_unitary(d, 900 + static_cast<std::uint64_t>(d));
        const auto rotated = moment_report(transform(batch, u), config);
        pass = pass && plain.within_envelope() && rotated.within_envelope();
        detail += fmt("d=%g dev %.2g/%.2g", d, plain.max_deviation, rotated.max_deviation) +
                  fmt(" (SE %.2g) ", plain.max_standard_error);
    }
    return {pass, detail + "within 5 SE"};
}

// 5. Flow properties.
Outcome flow_properties() {
    double norm_err = 0.0, conserve = 0.0, group = 0.0, covariance = 0.0;
    for (int d : {1, 2, 3, 5}) {
        const ModelConfig config(d, 1.4);
        for (std::uint64_t s = 0; s < 10; ++s) {
            const HermitianObservable a(testing::random_hermitian(d, 700 + s));
            const auto psi = StateVector::normalized(testing::random_vector(d, 800 + s));
            const double f0 = evaluate_form(a, psi, config);
            for (int k = 0; k <= 200; ++k) {
                const double t = -10.0 + 0.1 * k;
                const auto r = generate_flow(a, t, psi, config);
                norm_err = std::max(norm_err, std::abs(r.state.amplitudes().squaredNorm() - 1.0));
                conserve = std::max(conserve, std::abs(evaluate_form(a, r.state, config) - f0) /
                                                  std::max(std::abs(f0), 1.0));
            }
            const double t1 = 0.3 * static_cast<double>(s) - 1.0, t2 = 2.2;
            const auto twice = generate_flow(a, t2, generate_flow(a, t1, psi, config).state, config);
            const auto once = generate_flow(a, t1 + t2, psi, config);
            group = std::max(group,
                             (twice.state.amplitudes() - once.state.amplitudes()).cwiseAbs().maxCoeff());
        }
        const auto batch = sample_uniform(config, 60 + static_cast<std::uint64_t>(d), 20000);
        const HermitianObservable a(testing::random_hermitian(d, 61));
        const CMatrix u = flow_propagator(a, 1.7);
        const auto base = reduce_batch(batch, config);
        const auto moved = reduce_batch(transform(batch, u), config);
        g_matrices.push_back(base.estimate);
        g_matrices.push_back(moved.estimate);
        covariance = std::max(covariance, testing::max_abs(moved.estimate.matrix() -
                                                           u * base.estimate.matrix() * u.adjoint()));
    }
    const bool pass = norm_err <= 1e-10 && conserve <= 1e-10 && group <= 1e-10 && covariance <= 1e-12;
    return {pass, fmt("norm %.2g, conservation %.2g, group %.2g", norm_err, conserve, group) +
                      fmt(", covariance %.2g (tol 1e-10/1e-10/1e-10/1e-12)", covariance)};
}

// 6. Oscillator consistency.
Outcome oscillator_consistency() {
    double energy = 0.0, square = 0.0, stationary = 0.0;
    const int d = 3;
    for (double hbar : {1.0, 0.25, 3.0}) {
        const ModelConfig config(d, hbar);
        const HermitianObservable half(CMatrix::Identity(d, d) / 2.0);
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto psi0 = StateVector::normalized(testing::random_vector(d, 1000 + s));
            const PhasePoint x = from_sphere(psi0, config);
            const auto psi = to_sphere(x, config);
            const HermitianObservable a(testing::random_hermitian(d, 2000 + s));
            const double f0 = evaluate_form(a, psi, config);
            for (int k = 0; k <= 40; ++k) {
                const double t = 20 * std::numbers::pi * k / 40.0 + 0.01 * static_cast<double>(s);
                const auto xt = oscillator_evolve(x, t, config);
                energy = std::max(energy, std::abs(shell_energy(xt) - hbar / 2) / hbar);
                const auto via_phase = to_sphere(xt, config);
                const auto via_flow = generate_flow(half, t, psi, config).state;
                square = std::max(square, (via_phase.amplitudes() - via_flow.amplitudes())
                                              .cwiseAbs()
                                              .maxCoeff());
                stationary = std::max(stationary, std::abs(evaluate_form(a, via_phase, config) - f0) /
                                                      std::max(std::abs(f0), 1.0));
            }
        }
    }
    const bool pass = energy <= 1e-12 && square <= 1e-12 && stationary <= 1e-12;
    return {pass, fmt("energy drift %.2g, commuting square %.2g, stationary observables %.2g "
                      "(tol 1e-12)",
                      energy, square, stationary)};
}

// 3. Density-matrix invariants over everything built above, checked
// independently of the constructor.
Outcome density_invariants() {
    std::size_t bad = 0;
    double worst_trace = 0.0, worst_eig = 0.0;
    for (const auto &rho : g_matrices) {
        const CMatrix &m = rho.matrix();
        const bool hermitian = (m.array() == m.adjoint().array()).all();
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(m, Eigen::EigenvaluesOnly);
        const double min_eig = eig.eigenvalues().minCoeff();
        const double tr = m.trace().real();
        const double trace_err = std::abs(tr - rho.hbar());
        worst_trace = std::max(worst_trace, trace_err);
        worst_eig = std::min(worst_eig, min_eig / tr);
        if (!hermitian || min_eig < -1e-10 * tr || trace_err > 1e-12) {
            ++bad;
        }
    }
    return {bad == 0 && !g_matrices.empty(),
            fmt("%g matrices, exact Hermitian, min eigenvalue/trace %.2g (>= -1e-10), trace error "
                "%.2g (tol 1e-12)",
                static_cast<double>(g_matrices.size()), worst_eig, worst_trace)};
}

// 7. WeightedDensity against the quadrature oracle.
Outcome weighted_oracle() {
    const auto q = oracle::sphere2_reduction([](const oracle::Vec2 &p) { return std::norm(p(0)); });
    const bool oracle_ok =
        std::abs(q(0, 0).real() - oracle::kProjectivePowerDiag0) <= 1e-7 &&
        std::abs(q(1, 1).real() - oracle::kProjectivePowerDiag1) <= 1e-7;
    const auto r = reduce_monte_carlo(WeightedDensity{ProjectivePower{StateVector::basis(2, 0), 1}},
                                      ModelConfig(2), 31415, 1000000);
    g_matrices.push_back(r.estimate);
    const double z0 = std::abs(r.estimate.matrix()(0, 0).real() - oracle::kProjectivePowerDiag0) /
                      r.standard_error_real(0, 0);
    const double z1 = std::abs(r.estimate.matrix()(1, 1).real() - oracle::kProjectivePowerDiag1) /
                      r.standard_error_real(1, 1);
    return {oracle_ok && z0 <= 5.0 && z1 <= 5.0,
            fmt("diag (%.6f, %.6f) vs oracle (2/3, 1/3)", r.estimate.matrix()(0, 0).real(),
                r.estimate.matrix()(1, 1).real()) +
                fmt(", |z| = %.2f, %.2f (limit 5)", z0, z1)};
}

// 8. Determinism of cmd_verify reports.
Outcome determinism() {
    const auto doc = nlohmann::json::parse(R"({
        "schema_version": 1,
        "config": {"dim": 3, "hbar": 1.0},
        "state": {"type": "exponential_overlap", "phi": [[0.6, 0], [0, 0.8], 0], "kappa": 2.0},
        "observables": [
            {"label": "diag", "matrix": [[1, 0, 0], [0, 0, 0], [0, 0, -1]]},
            {"label": "hop", "matrix": [[0, [0.5, 0.5], 0], [[0.5, -0.5], 0, 1], [0, 1, 0]]}
        ],
        "run": {"seed": 20261015, "samples": 50000}
    })");
    kernels::set_worker_count(1);
    const std::string a = cli::render(cli::cmd_verify(cli::parse_spec(doc)), cli::Format::json);
    const std::string b = cli::render(cli::cmd_verify(cli::parse_spec(doc)), cli::Format::json);
    kernels::set_worker_count(4);
    const std::string c = cli::render(cli::cmd_verify(cli::parse_spec(doc)), cli::Format::json);
    return {a == b && a == c && !a.empty(),
            fmt("%g-byte reports identical across two runs and 1 vs 4 workers",
                static_cast<double>(a.size()))};
}

} // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
    };
    // Criterion 3 runs last so it sees the matrices built by the others.
    const Criterion criteria[] = {
        {"1 same-sample Born identity", born_identity},
        {"2 closed-form reductions", closed_forms},
        {"4 measure validation", measure_validation},
        {"5 flow properties", flow_properties},
        {"6 oscillator consistency", oscillator_consistency},
        {"7 weighted-density oracle", weighted_oracle},
        {"8 determinism", determinism},
        {"3 density-matrix invariants", density_invariants},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        Outcome o{false, ""};
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
                std::size(criteria));
    return failed == 0 ? 0 : 1;
}

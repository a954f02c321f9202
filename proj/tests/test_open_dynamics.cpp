#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "starkbat/closed_dynamics.hpp"
#include "starkbat/open_dynamics.hpp"

using namespace starkbat;

namespace {

HermitianOperator random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = std::complex<double>(gauss(rng), gauss(rng));
    return HermitianOperator(0.5 * (g + g.adjoint()));
}

Eigen::MatrixXcd random_hermitian_matrix(int dim, std::mt19937& rng) {
    return random_hermitian(dim, rng).matrix();
}

}  // namespace

TEST_CASE("bath rates", "[open]") {
    const BathSpec bath{1, 1.0, 0.01, 10.0};

    SECTION("pinned values at omega = +1 and -1") {
        const double f = 0.01 * 1.0 * std::exp(-0.1);
        const double kappa = 1.0 / std::expm1(1.0);
        REQUIRE(bath_rate(bath, 1.0) == Catch::Approx(f * (1.0 + kappa)).margin(1e-15));
        REQUIRE(bath_rate(bath, -1.0) == Catch::Approx(f * kappa).margin(1e-15));
        REQUIRE(bath_rate(bath, 1.0) == Catch::Approx(0.014314).margin(1e-5));
        REQUIRE(bath_rate(bath, -1.0) == Catch::Approx(0.0052661).margin(1e-5));
        REQUIRE(bath_rate(bath, 1.0) / bath_rate(bath, -1.0) ==
                Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    }
    SECTION("zero-frequency limit is eta/beta") {
        REQUIRE(bath_rate(bath, 0.0) == Catch::Approx(0.01 / 1.0).margin(1e-16));
        for (double w : {1e-8, 1e-5}) {
            REQUIRE(bath_rate(bath, w) == Catch::Approx(0.01).epsilon(1e-4));
            REQUIRE(bath_rate(bath, -w) == Catch::Approx(0.01).epsilon(1e-4));
        }
    }
    SECTION("detailed balance holds across frequencies and temperatures") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> ws(0.05, 8.0);
        for (double beta : {0.3, 1.0, 4.0}) {
            const BathSpec b{1, beta, 0.02, 10.0};
            for (int rep = 0; rep < 20; ++rep) {
                const double w = ws(rng);
                REQUIRE(bath_rate(b, w) / bath_rate(b, -w) ==
                        Catch::Approx(std::exp(beta * w)).epsilon(1e-12));
                REQUIRE(bath_rate(b, w) >= 0.0);
                REQUIRE(bath_rate(b, -w) >= 0.0);
            }
        }
    }
    SECTION("invalid bath parameters are rejected") {
        REQUIRE_THROWS_AS(validate(BathSpec{2, 1.0, 0.01, 10.0}, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(validate(BathSpec{1, -1.0, 0.01, 10.0}, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(validate(BathSpec{1, 1.0, 0.0, 10.0}, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(validate(BathSpec{1, 1.0, 0.01, 0.0}, 3), std::invalid_argument);
    }
}

TEST_CASE("eigenoperator decomposition", "[open]") {
    std::mt19937 rng(17);

    SECTION("reconstruction identity 2 sum A(w) = coupling") {
        auto basis = FockBasis::bosons(3, 3, 2);
        auto h = build_bose_hubbard(basis, {1.0, 1.0, 0.4});
        auto coupling = number_operator(basis, 1);
        const EigenOperatorSet set = build_eigenoperators(h, coupling);
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(h.dim(), h.dim());
        for (std::size_t g = 0; g < set.size(); ++g) sum += 2.0 * set.operator_original(g);
        REQUIRE((sum - coupling.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("hermiticity pairing A(-w) = A(w)†") {
        auto basis = FockBasis::fermions(2, 1, 1);
        auto h = build_fermi_hubbard(basis, {1.0, 0.8, 0.3});
        const EigenOperatorSet set = build_eigenoperators(h, number_operator(basis, 1));
        for (std::size_t g = 0; g < set.size(); ++g) {
            bool paired = false;
            for (std::size_t g2 = 0; g2 < set.size(); ++g2) {
                if (std::abs(set.omega(g2) + set.omega(g)) < 1e-9) {
                    REQUIRE((set.operator_original(g2) -
                             set.operator_original(g).adjoint()).cwiseAbs().maxCoeff() < 1e-10);
                    paired = true;
                    break;
                }
            }
            REQUIRE(paired);
        }
    }
    SECTION("matches direct projector algebra on a random nondegenerate system") {
        const HermitianOperator h = random_hermitian(4, rng);
        const HermitianOperator coupling = random_hermitian(4, rng);
        const EigenOperatorSet set = build_eigenoperators(h, coupling);
        const auto& s = h.spectrum();
        // Oracle: A(w_ab) entries from Pi_a C Pi_b, including the diagonal w = 0 group.
        for (std::size_t g = 0; g < set.size(); ++g) {
            Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
            for (Eigen::Index a = 0; a < 4; ++a) {
                for (Eigen::Index b = 0; b < 4; ++b) {
                    const double w = s.eigenvalues()(b) - s.eigenvalues()(a);
                    if (std::abs(w - set.omega(g)) > 1e-7) continue;
                    const Eigen::MatrixXcd pa =
                        s.eigenvectors().col(a) * s.eigenvectors().col(a).adjoint();
                    const Eigen::MatrixXcd pb =
                        s.eigenvectors().col(b) * s.eigenvectors().col(b).adjoint();
                    expect += 0.5 * pa * coupling.matrix() * pb;
                }
            }
            REQUIRE((set.operator_original(g) - expect).cwiseAbs().maxCoeff() < 1e-10);
        }
        // Nondegenerate w = 0 group is half the diagonal part in the eigenbasis.
        const Eigen::MatrixXcd c_eig =
            s.eigenvectors().adjoint() * coupling.matrix() * s.eigenvectors();
        for (std::size_t g = 0; g < set.size(); ++g) {
            if (set.omega(g) != 0.0) continue;
            const Eigen::MatrixXcd diag_half(0.5 * c_eig.diagonal().asDiagonal());
            REQUIRE((set.operator_eigenbasis(g) - diag_half).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("generator structure", "[open]") {
    auto basis = FockBasis::bosons(2, 2, 2);
    auto battery = build_bose_hubbard(basis, {1.0, 1.0, 1.0});
    auto charger = build_bose_hubbard(basis, {1.0, 0.0, 0.5});
    const std::vector<BathSpec> baths = {{1, 1.0, 0.01, 10.0}, {2, 1.0, 0.01, 10.0}};
    std::vector<EigenOperatorSet> ops;
    for (const auto& b : baths)
        ops.push_back(build_eigenoperators(battery, number_operator(basis, b.site)));
    const LindbladGenerator gen(charger, baths, ops);

    SECTION("trace preservation on random hermitian inputs") {
        std::mt19937 rng(29);
        for (int rep = 0; rep < 6; ++rep) {
            const Eigen::MatrixXcd rho = random_hermitian_matrix(3, rng);
            REQUIRE(std::abs(gen.apply(rho).trace()) < 1e-12 * rho.cwiseAbs().maxCoeff() * 10);
        }
    }
    SECTION("rates are nonnegative and detailed balance holds groupwise") {
        for (std::size_t b = 0; b < baths.size(); ++b) {
            for (std::size_t g = 0; g < ops[b].size(); ++g) {
                const double w = ops[b].omega(g);
                const double rate = gen.rate(b, g);
                REQUIRE(rate >= 0.0);
                if (w > 1e-9) {
                    for (std::size_t g2 = 0; g2 < ops[b].size(); ++g2) {
                        if (std::abs(ops[b].omega(g2) + w) < 1e-9) {
                            REQUIRE(rate / gen.rate(b, g2) ==
                                    Catch::Approx(std::exp(baths[b].beta * w)).epsilon(1e-12));
                        }
                    }
                }
            }
        }
    }
    SECTION("gibbs state of the battery is a fixed point of the bare dissipator") {
        auto zero_coh = HermitianOperator(Eigen::MatrixXcd::Zero(3, 3), basis);
        const LindbladGenerator dissipator(zero_coh, baths, ops);
        const DensityState gibbs = gibbs_state(battery, 1.0);
        REQUIRE(dissipator.apply(gibbs.matrix()).cwiseAbs().maxCoeff() < 1e-8);
    }
    SECTION("mismatched eigenoperator sets are rejected") {
        auto other_battery = build_bose_hubbard(basis, {0.5, 2.0, 0.0});
        std::vector<EigenOperatorSet> mixed = {
            ops[0], build_eigenoperators(other_battery, number_operator(basis, 2))};
        REQUIRE_THROWS_AS(LindbladGenerator(charger, baths, mixed), std::invalid_argument);
        REQUIRE_THROWS_AS(LindbladGenerator(charger, baths, {ops[0]}), std::invalid_argument);
    }
    SECTION("liouvillian matrix agrees with the direct right-hand side") {
        std::mt19937 rng(31);
        const Eigen::MatrixXcd lv = gen.liouvillian_matrix();
        const Eigen::MatrixXcd rho = random_hermitian_matrix(3, rng);
        const Eigen::MatrixXcd rho_w = gen.to_working(rho);
        const Eigen::Map<const Eigen::VectorXcd> v(rho_w.data(), 9);
        const Eigen::VectorXcd out_vec = lv * v;
        const Eigen::MatrixXcd direct = gen.rhs(rho_w);
        const Eigen::Map<const Eigen::VectorXcd> direct_vec(direct.data(), 9);
        REQUIRE((out_vec - direct_vec).cwiseAbs().maxCoeff() < 1e-12);
    }
    SECTION("including the battery in the coherent part shifts the commutator") {
        GeneratorOptions with_battery;
        with_battery.include_battery_in_coherent = true;
        const LindbladGenerator gen2(charger, baths, ops, with_battery);
        std::mt19937 rng(41);
        const Eigen::MatrixXcd rho = random_hermitian_matrix(3, rng);
        const Eigen::MatrixXcd diff = gen2.apply(rho) - gen.apply(rho);
        const std::complex<double> minus_i(0.0, -1.0);
        const Eigen::MatrixXcd expect =
            minus_i * (battery.matrix() * rho - rho * battery.matrix());
        REQUIRE((diff - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("integration", "[open]") {
    SECTION("a null generator keeps the state constant") {
        auto basis = FockBasis::bosons(2, 2, 2);
        auto zero = HermitianOperator(Eigen::MatrixXcd::Zero(3, 3), basis);
        const LindbladGenerator gen(zero, {}, {});
        const DensityState rho0 =
            ground_state(build_bose_hubbard(basis, {1.0, 0.0, 0.0}));
        const auto states = integrate(gen, rho0, {0.0, 1.0, 5.0});
        for (const auto& s : states)
            REQUIRE((s.matrix() - rho0.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("bath-free integration matches unitary evolution") {
        auto basis = FockBasis::bosons(2, 2, 2);
        auto charger = build_bose_hubbard(basis, {0.7, 1.2, 0.5});
        const LindbladGenerator gen(charger, {}, {});
        const DensityState rho0 =
            ground_state(build_bose_hubbard(basis, {1.0, 0.0, 0.0}));
        IntegrateOptions opts;
        opts.step_safety = 0.02;
        const auto states = integrate(gen, rho0, {1.0, 3.0}, opts);
        for (std::size_t i = 0; i < states.size(); ++i) {
            const DensityState expect = evolve(rho0, charger, i == 0 ? 1.0 : 3.0);
            REQUIRE((states[i].matrix() - expect.matrix()).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
    SECTION("two-level pure dephasing: populations fixed, coherence decays at the KMS rate") {
        const Eigen::MatrixXcd h0 = Eigen::Vector2cd(0.0, 1.3).asDiagonal();
        const Eigen::MatrixXcd c0 = Eigen::Vector2cd(1.0, 3.0).asDiagonal();
        const HermitianOperator h(h0), coupling(c0);
        const BathSpec bath{1, 2.0, 0.05, 7.0};
        const EigenOperatorSet set = build_eigenoperators(h, coupling);
        const LindbladGenerator gen(h, {bath}, {set});
        Eigen::VectorXcd plus(2);
        plus << 1.0, 1.0;
        const DensityState rho0 = DensityState::pure(plus);
        IntegrateOptions opts;
        opts.step_safety = 0.02;
        const auto states = integrate(gen, rho0, linspace(0.0, 100.0, 11), opts);
        const double rate = (bath.eta / bath.beta) * std::pow(1.0 - 3.0, 2) / 8.0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const double t = 10.0 * double(i);
            REQUIRE(std::abs(states[i].matrix()(0, 0).real() - 0.5) < 1e-9);
            REQUIRE(std::abs(states[i].matrix()(1, 1).real() - 0.5) < 1e-9);
            REQUIRE(std::abs(states[i].matrix()(0, 1)) ==
                    Catch::Approx(0.5 * std::exp(-rate * t)).margin(1e-8));
        }
        const double measured =
            -std::log(std::abs(states.back().matrix()(0, 1)) / 0.5) / 100.0;
        REQUIRE(std::abs(measured - rate) < 1e-6);
    }
    SECTION("trace and positivity hold along a driven dissipative trajectory") {
        auto basis = FockBasis::bosons(2, 2, 2);
        auto battery = build_bose_hubbard(basis, {1.0, 1.0, 1.0});
        auto charger = build_bose_hubbard(basis, {1.0, 0.5, 0.5});
        const std::vector<BathSpec> baths = {{1, 1.0, 0.01, 10.0}, {2, 1.0, 0.01, 10.0}};
        std::vector<EigenOperatorSet> ops;
        for (const auto& b : baths)
            ops.push_back(build_eigenoperators(battery, number_operator(basis, b.site)));
        const LindbladGenerator gen(charger, baths, ops);
        const auto states = integrate(gen, ground_state(battery), linspace(0.0, 200.0, 21));
        for (const auto& s : states) {
            REQUIRE(std::abs(s.matrix().trace().real() - 1.0) < 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.matrix(),
                                                               Eigen::EigenvaluesOnly);
            REQUIRE(es.eigenvalues().minCoeff() > -1e-9);
        }
    }
    SECTION("grid validation") {
        auto basis = FockBasis::bosons(2, 1, 2);
        auto h = build_bose_hubbard(basis, {1.0, 0.0, 0.0});
        const LindbladGenerator gen(h, {}, {});
        const DensityState rho0 = ground_state(h);
        REQUIRE_THROWS_AS(integrate(gen, rho0, {1.0, 0.5}), std::invalid_argument);
        REQUIRE_THROWS_AS(integrate(gen, rho0, {-1.0}), std::invalid_argument);
    }
}

TEST_CASE("steady states", "[open]") {
    auto basis = FockBasis::bosons(2, 2, 2);
    auto battery = build_bose_hubbard(basis, {1.0, 1.0, 0.0});
    const double beta = 0.8;
    const std::vector<BathSpec> baths = {{1, beta, 0.08, 10.0}, {2, beta, 0.08, 10.0}};
    std::vector<EigenOperatorSet> ops;
    for (const auto& b : baths)
        ops.push_back(build_eigenoperators(battery, number_operator(basis, b.site)));
    auto zero_coh = HermitianOperator(Eigen::MatrixXcd::Zero(3, 3), basis);

    SECTION("a null generator returns the initial state") {
        const LindbladGenerator gen(zero_coh, {}, {});
        const DensityState rho0 = ground_state(battery);
        const SteadyStateResult r = steady_state(gen, rho0, 1e-9, 10.0);
        REQUIRE(r.converged);
        REQUIRE((r.state.matrix() - rho0.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("equal-temperature edge baths relax the battery to its gibbs state") {
        const LindbladGenerator gen(zero_coh, baths, ops);
        const DensityState rho0 = ground_state(battery);
        const DensityState target = gibbs_state(battery, beta);
        const SteadyStateResult exact = steady_state_nullspace(gen, rho0);
        REQUIRE(exact.residual < 1e-10);
        REQUIRE(trace_norm_hermitian(exact.state.matrix() - target.matrix()) < 1e-8);
        const SteadyStateResult integrated = steady_state(gen, rho0, 1e-7, 2e5);
        REQUIRE(integrated.converged);
        REQUIRE(trace_norm_hermitian(integrated.state.matrix() - target.matrix()) < 1e-4);
    }
    SECTION("driven steady state is reproducible across integrator step sizes") {
        auto charger = build_bose_hubbard(basis, {1.0, 0.0, 1.0});
        const LindbladGenerator gen(charger, baths, ops);
        const DensityState rho0 = ground_state(battery);
        IntegrateOptions coarse, fine;
        coarse.step_safety = 0.1;
        fine.step_safety = 0.03;
        const SteadyStateResult a = steady_state(gen, rho0, 1e-8, 1e5, coarse);
        const SteadyStateResult b = steady_state(gen, rho0, 1e-8, 1e5, fine);
        REQUIRE(a.converged);
        REQUIRE(b.converged);
        REQUIRE(trace_norm_hermitian(a.state.matrix() - b.state.matrix()) < 1e-6);
        const SteadyStateResult exact = steady_state_nullspace(gen, rho0);
        REQUIRE(trace_norm_hermitian(a.state.matrix() - exact.state.matrix()) < 1e-5);
    }
    SECTION("non-convergence within t_cap is flagged") {
        const LindbladGenerator gen(zero_coh, baths, ops);
        const DensityState rho0 = ground_state(battery);
        const SteadyStateResult r = steady_state(gen, rho0, 1e-12, 5.0);
        REQUIRE_FALSE(r.converged);
    }
    SECTION("single-bath relaxation decreases the relative entropy to gibbs") {
        const std::vector<BathSpec> one = {{1, beta, 0.08, 10.0}};
        const LindbladGenerator gen(zero_coh, {one[0]}, {ops[0]});
        const DensityState rho0 = ground_state(battery);
        const DensityState target = gibbs_state(battery, beta);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gsolve(target.matrix());
        const Eigen::MatrixXcd log_g =
            gsolve.eigenvectors() *
            gsolve.eigenvalues().array().log().matrix().asDiagonal() *
            gsolve.eigenvectors().adjoint();
        auto rel_entropy = [&](const Eigen::MatrixXcd& rho) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
            double s = 0.0;
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                const double p = es.eigenvalues()(k);
                if (p > 1e-14) s += p * std::log(p);
            }
            return s - (rho * log_g).trace().real();
        };
        const auto states = integrate(gen, rho0, linspace(0.0, 400.0, 9));
        double previous = std::numeric_limits<double>::infinity();
        for (const auto& s : states) {
            const double d = rel_entropy(s.matrix());
            REQUIRE(d <= previous + 1e-9);
            previous = d;
        }
    }
}

#include "largespin/dynamics.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "largespin/errors.hpp"

using namespace largespin;

namespace {

Eigen::MatrixXcd random_hermitian_state(int n, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a(i, j) = {dist(rng), dist(rng)};
    }
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

double expectation(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
    return (rho * op).trace().real();
}

}  // namespace

TEST_CASE("density matrix validation") {
    Eigen::MatrixXcd good = Eigen::MatrixXcd::Zero(2, 2);
    good(0, 0) = 0.7;
    good(1, 1) = 0.3;
    CHECK_NOTHROW(make_density_matrix(good));

    Eigen::MatrixXcd non_hermitian = good;
    non_hermitian(0, 1) = 0.5;
    CHECK_THROWS_AS(make_density_matrix(non_hermitian), std::invalid_argument);

    Eigen::MatrixXcd bad_trace = good;
    bad_trace(0, 0) = 0.9;
    CHECK_THROWS_AS(make_density_matrix(bad_trace), std::invalid_argument);

    Eigen::MatrixXcd negative = Eigen::MatrixXcd::Zero(2, 2);
    negative(0, 0) = 1.2;
    negative(1, 1) = -0.2;
    CHECK_THROWS_AS(make_density_matrix(negative), std::invalid_argument);
}

TEST_CASE("initial states") {
    SUBCASE("spin up in z") {
        const DensityMatrix half = initial_state_spin_up(make_spin_size(1));
        CHECK(half.data(0, 0).real() == 1.0);
        CHECK(std::abs(half.data(1, 1)) == 0.0);

        const SpinSize big = make_spin_size(20);
        const SpinOperators ops = build_spin_operators(big);
        const DensityMatrix top = initial_state_spin_up(big);
        CHECK(top.data.rows() == 21);
        CHECK(expectation(top.data, ops.jz) == doctest::Approx(10.0).epsilon(1e-14));

        const SpinSize one = make_spin_size(2);
        const SpinOperators ops1 = build_spin_operators(one);
        const DensityMatrix rho1 = initial_state_spin_up(one);
        CHECK(expectation(rho1.data, ops1.jx) == doctest::Approx(0.0));
        CHECK(expectation(rho1.data, ops1.jy) == doctest::Approx(0.0));
        CHECK((rho1.data * rho1.data).trace().real() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("spin up in x") {
        const SpinSize half = make_spin_size(1);
        const SpinOperators ops = build_spin_operators(half);
        const DensityMatrix rho = initial_state_x_up(half, ops);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(rho.data(i, j)) == doctest::Approx(0.5).epsilon(1e-12));
            }
        }
        CHECK(expectation(rho.data, ops.jx) == doctest::Approx(0.5).epsilon(1e-12));

        for (const int two_j : {2, 4, 9}) {
            CAPTURE(two_j);
            const SpinSize spin = make_spin_size(two_j);
            const SpinOperators big_ops = build_spin_operators(spin);
            const DensityMatrix state = initial_state_x_up(spin, big_ops);
            CHECK(std::abs(expectation(state.data, big_ops.jx) - spin.j()) < 1e-10);
            CHECK(std::abs(expectation(state.data, big_ops.jz)) < 1e-10);
        }
        // eigenstate of jx: vanishing variance
        const SpinSize two = make_spin_size(4);
        const SpinOperators ops2 = build_spin_operators(two);
        const DensityMatrix state2 = initial_state_x_up(two, ops2);
        const double second_moment = (state2.data * ops2.jx * ops2.jx).trace().real();
        CHECK(std::abs(second_moment - 4.0) < 1e-10);
    }
}

TEST_CASE("master_rhs is traceless and Hermiticity-preserving") {
    std::mt19937 rng(3);
    for (const int two_j : {1, 2, 4, 10}) {
        CAPTURE(two_j);
        const SpinSize spin = make_spin_size(two_j);
        const SystemParams params = make_system_params(spin, 1.3, 0.8);
        const SpinOperators ops = build_spin_operators(spin);
        const BathSpec bath = make_bath_spec(0.04, 35.0, 1.1);
        const RateSet rates = compute_rates(params, bath);
        const DensityMatrix rho{random_hermitian_state(spin.dim(), rng)};

        const Eigen::MatrixXcd rhs = master_rhs(rho, params, ops, rates);
        CHECK(std::abs(rhs.trace()) < 1e-12);
        CHECK((rhs - rhs.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("master_rhs validation") {
    const SystemParams params = make_system_params(make_spin_size(1), 1.0, 1.0);
    const SpinOperators ops = build_spin_operators(make_spin_size(1));
    const BathSpec bath = make_bath_spec(0.05, 50.0, 2.0);
    const RateSet rates = compute_rates(params, bath);
    const DensityMatrix rho = initial_state_spin_up(make_spin_size(1));

    const SpinOperators wrong_ops = build_spin_operators(make_spin_size(2));
    CHECK_THROWS_AS(master_rhs(rho, params, wrong_ops, rates), std::invalid_argument);

    RateSet stale = rates;
    stale.delta = params.delta * (1.0 + 1e-6);
    CHECK_THROWS_AS(master_rhs(rho, params, ops, stale), std::invalid_argument);
}

TEST_CASE("banded generator equals the literal master_rhs") {
    std::mt19937 rng(17);
    for (const int two_j : {1, 2, 5, 20}) {
        CAPTURE(two_j);
        const SpinSize spin = make_spin_size(two_j);
        const SystemParams params = make_system_params(spin, 2.1, 1.2);
        const SpinOperators ops = build_spin_operators(spin);
        const BathSpec bath = make_bath_spec(0.07, 60.0, 0.9);
        const RateSet rates = compute_rates(params, bath);
        const MasterGenerator gen(params, rates);
        for (int rep = 0; rep < 3; ++rep) {
            const DensityMatrix rho{random_hermitian_state(spin.dim(), rng)};
            const Eigen::MatrixXcd a = master_rhs(rho, params, ops, rates);
            const Eigen::MatrixXcd b = gen.apply(rho.data);
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
        }
    }
}

TEST_CASE("bloch_rhs") {
    const SystemParams params = make_system_params(make_spin_size(1), 1.0, 1.0);
    const BathSpec bath = make_bath_spec(0.05, 50.0, 2.0);
    const RateSet rates = compute_rates(params, bath);

    SUBCASE("d<Jz>/dt = 2 tc <Jy> for every input") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-0.28, 0.28);
        for (int rep = 0; rep < 20; ++rep) {
            const BlochVector v{dist(rng), dist(rng), dist(rng)};
            const BlochVector dv = bloch_rhs(v, params, rates);
            CHECK(dv.jz == doctest::Approx(2.0 * params.tc * v.jy).epsilon(1e-14));
        }
    }
    SUBCASE("decoupled, unbiased spin precesses coherently") {
        const SystemParams free_params = make_system_params(make_spin_size(1), 0.0, 1.0);
        const RateSet zero = compute_rates(free_params, make_bath_spec(0.0, 50.0, 0.0));
        const BlochVector dv = bloch_rhs(BlochVector{0.0, 0.0, 0.5}, free_params, zero);
        CHECK(dv.jx == 0.0);
        CHECK(dv.jy == doctest::Approx(-2.0 * 0.5).epsilon(1e-14));
        CHECK(dv.jz == 0.0);
    }
    SUBCASE("rejects larger spins") {
        const SystemParams big = make_system_params(make_spin_size(2), 1.0, 1.0);
        const RateSet rates_big = compute_rates(big, bath);
        CHECK_THROWS_AS(bloch_rhs(BlochVector{0, 0, 0.5}, big, rates_big),
                        std::invalid_argument);
    }
}

TEST_CASE("free spin: <Jz>(t) = J cos(2 tc t)") {
    SUBCASE("J = 1/2 master evolution over t in [0, 50]") {
        const SystemParams params = make_system_params(make_spin_size(1), 0.0, 1.0);
        const SpinOperators ops = build_spin_operators(params.spin);
        const RateSet rates = compute_rates(params, make_bath_spec(0.0, 50.0, 0.0));
        IntegrationOptions opts;
        opts.t_end = 50.0;
        opts.dt = 0.002;
        opts.sample_every = 25;
        const Trajectory traj =
            integrate_master(params, ops, rates, initial_state_spin_up(params.spin), opts);
        double max_err = 0.0;
        double max_energy_err = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            max_err = std::max(max_err,
                               std::abs(traj.jz[i] - 0.5 * std::cos(2.0 * traj.times[i])));
            // <H> = 2 tc <Jx> is conserved (and zero) for the free unbiased spin
            max_energy_err = std::max(max_energy_err, std::abs(2.0 * traj.jx[i]));
        }
        CHECK(max_err < 1e-8);
        CHECK(max_energy_err < 1e-10);
    }
    SUBCASE("J = 1 master evolution reproduces cos(2 tc t)") {
        const SystemParams params = make_system_params(make_spin_size(2), 0.0, 1.0);
        const SpinOperators ops = build_spin_operators(params.spin);
        const RateSet rates = compute_rates(params, make_bath_spec(0.0, 50.0, 0.0));
        IntegrationOptions opts;
        opts.t_end = 10.0;
        opts.dt = 0.002;
        opts.sample_every = 5;
        const Trajectory traj =
            integrate_master(params, ops, rates, initial_state_spin_up(params.spin), opts);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            CHECK(std::abs(traj.jz[i] - std::cos(2.0 * traj.times[i])) < 1e-8);
        }
    }
}

TEST_CASE("fourth-order self-convergence under dt halving") {
    const SystemParams params = make_system_params(make_spin_size(1), 1.0, 1.0);
    const SpinOperators ops = build_spin_operators(params.spin);
    const RateSet rates = compute_rates(params, make_bath_spec(0.05, 50.0, 2.0));
    const DensityMatrix rho0 = initial_state_spin_up(params.spin);

    IntegrationOptions coarse{10.0, 0.004, 50};
    IntegrationOptions fine{10.0, 0.002, 100};
    const Trajectory a = integrate_master(params, ops, rates, rho0, coarse);
    const Trajectory b = integrate_master(params, ops, rates, rho0, fine);
    REQUIRE(a.size() == b.size());
    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.times[i] == doctest::Approx(b.times[i]).epsilon(1e-12));
        max_diff = std::max({max_diff, std::abs(a.jz[i] - b.jz[i]),
                             std::abs(a.jx[i] - b.jx[i]), std::abs(a.jy[i] - b.jy[i])});
    }
    CHECK(max_diff < 1e-9);
}

TEST_CASE("master and Bloch formulations coincide for J = 1/2") {
    const SystemParams params = make_system_params(make_spin_size(1), 1.0, 1.0);
    const SpinOperators ops = build_spin_operators(params.spin);
    const RateSet rates = compute_rates(params, make_bath_spec(0.05, 50.0, 2.0));
    IntegrationOptions opts{20.0, 0.002, 10};

    const Trajectory master =
        integrate_master(params, ops, rates, initial_state_spin_up(params.spin), opts);
    const Trajectory bloch = integrate_bloch(params, rates, BlochVector{0.0, 0.0, 0.5}, opts);

    REQUIRE(master.size() == bloch.size());
    double max_dev = 0.0;
    for (std::size_t i = 0; i < master.size(); ++i) {
        max_dev = std::max({max_dev, std::abs(master.jz[i] - bloch.jz[i]),
                            std::abs(master.jx[i] - bloch.jx[i]),
                            std::abs(master.jy[i] - bloch.jy[i])});
    }
    CHECK(max_dev < 1e-8);

    for (std::size_t i = 0; i < master.size(); ++i) {
        CHECK(master.trace_err[i] < 1e-10);
        CHECK(master.herm_err[i] < 1e-10);
    }
}

TEST_CASE("sampled d<Jz>/dt equals 2 tc <Jy> beyond spin 1/2") {
    const SystemParams params = make_system_params(make_spin_size(4), 2.0, 1.0);
    const SpinOperators ops = build_spin_operators(params.spin);
    const RateSet rates = compute_rates(params, make_bath_spec(0.02, 50.0, 1.0));
    IntegrationOptions opts{5.0, 0.001, 1};
    const Trajectory traj =
        integrate_master(params, ops, rates, initial_state_spin_up(params.spin), opts);
    double max_err = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double fd = (traj.jz[i + 1] - traj.jz[i - 1]) /
                          (traj.times[i + 1] - traj.times[i - 1]);
        max_err = std::max(max_err, std::abs(fd - 2.0 * params.tc * traj.jy[i]));
    }
    CHECK(max_err < 1e-5);  // O(dt^2) central-difference residual
}

TEST_CASE("integration option validation") {
    const SystemParams params = make_system_params(make_spin_size(1), 10.0, 1.0);
    const SpinOperators ops = build_spin_operators(params.spin);
    const RateSet rates = compute_rates(params, make_bath_spec(0.005, 50.0, 1.0));
    const DensityMatrix rho0 = initial_state_spin_up(params.spin);

    CHECK_THROWS_AS(integrate_master(params, ops, rates, rho0, IntegrationOptions{10.0, 0.0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_master(params, ops, rates, rho0, IntegrationOptions{-1.0, 0.01, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate_master(params, ops, rates, rho0, IntegrationOptions{10.0, 0.002, 0}),
                    std::invalid_argument);
    // dt * delta ~ 0.2 > 0.1: the step does not resolve the level spacing
    CHECK_THROWS_AS(
        integrate_master(params, ops, rates, rho0, IntegrationOptions{10.0, 0.0196, 1}),
        std::invalid_argument);

    const SystemParams half = make_system_params(make_spin_size(1), 0.0, 1.0);
    const RateSet zero = compute_rates(half, make_bath_spec(0.0, 50.0, 0.0));
    CHECK_THROWS_AS(
        integrate_bloch(half, zero, BlochVector{0.5, 0.5, 0.5}, IntegrationOptions{1.0, 0.002, 1}),
        std::invalid_argument);  // outside the Bloch ball
}

TEST_CASE("non-finite states abort with the offending time") {
    // an absurd coupling overflows the rates and poisons the state immediately
    const SystemParams params = make_system_params(make_spin_size(1), 0.0, 1.0);
    const SpinOperators ops = build_spin_operators(params.spin);
    const RateSet rates = compute_rates(params, make_bath_spec(1e305, 50.0, 0.0));
    IntegrationOptions opts{1.0, 0.002, 1};
    CHECK_THROWS_AS(integrate_master(params, ops, rates, initial_state_spin_up(params.spin), opts),
                    NumericalError);
}

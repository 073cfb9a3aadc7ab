#include "largespin/dynamics.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "largespin/errors.hpp"

namespace largespin {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require_delta_consistency(const SystemParams& params, const RateSet& rates) {
    if (std::abs(rates.delta - params.delta) > 1e-12 * params.delta) {
        throw std::invalid_argument("rates were evaluated at a different level spacing than params");
    }
}

void require_spin_half(const SystemParams& params, const char* who) {
    if (params.spin.two_j != 1) {
        throw std::invalid_argument(std::string(who) +
                                    ": the expectation-value equations close only for J = 1/2");
    }
}

// Coefficients of the dissipative commutators in the master equation.
struct DissipativeCoefficients {
    std::complex<double> cz, cx, cy;
};

DissipativeCoefficients dissipative_coefficients(const SystemParams& params, const RateSet& r) {
    const double eps = params.epsilon;
    const double tc = params.tc;
    const double d2 = params.delta * params.delta;
    DissipativeCoefficients c;
    c.cz = (eps * eps * r.gamma + 4.0 * tc * tc * r.gamma_c) / d2;
    c.cx = (2.0 * tc * eps / d2) * (r.gamma - r.gamma_c);
    c.cy = (2.0 * params.tc / params.delta) * r.gamma_s;
    return c;
}

void validate_integration_options(const SystemParams& params, const IntegrationOptions& opts) {
    if (!(opts.dt > 0.0) || !std::isfinite(opts.dt)) {
        throw std::invalid_argument("integration: dt must be positive and finite");
    }
    if (!(opts.t_end > 0.0) || !std::isfinite(opts.t_end)) {
        throw std::invalid_argument("integration: t_end must be positive and finite");
    }
    if (opts.sample_every < 1) {
        throw std::invalid_argument("integration: sample_every must be >= 1");
    }
    if (opts.dt * params.delta > 0.1 * (1.0 + 1e-12)) {
        throw std::invalid_argument("integration: dt does not resolve the level spacing (need dt * delta <= 0.1)");
    }
    if (std::llround(opts.t_end / opts.dt) < 1) {
        throw std::invalid_argument("integration: t_end shorter than a single step");
    }
}

[[noreturn]] void throw_non_finite(double t) {
    std::ostringstream msg;
    msg << "integration: non-finite state encountered at t = " << t;
    throw NumericalError(msg.str());
}

}  // namespace

DensityMatrix make_density_matrix(Eigen::MatrixXcd m) {
    if (m.rows() != m.cols() || m.rows() < 2) {
        throw std::invalid_argument("density matrix: must be square with dimension >= 2");
    }
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= 1e-10)) {
        throw std::invalid_argument("density matrix: not Hermitian within 1e-10");
    }
    const double trace_err = std::abs(m.trace() - std::complex<double>{1.0, 0.0});
    if (!(trace_err <= 1e-10)) {
        throw std::invalid_argument("density matrix: trace deviates from 1 by more than 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (!(solver.eigenvalues().minCoeff() >= -1e-12)) {
        throw std::invalid_argument("density matrix: not positive semidefinite");
    }
    return DensityMatrix{std::move(m)};
}

DensityMatrix initial_state_spin_up(SpinSize spin) {
    const int n = make_spin_size(spin.two_j).dim();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    m(0, 0) = 1.0;
    return DensityMatrix{std::move(m)};
}

DensityMatrix initial_state_x_up(SpinSize spin, const SpinOperators& ops) {
    if (ops.dim != spin.dim()) {
        throw std::invalid_argument("initial_state_x_up: operator dimension does not match spin size");
    }
    // U maps jx -> jz, so U^dagger |J,J> is the maximal-Jx eigenstate.
    const Eigen::MatrixXcd u = dicke_rotation_unitary(ops);
    const Eigen::VectorXcd v = u.adjoint().col(0);
    return DensityMatrix{v * v.adjoint()};
}

Eigen::MatrixXcd master_rhs(const DensityMatrix& rho, const SystemParams& params,
                            const SpinOperators& ops, const RateSet& rates) {
    const int n = params.spin.dim();
    if (ops.dim != n || rho.data.rows() != n || rho.data.cols() != n) {
        throw std::invalid_argument("master_rhs: dimension mismatch between rho, params, and ops");
    }
    require_delta_consistency(params, rates);

    const Eigen::MatrixXcd& r = rho.data;
    const Eigen::MatrixXcd h = hamiltonian(params, ops);
    const auto [cz, cx, cy] = dissipative_coefficients(params, rates);

    const auto comm_left = [&](const Eigen::MatrixXcd& a) {
        // [Jz, a rho]
        const Eigen::MatrixXcd ar = a * r;
        return (ops.jz * ar - ar * ops.jz).eval();
    };
    const auto comm_right = [&](const Eigen::MatrixXcd& a) {
        // [Jz, rho a]
        const Eigen::MatrixXcd ra = r * a;
        return (ops.jz * ra - ra * ops.jz).eval();
    };

    Eigen::MatrixXcd out = kI * (r * h - h * r);
    out -= cz * comm_left(ops.jz);
    out -= cx * comm_left(ops.jx);
    out += cy * comm_left(ops.jy);
    out += std::conj(cz) * comm_right(ops.jz);
    out += std::conj(cx) * comm_right(ops.jx);
    out -= std::conj(cy) * comm_right(ops.jy);
    return out;
}

void detail::bloch_system(const SystemParams& params, const RateSet& rates, Eigen::Matrix3d& a,
                          Eigen::Vector3d& b) {
    const double eps = params.epsilon;
    const double tc = params.tc;
    const double delta = params.delta;
    const double d2 = delta * delta;
    const double relax =
        (eps * eps * rates.gamma.real() + 4.0 * tc * tc * rates.gamma_c.real()) / d2;
    const double dg_re = rates.gamma.real() - rates.gamma_c.real();
    const double dg_im = rates.gamma.imag() - rates.gamma_c.imag();

    a << -relax, -eps, (2.0 * tc * eps / d2) * dg_re,
         eps, -relax, -(2.0 * tc + (2.0 * tc / delta) * rates.gamma_s.real()),
         0.0, 2.0 * tc, 0.0;
    b << (tc / delta) * rates.gamma_s.imag(),
         (tc * eps / d2) * dg_im,
         0.0;
}

BlochVector bloch_rhs(const BlochVector& v, const SystemParams& params, const RateSet& rates) {
    require_spin_half(params, "bloch_rhs");
    require_delta_consistency(params, rates);
    Eigen::Matrix3d a;
    Eigen::Vector3d b;
    detail::bloch_system(params, rates, a, b);
    const Eigen::Vector3d dv = a * Eigen::Vector3d{v.jx, v.jy, v.jz} + b;
    return BlochVector{dv(0), dv(1), dv(2)};
}

MasterGenerator::MasterGenerator(const SystemParams& params, const RateSet& rates) {
    require_delta_consistency(params, rates);
    const int n = params.spin.dim();
    const double j = params.spin.j();

    m_.resize(n);
    for (int i = 0; i < n; ++i) m_(i) = j - i;

    // ladder amplitudes p_i = (J+)_{i,i+1}
    Eigen::VectorXd p(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const double m = m_(i + 1);
        p(i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }

    h_diag_ = params.epsilon * m_;
    h_off_ = params.tc * p;

    // M = cz Jz + cx Jx - cy Jy; stored as bands of M^dagger
    const auto [cz, cx, cy] = dissipative_coefficients(params, rates);
    const std::complex<double> mx = cx;
    const std::complex<double> my = -cy;
    mdag_diag_.resize(n);
    mdag_super_.resize(n - 1);
    mdag_sub_.resize(n - 1);
    for (int i = 0; i < n; ++i) mdag_diag_(i) = std::conj(cz) * m_(i);
    for (int i = 0; i + 1 < n; ++i) {
        const std::complex<double> m_super = 0.5 * p(i) * (mx - kI * my);  // M_{i,i+1}
        const std::complex<double> m_sub = 0.5 * p(i) * (mx + kI * my);    // M_{i+1,i}
        mdag_super_(i) = std::conj(m_sub);
        mdag_sub_(i) = std::conj(m_super);
    }
}

MasterGenerator::Workspace MasterGenerator::make_workspace() const {
    const int n = dim();
    return Workspace{Eigen::MatrixXcd(n, n)};
}

void MasterGenerator::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                            Workspace& ws) const {
    const int n = dim();

    // y = rho H (H real symmetric tridiagonal); coherent part i (y - y^dagger)
    for (int k = 0; k < n; ++k) {
        ws.y.col(k) = h_diag_(k) * rho.col(k);
        if (k > 0) ws.y.col(k) += h_off_(k - 1) * rho.col(k - 1);
        if (k + 1 < n) ws.y.col(k) += h_off_(k) * rho.col(k + 1);
    }
    out = kI * (ws.y - ws.y.adjoint());

    // y = rho M^dagger; with Hermitian rho, K = M rho - rho M^dagger = y^dagger - y
    for (int k = 0; k < n; ++k) {
        ws.y.col(k) = mdag_diag_(k) * rho.col(k);
        if (k > 0) ws.y.col(k) += mdag_super_(k - 1) * rho.col(k - 1);
        if (k + 1 < n) ws.y.col(k) += mdag_sub_(k) * rho.col(k + 1);
    }
    // dissipator -[Jz, K] acts elementwise: -(m_a - m_b) K_ab
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            const std::complex<double> k_ab = std::conj(ws.y(b, a)) - ws.y(a, b);
            out(a, b) -= (m_(a) - m_(b)) * k_ab;
        }
    }
}

Eigen::MatrixXcd MasterGenerator::apply(const Eigen::MatrixXcd& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim()) {
        throw std::invalid_argument("MasterGenerator::apply: dimension mismatch");
    }
    Workspace ws = make_workspace();
    Eigen::MatrixXcd out(dim(), dim());
    apply(rho, out, ws);
    return out;
}

Trajectory integrate_master(const SystemParams& params, const SpinOperators& ops,
                            const RateSet& rates, const DensityMatrix& rho0,
                            const IntegrationOptions& opts) {
    const int n = params.spin.dim();
    if (ops.dim != n || rho0.data.rows() != n) {
        throw std::invalid_argument("integrate_master: dimension mismatch");
    }
    validate_integration_options(params, opts);
    const MasterGenerator gen(params, rates);

    const long long n_steps = std::llround(opts.t_end / opts.dt);
    const double dt = opts.dt;

    Trajectory traj;
    const std::size_t n_samples = static_cast<std::size_t>(n_steps / opts.sample_every) + 1;
    traj.times.reserve(n_samples);
    traj.jx.reserve(n_samples);
    traj.jy.reserve(n_samples);
    traj.jz.reserve(n_samples);
    traj.trace_err.reserve(n_samples);
    traj.herm_err.reserve(n_samples);
    traj.min_eig.reserve(n_samples);

    Eigen::MatrixXcd rho = rho0.data;
    Eigen::MatrixXcd k1(n, n), k2(n, n), k3(n, n), k4(n, n), stage(n, n);
    MasterGenerator::Workspace ws = gen.make_workspace();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig;

    const auto record = [&](long long step) {
        const double t = step * dt;
        const double ex = (rho * ops.jx).trace().real();
        const double ey = (rho * ops.jy).trace().real();
        const double ez = (rho * ops.jz).trace().real();
        const double tr_err = std::abs(rho.trace() - std::complex<double>{1.0, 0.0});
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        eig.compute(rho, Eigen::EigenvaluesOnly);
        const double min_eig = eig.eigenvalues().minCoeff();
        if (!std::isfinite(ex) || !std::isfinite(ey) || !std::isfinite(ez) ||
            !std::isfinite(tr_err) || !std::isfinite(min_eig)) {
            throw_non_finite(t);
        }
        traj.times.push_back(t);
        traj.jx.push_back(ex);
        traj.jy.push_back(ey);
        traj.jz.push_back(ez);
        traj.trace_err.push_back(tr_err);
        traj.herm_err.push_back(herm);
        traj.min_eig.push_back(min_eig);
    };

    record(0);
    for (long long step = 1; step <= n_steps; ++step) {
        gen.apply(rho, k1, ws);
        stage = rho + (0.5 * dt) * k1;
        gen.apply(stage, k2, ws);
        stage = rho + (0.5 * dt) * k2;
        gen.apply(stage, k3, ws);
        stage = rho + dt * k3;
        gen.apply(stage, k4, ws);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % opts.sample_every == 0) record(step);
    }
    return traj;
}

Trajectory integrate_bloch(const SystemParams& params, const RateSet& rates,
                           const BlochVector& v0, const IntegrationOptions& opts) {
    require_spin_half(params, "integrate_bloch");
    validate_integration_options(params, opts);
    const double norm0 = v0.jx * v0.jx + v0.jy * v0.jy + v0.jz * v0.jz;
    if (!(norm0 <= 0.25 + 1e-10)) {
        throw std::invalid_argument("integrate_bloch: initial vector lies outside the Bloch ball");
    }

    Eigen::Matrix3d a;
    Eigen::Vector3d b;
    detail::bloch_system(params, rates, a, b);
    const auto rhs = [&](const Eigen::Vector3d& v) -> Eigen::Vector3d { return a * v + b; };

    const long long n_steps = std::llround(opts.t_end / opts.dt);
    const double dt = opts.dt;

    Trajectory traj;
    Eigen::Vector3d v{v0.jx, v0.jy, v0.jz};
    const auto record = [&](long long step) {
        const double t = step * dt;
        if (!v.allFinite()) throw_non_finite(t);
        traj.times.push_back(t);
        traj.jx.push_back(v(0));
        traj.jy.push_back(v(1));
        traj.jz.push_back(v(2));
        traj.trace_err.push_back(0.0);
        traj.herm_err.push_back(0.0);
        traj.min_eig.push_back(0.5 - v.norm());
    };

    record(0);
    for (long long step = 1; step <= n_steps; ++step) {
        const Eigen::Vector3d k1 = rhs(v);
        const Eigen::Vector3d k2 = rhs(v + (0.5 * dt) * k1);
        const Eigen::Vector3d k3 = rhs(v + (0.5 * dt) * k2);
        const Eigen::Vector3d k4 = rhs(v + dt * k3);
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (step % opts.sample_every == 0) record(step);
    }
    return traj;
}

}  // namespace largespin

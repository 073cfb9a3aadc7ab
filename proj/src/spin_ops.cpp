#include "largespin/spin_ops.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace largespin {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

SpinSize make_spin_size(int two_j) {
    if (two_j < 1) {
        throw std::invalid_argument("spin size: two_j must be >= 1 (a one-dimensional spin has no dynamics)");
    }
    return SpinSize{two_j};
}

SpinOperators build_spin_operators(SpinSize spin) {
    if (spin.two_j < 1) {
        throw std::invalid_argument("build_spin_operators: two_j must be >= 1");
    }
    const int n = spin.dim();
    const double j = spin.j();

    SpinOperators ops;
    ops.dim = n;
    ops.jz = Eigen::MatrixXcd::Zero(n, n);
    ops.jplus = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double m = j - i;
        ops.jz(i, i) = m;
        if (i > 0) {
            // J+ |J,M> = sqrt(J(J+1) - M(M+1)) |J,M+1>, raising column i into row i-1
            ops.jplus(i - 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }
    ops.jminus = ops.jplus.adjoint();
    ops.jx = 0.5 * (ops.jplus + ops.jminus);
    ops.jy = -0.5 * kI * (ops.jplus - ops.jminus);
    return ops;
}

SystemParams make_system_params(SpinSize spin, double epsilon, double tc) {
    if (spin.two_j < 1) {
        throw std::invalid_argument("system params: two_j must be >= 1");
    }
    if (!(tc > 0.0) || !std::isfinite(tc)) {
        throw std::invalid_argument("system params: tc must be positive and finite");
    }
    if (!std::isfinite(epsilon)) {
        throw std::invalid_argument("system params: epsilon must be finite");
    }
    SystemParams p;
    p.spin = spin;
    p.epsilon = epsilon;
    p.tc = tc;
    p.delta = std::sqrt(4.0 * tc * tc + epsilon * epsilon);
    return p;
}

Eigen::MatrixXcd hamiltonian(const SystemParams& params, const SpinOperators& ops) {
    if (ops.dim != params.spin.dim()) {
        throw std::invalid_argument("hamiltonian: operator dimension does not match spin size");
    }
    return params.epsilon * ops.jz + 2.0 * params.tc * ops.jx;
}

Eigen::MatrixXcd dicke_rotation_unitary(const SpinOperators& ops) {
    // jy is Hermitian, so the exponential follows from its eigendecomposition.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(ops.jy);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("dicke_rotation_unitary: eigendecomposition failed");
    }
    const double theta = std::numbers::pi / 2.0;
    Eigen::VectorXcd phases(ops.dim);
    for (int k = 0; k < ops.dim; ++k) {
        phases(k) = std::exp(kI * theta * solver.eigenvalues()(k));
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

Eigen::MatrixXcd dicke_rotate(const SpinOperators& ops, const Eigen::MatrixXcd& a) {
    if (a.rows() != ops.dim || a.cols() != ops.dim) {
        throw std::invalid_argument("dicke_rotate: matrix dimension does not match operators");
    }
    const Eigen::MatrixXcd u = dicke_rotation_unitary(ops);
    return u * a * u.adjoint();
}

}  // namespace largespin

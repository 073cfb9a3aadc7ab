// dynamics.hpp — master-equation and Bloch-equation right-hand sides and
// fixed-step RK4 time integration

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "largespin/bath.hpp"
#include "largespin/spin_ops.hpp"

namespace largespin {

// Hermitian, unit-trace state of the spin. Positivity is validated at
// construction; during the (Redfield-type, not Lindblad) evolution small
// negativity may develop and is monitored rather than enforced.
struct DensityMatrix {
    Eigen::MatrixXcd data;
};

DensityMatrix make_density_matrix(Eigen::MatrixXcd m);

// Pure state |J, M = J><J, M = J| (first basis vector).
DensityMatrix initial_state_spin_up(SpinSize spin);

// Pure eigenstate of Jx with maximal eigenvalue J, obtained by rotating the
// spin-up state with the inverse Dicke rotation; <Jx> = J, <Jz> = 0.
DensityMatrix initial_state_x_up(SpinSize spin, const SpinOperators& ops);

// Spin expectation values for J = 1/2; constrained to the Bloch ball.
struct BlochVector {
    double jx{0.0};
    double jy{0.0};
    double jz{0.0};
};

// Sampled time series of expectation values plus state-health diagnostics.
// For Bloch-equation runs the trace/Hermiticity defects are identically zero
// and min_eig is the smaller eigenvalue of the implied 2x2 state.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> jx, jy, jz;
    std::vector<double> trace_err, herm_err, min_eig;

    std::size_t size() const { return times.size(); }
};

// d rho / dt of the Born-Markov master equation: the coherent commutator plus
// the six dissipative commutator terms with coefficients built from
// (epsilon, tc, delta, Gamma, Gamma_c, Gamma_s). Output is traceless and maps
// Hermitian inputs to Hermitian outputs. This is the literal reference form;
// the integrator uses an equivalent banded fast path (MasterGenerator).
Eigen::MatrixXcd master_rhs(const DensityMatrix& rho, const SystemParams& params,
                            const SpinOperators& ops, const RateSet& rates);

// Time derivative of the Bloch equations, including the constant inhomogeneous
// terms. Only defined for J = 1/2, where the expectation-value equations close.
BlochVector bloch_rhs(const BlochVector& v, const SystemParams& params, const RateSet& rates);

// Precomputed master-equation generator. The Hamiltonian and the dissipative
// operator are tridiagonal in the descending-M basis and Jz is diagonal, so
// one application costs O(N^2). apply() assumes a Hermitian argument (which
// RK4 preserves); master_rhs is the general reference it is tested against.
class MasterGenerator {
public:
    MasterGenerator(const SystemParams& params, const RateSet& rates);

    struct Workspace {
        Eigen::MatrixXcd y;
    };

    Workspace make_workspace() const;
    void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, Workspace& ws) const;
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

    int dim() const { return static_cast<int>(m_.size()); }

private:
    Eigen::VectorXd m_;          // Jz diagonal, descending
    Eigen::VectorXd h_diag_;     // H = eps Jz + 2 tc Jx, real symmetric tridiagonal
    Eigen::VectorXd h_off_;
    Eigen::VectorXcd mdag_diag_; // bands of M^dagger for the dissipator
    Eigen::VectorXcd mdag_super_;
    Eigen::VectorXcd mdag_sub_;
};

struct IntegrationOptions {
    double t_end{20.0};
    double dt{0.002};
    int sample_every{1};  // store every k-th step (t = 0 is always stored)
};

// Classic fixed-step 4th-order Runge-Kutta. Records tr(rho J_i) and the
// trace/Hermiticity/positivity diagnostics at every sample; aborts with the
// offending time when a non-finite value appears. The step size must resolve
// the level spacing (dt * delta <= 0.1).
Trajectory integrate_master(const SystemParams& params, const SpinOperators& ops,
                            const RateSet& rates, const DensityMatrix& rho0,
                            const IntegrationOptions& opts);

Trajectory integrate_bloch(const SystemParams& params, const RateSet& rates,
                           const BlochVector& v0, const IntegrationOptions& opts);

namespace detail {

// Bloch system in matrix form: dv/dt = a v + b.
void bloch_system(const SystemParams& params, const RateSet& rates, Eigen::Matrix3d& a,
                  Eigen::Vector3d& b);

}  // namespace detail

}  // namespace largespin

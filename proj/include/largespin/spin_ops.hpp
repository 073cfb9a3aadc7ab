// spin_ops.hpp — angular-momentum operators and the coherent spin Hamiltonian
//
// Everything here is dimensionless with hbar = 1; energies are quoted in units
// of the tunnel amplitude tc. Matrices are dense (the supported spin range
// keeps dimensions small).

#pragma once

#include <Eigen/Dense>

namespace largespin {

// Spin size J stored as the integer 2J, so the smallest supported spin is
// two_j = 1 (J = 1/2). Hilbert-space dimension is 2J + 1.
struct SpinSize {
    int two_j{1};

    double j() const { return 0.5 * two_j; }
    int dim() const { return two_j + 1; }
};

// Validates two_j >= 1.
SpinSize make_spin_size(int two_j);

// Matrix representation in the descending-M basis: basis vector i corresponds
// to M = J - i, so the "spin fully up" state is the first basis vector.
struct SpinOperators {
    int dim{0};
    Eigen::MatrixXcd jx, jy, jz, jplus, jminus;
};

SpinOperators build_spin_operators(SpinSize spin);

// Coherent system parameters. tc > 0 sets the unit of energy; delta is the
// level spacing sqrt(4 tc^2 + epsilon^2) of the unperturbed spin.
struct SystemParams {
    SpinSize spin{};
    double epsilon{0.0};
    double tc{1.0};
    double delta{2.0};
};

SystemParams make_system_params(SpinSize spin, double epsilon, double tc);

// H = epsilon Jz + 2 tc Jx. Eigenvalues are M * delta for M = -J .. J.
Eigen::MatrixXcd hamiltonian(const SystemParams& params, const SpinOperators& ops);

// U = exp(i (pi/2) Jy). Conjugation by U maps jx -> jz and jz -> -jx, which
// brings the zero-bias Hamiltonian 2 tc Jx into the diagonal form 2 tc Jz.
Eigen::MatrixXcd dicke_rotation_unitary(const SpinOperators& ops);

// U a U^dagger with U as above; spectrum-preserving.
Eigen::MatrixXcd dicke_rotate(const SpinOperators& ops, const Eigen::MatrixXcd& a);

}  // namespace largespin

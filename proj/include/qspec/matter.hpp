#pragma once

#include "qspec/types.hpp"

#include <string>

namespace qspec {

enum class GreenKind { retarded, advanced };

/// Multilevel system: diagonal H0 in the energy basis (ground level at 0),
/// Hermitian dipole V with zero diagonal, one global broadening epsilon.
/// `dipole_lowering` is the de-excitation part of V, so V = Vlow + Vlow^dag.
struct MatterSystem {
    RealVector energies;
    Matrix dipole;
    Matrix dipole_lowering;
    double epsilon = 0.05;
    std::string label;

    Eigen::Index dim() const { return energies.size(); }
    Matrix hamiltonian() const {
        Matrix h = Matrix::Zero(dim(), dim());
        for (Eigen::Index k = 0; k < dim(); ++k) h(k, k) = energies(k);
        return h;
    }
    void validate() const;
};

MatterSystem two_level(double omega0, double mu, double epsilon = 0.05);

/// n levels with given adjacent spacings (size n-1) and adjacent dipole
/// matrix elements (size n-1). Energies are referenced to the ground level.
MatterSystem ladder(const std::vector<double>& spacings, const std::vector<double>& dipoles,
                    double epsilon = 0.05);

/// Truncated harmonic ladder: energies n*omega0, adjacent dipoles mu*sqrt(n+1).
MatterSystem harmonic(int levels, double omega0, double mu, double epsilon = 0.05);

/// Frequency-domain propagator, diagonal in the energy basis:
/// retarded 1/(w - E_k + i m eps), advanced 1/(w - E_k - i m eps).
/// `epsilon_scale` multiplies the system broadening (used by multi-interaction
/// pathways where the accumulated linewidth grows with the number of fields).
Matrix green(const MatterSystem& sys, double omega, GreenKind kind, int epsilon_scale = 1);

/// exp(-beta H0)/Z. beta = 0 gives the maximally mixed state.
Matrix thermal_state(const MatterSystem& sys, double beta);

Matrix ground_state(const MatterSystem& sys);

}  // namespace qspec

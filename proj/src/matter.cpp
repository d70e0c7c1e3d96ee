#include "qspec/matter.hpp"

#include "qspec/operator_core.hpp"

#include <cmath>

namespace qspec {

void MatterSystem::validate() const {
    if (dim() < 2) throw ArgumentError("MatterSystem needs at least two levels");
    if (epsilon <= 0.0) throw ArgumentError("MatterSystem: epsilon must be positive");
    if (std::abs(energies(0)) > 1e-12)
        throw ArgumentError("MatterSystem: energies must be referenced to ground = 0");
    for (Eigen::Index k = 1; k < dim(); ++k)
        if (energies(k) < energies(k - 1))
            throw ArgumentError("MatterSystem: energies must be ascending");
    if (!is_hermitian(dipole)) throw ArgumentError("MatterSystem: dipole must be Hermitian");
    for (Eigen::Index k = 0; k < dim(); ++k)
        if (std::abs(dipole(k, k)) > 1e-12)
            throw ArgumentError("MatterSystem: no permanent dipoles (zero diagonal)");
    if ((dipole - (dipole_lowering + dipole_lowering.adjoint())).norm() > 1e-12 * dipole.norm())
        throw ArgumentError("MatterSystem: V != Vlow + Vlow^dag");
}

namespace {

// De-excitation part: matrix elements <j|V|k> with E_j < E_k.
Matrix lowering_part(const Matrix& v, const RealVector& energies) {
    Matrix low = Matrix::Zero(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < v.rows(); ++j)
        for (Eigen::Index k = 0; k < v.cols(); ++k)
            if (energies(j) < energies(k)) low(j, k) = v(j, k);
    return low;
}

MatterSystem assemble(RealVector energies, Matrix v, double epsilon, std::string label) {
    MatterSystem sys;
    sys.energies = std::move(energies);
    sys.dipole = std::move(v);
    sys.dipole_lowering = lowering_part(sys.dipole, sys.energies);
    sys.epsilon = epsilon;
    sys.label = std::move(label);
    sys.validate();
    return sys;
}

}  // namespace

MatterSystem two_level(double omega0, double mu, double epsilon) {
    if (omega0 <= 0.0) throw ArgumentError("two_level: omega0 must be positive");
    RealVector e(2);
    e << 0.0, omega0;
    Matrix v = Matrix::Zero(2, 2);
    v(0, 1) = mu;
    v(1, 0) = mu;
    return assemble(std::move(e), std::move(v), epsilon, "two_level");
}

MatterSystem ladder(const std::vector<double>& spacings, const std::vector<double>& dipoles,
                    double epsilon) {
    const int n = static_cast<int>(spacings.size()) + 1;
    if (n < 2) throw ArgumentError("ladder: need at least two levels");
    if (dipoles.size() != spacings.size())
        throw ArgumentError("ladder: need one dipole element per spacing");
    RealVector e(n);
    e(0) = 0.0;
    for (int k = 1; k < n; ++k) {
        if (spacings[k - 1] <= 0.0) throw ArgumentError("ladder: spacings must be positive");
        e(k) = e(k - 1) + spacings[k - 1];
    }
    Matrix v = Matrix::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        v(k, k + 1) = dipoles[k];
        v(k + 1, k) = dipoles[k];
    }
    return assemble(std::move(e), std::move(v), epsilon, "ladder");
}

MatterSystem harmonic(int levels, double omega0, double mu, double epsilon) {
    if (levels < 2) throw ArgumentError("harmonic: need at least two levels");
    if (omega0 <= 0.0) throw ArgumentError("harmonic: omega0 must be positive");
    RealVector e(levels);
    Matrix v = Matrix::Zero(levels, levels);
    for (int k = 0; k < levels; ++k) e(k) = k * omega0;
    for (int k = 0; k + 1 < levels; ++k) {
        v(k, k + 1) = mu * std::sqrt(double(k + 1));
        v(k + 1, k) = mu * std::sqrt(double(k + 1));
    }
    return assemble(std::move(e), std::move(v), epsilon, "harmonic");
}

Matrix green(const MatterSystem& sys, double omega, GreenKind kind, int epsilon_scale) {
    const double eta = sys.epsilon * epsilon_scale;
    const cplx ieta = (kind == GreenKind::retarded) ? cplx(0.0, eta) : cplx(0.0, -eta);
    Matrix g = Matrix::Zero(sys.dim(), sys.dim());
    for (Eigen::Index k = 0; k < sys.dim(); ++k)
        g(k, k) = 1.0 / (omega - sys.energies(k) + ieta);
    return g;
}

Matrix thermal_state(const MatterSystem& sys, double beta) {
    if (beta < 0.0) throw ArgumentError("thermal_state: beta must be nonnegative");
    RealVector w(sys.dim());
    for (Eigen::Index k = 0; k < sys.dim(); ++k) w(k) = std::exp(-beta * sys.energies(k));
    w /= w.sum();
    Matrix rho = Matrix::Zero(sys.dim(), sys.dim());
    for (Eigen::Index k = 0; k < sys.dim(); ++k) rho(k, k) = w(k);
    return rho;
}

Matrix ground_state(const MatterSystem& sys) {
    Matrix rho = Matrix::Zero(sys.dim(), sys.dim());
    rho(0, 0) = 1.0;
    return rho;
}

}  // namespace qspec

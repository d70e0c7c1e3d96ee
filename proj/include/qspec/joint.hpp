#pragma once

#include "qspec/field.hpp"
#include "qspec/matter.hpp"
#include "qspec/types.hpp"

#include <Eigen/Eigenvalues>

namespace qspec {

/// Exact joint matter (x) field model with the time-independent Hamiltonian
/// H = sum_m H0_m + sum_j w_j n_j + sum_{m,j} lambda_j V_m (a_j + a_j^dag).
/// Diagonalized once at construction; propagation is exact.
struct JointModel {
    Matrix h_total;
    Matrix rho0;
    std::vector<Eigen::Index> factor_dims;  // matter factors first, then field modes
    std::size_t n_matter = 1;
    std::vector<Matrix> number_ops;         // photon number per mode, embedded
    Eigen::SelfAdjointEigenSolver<Matrix> eigen;

    Eigen::Index dim() const { return h_total.rows(); }
};

JointModel build_joint_model(const std::vector<const MatterSystem*>& atoms,
                             const FieldState& field, double coupling_scale = 1.0,
                             const Matrix* matter_state0 = nullptr,
                             Eigen::Index dim_cap = kDefaultDimCap);

JointModel build_joint_model(const MatterSystem& sys, const FieldState& field,
                             double coupling_scale = 1.0, const Matrix* matter_state0 = nullptr,
                             Eigen::Index dim_cap = kDefaultDimCap);

/// rho(t) = e^{-iHt} rho0 e^{+iHt}.
Matrix propagate(const JointModel& model, double t);

struct FluxResult {
    double flux = 0.0;                // [<n>(T) - <n>(0)] / T
    std::vector<double> times;
    std::vector<double> photon_number;
};

/// Windowed photon flux of mode j over [0, T], sampled at `samples` points.
FluxResult photon_flux(const JointModel& model, std::size_t mode, double t_final, int samples);

struct OrderFit {
    double a2 = 0.0;
    double a4 = 0.0;
    double a6 = 0.0;
    double residual_rms = 0.0;
    double condition = 0.0;
};

/// Least-squares fit of observable(c) to a2 c^2 + a4 c^4 + a6 c^6 on the
/// given coupling-scale grid. Throws NumericalError when ill conditioned.
OrderFit order_fit(const std::vector<double>& scales, const std::vector<double>& values);

}  // namespace qspec

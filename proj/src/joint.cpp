#include "qspec/joint.hpp"

#include "qspec/operator_core.hpp"

#include <cmath>

namespace qspec {

namespace {

Matrix ladder(int n) {
    Matrix a = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

Matrix embed_factor(const std::vector<Eigen::Index>& dims, std::size_t which, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t q = 0; q < dims.size(); ++q)
        out = kron(out, q == which ? op : Matrix::Identity(dims[q], dims[q]));
    return out;
}

}  // namespace

JointModel build_joint_model(const std::vector<const MatterSystem*>& atoms,
                             const FieldState& field, double coupling_scale,
                             const Matrix* matter_state0, Eigen::Index dim_cap) {
    if (atoms.empty()) throw ArgumentError("build_joint_model: need at least one matter system");
    JointModel model;
    model.n_matter = atoms.size();
    Eigen::Index dim = 1;
    for (const auto* a : atoms) {
        model.factor_dims.push_back(a->dim());
        dim *= a->dim();
    }
    for (const auto& m : field.modes) {
        model.factor_dims.push_back(m.truncation);
        dim *= m.truncation;
    }
    if (dim > dim_cap)
        throw SizeError("joint space dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(dim_cap));

    model.h_total = Matrix::Zero(dim, dim);
    for (std::size_t q = 0; q < atoms.size(); ++q)
        model.h_total += embed_factor(model.factor_dims, q, atoms[q]->hamiltonian());

    std::vector<Matrix> quadratures;  // a_j + a_j^dag, embedded
    for (std::size_t j = 0; j < field.modes.size(); ++j) {
        const std::size_t fq = atoms.size() + j;
        const Matrix a = ladder(field.modes[j].truncation);
        const Matrix n_op = Matrix(a.adjoint() * a);
        model.h_total += field.modes[j].frequency * embed_factor(model.factor_dims, fq, n_op);
        model.number_ops.push_back(embed_factor(model.factor_dims, fq, n_op));
        quadratures.push_back(embed_factor(model.factor_dims, fq, Matrix(a + a.adjoint())));
    }
    for (std::size_t q = 0; q < atoms.size(); ++q) {
        const Matrix v_emb = embed_factor(model.factor_dims, q, atoms[q]->dipole);
        for (std::size_t j = 0; j < field.modes.size(); ++j)
            model.h_total +=
                coupling_scale * field.modes[j].coupling * Matrix(v_emb * quadratures[j]);
    }

    Matrix rho_m = matter_state0 ? *matter_state0 : ground_state(*atoms[0]);
    if (!matter_state0)
        for (std::size_t q = 1; q < atoms.size(); ++q) rho_m = kron(rho_m, ground_state(*atoms[q]));
    model.rho0 = kron(rho_m, field.rho_f.m);
    if (model.rho0.rows() != dim)
        throw ArgumentError("build_joint_model: initial state dimension mismatch");

    model.eigen.compute(model.h_total);
    if (model.eigen.info() != Eigen::Success)
        throw NumericalError("build_joint_model: diagonalization failed");
    return model;
}

JointModel build_joint_model(const MatterSystem& sys, const FieldState& field,
                             double coupling_scale, const Matrix* matter_state0,
                             Eigen::Index dim_cap) {
    return build_joint_model(std::vector<const MatterSystem*>{&sys}, field, coupling_scale,
                             matter_state0, dim_cap);
}

Matrix propagate(const JointModel& model, double t) {
    const auto& u = model.eigen.eigenvectors();
    Vector phase(model.dim());
    for (Eigen::Index k = 0; k < model.dim(); ++k)
        phase(k) = std::exp(cplx(0.0, -model.eigen.eigenvalues()(k) * t));
    const Matrix ut = u * phase.asDiagonal() * u.adjoint();
    return ut * model.rho0 * ut.adjoint();
}

FluxResult photon_flux(const JointModel& model, std::size_t mode, double t_final, int samples) {
    if (mode >= model.number_ops.size()) throw ArgumentError("photon_flux: bad mode index");
    if (t_final <= 0.0 || samples < 2)
        throw ArgumentError("photon_flux: need t_final > 0 and samples >= 2");
    FluxResult res;
    for (int s = 0; s < samples; ++s) {
        const double t = t_final * s / double(samples - 1);
        const Matrix rho_t = propagate(model, t);
        res.times.push_back(t);
        res.photon_number.push_back((model.number_ops[mode] * rho_t).trace().real());
    }
    res.flux = (res.photon_number.back() - res.photon_number.front()) / t_final;
    return res;
}

OrderFit order_fit(const std::vector<double>& scales, const std::vector<double>& values) {
    if (scales.size() != values.size() || scales.size() < 5)
        throw ArgumentError("order_fit: need at least 5 matched grid points");
    const std::size_t n = scales.size();
    double cmax = 0.0;
    for (double c : scales) cmax = std::max(cmax, std::abs(c));
    if (cmax <= 0.0) throw ArgumentError("order_fit: grid must contain nonzero scales");

    // normalized design matrix for conditioning; coefficients un-scaled after
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = scales[i] / cmax;
        design(i, 0) = x * x;
        design(i, 1) = x * x * x * x;
        design(i, 2) = x * x * x * x * x * x;
        rhs(i) = values[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(2);
    if (!std::isfinite(cond) || cond > 1e8)
        throw NumericalError("order_fit: ill-conditioned fit (condition " +
                             std::to_string(cond) + "); change the coupling grid");
    const Eigen::Vector3d coef = svd.solve(rhs);
    OrderFit fit;
    fit.a2 = coef(0) / (cmax * cmax);
    fit.a4 = coef(1) / (cmax * cmax * cmax * cmax);
    fit.a6 = coef(2) / std::pow(cmax, 6);
    fit.residual_rms = std::sqrt((design * coef - rhs).squaredNorm() / n);
    fit.condition = cond;
    return fit;
}

}  // namespace qspec

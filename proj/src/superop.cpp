#include "qspec/superop.hpp"

#include "qspec/joint.hpp"
#include "qspec/operator_core.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <map>

namespace qspec {

namespace {

Matrix heisenberg_dipole(const MatterSystem& sys, double t) {
    Matrix vt = sys.dipole;
    for (Eigen::Index a = 0; a < sys.dim(); ++a)
        for (Eigen::Index b = 0; b < sys.dim(); ++b)
            vt(a, b) *= std::exp(cplx(0.0, (sys.energies(a) - sys.energies(b)) * t));
    return vt;
}

Matrix apply_super(const MatterSystem& sys, Sign s, double t, const Matrix& x) {
    const Matrix vt = heisenberg_dipole(sys, t);
    if (s == Sign::minus) return vt * x - x * vt;
    return 0.5 * (vt * x + x * vt);
}

}  // namespace

cplx super_correlator(const MatterSystem& sys, const Matrix& state0, const SignSequence& seq,
                      bool observable) {
    seq.validate(observable);
    if (state0.rows() != sys.dim())
        throw ArgumentError("super_correlator: state dimension mismatch");
    Matrix x = state0;
    for (std::size_t k = seq.signs.size(); k-- > 0;)
        x = apply_super(sys, seq.signs[k], seq.times[k], x);
    return x.trace();
}

std::vector<SpectralLine> correlator_lines(const MatterSystem& sys, const Matrix& state0,
                                           const std::vector<Sign>& right_signs,
                                           double weight_tol) {
    Matrix x = state0;
    for (std::size_t k = right_signs.size(); k-- > 0;)
        x = apply_super(sys, right_signs[k], 0.0, x);

    // tr(V(t) X) = sum_ab V_ab X_ba e^{i w_ab t}; a line at E_b - E_a.
    std::map<long long, SpectralLine> merged;  // key: rounded position
    double wmax = 0.0;
    for (Eigen::Index a = 0; a < sys.dim(); ++a)
        for (Eigen::Index b = 0; b < sys.dim(); ++b) {
            const cplx w = sys.dipole(a, b) * x(b, a);
            if (w == cplx(0.0, 0.0)) continue;
            const double pos = sys.energies(b) - sys.energies(a);
            const long long key = llround(pos * 1e9);
            auto& line = merged[key];
            line.omega = pos;
            line.weight += w;
            wmax = std::max(wmax, std::abs(line.weight));
        }
    std::vector<SpectralLine> out;
    for (auto& [key, line] : merged)
        if (std::abs(line.weight) > weight_tol * std::max(wmax, 1e-300)) out.push_back(line);
    return out;
}

std::vector<FdtResonance> fdt_resonances(const MatterSystem& sys, const Matrix& state0,
                                         double beta) {
    const auto pp = correlator_lines(sys, state0, {Sign::plus});
    const auto pm = correlator_lines(sys, state0, {Sign::minus});
    std::vector<FdtResonance> out;
    for (const auto& line : pm) {
        if (line.omega <= 1e-12) continue;  // positive resonances only
        FdtResonance r;
        r.omega = line.omega;
        r.c_pm_weight = line.weight.real();
        for (const auto& lp : pp)
            if (std::abs(lp.omega - line.omega) < 1e-9) r.c_pp_weight = lp.weight.real();
        r.ratio = r.c_pp_weight / r.c_pm_weight;
        r.coth_half = 0.5 / std::tanh(0.5 * beta * r.omega);
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(),
              [](const FdtResonance& a, const FdtResonance& b) { return a.omega < b.omega; });
    return out;
}

FdtTable fdt_check(const MatterSystem& sys, double beta, const std::vector<double>& grid) {
    if (beta <= 0.0) throw ArgumentError("fdt_check: beta must be positive");
    FdtTable table;
    table.beta = beta;
    const Matrix rho = thermal_state(sys, beta);
    table.resonances = fdt_resonances(sys, rho, beta);

    // Broadened curves: every Lehmann line as a Lorentzian of width epsilon,
    // 2 pi delta(w - w0) -> 2 eps / ((w - w0)^2 + eps^2).
    const auto pp = correlator_lines(sys, rho, {Sign::plus});
    const auto pm = correlator_lines(sys, rho, {Sign::minus});
    table.grid = grid;
    table.c_pp.assign(grid.size(), 0.0);
    table.c_pm.assign(grid.size(), 0.0);
    const double eps = sys.epsilon;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (const auto& l : pp)
            table.c_pp[i] += l.weight.real() * 2.0 * eps /
                             ((grid[i] - l.omega) * (grid[i] - l.omega) + eps * eps);
        for (const auto& l : pm)
            table.c_pm[i] += l.weight.real() * 2.0 * eps /
                             ((grid[i] - l.omega) * (grid[i] - l.omega) + eps * eps);
    }
    return table;
}

namespace {

// Midpoint-sampled stepwise-exact propagation under H(t) = H0 + amp(t) V,
// factor-local, so a product Hamiltonian keeps the propagator factorized.
Matrix drive_propagate(const Matrix& h0, const Matrix& v,
                       const std::function<double(double)>& amp, const Matrix& rho0,
                       double t_final, int steps) {
    Matrix rho = rho0;
    const double dt = t_final / steps;
    for (int k = 0; k < steps; ++k) {
        const double tm = (k + 0.5) * dt;
        const Matrix h = h0 + amp(tm) * v;
        const Matrix u =
            hermitian_function(h, [dt](double x) { return std::exp(cplx(0.0, -x * dt)); });
        rho = u * rho * u.adjoint();
    }
    return rho;
}

}  // namespace

TwoAtomReport two_atom_demo(const MatterSystem& atom1, const MatterSystem& atom2,
                            const FieldState& field, double detuned_omega0, double t_final,
                            int steps) {
    if (field.modes.size() != 1)
        throw ArgumentError("two_atom_demo: expects a single shared field mode");
    if (atom2.dim() != 2)
        throw ArgumentError("two_atom_demo: the detuning sweep needs a two-level atom 2");
    TwoAtomReport report;
    const MatterSystem atom2_detuned =
        two_level(detuned_omega0, std::abs(atom2.dipole(0, 1)), atom2.epsilon);

    const auto amps = classical_amplitudes(field);
    const double omega_m = field.modes[0].frequency;
    auto drive = [&](double t) { return 2.0 * (amps[0] * std::exp(cplx(0.0, -omega_m * t))).real(); };

    auto excited_projector = [](const MatterSystem& a) {
        Matrix p = Matrix::Zero(a.dim(), a.dim());
        for (Eigen::Index k = 1; k < a.dim(); ++k) p(k, k) = 1.0;
        return p;
    };

    // Classical branch: joint matter space only, c-number field amplitude.
    auto classical_pop = [&](const MatterSystem* other) {
        Matrix h0 = atom1.hamiltonian();
        Matrix v = atom1.dipole;
        Matrix rho0 = ground_state(atom1);
        Matrix proj = excited_projector(atom1);
        if (other) {
            const Eigen::Index d2 = other->dim();
            h0 = kron(h0, Matrix::Identity(d2, d2)) +
                 kron(Matrix::Identity(atom1.dim(), atom1.dim()), other->hamiltonian());
            v = kron(v, Matrix::Identity(d2, d2)) +
                kron(Matrix::Identity(atom1.dim(), atom1.dim()), other->dipole);
            rho0 = kron(rho0, ground_state(*other));
            proj = kron(proj, Matrix::Identity(d2, d2));
        }
        const Matrix rho_t = drive_propagate(h0, v, drive, rho0, t_final, steps);
        return (proj * rho_t).trace().real();
    };

    // Quantum branch: full joint matter x matter x field space, exact evolution.
    auto quantum_pop = [&](const MatterSystem* other) {
        std::vector<const MatterSystem*> atoms{&atom1};
        if (other) atoms.push_back(other);
        JointModel model = build_joint_model(atoms, field);
        const Matrix rho_t = propagate(model, t_final);
        Matrix proj1 = excited_projector(atom1);
        Matrix proj = proj1;
        for (std::size_t q = 1; q < model.factor_dims.size(); ++q)
            proj = kron(proj, Matrix::Identity(model.factor_dims[q], model.factor_dims[q]));
        return (proj * rho_t).trace().real();
    };

    const double cl_present = classical_pop(&atom2);
    const double cl_absent = classical_pop(nullptr);
    const double cl_detuned = classical_pop(&atom2_detuned);
    report.rows.push_back({"classical", "present", atom2.energies(1), cl_present});
    report.rows.push_back({"classical", "absent", 0.0, cl_absent});
    report.rows.push_back({"classical", "detuned", atom2_detuned.energies(1), cl_detuned});
    report.classical_spread = std::max(std::abs(cl_absent - cl_present),
                                       std::abs(cl_detuned - cl_present));

    const double q_present = quantum_pop(&atom2);
    const double q_absent = quantum_pop(nullptr);
    const double q_detuned = quantum_pop(&atom2_detuned);
    report.rows.push_back({"quantum", "present", atom2.energies(1), q_present});
    report.rows.push_back({"quantum", "absent", 0.0, q_absent});
    report.rows.push_back({"quantum", "detuned", atom2_detuned.energies(1), q_detuned});
    report.quantum_shift = std::abs(q_detuned - q_present);
    return report;
}

}  // namespace qspec

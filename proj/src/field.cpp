#include "qspec/field.hpp"

#include "qspec/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qspec {

namespace {

Matrix ladder_annihilate(int n) {
    Matrix a = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    return a;
}

Matrix embed(const std::vector<FieldMode>& modes, std::size_t j, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t q = 0; q < modes.size(); ++q) {
        const int n = modes[q].truncation;
        out = kron(out, q == j ? op : Matrix::Identity(n, n));
    }
    return out;
}

void check_mode(const FieldMode& m) {
    if (m.frequency <= 0.0) throw ArgumentError("FieldMode: frequency must be positive");
    if (m.truncation < 2) throw ArgumentError("FieldMode: truncation must be at least 2");
}

Vector fock_vector(int n_levels, int n) {
    Vector v = Vector::Zero(n_levels);
    v(n) = 1.0;
    return v;
}

Matrix pure_to_rho(const Vector& v) { return v * v.adjoint(); }

void coherent_guard(int truncation, cplx beta) {
    const double nb = std::norm(beta);
    if (nb > truncation / 4.0) {
        const int needed = static_cast<int>(std::ceil(4.0 * nb));
        throw ArgumentError("coherent amplitude |beta|^2 = " + std::to_string(nb) +
                            " exceeds truncation guard; need truncation >= " +
                            std::to_string(needed));
    }
}

Matrix thermal_mode_rho(int truncation, double nbar) {
    if (nbar < 0.0) throw ArgumentError("thermal: nbar must be nonnegative");
    if (nbar > 0.0) {
        const int needed = required_thermal_truncation(nbar);
        if (truncation < needed)
            throw ArgumentError("thermal nbar = " + std::to_string(nbar) +
                                " needs truncation >= " + std::to_string(needed) +
                                " to keep the geometric tail below 1e-9");
    }
    Matrix rho = Matrix::Zero(truncation, truncation);
    const double q = nbar / (nbar + 1.0);
    double w = 1.0, sum = 0.0;
    for (int n = 0; n < truncation; ++n, w *= q) {
        rho(n, n) = w;
        sum += w;
    }
    rho /= sum;
    return rho;
}

Matrix squeezed_mode_rho(int truncation, double r, double phi) {
    const double nb = std::sinh(r) * std::sinh(r);
    if (nb > truncation / 8.0)
        throw ArgumentError("squeezed: sinh^2(r) = " + std::to_string(nb) +
                            " exceeds truncation guard; need truncation >= " +
                            std::to_string(static_cast<int>(std::ceil(8.0 * nb))));
    const Matrix a = ladder_annihilate(truncation);
    const cplx xi = r * std::exp(cplx(0.0, phi));
    // S = exp(A), A = (conj(xi) a^2 - xi adag^2)/2 anti-Hermitian; exp via iA.
    Matrix gen = 0.5 * (std::conj(xi) * (a * a) - xi * (a.adjoint() * a.adjoint()));
    Matrix herm = cplx(0.0, 1.0) * gen;
    Matrix s = hermitian_function(herm, [](double x) { return std::exp(cplx(0.0, -x)); });
    Vector v = s * fock_vector(truncation, 0);
    v /= v.norm();
    return pure_to_rho(v);
}

Matrix cat_mode_rho(int truncation, cplx beta, int parity) {
    coherent_guard(truncation, beta);
    Vector plus = coherent_vector(truncation, beta);
    Vector minus = coherent_vector(truncation, -beta);
    Vector v = (parity >= 0) ? Vector(plus + minus) : Vector(plus - minus);
    const double n = v.norm();
    if (n < 1e-12) throw ArgumentError("cat: state has vanishing norm (beta too small)");
    v /= n;
    return pure_to_rho(v);
}

template <typename PerMode>
Matrix product_rho(const std::vector<FieldMode>& modes, PerMode&& make) {
    Matrix rho = Matrix::Identity(1, 1);
    for (std::size_t j = 0; j < modes.size(); ++j) rho = kron(rho, make(j));
    return rho;
}

}  // namespace

Vector coherent_vector(int truncation, cplx beta) {
    Vector v(truncation);
    // amplitudes beta^n / sqrt(n!) built recursively, then normalized
    cplx amp = 1.0;
    for (int n = 0; n < truncation; ++n) {
        v(n) = amp;
        amp *= beta / std::sqrt(double(n + 1));
    }
    v /= v.norm();
    return v;
}

int required_thermal_truncation(double nbar, double tail_tol) {
    const double q = nbar / (nbar + 1.0);
    if (q <= 0.0) return 2;
    int n = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(q)));
    return std::max(n, 2);
}

FieldState prepare_state(const std::vector<FieldMode>& modes, const FieldStateSpec& spec,
                         Eigen::Index dim_cap) {
    if (modes.empty()) throw ArgumentError("prepare_state: need at least one mode");
    Eigen::Index dim = 1;
    std::vector<Eigen::Index> dims;
    for (const auto& m : modes) {
        check_mode(m);
        dim *= m.truncation;
        dims.push_back(m.truncation);
        if (dim > dim_cap)
            throw SizeError("field space dimension exceeds cap " + std::to_string(dim_cap));
    }
    const std::size_t nm = modes.size();
    auto need = [&](std::size_t have, const char* what) {
        if (have != nm)
            throw ArgumentError(std::string("prepare_state: ") + what +
                                " must list one entry per mode");
    };

    Matrix rho;
    if (spec.kind == "vacuum") {
        rho = product_rho(modes, [&](std::size_t j) {
            return pure_to_rho(fock_vector(modes[j].truncation, 0));
        });
    } else if (spec.kind == "fock") {
        need(spec.fock_n.size(), "fock_n");
        rho = product_rho(modes, [&](std::size_t j) {
            const int n = spec.fock_n[j];
            if (n < 0 || n > modes[j].truncation - 2)
                throw ArgumentError("fock: occupation must satisfy 0 <= n <= truncation-2");
            return pure_to_rho(fock_vector(modes[j].truncation, n));
        });
    } else if (spec.kind == "coherent") {
        need(spec.amplitudes.size(), "amplitudes");
        rho = product_rho(modes, [&](std::size_t j) {
            coherent_guard(modes[j].truncation, spec.amplitudes[j]);
            return pure_to_rho(coherent_vector(modes[j].truncation, spec.amplitudes[j]));
        });
    } else if (spec.kind == "thermal") {
        need(spec.nbar.size(), "nbar");
        rho = product_rho(modes, [&](std::size_t j) {
            return thermal_mode_rho(modes[j].truncation, spec.nbar[j]);
        });
    } else if (spec.kind == "squeezed") {
        need(spec.squeeze_r.size(), "squeeze_r");
        need(spec.squeeze_phi.size(), "squeeze_phi");
        rho = product_rho(modes, [&](std::size_t j) {
            return squeezed_mode_rho(modes[j].truncation, spec.squeeze_r[j], spec.squeeze_phi[j]);
        });
    } else if (spec.kind == "cat") {
        need(spec.amplitudes.size(), "amplitudes");
        rho = product_rho(modes, [&](std::size_t j) {
            return cat_mode_rho(modes[j].truncation, spec.amplitudes[j], spec.cat_parity);
        });
    } else if (spec.kind == "mixture") {
        if (spec.mixture.empty()) throw ArgumentError("mixture: no components");
        rho = Matrix::Zero(dim, dim);
        double wsum = 0.0;
        for (const auto& [betas, w] : spec.mixture) {
            need(betas.size(), "mixture amplitudes");
            if (w < 0.0) throw ArgumentError("mixture: weights must be nonnegative");
            Matrix comp = product_rho(modes, [&](std::size_t j) {
                coherent_guard(modes[j].truncation, betas[j]);
                return pure_to_rho(coherent_vector(modes[j].truncation, betas[j]));
            });
            rho += w * comp;
            wsum += w;
        }
        if (std::abs(wsum - 1.0) > 1e-10)
            throw ArgumentError("mixture: weights must sum to 1");
    } else if (spec.kind == "custom") {
        if (!spec.custom_rho) throw ArgumentError("custom: density matrix missing");
        rho = *spec.custom_rho;
        if (rho.rows() != dim) throw ArgumentError("custom: density matrix dimension mismatch");
        if (!is_hermitian(rho)) throw ArgumentError("custom: density matrix must be Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw ArgumentError("custom: density matrix must be positive semidefinite");
    } else {
        throw ArgumentError("prepare_state: unknown state kind '" + spec.kind + "'");
    }

    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-12)
        throw NumericalError("prepare_state: density matrix trace is not 1");
    if (!is_hermitian(rho)) throw NumericalError("prepare_state: density matrix not Hermitian");

    FieldState st;
    st.modes = modes;
    st.rho_f = OperatorMatrix(std::move(rho), std::move(dims));
    st.spec = spec;
    return st;
}

Matrix mode_operator(const FieldState& state, std::size_t j, LadderOp which) {
    if (j >= state.modes.size()) throw ArgumentError("mode_operator: bad mode index");
    Matrix a = ladder_annihilate(state.modes[j].truncation);
    if (which == LadderOp::create) a = Matrix(a.adjoint());
    return state.modes[j].coupling * embed(state.modes, j, a);
}

cplx field_correlator(const FieldState& state,
                      const std::vector<std::pair<std::size_t, LadderOp>>& ops) {
    if (ops.empty()) throw ArgumentError("field_correlator: empty operator sequence");
    Matrix prod = Matrix::Identity(state.dim(), state.dim());
    for (const auto& [j, which] : ops) prod = prod * mode_operator(state, j, which);
    return (state.rho_f.m * prod).trace();
}

std::vector<cplx> classical_amplitudes(const FieldState& state) {
    std::vector<cplx> out(state.modes.size());
    for (std::size_t j = 0; j < state.modes.size(); ++j)
        out[j] = (state.rho_f.m * mode_operator(state, j, LadderOp::annihilate)).trace();
    return out;
}

namespace {

// Gauss-Legendre nodes/weights on [0, 1] by Newton iteration on P_n.
void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        x[i] = 0.5 * (t + 1.0);
        w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace

PRepresentation p_representation(const FieldState& state, int radial_points, int angular_points,
                                 double radius_sigmas) {
    PRepresentation rep;
    const auto& kind = state.spec.kind;
    const std::size_t nm = state.modes.size();

    if (kind == "coherent") {
        rep.form = "discrete";
        rep.atoms.push_back({state.spec.amplitudes, 1.0});
        rep.normalization = 1.0;
        return rep;
    }
    if (kind == "mixture") {
        rep.form = "discrete";
        for (const auto& [betas, w] : state.spec.mixture) rep.atoms.push_back({betas, w});
        rep.normalization = 1.0;
        return rep;
    }
    if (kind == "vacuum") {
        rep.form = "discrete";
        rep.atoms.push_back({std::vector<cplx>(nm, cplx(0.0, 0.0)), 1.0});
        rep.normalization = 1.0;
        return rep;
    }
    if (kind == "thermal") {
        // P(beta) = exp(-|beta|^2/nbar)/(pi nbar) per mode, discretized on a
        // polar grid: Gauss-Legendre radially, uniform midpoint angularly.
        rep.form = "gaussian_grid";
        std::vector<std::vector<std::pair<cplx, double>>> per_mode(nm);
        for (std::size_t j = 0; j < nm; ++j) {
            const double nbar = state.spec.nbar[j];
            if (nbar <= 0.0) {
                per_mode[j].push_back({cplx(0.0, 0.0), 1.0});
                continue;
            }
            const double rmax = radius_sigmas * std::sqrt(nbar);
            std::vector<double> xr, wr;
            gauss_legendre_unit(radial_points, xr, wr);
            for (int ir = 0; ir < radial_points; ++ir) {
                const double r = xr[ir] * rmax;
                const double radial = std::exp(-r * r / nbar) / (kPi * nbar) * r * (wr[ir] * rmax);
                for (int ia = 0; ia < angular_points; ++ia) {
                    const double th = 2.0 * kPi * (ia + 0.5) / angular_points;
                    per_mode[j].push_back(
                        {r * std::exp(cplx(0.0, th)), radial * 2.0 * kPi / angular_points});
                }
            }
        }
        // tensor the per-mode atom lists
        std::vector<PAtom> atoms{{std::vector<cplx>{}, 1.0}};
        for (std::size_t j = 0; j < nm; ++j) {
            std::vector<PAtom> next;
            next.reserve(atoms.size() * per_mode[j].size());
            for (const auto& base : atoms)
                for (const auto& [b, w] : per_mode[j]) {
                    PAtom a = base;
                    a.beta.push_back(b);
                    a.weight *= w;
                    next.push_back(std::move(a));
                }
            atoms = std::move(next);
        }
        double raw = 0.0;
        for (const auto& a : atoms) raw += a.weight;
        for (auto& a : atoms) a.weight /= raw;
        rep.atoms = std::move(atoms);
        rep.normalization = raw;
        return rep;
    }
    throw UnsupportedRepresentationError(
        "p_representation: state kind '" + kind +
        "' has a P distribution more singular than a function (derivatives of deltas); "
        "only coherent, mixture-of-coherent and thermal states are supported");
}

}  // namespace qspec

#pragma once

#include "qspec/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qspec {

/// One discrete field mode. `coupling` is the field amplitude per photon
/// (all mode quantization prefactors absorbed), `truncation` the Fock cutoff.
struct FieldMode {
    double frequency = 1.0;
    double coupling = 1.0;
    int truncation = 16;
};

enum class LadderOp { annihilate, create };

struct FieldStateSpec {
    std::string kind;                       // vacuum|fock|coherent|thermal|squeezed|cat|mixture|custom
    std::vector<int> fock_n;                // fock
    std::vector<cplx> amplitudes;           // coherent, cat (per mode)
    std::vector<double> nbar;               // thermal
    std::vector<double> squeeze_r, squeeze_phi;  // squeezed
    int cat_parity = +1;                    // cat: +1 even, -1 odd
    std::vector<std::pair<std::vector<cplx>, double>> mixture;  // (per-mode amplitudes, weight)
    std::optional<Matrix> custom_rho;
};

struct FieldState {
    std::vector<FieldMode> modes;
    OperatorMatrix rho_f;
    FieldStateSpec spec;

    Eigen::Index dim() const { return rho_f.dim(); }
};

/// One coherent-state atom of a quasiprobability decomposition.
struct PAtom {
    std::vector<cplx> beta;  // per-mode amplitude
    double weight = 0.0;
};

struct PRepresentation {
    std::vector<PAtom> atoms;
    std::string form;       // "discrete" or "gaussian_grid"
    double normalization = 0.0;  // raw weight sum before normalization
};

FieldState prepare_state(const std::vector<FieldMode>& modes, const FieldStateSpec& spec,
                         Eigen::Index dim_cap = kDefaultDimCap);

/// Coupling-weighted ladder operator of mode j embedded in the full mode space.
Matrix mode_operator(const FieldState& state, std::size_t j, LadderOp which);

/// trace(rho_f * O1 O2 ... Ok) with the operators in the given left-to-right order.
cplx field_correlator(const FieldState& state,
                      const std::vector<std::pair<std::size_t, LadderOp>>& ops);

/// Per-mode coupling-weighted mean field, lambda_j * tr(rho a_j).
std::vector<cplx> classical_amplitudes(const FieldState& state);

/// Coherent-state decomposition of the field state. Supported for coherent
/// states, mixtures of coherent states, and thermal states (polar quadrature
/// of the Gaussian weight). Other kinds throw UnsupportedRepresentationError.
PRepresentation p_representation(const FieldState& state, int radial_points = 32,
                                 int angular_points = 32, double radius_sigmas = 5.0);

/// Truncated-space coherent column vector (renormalized Poisson amplitudes).
Vector coherent_vector(int truncation, cplx beta);

int required_thermal_truncation(double nbar, double tail_tol = 1e-9);

}  // namespace qspec

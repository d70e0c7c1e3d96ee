#pragma once

#include "qspec/field.hpp"
#include "qspec/matter.hpp"
#include "qspec/types.hpp"

#include <string>
#include <vector>

namespace qspec {

enum class Sign { plus, minus };

/// Ordered superoperator string V_{s1}(t1) V_{s2}(t2) ... acting to the right.
/// Times must be descending left to right (latest operator leftmost). For
/// observable correlators the leftmost sign must be '+': the trace of a
/// commutator vanishes identically.
struct SignSequence {
    std::vector<Sign> signs;
    std::vector<double> times;

    void validate(bool observable) const {
        if (signs.empty() || signs.size() != times.size())
            throw ArgumentError("SignSequence: signs and times must match and be nonempty");
        for (std::size_t k = 1; k < times.size(); ++k)
            if (times[k] > times[k - 1] + 1e-12)
                throw ArgumentError("SignSequence: times must be descending left to right");
        if (observable && signs.front() == Sign::minus)
            throw ArgumentError(
                "SignSequence: observable correlator cannot start with '-' (trace of a "
                "commutator is zero)");
    }
};

/// tr( V_{s1}(t1) V_{s2}(t2) ... state0 ) with V-(t)X = [V(t),X] and
/// V+(t)X = (V(t)X + XV(t))/2, V(t) the free Heisenberg dipole.
cplx super_correlator(const MatterSystem& sys, const Matrix& state0, const SignSequence& seq,
                      bool observable = false);

/// One spectral line of a frequency-resolved correlator: positions E_b - E_a,
/// weights from the Lehmann representation against the supplied state.
struct SpectralLine {
    double omega = 0.0;
    cplx weight{};
};

/// Lines of Integral dt e^{i w t} tr(V(t) X), X = nested superoperator string
/// applied to state0 at time zero. Lines with |weight| below `weight_tol`
/// relative to the largest are dropped; degenerate positions are merged.
std::vector<SpectralLine> correlator_lines(const MatterSystem& sys, const Matrix& state0,
                                           const std::vector<Sign>& right_signs,
                                           double weight_tol = 1e-12);

struct FdtResonance {
    double omega = 0.0;       // resonance position E_b - E_a > 0
    double c_pp_weight = 0.0;  // line weight of <V+ V+>
    double c_pm_weight = 0.0;  // line weight of <V+ V->
    double ratio = 0.0;
    double coth_half = 0.0;   // coth(beta omega / 2) / 2
};

struct FdtTable {
    double beta = 0.0;
    std::vector<FdtResonance> resonances;
    std::vector<double> grid;        // scan frequencies
    std::vector<double> c_pp;        // broadened C++(w), Lorentzian lines of width epsilon
    std::vector<double> c_pm;        // broadened C+-(w)
};

/// Fluctuation and response spectra of the thermal state: exact Lehmann line
/// weights per resonance plus Lorentzian-broadened curves on the grid.
FdtTable fdt_check(const MatterSystem& sys, double beta, const std::vector<double>& grid);

/// Same line bookkeeping against an arbitrary state (negative controls).
std::vector<FdtResonance> fdt_resonances(const MatterSystem& sys, const Matrix& state0,
                                         double beta);

struct TwoAtomRow {
    std::string driving;      // "classical" or "quantum"
    std::string atom2;        // "present", "absent", "detuned"
    double atom2_omega = 0.0;
    double atom1_excited = 0.0;
};

struct TwoAtomReport {
    std::vector<TwoAtomRow> rows;
    double classical_spread = 0.0;  // max |pop - baseline| over classical rows
    double quantum_shift = 0.0;     // |pop(present) - pop(detuned)| with quantized field
};

/// Drives atom 1 and atom 2 (noninteracting) through a shared single field
/// mode and reports atom 1's excited population after time t_final.
/// Classical driving replaces the field operator by its c-number amplitude,
/// so the joint propagator factorizes and atom 1 cannot depend on atom 2.
/// With the quantized field the shared mode correlates the atoms.
TwoAtomReport two_atom_demo(const MatterSystem& atom1, const MatterSystem& atom2,
                            const FieldState& field, double detuned_omega0, double t_final,
                            int steps = 4000);

}  // namespace qspec

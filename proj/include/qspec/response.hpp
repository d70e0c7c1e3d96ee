#pragma once

#include "qspec/field.hpp"
#include "qspec/matter.hpp"
#include "qspec/types.hpp"

#include <array>
#include <map>

namespace qspec {

enum class Diagram { i, ii, iii, iv };

/// Frequency arguments of one third-order loop pathway. omega1..3 are signed:
/// +mode frequency for a photon annihilated from the field, -mode frequency
/// for a photon created, on every vertex of either branch. Time translation
/// invariance requires omega1 + omega2 + omega3 == omega.
struct PathwaySpec {
    Diagram diagram = Diagram::i;
    double omega = 0.0;
    double omega1 = 0.0, omega2 = 0.0, omega3 = 0.0;

    void validate() const {
        if (std::abs(omega1 + omega2 + omega3 - omega) > 1e-9)
            throw ArgumentError("PathwaySpec: omega1+omega2+omega3 must equal omega");
    }
};

struct SignalRow {
    double omega = 0.0;
    double total = 0.0;                    // imaginary part of the summed contributions
    std::array<cplx, 4> pathways{};        // per-diagram complex contributions
    std::array<cplx, 4> gates{};           // field gates of the reference sign pattern
};

struct SignalTable {
    std::vector<SignalRow> rows;
};

/// Matter factor <V G V G V G V> of one loop diagram, traced against state0.
///
/// Convention: all frequency arguments are annihilation-positive on both
/// branches. Forward-branch propagators are retarded at the accumulated
/// frequency, backward-branch ones advanced at the negated accumulated
/// frequency, and each propagator's broadening is epsilon times the number of
/// signed frequencies it accumulates. With this bookkeeping the four-diagram
/// sum reproduces the adiabatically switched perturbation expansion at finite
/// epsilon (checked against direct propagation in the tests), and the
/// permutation-symmetrized chi3 of a harmonic ladder cancels identically.
///
/// state0 must be stationary (diagonal in the energy basis); each populated
/// eigenstate is evaluated with level energies referenced to its own, since
/// only energy differences enter the response.
cplx pathway(const MatterSystem& sys, const Matrix& state0, const PathwaySpec& spec);

/// Sum of the four pathways at one ordered argument set.
cplx chi3(const MatterSystem& sys, const Matrix& state0, double omega, double omega1,
          double omega2, double omega3);

/// Mean of chi3 over the six orderings of (omega1, omega2, omega3). Only this
/// combination is probed by classical fields.
cplx chi3_symmetrized(const MatterSystem& sys, const Matrix& state0, double omega, double omega1,
                      double omega2, double omega3);

/// chi1(w) = <V G(w) V> + <V Gadv(-w) V>, both loop branches at first order.
cplx chi1(const MatterSystem& sys, const Matrix& state0, double omega);

/// Signed interaction tuple: three (mode, sign) picks with sum of signed
/// frequencies equal to the detection frequency.
struct SignedTuple {
    std::array<std::size_t, 3> mode{};
    std::array<int, 3> sign{};  // +1 annihilate, -1 create
};

std::vector<SignedTuple> enumerate_tuples(const std::vector<FieldMode>& modes,
                                          double omega_detect, double tol = 1e-9);

/// Third-order frequency-dispersed photon flux into the detected mode,
/// one row at the detected mode's frequency. Each signed tuple is gated per
/// diagram by the field correlator with the detected creation operator at the
/// diagram's loop position.
SignalRow signal_quantum(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                         std::size_t detect);

/// Same assembly with every field factor replaced by the classical mean-field
/// amplitudes; all four diagrams then share one gate.
SignalRow signal_classical(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                           std::size_t detect);

/// signal_classical evaluated at explicit per-mode amplitudes (used for
/// coherent-state atoms of a P decomposition).
SignalRow signal_classical_amps(const MatterSystem& sys, const Matrix& state0,
                                const std::vector<FieldMode>& modes,
                                const std::vector<cplx>& amps, std::size_t detect);

/// Quasiprobability average of the classical signal over the coherent-state
/// decomposition of the field.
SignalRow signal_p_averaged(const MatterSystem& sys, const Matrix& state0,
                            const FieldState& field, std::size_t detect);

enum class SignalKind { quantum, classical, p_averaged };

/// First-order analog: gates <Edag E> and <E Edag> on the two linear matter
/// terms <V G(w) V> and <V Gadv(-w) V>. Pathway slots i and ii hold the two
/// orderings; slots iii and iv are zero.
SignalRow linear_signal(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                        std::size_t detect, SignalKind kind);

/// Sweep the detected mode's frequency across a grid. The Fock-space state is
/// frequency independent, so only the mode metadata changes along the scan.
SignalTable signal_scan(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                        std::size_t detect, const std::vector<double>& omegas, SignalKind kind,
                        int order = 3, int threads = 1);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace qspec

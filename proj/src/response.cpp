#include "qspec/response.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace qspec {

namespace {

struct Resolvent {
    double arg = 0.0;
    GreenKind kind = GreenKind::retarded;
    int depth = 1;  // number of signed frequencies accumulated; scales epsilon
};

// Diagonal populations of a stationary (energy-diagonal) state. Coherences
// would make the initial state non-stationary, which the frequency-domain
// formulas cannot describe.
std::vector<std::pair<Eigen::Index, double>> stationary_populations(const MatterSystem& sys,
                                                                    const Matrix& state0) {
    if (state0.rows() != sys.dim())
        throw ArgumentError("response: initial state dimension mismatch");
    Matrix off = state0;
    off.diagonal().setZero();
    if (off.norm() > 1e-10 * std::max(state0.norm(), 1e-300))
        throw ArgumentError(
            "response: initial matter state must be diagonal in the energy basis");
    std::vector<std::pair<Eigen::Index, double>> pops;
    for (Eigen::Index a = 0; a < sys.dim(); ++a) {
        const double p = state0(a, a).real();
        if (std::abs(p) > 1e-14) pops.push_back({a, p});
    }
    return pops;
}

// sum_a p_a <a| V D1 V D2 V D3 V |a>, with every level energy referenced to
// the initial eigenstate (only differences E_k - E_a enter the response).
cplx chain_eval(const MatterSystem& sys, const Matrix& state0,
                const std::array<Resolvent, 3>& props) {
    const Matrix& v = sys.dipole;
    cplx total(0.0, 0.0);
    for (const auto& [a, p] : stationary_populations(sys, state0)) {
        const double e_ref = sys.energies(a);
        Vector w = v.col(a);
        for (int q = 2; q >= 0; --q) {
            const double eta = sys.epsilon * props[q].depth;
            const cplx ieta =
                (props[q].kind == GreenKind::retarded) ? cplx(0.0, eta) : cplx(0.0, -eta);
            for (Eigen::Index k = 0; k < sys.dim(); ++k)
                w(k) /= (props[q].arg - (sys.energies(k) - e_ref) + ieta);
            w = v * w;
        }
        total += p * w(a);
    }
    return total;
}

}  // namespace

cplx pathway(const MatterSystem& sys, const Matrix& state0, const PathwaySpec& spec) {
    spec.validate();
    const double w = spec.omega;
    const double w1 = spec.omega1, w2 = spec.omega2, w3 = spec.omega3;
    using GK = GreenKind;
    switch (spec.diagram) {
        case Diagram::i:
            // all interactions on the forward branch, detection last
            return chain_eval(sys, state0,
                              {Resolvent{w, GK::retarded, 3}, Resolvent{w - w1, GK::retarded, 2},
                               Resolvent{w3, GK::retarded, 1}});
        case Diagram::ii:
            return chain_eval(sys, state0,
                              {Resolvent{-w3, GK::advanced, 1},
                               Resolvent{w - w3, GK::retarded, 2},
                               Resolvent{w2, GK::retarded, 1}});
        case Diagram::iii:
            return chain_eval(sys, state0,
                              {Resolvent{-w3, GK::advanced, 1},
                               Resolvent{w1 - w, GK::advanced, 2},
                               Resolvent{w1, GK::retarded, 1}});
        case Diagram::iv:
            return chain_eval(sys, state0,
                              {Resolvent{-w3, GK::advanced, 1},
                               Resolvent{w1 - w, GK::advanced, 2},
                               Resolvent{-w, GK::advanced, 3}});
    }
    throw ArgumentError("pathway: bad diagram");
}

cplx chi3(const MatterSystem& sys, const Matrix& state0, double omega, double omega1,
          double omega2, double omega3) {
    cplx total(0.0, 0.0);
    for (Diagram d : {Diagram::i, Diagram::ii, Diagram::iii, Diagram::iv})
        total += pathway(sys, state0, {d, omega, omega1, omega2, omega3});
    return total;
}

cplx chi3_symmetrized(const MatterSystem& sys, const Matrix& state0, double omega, double omega1,
                      double omega2, double omega3) {
    std::array<double, 3> w{omega1, omega2, omega3};
    std::sort(w.begin(), w.end());
    cplx total(0.0, 0.0);
    int count = 0;
    do {
        total += chi3(sys, state0, omega, w[0], w[1], w[2]);
        ++count;
    } while (std::next_permutation(w.begin(), w.end()));
    return total / double(count);
}

cplx chi1(const MatterSystem& sys, const Matrix& state0, double omega) {
    const Matrix& v = sys.dipole;
    cplx total(0.0, 0.0);
    for (const auto& [a, p] : stationary_populations(sys, state0)) {
        const double e_ref = sys.energies(a);
        for (Eigen::Index b = 0; b < sys.dim(); ++b) {
            const double wba = sys.energies(b) - e_ref;
            const cplx vv = v(a, b) * v(b, a);
            total += p * vv *
                     (1.0 / cplx(omega - wba, sys.epsilon) +
                      1.0 / cplx(-omega - wba, -sys.epsilon));
        }
    }
    return total;
}

std::vector<SignedTuple> enumerate_tuples(const std::vector<FieldMode>& modes,
                                          double omega_detect, double tol) {
    std::vector<SignedTuple> out;
    const std::size_t nm = modes.size();
    for (std::size_t j1 = 0; j1 < nm; ++j1)
        for (int s1 : {+1, -1})
            for (std::size_t j2 = 0; j2 < nm; ++j2)
                for (int s2 : {+1, -1})
                    for (std::size_t j3 = 0; j3 < nm; ++j3)
                        for (int s3 : {+1, -1}) {
                            const double sum = s1 * modes[j1].frequency +
                                               s2 * modes[j2].frequency +
                                               s3 * modes[j3].frequency;
                            if (std::abs(sum - omega_detect) < tol)
                                out.push_back({{j1, j2, j3}, {s1, s2, s3}});
                        }
    return out;
}

namespace {

using OpSeq = std::vector<std::pair<std::size_t, LadderOp>>;

std::pair<std::size_t, LadderOp> tuple_op(const SignedTuple& t, int slot) {
    return {t.mode[slot], t.sign[slot] > 0 ? LadderOp::annihilate : LadderOp::create};
}

// Operator order of the four gates; the detected creation operator sits at
// the fourth, third, second and first loop position respectively.
OpSeq gate_ops(Diagram d, const SignedTuple& t, std::size_t detect) {
    const auto dcr = std::make_pair(detect, LadderOp::create);
    switch (d) {
        case Diagram::i: return {dcr, tuple_op(t, 0), tuple_op(t, 1), tuple_op(t, 2)};
        case Diagram::ii: return {tuple_op(t, 2), dcr, tuple_op(t, 0), tuple_op(t, 1)};
        case Diagram::iii: return {tuple_op(t, 2), tuple_op(t, 1), dcr, tuple_op(t, 0)};
        case Diagram::iv: return {tuple_op(t, 2), tuple_op(t, 1), tuple_op(t, 0), dcr};
    }
    throw ArgumentError("gate_ops: bad diagram");
}

struct GateCache {
    std::map<OpSeq, cplx> values;
    const FieldState* field = nullptr;
    cplx get(const OpSeq& ops) {
        auto it = values.find(ops);
        if (it != values.end()) return it->second;
        const cplx v = field_correlator(*field, ops);
        values.emplace(ops, v);
        return v;
    }
};

cplx classical_gate(const std::vector<cplx>& amps, const SignedTuple& t, std::size_t detect) {
    cplx g = std::conj(amps[detect]);
    for (int k = 0; k < 3; ++k)
        g *= (t.sign[k] > 0) ? amps[t.mode[k]] : std::conj(amps[t.mode[k]]);
    return g;
}

SignalRow assemble_third_order(const MatterSystem& sys, const Matrix& state0,
                               const std::vector<FieldMode>& modes, std::size_t detect,
                               const std::function<cplx(Diagram, const SignedTuple&)>& gate) {
    if (detect >= modes.size()) throw ArgumentError("signal: bad detection mode index");
    SignalRow row;
    row.omega = modes[detect].frequency;
    const auto tuples = enumerate_tuples(modes, row.omega);
    constexpr std::array<Diagram, 4> kDiagrams{Diagram::i, Diagram::ii, Diagram::iii,
                                               Diagram::iv};
    for (const auto& t : tuples) {
        PathwaySpec spec;
        spec.omega = row.omega;
        spec.omega1 = t.sign[0] * modes[t.mode[0]].frequency;
        spec.omega2 = t.sign[1] * modes[t.mode[1]].frequency;
        spec.omega3 = t.sign[2] * modes[t.mode[2]].frequency;
        for (std::size_t k = 0; k < 4; ++k) {
            spec.diagram = kDiagrams[k];
            const cplx g = gate(spec.diagram, t);
            row.gates[k] += g;  // tuple-summed diagram gate, the full-E correlator
            if (g == cplx(0.0, 0.0)) continue;
            row.pathways[k] += g * pathway(sys, state0, spec);
        }
    }
    row.total = (row.pathways[0] + row.pathways[1] + row.pathways[2] + row.pathways[3]).imag();
    return row;
}

}  // namespace

SignalRow signal_quantum(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                         std::size_t detect) {
    GateCache cache;
    cache.field = &field;
    return assemble_third_order(sys, state0, field.modes, detect,
                                [&](Diagram d, const SignedTuple& t) {
                                    return cache.get(gate_ops(d, t, detect));
                                });
}

SignalRow signal_classical_amps(const MatterSystem& sys, const Matrix& state0,
                                const std::vector<FieldMode>& modes,
                                const std::vector<cplx>& amps, std::size_t detect) {
    return assemble_third_order(sys, state0, modes, detect,
                                [&](Diagram, const SignedTuple& t) {
                                    return classical_gate(amps, t, detect);
                                });
}

SignalRow signal_classical(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                           std::size_t detect) {
    return signal_classical_amps(sys, state0, field.modes, classical_amplitudes(field), detect);
}

SignalRow signal_p_averaged(const MatterSystem& sys, const Matrix& state0,
                            const FieldState& field, std::size_t detect) {
    const PRepresentation rep = p_representation(field);
    std::vector<std::vector<cplx>> atom_amps(rep.atoms.size());
    for (std::size_t i = 0; i < rep.atoms.size(); ++i) {
        atom_amps[i].resize(rep.atoms[i].beta.size());
        for (std::size_t j = 0; j < atom_amps[i].size(); ++j)
            atom_amps[i][j] = field.modes[j].coupling * rep.atoms[i].beta[j];
    }
    // the matter pathways are atom independent, so averaging the classical
    // gate over the decomposition first gives the same weighted sum
    return assemble_third_order(sys, state0, field.modes, detect,
                                [&](Diagram, const SignedTuple& t) {
                                    cplx g(0.0, 0.0);
                                    for (std::size_t i = 0; i < rep.atoms.size(); ++i)
                                        g += rep.atoms[i].weight *
                                             classical_gate(atom_amps[i], t, detect);
                                    return g;
                                });
}

namespace {

SignalRow linear_from_gates(const MatterSystem& sys, const Matrix& state0, double omega,
                            cplx gate_ket, cplx gate_bra) {
    const Matrix& v = sys.dipole;
    SignalRow row;
    row.omega = omega;
    cplx ket(0.0, 0.0), bra(0.0, 0.0);
    for (const auto& [a, p] : stationary_populations(sys, state0)) {
        const double e_ref = sys.energies(a);
        for (Eigen::Index b = 0; b < sys.dim(); ++b) {
            const double wba = sys.energies(b) - e_ref;
            const cplx vv = v(a, b) * v(b, a);
            ket += p * vv / cplx(omega - wba, sys.epsilon);
            bra += p * vv / cplx(-omega - wba, -sys.epsilon);
        }
    }
    row.pathways[0] = gate_ket * ket;
    row.pathways[1] = gate_bra * bra;
    row.gates[0] = gate_ket;
    row.gates[1] = gate_bra;
    row.total = (row.pathways[0] + row.pathways[1]).imag();
    return row;
}

}  // namespace

SignalRow linear_signal(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                        std::size_t detect, SignalKind kind) {
    if (detect >= field.modes.size()) throw ArgumentError("linear_signal: bad mode index");
    const double wd = field.modes[detect].frequency;

    if (kind == SignalKind::p_averaged) {
        const PRepresentation rep = p_representation(field);
        SignalRow acc;
        acc.omega = wd;
        for (const auto& atom : rep.atoms) {
            cplx g(0.0, 0.0);
            for (std::size_t j = 0; j < field.modes.size(); ++j)
                if (std::abs(field.modes[j].frequency - wd) < 1e-9)
                    g += std::conj(field.modes[detect].coupling * atom.beta[detect]) *
                         field.modes[j].coupling * atom.beta[j];
            const SignalRow part = linear_from_gates(sys, state0, wd, g, g);
            for (std::size_t k = 0; k < 2; ++k) acc.pathways[k] += atom.weight * part.pathways[k];
            for (std::size_t k = 0; k < 2; ++k) acc.gates[k] += atom.weight * part.gates[k];
        }
        acc.total = (acc.pathways[0] + acc.pathways[1]).imag();
        return acc;
    }

    cplx g_ket(0.0, 0.0), g_bra(0.0, 0.0);
    if (kind == SignalKind::quantum) {
        for (std::size_t j = 0; j < field.modes.size(); ++j) {
            if (std::abs(field.modes[j].frequency - wd) > 1e-9) continue;
            g_ket += field_correlator(field, {{detect, LadderOp::create},
                                              {j, LadderOp::annihilate}});
            g_bra += field_correlator(field, {{j, LadderOp::annihilate},
                                              {detect, LadderOp::create}});
        }
    } else {
        const auto amps = classical_amplitudes(field);
        for (std::size_t j = 0; j < field.modes.size(); ++j)
            if (std::abs(field.modes[j].frequency - wd) < 1e-9)
                g_ket += std::conj(amps[detect]) * amps[j];
        g_bra = g_ket;
    }
    return linear_from_gates(sys, state0, wd, g_ket, g_bra);
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw ArgumentError("linspace: need at least one point");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / double(n - 1);
    return out;
}

SignalTable signal_scan(const MatterSystem& sys, const Matrix& state0, const FieldState& field,
                        std::size_t detect, const std::vector<double>& omegas, SignalKind kind,
                        int order, int threads) {
    if (order != 1 && order != 3) throw ArgumentError("signal_scan: order must be 1 or 3");
    SignalTable table;
    table.rows.resize(omegas.size());
    auto compute = [&](std::size_t i) {
        FieldState scanned = field;
        scanned.modes[detect].frequency = omegas[i];
        if (order == 1) {
            table.rows[i] = linear_signal(sys, state0, scanned, detect, kind);
        } else {
            switch (kind) {
                case SignalKind::quantum:
                    table.rows[i] = signal_quantum(sys, state0, scanned, detect);
                    break;
                case SignalKind::classical:
                    table.rows[i] = signal_classical(sys, state0, scanned, detect);
                    break;
                case SignalKind::p_averaged:
                    table.rows[i] = signal_p_averaged(sys, state0, scanned, detect);
                    break;
            }
        }
    };
    const int nt = std::max(1, threads);
    if (nt == 1) {
        for (std::size_t i = 0; i < omegas.size(); ++i) compute(i);
    } else {
        // static interleaved partition; each row writes only its own slot
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < omegas.size(); i += nt) compute(i);
            });
        for (auto& th : pool) th.join();
    }
    return table;
}

}  // namespace qspec

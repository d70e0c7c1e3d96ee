#include "qspec/joint.hpp"
#include "qspec/response.hpp"
#include "qspec/superop.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qspec;

namespace {

LadderOp ladder_from_string(const std::string& s) {
    if (s == "a" || s == "annihilate") return LadderOp::annihilate;
    if (s == "adag" || s == "create") return LadderOp::create;
    throw ArgumentError("ladder operator must be 'a' or 'adag'");
}

Diagram diagram_from_string(const std::string& s) {
    if (s == "i") return Diagram::i;
    if (s == "ii") return Diagram::ii;
    if (s == "iii") return Diagram::iii;
    if (s == "iv") return Diagram::iv;
    throw ArgumentError("diagram must be one of 'i', 'ii', 'iii', 'iv'");
}

SignalKind kind_from_string(const std::string& s) {
    if (s == "quantum") return SignalKind::quantum;
    if (s == "classical") return SignalKind::classical;
    if (s == "p_averaged") return SignalKind::p_averaged;
    throw ArgumentError("signal kind must be 'quantum', 'classical' or 'p_averaged'");
}

FieldState prepare_from_kwargs(const std::vector<FieldMode>& modes, const std::string& kind,
                               const std::vector<cplx>& amplitudes,
                               const std::vector<double>& nbar, const std::vector<int>& fock_n,
                               const std::vector<double>& squeeze_r,
                               const std::vector<double>& squeeze_phi, int cat_parity) {
    FieldStateSpec spec;
    spec.kind = kind;
    spec.amplitudes = amplitudes;
    spec.nbar = nbar;
    spec.fock_n = fock_n;
    spec.squeeze_r = squeeze_r;
    spec.squeeze_phi = squeeze_phi;
    spec.cat_parity = cat_parity;
    return prepare_state(modes, spec);
}

py::dict row_to_dict(const SignalRow& row) {
    py::dict d;
    d["omega"] = row.omega;
    d["total"] = row.total;
    d["pathways"] = row.pathways;
    d["gates"] = row.gates;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Frequency-dispersed nonlinear optical signals of multilevel systems driven by "
              "quantized light";

    py::register_exception<SizeError>(m, "SizeError");
    py::register_exception<ArgumentError>(m, "ArgumentError");
    py::register_exception<UnsupportedRepresentationError>(m, "UnsupportedRepresentationError");
    py::register_exception<NumericalError>(m, "NumericalError");

    py::class_<MatterSystem>(m, "MatterSystem")
        .def_readonly("energies", &MatterSystem::energies)
        .def_readonly("dipole", &MatterSystem::dipole)
        .def_readonly("dipole_lowering", &MatterSystem::dipole_lowering)
        .def_readonly("epsilon", &MatterSystem::epsilon)
        .def_readonly("label", &MatterSystem::label)
        .def("hamiltonian", &MatterSystem::hamiltonian);

    m.def("two_level", &two_level, py::arg("omega0"), py::arg("mu"), py::arg("epsilon") = 0.05);
    m.def("ladder", &ladder, py::arg("spacings"), py::arg("dipoles"), py::arg("epsilon") = 0.05);
    m.def("harmonic", &harmonic, py::arg("levels"), py::arg("omega0"), py::arg("mu"),
          py::arg("epsilon") = 0.05);
    m.def("ground_state", &ground_state);
    m.def("thermal_state", &thermal_state, py::arg("system"), py::arg("beta"));

    py::class_<FieldMode>(m, "FieldMode")
        .def(py::init([](double omega, double coupling, int truncation) {
                 return FieldMode{omega, coupling, truncation};
             }),
             py::arg("omega"), py::arg("coupling") = 1.0, py::arg("truncation") = 16)
        .def_readwrite("omega", &FieldMode::frequency)
        .def_readwrite("coupling", &FieldMode::coupling)
        .def_readwrite("truncation", &FieldMode::truncation);

    py::class_<FieldState>(m, "FieldState")
        .def_property_readonly("rho", [](const FieldState& s) { return s.rho_f.m; })
        .def_property_readonly("modes", [](const FieldState& s) { return s.modes; })
        .def_property_readonly("kind", [](const FieldState& s) { return s.spec.kind; });

    m.def("prepare_state", &prepare_from_kwargs, py::arg("modes"), py::arg("kind"),
          py::arg("amplitudes") = std::vector<cplx>{}, py::arg("nbar") = std::vector<double>{},
          py::arg("fock_n") = std::vector<int>{}, py::arg("squeeze_r") = std::vector<double>{},
          py::arg("squeeze_phi") = std::vector<double>{}, py::arg("cat_parity") = 1,
          "Prepare a product field state of the given kind.");

    m.def("classical_amplitudes", &classical_amplitudes);
    m.def(
        "field_correlator",
        [](const FieldState& state, const std::vector<std::pair<std::size_t, std::string>>& ops) {
            std::vector<std::pair<std::size_t, LadderOp>> seq;
            for (const auto& [j, which] : ops) seq.emplace_back(j, ladder_from_string(which));
            return field_correlator(state, seq);
        },
        py::arg("state"), py::arg("ops"),
        "Ordered field correlator; ops is a list of (mode, 'a'|'adag').");
    m.def(
        "p_representation",
        [](const FieldState& state) {
            const PRepresentation rep = p_representation(state);
            py::list atoms;
            for (const auto& a : rep.atoms) atoms.append(py::make_tuple(a.beta, a.weight));
            py::dict d;
            d["atoms"] = atoms;
            d["form"] = rep.form;
            d["normalization"] = rep.normalization;
            return d;
        },
        "Coherent-state decomposition (atoms of (amplitudes, weight)).");

    m.def(
        "pathway",
        [](const MatterSystem& sys, const Matrix& state0, const std::string& diagram,
           double omega, double omega1, double omega2, double omega3) {
            return pathway(sys, state0,
                           {diagram_from_string(diagram), omega, omega1, omega2, omega3});
        },
        py::arg("system"), py::arg("state0"), py::arg("diagram"), py::arg("omega"),
        py::arg("omega1"), py::arg("omega2"), py::arg("omega3"));
    m.def("chi1", &chi1, py::arg("system"), py::arg("state0"), py::arg("omega"));
    m.def("chi3", &chi3, py::arg("system"), py::arg("state0"), py::arg("omega"),
          py::arg("omega1"), py::arg("omega2"), py::arg("omega3"));
    m.def("chi3_symmetrized", &chi3_symmetrized, py::arg("system"), py::arg("state0"),
          py::arg("omega"), py::arg("omega1"), py::arg("omega2"), py::arg("omega3"));

    m.def(
        "signal",
        [](const MatterSystem& sys, const Matrix& state0, const FieldState& field,
           std::size_t detect, const std::string& kind, int order) {
            if (order == 1)
                return row_to_dict(
                    linear_signal(sys, state0, field, detect, kind_from_string(kind)));
            switch (kind_from_string(kind)) {
                case SignalKind::quantum:
                    return row_to_dict(signal_quantum(sys, state0, field, detect));
                case SignalKind::classical:
                    return row_to_dict(signal_classical(sys, state0, field, detect));
                default:
                    return row_to_dict(signal_p_averaged(sys, state0, field, detect));
            }
        },
        py::arg("system"), py::arg("state0"), py::arg("field"), py::arg("detect") = 0,
        py::arg("kind") = "quantum", py::arg("order") = 3,
        "One signal row at the detected mode's frequency.");
    m.def(
        "signal_scan",
        [](const MatterSystem& sys, const Matrix& state0, const FieldState& field,
           std::size_t detect, const std::vector<double>& omegas, const std::string& kind,
           int order, int threads) {
            const SignalTable table = signal_scan(sys, state0, field, detect, omegas,
                                                  kind_from_string(kind), order, threads);
            py::list rows;
            for (const auto& r : table.rows) rows.append(row_to_dict(r));
            return rows;
        },
        py::arg("system"), py::arg("state0"), py::arg("field"), py::arg("detect"),
        py::arg("omegas"), py::arg("kind") = "quantum", py::arg("order") = 3,
        py::arg("threads") = 1);

    m.def(
        "super_correlator",
        [](const MatterSystem& sys, const Matrix& state0, const std::string& signs,
           const std::vector<double>& times, bool observable) {
            SignSequence seq;
            for (char c : signs) {
                if (c == '+')
                    seq.signs.push_back(Sign::plus);
                else if (c == '-')
                    seq.signs.push_back(Sign::minus);
                else
                    throw ArgumentError("signs must be a string of '+' and '-'");
            }
            seq.times = times;
            return super_correlator(sys, state0, seq, observable);
        },
        py::arg("system"), py::arg("state0"), py::arg("signs"), py::arg("times"),
        py::arg("observable") = false,
        "Superoperator correlator, e.g. signs='+-' times=[t, 0.0].");

    py::class_<FdtResonance>(m, "FdtResonance")
        .def_readonly("omega", &FdtResonance::omega)
        .def_readonly("c_pp_weight", &FdtResonance::c_pp_weight)
        .def_readonly("c_pm_weight", &FdtResonance::c_pm_weight)
        .def_readonly("ratio", &FdtResonance::ratio)
        .def_readonly("coth_half", &FdtResonance::coth_half);
    py::class_<FdtTable>(m, "FdtTable")
        .def_readonly("beta", &FdtTable::beta)
        .def_readonly("resonances", &FdtTable::resonances)
        .def_readonly("grid", &FdtTable::grid)
        .def_readonly("c_pp", &FdtTable::c_pp)
        .def_readonly("c_pm", &FdtTable::c_pm);
    m.def("fdt_check", &fdt_check, py::arg("system"), py::arg("beta"),
          py::arg("grid") = std::vector<double>{});

    py::class_<TwoAtomRow>(m, "TwoAtomRow")
        .def_readonly("driving", &TwoAtomRow::driving)
        .def_readonly("atom2", &TwoAtomRow::atom2)
        .def_readonly("atom2_omega", &TwoAtomRow::atom2_omega)
        .def_readonly("atom1_excited", &TwoAtomRow::atom1_excited);
    py::class_<TwoAtomReport>(m, "TwoAtomReport")
        .def_readonly("rows", &TwoAtomReport::rows)
        .def_readonly("classical_spread", &TwoAtomReport::classical_spread)
        .def_readonly("quantum_shift", &TwoAtomReport::quantum_shift);
    m.def("two_atom_demo", &two_atom_demo, py::arg("atom1"), py::arg("atom2"), py::arg("field"),
          py::arg("detuned_omega0"), py::arg("t_final"), py::arg("steps") = 4000);

    py::class_<FluxResult>(m, "FluxResult")
        .def_readonly("flux", &FluxResult::flux)
        .def_readonly("times", &FluxResult::times)
        .def_readonly("photon_number", &FluxResult::photon_number);
    m.def(
        "photon_flux",
        [](const MatterSystem& sys, const FieldState& field, double coupling_scale,
           std::size_t mode, double t_final, int samples) {
            const JointModel model = build_joint_model(sys, field, coupling_scale);
            return photon_flux(model, mode, t_final, samples);
        },
        py::arg("system"), py::arg("field"), py::arg("coupling_scale") = 1.0,
        py::arg("mode") = 0, py::arg("t_final") = 40.0, py::arg("samples") = 9,
        "Windowed photon flux from exact joint-space propagation.");

    py::class_<OrderFit>(m, "OrderFit")
        .def_readonly("a2", &OrderFit::a2)
        .def_readonly("a4", &OrderFit::a4)
        .def_readonly("a6", &OrderFit::a6)
        .def_readonly("residual_rms", &OrderFit::residual_rms)
        .def_readonly("condition", &OrderFit::condition);
    m.def("order_fit", &order_fit, py::arg("scales"), py::arg("values"));

    m.attr("__version__") = QSPEC_VERSION;
}

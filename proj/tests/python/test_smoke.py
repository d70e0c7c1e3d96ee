import math

import pytest

import qspec


def test_version():
    assert qspec.__version__


def test_chi1_two_level_resonance():
    sys = qspec.two_level(1.0, 1.0, 0.05)
    rho = qspec.ground_state(sys)
    val = qspec.chi1(sys, rho, 1.0)
    expect = 1.0 / complex(0.0, 0.05) - 1.0 / complex(2.0, 0.05)
    assert abs(val - expect) < 1e-12 * abs(expect)


def test_fdt_ratio():
    sys = qspec.two_level(1.0, 1.0)
    table = qspec.fdt_check(sys, 2.0)
    (res,) = table.resonances
    assert abs(res.ratio - 0.5 / math.tanh(1.0)) < 1e-6


def test_quantum_vs_p_averaged_thermal():
    sys = qspec.two_level(1.0, 1.0, 0.01)
    rho = qspec.ground_state(sys)
    field = qspec.prepare_state([qspec.FieldMode(1.0, 0.5, 32)], "thermal", nbar=[1.0])
    q = qspec.signal(sys, rho, field, kind="quantum", order=3)
    p = qspec.signal(sys, rho, field, kind="p_averaged", order=3)
    assert abs(q["total"] - p["total"]) > 1e-3 * abs(q["total"])
    gates = q["gates"]
    for a in range(4):
        for b in range(a + 1, 4):
            gap = abs(gates[a] - gates[b]) / max(abs(gates[a]), abs(gates[b]))
            assert gap > 0.01
    # linear order agrees
    ql = qspec.signal(sys, rho, field, kind="quantum", order=1)
    pl = qspec.signal(sys, rho, field, kind="p_averaged", order=1)
    assert abs(ql["total"] - pl["total"]) < 1e-4 * abs(ql["total"])


def test_harmonic_chi3_vanishes():
    osc = qspec.harmonic(12, 1.0, 1.0, 0.05)
    two = qspec.two_level(1.0, 1.0, 0.05)
    h = qspec.chi3_symmetrized(osc, qspec.ground_state(osc), 0.93, 0.93, -0.93, 0.93)
    t = qspec.chi3_symmetrized(two, qspec.ground_state(two), 0.93, 0.93, -0.93, 0.93)
    assert abs(h) < 1e-8 * abs(t)


def test_vacuum_signal_tiny():
    sys = qspec.two_level(1.0, 1.0, 0.05)
    rho = qspec.ground_state(sys)
    vac = qspec.prepare_state([qspec.FieldMode(1.0, 1.0, 12)], "vacuum")
    drv = qspec.prepare_state(
        [qspec.FieldMode(1.0, 1.0, 16)], "coherent", amplitudes=[1.0 + 0.0j]
    )
    sv = qspec.signal(sys, rho, vac)
    sd = qspec.signal(sys, rho, drv)
    assert abs(sv["total"]) < 1e-4 * abs(sd["total"])


def test_unsupported_p_representation():
    fock = qspec.prepare_state([qspec.FieldMode(1.0, 1.0, 12)], "fock", fock_n=[2])
    with pytest.raises(qspec.UnsupportedRepresentationError):
        qspec.p_representation(fock)


def test_super_correlator_commutator_trace():
    sys = qspec.ladder([1.0, 0.9], [1.0, 0.8])
    rho = qspec.thermal_state(sys, 1.3)
    val = qspec.super_correlator(sys, rho, "--", [1.0, 0.0])
    assert abs(val) < 1e-13

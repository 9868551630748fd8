import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qseal import kernels
from qseal.kernels import available_backends

BACKENDS = available_backends()


def random_state(n, seed):
    g = np.random.default_rng(seed)
    v = g.normal(size=1 << n) + 1j * g.normal(size=1 << n)
    return v / np.linalg.norm(v)


def test_compiled_backend_is_built():
    assert "cython" in BACKENDS, "compiled kernels missing; run pip install -e ."
    assert kernels.BACKEND == "cython"


def test_forced_fallback(monkeypatch):
    import importlib

    monkeypatch.setenv("QSEAL_KERNELS", "numpy")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "numpy"
    finally:
        monkeypatch.delenv("QSEAL_KERNELS")
        importlib.reload(kernels)


def _pair():
    if len(BACKENDS) < 2:
        pytest.skip("only one backend available")
    return BACKENDS["numpy"], BACKENDS["cython"]


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_gate_kernels_agree(n, seed, data):
    py, cy = _pair()
    psi = random_state(n, seed)
    qs = data.draw(st.permutations(range(n)))
    u = random_state(2, seed + 1)
    a, b = psi.copy(), psi.copy()
    py.apply_1q(a, qs[0], *u)
    cy.apply_1q(b, qs[0], *u)
    np.testing.assert_allclose(a, b, atol=1e-12)
    if n >= 2:
        py.apply_cnot(a, qs[0], qs[1])
        cy.apply_cnot(b, qs[0], qs[1])
        np.testing.assert_allclose(a, b, atol=1e-12)
    if n >= 3:
        py.apply_cswap(a, qs[0], qs[1], qs[2])
        cy.apply_cswap(b, qs[0], qs[1], qs[2])
        np.testing.assert_allclose(a, b, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1), data=st.data())
def test_pauli_and_measurement_kernels_agree(n, seed, data):
    py, cy = _pair()
    psi = random_state(n, seed)
    full = (1 << n) - 1
    xm = data.draw(st.integers(0, full))
    zm = data.draw(st.integers(0, full))
    ny = bin(xm & zm).count("1")
    out_a, out_b = np.empty_like(psi), np.empty_like(psi)
    py.apply_pauli(psi, out_a, xm, zm, ny)
    cy.apply_pauli(psi, out_b, xm, zm, ny)
    np.testing.assert_allclose(out_a, out_b, atol=1e-12)
    assert py.pauli_expectation(psi, xm, zm, ny) == pytest.approx(cy.pauli_expectation(psi, xm, zm, ny), abs=1e-12)
    q = data.draw(st.integers(0, n - 1))
    assert py.prob_one(psi, q) == pytest.approx(cy.prob_one(psi, q), abs=1e-12)
    qubits = np.array(data.draw(st.permutations(range(n)))[: data.draw(st.integers(1, n))], dtype=np.int64)
    np.testing.assert_allclose(py.marginal(psi, qubits), cy.marginal(psi, qubits), atol=1e-12)
    mask = data.draw(st.integers(1, full))
    value = data.draw(st.integers(0, full)) & mask
    a, b = psi.copy(), psi.copy()
    assert py.collapse(a, mask, value) == pytest.approx(cy.collapse(b, mask, value), abs=1e-12)
    np.testing.assert_allclose(a, b, atol=1e-12)
    thr = data.draw(st.integers(0, n))
    assert py.masked_weight(psi, mask, thr) == pytest.approx(cy.masked_weight(psi, mask, thr), abs=1e-12)
    for upper in (False, True):
        a, b = psi.copy(), psi.copy()
        wa = py.majority_project(a, mask, thr, upper)
        wb = cy.majority_project(b, mask, thr, upper)
        assert wa == pytest.approx(wb, abs=1e-12)
        np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_known_values(name):
    k = BACKENDS[name]
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1
    s = 2**-0.5
    k.apply_1q(psi, 0, s, s, s, -s)
    k.apply_cnot(psi, 0, 1)
    np.testing.assert_allclose(psi, [s, 0, 0, s], atol=1e-15)
    assert k.prob_one(psi, 1) == pytest.approx(0.5)
    # Y on qubit 0 of |00>: i|01>
    out = np.empty_like(psi)
    e = np.array([1, 0, 0, 0], dtype=complex)
    k.apply_pauli(e, out, 1, 1, 1)
    np.testing.assert_allclose(out, [0, 1j, 0, 0])
    m = k.marginal(psi, np.array([1, 0], dtype=np.int64))
    np.testing.assert_allclose(m, [0.5, 0, 0, 0.5], atol=1e-15)

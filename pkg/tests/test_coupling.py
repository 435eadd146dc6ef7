import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_st, random_unitary, unitary_with_minus_ones
from qgvertex.coupling import (
    Coupling,
    STForm,
    coupling_unitary,
    couplings_equivalent,
    delta_coupling,
    delta_coupling_direct,
    delta_unitary,
    equivalence_defect,
    from_unitary,
    parameter_count,
    st_forms_close,
    st_to_coupling,
    to_st_form,
    validate,
)
from qgvertex.errors import DimensionMismatch, NotAdmissible, NotUnitary, RankAmbiguous
from qgvertex.linalg import is_hermitian, is_unitary, rank_tol

DIRICHLET2 = Coupling(np.eye(2), np.zeros((2, 2)))
NEUMANN2 = Coupling(np.zeros((2, 2)), np.eye(2))


def test_validate_examples():
    for c in (Coupling(np.eye(3), np.zeros((3, 3))), Coupling(np.zeros((3, 3)), np.eye(3))):
        assert validate(c).admissible
    rep = validate(Coupling(np.zeros((2, 2)), np.zeros((2, 2))))
    assert rep.rank_found == 0 and not rep.rank_ok


def test_validate_detects_non_hermitian_product():
    rep = validate(Coupling(np.eye(2), np.array([[0, 1], [0, 0]])))
    assert rep.rank_ok and not rep.hermitian_ok


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Coupling(np.eye(2), np.eye(3))


def test_from_unitary_extremes():
    c = from_unitary(np.eye(2))
    assert np.allclose(c.A, 0) and np.allclose(c.B, 2j * np.eye(2))
    c = from_unitary(-np.eye(2))
    assert np.allclose(c.A, -2 * np.eye(2)) and np.allclose(c.B, 0)
    with pytest.raises(NotUnitary):
        from_unitary(2 * np.eye(2))


def test_delta_unitary_values():
    assert np.allclose(delta_unitary(1, 0.0), [[1]])
    assert np.allclose(delta_unitary(2, 0.0), [[0, 1], [1, 0]])
    u = delta_unitary(3, 2.0)
    assert np.isclose(u[0, 0], 2 / (3 + 2j) - 1) and np.isclose(u[0, 1], 2 / (3 + 2j))
    assert np.linalg.norm(u @ u.conj().T - np.eye(3)) < 1e-12


@pytest.mark.parametrize("n, alpha, T", [(3, 2.0, [[1, 1]]), (2, -1.0, [[1]]), (1, 0.0, np.zeros((1, 0)))])
def test_delta_coupling_fields(n, alpha, T):
    f = delta_coupling(n, alpha)
    assert f.m == 1 and f.perm == tuple(range(1, n + 1))
    assert np.allclose(f.S, [[alpha]]) and np.allclose(f.T, T)


def test_st_to_coupling_delta_blocks():
    c = st_to_coupling(delta_coupling(2, 0.0))
    assert np.allclose(c.A, [[0, 0], [1, -1]])
    assert np.allclose(c.B, [[1, 1], [0, 0]])


def test_st_to_coupling_extreme_ranks():
    d = st_to_coupling(STForm(2, 0, (1, 2), np.zeros((0, 0)), np.zeros((0, 2))))
    assert np.allclose(d.A, -np.eye(2)) and np.allclose(d.B, 0)
    nm = st_to_coupling(STForm(2, 2, (1, 2), np.zeros((2, 2)), np.zeros((2, 0))))
    assert np.allclose(nm.A, 0) and np.allclose(nm.B, np.eye(2))


def test_to_st_form_examples():
    f = to_st_form(st_to_coupling(delta_coupling(3, 2.0)))
    assert st_forms_close(f, delta_coupling(3, 2.0), 1e-12)
    f = to_st_form(Coupling(np.eye(3), np.zeros((3, 3))))
    assert f.m == 0 and f.S.shape == (0, 0) and f.T.shape == (0, 3) and f.perm == (1, 2, 3)
    f = to_st_form(from_unitary(delta_unitary(4, -1.5)))
    assert f.m == 1 and f.perm == (1, 2, 3, 4)
    assert np.allclose(f.S, [[-1.5]], atol=1e-9) and np.allclose(f.T, [[1, 1, 1]], atol=1e-9)


def test_to_st_form_picks_lexicographically_smallest_columns():
    # column 1 of B is zero, so the first independent column is 2
    c = Coupling(np.array([[0, 0], [1, 0]]), np.array([[0, 1], [0, 0]]))
    f = to_st_form(c)
    assert f.m == 1 and f.perm == (2, 1)
    assert couplings_equivalent(st_to_coupling(f), c)


def test_to_st_form_rejects_inadmissible():
    with pytest.raises(NotAdmissible):
        to_st_form(Coupling(np.zeros((2, 2)), np.zeros((2, 2))))


def test_rank_ambiguous():
    b = np.diag([1.0, 3e-11])
    with pytest.raises(RankAmbiguous):
        to_st_form(Coupling(np.diag([0.0, 1.0]), b))


def test_equivalence_examples():
    rng = np.random.default_rng(11)
    c = from_unitary(random_unitary(4, rng))
    C = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert couplings_equivalent(c, Coupling(C @ c.A, C @ c.B))
    assert not couplings_equivalent(DIRICHLET2, NEUMANN2)
    assert couplings_equivalent(from_unitary(delta_unitary(3, 2.0)), st_to_coupling(delta_coupling(3, 2.0)))
    assert equivalence_defect(c, Coupling(C @ c.A, C @ c.B)) < 1e-9


def test_coupling_unitary_recovers_u():
    u = random_unitary(3, np.random.default_rng(2))
    assert np.allclose(coupling_unitary(from_unitary(u)), u)


@pytest.mark.parametrize("n, m, expected", [(3, 3, 9), (3, 0, 0), (4, 1, 7)])
def test_parameter_count(n, m, expected):
    f = STForm(n, m, tuple(range(1, n + 1)), np.zeros((m, m)), np.zeros((m, n - m)))
    assert parameter_count(f) == expected


def test_stform_validation():
    with pytest.raises(ValueError):
        STForm(2, 1, (1, 1), [[0]], [[1]])
    with pytest.raises(ValueError):
        STForm(2, 2, (1, 2), [[0, 1], [0, 0]], np.zeros((2, 0)))
    with pytest.raises(ValueError):
        STForm(2, 3, (1, 2), np.zeros((3, 3)), np.zeros((3, 0)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.data())
def test_round_trip_from_lower_rank_unitaries(seed, n, data):
    k = data.draw(st.integers(0, n))
    rng = np.random.default_rng(seed)
    c = from_unitary(unitary_with_minus_ones(n, k, rng))
    f = to_st_form(c)
    assert f.m == n - k == rank_tol(c.B)
    assert is_hermitian(f.S, 1e-9)
    back = st_to_coupling(f)
    assert validate(back).admissible
    assert couplings_equivalent(back, c)
    assert equivalence_defect(back, c) < 1e-9


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.data())
def test_st_form_is_a_fixed_point(seed, n, data):
    m = data.draw(st.integers(0, n))
    f = random_st(n, m, np.random.default_rng(seed), shuffle=False)
    g = to_st_form(st_to_coupling(f))
    assert st_forms_close(f, g, 1e-8)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 5), st.data())
def test_permutation_canonical(seed, n, data):
    m = data.draw(st.integers(0, n))
    rng = np.random.default_rng(seed)
    c = st_to_coupling(random_st(n, m, rng))
    f = to_st_form(c)
    p = rng.permutation(n)
    g = to_st_form(Coupling(c.A[:, p], c.B[:, p]))
    # express g's permutation in the original edge labels
    mapped = STForm(n, g.m, tuple(int(p[k - 1]) + 1 for k in g.perm), g.S, g.T)
    assert g.m == f.m
    assert couplings_equivalent(st_to_coupling(mapped), c)
    if mapped.perm == f.perm:
        assert st_forms_close(mapped, f, 1e-8)


def test_permutation_canonical_when_column_choice_is_forced():
    # with T = 0 only the column of edge 2 is nonzero in B, so every relabelling selects it
    f = STForm(3, 1, (2, 1, 3), [[0.7]], [[0.0, 0.0]])
    c = st_to_coupling(f)
    for p in ([0, 1, 2], [2, 0, 1], [1, 2, 0]):
        g = to_st_form(Coupling(c.A[:, p], c.B[:, p]))
        assert g.m == 1 and p[g.perm[0] - 1] + 1 == 2
        assert np.allclose(g.S, f.S) and np.allclose(g.T, 0)


def test_minus_one_multiplicity_gives_m():
    rng = np.random.default_rng(4)
    u = unitary_with_minus_ones(5, 2, rng)
    assert is_unitary(u)
    k = int(np.sum(np.abs(np.linalg.eigvals(u) + 1) < 1e-8))
    assert to_st_form(from_unitary(u)).m == 5 - k

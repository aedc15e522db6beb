import numpy as np
import pytest

from fracdual.caputo import (
    FractionalOrder,
    GridFunction,
    MethodKind,
    caputo_byparts,
    caputo_substitution,
)
from fracdual.operators import fractional_operator, operator_for
from fracdual.stencils import difference_matrix_3pt, differentiation_matrix


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.9, 1.3, 1.7])
def test_substitution_rows_match_scalar_op(alpha):
    o = FractionalOrder(alpha)
    h, m = 0.02, 40
    rng = np.random.default_rng(1)
    u = np.cumsum(rng.normal(size=m + 1)) * h  # smooth-ish walk
    A = operator_for(MethodKind.SUBSTITUTION, o, h, m)
    gn = differentiation_matrix(m, h, o.n) @ u
    got = A @ u
    for k in range(1, m + 1):
        want = caputo_substitution(GridFunction(h, gn), o, k)
        assert got[k] == pytest.approx(want, rel=1e-12, abs=1e-12)
    assert got[0] == 0.0


@pytest.mark.parametrize("alpha", [0.3, 0.9, 1.3, 1.7])
def test_byparts_rows_match_scalar_op(alpha):
    o = FractionalOrder(alpha)
    h, m = 0.02, 40
    rng = np.random.default_rng(2)
    u = np.cumsum(rng.normal(size=m + 1)) * h
    A = operator_for(MethodKind.BYPARTS, o, h, m)
    gn = differentiation_matrix(m, h, o.n) @ u
    gp = difference_matrix_3pt(m, h) @ gn
    got = A @ u
    for k in range(1, m + 1):
        want = caputo_byparts(float(gn[0]), GridFunction(h, gp), o, k)
        assert got[k] == pytest.approx(want, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("method", list(MethodKind))
@pytest.mark.parametrize("alpha", [0.5, 1.7])
def test_annihilates_constants(method, alpha):
    o = FractionalOrder(alpha)
    A = operator_for(method, o, 0.01, 30)
    out = A @ np.full(31, 3.7)
    assert np.max(np.abs(out)) <= 1e-9


def test_operator_cache_reuses_arrays():
    a = fractional_operator(MethodKind.SUBSTITUTION, 0.5, 1, 0.01, 20)
    b = fractional_operator(MethodKind.SUBSTITUTION, 0.5, 1, 0.01, 20)
    assert a is b
    assert not a.flags.writeable


def test_byparts_tracks_substitution_on_smooth_data():
    # the by-parts operator is the summation-by-parts dual of substitution;
    # on smooth data the two differ only through the boundary-derivative
    # channel, far below either one's own magnitude
    o = FractionalOrder(0.9)
    h, m = 1e-3, 1000
    x = np.arange(m + 1) * h
    u = -0.28 * x**2 + 0.05 * x**3
    S = operator_for(MethodKind.SUBSTITUTION, o, h, m)
    B = operator_for(MethodKind.BYPARTS, o, h, m)
    ds = np.max(np.abs((B - S) @ u))
    magnitude = np.max(np.abs(S @ u))
    assert ds <= 1e-5 * max(1.0, magnitude)

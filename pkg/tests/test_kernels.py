import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from wlskit import _kernels_py, kernels

try:
    from wlskit import _kernels as compiled
except ImportError:  # extension not built in this environment
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")

small = st.integers(-20, 20)


@st.composite
def matrices(draw, max_dim=6, entries=small):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    return [[draw(entries) for _ in range(n)] for _ in range(m)], m, n


@needs_compiled
@given(matrices())
@settings(max_examples=300, deadline=None)
def test_smith_backends_identical(data):
    rows, m, n = data
    reference = _kernels_py.smith(rows, m, n)
    assert kernels.smith(rows, m, n) == reference
    try:
        assert compiled.smith(rows, m, n) == reference
    except OverflowError:
        pass  # int64 overflow is reported, never silently wrapped


@needs_compiled
@given(matrices(), st.booleans())
@settings(max_examples=300, deadline=None)
def test_echelon_backends_identical(data, transform):
    rows, m, n = data
    reference = _kernels_py.echelon(rows, n, transform)
    assert kernels.echelon(rows, n, transform) == reference
    try:
        assert compiled.echelon(rows, n, transform) == reference
    except OverflowError:
        pass  # transforms can outgrow int64; the dispatcher then reruns in Python


@needs_compiled
def test_overflow_falls_back_to_unbounded_integers():
    big = 2**70
    rows = [[big, 3], [5, big + 1]]
    with pytest.raises(OverflowError):
        compiled.smith(rows, 2, 2)
    assert kernels.smith(rows, 2, 2) == _kernels_py.smith(rows, 2, 2)


@needs_compiled
def test_growth_during_reduction_falls_back():
    rng = random.Random(5)
    rows = [[rng.randint(-2**40, 2**40) for _ in range(6)] for _ in range(6)]
    assert kernels.echelon(rows, 6, True) == _kernels_py.echelon(rows, 6, True)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_environment_variable_forces_python():
    env = dict(os.environ, WLSKIT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from wlskit import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"

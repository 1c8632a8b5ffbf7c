import numpy as np
import pytest

from qlll.errors import (
    BadTraceError,
    DimensionCapError,
    DimensionMismatchError,
    NotFiniteError,
    NotHermitianError,
    NotPositiveError,
    ParseError,
    ValidationError,
)
from qlll.linalg import (
    DEFAULT_DIM_CAP,
    DEFAULT_TOL,
    DIM_CAP_ENV,
    FULL,
    PARTIAL,
    ToleranceConfig,
    adjoint,
    as_matrix,
    check_dimension,
    dimension_cap,
    kron,
    matmul,
    trace,
    validate_density,
)


def test_default_tolerances():
    assert DEFAULT_TOL.herm == 1e-10
    assert DEFAULT_TOL.psd == 1e-9
    assert DEFAULT_TOL.trace == 1e-10
    assert DEFAULT_TOL.complete == 1e-9
    assert DEFAULT_TOL.prob == 1e-9
    assert DEFAULT_TOL.ind == 1e-7


def test_tolerance_config_rejects_nonpositive():
    with pytest.raises(ValidationError):
        ToleranceConfig(prob=0.0)
    with pytest.raises(ValidationError):
        ToleranceConfig(herm=-1e-12)


def test_tolerance_config_frozen():
    with pytest.raises(Exception):
        DEFAULT_TOL.prob = 1.0  # type: ignore[misc]


def test_as_matrix_accepts_lists_and_freezes():
    m = as_matrix([[1, 0], [0, 1]])
    assert m.dtype == np.complex128
    assert not m.flags.writeable
    with pytest.raises(ValueError):
        m[0, 0] = 2.0


def test_as_matrix_rejects_non_square():
    with pytest.raises(DimensionMismatchError):
        as_matrix([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(DimensionMismatchError):
        as_matrix([1, 2, 3])


def test_as_matrix_rejects_non_finite():
    with pytest.raises(NotFiniteError):
        as_matrix([[np.nan, 0], [0, 1]])
    with pytest.raises(NotFiniteError):
        as_matrix([[np.inf, 0], [0, 1]])


def test_matmul_adjoint_trace_kron_against_numpy():
    rng = np.random.default_rng(11)
    a = as_matrix(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    b = as_matrix(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    assert np.allclose(matmul(a, b), a @ b)
    assert np.allclose(adjoint(a), a.conj().T)
    assert trace(a) == pytest.approx(complex(np.trace(a)))
    assert np.allclose(kron(a, b), np.kron(a, b))


def test_validate_density_accepts_pure_qubit():
    rho = validate_density([[0.5, 0.5], [0.5, 0.5]], FULL)
    assert rho.dim == 2
    assert rho.trace == pytest.approx(1.0)
    assert rho.kind is FULL


def test_validate_density_hermitizes_tiny_asymmetry():
    # asymmetry below the herm tolerance is averaged away, not rejected
    rho = validate_density([[0.5, 0.5 + 1e-13], [0.5 - 1e-13, 0.5]], FULL)
    assert np.allclose(rho.matrix, rho.matrix.conj().T)


def test_validate_density_rejects_non_hermitian():
    with pytest.raises(NotHermitianError) as exc:
        validate_density([[0.0, 1.0], [0.0, 1.0]], FULL)
    assert exc.value.code == "NotHermitian"
    assert exc.value.to_json()["type"] == "NotHermitian"


def test_validate_density_rejects_negative_eigenvalue():
    with pytest.raises(NotPositiveError):
        validate_density([[1.5, 0.0], [0.0, -0.5]], FULL)


def test_validate_density_rejects_bad_trace():
    with pytest.raises(BadTraceError):
        validate_density([[0.6, 0.0], [0.0, 0.6]], FULL)


def test_partial_density_allows_trace_below_one():
    rho = validate_density([[0.3, 0.0], [0.0, 0.2]], PARTIAL)
    assert rho.trace == pytest.approx(0.5)
    with pytest.raises(BadTraceError):
        validate_density([[0.8, 0.0], [0.0, 0.6]], PARTIAL)


def test_dimension_cap_default(monkeypatch):
    monkeypatch.delenv(DIM_CAP_ENV, raising=False)
    assert dimension_cap() == DEFAULT_DIM_CAP == 64
    check_dimension(64)
    with pytest.raises(DimensionCapError) as exc:
        check_dimension(65)
    assert exc.value.code == "DimensionCapExceeded"


def test_dimension_cap_env_override(monkeypatch):
    monkeypatch.setenv(DIM_CAP_ENV, "8")
    assert dimension_cap() == 8
    with pytest.raises(DimensionCapError):
        check_dimension(9)
    monkeypatch.setenv(DIM_CAP_ENV, "not-a-number")
    with pytest.raises(ParseError):
        dimension_cap()
    monkeypatch.setenv(DIM_CAP_ENV, "0")
    with pytest.raises(ParseError):
        dimension_cap()

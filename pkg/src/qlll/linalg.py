"""Dense complex linear algebra and physical-validity checks.

All matrices are square ``numpy.complex128`` arrays.  Arrays entering through
:func:`as_matrix` are copied, checked for finiteness, and frozen
(``writeable=False``); operations return fresh frozen arrays, so values can be
shared freely across threads.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadTraceError,
    DimensionCapError,
    DimensionMismatchError,
    NotFiniteError,
    NotHermitianError,
    NotPositiveError,
    ParseError,
    ValidationError,
)

DEFAULT_DIM_CAP = 64
DIM_CAP_ENV = "QLLL_DIM_CAP"

FULL = "full"
PARTIAL = "partial"


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used by validity checks and probability queries.

    Attributes
    ----------
    herm : float
        Max-norm slack for Hermiticity checks and imaginary parts of traces.
    psd : float
        How far below zero an eigenvalue may drift before the matrix is
        rejected as not positive semidefinite.
    trace : float
        Slack for trace conditions (``= 1`` for full states, ``<= 1`` for
        partial ones).
    complete : float
        Max-norm slack for the measurement completeness relation.
    prob : float
        Probabilities may stray this far outside [0, 1] before being treated
        as an internal inconsistency; values at most this size count as zero
        when they appear in a conditioning denominator.
    ind : float
        Two conditional probabilities closer than this are considered equal
        by independence queries.
    """

    herm: float = 1e-10
    psd: float = 1e-9
    trace: float = 1e-10
    complete: float = 1e-9
    prob: float = 1e-9
    ind: float = 1e-7

    def __post_init__(self):
        for name, value in (
            ("herm", self.herm),
            ("psd", self.psd),
            ("trace", self.trace),
            ("complete", self.complete),
            ("prob", self.prob),
            ("ind", self.ind),
        ):
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValidationError(
                    f"tolerance {name!r} must be strictly positive, got {value!r}"
                )


DEFAULT_TOL = ToleranceConfig()


def dimension_cap() -> int:
    """Current Hilbert-space dimension cap (env ``QLLL_DIM_CAP``, default 64)."""
    raw = os.environ.get(DIM_CAP_ENV)
    if raw is None:
        return DEFAULT_DIM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ParseError(f"{DIM_CAP_ENV} must be an integer, got {raw!r}")
    if cap < 1:
        raise ParseError(f"{DIM_CAP_ENV} must be positive, got {cap}")
    return cap


def check_dimension(dim: int) -> None:
    cap = dimension_cap()
    if dim > cap:
        raise DimensionCapError(
            f"dimension {dim} exceeds the cap {cap} (set {DIM_CAP_ENV} to raise it)",
            dim=dim,
            cap=cap,
        )


def _freeze(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


def as_matrix(data) -> np.ndarray:
    """Copy *data* into a frozen square ``complex128`` matrix.

    Raises
    ------
    DimensionMismatchError
        If the input is not a non-empty square 2-D array.
    NotFiniteError
        If any entry has a NaN or infinite real or imaginary part.
    """
    try:
        m = np.array(data, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"cannot interpret input as a complex matrix: {exc}")
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchError(
            f"expected a non-empty square matrix, got shape {m.shape}", shape=list(m.shape)
        )
    if not np.isfinite(m).all():
        raise NotFiniteError("matrix entries must be finite")
    return _freeze(m)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"matmul needs equal square shapes, got {a.shape} and {b.shape}"
        )
    return _freeze(a @ b)


def adjoint(a: np.ndarray) -> np.ndarray:
    return _freeze(a.conj().T.copy())


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(a))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _freeze(np.kron(a, b))


@dataclass(frozen=True)
class DensityOperator:
    """A validated density operator; build it with :func:`validate_density`.

    ``kind`` is ``"full"`` (trace one) or ``"partial"`` (trace at most one,
    the un-normalized states produced by event super-operators).
    """

    matrix: np.ndarray
    kind: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def validate_density(matrix, kind: str = FULL, tol: ToleranceConfig = DEFAULT_TOL) -> DensityOperator:
    """Check Hermiticity, positivity and trace; return a ``DensityOperator``.

    Positivity is decided on the eigenvalues of the hermitized matrix
    ``(M + M^dagger)/2`` so the check is well-posed under rounding.

    Raises
    ------
    NotHermitianError, NotPositiveError, BadTraceError
        With the offending residual in ``detail``.
    """
    if kind not in (FULL, PARTIAL):
        raise ValidationError(f"kind must be 'full' or 'partial', got {kind!r}")
    m = as_matrix(matrix)
    check_dimension(m.shape[0])
    herm_residual = float(np.abs(m - m.conj().T).max())
    if herm_residual > tol.herm:
        raise NotHermitianError(
            f"matrix is not Hermitian: max residual {herm_residual:.3e} > {tol.herm:.1e}",
            residual=herm_residual,
        )
    hermitized = (m + m.conj().T) / 2
    eigenvalues = np.linalg.eigvalsh(hermitized)
    lowest = float(eigenvalues[0])
    if lowest < -tol.psd:
        raise NotPositiveError(
            f"matrix has eigenvalue {lowest:.3e} below -{tol.psd:.1e}",
            min_eigenvalue=lowest,
        )
    tr = np.trace(m)
    if abs(tr.imag) > tol.herm:
        raise BadTraceError(
            f"trace has imaginary part {tr.imag:.3e}", trace_imag=float(tr.imag)
        )
    tr_re = float(tr.real)
    if kind == FULL and abs(tr_re - 1.0) > tol.trace:
        raise BadTraceError(
            f"full state must have unit trace, got {tr_re!r}", trace=tr_re
        )
    if kind == PARTIAL and tr_re > 1.0 + tol.trace:
        raise BadTraceError(
            f"partial state must have trace at most one, got {tr_re!r}", trace=tr_re
        )
    return DensityOperator(matrix=m, kind=kind)

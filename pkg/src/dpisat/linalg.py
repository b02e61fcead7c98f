"""Validated complex Hermitian matrix types, clustered spectral
decompositions, and matrix functions of Hermitian operators.

Matrices are dense ``complex128`` arrays. Hermitian inputs are stored in
symmetrized form ``(A + A^H) / 2`` after an entrywise tolerance check, so
downstream code never re-validates Hermiticity. Eigenvalues that agree up
to a relative tolerance are merged into a single cluster before any
divided-difference formula is evaluated, which prevents catastrophic
cancellation for near-degenerate spectra.

All container types are immutable after construction and every operation
is a pure function, so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DEFAULT_HERM_TOL",
    "DEFAULT_ZERO_TOL",
    "DEFAULT_CLUSTER_TOL",
    "SchemaError",
    "HermiticityError",
    "PositivityError",
    "MatrixFunctionDomainError",
    "EigensolverError",
    "ComplexMatrix",
    "HermitianOperator",
    "PositiveOperator",
    "PsdOperator",
    "SpectralDecomposition",
    "as_matrix",
    "frobenius",
    "hermitize",
    "clustered_eigensystem",
    "spectral_decompose",
    "matrix_function",
    "log_cross",
    "zeroth_power",
    "hs_inner",
    "matrix_to_json",
    "matrix_from_json",
]

DEFAULT_HERM_TOL = 1e-10
DEFAULT_ZERO_TOL = 1e-10
DEFAULT_CLUSTER_TOL = 1e-8


class HermiticityError(ValueError):
    """Input matrix deviates from its conjugate transpose beyond tolerance."""


class PositivityError(ValueError):
    """Operator fails a required positivity constraint."""


class MatrixFunctionDomainError(ValueError):
    """A scalar function is undefined at one of the operator's eigenvalues."""

    def __init__(self, eigenvalue: float, message: str):
        self.eigenvalue = float(eigenvalue)
        super().__init__(message)


class EigensolverError(RuntimeError):
    """The dense eigensolver failed; carries the offending input matrix."""

    def __init__(self, matrix: np.ndarray, message: str):
        self.matrix = np.array(matrix)
        super().__init__(f"eigensolver failed on {matrix.shape} input: {message}")


class SchemaError(ValueError):
    """A JSON document does not match the expected schema.

    ``path`` points at the offending field, e.g. ``scenario[2].rho.entries``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.reason = message
        super().__init__(f"{path}: {message}")


def as_matrix(x) -> np.ndarray:
    """Return the underlying complex array of any operator container."""
    if isinstance(x, np.ndarray):
        return x
    m = getattr(x, "matrix", None)
    if m is not None:
        return m if isinstance(m, np.ndarray) else as_matrix(m)
    e = getattr(x, "entries", None)
    if e is not None:
        return e
    return np.asarray(x, dtype=np.complex128)


def frobenius(x) -> float:
    """Frobenius norm of an operator or array."""
    return float(np.linalg.norm(as_matrix(x)))


def _validated_square(arr: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"{what} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{what} has non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """A validated square complex matrix (finite entries, n >= 1)."""

    entries: np.ndarray

    def __post_init__(self):
        arr = _validated_square(self.entries, "ComplexMatrix").copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix, stored as its symmetrized part ``(A + A^H)/2``.

    Construction fails with :class:`HermiticityError` if the max-entry
    deviation ``||A - A^H||_max`` exceeds ``herm_tol``.
    """

    matrix: np.ndarray
    herm_tol: float = DEFAULT_HERM_TOL

    def __post_init__(self):
        arr = _validated_square(as_matrix(self.matrix), "HermitianOperator")
        dev = float(np.max(np.abs(arr - arr.conj().T)))
        if dev > self.herm_tol:
            raise HermiticityError(
                f"matrix deviates from Hermiticity by {dev:.3e} > tol {self.herm_tol:.3e}"
            )
        sym = (arr + arr.conj().T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "matrix", sym)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.matrix))


def hermitize(matrix, rel_tol: float = 1e-8) -> HermitianOperator:
    """Wrap a computed matrix as Hermitian, tolerating roundoff-size skew.

    The allowed deviation scales with the largest entry, so results of long
    floating-point pipelines are accepted while genuinely non-Hermitian
    values still raise.
    """
    arr = np.asarray(as_matrix(matrix), dtype=np.complex128)
    scale = float(np.max(np.abs(arr))) if arr.size else 1.0
    return HermitianOperator(arr, herm_tol=rel_tol * max(1.0, scale))


def _eigh(matrix: np.ndarray):
    try:
        return np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(matrix, str(exc)) from exc


@dataclass(frozen=True, eq=False)
class PositiveOperator:
    """A strictly positive definite Hermitian operator.

    The minimum eigenvalue is computed once at construction and cached.
    """

    op: HermitianOperator
    min_eigenvalue: float = field(init=False)

    def __post_init__(self):
        op = self.op
        if not isinstance(op, HermitianOperator):
            op = HermitianOperator(op)
            object.__setattr__(self, "op", op)
        w = _eigh(op.matrix)[0]
        if w[0] <= 0.0:
            raise PositivityError(
                f"operator is not strictly positive (min eigenvalue {w[0]:.3e})"
            )
        object.__setattr__(self, "min_eigenvalue", float(w[0]))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim


@dataclass(frozen=True, eq=False)
class PsdOperator:
    """A positive semidefinite operator with an explicit zero threshold.

    Eigenvalues in ``[-zero_tol, zero_tol]`` are snapped to exactly zero;
    eigenvalues below ``-zero_tol`` are a construction error rather than
    being clamped. ``rank`` counts eigenvalues above ``zero_tol``. The
    snapped eigensystem is cached for the support/kernel operations.
    """

    op: HermitianOperator
    zero_tol: float = DEFAULT_ZERO_TOL
    rank: int = field(init=False)
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        op = self.op
        if not isinstance(op, HermitianOperator):
            op = HermitianOperator(op)
            object.__setattr__(self, "op", op)
        w, v = _eigh(op.matrix)
        if w[0] < -self.zero_tol:
            raise PositivityError(
                f"operator has eigenvalue {w[0]:.3e} below -zero_tol; not PSD"
            )
        w = np.where(np.abs(w) <= self.zero_tol, 0.0, w)
        w.setflags(write=False)
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)
        object.__setattr__(self, "rank", int(np.count_nonzero(w > 0.0)))

    @property
    def matrix(self) -> np.ndarray:
        return self.op.matrix

    @property
    def dim(self) -> int:
        return self.op.dim


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct clustered eigenvalues with their orthogonal eigenprojectors."""

    eigenvalues: tuple
    projectors: tuple
    cluster_tol: float

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    def items(self):
        return zip(self.eigenvalues, self.projectors)

    def reconstruct(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for lam, proj in self.items():
            out += lam * proj.matrix
        return out


def _cluster_groups(w: np.ndarray, tol: float):
    """Group sorted eigenvalues into clusters separated by a relative gap."""
    groups = [[0]]
    for i in range(1, w.size):
        if w[i] - w[i - 1] <= tol * max(1.0, abs(w[i]), abs(w[i - 1])):
            groups[-1].append(i)
        else:
            groups.append([i])
    # Chained merges can leave adjacent representatives closer than the
    # separation guarantee; merge again until stable.
    while True:
        merged = False
        out = [groups[0]]
        for grp in groups[1:]:
            rep_prev = float(np.mean(w[out[-1]]))
            rep_cur = float(np.mean(w[grp]))
            if rep_cur - rep_prev <= tol * max(1.0, abs(rep_cur), abs(rep_prev)):
                out[-1] = out[-1] + grp
                merged = True
            else:
                out.append(grp)
        groups = out
        if not merged:
            return groups


def clustered_eigensystem(A, cluster_tol: float = DEFAULT_CLUSTER_TOL):
    """Eigensystem of a Hermitian operator with near-degenerate merging.

    Returns ``(reps, cluster_ids, vectors)`` where ``reps[i]`` is the cluster
    representative eigenvalue for eigenvector column ``i`` and
    ``cluster_ids[i]`` the cluster index (ascending order).

    For :class:`PsdOperator` inputs the snapped eigenvalues are used, so the
    zero eigenspace is exact.
    """
    if isinstance(A, PsdOperator):
        w, v = A.eigenvalues, A.eigenvectors
    else:
        w, v = _eigh(_validated_square(as_matrix(A), "operator"))
    groups = _cluster_groups(np.asarray(w, dtype=float), cluster_tol)
    reps = np.empty(w.size, dtype=float)
    ids = np.empty(w.size, dtype=int)
    for cid, grp in enumerate(groups):
        reps[grp] = float(np.mean(np.asarray(w)[grp]))
        ids[grp] = cid
    return reps, ids, v


def spectral_decompose(A, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> SpectralDecomposition:
    """Clustered spectral decomposition ``A = sum_j lambda_j P_j``.

    Eigenvalues within ``cluster_tol * max(1, |a|, |b|)`` of each other are
    merged into one cluster whose projector is the sum of the member
    projectors.
    """
    reps, ids, v = clustered_eigensystem(A, cluster_tol)
    eigenvalues = []
    projectors = []
    for cid in range(int(ids.max()) + 1):
        cols = v[:, ids == cid]
        proj = cols @ cols.conj().T
        projectors.append(hermitize(proj))
        eigenvalues.append(float(reps[ids == cid][0]))
    return SpectralDecomposition(tuple(eigenvalues), tuple(projectors), cluster_tol)


def matrix_function(A, f, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> HermitianOperator:
    """Apply a scalar function spectrally: ``f(A) = sum_j f(lambda_j) P_j``.

    ``f`` may be a plain callable or any object with an ``f`` attribute
    (e.g. a registered function/derivative pair). Raises
    :class:`MatrixFunctionDomainError` naming the offending eigenvalue if
    ``f`` is undefined (non-finite) at some cluster.
    """
    func = getattr(f, "f", f)
    fname = getattr(f, "name", getattr(func, "__name__", "f"))
    reps, ids, v = clustered_eigensystem(A, cluster_tol)
    vals = np.empty_like(reps)
    with np.errstate(all="ignore"):
        for cid in range(int(ids.max()) + 1):
            rep = float(reps[ids == cid][0])
            y = float(func(rep))
            if not np.isfinite(y):
                raise MatrixFunctionDomainError(
                    rep, f"{fname} is undefined at eigenvalue {rep!r}"
                )
            vals[ids == cid] = y
    return hermitize((v * vals) @ v.conj().T)


def _as_psd(A) -> PsdOperator:
    return A if isinstance(A, PsdOperator) else PsdOperator(A)


def log_cross(A) -> HermitianOperator:
    """Logarithm on the support of a PSD operator, zero on its kernel."""
    psd = _as_psd(A)
    w = psd.eigenvalues
    vals = np.zeros_like(w)
    pos = w > 0.0
    vals[pos] = np.log(w[pos])
    return hermitize((psd.eigenvectors * vals) @ psd.eigenvectors.conj().T)


def zeroth_power(A) -> HermitianOperator:
    """Orthogonal projector onto the nonzero eigenspaces of a PSD operator."""
    psd = _as_psd(A)
    vals = (psd.eigenvalues > 0.0).astype(float)
    return hermitize((psd.eigenvectors * vals) @ psd.eigenvectors.conj().T)


def hs_inner(A, B) -> float:
    """Hilbert-Schmidt inner product ``tr(A B)`` of two Hermitian operators.

    The imaginary part of the trace must be negligible (it is checked and
    discarded); a large imaginary part indicates non-Hermitian inputs.
    """
    a, b = as_matrix(A), as_matrix(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    t = complex(np.trace(a @ b))
    scale = max(1.0, float(np.linalg.norm(a)) * float(np.linalg.norm(b)))
    if abs(t.imag) > 1e-12 * scale:
        raise ValueError(f"tr(AB) has imaginary part {t.imag:.3e}; inputs not Hermitian?")
    return float(t.real)


# ---------------------------------------------------------------------------
# JSON encoding
#
# Square matrices: {"dim": n, "entries": [[[re, im], ...], ...]} (row-major).
# Rectangular matrices (Kraus operators of dimension-changing channels) use
# explicit {"rows": m, "cols": n, "entries": ...}.
# ---------------------------------------------------------------------------


def matrix_to_json(m) -> dict:
    arr = np.asarray(as_matrix(m), dtype=np.complex128)
    entries = [[[float(x.real), float(x.imag)] for x in row] for row in arr]
    if arr.shape[0] == arr.shape[1]:
        return {"dim": int(arr.shape[0]), "entries": entries}
    return {"rows": int(arr.shape[0]), "cols": int(arr.shape[1]), "entries": entries}


def matrix_from_json(obj, path: str = "matrix") -> np.ndarray:
    """Decode a matrix JSON object, validating shape and finiteness."""
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object with 'dim' or 'rows'/'cols'")
    if "dim" in obj:
        rows = cols = obj["dim"]
    elif "rows" in obj and "cols" in obj:
        rows, cols = obj["rows"], obj["cols"]
    else:
        raise SchemaError(path, "missing 'dim' (or 'rows'/'cols')")
    for key, val in (("rows", rows), ("cols", cols)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise SchemaError(f"{path}.{key}", f"expected a positive integer, got {val!r}")
    entries = obj.get("entries")
    if not isinstance(entries, list) or len(entries) != rows:
        raise SchemaError(f"{path}.entries", f"expected a list of {rows} rows")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{path}.entries[{i}]", f"expected a list of {cols} cells")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                raise SchemaError(
                    f"{path}.entries[{i}][{j}]", "expected a [re, im] pair of numbers"
                )
            re, im = float(cell[0]), float(cell[1])
            if not (np.isfinite(re) and np.isfinite(im)):
                raise SchemaError(f"{path}.entries[{i}][{j}]", "entries must be finite")
            out[i, j] = re + 1j * im
    return out

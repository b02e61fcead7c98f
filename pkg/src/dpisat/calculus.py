"""Frechet derivatives of matrix functions and Hilbert-Schmidt dualization.

The directional derivative of a spectral function ``f`` at a Hermitian
operator ``A = sum_j lambda_j P_j`` acting on a Hermitian direction ``M`` is

    df|_A(M) = sum_j f'(lambda_j) P_j M P_j
             + sum_{j != k} [(f(lambda_j) - f(lambda_k)) / (lambda_j - lambda_k)] P_j M P_k,

i.e. first divided differences off the diagonal blocks and ``f'`` on them.
Eigenvalue clustering happens upstream (see :mod:`dpisat.linalg`); once two
eigenvalues have been merged, the ``f'`` branch is used for their block, so
this module needs no secondary degeneracy threshold.

Also provided: central finite-difference oracles for both the Frechet
derivative and scalar gradients, and the dualization that turns a linear
functional on Hermitian operators into the unique Hermitian gradient
operator under ``<A, B> = tr(AB)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .linalg import (
    DEFAULT_CLUSTER_TOL,
    HermitianOperator,
    MatrixFunctionDomainError,
    as_matrix,
    clustered_eigensystem,
    hermitize,
    matrix_function,
)

__all__ = [
    "ScalarFunctionPair",
    "LinearFunctionalSample",
    "NumericGradientError",
    "IDENTITY",
    "LOG",
    "EXP",
    "X_LOG_X",
    "NEG_LOG",
    "CHI_SQUARE",
    "power",
    "FUNCTION_REGISTRY",
    "resolve_function",
    "hermitian_basis",
    "sample_functional",
    "dualize",
    "frechet_derivative",
    "finite_difference_frechet",
    "numeric_gradient",
]


class NumericGradientError(RuntimeError):
    """A probe evaluation failed; carries the basis direction index."""

    def __init__(self, direction_index: int, message: str):
        self.direction_index = direction_index
        super().__init__(message)


def _sample_points(domain) -> np.ndarray:
    lo, hi = domain
    if lo == 0.0 and math.isinf(hi):
        return np.logspace(-2, 2, 20)
    if math.isinf(lo) and math.isinf(hi):
        return np.linspace(-3.0, 3.0, 20)
    span = hi - lo
    return np.linspace(lo + 0.05 * span, hi - 0.05 * span, 20)


@dataclass(frozen=True, eq=False)
class ScalarFunctionPair:
    """A scalar function together with its analytic derivative.

    At construction the pair is self-checked: on 20 sampled points of the
    declared open ``domain``, a central difference of ``f`` must match
    ``f_prime`` to relative 1e-6. This catches mismatched pairs early.

    ``value_at_zero`` records the continuous extension ``f(0+)`` where one
    exists; it is consulted when a function is applied to an operator with
    vanishing eigenvalues.
    """

    name: str
    f: Callable[[float], float]
    f_prime: Callable[[float], float]
    domain: tuple = (-math.inf, math.inf)
    value_at_zero: float | None = None

    def __post_init__(self):
        for x in _sample_points(self.domain):
            h = 1e-6 * max(1.0, abs(x))
            fd = (self.f(x + h) - self.f(x - h)) / (2.0 * h)
            fp = self.f_prime(x)
            if abs(fd - fp) > 1e-6 * max(1.0, abs(fp)):
                raise ValueError(
                    f"function pair {self.name!r} failed its derivative self-check "
                    f"at x={x!r}: finite difference {fd!r} vs declared {fp!r}"
                )


IDENTITY = ScalarFunctionPair("identity", lambda x: x, lambda x: 1.0, value_at_zero=0.0)
LOG = ScalarFunctionPair("log", np.log, lambda x: 1.0 / x, domain=(0.0, math.inf))
EXP = ScalarFunctionPair("exp", np.exp, np.exp)
X_LOG_X = ScalarFunctionPair(
    "x_log_x", lambda x: x * np.log(x), lambda x: np.log(x) + 1.0,
    domain=(0.0, math.inf), value_at_zero=0.0,
)
NEG_LOG = ScalarFunctionPair(
    "neg_log", lambda x: -np.log(x), lambda x: -1.0 / x, domain=(0.0, math.inf)
)
CHI_SQUARE = ScalarFunctionPair(
    "chi_square", lambda x: (x - 1.0) ** 2, lambda x: 2.0 * (x - 1.0),
    domain=(0.0, math.inf), value_at_zero=1.0,
)


@lru_cache(maxsize=None)
def power(exponent: float) -> ScalarFunctionPair:
    """The power function ``x**exponent`` on the positive half line."""
    e = float(exponent)
    if e == 0.0:
        return ScalarFunctionPair(
            "power[0]", lambda x: 1.0, lambda x: 0.0, domain=(0.0, math.inf),
            value_at_zero=1.0,
        )
    return ScalarFunctionPair(
        f"power[{e}]",
        lambda x: x ** e,
        lambda x: e * x ** (e - 1.0),
        domain=(0.0, math.inf),
        value_at_zero=0.0 if e > 0 else None,
    )


FUNCTION_REGISTRY = {
    "identity": IDENTITY,
    "log": LOG,
    "exp": EXP,
    "x_log_x": X_LOG_X,
    "neg_log": NEG_LOG,
    "chi_square": CHI_SQUARE,
}


def resolve_function(name: str, exponent: float | None = None) -> ScalarFunctionPair:
    """Look up a registered pair by name (``power`` requires an exponent)."""
    if name == "power":
        if exponent is None:
            raise ValueError("the 'power' function requires an exponent")
        return power(float(exponent))
    try:
        return FUNCTION_REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown scalar function {name!r}") from None


@lru_cache(maxsize=None)
def hermitian_basis(n: int):
    """Orthonormal basis of n x n Hermitian matrices under ``tr(AB)``.

    Order: the n diagonal units ``E_kk``; then for each pair k < l the
    symmetric element ``(E_kl + E_lk)/sqrt(2)`` followed by the antisymmetric
    element ``i (E_kl - E_lk)/sqrt(2)``.
    """
    basis = []
    for k in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[k, k] = 1.0
        basis.append(HermitianOperator(e))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for k in range(n):
        for l in range(k + 1, n):
            sym = np.zeros((n, n), dtype=np.complex128)
            sym[k, l] = sym[l, k] = inv_sqrt2
            basis.append(HermitianOperator(sym))
            anti = np.zeros((n, n), dtype=np.complex128)
            anti[k, l] = 1j * inv_sqrt2
            anti[l, k] = -1j * inv_sqrt2
            basis.append(HermitianOperator(anti))
    return tuple(basis)


@dataclass(frozen=True, eq=False)
class LinearFunctionalSample:
    """Values of a linear functional on the full canonical Hermitian basis.

    ``values[i]`` is the functional evaluated on ``hermitian_basis(dim)[i]``;
    a complete sample has exactly ``dim**2`` entries.
    """

    dim: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.dim * self.dim,):
            raise ValueError(
                f"incomplete sample: expected {self.dim * self.dim} basis values, "
                f"got shape {vals.shape}"
            )
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def sample_functional(functional, dim: int) -> LinearFunctionalSample:
    """Evaluate a functional on every canonical Hermitian basis element."""
    vals = [float(functional(b)) for b in hermitian_basis(dim)]
    return LinearFunctionalSample(dim, np.array(vals))


def dualize(sample: LinearFunctionalSample) -> HermitianOperator:
    """The unique Hermitian G with ``tr(G B_i) = values[i]`` for all basis B_i.

    Since the basis is orthonormal, ``G = sum_i values[i] * B_i``.
    """
    basis = hermitian_basis(sample.dim)
    out = np.zeros((sample.dim, sample.dim), dtype=np.complex128)
    for val, b in zip(sample.values, basis):
        out += val * b.matrix
    return hermitize(out)


def _loewner_matrix(reps: np.ndarray, ids: np.ndarray, pair: ScalarFunctionPair) -> np.ndarray:
    """Divided-difference kernel over cluster representatives.

    Same cluster -> f'(rep); distinct clusters -> first divided difference.
    """
    n = reps.size
    fvals = np.empty(n)
    fpvals = np.empty(n)
    lo, hi = pair.domain
    with np.errstate(all="ignore"):
        for cid in range(int(ids.max()) + 1):
            rep = float(reps[ids == cid][0])
            if not (lo < rep < hi):
                raise MatrixFunctionDomainError(
                    rep, f"{pair.name} is undefined at eigenvalue {rep!r}"
                )
            fv, fpv = float(pair.f(rep)), float(pair.f_prime(rep))
            if not (np.isfinite(fv) and np.isfinite(fpv)):
                raise MatrixFunctionDomainError(
                    rep, f"{pair.name} or its derivative is undefined at eigenvalue {rep!r}"
                )
            fvals[ids == cid] = fv
            fpvals[ids == cid] = fpv
    same = ids[:, None] == ids[None, :]
    denom = np.where(same, 1.0, reps[:, None] - reps[None, :])
    kernel = (fvals[:, None] - fvals[None, :]) / denom
    return np.where(same, fpvals[:, None] * np.ones((n, n)), kernel)


def frechet_derivative(A, M, fp: ScalarFunctionPair,
                       cluster_tol: float = DEFAULT_CLUSTER_TOL) -> HermitianOperator:
    """Directional derivative of the matrix function ``fp.f`` at A along M.

    Linear in M and Hermitian for Hermitian M.
    """
    a, m = as_matrix(A), as_matrix(M)
    if a.shape != m.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {m.shape}")
    reps, ids, v = clustered_eigensystem(A, cluster_tol)
    kernel = _loewner_matrix(reps, ids, fp)
    mt = v.conj().T @ m @ v
    return hermitize(v @ (kernel * mt) @ v.conj().T)


def finite_difference_frechet(A, M, f, h: float = 1e-5) -> HermitianOperator:
    """Central-difference oracle ``(f(A + hM) - f(A - hM)) / (2h)``."""
    a, m = as_matrix(A), as_matrix(M)
    plus = matrix_function(hermitize(a + h * m), f)
    minus = matrix_function(hermitize(a - h * m), f)
    return hermitize((plus.matrix - minus.matrix) / (2.0 * h))


def numeric_gradient(scalar_map, at) -> HermitianOperator:
    """Finite-difference gradient of a scalar function of a Hermitian operator.

    Central differences along every canonical basis direction with step
    ``h = 1e-5 * max(1, ||at||_F)``, dualized into a Hermitian operator.
    The estimate carries an O(h^2) bias.
    """
    base = as_matrix(at)
    n = base.shape[0]
    h = 1e-5 * max(1.0, float(np.linalg.norm(base)))
    vals = np.empty(n * n)
    for i, b in enumerate(hermitian_basis(n)):
        try:
            f_plus = float(scalar_map(hermitize(base + h * b.matrix)))
            f_minus = float(scalar_map(hermitize(base - h * b.matrix)))
        except Exception as exc:
            raise NumericGradientError(
                i, f"scalar map failed while probing basis direction {i}: {exc}"
            ) from exc
        vals[i] = (f_plus - f_minus) / (2.0 * h)
    return dualize(LinearFunctionalSample(n, vals))

"""CPTP maps in Kraus form, their Hilbert-Schmidt adjoints, and builders.

A channel acts as ``L(A) = sum_i K_i A K_i^H`` and its adjoint as
``L*(A) = sum_i K_i^H A K_i``, so ``tr[L*(A) B] = tr[A L(B)]`` holds by
construction. The Kraus representation is primary precisely because the
adjoint is syntactically trivial. Channels may change dimension
(``dim_in -> dim_out``); Kraus operators are then rectangular.

Complete positivity is automatic from Kraus form; :func:`verify_cptp`
nevertheless recomputes the Choi matrix from the channel action as an
independent validator for hand-entered operator lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    HermitianOperator,
    SchemaError,
    _eigh,
    as_matrix,
    hermitize,
    matrix_from_json,
    matrix_to_json,
)

__all__ = [
    "KrausChannel",
    "CptpReport",
    "apply",
    "adjoint_apply",
    "apply_raw",
    "choi_matrix",
    "verify_cptp",
    "compose",
    "identity",
    "unitary",
    "depolarizing",
    "dephasing_pinching",
    "partial_trace",
    "measure_prepare",
    "channel_to_json",
    "channel_from_json",
]

DEFAULT_TP_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A completely positive trace-preserving map given by Kraus operators.

    Trace preservation ``||sum_i K_i^H K_i - I||_F <= tp_tol`` is enforced at
    construction; pass a larger ``tp_tol`` deliberately to hold a known-bad
    operator list for diagnostics.
    """

    kraus: tuple
    tp_tol: float = DEFAULT_TP_TOL
    dim_in: int = field(init=False)
    dim_out: int = field(init=False)

    def __post_init__(self):
        ops = []
        for i, k in enumerate(self.kraus):
            arr = np.asarray(as_matrix(k), dtype=np.complex128)
            if arr.ndim != 2:
                raise ValueError(f"Kraus operator {i} is not a matrix")
            if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
                raise ValueError(f"Kraus operator {i} has non-finite entries")
            arr = arr.copy()
            arr.setflags(write=False)
            ops.append(arr)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        m, n = ops[0].shape
        if any(k.shape != (m, n) for k in ops):
            raise ValueError("all Kraus operators must share one shape")
        tp = tp_error(ops)
        if tp > self.tp_tol:
            raise ValueError(
                f"channel is not trace preserving: ||sum K^H K - I||_F = {tp:.3e}"
            )
        object.__setattr__(self, "kraus", tuple(ops))
        object.__setattr__(self, "dim_in", n)
        object.__setattr__(self, "dim_out", m)


@dataclass(frozen=True)
class CptpReport:
    """Diagnostics: trace-preservation error and smallest Choi eigenvalue."""

    tp_error: float
    choi_min_eig: float


def tp_error(kraus) -> float:
    """Frobenius distance of ``sum K^H K`` from the identity."""
    n = np.asarray(as_matrix(kraus[0])).shape[1]
    acc = np.zeros((n, n), dtype=np.complex128)
    for k in kraus:
        arr = as_matrix(k)
        acc += arr.conj().T @ arr
    return float(np.linalg.norm(acc - np.eye(n)))


def apply_raw(kraus, matrix: np.ndarray) -> np.ndarray:
    """Kraus sandwich ``sum K A K^H`` with no validation (any square A)."""
    arr = np.asarray(matrix, dtype=np.complex128)
    out = None
    for k in kraus:
        karr = as_matrix(k)
        term = karr @ arr @ karr.conj().T
        out = term if out is None else out + term
    return out


def apply(ch: KrausChannel, A) -> HermitianOperator:
    """Apply the channel to a Hermitian operator."""
    arr = as_matrix(A)
    if arr.shape != (ch.dim_in, ch.dim_in):
        raise ValueError(
            f"dimension mismatch: channel expects {ch.dim_in}, got {arr.shape}"
        )
    return hermitize(apply_raw(ch.kraus, arr))


def adjoint_apply(ch: KrausChannel, A) -> HermitianOperator:
    """Apply the Hilbert-Schmidt adjoint ``sum K^H A K``."""
    arr = as_matrix(A)
    if arr.shape != (ch.dim_out, ch.dim_out):
        raise ValueError(
            f"dimension mismatch: adjoint expects {ch.dim_out}, got {arr.shape}"
        )
    out = np.zeros((ch.dim_in, ch.dim_in), dtype=np.complex128)
    for k in ch.kraus:
        out += k.conj().T @ arr @ k
    return hermitize(out)


def choi_matrix(ch: KrausChannel) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) L(|i><j|)`` built from the action."""
    n, m = ch.dim_in, ch.dim_out
    choi = np.zeros((n * m, n * m), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=np.complex128)
            unit[i, j] = 1.0
            choi[i * m:(i + 1) * m, j * m:(j + 1) * m] = apply_raw(ch.kraus, unit)
    return choi


def verify_cptp(ch: KrausChannel) -> CptpReport:
    """Recompute trace preservation and complete positivity diagnostics."""
    choi = choi_matrix(ch)
    w = _eigh((choi + choi.conj().T) / 2.0)[0]
    return CptpReport(tp_error=tp_error(ch.kraus), choi_min_eig=float(w[0]))


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """The channel ``A -> second(first(A))`` with product Kraus operators."""
    if first.dim_out != second.dim_in:
        raise ValueError(
            f"cannot compose: first outputs dim {first.dim_out}, "
            f"second expects dim {second.dim_in}"
        )
    ops = [k2 @ k1 for k2 in second.kraus for k1 in first.kraus]
    return KrausChannel(tuple(ops), tp_tol=max(second.tp_tol, first.tp_tol))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def identity(n: int) -> KrausChannel:
    return KrausChannel((np.eye(n, dtype=np.complex128),))


def unitary(u: np.ndarray) -> KrausChannel:
    """Conjugation by a unitary, ``A -> U A U^H``."""
    arr = np.asarray(as_matrix(u), dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("unitary builder needs a square matrix")
    dev = float(np.linalg.norm(arr.conj().T @ arr - np.eye(arr.shape[0])))
    if dev > 1e-10:
        raise ValueError(f"matrix is not unitary: ||U^H U - I||_F = {dev:.3e}")
    return KrausChannel((arr,))


def depolarizing(n: int, p: float) -> KrausChannel:
    """Mix with the maximally mixed state: ``A -> (1-p) A + p tr(A) I/n``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength p must be in [0, 1], got {p}")
    ops = []
    if p < 1.0:
        ops.append(np.sqrt(1.0 - p) * np.eye(n, dtype=np.complex128))
    if p > 0.0:
        coeff = np.sqrt(p / n)
        for i in range(n):
            for j in range(n):
                e = np.zeros((n, n), dtype=np.complex128)
                e[i, j] = coeff
                ops.append(e)
    return KrausChannel(tuple(ops))


def dephasing_pinching(basis, p: float = 1.0) -> KrausChannel:
    """Suppress off-diagonal blocks relative to an orthonormal basis.

    ``basis`` is either a dimension (computational basis) or a unitary whose
    columns define the basis. With strength ``p = 1`` this is the pinching
    map that deletes all off-diagonal elements; for ``p < 1`` off-diagonals
    are scaled by ``1 - p``.
    """
    if isinstance(basis, (int, np.integer)):
        vecs = np.eye(int(basis), dtype=np.complex128)
    else:
        vecs = np.asarray(as_matrix(basis), dtype=np.complex128)
        dev = float(np.linalg.norm(vecs.conj().T @ vecs - np.eye(vecs.shape[0])))
        if dev > 1e-10:
            raise ValueError(f"pinching basis is not orthonormal (deviation {dev:.3e})")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"dephasing strength p must be in [0, 1], got {p}")
    n = vecs.shape[0]
    ops = []
    if p < 1.0:
        ops.append(np.sqrt(1.0 - p) * np.eye(n, dtype=np.complex128))
    if p > 0.0:
        for i in range(n):
            col = vecs[:, i:i + 1]
            ops.append(np.sqrt(p) * (col @ col.conj().T))
    return KrausChannel(tuple(ops))


def partial_trace(n_a: int, n_b: int, keep: str) -> KrausChannel:
    """Trace out one tensor factor of ``H_A (x) H_B`` (index ``a*n_b + b``)."""
    keep = str(keep).lower()
    if keep not in ("a", "b"):
        raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")
    ops = []
    if keep == "a":
        for b in range(n_b):
            row = np.zeros((1, n_b), dtype=np.complex128)
            row[0, b] = 1.0
            ops.append(np.kron(np.eye(n_a, dtype=np.complex128), row))
    else:
        for a in range(n_a):
            row = np.zeros((1, n_a), dtype=np.complex128)
            row[0, a] = 1.0
            ops.append(np.kron(row, np.eye(n_b, dtype=np.complex128)))
    return KrausChannel(tuple(ops))


def _psd_vectors(arr: np.ndarray, what: str):
    """Split a PSD matrix into weighted eigenvectors, dropping null modes."""
    w, v = _eigh(arr)
    if w[0] < -1e-10:
        raise ValueError(f"{what} has negative eigenvalue {w[0]:.3e}")
    out = []
    for i in range(w.size):
        if w[i] > 1e-14:
            out.append((float(w[i]), v[:, i]))
    return out


def measure_prepare(povm, states) -> KrausChannel:
    """Measure with a POVM and prepare a fixed state per outcome.

    ``L(A) = sum_i tr(E_i A) tau_i`` where the POVM elements ``E_i`` sum to
    the identity and each prepared state ``tau_i`` has unit trace. The
    channel is entanglement breaking; its Kraus operators are the rank-one
    bridges ``sqrt(e t) |v><u|`` over the eigenpairs of ``E_i`` and
    ``tau_i``.
    """
    if len(povm) != len(states):
        raise ValueError("need one prepared state per POVM element")
    effects = [np.asarray(as_matrix(e), dtype=np.complex128) for e in povm]
    taus = [np.asarray(as_matrix(t), dtype=np.complex128) for t in states]
    n = effects[0].shape[0]
    total = sum(effects)
    if float(np.linalg.norm(total - np.eye(n))) > 1e-10:
        raise ValueError("POVM elements do not sum to the identity")
    ops = []
    for i, (effect, tau) in enumerate(zip(effects, taus)):
        tr = float(np.real(np.trace(tau)))
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"prepared state {i} has trace {tr!r}, expected 1")
        for e_val, u in _psd_vectors(effect, f"POVM element {i}"):
            for t_val, v in _psd_vectors(tau, f"prepared state {i}"):
                ops.append(np.sqrt(e_val * t_val) * np.outer(v, u.conj()))
    return KrausChannel(tuple(ops))


# ---------------------------------------------------------------------------
# JSON encoding
#
# Explicit form:   {"dim_in": n, "dim_out": m, "kraus": [<matrix>, ...]}
# Builder form:    {"builder": "depolarizing", "dim": 2, "p": 0.5}
# ---------------------------------------------------------------------------


def channel_to_json(ch: KrausChannel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_json(k) for k in ch.kraus],
    }


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing required field")
    return obj[key]


def _positive_int(val, path: str) -> int:
    if not isinstance(val, int) or isinstance(val, bool) or val < 1:
        raise SchemaError(path, f"expected a positive integer, got {val!r}")
    return val


def _number(val, path: str) -> float:
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise SchemaError(path, f"expected a number, got {val!r}")
    return float(val)


def channel_from_json(obj, path: str = "channel") -> KrausChannel:
    """Decode a channel from explicit Kraus form or builder shorthand."""
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    try:
        if "builder" in obj:
            return _builder_from_json(obj, path)
        kraus_json = _require(obj, "kraus", path)
        if not isinstance(kraus_json, list) or not kraus_json:
            raise SchemaError(f"{path}.kraus", "expected a non-empty list of matrices")
        kraus = [
            matrix_from_json(k, f"{path}.kraus[{i}]") for i, k in enumerate(kraus_json)
        ]
        ch = KrausChannel(tuple(kraus))
        if "dim_in" in obj and obj["dim_in"] != ch.dim_in:
            raise SchemaError(f"{path}.dim_in", f"declared {obj['dim_in']}, actual {ch.dim_in}")
        if "dim_out" in obj and obj["dim_out"] != ch.dim_out:
            raise SchemaError(f"{path}.dim_out", f"declared {obj['dim_out']}, actual {ch.dim_out}")
        return ch
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def _builder_from_json(obj: dict, path: str) -> KrausChannel:
    name = obj["builder"]
    if name == "identity":
        return identity(_positive_int(_require(obj, "dim", path), f"{path}.dim"))
    if name == "unitary":
        return unitary(matrix_from_json(_require(obj, "matrix", path), f"{path}.matrix"))
    if name == "depolarizing":
        return depolarizing(
            _positive_int(_require(obj, "dim", path), f"{path}.dim"),
            _number(_require(obj, "p", path), f"{path}.p"),
        )
    if name == "dephasing_pinching":
        if "basis" in obj:
            basis = matrix_from_json(obj["basis"], f"{path}.basis")
        else:
            basis = _positive_int(_require(obj, "dim", path), f"{path}.dim")
        p = _number(obj.get("p", 1.0), f"{path}.p")
        return dephasing_pinching(basis, p)
    if name == "partial_trace":
        return partial_trace(
            _positive_int(_require(obj, "dim_a", path), f"{path}.dim_a"),
            _positive_int(_require(obj, "dim_b", path), f"{path}.dim_b"),
            _require(obj, "keep", path),
        )
    if name == "measure_prepare":
        povm_json = _require(obj, "povm", path)
        states_json = _require(obj, "states", path)
        if not isinstance(povm_json, list) or not isinstance(states_json, list):
            raise SchemaError(path, "'povm' and 'states' must be lists of matrices")
        povm = [matrix_from_json(e, f"{path}.povm[{i}]") for i, e in enumerate(povm_json)]
        states = [
            matrix_from_json(t, f"{path}.states[{i}]") for i, t in enumerate(states_json)
        ]
        return measure_prepare(povm, states)
    raise SchemaError(f"{path}.builder", f"unknown builder {name!r}")

"""Saturation certificates for the data processing inequality.

When a channel preserves the value of a distinguishability measure on a
pair of states, the difference of gradients

    residual = grad(B)|_{r,s} - L*( grad(B)|_{L(r),L(s)} )

must vanish as an operator, for either argument slot. This module computes
those residuals, the sign-adjusted gap itself, the converse certificate for
families with a verified scalar-multiplication law, the boundary variants
for rank-deficient states (restricted to the tangent space of the PSD
cone), the Petz recovery map together with its exact-recovery checks, and
numerical cross-checks against two alternative published saturation
conditions for the alpha-z family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import (
    LinearFunctionalSample,
    dualize,
    hermitian_basis,
)
from .channels import KrausChannel, adjoint_apply, apply
from .divergences import (
    MeasureSpec,
    evaluate,
    evaluate_psd,
    grad1,
    grad2,
    scaling_check,
)
from .linalg import (
    HermitianOperator,
    PositiveOperator,
    PositivityError,
    PsdOperator,
    _eigh,
    as_matrix,
    frobenius,
    hermitize,
    hs_inner,
    log_cross,
    matrix_to_json,
    zeroth_power,
)

__all__ = [
    "BoundaryCaseError",
    "ConverseViolationError",
    "SaturationReport",
    "ConverseCertificate",
    "AlphaZCrosscheck",
    "dpi_gap",
    "boundary_gap",
    "residual1",
    "residual2",
    "normalized_sandwiched_residual",
    "converse_certificate",
    "tangent_project",
    "tangent_membership",
    "tangent_space_rank",
    "boundary_residual_relent",
    "boundary_residual_general",
    "hiai_residual",
    "petz_map",
    "alpha2_petz_residual",
    "alpha_z_crosscheck",
    "build_report",
    "report_to_json",
]

DEFAULT_GAP_TOL = 1e-8
DEFAULT_RESIDUAL_TOL = 1e-8


class BoundaryCaseError(ValueError):
    """A state or channel image is rank deficient; use the boundary operations."""


class ConverseViolationError(AssertionError):
    """The residual vanished but the gap did not, for a scaling-law family."""


def _positive_or_boundary(x, what: str) -> PositiveOperator:
    if isinstance(x, PositiveOperator):
        return x
    try:
        return PositiveOperator(x if isinstance(x, HermitianOperator) else HermitianOperator(as_matrix(x)))
    except PositivityError as exc:
        raise BoundaryCaseError(
            f"{what} is not strictly positive ({exc}); "
            "use the boundary_residual operations for rank-deficient states"
        ) from exc


def _channel_images(ch: KrausChannel, rho: PositiveOperator, sigma: PositiveOperator):
    rho_out = _positive_or_boundary(apply(ch, rho.op), "channel image of rho")
    sigma_out = _positive_or_boundary(apply(ch, sigma.op), "channel image of sigma")
    return rho_out, sigma_out


def dpi_gap(m: MeasureSpec, ch: KrausChannel, rho, sigma) -> float:
    """Sign-adjusted gap ``sign * (B(r,s) - B(L r, L s))``; nonnegative under
    the data processing inequality."""
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    rho_out, sigma_out = _channel_images(ch, rho, sigma)
    return m.sign * (evaluate(m, rho, sigma) - evaluate(m, rho_out, sigma_out))


def boundary_gap(m: MeasureSpec, ch: KrausChannel, rho: PsdOperator, sigma) -> float:
    """Sign-adjusted gap with a PSD first argument (continuous extension)."""
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    sigma = _positive_or_boundary(sigma, "sigma")
    rho_out = PsdOperator(apply(ch, rho.op))
    sigma_out = _positive_or_boundary(apply(ch, sigma.op), "channel image of sigma")
    return m.sign * (evaluate_psd(m, rho, sigma) - evaluate_psd(m, rho_out, sigma_out))


def residual1(m: MeasureSpec, ch: KrausChannel, rho, sigma) -> HermitianOperator:
    """First-argument gradient residual; zero whenever the gap vanishes."""
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    rho_out, sigma_out = _channel_images(ch, rho, sigma)
    inner = grad1(m, rho_out, sigma_out)
    return hermitize(grad1(m, rho, sigma).matrix - adjoint_apply(ch, inner).matrix)


def residual2(m: MeasureSpec, ch: KrausChannel, rho, sigma) -> HermitianOperator:
    """Second-argument gradient residual."""
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    rho_out, sigma_out = _channel_images(ch, rho, sigma)
    inner = grad2(m, rho_out, sigma_out)
    return hermitize(grad2(m, rho, sigma).matrix - adjoint_apply(ch, inner).matrix)


def _sandwiched_core_operator(alpha: float, rho: PositiveOperator, sigma: PositiveOperator) -> np.ndarray:
    gamma = (1.0 - alpha) / (2.0 * alpha)
    ws, vs = _eigh(sigma.matrix)
    s_g = (vs * ws ** gamma) @ vs.conj().T
    x = s_g @ rho.matrix @ s_g
    x = (x + x.conj().T) / 2.0
    wx, vx = _eigh(x)
    return s_g @ ((vx * wx ** (alpha - 1.0)) @ vx.conj().T) @ s_g


def normalized_sandwiched_residual(
    ch: KrausChannel, rho, sigma, alpha: float, gap_tol: float = DEFAULT_GAP_TOL
) -> HermitianOperator:
    """Prefactor-free sandwiched-Renyi residual
    ``s^g (s^g r s^g)^{a-1} s^g - L*( ... images ... )``.

    Dropping the trace prefactors presumes the two values are equal, so this
    is only defined once the gap is below ``gap_tol``.
    """
    m = MeasureSpec.sandwiched_renyi(alpha)
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    gap = dpi_gap(m, ch, rho, sigma)
    if abs(gap) > gap_tol:
        raise ValueError(
            f"normalized residual is meaningful only at saturation; |gap|={abs(gap):.3e}"
        )
    rho_out, sigma_out = _channel_images(ch, rho, sigma)
    outer = _sandwiched_core_operator(alpha, rho, sigma)
    inner = _sandwiched_core_operator(alpha, rho_out, sigma_out)
    return hermitize(outer - adjoint_apply(ch, hermitize(inner)).matrix)


# ---------------------------------------------------------------------------
# Converse certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConverseCertificate:
    residual1_norm: float
    gap: float
    implied_gap_zero: bool
    scaling_verified: bool


_SCALE_DRAWS = ((2.0, 0.5), (0.7, 3.0))


def _verify_scaling_law(m: MeasureSpec, rho: PositiveOperator, sigma: PositiveOperator) -> bool:
    """Numerically confirm the family's behavior under scalar multiplication."""
    for k, kp in _SCALE_DRAWS:
        if m.family in ("sandwiched_renyi", "alpha_z"):
            chk = scaling_check(m, rho, sigma, k, kp)
            lhs, rhs = chk.lhs, chk.rhs
        elif m.family == "relative_entropy":
            lhs = evaluate(m, _scale(rho, k), _scale(sigma, kp))
            tr_rho = float(np.real(np.trace(rho.matrix)))
            rhs = k * evaluate(m, rho, sigma) + k * tr_rho * (math.log(k) - math.log(kp))
        elif m.family == "fidelity":
            lhs = evaluate(m, _scale(rho, k), _scale(sigma, kp))
            rhs = math.sqrt(k * kp) * evaluate(m, rho, sigma)
        else:
            return False
        if abs(lhs - rhs) > 1e-10 * max(1.0, abs(lhs), abs(rhs)):
            return False
    return True


def _scale(op: PositiveOperator, k: float) -> PositiveOperator:
    return PositiveOperator(HermitianOperator(k * op.matrix))


def converse_certificate(
    m: MeasureSpec,
    ch: KrausChannel,
    rho,
    sigma,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    gap_tol: float = DEFAULT_GAP_TOL,
) -> ConverseCertificate:
    """Check that a vanishing first residual implies a vanishing gap.

    Only valid for families whose value transforms invertibly under scalar
    multiplication (the Renyi families, relative entropy, fidelity); the law
    is re-verified numerically on the given states. A small residual with a
    large gap raises :class:`ConverseViolationError`.
    """
    if m.family not in ("sandwiched_renyi", "alpha_z", "relative_entropy", "fidelity"):
        raise ValueError(
            f"family {m.family!r} has no verified scaling law; "
            "check the gap directly instead"
        )
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    verified = _verify_scaling_law(m, rho, sigma)
    if not verified:
        raise ConverseViolationError(
            f"scaling law failed to verify numerically for family {m.family!r}"
        )
    r1 = frobenius(residual1(m, ch, rho, sigma))
    gap = dpi_gap(m, ch, rho, sigma)
    implied = r1 <= residual_tol
    if implied and abs(gap) > gap_tol:
        raise ConverseViolationError(
            f"residual norm {r1:.3e} <= {residual_tol:.1e} but |gap| = {abs(gap):.3e}"
        )
    return ConverseCertificate(
        residual1_norm=r1, gap=gap, implied_gap_zero=implied, scaling_verified=verified
    )


# ---------------------------------------------------------------------------
# Tangent space of the PSD cone
# ---------------------------------------------------------------------------


def tangent_project(rho: PsdOperator, M) -> HermitianOperator:
    """Project onto the tangent space at a PSD operator:
    ``M - (1 - P) M (1 - P)`` with P the support projector."""
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    m = as_matrix(M)
    if m.shape != rho.matrix.shape:
        raise ValueError(f"dimension mismatch: {m.shape} vs {rho.matrix.shape}")
    q = np.eye(rho.dim) - zeroth_power(rho).matrix
    return hermitize(m - q @ m @ q)


def _kernel_operator_basis(rho: PsdOperator):
    """Orthonormal Hermitian basis of the operators on the kernel of rho."""
    vecs = rho.eigenvectors[:, rho.eigenvalues == 0.0]
    k = vecs.shape[1]
    basis = []
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for a in range(k):
        va = vecs[:, a:a + 1]
        basis.append(va @ va.conj().T)
        for b in range(a + 1, k):
            vb = vecs[:, b:b + 1]
            cross = va @ vb.conj().T
            basis.append(inv_sqrt2 * (cross + cross.conj().T))
            basis.append(inv_sqrt2 * (1j * cross - 1j * cross.conj().T))
    return basis


def tangent_membership(rho: PsdOperator, M, tol: float = 1e-10) -> bool:
    """Whether M is orthogonal (Hilbert-Schmidt) to every operator acting on
    the kernel of rho, i.e. tangent to the PSD cone at rho."""
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    m = as_matrix(M)
    for b in _kernel_operator_basis(rho):
        if abs(hs_inner(m, b)) > tol:
            return False
    return True


def tangent_space_rank(rho: PsdOperator, tol: float = 1e-8) -> int:
    """Numerical dimension of the tangent space at rho.

    Equals ``n**2 - k**2`` for an n-dimensional operator with a
    k-dimensional kernel.
    """
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    n = rho.dim
    rows = []
    for b in hermitian_basis(n):
        proj = tangent_project(rho, b).matrix
        rows.append(np.concatenate([proj.real.ravel(), proj.imag.ravel()]))
    svals = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.count_nonzero(svals > tol * svals[0]))


# ---------------------------------------------------------------------------
# Boundary residuals (rank-deficient first argument)
# ---------------------------------------------------------------------------


def _support_restrict(arr: np.ndarray, support: np.ndarray) -> np.ndarray:
    """``A - (1 - P) A (1 - P)``: kill the block acting on the kernel."""
    q = np.eye(arr.shape[0]) - support
    return arr - q @ arr @ q


def boundary_residual_relent(ch: KrausChannel, rho, sigma) -> HermitianOperator:
    """Support-restricted relative-entropy residual for PSD rho:

        logx(r) - log(s)|_rest  -  L*( logx(L r) - log(L s)|_rest' )|_rest

    where ``logx`` is the support logarithm and ``|_rest`` removes the block
    on the corresponding kernel. Requires s and L(s) strictly positive.
    """
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    sigma = _positive_or_boundary(sigma, "sigma")
    sigma_out = _positive_or_boundary(apply(ch, sigma.op), "channel image of sigma")
    rho_out = PsdOperator(apply(ch, rho.op))

    p_in = zeroth_power(rho).matrix
    p_out = zeroth_power(rho_out).matrix
    log_sigma = _log_of_positive(sigma)
    log_sigma_out = _log_of_positive(sigma_out)

    lhs = log_cross(rho).matrix - _support_restrict(log_sigma, p_in)
    inner = log_cross(rho_out).matrix - _support_restrict(log_sigma_out, p_out)
    rhs = _support_restrict(adjoint_apply(ch, hermitize(inner)).matrix, p_in)
    return hermitize(lhs - rhs)


def _log_of_positive(op: PositiveOperator) -> np.ndarray:
    w, v = _eigh(op.matrix)
    return (v * np.log(w)) @ v.conj().T


def _extended_gradient(m: MeasureSpec, rho: PsdOperator, sigma: PositiveOperator) -> HermitianOperator:
    """Gradient of B(., s) at a PSD point, extended from the tangent space of
    the PSD cone by zero on its orthogonal complement.

    Relative entropy has the closed form
    ``logx(r) - log(s) + (1-P) log(s) (1-P) + P``; at full rank any family
    reduces to the ordinary first gradient; otherwise one-sided finite
    differences along tangent directions are used.
    """
    if m.family == "relative_entropy":
        p = zeroth_power(rho).matrix
        q = np.eye(rho.dim) - p
        log_sigma = _log_of_positive(sigma)
        return hermitize(log_cross(rho).matrix - log_sigma + q @ log_sigma @ q + p)
    if rho.rank == rho.dim:
        return grad1(m, PositiveOperator(rho.op), sigma)
    return _fd_tangent_gradient(m, rho, sigma)


def _psd_clamp(arr: np.ndarray, floor: float) -> PsdOperator:
    """Snap small negative eigenvalues to zero; reject genuine negativity."""
    w, v = _eigh((arr + arr.conj().T) / 2.0)
    if w[0] < -floor:
        raise PositivityError(f"probe left the PSD cone (eigenvalue {w[0]:.3e})")
    w = np.maximum(w, 0.0)
    return PsdOperator(hermitize((v * w) @ v.conj().T), zero_tol=floor)


def _fd_tangent_gradient(m: MeasureSpec, rho: PsdOperator, sigma: PositiveOperator) -> HermitianOperator:
    """One-sided finite differences along tangent probes, dualized.

    Carries an O(h) bias, so this path is a diagnostic rather than a
    certificate at the tight tolerances of the closed forms.
    """
    n = rho.dim
    h = 1e-5 * max(1.0, float(np.linalg.norm(rho.matrix)))
    base = evaluate_psd(m, rho, sigma)
    vals = np.empty(n * n)
    for i, b in enumerate(hermitian_basis(n)):
        probe = tangent_project(rho, b).matrix
        if float(np.linalg.norm(probe)) < 1e-14:
            vals[i] = 0.0
            continue
        try:
            shifted = _psd_clamp(rho.matrix + h * probe, floor=1e-7 * max(1.0, h))
            vals[i] = (evaluate_psd(m, shifted, sigma) - base) / h
        except (PositivityError, ValueError) as exc:
            raise ValueError(
                f"boundary derivative undefined along tangent direction {i}: {exc}"
            ) from exc
    return dualize(LinearFunctionalSample(n, vals))


def boundary_residual_general(m: MeasureSpec, ch: KrausChannel, rho, sigma) -> HermitianOperator:
    """Tangent-space gradient residual for a PSD first argument:

        grad_ext(r) - [ L*(grad_ext(L r)) - (1-P) L*(grad_ext(L r)) (1-P) ]

    Reduces to :func:`residual1` when rho has full rank.
    """
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    sigma = _positive_or_boundary(sigma, "sigma")
    sigma_out = _positive_or_boundary(apply(ch, sigma.op), "channel image of sigma")
    rho_out = PsdOperator(apply(ch, rho.op))
    g_in = _extended_gradient(m, rho, sigma)
    g_out = _extended_gradient(m, rho_out, sigma_out)
    back = adjoint_apply(ch, g_out).matrix
    q = np.eye(rho.dim) - zeroth_power(rho).matrix
    return hermitize(g_in.matrix - (back - q @ back @ q))


def hiai_residual(ch: KrausChannel, rho, sigma) -> np.ndarray:
    """Residual of the asymmetric support-logarithm condition

        logx(r) - log(s) P  =  L*( logx(L r) - log(L s) P' )

    with P, P' the support projectors of r and L(r). The two sides are not
    Hermitian in general, so a plain complex matrix is returned.
    """
    rho = rho if isinstance(rho, PsdOperator) else PsdOperator(rho)
    sigma = _positive_or_boundary(sigma, "sigma")
    sigma_out = _positive_or_boundary(apply(ch, sigma.op), "channel image of sigma")
    rho_out = PsdOperator(apply(ch, rho.op))

    lhs = log_cross(rho).matrix - _log_of_positive(sigma) @ zeroth_power(rho).matrix
    inner = (
        log_cross(rho_out).matrix
        - _log_of_positive(sigma_out) @ zeroth_power(rho_out).matrix
    )
    rhs = np.zeros_like(lhs)
    for k in ch.kraus:
        rhs += k.conj().T @ inner @ k
    return lhs - rhs


# ---------------------------------------------------------------------------
# Petz recovery
# ---------------------------------------------------------------------------


def petz_map(sigma, ch: KrausChannel) -> KrausChannel:
    """The Petz recovery channel
    ``R(X) = s^{1/2} L*( (Ls)^{-1/2} X (Ls)^{-1/2} ) s^{1/2}``.

    Satisfies ``R(L(s)) = s`` identically, and recovers any rho on which the
    channel saturates the data processing inequality.
    """
    sigma = _positive_or_boundary(sigma, "sigma")
    sigma_out = apply(ch, sigma.op)
    try:
        sigma_out_pos = PositiveOperator(sigma_out)
    except PositivityError as exc:
        raise PositivityError(f"channel image of sigma is rank deficient: {exc}") from exc
    ws, vs = _eigh(sigma.matrix)
    s_half = (vs * np.sqrt(ws)) @ vs.conj().T
    wo, vo = _eigh(sigma_out_pos.matrix)
    out_inv_half = (vo * wo ** -0.5) @ vo.conj().T
    kraus = tuple(s_half @ k.conj().T @ out_inv_half for k in ch.kraus)
    return KrausChannel(kraus, tp_tol=1e-9)


def alpha2_petz_residual(ch: KrausChannel, rho, sigma) -> HermitianOperator:
    """Residual of ``s^{-1/2} r s^{-1/2} = L*( (Ls)^{-1/2} (Lr) (Ls)^{-1/2} )``,
    the alpha = 2 sandwiched condition and the original Petz criterion."""
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    rho_out, sigma_out = _channel_images(ch, rho, sigma)
    ws, vs = _eigh(sigma.matrix)
    s_inv_half = (vs * ws ** -0.5) @ vs.conj().T
    wo, vo = _eigh(sigma_out.matrix)
    out_inv_half = (vo * wo ** -0.5) @ vo.conj().T
    lhs = s_inv_half @ rho.matrix @ s_inv_half
    inner = hermitize(out_inv_half @ rho_out.matrix @ out_inv_half)
    return hermitize(lhs - adjoint_apply(ch, inner).matrix)


# ---------------------------------------------------------------------------
# Alpha-z cross-checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlphaZCrosscheck:
    """Frobenius norms of three alpha-z saturation residuals."""

    gradient_residual: float
    chehade_residual: float
    zhang_residual: float


def _alpha_z_condition_operator(rho, sigma, alpha: float, z: float, outer_exp: float, core_exp: float) -> np.ndarray:
    ws, vs = _eigh(as_matrix(sigma))
    wr, vr = _eigh(as_matrix(rho))
    inner_exp = (1.0 - alpha) / (2.0 * z)
    s_inner = (vs * ws ** inner_exp) @ vs.conj().T
    s_outer = (vs * ws ** outer_exp) @ vs.conj().T
    r_pow = (vr * wr ** (alpha / z)) @ vr.conj().T
    core = s_inner @ r_pow @ s_inner
    core = (core + core.conj().T) / 2.0
    wc, vc = _eigh(core)
    return s_outer @ ((vc * wc ** core_exp) @ vc.conj().T) @ s_outer


def alpha_z_crosscheck(ch: KrausChannel, rho, sigma, alpha: float, z: float) -> AlphaZCrosscheck:
    """Compare the gradient residual against two alternative alpha-z
    saturation conditions:

    * outer exponent (1-z)/2z with core power z-1,
    * outer exponent (1-a)/2z with core power a-1.

    All three are necessary at saturation; norms are reported side by side.
    """
    m = MeasureSpec.alpha_z(alpha, z)
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    rho_out, sigma_out = _channel_images(ch, rho, sigma)
    grad_norm = frobenius(residual1(m, ch, rho, sigma))

    results = []
    for outer_exp, core_exp in (
        ((1.0 - z) / (2.0 * z), z - 1.0),
        ((1.0 - alpha) / (2.0 * z), alpha - 1.0),
    ):
        f_in = _alpha_z_condition_operator(rho, sigma, alpha, z, outer_exp, core_exp)
        f_out = _alpha_z_condition_operator(rho_out, sigma_out, alpha, z, outer_exp, core_exp)
        res = f_in - adjoint_apply(ch, hermitize(f_out)).matrix
        results.append(float(np.linalg.norm(res)))
    return AlphaZCrosscheck(
        gradient_residual=grad_norm, chehade_residual=results[0], zhang_residual=results[1]
    )


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SaturationReport:
    """Gap, residual operators and norms, recovery errors, verdict."""

    measure: MeasureSpec
    gap: float
    residual1: HermitianOperator
    residual2: HermitianOperator
    residual1_frobenius: float
    residual2_frobenius: float
    residual1_spectral: float
    residual2_spectral: float
    saturated: bool
    petz_recovery_error_rho: float | None
    petz_recovery_error_sigma: float | None
    gap_tol: float = DEFAULT_GAP_TOL
    residual_tol: float = DEFAULT_RESIDUAL_TOL


def build_report(
    m: MeasureSpec,
    ch: KrausChannel,
    rho,
    sigma,
    gap_tol: float = DEFAULT_GAP_TOL,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    with_petz: bool = True,
) -> SaturationReport:
    """Evaluate gap, both residuals, and Petz recovery errors in one pass.

    ``with_petz=False`` skips the recovery map (its construction needs the
    channel image of sigma to be invertible) and leaves the error fields
    unset.
    """
    rho = _positive_or_boundary(rho, "rho")
    sigma = _positive_or_boundary(sigma, "sigma")
    gap = dpi_gap(m, ch, rho, sigma)
    r1 = residual1(m, ch, rho, sigma)
    r2 = residual2(m, ch, rho, sigma)
    n1, n2 = frobenius(r1), frobenius(r2)
    err_rho = err_sigma = None
    if with_petz:
        recovery = petz_map(sigma, ch)
        rho_out, sigma_out = _channel_images(ch, rho, sigma)
        err_rho = float(np.linalg.norm(apply(recovery, rho_out.op).matrix - rho.matrix))
        err_sigma = float(np.linalg.norm(apply(recovery, sigma_out.op).matrix - sigma.matrix))
    saturated = abs(gap) <= gap_tol and n1 <= residual_tol and n2 <= residual_tol
    return SaturationReport(
        measure=m,
        gap=gap,
        residual1=r1,
        residual2=r2,
        residual1_frobenius=n1,
        residual2_frobenius=n2,
        residual1_spectral=float(np.linalg.norm(r1.matrix, 2)),
        residual2_spectral=float(np.linalg.norm(r2.matrix, 2)),
        saturated=saturated,
        petz_recovery_error_rho=err_rho,
        petz_recovery_error_sigma=err_sigma,
        gap_tol=gap_tol,
        residual_tol=residual_tol,
    )


def report_to_json(report: SaturationReport, include_matrices: bool = False) -> dict:
    from .divergences import measure_to_json

    out = {
        "schema_version": "v1",
        "measure": measure_to_json(report.measure),
        "gap": report.gap,
        "residual1_frobenius": report.residual1_frobenius,
        "residual2_frobenius": report.residual2_frobenius,
        "residual1_spectral": report.residual1_spectral,
        "residual2_spectral": report.residual2_spectral,
        "saturated": report.saturated,
        "petz_recovery_error_rho": report.petz_recovery_error_rho,
        "petz_recovery_error_sigma": report.petz_recovery_error_sigma,
        "tolerances": {"gap_tol": report.gap_tol, "residual_tol": report.residual_tol},
    }
    if include_matrices:
        out["residual1"] = matrix_to_json(report.residual1)
        out["residual2"] = matrix_to_json(report.residual2)
    return out

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpisat.channels import (
    KrausChannel,
    adjoint_apply,
    apply,
    channel_from_json,
    channel_to_json,
    compose,
    dephasing_pinching,
    depolarizing,
    identity,
    measure_prepare,
    partial_trace,
    unitary,
    verify_cptp,
)
from dpisat.linalg import HermitianOperator, SchemaError, hs_inner

from _fixtures import (
    gen,
    random_cptp,
    random_hermitian,
    random_positive,
    random_unitary,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


class TestApply:
    def test_identity_channel(self):
        g = gen(300)
        a = random_hermitian(g, 3)
        out = apply(identity(3), a)
        assert np.linalg.norm(out.matrix - a.matrix) <= 1e-14

    def test_full_depolarizing_gives_maximally_mixed(self):
        g = gen(301)
        rho = random_positive(g, 2)
        rho = HermitianOperator(rho.matrix / np.trace(rho.matrix).real)
        out = apply(depolarizing(2, 1.0), rho)
        assert np.linalg.norm(out.matrix - np.eye(2) / 2) <= 1e-12

    def test_depolarizing_half(self):
        out = apply(depolarizing(2, 0.5), HermitianOperator(np.diag([0.9, 0.1]).astype(complex)))
        np.testing.assert_allclose(out.matrix, np.diag([0.7, 0.3]), atol=1e-12)

    def test_partial_trace_against_contraction_oracle(self):
        g = gen(302)
        rho_a = random_positive(g, 2).matrix
        tau_b = random_positive(g, 2).matrix
        joint = np.kron(rho_a, tau_b)
        out = apply(partial_trace(2, 2, "a"), HermitianOperator(joint))
        oracle = np.einsum("abcb->ac", joint.reshape(2, 2, 2, 2))
        assert np.linalg.norm(out.matrix - oracle) <= 1e-12
        assert np.linalg.norm(out.matrix - rho_a * np.trace(tau_b).real) <= 1e-12

    def test_partial_trace_keep_b(self):
        g = gen(303)
        rho_a = random_positive(g, 2).matrix
        tau_b = random_positive(g, 3).matrix
        joint = np.kron(rho_a, tau_b)
        out = apply(partial_trace(2, 3, "b"), HermitianOperator(joint))
        oracle = np.einsum("abac->bc", joint.reshape(2, 3, 2, 3))
        assert np.linalg.norm(out.matrix - oracle) <= 1e-12

    def test_unitary_flip(self):
        out = apply(unitary(SIGMA_X), HermitianOperator(np.diag([0.3, 0.7]).astype(complex)))
        np.testing.assert_allclose(out.matrix, np.diag([0.7, 0.3]), atol=1e-14)

    def test_pinching_kills_off_diagonals(self):
        a = HermitianOperator(np.array([[0.6, 0.2 + 0.1j], [0.2 - 0.1j, 0.4]]))
        out = apply(dephasing_pinching(2), a)
        np.testing.assert_allclose(out.matrix, np.diag([0.6, 0.4]), atol=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            apply(identity(2), np.eye(3, dtype=complex))


class TestAdjoint:
    def test_adjoint_of_identity(self):
        g = gen(310)
        a = random_hermitian(g, 3)
        out = adjoint_apply(identity(3), a)
        assert np.linalg.norm(out.matrix - a.matrix) <= 1e-14

    def test_adjoint_is_unital(self):
        g = gen(311)
        for c in (
            depolarizing(3, 0.4),
            dephasing_pinching(3),
            partial_trace(2, 2, "a"),
            random_cptp(g, 2, 3),
        ):
            out = adjoint_apply(c, np.eye(c.dim_out, dtype=complex))
            assert np.linalg.norm(out.matrix - np.eye(c.dim_in)) <= 1e-10

    def test_duality_identity_rectangular(self):
        g = gen(312)
        c = random_cptp(g, 2, 3)
        a = random_hermitian(g, 3)
        b = random_hermitian(g, 2)
        lhs = hs_inner(adjoint_apply(c, a), b)
        rhs = hs_inner(a, apply(c, b))
        assert lhs == pytest.approx(rhs, abs=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(2, 4), st.integers(2, 4))
    def test_duality_identity_property(self, seed, n_in, n_out):
        g = gen(seed)
        c = random_cptp(g, n_in, n_out)
        a = random_hermitian(g, n_out)
        b = random_hermitian(g, n_in)
        assert hs_inner(adjoint_apply(c, a), b) == pytest.approx(
            hs_inner(a, apply(c, b)), abs=1e-10
        )

    def test_duality_identity_two_hundred_triples(self):
        g = gen(313)
        for trial in range(200):
            n_in = 2 + trial % 3
            n_out = 2 + (trial // 3) % 3
            c = random_cptp(g, n_in, n_out)
            a = random_hermitian(g, n_out)
            b = random_hermitian(g, n_in)
            lhs = hs_inner(adjoint_apply(c, a), b)
            rhs = hs_inner(a, apply(c, b))
            assert abs(lhs - rhs) <= 1e-10


class TestVerifyCptp:
    def test_identity_report(self):
        rep = verify_cptp(identity(3))
        assert rep.tp_error <= 1e-14
        assert rep.choi_min_eig >= -1e-10

    def test_partial_dephasing(self):
        rep = verify_cptp(dephasing_pinching(2, p=0.3))
        assert rep.tp_error <= 1e-12
        assert rep.choi_min_eig >= -1e-10

    def test_scaled_kraus_flags_violation(self):
        bad = tuple(1.1 * k for k in identity(2).kraus)
        c = KrausChannel(bad, tp_tol=1.0)
        rep = verify_cptp(c)
        assert rep.tp_error == pytest.approx(0.21 * np.sqrt(2.0), abs=1e-12)

    def test_construction_rejects_non_tp(self):
        with pytest.raises(ValueError, match="trace preserving"):
            KrausChannel((1.1 * np.eye(2, dtype=complex),))

    def test_random_channels_pass(self):
        g = gen(320)
        for _ in range(10):
            rep = verify_cptp(random_cptp(g, 3, 2))
            assert rep.tp_error <= 1e-10
            assert rep.choi_min_eig >= -1e-10


class TestBuilders:
    def test_depolarizing_rejects_bad_p(self):
        with pytest.raises(ValueError):
            depolarizing(2, 1.5)

    def test_unitary_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            unitary(np.array([[1.0, 0.1], [0.0, 1.0]], dtype=complex))

    def test_pinching_custom_basis(self):
        g = gen(330)
        u = random_unitary(g, 3)
        c = dephasing_pinching(u)
        a = random_hermitian(g, 3)
        out = apply(c, a)
        # In the pinching basis, the result is the diagonal part.
        transformed = u.conj().T @ out.matrix @ u
        original = u.conj().T @ a.matrix @ u
        assert np.linalg.norm(transformed - np.diag(np.diagonal(original))) <= 1e-12

    def test_measure_prepare_action(self):
        g = gen(331)
        u = random_unitary(g, 2)
        povm = [u @ np.diag([1.0, 0.0]).astype(complex) @ u.conj().T,
                u @ np.diag([0.0, 1.0]).astype(complex) @ u.conj().T]
        states = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
        c = measure_prepare(povm, states)
        assert verify_cptp(c).tp_error <= 1e-10
        rho = random_positive(g, 2).matrix
        expected = sum(
            np.trace(e @ rho).real * t for e, t in zip(povm, states)
        )
        out = apply(c, HermitianOperator(rho))
        assert np.linalg.norm(out.matrix - expected) <= 1e-12

    def test_measure_prepare_rejects_bad_povm(self):
        povm = [np.diag([1.0, 0.0]).astype(complex)]
        states = [np.diag([1.0, 0.0]).astype(complex)]
        with pytest.raises(ValueError, match="sum to the identity"):
            measure_prepare(povm, states)

    def test_measure_prepare_rejects_unnormalized_state(self):
        povm = [np.eye(2, dtype=complex)]
        states = [2.0 * np.diag([1.0, 0.0]).astype(complex)]
        with pytest.raises(ValueError, match="trace"):
            measure_prepare(povm, states)


class TestInvariants:
    def test_trace_preservation(self):
        g = gen(340)
        for _ in range(20):
            c = random_cptp(g, 3, 3)
            a = random_hermitian(g, 3)
            assert np.trace(apply(c, a).matrix).real == pytest.approx(
                np.trace(a.matrix).real, abs=1e-10
            )

    def test_positivity_preservation(self):
        g = gen(341)
        for _ in range(20):
            c = random_cptp(g, 3, 2)
            rho = random_positive(g, 3)
            w = np.linalg.eigvalsh(apply(c, rho.op).matrix)
            assert w[0] >= -1e-9

    def test_composition(self):
        g = gen(342)
        c1 = random_cptp(g, 3, 2)
        c2 = random_cptp(g, 2, 4)
        a = random_hermitian(g, 3)
        sequential = apply(c2, apply(c1, a))
        fused = apply(compose(c2, c1), a)
        assert np.linalg.norm(sequential.matrix - fused.matrix) <= 1e-12


class TestChannelJson:
    def test_roundtrip_explicit(self):
        g = gen(350)
        c = random_cptp(g, 2, 3)
        back = channel_from_json(channel_to_json(c))
        assert back.dim_in == 2 and back.dim_out == 3
        a = random_hermitian(g, 2)
        assert np.linalg.norm(apply(back, a).matrix - apply(c, a).matrix) <= 1e-14

    def test_builder_shorthand(self):
        c = channel_from_json({"builder": "depolarizing", "dim": 2, "p": 0.5})
        out = apply(c, HermitianOperator(np.diag([0.9, 0.1]).astype(complex)))
        np.testing.assert_allclose(out.matrix, np.diag([0.7, 0.3]), atol=1e-12)

    def test_unknown_builder(self):
        with pytest.raises(SchemaError, match="builder"):
            channel_from_json({"builder": "teleport", "dim": 2})

    def test_missing_field_path(self):
        with pytest.raises(SchemaError) as err:
            channel_from_json({"builder": "depolarizing", "dim": 2}, "channel")
        assert "channel.p" in str(err.value)

    def test_partial_trace_builder(self):
        c = channel_from_json(
            {"builder": "partial_trace", "dim_a": 2, "dim_b": 2, "keep": "a"}
        )
        assert c.dim_in == 4 and c.dim_out == 2

"""Eve's taps: intercept collapse branches and Pauli disturbance."""

from itertools import product

import pytest

from qdialogue.attacks import (
    AppliedPauli,
    CoinIZ,
    DisturbPauli,
    Fixed,
    InterceptMeasure,
    MeasuredBranch,
    Passive,
    Route,
    UniformAll4,
    apply_eve,
)
from qdialogue.qcore import (
    ALG_TOL,
    Convention,
    PauliCode,
    RandomSource,
    TwoQubitState,
    apply_pauli_t,
    bell_state,
    equal_up_to_global_phase,
    pauli_action_closed_form,
)

OE = Convention.OPERATOR_ENCODING


def collapsed_product(h_bit, code, t_in):
    """|h>_h C_{code}|t_in>_t as a state, with exact closed-form phase."""
    phase, t_out = pauli_action_closed_form(code, t_in)
    amp = [0j] * 4
    amp[2 * h_bit + t_out] = phase.as_complex()
    return TwoQubitState(amp)


def test_passive_is_identity():
    s = bell_state(OE, 1, 0)
    out, rec = apply_eve(Passive(), Route.B_TO_A, s, RandomSource(0))
    assert out.amp == s.amp and rec is None


def test_route_mismatch_is_noop():
    s = bell_state(OE, 0, 1)
    rng = RandomSource(0)
    out, rec = apply_eve(InterceptMeasure(Route.B_TO_A), Route.A_TO_B, s, rng)
    assert out.amp == s.amp and rec is None
    out, rec = apply_eve(DisturbPauli(Route.A_TO_B, Fixed(1, 1)), Route.B_TO_A, s, rng)
    assert out.amp == s.amp and rec is None


class TestInterceptMeasure:
    @pytest.mark.parametrize("k,l", list(product((0, 1), repeat=2)))
    def test_branches_and_collapse(self, k, l):
        strategy = InterceptMeasure(Route.B_TO_A)
        code = PauliCode(k, l)
        seen = set()
        for seed in range(40):
            out, rec = apply_eve(
                strategy, Route.B_TO_A, bell_state(OE, k, l), RandomSource(seed)
            )
            assert isinstance(rec, MeasuredBranch)
            seen.add(rec.branch)
            # branch a: |0>_h C|1>_t, branch b: |1>_h C|0>_t, up to phase
            if rec.branch == "a":
                want = collapsed_product(0, code, 1)
            else:
                want = collapsed_product(1, code, 0)
            assert equal_up_to_global_phase(out, want, ALG_TOL)
        assert seen == {"a", "b"}

    @pytest.mark.parametrize("k,l", list(product((0, 1), repeat=2)))
    def test_branch_probability_is_half(self, k, l):
        # both t outcomes carry Born weight exactly 1/2
        s = bell_state(OE, k, l)
        p0 = abs(s.amp[0]) ** 2 + abs(s.amp[2]) ** 2
        assert abs(p0 - 0.5) <= ALG_TOL

    def test_record_t_outcome_vs_branch(self):
        # for odd codes the a-branch t outcome is 0, not 1: both are recorded
        out, rec = apply_eve(
            InterceptMeasure(Route.B_TO_A),
            Route.B_TO_A,
            bell_state(OE, 0, 1),
            RandomSource(1),
        )
        if rec.branch == "a":
            assert rec.t_outcome == 0
        else:
            assert rec.t_outcome == 1


class TestDisturbPauli:
    def test_fixed_applies_exactly(self):
        s = bell_state(OE, 1, 1)
        out, rec = apply_eve(
            DisturbPauli(Route.A_TO_B, Fixed(1, 0)), Route.A_TO_B, s, RandomSource(0)
        )
        assert rec == AppliedPauli(1, 0)
        want = apply_pauli_t(s, PauliCode(1, 0))
        assert out.amp == want.amp

    def test_uniform4_covers_all_codes(self):
        seen = set()
        for seed in range(60):
            _, rec = apply_eve(
                DisturbPauli(Route.A_TO_B, UniformAll4()),
                Route.A_TO_B,
                bell_state(OE, 0, 0),
                RandomSource(seed),
            )
            seen.add((rec.u, rec.v))
        assert seen == {(0, 0), (0, 1), (1, 0), (1, 1)}

    def test_coin_iz_draws_only_identity_or_z(self):
        seen = set()
        for seed in range(40):
            _, rec = apply_eve(
                DisturbPauli(Route.A_TO_B, CoinIZ()),
                Route.A_TO_B,
                bell_state(OE, 0, 0),
                RandomSource(seed),
            )
            seen.add((rec.u, rec.v))
        assert seen == {(0, 0), (1, 1)}

    def test_norm_preserved(self):
        for seed in range(20):
            out, _ = apply_eve(
                DisturbPauli(Route.B_TO_A, UniformAll4()),
                Route.B_TO_A,
                bell_state(OE, 1, 0),
                RandomSource(seed),
            )
            assert abs(out.norm_sq() - 1.0) <= ALG_TOL

    @pytest.mark.parametrize("route", [Route.B_TO_A, Route.A_TO_B])
    @pytest.mark.parametrize("u,v", list(product((0, 1), repeat=2)))
    def test_commutes_to_shifted_bell_state(self, route, u, v):
        # disturbed round lands on Psi_{i^k^u, j^l^v} up to phase, either route
        for i, j, k, l in product((0, 1), repeat=4):
            s = apply_pauli_t(bell_state(OE, 0, 0), PauliCode(k, l))
            if route is Route.B_TO_A:
                s = apply_pauli_t(s, PauliCode(u, v))
                s = apply_pauli_t(s, PauliCode(i, j))
            else:
                s = apply_pauli_t(s, PauliCode(i, j))
                s = apply_pauli_t(s, PauliCode(u, v))
            want = bell_state(OE, i ^ k ^ u, j ^ l ^ v)
            assert equal_up_to_global_phase(s, want, ALG_TOL)

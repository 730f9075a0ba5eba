import random

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from chainrewrite.algebra import field
from chainrewrite.algebra.groups import MOCK_Q, get_suite
from chainrewrite.kzg import (
    KzgError,
    KzgWitness,
    check_params,
    kzg_commit,
    kzg_create_witness,
    kzg_setup,
    kzg_verify_eval,
)


def sympy_quotient(coeffs, i, q):
    x = sympy.symbols("x")
    f = sympy.Poly(list(reversed(coeffs)), x, modulus=q)
    quot, rem = sympy.div(f, sympy.Poly(x - i, x, modulus=q))
    return [int(c) % q for c in reversed(quot.all_coeffs())], int(rem.as_expr()) % q


def test_setup_sizes(mock):
    _, p = kzg_setup(mock, 1, random.Random(0))
    assert len(p.powers) == 2 and p.degree == 1
    assert p.powers[0] == mock.g and p.h == mock.h


def test_setup_powers_mock(mock):
    a, p = kzg_setup(mock, 2, trapdoor=3)
    assert [mock.dlog(e) for e in p.powers] == [1, 3, 9]
    assert mock.dlog(p.h_alpha) == 3


def test_power_consistency_t8(mock):
    _, p = kzg_setup(mock, 8, random.Random(1))
    assert check_params(p)


def test_commit_examples(mock):
    _, p = kzg_setup(mock, 2, trapdoor=3)
    assert kzg_commit(p, [0, 0]).is_identity()
    assert kzg_commit(p, [11]) == mock.g ** 11
    assert mock.dlog(kzg_commit(p, [1, 2])) == 7


def test_commit_degree_overflow(mock):
    _, p = kzg_setup(mock, 2, trapdoor=3)
    with pytest.raises(KzgError):
        kzg_commit(p, [1, 2, 3, 4])
    with pytest.raises(KzgError):
        kzg_create_witness(p, [1, 2, 3, 4], 1)


def test_witness_examples(mock):
    alpha = 3
    _, p = kzg_setup(mock, 2, trapdoor=alpha)
    w = kzg_create_witness(p, [9], 4)
    assert w.value == 9 and w.w.is_identity()
    w = kzg_create_witness(p, [0, 1], 5)
    assert w.value == 5 and w.w == mock.g
    w = kzg_create_witness(p, [1, 2, 1], 2)
    quot, rem = sympy_quotient([1, 2, 1], 2, MOCK_Q)
    assert (rem, quot) == (9, [4, 1])
    assert w.value == 9
    assert mock.dlog(w.w) == alpha + 4


def test_verify_examples(mock):
    _, p = kzg_setup(mock, 2, trapdoor=3)
    f = [1, 2]
    C = kzg_commit(p, f)
    w = kzg_create_witness(p, f, 4)
    assert kzg_verify_eval(p, C, w)
    assert not kzg_verify_eval(p, C, KzgWitness(w.index, w.value + 1, w.w))
    # wrong point, value f(4): e(g^(7-9), h) vs e(g^2, h^(3-5)) -> -2 vs -4
    assert not kzg_verify_eval(p, C, KzgWitness(5, w.value, w.w))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, MOCK_Q - 1), min_size=1, max_size=5), st.integers(0, MOCK_Q - 1),
       st.integers(1, MOCK_Q - 1))
def test_completeness(coeffs, i, alpha):
    s = get_suite("mock")
    _, p = kzg_setup(s, 4, trapdoor=alpha)
    C = kzg_commit(p, coeffs)
    assert kzg_verify_eval(p, C, kzg_create_witness(p, coeffs, i))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, MOCK_Q - 1), min_size=2, max_size=5), st.integers(0, MOCK_Q - 1),
       st.integers(1, MOCK_Q - 1), st.sampled_from(["index", "value", "w"]))
def test_single_field_mutation_rejected(coeffs, i, delta, which):
    s = get_suite("mock")
    alpha, q = 12345, MOCK_Q
    _, p = kzg_setup(s, 4, trapdoor=alpha)
    C = kzg_commit(p, coeffs)
    w = kzg_create_witness(p, coeffs, i)
    if which == "index":
        bad = KzgWitness((w.index + delta) % q, w.value, w.w)
        # the moved opening still passes only if f(a) - f(i) == q(a) * (a - i'), a zero-probability event
        lhs = (field.evaluate(coeffs, alpha, q) - w.value) % q
        assume(lhs != s.dlog(w.w) * (alpha - bad.index) % q)
    elif which == "value":
        bad = KzgWitness(w.index, (w.value + delta) % q, w.w)
    else:
        bad = KzgWitness(w.index, w.value, w.w * s.g ** delta)
    assert not kzg_verify_eval(p, C, bad)


def test_production_round_trip(production):
    rng = random.Random(4)
    _, p = kzg_setup(production, 4, rng)
    assert check_params(p)
    f = [production.random_scalar(rng) for _ in range(5)]
    C = kzg_commit(p, f)
    w = kzg_create_witness(p, f, 7)
    assert kzg_verify_eval(p, C, w)
    assert not kzg_verify_eval(p, C, KzgWitness(7, (w.value + 1) % production.q, w.w))

"""Pairing-based polynomial commitments with single-point opening proofs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import field
from .algebra.groups import Element, PairingSuite, default_rng


class KzgError(ValueError):
    pass


@dataclass(frozen=True)
class KzgParams:
    powers: tuple  # g^(a^0) .. g^(a^t)
    h: Element
    h_alpha: Element

    @property
    def degree(self) -> int:
        return len(self.powers) - 1

    @property
    def suite(self) -> PairingSuite:
        return self.h.suite


@dataclass(frozen=True)
class KzgWitness:
    index: int
    value: int
    w: Element


def kzg_setup(suite: PairingSuite, t: int, rng=None, trapdoor: int | None = None):
    """Returns ``(trapdoor, params)``; callers should drop the trapdoor."""
    if t < 1:
        raise KzgError("degree bound must be at least 1")
    a = trapdoor if trapdoor is not None else suite.random_scalar(default_rng(rng), nonzero=True)
    powers, x = [], 1
    for _ in range(t + 1):
        powers.append(suite.g ** x)
        x = x * a % suite.q
    return a, KzgParams(tuple(powers), suite.h, suite.h ** a)


def check_params(params: KzgParams) -> bool:
    s = params.suite
    for j in range(params.degree):
        if s.pair(params.powers[j], params.h_alpha) != s.pair(params.powers[j + 1], params.h):
            return False
    return params.powers[0] == s.g and params.h == s.h


def kzg_commit(params: KzgParams, coeffs: Sequence[int]) -> Element:
    coeffs = field.trim([c % params.suite.q for c in coeffs])
    if len(coeffs) - 1 > params.degree:
        raise KzgError(f"degree {len(coeffs) - 1} exceeds bound {params.degree}")
    if not coeffs:
        return params.suite.identity("G")
    return params.suite.multi_exp(list(params.powers[:len(coeffs)]), coeffs)


def kzg_create_witness(params: KzgParams, coeffs: Sequence[int], i: int) -> KzgWitness:
    q = params.suite.q
    coeffs = field.trim([c % q for c in coeffs])
    if len(coeffs) - 1 > params.degree:
        raise KzgError(f"degree {len(coeffs) - 1} exceeds bound {params.degree}")
    quotient, value = field.divide_by_linear(coeffs, i % q, q)
    quotient = field.trim(quotient)
    if quotient:
        w = params.suite.multi_exp(list(params.powers[:len(quotient)]), quotient)
    else:
        w = params.suite.identity("G")
    return KzgWitness(i % q, value, w)


def kzg_verify_point(params: KzgParams, C: Element, i: int, g_value: Element, w: Element) -> bool:
    """Opening check with the evaluation given only as ``g^f(i)``."""
    s = params.suite
    lhs = s.pair(C / g_value, params.h)
    rhs = s.pair(w, params.h_alpha / params.h ** i)
    return lhs == rhs


def kzg_verify_eval(params: KzgParams, C: Element, wit: KzgWitness) -> bool:
    return kzg_verify_point(params, C, wit.index, params.suite.g ** wit.value, wit.w)

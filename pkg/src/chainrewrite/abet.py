"""Key-policy attribute-based encryption with hierarchical committee indexes
and blackbox tracing.

A ciphertext carries an attribute set in clear and a hidden index vector
(I_1..I_j). A key carries a policy and an index prefix (I_1..I_i); it opens
the ciphertext when the attributes satisfy the policy and the key's prefix
extends to the ciphertext's vector by delegation, that is i <= j <= k.

Decryption recovers two target-group values
``B = e(g,h)^(alpha*s)`` (policy part) and ``A = e(g,h)^(theta*s/alpha)``
(index part) whose hash masks the padded 256-bit payload.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Sequence

from .algebra import field
from .algebra.groups import Element, PairingSuite, default_rng
from .algebra.policy import MSP, attribute_scalar, lss_share, msp_satisfy, policy_to_msp
from .chameleon import R_BYTES
from .sigma import PAD_BYTES

MASK_BYTES = R_BYTES + PAD_BYTES


class AbetError(ValueError):
    pass


class TraceError(RuntimeError):
    pass


def index_value(level: int, q: int) -> int:
    """System-wide index I_level; never zero."""
    data = b"committee" + level.to_bytes(4, "big")
    while True:
        v = field.hash_to_scalar(data, q)
        if v:
            return v
        data = hashlib.sha256(data).digest()


@dataclass(frozen=True)
class AbetPublic:
    k: int
    g: Element
    h: Element
    u: Element
    v: Element
    w: Element
    egh_alpha: Element  # e(g,h)^alpha
    egh_theta: Element  # e(g,h)^(theta/alpha)
    g_lvl: tuple  # g^(alpha z_l), l = 1..k
    h_lvl: tuple  # h^(alpha z_l), l = 1..k+1 (the last level is only used for tracing)
    g_beta: Element
    h_inv_alpha: Element
    h_beta_alpha: Element

    @property
    def suite(self) -> PairingSuite:
        return self.g.suite

    def index(self, depth: int) -> tuple:
        if not 0 <= depth <= self.k + 1:
            raise AbetError(f"index depth {depth} outside 0..{self.k + 1}")
        return tuple(index_value(l, self.suite.q) for l in range(1, depth + 1))


@dataclass(frozen=True)
class AbetMaster:
    alpha: int
    beta: int
    theta: int
    z: tuple
    mpk: AbetPublic


@dataclass(frozen=True)
class KeyRow:
    label: str
    k1: Element  # g^lambda w^t
    k2: Element  # (u^A v)^-t
    k3: Element  # h^t


@dataclass(frozen=True)
class AbetSecretKey:
    msp: MSP
    rows: tuple
    k0a: Element  # g^(t*/alpha)
    k0b: Element  # g^r*
    k1: Element  # g^theta * i_hat^t* * g^(beta r*)
    deleg: tuple  # g_l^(alpha t*) for l = depth+1..k
    g_inv_alpha: Element
    index: tuple

    @property
    def depth(self) -> int:
        return len(self.index)


@dataclass(frozen=True)
class AbetCiphertext:
    mask: bytes
    attrs: tuple  # (label, h^r, (u^A v)^r w^-s), sorted by label bytes
    ct0: tuple  # (h^s, h^(s/alpha), h^(beta s/alpha))
    ct1: Element  # j_hat^s

    @property
    def labels(self) -> tuple:
        return tuple(a[0] for a in self.attrs)


def abet_setup(suite: PairingSuite, k: int, rng=None, alpha=None, beta=None, theta=None, z=None) -> AbetMaster:
    if k < 1:
        raise AbetError("committee capacity must be at least 1")
    rng = default_rng(rng)
    q = suite.q
    nz = lambda: suite.random_scalar(rng, nonzero=True)
    alpha = alpha if alpha is not None else nz()
    beta = beta if beta is not None else nz()
    theta = theta if theta is not None else nz()
    z = tuple(z) if z is not None else tuple(nz() for _ in range(k + 1))
    if len(z) == k:
        z = z + (nz(),)
    if len(z) != k + 1 or not alpha % q:
        raise AbetError("bad master parameters")
    g, h = suite.g, suite.h
    ia = field.inv(alpha, q)
    mpk = AbetPublic(
        k=k, g=g, h=h,
        u=g ** nz(), v=g ** nz(), w=g ** nz(),
        egh_alpha=suite.gt ** alpha,
        egh_theta=suite.gt ** (theta * ia),
        g_lvl=tuple(g ** (alpha * zl) for zl in z[:k]),
        h_lvl=tuple(h ** (alpha * zl) for zl in z),
        g_beta=g ** beta,
        h_inv_alpha=h ** ia,
        h_beta_alpha=h ** (beta * ia),
    )
    return AbetMaster(alpha % q, beta % q, theta % q, z, mpk)


def _i_hat(mpk: AbetPublic, index: Sequence[int]) -> Element:
    s = mpk.suite
    if not index:
        return mpk.g
    return mpk.g * s.multi_exp(list(mpk.g_lvl[:len(index)]), list(index))


def _j_hat(mpk: AbetPublic, index: Sequence[int]) -> Element:
    s = mpk.suite
    if not index:
        return mpk.h
    return mpk.h * s.multi_exp(list(mpk.h_lvl[:len(index)]), list(index))


def _attr_base(mpk: AbetPublic, label: str) -> Element:
    return mpk.u ** attribute_scalar(label, mpk.suite.q) * mpk.v


def abet_keygen_from(mpk: AbetPublic, alpha: int, theta: int, policy, index: Sequence[int], rng=None) -> AbetSecretKey:
    """Key generation needing only alpha, theta and the public key."""
    rng = default_rng(rng)
    s = mpk.suite
    q = s.q
    index = tuple(i % q for i in index)
    if not 1 <= len(index) <= mpk.k:
        raise AbetError(f"key depth must be in 1..{mpk.k}")
    msp = policy if isinstance(policy, MSP) else policy_to_msp(policy, q)
    rows = []
    t_star = 0
    for i, lam in lss_share(msp, alpha, rng):
        t = s.random_scalar(rng, nonzero=True)
        t_star += t
        label = msp.labels[i]
        rows.append(KeyRow(label, mpk.g ** lam * mpk.w ** t, _attr_base(mpk, label) ** (-t), mpk.h ** t))
    t_star %= q
    r_star = s.random_scalar(rng, nonzero=True)
    ia = field.inv(alpha, q)
    d = len(index)
    return AbetSecretKey(
        msp=msp,
        rows=tuple(rows),
        k0a=mpk.g ** (t_star * ia),
        k0b=mpk.g ** r_star,
        k1=mpk.g ** theta * _i_hat(mpk, index) ** t_star * mpk.g_beta ** r_star,
        deleg=tuple(mpk.g_lvl[l] ** t_star for l in range(d, mpk.k)),
        g_inv_alpha=mpk.g ** ia,
        index=index,
    )


def abet_keygen(master: AbetMaster, policy, index: Sequence[int], rng=None) -> AbetSecretKey:
    return abet_keygen_from(master.mpk, master.alpha, master.theta, policy, index, rng)


def abet_delegate(mpk: AbetPublic, key: AbetSecretKey, I_next: int | None = None, rng=None) -> AbetSecretKey:
    """Extend the key's index by one level and re-randomize t*."""
    if key.depth >= mpk.k or not key.deleg:
        raise AbetError("no delegation elements left")
    s = mpk.suite
    q = s.q
    if I_next is None:
        I_next = index_value(key.depth + 1, q)
    index = key.index + (I_next % q,)
    tp = s.random_scalar(default_rng(rng), nonzero=True)
    k1 = key.k1 * key.deleg[0] ** I_next * _i_hat(mpk, index) ** tp
    deleg = tuple(d * mpk.g_lvl[l] ** tp for d, l in zip(key.deleg[1:], range(len(index), mpk.k)))
    return replace(key, k0a=key.k0a * key.g_inv_alpha ** tp, k1=k1, deleg=deleg, index=index)


def _mask(B: Element, A: Element) -> bytes:
    return hashlib.shake_256(bytes(B) + bytes(A)).digest(MASK_BYTES)


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def abet_enc(mpk: AbetPublic, R: bytes, attrs: Iterable[str], index: Sequence[int], rng=None) -> AbetCiphertext:
    if len(R) != R_BYTES:
        raise AbetError(f"payload must be {R_BYTES} bytes")
    labels = sorted(set(attrs), key=lambda x: x.encode("utf-8"))
    if not labels:
        raise AbetError("attribute set must be nonempty")
    if len(index) > mpk.k + 1:
        raise AbetError("index deeper than the hierarchy")
    rng = default_rng(rng)
    s_ = mpk.suite
    q = s_.q
    sec = s_.random_scalar(rng, nonzero=True)
    comps = []
    w_s = mpk.w ** (-sec)
    for label in labels:
        r = s_.random_scalar(rng, nonzero=True)
        comps.append((label, mpk.h ** r, _attr_base(mpk, label) ** r * w_s))
    B = mpk.egh_alpha ** sec
    A = mpk.egh_theta ** sec
    mask = _xor(R + bytes(PAD_BYTES), _mask(B, A))
    ct0 = (mpk.h ** sec, mpk.h_inv_alpha ** sec, mpk.h_beta_alpha ** sec)
    return AbetCiphertext(mask, tuple(comps), ct0, _j_hat(mpk, [i % q for i in index]) ** sec)


def _policy_part(key: AbetSecretKey, ct: AbetCiphertext) -> Optional[Element]:
    coeffs = msp_satisfy(key.msp, ct.labels)
    if coeffs is None:
        return None
    by_label = {a[0]: a for a in ct.attrs}
    pairs = []
    for i, gamma in coeffs.items():
        row = key.rows[i]
        _, c1, c2 = by_label[row.label]
        pairs += [(row.k1 ** gamma, ct.ct0[0]), (row.k2 ** gamma, c1), (c2 ** gamma, row.k3)]
    return key.k1.suite.multi_pair(pairs)


def _index_part(key_k1: Element, key: AbetSecretKey, ct: AbetCiphertext) -> Element:
    s = key_k1.suite
    return s.multi_pair([(key_k1, ct.ct0[1]), (key.k0a.inverse(), ct.ct1), (key.k0b.inverse(), ct.ct0[2])])


def abet_dec_detail(mpk: AbetPublic, ct: AbetCiphertext, key: AbetSecretKey):
    """Returns ``(R, depth, B, A)`` on success, None otherwise.

    B is computed once; the index part is retried while walking the key
    down the hierarchy with deterministic delegation.
    """
    B = _policy_part(key, ct)
    if B is None:
        return None
    q = mpk.suite.q
    k1 = key.k1
    for d in range(key.depth, mpk.k + 1):
        A = _index_part(k1, key, ct)
        plain = _xor(ct.mask, _mask(B, A))
        if plain[R_BYTES:] == bytes(PAD_BYTES):
            return plain[:R_BYTES], d, B, A
        if d < mpk.k:
            k1 = k1 * key.deleg[d - key.depth] ** index_value(d + 1, q)
    return None


def abet_dec(mpk: AbetPublic, ct: AbetCiphertext, key: AbetSecretKey) -> Optional[bytes]:
    out = abet_dec_detail(mpk, ct, key)
    return out[0] if out else None


# -- tracing ------------------------------------------------------------------

class KeyBlackbox:
    """Decryption box built from a list of keys; returns the first opening."""

    def __init__(self, mpk: AbetPublic, keys: Sequence[AbetSecretKey] = ()):
        self.mpk = mpk
        self.keys = list(keys)

    def __call__(self, ct: AbetCiphertext) -> Optional[bytes]:
        for key in self.keys:
            R = abet_dec(self.mpk, ct, key)
            if R is not None:
                return R
        return None


def success_curve(mpk: AbetPublic, blackbox: Callable, attrs, trials: int, rng=None) -> list[float]:
    """Estimated probability that ``blackbox`` decrypts at depths 0..k+1."""
    rng = default_rng(rng)
    curve = []
    for j in range(mpk.k + 2):
        idx = mpk.index(j)
        hits = 0
        for _ in range(trials):
            R = rng.getrandbits(8 * R_BYTES).to_bytes(R_BYTES, "big")
            ct = abet_enc(mpk, R, attrs, idx, rng)
            try:
                out = blackbox(ct)
            except Exception as exc:
                raise TraceError(f"blackbox failed: {exc}") from exc
            hits += out == R
        curve.append(hits / trials)
    return curve


def abet_trace(mpk: AbetPublic, blackbox: Callable, probes: Iterable, eps: float = 0.5, trials: int = 1, rng=None) -> set:
    """Depths in 1..k at which some probe's success rate jumps by at least eps.

    Depth 0 (no index) and depth k+1 (beyond every issued key) bracket the
    sweep, so a key at depth d shows up as a rising edge at d.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = default_rng(rng)
    accused = set()
    for attrs in probes:
        p = success_curve(mpk, blackbox, attrs, trials, rng)
        for j in range(1, mpk.k + 1):
            if p[j] - p[j - 1] >= eps:
                accused.add(j)
    return accused

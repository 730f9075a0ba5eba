import random

import pytest

from chainrewrite.abet import (
    KeyBlackbox,
    TraceError,
    abet_delegate,
    abet_keygen,
    abet_setup,
    abet_trace,
    success_curve,
)


@pytest.fixture
def master(mock):
    return abet_setup(mock, 8, random.Random(20))


def test_single_key_depth_two(master):
    rng = random.Random(1)
    bb = KeyBlackbox(master.mpk, [abet_keygen(master, "A", master.mpk.index(2), rng)])
    curve = success_curve(master.mpk, bb, ["A"], 1, rng)
    assert curve == [0, 0] + [1] * 7 + [0]
    assert abet_trace(master.mpk, bb, [["A"]], trials=1, rng=rng) == {2}


def test_empty_blackbox(master):
    assert abet_trace(master.mpk, KeyBlackbox(master.mpk), [["A"], ["B"]], rng=random.Random(2)) == set()


def test_two_disjoint_keys(master):
    rng = random.Random(3)
    keys = [abet_keygen(master, "finance", master.mpk.index(2), rng),
            abet_keygen(master, "legal OR (audit AND court)", master.mpk.index(5), rng)]
    bb = KeyBlackbox(master.mpk, keys)
    assert abet_trace(master.mpk, bb, [["finance"], ["legal"]], rng=rng) == {2, 5}
    assert abet_trace(master.mpk, bb, [["audit", "court"]], rng=rng) == {5}
    assert abet_trace(master.mpk, bb, [["audit"]], rng=rng) == set()


def test_delegated_key_traces_to_its_depth(master):
    rng = random.Random(4)
    key = abet_delegate(master.mpk, abet_keygen(master, "A", master.mpk.index(1), rng), rng=rng)
    bb = KeyBlackbox(master.mpk, [key])
    assert abet_trace(master.mpk, bb, [["A"]], rng=rng) == {2}


def test_noisy_blackbox_with_trials(master):
    rng = random.Random(5)
    inner = KeyBlackbox(master.mpk, [abet_keygen(master, "A", master.mpk.index(3), rng)])
    coin = random.Random(6)

    def flaky(ct):
        return inner(ct) if coin.random() < 0.9 else None

    assert abet_trace(master.mpk, flaky, [["A"]], eps=0.5, trials=40, rng=rng) == {3}


def test_unresponsive_blackbox(master):
    def broken(ct):
        raise OSError("device gone")

    with pytest.raises(TraceError):
        abet_trace(master.mpk, broken, [["A"]], rng=random.Random(7))

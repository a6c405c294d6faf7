import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from adaptive_ic.adversaries import (
    MidpointAdversary, NoNoise, PatternAdversary, RandomBudgeted, RandomDeletion, RollingAdversary,
    SilenceAll, SteerOneThird, count_patterns, enumerate_patterns, rolling_change,
)
from adaptive_ic.adversaries.basic import _alternative
from adaptive_ic.channel import ALICE, BOB, ERASURE, SILENCE, metrics
from adaptive_ic.codes import Field
from adaptive_ic.errors import ConfigurationError
from adaptive_ic.protocols import FullExchangeProtocol, make_one_third, make_two_thirds


@pytest.fixture(scope="module")
def one_third():
    return make_one_third(4, 0.1)


def test_alternative_skips_the_sent_symbol():
    # alphabet {SILENCE, 0, 1, 2}
    assert [_alternative(SILENCE, i) for i in range(3)] == [0, 1, 2]
    assert [_alternative(1, i) for i in range(3)] == [SILENCE, 0, 2]
    assert [_alternative(2, i) for i in range(3)] == [SILENCE, 0, 1]


def test_enumerate_counts():
    assert count_patterns(36, 6) == 2_391_496
    assert count_patterns(5, 2, 3) == 1 + 15 + 10 * 9
    pats = list(enumerate_patterns(5, 2, 3))
    assert len(pats) == 106 and len(set(pats)) == 106
    assert pats[0] == () and pats[1] == ((0, 0),)
    assert count_patterns(3, 9) == 8


@settings(max_examples=40, deadline=None)
@given(n=st.integers(0, 7), w=st.integers(0, 4), a=st.integers(1, 3))
def test_enumerate_matches_count(n, w, a):
    assert sum(1 for _ in enumerate_patterns(n, w, a)) == count_patterns(n, w, a)


def test_enumerate_rejects_negative():
    with pytest.raises(ConfigurationError):
        list(enumerate_patterns(-1, 2))


def test_random_adversaries_are_seed_deterministic(one_third):
    for cls in (RandomBudgeted, RandomDeletion):
        a = one_third.run(2, 7, cls(0.2, seed=4))
        b = one_third.run(2, 7, cls(0.2, seed=4))
        c = one_third.run(2, 7, cls(0.2, seed=5))
        assert a.delivered == b.delivered and a.delivered != c.delivered


def test_random_budgeted_rate(one_third):
    adv = RandomBudgeted(0.3, seed=1)
    rec = one_third.run(1, 1, adv)
    hit = sum(1 for s, d in zip(rec.sent, rec.delivered) if s != d)
    assert hit == adv.corruptions
    assert abs(hit / len(rec.sent) - 0.3) < 0.08


def test_deletion_only_removes():
    p = make_two_thirds(2, 2, 3)
    rec = p.run(1, 2, RandomDeletion(0.5, seed=2))
    for s, d in zip(rec.sent, rec.delivered):
        assert d == s or (s != SILENCE and d == SILENCE)


def test_probability_range_checked():
    with pytest.raises(ConfigurationError):
        RandomBudgeted(1.5)
    with pytest.raises(ConfigurationError):
        RandomDeletion(-0.1)


def test_pattern_adversary_on_erasure_channel():
    from adaptive_ic.channel import run_adp
    from adaptive_ic.channel import Party

    class Zero(Party):
        def next_action(self, rnd):
            return 0

    rec = run_adp(Zero(), Zero(), PatternAdversary({1: 0}), 2, alphabet_size=1, erasure=True)
    assert rec.delivered == [0, ERASURE, 0, 0]


def test_silence_all_one_direction():
    p = make_two_thirds(2, 2, 3)
    rec = p.run(2, 2, SilenceAll((BOB,)))
    assert all(d == SILENCE for d, w in zip(rec.delivered, rec.slot_senders) if w == BOB)
    assert rec.outputs[1] == (2, 2)


# ---------------------------------------------------------------- rolling change


def test_rolling_change_examples():
    assert rolling_change((0, 0, 0, 0), (1, 1, 1, 1)).z == (0, 1, 0, 1)
    assert rolling_change((0, 0, 0), (1, 1, 1)).z == (0, 1, 1)
    assert rolling_change((0, 1, 0), (0, 1, 0)).z == (0, 0, 0)
    assert rolling_change((1,), (0,)).z == (1,)
    # over GF(4) the change is y - x, which is y xor x
    assert rolling_change((1, 2), (3, 0), 4).z == (0, 2)
    with pytest.raises(ConfigurationError):
        rolling_change((0,), (0, 1))


def _check_rolling(x, y, q):
    fld = Field(q)
    z = rolling_change(x, y, q)
    moved = tuple(fld.add(a, b) for a, b in zip(x, z.z))
    d_x = sum(a != b for a, b in zip(moved, x))
    d_y = sum(a != b for a, b in zip(moved, y))
    assert d_y <= d_x
    for j in range(1, len(x) + 1):
        assert 2 * z.weight(j) <= j + 1


@settings(max_examples=300, deadline=None)
@given(data=st.data(), q=st.sampled_from([2, 4]), n=st.integers(1, 32))
def test_rolling_change_property(data, q, n):
    x = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    y = data.draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    _check_rolling(tuple(x), tuple(y), q)


def test_rolling_change_exhaustive_short():
    for n in range(1, 7):
        for x, y in itertools.product(itertools.product(range(2), repeat=n), repeat=2):
            _check_rolling(x, y, 2)


# ---------------------------------------------------------------- shadow attacks


def test_rolling_attack_makes_alice_blind():
    p = FullExchangeProtocol(16)
    x, y = 0x1234, 0x00AB
    y_alt = y ^ (0x2A << 10)
    views = []
    for yy in (y, y_alt):
        rec = p.run(x, yy, RollingAdversary(y, y_alt))
        views.append([d for d, w in zip(rec.delivered, rec.slot_senders) if w == BOB])
        bob_slots = [i for i, w in enumerate(rec.slot_senders) if w == BOB]
        for r in range(1, p.r_max):
            hits = sum(1 for i in bob_slots[:r] if rec.sent[i] != rec.delivered[i])
            assert hits <= max(0, (r - 9) // 2)
    assert views[0] == views[1]


def test_midpoint_is_symmetric_over_the_quadruple(one_third):
    xs, ys = (3, 4), (5, 9)
    runs = {}
    for x, y in itertools.product(xs, ys):
        adv = MidpointAdversary(xs[1] if x == xs[0] else xs[0], ys[1] if y == ys[0] else ys[0])
        runs[(x, y)] = (one_third.run(x, y, adv), adv)
    # Bob receives the same stream whichever of the two x Alice holds
    for y in ys:
        views = [
            [d for d, w in zip(runs[(x, y)][0].delivered, runs[(x, y)][0].slot_senders) if w == ALICE]
            for x in xs
        ]
        assert views[0] == views[1]
    for rec, adv in runs.values():
        assert adv.stopped_at is not None


def test_midpoint_needs_protocol_in_view():
    from adaptive_ic.channel import TermSchedule, run_term

    p = FullExchangeProtocol(4)
    a, b = p.parties(1, 2)
    with pytest.raises(ConfigurationError):
        run_term(a, b, TermSchedule.full(5), MidpointAdversary(0, 0), alphabet_size=2, abort=True)


def test_steer_within_budget_never_wins(one_third):
    # push Alice's codeword toward 6 with 20 symbols and forge Bob's reply with 20 more
    for x, y in [(1, 2), (5, 9), (14, 0)]:
        rec = one_third.run(x, y, SteerOneThird(6, 20, 11, 20, random_positions=True, seed=x))
        m = metrics(rec)
        assert m.nc <= 40
        assert all(o == (x, y) for o in rec.outputs)

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adaptive_ic.channel import ERASURE, SILENCE
from adaptive_ic.codes import (
    SE_ERASURE, BlueberryTable, Field, IdentityTable, SEValue, TreeDecoder, TreeEncoder,
    bb_decode, bb_encode, ecc_decode, ecc_encode, gen_prefix_family, se_decode, se_encode,
    tc_decode, tc_encode, tc_encode_step, tc_gen_hashed, tc_gen_verified, verify_distance,
)
from adaptive_ic.codes.prefix import PrefixCodeFamily
from adaptive_ic.codes.silence import block_counts, se_candidates
from adaptive_ic.codes.treecode import tree_code_from_json
from adaptive_ic.errors import ConfigurationError, GenerationError, PreconditionError


@pytest.fixture(scope="module")
def fam():
    return gen_prefix_family(4, 0.1, (8, 16, 32, 64), field_size=16, seed=3, verify_from=8)


# ---------------------------------------------------------------- field


def test_field_char2_add_is_xor():
    f = Field(16)
    assert f.char2
    for a, b in itertools.product(range(16), repeat=2):
        assert f.add(a, b) == a ^ b == f.sub(a, b)
    assert not Field(5).char2


# ---------------------------------------------------------------- prefix codes


def test_prefix_property(fam):
    for x in range(16):
        full = fam.encode_prefix(x, 64)
        for i, L in enumerate(fam.lengths):
            assert np.array_equal(ecc_encode(fam, i, x), full[:L])


def test_distance_profile_against_pairwise_oracle(fam):
    book = fam.codebook
    for L in (1, 5, 8, 13, 32, 64):
        pair_min = min(int((book[a, :L] != book[b, :L]).sum()) for a, b in itertools.combinations(range(16), 2))
        assert fam.distance_at(L) == pair_min


def test_relative_distance_meets_eps(fam):
    # eps = 0.1 asks for relative distance at least 0.8 at every verified length
    for L in range(8, 65):
        assert fam.distance_at(L) >= Fraction(4, 5) * L
    assert all(r >= 0.8 for r in fam.verified_rel_distance)


def test_decode_under_correctable_corruption(fam):
    rng = np.random.default_rng(0)
    for i, L in enumerate(fam.lengths):
        t = (fam.distance_at(L) - 1) // 2
        for x in range(16):
            w = ecc_encode(fam, i, x).copy()
            pos = rng.choice(L, size=t, replace=False)
            w[pos] = (w[pos] + 1 + rng.integers(0, 15, size=t)) % 16
            assert ecc_decode(fam, w, i) == (x, t)


def test_decode_tie_goes_to_smallest(fam):
    # halfway between codewords 3 and 5, built symbol by symbol
    a, b = fam.encode_prefix(3, 16), fam.encode_prefix(5, 16)
    diff = np.flatnonzero(a != b)
    w = a.copy()
    w[diff[: len(diff) // 2]] = b[diff[: len(diff) // 2]]
    if len(diff) % 2:  # last differing symbol: pick one matching neither
        w[diff[-1]] = next(v for v in range(16) if v not in (a[diff[-1]], b[diff[-1]]))
    da, db = int((w != a).sum()), int((w != b).sum())
    assert da == db
    dist = (fam.codebook[:, :16] != w).sum(axis=1)
    if dist.min() == da:
        assert fam.decode_prefix(w)[0] == int(np.flatnonzero(dist == da)[0])


def test_generation_is_deterministic_and_json_round_trips(fam):
    again = PrefixCodeFamily.from_json(fam.to_json())
    assert np.array_equal(again.generator, fam.generator)
    assert json.loads(fam.to_json())["kind"] == "prefix_family"


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=0), dict(n=17), dict(lengths=(8, 8)), dict(eps=0.5), dict(field_size=6), dict(verify_from=99)],
)
def test_prefix_rejects_bad_config(kwargs):
    base = dict(n=3, eps=0.1, lengths=(8, 16), field_size=16)
    base.update(kwargs)
    with pytest.raises(ConfigurationError):
        gen_prefix_family(**base)


def test_prefix_generation_failure_is_reported():
    with pytest.raises(GenerationError):
        gen_prefix_family(4, 0.45, (2,), field_size=2, max_retries=3)


def test_decode_length_checks(fam):
    with pytest.raises(ConfigurationError):
        ecc_decode(fam, np.zeros(9, dtype=int), 0)
    with pytest.raises(ConfigurationError):
        ecc_encode(fam, 7, 0)
    with pytest.raises(ConfigurationError):
        fam.encode_prefix(16, 8)


@settings(max_examples=40, deadline=None)
@given(x=st.integers(0, 15), L=st.integers(8, 64), data=st.data())
def test_prefix_decode_property(fam, x, L, data):
    t = (fam.distance_at(L) - 1) // 2
    pos = data.draw(st.lists(st.integers(0, L - 1), unique=True, max_size=t))
    w = fam.encode_prefix(x, L).copy()
    for p in pos:
        w[p] ^= data.draw(st.integers(1, 15))
    assert fam.decode_prefix(w)[0] == x


# ---------------------------------------------------------------- silence encoding


def test_se_examples():
    assert se_encode(2, 2, 3) == (SILENCE, SILENCE, 0, 0, SILENCE, SILENCE)
    assert se_decode(se_encode(2, 2, 3), 2, 3) == SEValue(2, 2)
    assert se_decode((0, SILENCE, 0, SILENCE), 2, 2) is SE_ERASURE
    assert se_decode((SILENCE,) * 4, 2, 2) is SE_ERASURE
    assert se_decode((0, 0, 0, SILENCE), 2, 2) == SEValue(1, 1)
    assert block_counts((0, ERASURE, 1, 0), 2, 2) == [1, 1]
    assert se_candidates((0, SILENCE, 0, SILENCE), 1, 4) == {0, 2}
    assert se_candidates((SILENCE,) * 4, 1, 4) is None
    assert se_candidates((0,) * 4, 1, 4) is None


def _slot_variants(sym):
    return [v for v in (SILENCE, 0, ERASURE) if v != sym]


@pytest.mark.parametrize("k,n", [(1, 2), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3), (2, 5)])
def test_se_exhaustive_corruption(k, n):
    """Oracle: try every corruption of up to k+1 slots (each slot to silence, letter or erasure)."""
    for i in range(1, n + 1):
        word = se_encode(i, k, n)
        seen_wrong_at = set()
        for c in range(0, k + 2):
            for pos in itertools.combinations(range(k * n), c):
                for vals in itertools.product(*(_slot_variants(word[p]) for p in pos)):
                    w = list(word)
                    for p, v in zip(pos, vals):
                        w[p] = v
                    res = se_decode(w, k, n)
                    if c <= k - 1:
                        assert isinstance(res, SEValue) and res.index == i
                    if isinstance(res, SEValue) and res.index != i:
                        seen_wrong_at.add(c)
        assert min(seen_wrong_at, default=k + 1) == k + 1


def test_se_rejects_bad_args():
    with pytest.raises(ConfigurationError):
        se_encode(0, 2, 3)
    with pytest.raises(ConfigurationError):
        se_decode((0,) * 5, 2, 3)
    with pytest.raises(ValueError):
        SEValue(1, 0)


@settings(max_examples=80, deadline=None)
@given(k=st.integers(1, 5), n=st.integers(1, 6), data=st.data())
def test_se_roundtrip_and_gap(k, n, data):
    i = data.draw(st.integers(1, n))
    res = se_decode(se_encode(i, k, n), k, n)
    assert res.index == i and res.gap == k


# ---------------------------------------------------------------- blueberry


def test_blueberry_is_an_injection_and_roundtrips():
    t = BlueberryTable(4, 64, seed=9)
    for pos in range(50):
        image = [bb_encode(t, pos, s) for s in range(4)]
        assert len(set(image)) == 4 and all(0 <= v < 64 for v in image)
        assert [bb_decode(t, pos, v) for v in image] == [0, 1, 2, 3]
        outside = set(range(64)) - set(image)
        assert all(bb_decode(t, pos, v) is None for v in outside)
    assert t.q == Fraction(1, 16)


def test_blueberry_deterministic_per_seed():
    a, b, c = BlueberryTable(4, 64, 1), BlueberryTable(4, 64, 1), BlueberryTable(4, 64, 2)
    ea = [a.encode(p, s) for p in range(30) for s in range(4)]
    assert ea == [b.encode(p, s) for p in range(30) for s in range(4)]
    assert ea != [c.encode(p, s) for p in range(30) for s in range(4)]


def test_blueberry_bounds():
    with pytest.raises(ConfigurationError):
        BlueberryTable(5, 4, 0)
    with pytest.raises(ConfigurationError):
        BlueberryTable(2, 4, 0, positions=3).encode(3, 0)
    with pytest.raises(ConfigurationError):
        BlueberryTable(2, 4, 0).encode(0, 2)


def test_identity_table():
    t = IdentityTable(5)
    assert [t.encode(0, s) for s in range(5)] == list(range(5))
    assert t.decode(0, 5) is None and t.decode(3, 4) == 4


# ---------------------------------------------------------------- tree codes


def _agrees(label, r):
    if r is None:
        return False
    return label in r if isinstance(r, (set, frozenset)) else label == r


def brute_decode(code, received):
    """Independent reference: score every path of the right length, lexicographic tie-break."""
    best = None
    for path in itertools.product(range(code.arity), repeat=len(received)):
        enc = tc_encode(code, path)
        cost = sum(1 for a, r in zip(enc, received) if not _agrees(a, r))
        if best is None or cost < best[0]:
            best = (cost, path)
    return best[1]


def brute_verify(code, depth, alpha):
    paths = {k: list(itertools.product(range(code.arity), repeat=k)) for k in range(1, depth + 1)}
    for k, ps in paths.items():
        encs = {p: tc_encode(code, p) for p in ps}
        for p, q in itertools.combinations(ps, 2):
            lcp = next((j for j in range(k) if p[j] != q[j]), k)
            if sum(a != b for a, b in zip(encs[p], encs[q])) < alpha * (k - lcp):
                return False
    return True


@pytest.fixture(scope="module")
def tc6():
    return tc_gen_verified(2, 6, Fraction(1, 2), 16, seed=0)


def test_depth_one_always_verifies():
    for seed in range(5):
        code = tc_gen_verified(3, 1, Fraction(1), 3, seed)
        assert code.attempts == 1 and code.verified


def test_verify_distance_matches_brute_force(tc6):
    assert verify_distance(tc6, 6) and brute_verify(tc6, 6, Fraction(1, 2))
    # an unverified code with few labels: both checks agree either way
    from adaptive_ic.codes.treecode import HashTreeCode

    for attempt in range(1, 6):
        raw = HashTreeCode(2, 2, Fraction(1, 2), 0, attempt)
        assert verify_distance(raw, 5) == brute_verify(raw, 5, Fraction(1, 2))


def test_unverified_code_is_refused():
    from adaptive_ic.codes.treecode import HashTreeCode

    with pytest.raises(PreconditionError):
        HashTreeCode(2, 4, Fraction(1, 2), 0, 1).require_verified()


def test_encode_step_and_incremental_encoder_agree(tc6):
    path = (1, 0, 1, 1, 0, 0)
    enc = TreeEncoder(tc6)
    labels = [enc.push(b) for b in path]
    assert labels == tc_encode(tc6, path)
    assert labels == [tc_encode_step(tc6, path[:j], path[j]) for j in range(6)]


def test_siblings_carry_distinct_labels(tc6):
    hashed = tc_gen_hashed(5, 64, Fraction(1, 2), 0, verify_depth=2)
    for code in (tc6, hashed):
        node = code.root()
        for b in (0, 1, 1, 0):
            labs = code.child_labels(node)
            assert len(set(labs)) == code.arity
            node = code.child(node, b)


def test_decode_matches_brute_force_with_erasures(tc6):
    rng = np.random.default_rng(5)
    for _ in range(150):
        n = int(rng.integers(1, 7))
        path = tuple(int(b) for b in rng.integers(0, 2, n))
        recv = list(tc_encode(tc6, path))
        for j in range(n):
            u = rng.random()
            if u < 0.15:
                recv[j] = None
            elif u < 0.35:
                recv[j] = int(rng.integers(0, 16))
        assert tc_decode(tc6, recv) == brute_decode(tc6, recv)


def test_decode_matches_brute_force_with_candidate_sets(tc6):
    rng = np.random.default_rng(6)
    for _ in range(150):
        n = int(rng.integers(1, 7))
        path = tuple(int(b) for b in rng.integers(0, 2, n))
        recv = list(tc_encode(tc6, path))
        for j in range(n):
            u = rng.random()
            if u < 0.3:
                extra = {int(v) for v in rng.integers(0, 16, int(rng.integers(1, 4)))}
                recv[j] = frozenset(extra | ({recv[j]} if u < 0.25 else set()))
            elif u < 0.4:
                recv[j] = None
        assert tc_decode(tc6, recv) == brute_decode(tc6, recv)


def test_incremental_decoder_with_candidate_sets():
    code = tc_gen_hashed(5, 64, Fraction(1, 2), 1, verify_depth=3)
    rng = np.random.default_rng(3)
    for _ in range(10):
        dec = TreeDecoder(code, horizon=40)
        sent = tc_encode(code, [int(b) for b in rng.integers(0, 5, 40)])
        got = []
        for lab in sent:
            u = rng.random()
            if u < 0.3:
                lab = frozenset({lab, int(rng.integers(0, 64))})
            elif u < 0.35:
                lab = None
            got.append(lab)
            assert dec.push(lab) == tc_decode(code, got)
        assert not dec.overloaded


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_candidate_set_never_helps_a_wrong_path(tc6, data):
    # relative to an erasure, a set holding the sent label can only raise a wrong path's excess cost
    n = data.draw(st.integers(1, 6))
    true = tuple(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    other = tuple(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    sent, alt = tc_encode(tc6, true), tc_encode(tc6, other)
    sets = [frozenset(data.draw(st.sets(st.integers(0, 15), max_size=3)) | {s}) for s in sent]

    def excess(recv):
        return sum(not _agrees(a, r) for a, r in zip(alt, recv)) - sum(not _agrees(a, r) for a, r in zip(sent, recv))

    assert excess(sets) >= excess([None] * n)


def test_incremental_decoder_tracks_batch_decoder():
    code = tc_gen_hashed(5, 64, Fraction(1, 2), 1, verify_depth=3)
    rng = np.random.default_rng(2)
    for _ in range(10):
        dec = TreeDecoder(code, horizon=30, max_expansions=2_000_000)
        path = [int(b) for b in rng.integers(0, 5, 30)]
        sent = tc_encode(code, path)
        got = []
        for lab in sent:
            u = rng.random()
            lab = None if u < 0.12 else (int(rng.integers(0, 64)) if u < 0.18 else lab)
            got.append(lab)
            assert dec.push(lab) == tc_decode(code, got)
        assert not dec.overloaded


def test_decoder_budget_falls_back_to_greedy():
    code = tc_gen_hashed(5, 64, Fraction(1, 2), 1, verify_depth=2)
    dec = TreeDecoder(code, horizon=20, max_expansions=3)
    for _ in range(8):
        out = dec.push(None)
    assert dec.overloaded and len(out) == 8
    d1 = TreeDecoder(code, horizon=1)
    d1.push(None)
    with pytest.raises(ConfigurationError):
        d1.push(None)


def test_tree_code_json_round_trip(tc6):
    again = tree_code_from_json(tc6.to_json())
    paths = list(itertools.product(range(2), repeat=6))
    assert all(tc_encode(again, p) == tc_encode(tc6, p) for p in paths)
    hashed = tc_gen_hashed(5, 64, Fraction(1, 2), 4, verify_depth=2)
    h2 = tree_code_from_json(hashed.to_json())
    assert h2.verified and tc_encode(h2, (4, 3, 2, 1, 0, 0, 1)) == tc_encode(hashed, (4, 3, 2, 1, 0, 0, 1))


def test_tree_code_generation_limits():
    with pytest.raises(GenerationError):
        tc_gen_verified(3, 2, Fraction(1, 2), 2, 0)
    with pytest.raises(ConfigurationError):
        tc_gen_verified(2, 11, Fraction(1, 2), 16, 0)
    with pytest.raises(GenerationError):
        tc_gen_verified(2, 6, Fraction(1), 2, 0, max_retries=3)


@settings(max_examples=40, deadline=None)
@given(path=st.lists(st.integers(0, 1), min_size=1, max_size=6))
def test_clean_stream_decodes_exactly(tc6, path):
    dec = TreeDecoder(tc6, horizon=6)
    for lab in tc_encode(tc6, path):
        out = dec.push(lab)
    assert out == tuple(path) and dec.cost == 0

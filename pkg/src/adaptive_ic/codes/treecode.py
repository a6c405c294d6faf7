"""Tree codes: edge-labelled d-ary trees whose encodings of two paths differ
in at least an ``alpha`` fraction of the positions after the paths split.

Two backings share one interface (``root``, ``child_labels``, ``child``):

* :class:`TableTreeCode` stores every label of a finite tree.  Small enough to
  verify the distance property over all pairs.
* :class:`HashTreeCode` derives the labels of a node's children from a 64-bit
  node state, so depth is unbounded.  Verification only reaches a bounded depth.

Labels of siblings are always distinct (a random injection of the ``d``
branches into the label alphabet), which makes single-edge pairs satisfy the
distance bound by construction.
"""

from __future__ import annotations

import heapq
import json
import random
from fractions import Fraction

import numpy as np

from ..errors import ConfigurationError, GenerationError, PreconditionError
from ..rng import derive_seed

_MASK = (1 << 64) - 1


def _splitmix(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class TreeCode:
    arity: int
    label_size: int
    alpha: Fraction
    depth: int | None
    verified: bool = False
    verified_depth: int = 0
    seed: int
    attempts: int = 1

    def root(self):
        raise NotImplementedError

    def child_labels(self, node) -> tuple:
        raise NotImplementedError

    def child(self, node, branch: int):
        raise NotImplementedError

    def require_verified(self) -> None:
        if not self.verified:
            raise PreconditionError("tree code has not passed distance verification")

    def encode(self, path) -> list[int]:
        node, out = self.root(), []
        for b in path:
            out.append(self.child_labels(node)[b])
            node = self.child(node, b)
        return out

    def describe(self) -> dict:
        raise NotImplementedError

    def to_json(self) -> str:
        return json.dumps(self.describe(), sort_keys=True)


class TableTreeCode(TreeCode):
    def __init__(self, arity, depth, label_size, alpha, seed, levels, attempts=1, verified=False):
        self.arity, self.depth, self.label_size = arity, depth, label_size
        self.alpha, self.seed, self.attempts = Fraction(alpha), seed, attempts
        self.levels = levels  # levels[k] = labels of the d^(k+1) edges into depth k+1
        self.verified = verified
        self.verified_depth = depth if verified else 0

    def root(self):
        return (0, 0)

    def child_labels(self, node) -> tuple:
        lvl, idx = node
        if lvl >= self.depth:
            raise ConfigurationError(f"tree code has depth {self.depth}")
        d = self.arity
        return tuple(self.levels[lvl][idx * d : idx * d + d])

    def child(self, node, branch: int):
        lvl, idx = node
        return (lvl + 1, idx * self.arity + branch)

    def describe(self) -> dict:
        return {
            "kind": "table", "arity": self.arity, "depth": self.depth,
            "label_size": self.label_size, "alpha": str(self.alpha), "seed": self.seed,
        }


class HashTreeCode(TreeCode):
    depth = None

    def __init__(self, arity, label_size, alpha, seed, attempts=1):
        if label_size < arity:
            raise ConfigurationError("need at least as many labels as branches")
        self.arity, self.label_size = arity, label_size
        self.alpha, self.seed, self.attempts = Fraction(alpha), seed, attempts
        self._root = _splitmix(derive_seed("treecode", seed, attempts))
        self._cache: dict[int, tuple] = {}

    def root(self):
        return self._root

    def child_labels(self, node) -> tuple:
        labels = self._cache.get(node)
        if labels is None:
            # partial Fisher-Yates driven by the node state
            pool = list(range(self.label_size))
            z = node
            for i in range(self.arity):
                z = _splitmix(z)
                j = i + z % (self.label_size - i)
                pool[i], pool[j] = pool[j], pool[i]
            labels = tuple(pool[: self.arity])
            if len(self._cache) < 1 << 18:
                self._cache[node] = labels
        return labels

    def child(self, node, branch: int):
        return _splitmix(node ^ ((branch + 1) * 0xD6E8FEB86659FD93 & _MASK))

    def describe(self) -> dict:
        return {
            "kind": "hash", "arity": self.arity, "label_size": self.label_size,
            "alpha": str(self.alpha), "seed": self.seed, "attempts": self.attempts,
            "verified_depth": self.verified_depth,
        }


def tree_code_from_json(text: str) -> TreeCode:
    d = json.loads(text)
    kind = d.pop("kind", None)
    if kind == "table":
        return tc_gen_verified(d["arity"], d["depth"], Fraction(d["alpha"]), d["label_size"], d["seed"])
    if kind == "hash":
        code = HashTreeCode(d["arity"], d["label_size"], Fraction(d["alpha"]), d["seed"], d["attempts"])
        if d.get("verified_depth"):
            _mark_verified(code, d["verified_depth"])
        return code
    raise ConfigurationError(f"unknown tree code kind {kind!r}")


def _level_encodings(code: TreeCode, depth: int):
    """Yield (k, digits, encodings) for k = 1..depth, paths in lexicographic order."""
    nodes = [code.root()]
    enc = np.zeros((1, 0), dtype=np.int64)
    digits = np.zeros((1, 0), dtype=np.int64)
    d = code.arity
    for k in range(1, depth + 1):
        labels = np.array([code.child_labels(v) for v in nodes], dtype=np.int64).reshape(-1)
        enc = np.concatenate([np.repeat(enc, d, axis=0), labels[:, None]], axis=1)
        digits = np.concatenate(
            [np.repeat(digits, d, axis=0), np.tile(np.arange(d), len(nodes))[:, None]], axis=1
        )
        nodes = [code.child(v, b) for v in nodes for b in range(d)]
        yield k, digits, enc


def verify_distance(code: TreeCode, depth: int, alpha=None) -> bool:
    """Check ``Delta(enc x, enc y) >= alpha * anc(x, y)`` for all same-length pairs up to ``depth``."""
    alpha = Fraction(code.alpha if alpha is None else alpha)
    for k, digits, enc in _level_encodings(code, depth):
        p = enc.shape[0]
        if p * p * k > 64_000_000:
            raise ConfigurationError(f"{p} paths at level {k} is too many for exhaustive checking")
        same = digits[:, None, :] == digits[None, :, :]
        lcp = np.cumprod(same, axis=2).sum(axis=2)
        anc = k - lcp
        dist = (enc[:, None, :] != enc[None, :, :]).sum(axis=2)
        # integer form of dist >= alpha * anc
        if np.any(dist * alpha.denominator < alpha.numerator * anc):
            return False
    return True


def _mark_verified(code: HashTreeCode, depth: int) -> None:
    if not verify_distance(code, depth):
        raise GenerationError(f"hash tree code failed verification at depth {depth}")
    code.verified, code.verified_depth = True, depth


def tc_gen_verified(d: int, N: int, alpha, label_size: int, seed: int, max_retries: int = 1000) -> TableTreeCode:
    """Rejection-sample sibling-distinct random labelings until the distance check passes."""
    if d < 2 or N < 1:
        raise ConfigurationError(f"need arity >= 2 and depth >= 1, got d={d}, N={N}")
    if label_size < d:
        raise GenerationError(f"{label_size} labels cannot keep {d} siblings distinct")
    if d**N > 1024:
        raise ConfigurationError(f"d^N = {d**N} paths is beyond exhaustive verification")
    for attempt in range(1, max_retries + 1):
        rng = random.Random(derive_seed("tc_table", d, N, label_size, seed, attempt))
        levels = [
            [lab for _ in range(d**k) for lab in rng.sample(range(label_size), d)] for k in range(N)
        ]
        code = TableTreeCode(d, N, label_size, alpha, seed, levels, attempt)
        if verify_distance(code, N):
            code.verified, code.verified_depth = True, N
            return code
    raise GenerationError(f"no labeling verified within {max_retries} retries; enlarge the label alphabet")


def tc_gen_hashed(d: int, label_size: int, alpha, seed: int, verify_depth: int, max_retries: int = 1000) -> HashTreeCode:
    """Unbounded-depth tree code whose distance is verified up to ``verify_depth``."""
    for attempt in range(1, max_retries + 1):
        code = HashTreeCode(d, label_size, alpha, seed, attempt)
        if verify_distance(code, verify_depth):
            code.verified, code.verified_depth = True, verify_depth
            return code
    raise GenerationError(f"no hashed tree code verified to depth {verify_depth} within {max_retries} retries")


def tc_encode_step(code: TreeCode, path_so_far, next_branch: int) -> int:
    node = code.root()
    for b in path_so_far:
        node = code.child(node, b)
    return code.child_labels(node)[next_branch]


def tc_encode(code: TreeCode, path) -> list[int]:
    return code.encode(path)


class TreeEncoder:
    """Incremental encoder: one label per appended branch."""

    def __init__(self, code: TreeCode):
        self.code = code
        self.node = code.root()
        self.path: list[int] = []

    def push(self, branch: int) -> int:
        label = self.code.child_labels(self.node)[branch]
        self.node = self.code.child(self.node, branch)
        self.path.append(branch)
        return label


def tc_decode(code: TreeCode, received, max_expansions: int = 1_000_000) -> tuple:
    """Minimum-distance path of length ``len(received)``; ``None`` entries are erasures.

    Ties go to the lexicographically smallest path.  An erasure is at distance
    1 from every label, which shifts every candidate by the same amount, so the
    search charges it 0 without changing the answer.  An entry may also be a
    set of candidate labels, at distance 0 from its members and 1 from the rest.
    """
    dec = TreeDecoder(code, horizon=len(received), max_expansions=max_expansions)
    dec.received = [frozenset(r) if isinstance(r, (set, list, tuple)) else r for r in received]
    dec._exact_node = None
    return dec._decode()


class TreeDecoder:
    """Decoder fed one received label at a time; each push returns the current best path.

    Uniform-cost search over (cost, path) with paths in lexicographic order.
    A node's cost only depends on labels already received, so the search
    frontier is kept between pushes and each node is expanded at most once
    over the whole run.  Paths are stored as integer keys (digit ``b + 1`` in
    base ``d + 1`` at a fixed place per depth), whose integer order is the
    lexicographic order of the paths.

    While every received entry has exactly one matching child along one path,
    that path is the unique zero-cost answer and no search runs.  Once ``max_expansions`` is spent the decoder stops searching and
    answers greedily (follow a matching child, else branch 0); ``overloaded``
    records that.
    """

    def __init__(self, code: TreeCode, horizon: int = 256, max_expansions: int = 200_000):
        self.code = code
        self.horizon = horizon
        self.max_expansions = max_expansions
        self.base = code.arity + 1
        self.received: list = []
        self.path: tuple = ()
        self.cost = 0
        self.expansions = 0
        self.overloaded = False
        self._exact_node = code.root()
        self._heap = None
        self._place = [self.base ** (horizon - k) for k in range(horizon + 1)]

    def push(self, label) -> tuple:
        if isinstance(label, (set, list, tuple)):
            label = frozenset(label)
        self.received.append(label)
        if len(self.received) > self.horizon:
            raise ConfigurationError(f"decoder horizon {self.horizon} exceeded")
        if self._exact_node is not None and label is not None:
            labels = self.code.child_labels(self._exact_node)
            hits = [b for b, lab in enumerate(labels) if _matches(lab, label)]
            if len(hits) == 1:
                b = hits[0]
                self.path = self.path + (b,)
                self._exact_node = self.code.child(self._exact_node, b)
                return self.path
        self._exact_node = None
        return self._decode()

    def _path_of(self, key: int, depth: int) -> tuple:
        digits = []
        key //= self._place[depth]
        for _ in range(depth):
            key, r = divmod(key, self.base)
            digits.append(r - 1)
        return tuple(reversed(digits))

    def _decode(self) -> tuple:
        n = len(self.received)
        if n == 0:
            return ()
        if not self.overloaded:
            if self._heap is None:
                self._heap = [(0, 0, 0, None, 0, _ALONE)]
            found = self._search(n)
            if found is not None:
                cost, key = found
                self.path, self.cost = self._path_of(key, n), cost
                return self.path
            self.overloaded, self._heap = True, None
        self.path, self.cost = _greedy(self.code, self.received)
        return self.path

    def _search(self, n: int):
        # Heap entries are (cost, key, depth, parent, branch, skip): child ``branch``
        # of ``parent`` stands for itself and its later equal-cost siblings, which
        # are pushed one at a time as it is popped.  ``skip`` names the branch
        # left out of the group (the matching child), _ALL means every branch
        # and _ALONE means no siblings.  Each expansion pushes at most two entries.
        heap, recv, code = self._heap, self.received, self.code
        place, d = self._place, code.arity
        push, pop = heapq.heappush, heapq.heappop
        while heap:
            cost, key, k, parent, b, skip = heap[0]
            if k == n:
                # leave it in the heap: it is expanded when the next label arrives
                return cost, key
            pop(heap)
            if skip != _ALONE:
                nb = b + 1
                if nb == skip:
                    nb += 1
                if nb < d:
                    push(heap, (cost, key + (nb - b) * place[k], k, parent, nb, skip))
            self.expansions += 1
            if self.expansions > self.max_expansions:
                return None
            node = code.root() if parent is None else code.child(parent, b)
            want = recv[k]
            step = place[k + 1]
            if want is None:
                push(heap, (cost, key + step, k + 1, node, 0, _ALL))
                continue
            labels = code.child_labels(node)
            if isinstance(want, frozenset):
                for b, lab in enumerate(labels):
                    push(heap, (cost + (lab not in want), key + (b + 1) * step, k + 1, node, b, _ALONE))
            elif want in labels:
                m = labels.index(want)
                push(heap, (cost, key + (m + 1) * step, k + 1, node, m, _ALONE))
                first = 1 if m == 0 else 0
                push(heap, (cost + 1, key + (first + 1) * step, k + 1, node, first, m))
            else:
                push(heap, (cost + 1, key + step, k + 1, node, 0, _ALL))
        raise AssertionError("search frontier emptied")


_ALL, _ALONE = -1, -2


def _matches(label: int, want) -> bool:
    return label in want if isinstance(want, frozenset) else label == want


def _greedy(code: TreeCode, received):
    node, path, cost = code.root(), [], 0
    for want in received:
        labels = code.child_labels(node)
        hits = [] if want is None else [b for b, lab in enumerate(labels) if _matches(lab, want)]
        b = hits[0] if hits else 0
        cost += want is not None and not hits
        path.append(b)
        node = code.child(node, b)
    return tuple(path), cost

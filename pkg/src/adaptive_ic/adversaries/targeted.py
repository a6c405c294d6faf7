"""Adversaries aimed at the one-third protocol.

:class:`SteerOneThird` pushes Alice's codeword toward another message and/or
rewrites Bob's reply toward another message at a chosen apparent length,
within per-direction budgets.  Shorter apparent lengths are faked by
silencing Bob's tail, longer ones by inserting letters after he stops.
"""

from __future__ import annotations

import numpy as np

from ..channel import ALICE, SILENCE, Adversary, RunView
from ..rng import make_rng


class SteerOneThird(Adversary):
    def __init__(self, x_target=None, alice_budget: int = 0, y_target=None, bob_budget: int | None = 0,
                 view_length: int | None = None, random_positions: bool = False, seed: int = 0):
        self.x_target, self.alice_budget = x_target, alice_budget
        self.y_target, self.bob_budget = y_target, bob_budget
        self.view_length = view_length
        self.random_positions = random_positions
        self.seed = seed

    def reset(self, view: RunView) -> None:
        super().reset(view)
        p = view.protocol
        self.p = p
        self.rng = make_rng("steer", self.seed)
        self.alice_slots = set()
        if self.x_target is not None and self.alice_budget:
            mine = p.family.encode_prefix(view.x, p.L)
            tgt = p.family.encode_prefix(self.x_target, p.L)
            self._tgt_a = tgt
            diff = [i for i in range(p.L) if mine[i] != tgt[i]]
            self.alice_slots = set(self._choose(diff, self.alice_budget))
        self.bob_plan = None

    def _choose(self, positions, budget):
        if budget is None or budget >= len(positions):
            return positions
        if self.random_positions:
            return self.rng.sample(positions, budget)
        return positions[:budget]

    def _plan_bob(self) -> None:
        p, v = self.p, self.view
        got = [d for d, who in zip(v.delivered, v.slot_senders) if who == ALICE]
        _, t = p.family.decode_prefix(np.array(got[: p.L]))
        W = 2 * p.L
        real = [SILENCE] * W
        if t < p.t_bound:
            ell = p.reply_length(t)
            real[:ell] = [int(s) for s in p.family.encode_prefix(v.y, ell)]
        y_t = v.y if self.y_target is None else self.y_target
        ell_view = self.view_length if self.view_length is not None else sum(s != SILENCE for s in real)
        fake = [SILENCE] * W
        if ell_view:
            fake[:ell_view] = [int(s) for s in p.family.encode_prefix(y_t, ell_view)]
        diff = [i for i in range(W) if real[i] != fake[i]]
        self.bob_plan = {i: fake[i] for i in self._choose(diff, self.bob_budget)}

    def corrupt(self, slot, rnd, sender, sent):
        if sender == ALICE:
            i = rnd - 1
            return int(self._tgt_a[i]) if i in self.alice_slots else sent
        if self.bob_plan is None:
            self._plan_bob()
        return self.bob_plan.get(rnd - self.p.L - 1, sent)

"""Expected-utility policies and the value of observing a variable.

Observations must be passive: if the distribution of an observed variable
shifts with the act, conditioning on it before acting is incoherent and the
solver refuses rather than quietly folding the influence in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import diagram as dg
from .constants import PROB_TOL
from .errors import InputError, MissingUtilityError, ResponsivenessError

VOI_CLAMP = 1e-6


@dataclass(frozen=True)
class Policy:
    observed: tuple[str, ...]
    choices: Mapping[tuple, Mapping[str, str]]
    expected_utility: float

    def choice(self, context: Mapping[str, str]) -> Mapping[str, str]:
        key = tuple(context[v] for v in self.observed)
        if key not in self.choices:
            raise InputError(f"no policy entry for context {key!r}")
        return self.choices[key]


def _utility_reader(d: dg.InfluenceDiagram):
    util = d.utility_node()
    if util is None:
        raise MissingUtilityError("diagram has no utility node")
    decision_ids = {n.id for n in d.decision_nodes()}
    value_pos = {n.id: i for i, n in enumerate(d.value_nodes())}
    slots = []
    for p in util.parents:
        if p in decision_ids:
            slots.append(("act", p))
        else:
            slots.append(("value", value_pos[p]))

    def read(act: Mapping[str, str], config: tuple) -> float:
        key = tuple(
            act[ref] if kind == "act" else config[ref] for kind, ref in slots
        )
        return d.utilities[key]

    return read


def solve(d: dg.InfluenceDiagram, observed: Sequence[str] = ()) -> Policy:
    """Best act per observed context, breaking ties toward the first act in
    declaration order; requires the observed variables' joint distribution
    to be the same under every act."""
    read_utility = _utility_reader(d)
    value_pos = {n.id: i for i, n in enumerate(d.value_nodes())}
    observed = tuple(observed)
    for v in observed:
        if v not in value_pos:
            raise InputError(f"cannot observe {v!r}: not a chance or deterministic node")
    obs_idx = [value_pos[v] for v in observed]

    if not d.decision_nodes():
        raise InputError("diagram has no decisions")
    acts = d.act_space()
    score: list[dict[tuple, float]] = []
    mass: list[dict[tuple, float]] = []
    for act in acts:
        f = dg.joint(d, act)
        by_ctx_score: dict[tuple, float] = {}
        by_ctx_mass: dict[tuple, float] = {}
        for cfg, p in f.table.items():
            ctx = tuple(cfg[i] for i in obs_idx)
            by_ctx_score[ctx] = by_ctx_score.get(ctx, 0.0) + p * read_utility(act, cfg)
            by_ctx_mass[ctx] = by_ctx_mass.get(ctx, 0.0) + p
        score.append(by_ctx_score)
        mass.append(by_ctx_mass)

    if observed:
        contexts = set()
        for bm in mass:
            contexts.update(bm)
        for ctx in contexts:
            base = mass[0].get(ctx, 0.0)
            for bm in mass[1:]:
                if abs(bm.get(ctx, 0.0) - base) > PROB_TOL:
                    raise ResponsivenessError(
                        f"observed context {ctx!r} has act-dependent probability"
                    )
    else:
        contexts = {()}

    choices: dict[tuple, Mapping[str, str]] = {}
    total = 0.0
    for ctx in sorted(contexts):
        best_idx, best = 0, score[0].get(ctx, 0.0)
        for i in range(1, len(acts)):
            s = score[i].get(ctx, 0.0)
            if s > best + 1e-15:
                best_idx, best = i, s
        choices[ctx] = acts[best_idx]
        total += best
    return Policy(observed=observed, choices=choices, expected_utility=total)


def value_of_information(
    d: dg.InfluenceDiagram, v: str, responsive: Sequence[str] = ()
) -> float:
    """Expected-utility gain from observing ``v`` before acting.

    ``responsive`` names variables known to respond to the decisions; asking
    for their prior value is rejected outright. Variables whose distribution
    turns out to shift with the act are rejected the same way during solving.
    """
    if v in set(responsive):
        raise ResponsivenessError(
            f"{v!r} responds to the decisions; observing it before acting is ill-posed"
        )
    base = solve(d)
    informed = solve(d, observed=(v,))
    gain = informed.expected_utility - base.expected_utility
    if gain < 0.0:
        if gain < -VOI_CLAMP:
            raise AssertionError(f"information hurt by {gain!r}; numeric model bug")
        gain = 0.0
    return gain

"""Seeded random model generators for the property suites.

Tables stay desk-scale: at most 6 acts, 4 chance variables with up to 3
instances each, and 64 states. Per-state behaviour is built from simple
patterns (constant in the state, act-dependent, copy of an earlier
variable) so that unresponsiveness, limited unresponsiveness, and mutual
causes all occur with useful frequency. A fraction of tables carries a
forcing decision with idle/set instances so that mapping variables with
chance arguments are identified.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from causalworlds import diagram as dg
from causalworlds import sem
from causalworlds.worlds import (
    IDLE,
    SET_PREFIX,
    Variable,
    WorldState,
    WorldTable,
    set_instance,
)

DECISION_SHAPES = ((2,), (3,), (4,), (5,), (6,), (2, 2), (2, 3))
CHANCE_SIZES = (2, 2, 2, 3)  # binary-biased
STATE_COUNTS = (2, 3, 4, 4, 6, 6, 8, 12)

CORPUS_SEED = 20260825
CORPUS_SIZE = 1000


def _values(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def random_table(rng: random.Random) -> WorldTable:
    n_chance = rng.randint(1, 4)
    chances = [
        Variable(f"u{i}", "chance", _values("v", rng.choice(CHANCE_SIZES)))
        for i in range(n_chance)
    ]

    hat_target: int | None = None
    if rng.random() < 0.35:
        # forcing decision: idle plus one set: instance per target value;
        # fits the 6-act budget alongside at most one binary decision
        hat_target = rng.randrange(n_chance)
        target = chances[hat_target]
        hat = Variable(
            "u_hat",
            "decision",
            (IDLE,) + tuple(set_instance(v) for v in target.instances),
        )
        decisions = [hat]
        if len(hat.instances) * 2 <= 6 and rng.random() < 0.6:
            decisions.insert(0, Variable("d0", "decision", _values("a", 2)))
    else:
        shape = rng.choice(DECISION_SHAPES)
        decisions = [
            Variable(f"d{i}", "decision", _values("a", n))
            for i, n in enumerate(shape)
        ]

    acts = tuple(itertools.product(*(d.instances for d in decisions)))
    hat_pos = next(
        (i for i, d in enumerate(decisions) if d.id == "u_hat"), None
    )

    if rng.random() < 0.05:
        n_states = rng.randint(16, 64)
    else:
        n_states = rng.choice(STATE_COUNTS)

    states = []
    for sid in range(1, n_states + 1):
        rows = {act: [None] * n_chance for act in acts}
        for j, var in enumerate(chances):
            kind = rng.random()
            if kind < 0.40:
                value = rng.choice(var.instances)
                for act in acts:
                    rows[act][j] = value
            elif kind < 0.70 or j == 0:
                for act in acts:
                    rows[act][j] = rng.choice(var.instances)
            else:
                # deterministic translation of an earlier variable, which
                # at this point already carries any forced value
                src = rng.randrange(j)
                f = {
                    v: rng.choice(var.instances)
                    for v in chances[src].instances
                }
                for act in acts:
                    rows[act][j] = f[rows[act][src]]
            if j == hat_target:
                for act in acts:
                    choice = act[hat_pos]
                    if choice.startswith(SET_PREFIX):
                        rows[act][j] = choice[len(SET_PREFIX):]
        states.append((sid, {act: tuple(vals) for act, vals in rows.items()}))

    if rng.random() < 0.15:
        flags = [rng.random() < 0.8 for _ in states]
        if not any(flags):
            flags[0] = True
        built = tuple(
            WorldState(sid, rows, prior=None, possible=flag)
            for (sid, rows), flag in zip(states, flags)
        )
    else:
        weights = [
            0 if rng.random() < 0.2 else rng.randint(1, 9) for _ in states
        ]
        if not any(weights):
            weights[0] = 1
        total = float(sum(weights))
        built = tuple(
            WorldState(sid, rows, prior=w / total)
            for (sid, rows), w in zip(states, weights)
        )
    return WorldTable(tuple(decisions), tuple(chances), built)


@lru_cache(maxsize=None)
def corpus(size: int = CORPUS_SIZE, seed: int = CORPUS_SEED) -> tuple[WorldTable, ...]:
    rng = random.Random(seed)
    return tuple(random_table(rng) for _ in range(size))


def priced(tables) -> tuple[WorldTable, ...]:
    return tuple(t for t in tables if t.quantified)


def attach_utility(d: dg.InfluenceDiagram, over, rng: random.Random) -> dg.InfluenceDiagram:
    """Extend a diagram with a utility node over the given value nodes."""
    over = tuple(over)
    spaces = [d.by_id[v].instances for v in over]
    utilities = {
        cfg: round(rng.uniform(0.0, 10.0), 3)
        for cfg in itertools.product(*spaces)
    }
    return dg.InfluenceDiagram(
        nodes=d.nodes + (dg.Node("payoff", dg.UTILITY, (), over),),
        cpts=d.cpts,
        tables=d.tables,
        utilities=utilities,
        name=d.name,
    )


# -- structural models -----------------------------------------------------


def random_sem(rng: random.Random, max_vars: int = 10) -> sem.StructuralEquationModel:
    """Random acyclic structural model with binary domain variables.

    Every variable gets an idle-able intervention and a private
    disturbance; with some probability two disturbances are entangled
    into a dependency block.
    """
    k = rng.randint(2, max_vars)
    binary = ("lo", "hi")
    variables = []
    disturbances = []
    equations = {}
    for i in range(k):
        pool = [f"x{j}" for j in range(i)]
        rng.shuffle(pool)
        parents = tuple(sorted(pool[: rng.randint(0, min(2, len(pool)))]))
        var = sem.SemVariable(f"x{i}", binary, parents, f"x{i}_hat")
        eps_space = _values("e", rng.randint(2, 4))
        eps = sem.Disturbance(f"e{i}", var.id, eps_space, prior=None)
        rows = {}
        spaces = [binary] * len(parents)
        for cfg in itertools.product(*spaces):
            for hat in var.hat_instances():
                for ev in eps_space:
                    if hat.startswith(SET_PREFIX):
                        rows[cfg + (hat, ev)] = hat[len(SET_PREFIX):]
                    else:
                        rows[cfg + (hat, ev)] = rng.choice(binary)
        variables.append(var)
        disturbances.append(eps)
        equations[var.id] = rows

    blocks = ()
    blocked: set[int] = set()
    if k >= 2 and rng.random() < 0.4:
        i, j = rng.sample(range(k), 2)
        blocked = {i, j}
        members = (disturbances[i].id, disturbances[j].id)
        cells = list(
            itertools.product(disturbances[i].instances, disturbances[j].instances)
        )
        weights = [rng.randint(1, 9) for _ in cells]
        total = float(sum(weights))
        blocks = (
            sem.DependencyBlock(members, {c: w / total for c, w in zip(cells, weights)}),
        )
    final = []
    for idx, eps in enumerate(disturbances):
        if idx in blocked:
            final.append(eps)
            continue
        weights = [rng.randint(1, 9) for _ in eps.instances]
        total = float(sum(weights))
        final.append(
            sem.Disturbance(eps.id, eps.var, eps.instances, tuple(w / total for w in weights))
        )
    model = sem.StructuralEquationModel(
        variables=tuple(variables),
        disturbances=tuple(final),
        equations=equations,
        blocks=blocks,
    )
    assert not sem.validate(model)
    return model


def sample_acts(m: sem.StructuralEquationModel, rng: random.Random, n: int = 4):
    """The all-idle act plus random forcing acts."""
    hats = {v.intervention: v.hat_instances() for v in m.variables}
    idle_act = {
        h: (IDLE if IDLE in space else space[0]) for h, space in hats.items()
    }
    acts = [idle_act]
    for _ in range(n - 1):
        acts.append({h: rng.choice(space) for h, space in hats.items()})
    return acts

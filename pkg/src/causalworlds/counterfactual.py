"""Counterfactual evaluation over canonical diagrams via world duplication.

The factual and hypothetical worlds share every unresponsive node (domain
variables and mapping variables); decisions that differ between the worlds,
responsive variables downstream of them, and the decision parents of any
duplicated node are cloned with a prime suffix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import diagram as dg
from .canonical import CanonicalDiagram, verify_canonical
from .errors import FormError, ImpossibleEvidenceError, InputError

PRIME = "'"


@dataclass(frozen=True)
class TwinDiagram:
    diagram: dg.InfluenceDiagram
    base: CanonicalDiagram
    duplicated: frozenset[str]
    primed: Mapping[str, str]
    shared: tuple[str, ...]


def _require_canonical(cd: CanonicalDiagram) -> None:
    bad = verify_canonical(cd.diagram, cd.responsive)
    if bad:
        raise FormError(
            "world duplication needs canonical form: "
            + "; ".join(v.message for v in bad)
        )


def _dup_set(cd: CanonicalDiagram, changed, include):
    d = cd.diagram
    decisions = {n.id for n in d.decision_nodes()}
    changed = set(changed)
    if not changed <= decisions:
        raise InputError(f"changed ids must be decisions, got {sorted(changed - decisions)}")
    dup = set(changed)
    dup |= cd.responsive & d.descendants(changed)
    for x in include:
        if x not in d.by_id:
            raise InputError(f"unknown id {x!r}")
        if x in decisions or x in cd.responsive:
            dup.add(x)
        # unresponsive nodes are shared; nothing to duplicate
    # pull in decision parents so every cloned mechanism reads explicit acts
    frontier = list(dup)
    while frontier:
        nid = frontier.pop()
        for p in d.by_id[nid].parents:
            if p in decisions and p not in dup:
                dup.add(p)
                frontier.append(p)
    return dup


def _clone_world(cd: CanonicalDiagram, dup, suffix: str):
    """Nodes/cpts/tables for one extra world; parents inside dup are renamed."""
    d = cd.diagram
    primed = {x: x + suffix for x in dup}
    for new_id in primed.values():
        if new_id in d.by_id:
            raise InputError(f"duplicate id {new_id!r} already present")
    nodes, tables = [], {}
    for n in d.nodes:
        if n.id not in dup:
            continue
        parents = tuple(primed.get(p, p) for p in n.parents)
        nodes.append(dg.Node(primed[n.id], n.kind, n.instances, parents))
        if n.kind == dg.DETERMINISTIC:
            tables[primed[n.id]] = d.tables[n.id]
    return primed, nodes, tables


def build_twin(
    cd: CanonicalDiagram,
    changed: Sequence[str] | None = None,
    include: Sequence[str] = (),
) -> TwinDiagram:
    """Duplicate the worlds touched by ``changed`` decisions.

    ``changed`` defaults to every decision. ``include`` forces extra
    decisions or responsive variables into the duplicated set, which the
    query machinery uses when a primed variable is requested outside the
    changed decisions' reach.
    """
    _require_canonical(cd)
    d = cd.diagram
    if changed is None:
        changed = [n.id for n in d.decision_nodes()]
    dup = _dup_set(cd, changed, include)
    primed, extra_nodes, extra_tables = _clone_world(cd, dup, PRIME)
    diagram = dg.InfluenceDiagram(
        nodes=tuple(d.nodes) + tuple(extra_nodes),
        cpts=d.cpts,
        tables={**d.tables, **extra_tables},
        utilities=d.utilities,
        name=d.name,
    )
    shared = tuple(n.id for n in d.nodes if n.id not in dup)
    return TwinDiagram(
        diagram=diagram,
        base=cd,
        duplicated=frozenset(dup),
        primed=primed,
        shared=shared,
    )


def _strip_primes(raw: str) -> tuple[str, int]:
    base = raw
    k = 0
    while base.endswith(PRIME):
        base = base[: -len(PRIME)]
        k += 1
    return base, k


def evaluate(
    cd: CanonicalDiagram,
    factual_act: Mapping[str, str],
    factual_evidence: Mapping[str, str],
    counterfactual_act: Mapping[str, str],
    query: Sequence[str],
    counterfactual_evidence: Mapping[str, str] | None = None,
) -> dg.Factor:
    """Posterior over ``query`` given the factual record and a hypothetical act.

    Query ids: plain ids name factual-world nodes, a trailing prime names the
    hypothetical world. Counterfactual evidence keys are read in the
    hypothetical world unless the variable is shared between worlds.
    """
    worlds = [
        (factual_act, factual_evidence),
        (counterfactual_act, counterfactual_evidence or {}),
    ]
    return evaluate_worlds(cd, worlds, query)


def evaluate_worlds(
    cd: CanonicalDiagram,
    worlds: Sequence[tuple[Mapping[str, str], Mapping[str, str]]],
    query: Sequence[str],
) -> dg.Factor:
    """Joint posterior over ``query`` across any number of hypothetical worlds.

    ``worlds[0]`` is the factual act/evidence pair; world ``i`` is addressed
    by ``i`` trailing primes on a query or evidence id.
    """
    _require_canonical(cd)
    d = cd.diagram
    if not worlds:
        raise InputError("need at least the factual world")
    decisions = [n.id for n in d.decision_nodes()]
    for act, _ in worlds:
        d.check_act(act)

    factual_act = worlds[0][0]
    changed = []
    include = [set() for _ in worlds]
    for i, (act, _) in enumerate(worlds):
        if i == 0:
            changed.append(set())
        else:
            changed.append({x for x in decisions if act[x] != factual_act[x]})

    def classify(raw: str, default_world: int) -> tuple[str, int]:
        base, k = _strip_primes(raw)
        if base not in d.by_id:
            raise InputError(f"unknown id {raw!r}")
        world = k if k else default_world
        if world >= len(worlds):
            raise InputError(f"{raw!r} names world {world}, only {len(worlds)} given")
        return base, world

    needed: list[tuple[str, int]] = []
    for raw in query:
        base, world = classify(raw, 0)
        needed.append((base, world))
    ev_needed: list[tuple[str, int, str]] = []
    for i, (_, ev) in enumerate(worlds):
        for raw, val in ev.items():
            base, world = classify(raw, i)
            ev_needed.append((base, world, val))

    shared_ok = set(d.by_id) - set(decisions) - cd.responsive
    for base, world in needed + [(b, w) for b, w, _ in ev_needed]:
        if world > 0 and base not in shared_ok:
            include[world].add(base)

    # build the stacked diagram: base world plus one clone per extra world
    nodes = list(d.nodes)
    tables = dict(d.tables)
    primed_maps: list[Mapping[str, str]] = [{x: x for x in d.by_id}]
    for i in range(1, len(worlds)):
        dup = _dup_set(cd, changed[i], include[i])
        primed, extra_nodes, extra_tables = _clone_world(cd, dup, PRIME * i)
        # earlier clones could collide only via pathological ids; Node ctor
        # collisions surface in the diagram validation below
        nodes.extend(extra_nodes)
        tables.update(extra_tables)
        primed_maps.append({x: primed.get(x, x) for x in d.by_id})
    stacked = dg.InfluenceDiagram(
        nodes=tuple(nodes),
        cpts=d.cpts,
        tables=tables,
        utilities=d.utilities,
        name=d.name,
    )

    act: dict[str, str] = {}
    for i, (world_act, _) in enumerate(worlds):
        for x in decisions:
            act[primed_maps[i][x]] = world_act[x]

    evidence: dict[str, str] = {}
    for base, world, val in ev_needed:
        nid = primed_maps[world][base]
        if nid in evidence and evidence[nid] != val:
            raise ImpossibleEvidenceError(
                f"contradictory evidence on {nid!r}: {evidence[nid]!r} vs {val!r}"
            )
        evidence[nid] = val

    resolved = tuple(primed_maps[world][base] for base, world in needed)
    return dg.infer(stacked, act, evidence, resolved)

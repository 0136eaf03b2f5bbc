"""Compile world tables into canonical-form influence diagrams.

Canonical form: every variable that responds to the decisions is rewritten
as a deterministic function of its causes plus one mapping variable, and all
residual uncertainty lives in a chain of unresponsive chance nodes (domain
variables first, then mapping variables).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import diagram as dg
from . import mapping as mp
from . import worlds
from .constants import MAX_MAPPING_INSTANCES, PROB_TOL
from .errors import (
    DefinednessError,
    InputError,
    SizeLimitError,
    UnquantifiedTableError,
)


@dataclass(frozen=True)
class CanonicalDiagram:
    """An influence diagram together with its canonical bookkeeping.

    ``responsive`` lists the domain variables that were rewritten as
    deterministic nodes; ``mappings`` keys each mapping node id to the
    mapping variable it represents.
    """

    diagram: dg.InfluenceDiagram
    responsive: frozenset[str]
    mappings: Mapping[str, mp.MappingVariable] = field(default_factory=dict)

    def mapping_node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.diagram.nodes if n.id in self.mappings)


def _split_order(table: worlds.WorldTable, order: Sequence[str] | None):
    """Return (unresponsive_ids, responsive_ids) in compilation order."""
    responsive = set()
    for x in table.chance_ids():
        if not worlds.is_unresponsive_limited(table, [x]):
            responsive.add(x)
    if order is None:
        unresp = [x for x in table.chance_ids() if x not in responsive]
        resp = [x for x in table.chance_ids() if x in responsive]
        return unresp, resp
    order = list(order)
    if sorted(order) != sorted(table.chance_ids()):
        raise InputError("order must be a permutation of the chance variable ids")
    seen_responsive = False
    unresp, resp = [], []
    for x in order:
        if x in responsive:
            seen_responsive = True
            resp.append(x)
        else:
            if seen_responsive:
                raise InputError(
                    f"unresponsive variable {x!r} must precede all responsive ones"
                )
            unresp.append(x)
    return unresp, resp


def _chain_parents(joint, spaces, j):
    """Greedily drop predecessors of member j that the joint renders
    conditionally irrelevant, testing exact independence at PROB_TOL."""
    kept = list(range(j))
    for i in range(j):
        trial = [k for k in kept if k != i]
        if _cond_indep(joint, j, i, trial):
            kept = trial
    return kept


def _cond_indep(joint, j, i, given):
    # member j independent of coordinate i given coordinates `given`?
    groups: dict[tuple, dict] = {}
    for cfg, w in joint.items():
        key = tuple(cfg[k] for k in given)
        sub = groups.setdefault(key, {})
        sub.setdefault(cfg[i], {})
        sub[cfg[i]][cfg[j]] = sub[cfg[i]].get(cfg[j], 0.0) + w
    for sub in groups.values():
        dists = []
        for by_val in sub.values():
            total = sum(by_val.values())
            dists.append({v: p / total for v, p in by_val.items()})
        base = dists[0]
        values = set().union(*[d.keys() for d in dists])
        for d in dists[1:]:
            for v in values:
                if abs(d.get(v, 0.0) - base.get(v, 0.0)) > PROB_TOL:
                    return False
    return True


def _chain_cpt(joint, spaces, j, kept):
    """Total CPT for chain member j given the kept predecessors.

    Rows never realized by the joint get a uniform distribution; they carry
    no mass but keep the diagram total.
    """
    inst = spaces[j]
    parent_spaces = [spaces[k] for k in kept]
    size = 1
    for s in parent_spaces:
        size *= len(s)
    if size > MAX_MAPPING_INSTANCES:
        raise SizeLimitError(
            f"chain member has {size} parent configurations "
            f"(limit {MAX_MAPPING_INSTANCES})"
        )
    realized: dict[tuple, dict] = {}
    for cfg, w in joint.items():
        key = tuple(cfg[k] for k in kept)
        row = realized.setdefault(key, {})
        row[cfg[j]] = row.get(cfg[j], 0.0) + w
    cpt = {}
    uniform = tuple(1.0 / len(inst) for _ in inst)
    for key in itertools.product(*parent_spaces):
        row = realized.get(key)
        if row is None:
            cpt[key] = uniform
        else:
            total = sum(row.values())
            cpt[key] = tuple(row.get(v, 0.0) / total for v in inst)
    return cpt


def to_canonical(
    table: worlds.WorldTable, order: Sequence[str] | None = None
) -> CanonicalDiagram:
    """Compile a quantified world table into canonical form.

    ``order`` optionally fixes the variable ordering; unresponsive variables
    must precede responsive ones. Each responsive variable gets the smallest
    cause set (restricted to decisions and earlier variables) whose mapping
    variable is defined in every possible state, falling back to the full
    decision set.
    """
    if not table.quantified:
        raise UnquantifiedTableError(
            "canonical form needs state priors, not possibility flags"
        )
    unresp, resp = _split_order(table, order)
    decisions = list(table.decision_ids())

    chosen: dict[str, tuple[mp.MappingVariable, dict]] = {}
    taken_ids = set(table.decision_ids()) | set(table.chance_ids())
    predecessors = set(decisions) | set(unresp)
    for x in resp:
        mv, by_state = _pick_defined_mapping(table, x, predecessors)
        if mv.id in taken_ids:
            raise InputError(f"mapping node id {mv.id!r} collides with an existing id")
        taken_ids.add(mv.id)
        chosen[x] = (mv, by_state)
        predecessors.add(x)

    # Joint over the unresponsive chain: domain variables then mapping nodes.
    sequence = list(unresp) + [chosen[x][0].id for x in resp]
    spaces = [table.variable(z).instances for z in unresp] + [
        chosen[x][0].symbols for x in resp
    ]
    read_unresp = table._reader(unresp)
    first_act = table.act_tuples[0]
    joint: dict[tuple, float] = {}
    for st in table.possible_states():
        vals = list(read_unresp(st, first_act))
        for x in resp:
            mv, by_state = chosen[x]
            vals.append(mv.symbols[by_state[st.id]])
        key = tuple(vals)
        joint[key] = joint.get(key, 0.0) + (st.prior or 0.0)

    nodes = [
        dg.Node(d, dg.DECISION, table.variable(d).instances) for d in decisions
    ]
    cpts: dict[str, Mapping] = {}
    tables: dict[str, Mapping] = {}
    for j, member in enumerate(sequence):
        kept = _chain_parents(joint, spaces, j)
        parents = tuple(sequence[k] for k in kept)
        nodes.append(dg.Node(member, dg.CHANCE, tuple(spaces[j]), parents))
        cpts[member] = _chain_cpt(joint, spaces, j, kept)

    for x in resp:
        mv, _ = chosen[x]
        parents = tuple(mv.arg_ids) + (mv.id,)
        det: dict[tuple, str] = {}
        for i in range(mv.count):
            func = mv.instance(i)
            sym = mv.symbols[i]
            for k, acfg in enumerate(mv.arg_configs):
                det[tuple(acfg) + (sym,)] = func[k][0]
        nodes.append(
            dg.Node(x, dg.DETERMINISTIC, table.variable(x).instances, parents)
        )
        tables[x] = det

    d = dg.InfluenceDiagram(
        nodes=tuple(nodes),
        cpts=cpts,
        tables=tables,
        name=table.name,
    )
    return CanonicalDiagram(
        diagram=d,
        responsive=frozenset(resp),
        mappings={chosen[x][0].id: chosen[x][0] for x in resp},
    )


def _pick_defined_mapping(table, x, predecessors):
    """Pick the first cause set of x whose mapping variable is defined.

    Candidates are the minimal cause sets restricted to predecessors,
    smallest first, ties broken by member ids; the full decision set is the
    fallback and is always defined.
    """
    decisions = frozenset(table.decision_ids())
    candidates = [c for c in worlds.find_causes(table, x) if c <= predecessors]
    candidates.sort(key=lambda c: (len(c), tuple(sorted(c))))
    if decisions not in candidates:
        candidates.append(decisions)
    for cand in candidates:
        args = table.ordered_ids(cand)
        try:
            return mp.mapping_from_world(table, [x], args)
        except DefinednessError:
            continue
    raise AssertionError("full decision set mapping is always defined")


def verify_canonical(
    d: dg.InfluenceDiagram, responsive: Iterable[str]
) -> list[dg.Violation]:
    """Check the two canonical-form clauses.

    Every responsive variable must descend from a decision, and every chance
    node that descends from a decision must be deterministic (equivalently:
    stochastic nodes never respond to decisions).
    """
    responsive = set(responsive)
    by_id = d.by_id
    for x in responsive:
        if x not in by_id:
            raise InputError(f"unknown responsive id {x!r}")
        if by_id[x].kind in (dg.DECISION, dg.UTILITY):
            raise InputError(f"{x!r} is not a domain variable")
    desc = d.descendants([n.id for n in d.decision_nodes()])
    out = []
    for x in sorted(responsive):
        if x not in desc:
            out.append(
                dg.Violation(
                    "responsive_not_decision_descendant",
                    x,
                    f"responsive variable {x!r} has no directed path from a decision",
                )
            )
    for n in d.nodes:
        if n.kind == dg.CHANCE and n.id in desc:
            out.append(
                dg.Violation(
                    "stochastic_decision_descendant",
                    n.id,
                    f"chance node {n.id!r} descends from a decision but is not deterministic",
                )
            )
    return out


def observational_equivalence(
    table: worlds.WorldTable, cd: CanonicalDiagram, act: Mapping[str, str]
) -> float:
    """Largest absolute gap between the table's act distribution over its
    chance variables and the same marginal computed in the compiled diagram."""
    chance_ids = list(table.chance_ids())
    want = worlds.act_distribution(table, chance_ids, act)
    got = dg.infer(cd.diagram, act, {}, chance_ids).reorder(tuple(chance_ids))
    keys = set(want) | set(got.table)
    return max(abs(want.get(k, 0.0) - got.table.get(k, 0.0)) for k in keys)

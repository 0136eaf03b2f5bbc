"""Influence diagrams over discrete variables, with exact inference.

Nodes are decisions, chance variables (with conditional probability
tables), deterministic variables (with function tables), and at most one
utility node. Semantics: given an act, the joint distribution over the
non-decision value nodes is the product of the chance CPT rows selected
by each configuration, with deterministic nodes contributing indicator
factors. Information arcs are accepted in the data model and ignored by
all computations.

CPTs may be sparse in memory: a missing row is treated as unreachable
and raises if it ever receives probability mass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .constants import PROB_TOL
from .errors import ImpossibleEvidenceError, InputError

Config = tuple[str, ...]
CPT = Mapping[Config, tuple[float, ...]]
DetTable = Mapping[Config, str]

DECISION = "decision"
CHANCE = "chance"
DETERMINISTIC = "deterministic"
UTILITY = "utility"
KINDS = (DECISION, CHANCE, DETERMINISTIC, UTILITY)


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    instances: tuple[str, ...] = ()
    parents: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"node {self.id!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class Violation:
    code: str
    node: str | None
    message: str


@dataclass(frozen=True)
class InfluenceDiagram:
    nodes: tuple[Node, ...]
    cpts: Mapping[str, CPT] = field(default_factory=dict)
    tables: Mapping[str, DetTable] = field(default_factory=dict)
    utilities: Mapping[Config, float] = field(default_factory=dict)
    information_arcs: tuple[tuple[str, str], ...] = ()
    name: str | None = field(default=None, compare=False)

    @cached_property
    def by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    def node(self, node_id: str) -> Node:
        try:
            return self.by_id[node_id]
        except KeyError:
            raise InputError(f"unknown node {node_id!r}") from None

    def decision_nodes(self) -> tuple[Node, ...]:
        return tuple(n for n in self.nodes if n.kind == DECISION)

    def value_nodes(self) -> tuple[Node, ...]:
        """Chance and deterministic nodes, in declaration order."""
        return tuple(n for n in self.nodes if n.kind in (CHANCE, DETERMINISTIC))

    def utility_node(self) -> Node | None:
        for n in self.nodes:
            if n.kind == UTILITY:
                return n
        return None

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for n in self.nodes:
            for p in n.parents:
                if p in out:
                    out[p].append(n.id)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        indeg = {n.id: 0 for n in self.nodes}
        for n in self.nodes:
            for p in n.parents:
                if p not in indeg:
                    raise InputError(f"node {n.id!r} has unknown parent {p!r}")
                indeg[n.id] += 1
        ready = [n.id for n in self.nodes if indeg[n.id] == 0]
        order: list[str] = []
        while ready:
            nid = ready.pop(0)
            order.append(nid)
            for c in self.children[nid]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) != len(self.nodes):
            raise InputError("diagram graph has a cycle")
        return tuple(order)

    def descendants(self, roots: Iterable[str]) -> frozenset[str]:
        """All nodes reachable from ``roots`` by directed arcs (exclusive)."""
        seen: set[str] = set()
        stack = list(roots)
        while stack:
            for c in self.children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return frozenset(seen)

    def act_space(self) -> tuple[dict[str, str], ...]:
        decs = self.decision_nodes()
        combos = itertools.product(*(d.instances for d in decs))
        return tuple(dict(zip((d.id for d in decs), c)) for c in combos)

    def check_act(self, act: Mapping[str, str]) -> dict[str, str]:
        decs = self.decision_nodes()
        extra = set(act) - {d.id for d in decs}
        if extra:
            raise InputError(f"act assigns unknown decisions {sorted(extra)}")
        out = {}
        for d in decs:
            if d.id not in act:
                raise InputError(f"act does not assign decision {d.id!r}")
            if act[d.id] not in d.instances:
                raise InputError(
                    f"{act[d.id]!r} is not an instance of decision {d.id!r}"
                )
            out[d.id] = act[d.id]
        return out


# -- validation ----------------------------------------------------------


def validate(d: InfluenceDiagram) -> list[Violation]:
    """Structural and numeric checks; an empty list means the diagram is ok."""
    out: list[Violation] = []
    ids = [n.id for n in d.nodes]
    for dup in {i for i in ids if ids.count(i) > 1}:
        out.append(Violation("duplicate_id", dup, f"duplicate node id {dup!r}"))
        return out
    for n in d.nodes:
        for p in n.parents:
            if p not in d.by_id:
                out.append(
                    Violation("unknown_parent", n.id, f"unknown parent {p!r}")
                )
    if any(v.code == "unknown_parent" for v in out):
        return out
    try:
        d.topological_order
    except InputError:
        out.append(Violation("cycle", None, "diagram graph has a cycle"))
        return out

    utilities = [n for n in d.nodes if n.kind == UTILITY]
    if len(utilities) > 1:
        out.append(Violation("utility_count", None, "more than one utility node"))
    for u in utilities:
        if u.instances:
            out.append(Violation("utility_instances", u.id, "utility node has instances"))
        if d.children[u.id]:
            out.append(Violation("utility_children", u.id, "utility node has children"))
        missing = _missing_rows(d, u.parents, d.utilities)
        if missing:
            out.append(
                Violation("utility_rows", u.id, f"missing utility rows, e.g. {missing}")
            )

    for n in d.nodes:
        if n.kind == UTILITY:
            continue
        if not n.instances:
            out.append(Violation("no_instances", n.id, "node has no instances"))
            continue
        if n.kind == DECISION:
            if n.parents:
                out.append(
                    Violation("decision_parents", n.id, "decision node has parents")
                )
            continue
        if n.kind == CHANCE:
            cpt = d.cpts.get(n.id)
            if cpt is None:
                out.append(Violation("missing_cpt", n.id, "chance node without CPT"))
                continue
            for cfg, probs in cpt.items():
                if len(probs) != len(n.instances):
                    out.append(
                        Violation("cpt_arity", n.id, f"row {cfg} has wrong length")
                    )
                    continue
                if any(p < 0.0 for p in probs):
                    out.append(
                        Violation("cpt_negative", n.id, f"row {cfg} has negative entry")
                    )
                if abs(sum(probs) - 1.0) > PROB_TOL:
                    out.append(
                        Violation(
                            "cpt_row_sum",
                            n.id,
                            f"row {cfg} sums to {sum(probs)!r}, not 1",
                        )
                    )
            missing = _missing_rows(d, n.parents, cpt)
            if missing:
                out.append(
                    Violation("cpt_rows", n.id, f"missing CPT rows, e.g. {missing}")
                )
        if n.kind == DETERMINISTIC:
            table = d.tables.get(n.id)
            if table is None:
                out.append(
                    Violation("missing_table", n.id, "deterministic node without table")
                )
                continue
            for cfg, value in table.items():
                if value not in n.instances:
                    out.append(
                        Violation(
                            "table_value", n.id, f"row {cfg} maps to unknown {value!r}"
                        )
                    )
            missing = _missing_rows(d, n.parents, table)
            if missing:
                out.append(
                    Violation("table_rows", n.id, f"missing function rows, e.g. {missing}")
                )
    return out


def _missing_rows(d: InfluenceDiagram, parents: Sequence[str], rows: Mapping):
    spaces = []
    for p in parents:
        node = d.by_id.get(p)
        if node is None or not node.instances:
            return None
        spaces.append(node.instances)
    for cfg in itertools.product(*spaces):
        if cfg not in rows:
            return cfg
    return None


# -- factors and inference ------------------------------------------------


@dataclass(frozen=True)
class Factor:
    """A sparse non-negative function of a tuple of variables."""

    vars: tuple[str, ...]
    table: Mapping[Config, float]

    def restrict(self, assignment: Mapping[str, str]) -> "Factor":
        """Fix some variables to values and drop them from the factor."""
        hits = [i for i, v in enumerate(self.vars) if v in assignment]
        if not hits:
            return self
        keep = [i for i in range(len(self.vars)) if i not in hits]
        wanted = tuple(assignment[self.vars[i]] for i in hits)
        table: dict[Config, float] = {}
        for cfg, p in self.table.items():
            if tuple(cfg[i] for i in hits) == wanted:
                key = tuple(cfg[i] for i in keep)
                table[key] = table.get(key, 0.0) + p
        return Factor(tuple(self.vars[i] for i in keep), table)

    def multiply(self, other: "Factor") -> "Factor":
        shared = [v for v in self.vars if v in other.vars]
        self_pos = [self.vars.index(v) for v in shared]
        other_pos = [other.vars.index(v) for v in shared]
        other_rest = [i for i in range(len(other.vars)) if other.vars[i] not in shared]
        out_vars = self.vars + tuple(other.vars[i] for i in other_rest)
        groups: dict[Config, list[tuple[Config, float]]] = {}
        for cfg, p in other.table.items():
            key = tuple(cfg[i] for i in other_pos)
            groups.setdefault(key, []).append(
                (tuple(cfg[i] for i in other_rest), p)
            )
        table: dict[Config, float] = {}
        for cfg, p in self.table.items():
            key = tuple(cfg[i] for i in self_pos)
            for rest, q in groups.get(key, ()):
                out_cfg = cfg + rest
                table[out_cfg] = table.get(out_cfg, 0.0) + p * q
        return Factor(out_vars, table)

    def marginalize(self, var: str) -> "Factor":
        if var not in self.vars:
            return self
        i = self.vars.index(var)
        keep = [j for j in range(len(self.vars)) if j != i]
        table: dict[Config, float] = {}
        for cfg, p in self.table.items():
            key = tuple(cfg[j] for j in keep)
            table[key] = table.get(key, 0.0) + p
        return Factor(tuple(self.vars[j] for j in keep), table)

    def reorder(self, vars: Sequence[str]) -> "Factor":
        if tuple(vars) == self.vars:
            return self
        if sorted(vars) != sorted(self.vars):
            raise InputError(
                f"reorder needs a permutation of {self.vars}, got {tuple(vars)}"
            )
        pos = [self.vars.index(v) for v in vars]
        return Factor(
            tuple(vars),
            {tuple(cfg[i] for i in pos): p for cfg, p in self.table.items()},
        )

    def total(self) -> float:
        return sum(self.table.values())

    def normalized(self) -> "Factor":
        z = self.total()
        if z <= 0.0:
            raise ImpossibleEvidenceError("zero total probability mass")
        return Factor(self.vars, {c: p / z for c, p in self.table.items()})


def joint(d: InfluenceDiagram, act: Mapping[str, str]) -> Factor:
    """Exact joint distribution over all value nodes under ``act``.

    Walks the diagram in topological order, branching on chance rows and
    forcing deterministic values; zero-probability branches are pruned.
    """
    act = d.check_act(act)
    order = [n for n in (d.by_id[i] for i in d.topological_order) if n.kind != UTILITY]
    partials: list[tuple[dict[str, str], float]] = [({}, 1.0)]
    for node in order:
        if node.kind == DECISION:
            for env, _ in partials:
                env[node.id] = act[node.id]
            continue
        nxt: list[tuple[dict[str, str], float]] = []
        if node.kind == CHANCE:
            cpt = d.cpts[node.id]
            for env, w in partials:
                cfg = tuple(env[p] for p in node.parents)
                row = cpt.get(cfg)
                if row is None:
                    raise InputError(
                        f"node {node.id!r}: no CPT row for reachable "
                        f"configuration {cfg}"
                    )
                for value, p in zip(node.instances, row):
                    if p > 0.0:
                        env2 = dict(env)
                        env2[node.id] = value
                        nxt.append((env2, w * p))
        else:  # deterministic
            table = d.tables[node.id]
            for env, w in partials:
                cfg = tuple(env[p] for p in node.parents)
                value = table.get(cfg)
                if value is None:
                    raise InputError(
                        f"node {node.id!r}: no function row for reachable "
                        f"configuration {cfg}"
                    )
                env[node.id] = value
                nxt.append((env, w))
        partials = nxt
    out_vars = tuple(n.id for n in d.value_nodes())
    table: dict[Config, float] = {}
    for env, w in partials:
        key = tuple(env[v] for v in out_vars)
        table[key] = table.get(key, 0.0) + w
    return Factor(out_vars, table)


def _node_factor(d: InfluenceDiagram, node: Node, act: Mapping[str, str]) -> Factor:
    """The CPT or indicator factor of a value node, with act values substituted."""
    if node.kind == CHANCE:
        table: dict[Config, float] = {}
        for cfg, probs in d.cpts[node.id].items():
            for value, p in zip(node.instances, probs):
                if p != 0.0:
                    table[cfg + (value,)] = p
    else:
        table = {cfg + (value,): 1.0 for cfg, value in d.tables[node.id].items()}
    f = Factor(node.parents + (node.id,), table)
    fixing = {p: act[p] for p in node.parents if p in act}
    return f.restrict(fixing) if fixing else f


def infer(
    d: InfluenceDiagram,
    act: Mapping[str, str],
    evidence: Mapping[str, str],
    query: Iterable[str],
    order: Sequence[str] | None = None,
) -> Factor:
    """Posterior over ``query`` given ``act`` and chance/deterministic evidence.

    Exact variable elimination. ``order``, when given, must list exactly
    the variables to eliminate; any order yields the same posterior.
    Raises :class:`ImpossibleEvidenceError` when the evidence has zero
    probability under the act.
    """
    act = d.check_act(act)
    value_ids = [n.id for n in d.value_nodes()]
    for v, val in evidence.items():
        node = d.node(v)
        if node.kind not in (CHANCE, DETERMINISTIC):
            raise InputError(f"evidence on non-value node {v!r}")
        if val not in node.instances:
            raise InputError(f"{val!r} is not an instance of {v!r}")
    query_ids = [v for v in value_ids if v in set(query)]
    if set(query) - set(query_ids):
        raise InputError(
            f"query names non-value nodes: {sorted(set(query) - set(query_ids))}"
        )
    if not query_ids:
        raise InputError("empty query")

    factors = [_node_factor(d, n, act) for n in d.value_nodes()]
    factors = [f.restrict(evidence) for f in factors]

    hidden = [v for v in value_ids if v not in evidence and v not in query_ids]
    if order is not None:
        if sorted(order) != sorted(hidden):
            raise InputError(
                "elimination order must cover exactly the non-query, "
                "non-evidence value nodes"
            )
        hidden = list(order)
    for var in hidden:
        related = [f for f in factors if var in f.vars]
        rest = [f for f in factors if var not in f.vars]
        if not related:
            continue
        prod = related[0]
        for f in related[1:]:
            prod = prod.multiply(f)
        factors = rest + [prod.marginalize(var)]

    result = Factor((), {(): 1.0})
    for f in factors:
        result = result.multiply(f)
    for leftover in [v for v in result.vars if v not in query_ids]:
        result = result.marginalize(leftover)
    result = result.normalized()

    # Evidence variables inside the query come back as point values.
    in_evidence = [q for q in query_ids if q in evidence]
    if in_evidence:
        ext = Factor(
            tuple(in_evidence), {tuple(evidence[q] for q in in_evidence): 1.0}
        )
        result = result.multiply(ext)
    return result.reorder(tuple(query_ids))


def marginal_strings(f: Factor) -> list[tuple[str, float]]:
    """Render a factor as deterministic ``var=value`` label/probability pairs."""
    out = []
    for cfg in sorted(f.table):
        label = ",".join(f"{v}={c}" for v, c in zip(f.vars, cfg))
        out.append((label, f.table[cfg]))
    return out

"""Structural-equation models and conversions to and from canonical form.

A model here is a set of domain variables, each written as a deterministic
function of its parents, a private intervention variable, and (usually) a
disturbance. Disturbances are independent unless grouped into dependency
blocks that carry a joint distribution; converting to canonical form turns
each block into an explicit chain of chance nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import diagram as dg
from . import mapping as mp
from .canonical import CanonicalDiagram, verify_canonical
from .constants import MAX_MAPPING_INSTANCES, PROB_TOL
from .errors import FormError, InputError, SizeLimitError
from .worlds import IDLE, SET_PREFIX, set_instance


@dataclass(frozen=True)
class SemVariable:
    id: str
    instances: tuple[str, ...]
    parents: tuple[str, ...] = ()
    intervention: str = ""
    idle_forbidden: bool = False
    hidden: bool = False

    def hat_instances(self) -> tuple[str, ...]:
        sets = tuple(set_instance(v) for v in self.instances)
        return sets if self.idle_forbidden else (IDLE,) + sets


@dataclass(frozen=True)
class Disturbance:
    id: str
    var: str
    instances: tuple[str, ...]
    prior: tuple[float, ...] | None = None


@dataclass(frozen=True)
class DependencyBlock:
    members: tuple[str, ...]
    joint: Mapping[tuple[str, ...], float]


@dataclass(frozen=True)
class StructuralEquationModel:
    """``equations[var]`` maps ``(parent values..., hat value[, disturbance
    value])`` to an instance of ``var``; the disturbance slot is present
    exactly when the variable has one."""

    variables: tuple[SemVariable, ...]
    disturbances: tuple[Disturbance, ...] = ()
    equations: Mapping[str, Mapping[tuple, str]] = field(default_factory=dict)
    blocks: tuple[DependencyBlock, ...] = ()
    name: str | None = None

    @property
    def by_id(self) -> Mapping[str, SemVariable]:
        return {v.id: v for v in self.variables}

    @property
    def disturbance_by_var(self) -> Mapping[str, Disturbance]:
        return {e.var: e for e in self.disturbances}

    @property
    def block_members(self) -> frozenset[str]:
        out = set()
        for b in self.blocks:
            out.update(b.members)
        return frozenset(out)

    def interventions(self) -> tuple[str, ...]:
        return tuple(v.intervention for v in self.variables)

    def check_act(self, act: Mapping[str, str]) -> None:
        hats = {v.intervention: v for v in self.variables}
        if set(act) != set(hats):
            raise InputError(
                f"act must assign exactly the interventions {sorted(hats)}"
            )
        for h, val in act.items():
            if val not in hats[h].hat_instances():
                raise InputError(f"{val!r} is not an instance of {h!r}")


def validate(m: StructuralEquationModel) -> list[dg.Violation]:
    """Structural checks; an empty list means the model is well formed."""
    out: list[dg.Violation] = []
    ids = [v.id for v in m.variables]
    if len(set(ids)) != len(ids):
        out.append(dg.Violation("duplicate_id", "", "duplicate variable ids"))
        return out
    by_id = m.by_id
    hats = [v.intervention for v in m.variables]
    eps_ids = [e.id for e in m.disturbances]
    taken = set(ids)
    for h in hats:
        if not h:
            out.append(dg.Violation("missing_intervention", h, "empty intervention id"))
        elif h in taken:
            out.append(dg.Violation("duplicate_id", h, f"intervention id {h!r} reused"))
        else:
            taken.add(h)
    for e in eps_ids:
        if e in taken:
            out.append(dg.Violation("duplicate_id", e, f"disturbance id {e!r} reused"))
        else:
            taken.add(e)

    for v in m.variables:
        if not v.instances or len(set(v.instances)) != len(v.instances):
            out.append(
                dg.Violation("bad_instances", v.id, f"{v.id!r} needs distinct instances")
            )
        for p in v.parents:
            if p not in by_id:
                out.append(
                    dg.Violation("unknown_parent", v.id, f"{v.id!r} parent {p!r} unknown")
                )
    if _has_cycle(m):
        out.append(dg.Violation("cycle", "", "variable dependencies contain a cycle"))
        return out

    by_var = {}
    for e in m.disturbances:
        if e.var not in by_id:
            out.append(
                dg.Violation("unknown_variable", e.id, f"disturbance for unknown {e.var!r}")
            )
            continue
        if e.var in by_var:
            out.append(
                dg.Violation("duplicate_disturbance", e.id, f"{e.var!r} has two disturbances")
            )
        by_var[e.var] = e
        if not e.instances or len(set(e.instances)) != len(e.instances):
            out.append(
                dg.Violation("bad_instances", e.id, f"{e.id!r} needs distinct instances")
            )

    members = set()
    eps_map = {e.id: e for e in m.disturbances}
    for b in m.blocks:
        for mem in b.members:
            if mem not in eps_map:
                out.append(
                    dg.Violation("unknown_member", mem, f"block member {mem!r} unknown")
                )
            elif mem in members:
                out.append(
                    dg.Violation("overlapping_blocks", mem, f"{mem!r} in two blocks")
                )
            members.add(mem)
        spaces = [eps_map[x].instances for x in b.members if x in eps_map]
        if len(spaces) == len(b.members):
            total = 0.0
            for key, p in b.joint.items():
                if len(key) != len(b.members) or any(
                    key[i] not in spaces[i] for i in range(len(key))
                ):
                    out.append(
                        dg.Violation("bad_joint_row", b.members[0], f"bad joint key {key!r}")
                    )
                    continue
                if p < 0:
                    out.append(
                        dg.Violation("negative_probability", b.members[0], f"p{key!r} < 0")
                    )
                total += p
            if abs(total - 1.0) > PROB_TOL:
                out.append(
                    dg.Violation(
                        "joint_not_normalized",
                        b.members[0],
                        f"block joint sums to {total!r}",
                    )
                )

    for e in m.disturbances:
        if e.id in members:
            if e.prior is not None:
                out.append(
                    dg.Violation(
                        "prior_in_block", e.id, f"{e.id!r} is in a block but has a prior"
                    )
                )
        elif e.prior is None:
            out.append(
                dg.Violation("missing_prior", e.id, f"{e.id!r} needs a prior")
            )
        elif len(e.prior) != len(e.instances):
            out.append(
                dg.Violation("bad_prior", e.id, f"{e.id!r} prior arity mismatch")
            )
        else:
            if any(p < 0 for p in e.prior):
                out.append(dg.Violation("negative_probability", e.id, f"{e.id!r} prior"))
            if abs(sum(e.prior) - 1.0) > PROB_TOL:
                out.append(
                    dg.Violation(
                        "prior_not_normalized", e.id, f"{e.id!r} prior sums to {sum(e.prior)!r}"
                    )
                )

    for v in m.variables:
        rows = m.equations.get(v.id)
        if rows is None:
            out.append(dg.Violation("missing_equation", v.id, f"no equation for {v.id!r}"))
            continue
        if any(p not in by_id for p in v.parents):
            continue
        eps = by_var.get(v.id)
        key_spaces = [by_id[p].instances for p in v.parents]
        key_spaces.append(v.hat_instances())
        if eps is not None:
            key_spaces.append(eps.instances)
        hat_pos = len(v.parents)
        want = set(itertools.product(*key_spaces))
        for key, val in rows.items():
            if key not in want:
                out.append(
                    dg.Violation("unknown_row", v.id, f"{v.id!r} has stray row {key!r}")
                )
                continue
            want.discard(key)
            if val not in v.instances:
                out.append(
                    dg.Violation("bad_value", v.id, f"{v.id!r} row {key!r} -> {val!r}")
                )
            elif key[hat_pos].startswith(SET_PREFIX) and val != key[hat_pos][len(SET_PREFIX):]:
                out.append(
                    dg.Violation(
                        "override_broken",
                        v.id,
                        f"{v.id!r} ignores {key[hat_pos]!r} in row {key!r}",
                    )
                )
        for key in sorted(want):
            out.append(dg.Violation("missing_row", v.id, f"{v.id!r} lacks row {key!r}"))
    return out


def _has_cycle(m: StructuralEquationModel) -> bool:
    by_id = m.by_id
    indeg = {v.id: 0 for v in m.variables}
    children: dict[str, list[str]] = {v.id: [] for v in m.variables}
    for v in m.variables:
        for p in v.parents:
            if p in by_id:
                children[p].append(v.id)
                indeg[v.id] += 1
    queue = [x for x, k in indeg.items() if k == 0]
    seen = 0
    while queue:
        x = queue.pop()
        seen += 1
        for c in children[x]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    return seen != len(m.variables)


def _require_valid(m: StructuralEquationModel) -> None:
    bad = validate(m)
    if bad:
        raise FormError(
            "invalid structural model: " + "; ".join(v.message for v in bad[:5])
        )


# ---------------------------------------------------------------------------
# SEM -> canonical diagram


def to_canonical_from_sem(m: StructuralEquationModel) -> CanonicalDiagram:
    """Unroll a structural model into a canonical-form influence diagram.

    Interventions become decisions, disturbances become root chance nodes
    (block members become a chance chain carrying the block joint), and each
    domain variable becomes a deterministic node whose table is its equation.
    """
    _require_valid(m)
    by_var = m.disturbance_by_var
    eps_map = {e.id: e for e in m.disturbances}
    in_block = m.block_members

    nodes: list[dg.Node] = []
    cpts: dict[str, Mapping] = {}
    tables: dict[str, Mapping] = {}
    for v in m.variables:
        nodes.append(dg.Node(v.intervention, dg.DECISION, v.hat_instances()))

    for b in m.blocks:
        spaces = [eps_map[x].instances for x in b.members]
        for j, mem in enumerate(b.members):
            parents = tuple(b.members[:j])
            nodes.append(dg.Node(mem, dg.CHANCE, spaces[j], parents))
            cpts[mem] = _block_chain_cpt(b, spaces, j)
    for e in m.disturbances:
        if e.id in in_block:
            continue
        nodes.append(dg.Node(e.id, dg.CHANCE, e.instances))
        cpts[e.id] = {(): tuple(e.prior)}

    for v in m.variables:
        parents = v.parents + (v.intervention,)
        if v.id in by_var:
            parents += (by_var[v.id].id,)
        nodes.append(dg.Node(v.id, dg.DETERMINISTIC, v.instances, parents))
        tables[v.id] = dict(m.equations[v.id])

    d = dg.InfluenceDiagram(nodes=tuple(nodes), cpts=cpts, tables=tables, name=m.name)
    responsive = frozenset(v.id for v in m.variables if len(v.instances) > 1)
    mappings = {}
    for v in m.variables:
        e = by_var.get(v.id)
        if e is None:
            continue
        arg_ids = v.parents + (v.intervention,)
        mappings[e.id] = mp.MappingVariable(
            target_ids=(v.id,),
            target_spaces=(v.instances,),
            arg_ids=arg_ids,
            arg_spaces=tuple(m.by_id[p].instances for p in v.parents)
            + (v.hat_instances(),),
            atomic_args=((v.intervention, v.id),),
        )
    cd = CanonicalDiagram(diagram=d, responsive=responsive, mappings=mappings)
    bad = verify_canonical(d, responsive)
    if bad:  # construction should prevent this
        raise FormError("conversion left non-canonical structure: " + bad[0].message)
    return cd


def _block_chain_cpt(b: DependencyBlock, spaces, j):
    realized: dict[tuple, dict] = {}
    for key, p in b.joint.items():
        if p <= 0.0:
            continue
        prefix = key[:j]
        row = realized.setdefault(prefix, {})
        row[key[j]] = row.get(key[j], 0.0) + p
    uniform = tuple(1.0 / len(spaces[j]) for _ in spaces[j])
    cpt = {}
    for prefix in itertools.product(*spaces[:j]):
        row = realized.get(prefix)
        if row is None:
            cpt[prefix] = uniform
        else:
            total = sum(row.values())
            cpt[prefix] = tuple(row.get(v, 0.0) / total for v in spaces[j])
    return cpt


def domain_distribution(
    m: StructuralEquationModel, act: Mapping[str, str], include_hidden: bool = False
) -> dg.Factor:
    """Joint over the domain variables under ``act`` (hidden ones optional)."""
    cd = to_canonical_from_sem(m)
    query = [
        v.id for v in m.variables if include_hidden or not v.hidden
    ]
    return dg.infer(cd.diagram, act, {}, query)


# ---------------------------------------------------------------------------
# canonical diagram -> SEM


def _fresh(used: set[str], base: str) -> str:
    cand = base
    k = 2
    while cand in used:
        cand = f"{base}{k}"
        k += 1
    used.add(cand)
    return cand


def _atomic_hats(cd: CanonicalDiagram, responsive_det: set[str]) -> dict[str, str]:
    """decision id -> the responsive variable it sets directly."""
    d = cd.diagram
    hats: dict[str, str] = {}
    for mv in cd.mappings.values():
        for arg, target in mv.atomic_args:
            if arg in d.by_id and d.by_id[arg].kind == dg.DECISION and target in responsive_det:
                if hats.get(arg, target) != target:
                    raise FormError(f"decision {arg!r} sets two variables")
                hats[arg] = target
    for n in d.decision_nodes():
        if n.id in hats:
            continue
        shaped = [
            x
            for x in responsive_det
            if n.id in d.by_id[x].parents and _overrides(d, n, x)
        ]
        if len(shaped) == 1:
            hats[n.id] = shaped[0]
    # reuse is only sound when the target is the decision's sole reader;
    # any other dependent still needs the decision as a domain variable
    for dec, x in list(hats.items()):
        readers = {n.id for n in d.nodes if dec in n.parents}
        if readers - {x}:
            del hats[dec]
    return hats


def _overrides(d: dg.InfluenceDiagram, hat: dg.Node, x: str) -> bool:
    node = d.by_id[x]
    allowed = {IDLE} | {set_instance(v) for v in node.instances}
    if not set(hat.instances) <= allowed:
        return False
    pos = node.parents.index(hat.id)
    for key, val in d.tables[x].items():
        hv = key[pos]
        if hv.startswith(SET_PREFIX) and val != hv[len(SET_PREFIX):]:
            return False
    return True


def _row_dist(d: dg.InfluenceDiagram, nid: str, key: tuple) -> dict[str, float]:
    """Distribution of a chance node's row; unreachable rows pin the first
    instance so absorbed products stay normalized."""
    node = d.by_id[nid]
    if node.kind == dg.DETERMINISTIC:
        val = d.tables[nid].get(key, node.instances[0])
        return {val: 1.0}
    row = d.cpts[nid].get(key)
    if row is None:
        return {node.instances[0]: 1.0}
    return {v: p for v, p in zip(node.instances, row) if p > 0.0}


def _guard(count: int, what: str) -> None:
    if count > MAX_MAPPING_INSTANCES:
        raise SizeLimitError(
            f"{what} needs {count} entries (limit {MAX_MAPPING_INSTANCES})"
        )


def from_canonical(cd: CanonicalDiagram) -> StructuralEquationModel:
    """Rewrite a canonical diagram as a structural model.

    Domain parents of a mapping variable are absorbed into the disturbance;
    arcs between mapping variables (or from a mapping variable into an
    unresponsive domain variable) force a hidden domain variable whose
    disturbance carries the entangled joint. Every variable gets a private
    intervention; existing direct-setting decisions are reused.
    """
    d = cd.diagram
    bad = verify_canonical(d, cd.responsive)
    if bad:
        raise FormError("not canonical form: " + bad[0].message)
    if d.utility_node() is not None:
        raise InputError("utility nodes have no structural-model counterpart")

    decisions = [n.id for n in d.decision_nodes()]
    responsive_det = {
        n.id
        for n in d.nodes
        if n.kind == dg.DETERMINISTIC and n.id in cd.responsive
    }
    hats = _atomic_hats(cd, responsive_det)

    mapping_ids = {x for x in cd.mappings if x in d.by_id}
    mech: dict[str, str] = {}
    for x in sorted(responsive_det):
        mspar = [p for p in d.by_id[x].parents if p in mapping_ids]
        if len(mspar) != 1:
            raise FormError(
                f"responsive variable {x!r} needs exactly one mapping parent, has {len(mspar)}"
            )
        m_x = mspar[0]
        if m_x in mech:
            raise FormError(f"mapping node {m_x!r} feeds two responsive variables")
        mech[m_x] = x

    value_ids = [n.id for n in d.value_nodes()]
    domain_unresp = [
        nid for nid in value_ids if nid not in mech and nid not in responsive_det
    ]
    network = set(mech) | set(domain_unresp)

    # entangling arcs: mechanism -> anything unresponsive
    comp = {nid: nid for nid in network}

    def find(a: str) -> str:
        while comp[a] != a:
            comp[a] = comp[comp[a]]
            a = comp[a]
        return a

    def union(a: str, b: str) -> None:
        comp[find(a)] = find(b)

    for nid in network:
        for p in d.by_id[nid].parents:
            if p in mech:
                union(p, nid)
    groups: dict[str, list[str]] = {}
    topo_pos = {nid: i for i, nid in enumerate(d.topological_order)}
    for nid in sorted(network, key=lambda n: topo_pos[n]):
        groups.setdefault(find(nid), []).append(nid)
    blocks = [g for g in groups.values() if len(g) > 1]
    in_block = {nid: i for i, g in enumerate(blocks) for nid in g}

    used = set(d.by_id)
    pieces: dict[str, dict] = {}
    eps_out: list[Disturbance] = []

    hidden_of: dict[int, str] = {}
    for i, g in enumerate(blocks):
        hidden_of[i] = _fresh(used, f"hidden{i}")

    hat_of: dict[str, str] = {}
    for dec, x in hats.items():
        hat_of[x] = dec

    def fresh_hat(x: str) -> str:
        return _fresh(used, f"{x}_hat")

    # converted decisions keep their instances and forbid idling
    for nid in decisions:
        if nid in hats:
            continue
        n = d.by_id[nid]
        rows = {(set_instance(v),): v for v in n.instances}
        pieces[nid] = dict(
            var=SemVariable(nid, n.instances, (), fresh_hat(nid), idle_forbidden=True),
            rows=rows,
            eps=None,
            deps=(),
        )

    for nid in domain_unresp:
        if nid in in_block:
            continue
        n = d.by_id[nid]
        hat = fresh_hat(nid)
        if n.kind == dg.DETERMINISTIC:
            rows = {}
            spaces = [d.by_id[p].instances for p in n.parents]
            for key in itertools.product(*spaces):
                base = d.tables[nid].get(key, n.instances[0])
                rows[key + (IDLE,)] = base
                for v in n.instances:
                    rows[key + (set_instance(v),)] = v
            pieces[nid] = dict(
                var=SemVariable(nid, n.instances, n.parents, hat),
                rows=rows,
                eps=None,
                deps=n.parents,
            )
            continue
        eps, rows = _absorbed_disturbance(d, nid, n.parents, hat, used)
        pieces[nid] = dict(
            var=SemVariable(nid, n.instances, n.parents, hat),
            rows=rows,
            eps=eps,
            deps=n.parents,
        )

    block_tuples: dict[int, tuple] = {}
    for i, g in enumerate(blocks):
        h = hidden_of[i]
        zp: list[str] = []
        for nid in g:
            for p in d.by_id[nid].parents:
                if p not in g and p not in zp:
                    zp.append(p)
        zp.sort(key=lambda n: topo_pos[n])
        hat = _fresh(used, f"{h}_hat")
        eps, rows, h_instances, tuples = _hidden_disturbance(d, g, zp, h, hat, used)
        pieces[h] = dict(
            var=SemVariable(h, h_instances, tuple(zp), hat, hidden=True),
            rows=rows,
            eps=eps,
            deps=tuple(zp),
        )
        block_tuples[i] = (g, h, h_instances, tuples)
        # entangled plain variables become selectors reading the hidden one
        for j, nid in enumerate(g):
            if nid in mech:
                continue
            n = d.by_id[nid]
            rows = {}
            for hv, tup in zip(h_instances, tuples):
                rows[(hv, IDLE)] = tup[j]
                for v in n.instances:
                    rows[(hv, set_instance(v))] = v
            pieces[nid] = dict(
                var=SemVariable(nid, n.instances, (h,), fresh_hat(nid)),
                rows=rows,
                eps=None,
                deps=(h,),
            )

    for x in sorted(responsive_det, key=lambda n: topo_pos[n]):
        n = d.by_id[x]
        m_x = next(p for p in n.parents if p in mapping_ids)
        cause = [p for p in n.parents if p != m_x]
        hat = hat_of.get(x)
        hat_space = d.by_id[hat].instances if hat else None
        c_args = [p for p in cause if p != hat]
        if m_x in in_block:
            i = in_block[m_x]
            g, h, h_instances, tuples = block_tuples[i]
            j = g.index(m_x)
            parents = tuple(c_args) + (h,)
            rows = _selector_rows(d, x, n, parents, hat, hat_space, m_x, list(zip(h_instances, [t[j] for t in tuples])))
            pieces[x] = dict(
                var=SemVariable(
                    x,
                    n.instances,
                    parents,
                    hat or fresh_hat(x),
                    idle_forbidden=bool(hat_space) and IDLE not in hat_space,
                ),
                rows=rows,
                eps=None,
                deps=parents,
            )
            continue
        wd = list(d.by_id[m_x].parents)
        a_args = list(c_args) + [w for w in wd if w not in c_args]
        eps, rows = _mechanism_disturbance(
            d, x, n, m_x, c_args, wd, a_args, hat, hat_space, used
        )
        pieces[x] = dict(
            var=SemVariable(
                x,
                n.instances,
                tuple(a_args),
                hat or fresh_hat(x),
                idle_forbidden=bool(hat_space) and IDLE not in hat_space,
            ),
            rows=rows,
            eps=eps,
            deps=tuple(a_args),
        )

    order = _sem_order(pieces, decisions, hats, d)
    variables, disturbances, equations = [], [], {}
    for nid in order:
        piece = pieces[nid]
        variables.append(piece["var"])
        equations[piece["var"].id] = piece["rows"]
        if piece["eps"] is not None:
            disturbances.append(piece["eps"])
    return StructuralEquationModel(
        variables=tuple(variables),
        disturbances=tuple(disturbances),
        equations=equations,
        name=d.name,
    )


def _sem_order(pieces, decisions, hats, d):
    converted = [nid for nid in decisions if nid not in hats]
    rest = [nid for nid in pieces if nid not in converted]
    pos = {nid: i for i, nid in enumerate(d.topological_order)}
    rest.sort(key=lambda nid: pos.get(nid, len(pos)))
    order, emitted, pending = list(converted), set(converted), list(rest)
    while pending:
        progressed = False
        for nid in list(pending):
            if all(p in emitted for p in pieces[nid]["deps"]):
                order.append(nid)
                emitted.add(nid)
                pending.remove(nid)
                progressed = True
        if not progressed:  # pragma: no cover
            raise FormError("could not order structural variables")
    return order


def _hat_values(hat_space, instances):
    if hat_space is not None:
        return tuple(hat_space)
    return (IDLE,) + tuple(set_instance(v) for v in instances)


def _free_symbol(values: Sequence[str]) -> str:
    return "|".join(values)


def _absorbed_disturbance(d, nid, parents, hat, used):
    """Disturbance for an unresponsive chance variable: one instance per
    positive-probability function from parent configurations to values."""
    n = d.by_id[nid]
    spaces = [d.by_id[p].instances for p in parents]
    configs = list(itertools.product(*spaces))
    supports = []
    count = 1
    for w in configs:
        dist = _row_dist(d, nid, w)
        items = [(v, p) for v, p in dist.items()]
        items.sort(key=lambda vp: n.instances.index(vp[0]))
        supports.append(items)
        count *= len(items)
        _guard(count, f"disturbance for {nid!r}")
    symbols, prior, funcs = [], [], []
    for combo in itertools.product(*supports):
        values = tuple(v for v, _ in combo)
        weight = 1.0
        for _, p in combo:
            weight *= p
        symbols.append(_free_symbol(values))
        prior.append(weight)
        funcs.append(values)
    eps_id = _fresh(used, mp.mapping_id([nid], list(parents) + [hat]))
    _guard(count * len(configs) * (1 + len(n.instances)), f"equation for {nid!r}")
    rows = {}
    for sym, values in zip(symbols, funcs):
        for k, w in enumerate(configs):
            rows[w + (IDLE, sym)] = values[k]
            for v in n.instances:
                rows[w + (set_instance(v), sym)] = v
    eps = Disturbance(eps_id, nid, tuple(symbols), tuple(prior))
    return eps, rows


def _hidden_disturbance(d, group, zp, h, hat, used):
    """Disturbance for a hidden variable that bundles an entangled group.

    Instances of the hidden variable are the jointly realizable value tuples
    of the group; the disturbance ranges over functions from outside-parent
    configurations to those tuples.
    """
    spaces = [d.by_id[p].instances for p in zp]
    configs = list(itertools.product(*spaces))
    tuple_support: dict[tuple, None] = {}
    per_config: list[list[tuple[tuple, float]]] = []
    count = 1
    for w in configs:
        w_env = dict(zip(zp, w))
        options: list[tuple[tuple, float]] = [((), 1.0)]
        for nid in group:
            nxt = []
            parents = d.by_id[nid].parents
            for prefix, weight in options:
                env = dict(w_env)
                env.update(zip(group, prefix))
                key = tuple(env[p] for p in parents)
                for v, p in _row_dist(d, nid, key).items():
                    nxt.append((prefix + (v,), weight * p))
            _guard(count * len(nxt), f"hidden disturbance {h!r}")
            options = nxt
        options = [(t, p) for t, p in options if p > 0.0]
        per_config.append(options)
        count *= len(options)
        _guard(count, f"hidden disturbance {h!r}")
        for t, _ in options:
            tuple_support[t] = None
    tuples = list(tuple_support)
    h_instances = tuple(";".join(t) for t in tuples)
    index = {t: s for t, s in zip(tuples, h_instances)}
    _guard(count * len(configs) * (1 + len(h_instances)), f"equation for {h!r}")

    symbols, prior = [], []
    for combo in itertools.product(*per_config):
        values = tuple(index[t] for t, _ in combo)
        weight = 1.0
        for _, p in combo:
            weight *= p
        symbols.append(_free_symbol(values))
        prior.append(weight)
    eps_id = _fresh(used, mp.mapping_id([h], list(zp) + [hat]))
    rows = {}
    for sym, combo in zip(symbols, itertools.product(*per_config)):
        for k, w in enumerate(configs):
            rows[w + (IDLE, sym)] = index[combo[k][0]]
            for hv in h_instances:
                rows[w + (set_instance(hv), sym)] = hv
    eps = Disturbance(eps_id, h, tuple(symbols), tuple(prior))
    return eps, rows, h_instances, tuples


def _det_value(d, x, node, env):
    key = tuple(env[p] for p in node.parents)
    return d.tables[x].get(key, node.instances[0])


def _selector_rows(d, x, node, parents, hat, hat_space, m_x, h_pairs):
    """Equation for a responsive variable whose mechanism lives in a hidden
    variable: parents are its causes plus the hidden variable."""
    hat_vals = _hat_values(hat_space, node.instances)
    c_args = parents[:-1]
    size = len(h_pairs) * len(hat_vals)
    for p in c_args:
        size *= len(d.by_id[p].instances)
    _guard(size, f"equation for {x!r}")
    rows = {}
    for key in itertools.product(*[d.by_id[p].instances for p in c_args]):
        env = dict(zip(c_args, key))
        for hv, m_val in h_pairs:
            for hval in hat_vals:
                if hval.startswith(SET_PREFIX):
                    rows[key + (hv, hval)] = hval[len(SET_PREFIX):]
                    continue
                env2 = dict(env)
                env2[m_x] = m_val
                if hat is not None:
                    env2[hat] = hval
                rows[key + (hv, hval)] = _det_value(d, x, node, env2)
    return rows


def _mechanism_disturbance(d, x, node, m_x, c_args, wd, a_args, hat, hat_space, used):
    """Disturbance for a responsive variable: absorb the mapping node's
    domain parents, accumulating probability on the induced visible
    functions from cause configurations to values."""
    hat_vals = _hat_values(hat_space, node.instances)
    wd_spaces = [d.by_id[p].instances for p in wd]
    wd_configs = list(itertools.product(*wd_spaces))
    supports = []
    count = 1
    for w in wd_configs:
        dist = _row_dist(d, m_x, w)
        items = list(dist.items())
        items.sort(key=lambda vp: d.by_id[m_x].instances.index(vp[0]))
        supports.append(items)
        count *= len(items)
        _guard(count, f"disturbance for {x!r}")
    a_spaces = [d.by_id[p].instances for p in a_args]
    a_configs = list(itertools.product(*a_spaces))
    _guard(len(a_configs), f"cause configurations for {x!r}")
    _guard(count * len(a_configs), f"disturbance functions for {x!r}")
    wd_pos = [a_args.index(p) for p in wd]
    wd_index = {w: k for k, w in enumerate(wd_configs)}

    by_func: dict[tuple, float] = {}
    for combo in itertools.product(*supports):
        weight = 1.0
        for _, p in combo:
            weight *= p
        values = []
        for acfg in a_configs:
            w = tuple(acfg[i] for i in wd_pos)
            m_val = combo[wd_index[w]][0]
            env = dict(zip(a_args, acfg))
            env[m_x] = m_val
            if hat is not None:
                env[hat] = IDLE if IDLE in hat_vals else hat_vals[0]
            values.append(_det_value(d, x, node, env))
        key = tuple(values)
        by_func[key] = by_func.get(key, 0.0) + weight

    symbols = [_free_symbol(v) for v in by_func]
    prior = list(by_func.values())
    eps_id = _fresh(used, mp.mapping_id([x], list(a_args) + [hat or f"{x}_hat"]))
    _guard(len(by_func) * len(a_configs) * len(hat_vals), f"equation for {x!r}")
    rows = {}
    for sym, values in zip(symbols, by_func):
        for k, acfg in enumerate(a_configs):
            for hval in hat_vals:
                if hval.startswith(SET_PREFIX):
                    rows[acfg + (hval, sym)] = hval[len(SET_PREFIX):]
                else:
                    rows[acfg + (hval, sym)] = values[k]
    eps = Disturbance(eps_id, x, tuple(symbols), tuple(prior))
    return eps, rows


# ---------------------------------------------------------------------------
# parameter counting


@dataclass(frozen=True)
class ParamCount:
    entries: tuple[tuple[str, int], ...]
    total: int


def parameter_count(model) -> ParamCount:
    """Free probabilities needed to quantify a model.

    Influence diagrams charge each chance node (instances minus one) per
    parent configuration; structural models charge their disturbances, and a
    dependency block is charged as one joint table.
    """
    if isinstance(model, CanonicalDiagram):
        model = model.diagram
    if isinstance(model, dg.InfluenceDiagram):
        entries = []
        for n in model.nodes:
            if n.kind != dg.CHANCE:
                continue
            rows = 1
            for p in n.parents:
                rows *= len(model.by_id[p].instances)
            entries.append((n.id, (len(n.instances) - 1) * rows))
        return ParamCount(tuple(entries), sum(c for _, c in entries))
    if isinstance(model, StructuralEquationModel):
        entries = []
        in_block = model.block_members
        for e in model.disturbances:
            if e.id in in_block:
                continue
            entries.append((e.id, len(e.instances) - 1))
        for b in model.blocks:
            eps_map = {e.id: e for e in model.disturbances}
            cells = 1
            for mem in b.members:
                cells *= len(eps_map[mem].instances)
            entries.append(("block(" + ",".join(b.members) + ")", cells - 1))
        return ParamCount(tuple(entries), sum(c for _, c in entries))
    raise InputError(f"cannot count parameters of {type(model).__name__}")

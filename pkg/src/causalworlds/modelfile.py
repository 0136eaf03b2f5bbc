"""JSON model files: world tables, influence diagrams, canonical diagrams,
and structural models (independent or block-correlated disturbances).

Parsing is strict: unknown or duplicate fields are rejected with the JSON
path that caused the problem. Probabilities travel as decimal strings so a
parse/serialize round trip is byte identical.
"""

from __future__ import annotations

import json
import math
from typing import Any, Mapping

from . import diagram as dg
from . import mapping as mp
from . import sem as sm
from . import worlds
from .canonical import CanonicalDiagram
from .errors import SchemaError

FORMAT_VERSION = 1

_KINDS = {"world_table", "influence_diagram", "canonical", "sem", "functional"}


# ---------------------------------------------------------------------------
# helpers


def _dup_guard(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise SchemaError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _expect(obj, typ, path, what):
    if not isinstance(obj, typ) or (typ is int and isinstance(obj, bool)):
        raise SchemaError(f"{what} must be {typ.__name__}, got {type(obj).__name__}", path)
    return obj


def _field(obj: Mapping, key: str, typ, path: str, default=_expect):
    if key not in obj:
        if default is not _expect:
            return default
        raise SchemaError(f"missing field {key!r}", path)
    return _expect(obj[key], typ, f"{path}.{key}", f"field {key!r}")


def _only(obj: Mapping, allowed, path: str) -> None:
    for k in obj:
        if k not in allowed:
            raise SchemaError(f"unknown field {k!r}", path)


def _str_list(obj, path) -> tuple[str, ...]:
    _expect(obj, list, path, "field")
    out = []
    for i, v in enumerate(obj):
        out.append(_expect(v, str, f"{path}[{i}]", "entry"))
    return tuple(out)


def _prob(raw, path) -> float:
    s = _expect(raw, str, path, "probability")
    try:
        p = float(s)
    except ValueError:
        raise SchemaError(f"not a decimal string: {s!r}", path) from None
    if math.isnan(p) or math.isinf(p):
        raise SchemaError(f"not a finite probability: {s!r}", path)
    return p


def _fmt(p: float) -> str:
    return repr(float(p))


def _given(obj, parents, spaces, path) -> tuple:
    _expect(obj, dict, path, "row assignment")
    _only(obj, set(parents), path)
    key = []
    for p, space in zip(parents, spaces):
        if p not in obj:
            raise SchemaError(f"missing parent {p!r}", path)
        v = _expect(obj[p], str, f"{path}.{p}", "value")
        if v not in space:
            raise SchemaError(f"{v!r} is not an instance of {p!r}", path)
        key.append(v)
    return tuple(key)


def _row_sort_key(key: tuple, spaces) -> tuple:
    return tuple(space.index(v) for v, space in zip(key, spaces))


# ---------------------------------------------------------------------------
# world tables


def _serialize_variables(vars_: tuple) -> list:
    return [{"id": v.id, "instances": list(v.instances)} for v in vars_]


def _world_doc(t: worlds.WorldTable) -> dict:
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION, "model": "world_table"}
    if t.name is not None:
        doc["name"] = t.name
    doc["decisions"] = _serialize_variables(t.decisions)
    doc["chances"] = _serialize_variables(t.chances)
    states = []
    for st in t.states:
        row: dict[str, Any] = {"id": st.id}
        if st.label is not None:
            row["label"] = st.label
        if st.prior is not None:
            row["prior"] = _fmt(st.prior)
        else:
            row["possible"] = bool(st.possible)
        outs = []
        for act in t.act_tuples:
            outs.append(
                {
                    "act": dict(zip(t.decision_ids(), act)),
                    "chance": dict(zip(t.chance_ids(), st.outcomes[act])),
                }
            )
        row["outcomes"] = outs
        states.append(row)
    doc["states"] = states
    return doc


def _parse_variable_list(raw, path, kind) -> tuple[worlds.Variable, ...]:
    _expect(raw, list, path, "field")
    out = []
    for i, entry in enumerate(raw):
        p = f"{path}[{i}]"
        _expect(entry, dict, p, "variable")
        _only(entry, {"id", "instances"}, p)
        vid = _field(entry, "id", str, p)
        inst = _str_list(_field(entry, "instances", list, p), f"{p}.instances")
        out.append(worlds.Variable(vid, kind, inst))
    return tuple(out)


def _parse_world(doc: dict, path: str) -> worlds.WorldTable:
    _only(doc, {"format_version", "model", "name", "decisions", "chances", "states"}, path)
    name = _field(doc, "name", str, path, None)
    decisions = _parse_variable_list(_field(doc, "decisions", list, path), f"{path}.decisions", "decision")
    chances = _parse_variable_list(_field(doc, "chances", list, path), f"{path}.chances", "chance")
    dec_ids = [v.id for v in decisions]
    ch_ids = [v.id for v in chances]
    dec_spaces = [v.instances for v in decisions]
    ch_spaces = [v.instances for v in chances]

    raw_states = _field(doc, "states", list, path)
    states = []
    for i, entry in enumerate(raw_states):
        p = f"{path}.states[{i}]"
        _expect(entry, dict, p, "state")
        _only(entry, {"id", "label", "prior", "possible", "outcomes"}, p)
        if "id" not in entry:
            raise SchemaError("missing field 'id'", p)
        sid = entry["id"]
        if not isinstance(sid, (int, str)) or isinstance(sid, bool):
            raise SchemaError("state id must be an integer or string", f"{p}.id")
        label = _field(entry, "label", str, p, None)
        prior = None
        possible = True
        if "prior" in entry and "possible" in entry:
            raise SchemaError("state has both 'prior' and 'possible'", p)
        if "prior" in entry:
            prior = _prob(entry["prior"], f"{p}.prior")
        elif "possible" in entry:
            possible = _expect(entry["possible"], bool, f"{p}.possible", "flag")
        else:
            raise SchemaError("state needs 'prior' or 'possible'", p)
        raw_outs = _field(entry, "outcomes", list, p)
        outcomes = {}
        for j, out in enumerate(raw_outs):
            q = f"{p}.outcomes[{j}]"
            _expect(out, dict, q, "outcome")
            _only(out, {"act", "chance"}, q)
            act = _given(_field(out, "act", dict, q), dec_ids, dec_spaces, f"{q}.act")
            ch = _given(_field(out, "chance", dict, q), ch_ids, ch_spaces, f"{q}.chance")
            if act in outcomes:
                raise SchemaError(f"duplicate act {act!r}", q)
            outcomes[act] = ch
        states.append(worlds.WorldState(sid, outcomes, prior=prior, possible=possible, label=label))
    return worlds.WorldTable(decisions, chances, tuple(states), name=name)


# ---------------------------------------------------------------------------
# influence diagrams


def _diagram_doc(d: dg.InfluenceDiagram) -> dict:
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION, "model": "influence_diagram"}
    if d.name is not None:
        doc["name"] = d.name
    doc["nodes"] = _node_docs(d)
    if d.information_arcs:
        doc["information_arcs"] = [list(a) for a in d.information_arcs]
    return doc


def _node_docs(d: dg.InfluenceDiagram) -> list:
    out = []
    for n in d.nodes:
        entry: dict[str, Any] = {"id": n.id, "kind": n.kind}
        if n.kind != dg.UTILITY:
            entry["instances"] = list(n.instances)
        if n.kind != dg.DECISION:
            entry["parents"] = list(n.parents)
        spaces = [d.by_id[p].instances for p in n.parents]
        if n.kind == dg.CHANCE:
            rows = []
            for key in sorted(d.cpts.get(n.id, {}), key=lambda k: _row_sort_key(k, spaces)):
                dist = d.cpts[n.id][key]
                rows.append(
                    {
                        "given": dict(zip(n.parents, key)),
                        "p": {v: _fmt(p) for v, p in zip(n.instances, dist)},
                    }
                )
            entry["cpt"] = rows
        elif n.kind == dg.DETERMINISTIC:
            rows = []
            for key in sorted(d.tables.get(n.id, {}), key=lambda k: _row_sort_key(k, spaces)):
                rows.append({"given": dict(zip(n.parents, key)), "value": d.tables[n.id][key]})
            entry["table"] = rows
        elif n.kind == dg.UTILITY:
            rows = []
            for key in sorted(d.utilities, key=lambda k: _row_sort_key(k, spaces)):
                rows.append({"given": dict(zip(n.parents, key)), "value": _fmt(d.utilities[key])})
            entry["values"] = rows
        out.append(entry)
    return out


def _parse_nodes(raw, path):
    _expect(raw, list, path, "field")
    headers = []
    for i, entry in enumerate(raw):
        p = f"{path}[{i}]"
        _expect(entry, dict, p, "node")
        kind = _field(entry, "kind", str, p)
        if kind not in (dg.DECISION, dg.CHANCE, dg.DETERMINISTIC, dg.UTILITY):
            raise SchemaError(f"unknown node kind {kind!r}", f"{p}.kind")
        nid = _field(entry, "id", str, p)
        if kind == dg.UTILITY:
            _only(entry, {"id", "kind", "parents", "values"}, p)
            inst = ()
        else:
            inst = _str_list(_field(entry, "instances", list, p), f"{p}.instances")
        if kind == dg.DECISION:
            _only(entry, {"id", "kind", "instances"}, p)
            parents = ()
        else:
            parents = _str_list(_field(entry, "parents", list, p), f"{p}.parents")
        if kind == dg.CHANCE:
            _only(entry, {"id", "kind", "instances", "parents", "cpt"}, p)
        elif kind == dg.DETERMINISTIC:
            _only(entry, {"id", "kind", "instances", "parents", "table"}, p)
        headers.append((nid, kind, inst, parents, entry, p))
    ids = [h[0] for h in headers]
    if len(set(ids)) != len(ids):
        raise SchemaError("duplicate node ids", path)
    return headers


def _parse_diagram(doc: dict, path: str, extra_fields=frozenset()) -> dg.InfluenceDiagram:
    allowed = {"format_version", "model", "name", "nodes", "information_arcs"} | extra_fields
    _only(doc, allowed, path)
    name = _field(doc, "name", str, path, None)
    headers = _parse_nodes(_field(doc, "nodes", list, path), f"{path}.nodes")
    inst_of = {nid: inst for nid, _, inst, _, _, _ in headers}
    for nid, kind, inst, parents, entry, p in headers:
        for par in parents:
            if par not in inst_of:
                raise SchemaError(f"unknown parent {par!r}", f"{p}.parents")

    nodes, cpts, tables, utilities = [], {}, {}, {}
    for nid, kind, inst, parents, entry, p in headers:
        nodes.append(dg.Node(nid, kind, inst, parents))
        spaces = [inst_of[par] for par in parents]
        if kind == dg.CHANCE:
            rows = _field(entry, "cpt", list, p, [])
            cpt = {}
            for j, row in enumerate(rows):
                q = f"{p}.cpt[{j}]"
                _expect(row, dict, q, "row")
                _only(row, {"given", "p"}, q)
                key = _given(_field(row, "given", dict, q), parents, spaces, f"{q}.given")
                raw_p = _field(row, "p", dict, q)
                _only(raw_p, set(inst), f"{q}.p")
                dist = []
                for v in inst:
                    if v not in raw_p:
                        raise SchemaError(f"missing probability for {v!r}", f"{q}.p")
                    dist.append(_prob(raw_p[v], f"{q}.p.{v}"))
                if key in cpt:
                    raise SchemaError(f"duplicate row {key!r}", q)
                cpt[key] = tuple(dist)
            cpts[nid] = cpt
        elif kind == dg.DETERMINISTIC:
            rows = _field(entry, "table", list, p, [])
            table = {}
            for j, row in enumerate(rows):
                q = f"{p}.table[{j}]"
                _expect(row, dict, q, "row")
                _only(row, {"given", "value"}, q)
                key = _given(_field(row, "given", dict, q), parents, spaces, f"{q}.given")
                val = _field(row, "value", str, q)
                if val not in inst:
                    raise SchemaError(f"{val!r} is not an instance of {nid!r}", q)
                if key in table:
                    raise SchemaError(f"duplicate row {key!r}", q)
                table[key] = val
            tables[nid] = table
        elif kind == dg.UTILITY:
            rows = _field(entry, "values", list, p, [])
            for j, row in enumerate(rows):
                q = f"{p}.values[{j}]"
                _expect(row, dict, q, "row")
                _only(row, {"given", "value"}, q)
                key = _given(_field(row, "given", dict, q), parents, spaces, f"{q}.given")
                raw = _field(row, "value", str, q)
                try:
                    utilities[key] = float(raw)
                except ValueError:
                    raise SchemaError(f"bad utility {raw!r}", q) from None

    arcs = ()
    if "information_arcs" in doc:
        raw_arcs = _expect(doc["information_arcs"], list, f"{path}.information_arcs", "field")
        parsed = []
        for j, arc in enumerate(raw_arcs):
            q = f"{path}.information_arcs[{j}]"
            pair = _str_list(arc, q)
            if len(pair) != 2:
                raise SchemaError("arc must be a [from, to] pair", q)
            parsed.append(pair)
        arcs = tuple(parsed)

    return dg.InfluenceDiagram(
        nodes=tuple(nodes),
        cpts=cpts,
        tables=tables,
        utilities=utilities,
        information_arcs=arcs,
        name=name,
    )


# ---------------------------------------------------------------------------
# canonical diagrams


def _canonical_doc(cd: CanonicalDiagram) -> dict:
    doc = _diagram_doc(cd.diagram)
    doc["model"] = "canonical"
    arcs = doc.pop("information_arcs", None)
    doc["responsive"] = sorted(cd.responsive)
    maps = []
    for nid in cd.mapping_node_ids():
        mv = cd.mappings[nid]
        entry: dict[str, Any] = {
            "node": nid,
            "targets": list(mv.target_ids),
            "args": list(mv.arg_ids),
        }
        if mv.atomic_args:
            entry["atomic"] = {a: t for a, t in mv.atomic_args}
        maps.append(entry)
    doc["mappings"] = maps
    if arcs is not None:
        doc["information_arcs"] = arcs
    return doc


def _parse_canonical(doc: dict, path: str) -> CanonicalDiagram:
    d = _parse_diagram(doc, path, extra_fields={"responsive", "mappings"})
    responsive = _str_list(_field(doc, "responsive", list, path), f"{path}.responsive")
    for x in responsive:
        if x not in d.by_id:
            raise SchemaError(f"unknown responsive id {x!r}", f"{path}.responsive")
    mappings = {}
    raw_maps = _field(doc, "mappings", list, path, [])
    for i, entry in enumerate(raw_maps):
        p = f"{path}.mappings[{i}]"
        _expect(entry, dict, p, "mapping")
        _only(entry, {"node", "targets", "args", "atomic"}, p)
        nid = _field(entry, "node", str, p)
        targets = _str_list(_field(entry, "targets", list, p), f"{p}.targets")
        args = _str_list(_field(entry, "args", list, p), f"{p}.args")
        for x in (nid,) + targets + args:
            if x not in d.by_id:
                raise SchemaError(f"unknown id {x!r}", p)
        atomic = []
        if "atomic" in entry:
            raw_atomic = _expect(entry["atomic"], dict, f"{p}.atomic", "field")
            for a, t in raw_atomic.items():
                if a not in args or not isinstance(t, str) or t not in targets:
                    raise SchemaError(f"bad atomic pair {a!r}: {t!r}", f"{p}.atomic")
                atomic.append((a, t))
        if nid in mappings:
            raise SchemaError(f"duplicate mapping for {nid!r}", p)
        mappings[nid] = mp.MappingVariable(
            target_ids=targets,
            target_spaces=tuple(d.by_id[t].instances for t in targets),
            arg_ids=args,
            arg_spaces=tuple(d.by_id[a].instances for a in args),
            atomic_args=tuple(atomic),
        )
    return CanonicalDiagram(diagram=d, responsive=frozenset(responsive), mappings=mappings)


# ---------------------------------------------------------------------------
# structural models


def _sem_doc(m: sm.StructuralEquationModel) -> dict:
    doc: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "model": "functional" if m.blocks else "sem",
    }
    if m.name is not None:
        doc["name"] = m.name
    vars_ = []
    for v in m.variables:
        entry: dict[str, Any] = {
            "id": v.id,
            "instances": list(v.instances),
            "parents": list(v.parents),
            "intervention": v.intervention,
        }
        if v.idle_forbidden:
            entry["idle_forbidden"] = True
        if v.hidden:
            entry["hidden"] = True
        vars_.append(entry)
    doc["variables"] = vars_
    eps = []
    for e in m.disturbances:
        entry = {"id": e.id, "for": e.var, "instances": list(e.instances)}
        if e.prior is not None:
            entry["prior"] = {v: _fmt(p) for v, p in zip(e.instances, e.prior)}
        eps.append(entry)
    doc["disturbances"] = eps
    if m.blocks:
        eps_space = {e.id: e.instances for e in m.disturbances}
        blocks = []
        for b in m.blocks:
            spaces = [eps_space[x] for x in b.members]
            rows = []
            for key in sorted(b.joint, key=lambda k: _row_sort_key(k, spaces)):
                rows.append(
                    {"given": dict(zip(b.members, key)), "p": _fmt(b.joint[key])}
                )
            blocks.append({"members": list(b.members), "joint": rows})
        doc["blocks"] = blocks
    eqs = []
    eps_by_var = m.disturbance_by_var
    by_id = m.by_id
    for v in m.variables:
        spaces = [by_id[p].instances for p in v.parents]
        spaces.append(v.hat_instances())
        e = eps_by_var.get(v.id)
        if e is not None:
            spaces.append(e.instances)
        rows = []
        table = m.equations[v.id]
        for key in sorted(table, key=lambda k: _row_sort_key(k, spaces)):
            row: dict[str, Any] = {"given": dict(zip(v.parents, key))}
            row["intervention"] = key[len(v.parents)]
            if e is not None:
                row["disturbance"] = key[len(v.parents) + 1]
            row["value"] = table[key]
            rows.append(row)
        eqs.append({"var": v.id, "rows": rows})
    doc["equations"] = eqs
    return doc


def _parse_sem(doc: dict, path: str, kind: str) -> sm.StructuralEquationModel:
    _only(
        doc,
        {"format_version", "model", "name", "variables", "disturbances", "blocks", "equations"},
        path,
    )
    name = _field(doc, "name", str, path, None)
    raw_vars = _field(doc, "variables", list, path)
    variables = []
    for i, entry in enumerate(raw_vars):
        p = f"{path}.variables[{i}]"
        _expect(entry, dict, p, "variable")
        _only(entry, {"id", "instances", "parents", "intervention", "idle_forbidden", "hidden"}, p)
        variables.append(
            sm.SemVariable(
                id=_field(entry, "id", str, p),
                instances=_str_list(_field(entry, "instances", list, p), f"{p}.instances"),
                parents=_str_list(_field(entry, "parents", list, p, []), f"{p}.parents"),
                intervention=_field(entry, "intervention", str, p),
                idle_forbidden=_field(entry, "idle_forbidden", bool, p, False),
                hidden=_field(entry, "hidden", bool, p, False),
            )
        )
    by_id = {v.id: v for v in variables}

    raw_eps = _field(doc, "disturbances", list, path, [])
    disturbances = []
    for i, entry in enumerate(raw_eps):
        p = f"{path}.disturbances[{i}]"
        _expect(entry, dict, p, "disturbance")
        _only(entry, {"id", "for", "instances", "prior"}, p)
        inst = _str_list(_field(entry, "instances", list, p), f"{p}.instances")
        prior = None
        if "prior" in entry:
            raw_prior = _expect(entry["prior"], dict, f"{p}.prior", "field")
            _only(raw_prior, set(inst), f"{p}.prior")
            prior = []
            for v in inst:
                if v not in raw_prior:
                    raise SchemaError(f"missing probability for {v!r}", f"{p}.prior")
                prior.append(_prob(raw_prior[v], f"{p}.prior.{v}"))
            prior = tuple(prior)
        disturbances.append(
            sm.Disturbance(
                id=_field(entry, "id", str, p),
                var=_field(entry, "for", str, p),
                instances=inst,
                prior=prior,
            )
        )
    eps_space = {e.id: e.instances for e in disturbances}

    blocks = []
    raw_blocks = _field(doc, "blocks", list, path, [])
    if kind == "sem" and raw_blocks:
        raise SchemaError("model 'sem' must not contain blocks", f"{path}.blocks")
    if kind == "functional" and not raw_blocks:
        raise SchemaError("model 'functional' needs at least one block", path)
    for i, entry in enumerate(raw_blocks):
        p = f"{path}.blocks[{i}]"
        _expect(entry, dict, p, "block")
        _only(entry, {"members", "joint"}, p)
        members = _str_list(_field(entry, "members", list, p), f"{p}.members")
        for x in members:
            if x not in eps_space:
                raise SchemaError(f"unknown disturbance {x!r}", f"{p}.members")
        spaces = [eps_space[x] for x in members]
        joint = {}
        for j, row in enumerate(_field(entry, "joint", list, p)):
            q = f"{p}.joint[{j}]"
            _expect(row, dict, q, "row")
            _only(row, {"given", "p"}, q)
            key = _given(_field(row, "given", dict, q), members, spaces, f"{q}.given")
            if key in joint:
                raise SchemaError(f"duplicate joint cell {key!r}", q)
            joint[key] = _prob(_field(row, "p", str, q), f"{q}.p")
        blocks.append(sm.DependencyBlock(members=members, joint=joint))

    eps_by_var = {e.var: e for e in disturbances}
    equations = {}
    for i, entry in enumerate(_field(doc, "equations", list, path)):
        p = f"{path}.equations[{i}]"
        _expect(entry, dict, p, "equation")
        _only(entry, {"var", "rows"}, p)
        vid = _field(entry, "var", str, p)
        if vid not in by_id:
            raise SchemaError(f"unknown variable {vid!r}", p)
        if vid in equations:
            raise SchemaError(f"duplicate equation for {vid!r}", p)
        v = by_id[vid]
        parent_spaces = []
        for par in v.parents:
            if par not in by_id:
                raise SchemaError(f"unknown parent {par!r}", p)
            parent_spaces.append(by_id[par].instances)
        e = eps_by_var.get(vid)
        rows = {}
        for j, row in enumerate(_field(entry, "rows", list, p)):
            q = f"{p}.rows[{j}]"
            _expect(row, dict, q, "row")
            allowed = {"given", "intervention", "value"}
            if e is not None:
                allowed.add("disturbance")
            _only(row, allowed, q)
            key = list(_given(_field(row, "given", dict, q), v.parents, parent_spaces, f"{q}.given"))
            hat = _field(row, "intervention", str, q)
            if hat not in v.hat_instances():
                raise SchemaError(f"{hat!r} is not an intervention instance", q)
            key.append(hat)
            if e is not None:
                ev = _field(row, "disturbance", str, q)
                if ev not in e.instances:
                    raise SchemaError(f"{ev!r} is not an instance of {e.id!r}", q)
                key.append(ev)
            val = _field(row, "value", str, q)
            if val not in v.instances:
                raise SchemaError(f"{val!r} is not an instance of {vid!r}", q)
            if tuple(key) in rows:
                raise SchemaError(f"duplicate row {tuple(key)!r}", q)
            rows[tuple(key)] = val
        equations[vid] = rows

    return sm.StructuralEquationModel(
        variables=tuple(variables),
        disturbances=tuple(disturbances),
        equations=equations,
        blocks=tuple(blocks),
        name=name,
    )


# ---------------------------------------------------------------------------
# entry points


def model_kind(obj) -> str:
    if isinstance(obj, worlds.WorldTable):
        return "world_table"
    if isinstance(obj, CanonicalDiagram):
        return "canonical"
    if isinstance(obj, dg.InfluenceDiagram):
        return "influence_diagram"
    if isinstance(obj, sm.StructuralEquationModel):
        return "functional" if obj.blocks else "sem"
    raise SchemaError(f"not a serializable model: {type(obj).__name__}")


def dumps(obj) -> str:
    kind = model_kind(obj)
    if kind == "world_table":
        doc = _world_doc(obj)
    elif kind == "canonical":
        doc = _canonical_doc(obj)
    elif kind == "influence_diagram":
        doc = _diagram_doc(obj)
    else:
        doc = _sem_doc(obj)
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text, object_pairs_hook=_dup_guard)
    except json.JSONDecodeError as err:
        raise SchemaError(f"not valid JSON: {err}") from None
    _expect(doc, dict, "$", "document")
    version = _field(doc, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version {version!r}", "$.format_version")
    kind = _field(doc, "model", str, "$")
    if kind not in _KINDS:
        raise SchemaError(f"unknown model kind {kind!r}", "$.model")
    if kind == "world_table":
        return _parse_world(doc, "$")
    if kind == "canonical":
        return _parse_canonical(doc, "$")
    if kind == "influence_diagram":
        return _parse_diagram(doc, "$")
    return _parse_sem(doc, "$", kind)


def dump(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())

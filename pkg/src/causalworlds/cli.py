"""Command-line front end.

Exit codes: 0 means the command succeeded (and any predicate it names is
true), 1 means a clean negative finding (predicate false, undefined mapping,
impossible evidence, ill-posed observation), 2 means the input was bad.
"""

from __future__ import annotations

import argparse
import itertools
import sys

from . import canonical as cn
from . import counterfactual as cf
from . import decide
from . import diagram as dg
from . import mapping as mp
from . import modelfile
from . import sem as sm
from . import worlds
from .errors import (
    CausalWorldsError,
    DefinednessError,
    ImpossibleEvidenceError,
    InputError,
    ResponsivenessError,
    SchemaError,
)

NEGATIVE = (DefinednessError, ImpossibleEvidenceError, ResponsivenessError)


def _fmt(p: float) -> str:
    return f"{p:.9f}"


def _fmt_set(ids) -> str:
    return "{" + ", ".join(sorted(ids)) + "}"


def _split(raw: str) -> list[str]:
    return [s.strip() for s in raw.split(",") if s.strip()]


def _assign(raw: str) -> dict[str, str]:
    out = {}
    for part in _split(raw):
        if "=" not in part:
            raise InputError(f"expected key=value, got {part!r}")
        k, _, v = part.partition("=")
        out[k.strip()] = v.strip()
    return out


def _load(path, *kinds):
    obj = modelfile.load(path)
    kind = modelfile.model_kind(obj)
    if kinds and kind not in kinds:
        raise InputError(f"{path}: expected {' or '.join(kinds)} model, got {kind}")
    return obj


def _print_factor(f: dg.Factor, d: dg.InfluenceDiagram) -> None:
    spaces = [d.by_id[v].instances for v in f.vars]
    for cfg in itertools.product(*spaces):
        if cfg in f.table:
            pairs = " ".join(f"{v}={x}" for v, x in zip(f.vars, cfg))
            print(f"{pairs} {_fmt(f.table[cfg])}")


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    obj = _load(args.file)
    kind = modelfile.model_kind(obj)
    if isinstance(obj, worlds.WorldTable):
        violations = []  # construction already vetted totality and priors
    elif isinstance(obj, cn.CanonicalDiagram):
        violations = dg.validate(obj.diagram) + cn.verify_canonical(
            obj.diagram, obj.responsive
        )
    elif isinstance(obj, dg.InfluenceDiagram):
        violations = dg.validate(obj)
    else:
        violations = sm.validate(obj)
    if violations:
        for v in violations:
            print(f"{v.code} {v.node}: {v.message}")
        return 1
    print(f"ok: {kind}")
    return 0


def cmd_outcome(args) -> int:
    t = _load(args.file, "world_table")
    act = _assign(args.act)
    xs = _split(args.vars) if args.vars else list(t.chance_ids())
    known = {s.id for s in t.states}
    sid: int | str = args.state
    if sid not in known and sid.isdigit() and int(sid) in known:
        sid = int(sid)
    out = worlds.outcome(t, sid, act, xs)
    print(" ".join(f"{x}={out[x]}" for x in xs))
    return 0


def cmd_responsive(args) -> int:
    t = _load(args.file, "world_table")
    xs = _split(args.vars)
    limit = _split(args.limit) if args.limit else ()
    if args.decisions is not None:
        sub = _split(args.decisions)
        unresp = worlds.is_unresponsive_to_subset(t, xs, sub, limit)
        what = f"to {_fmt_set(sub)}"
    else:
        unresp = worlds.is_unresponsive_limited(t, xs, limit)
        what = "to the decisions"
    tail = f" limited by {_fmt_set(limit)}" if limit else ""
    if unresp:
        print(f"{_fmt_set(xs)} is unresponsive {what}{tail}")
        return 1
    print(f"{_fmt_set(xs)} is responsive {what}{tail}")
    return 0


def cmd_causes(args) -> int:
    t = _load(args.file, "world_table")
    if args.instances:
        for cset, configs in worlds.find_instance_causes(t, args.var):
            shown = sorted(
                "{" + ",".join(f"{k}={v}" for k, v in cfg) + "}" for cfg in configs
            )
            print(f"{_fmt_set(cset)} | {' '.join(shown)}")
        return 0
    for cset in worlds.find_causes(t, args.var):
        print(_fmt_set(cset))
    return 0


def cmd_intervene(args) -> int:
    t = _load(args.file, "world_table")
    decs = _split(args.decisions)
    targets = _split(args.on)
    if args.atomic:
        if len(decs) != 1 or len(targets) != 1:
            raise InputError("--atomic takes exactly one decision and one target")
        if worlds.is_atomic_intervention(t, decs[0], targets[0]):
            print(f"{decs[0]} is an atomic intervention on {targets[0]}")
            return 0
        print(f"{decs[0]} is not an atomic intervention on {targets[0]}")
        return 1
    if worlds.is_direct_intervention(t, decs, targets):
        print(f"{_fmt_set(decs)} is a direct intervention on {_fmt_set(targets)}")
        return 0
    print(f"{_fmt_set(decs)} is not a direct intervention on {_fmt_set(targets)}")
    return 1


def cmd_mapping(args) -> int:
    t = _load(args.file, "world_table")
    targets = _split(args.targets)
    arg_ids = _split(args.args)
    if args.states:
        mv, by_state = mp.mapping_from_world(t, targets, arg_ids)
    else:
        mv = mp.enumerate_mapping(t, targets, arg_ids)
        by_state = None
    labels = mv.labels
    print(f"{mv.id}: {mv.count} instances")
    for i in range(mv.count):
        line = f"{i} {mv.symbols[i]}"
        if i in labels:
            line += f" {labels[i]}"
        print(line)
    if by_state is not None:
        for st in t.possible_states():
            sym = mv.symbols[by_state[st.id]]
            tag = labels.get(by_state[st.id])
            print(f"state {st.id}: {sym}" + (f" {tag}" if tag else ""))
    return 0


def cmd_canonicalize(args) -> int:
    t = _load(args.file, "world_table")
    order = _split(args.order) if args.order else None
    cd = cn.to_canonical(t, order=order)
    text = modelfile.dumps(cd)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote canonical model to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_sem_convert(args) -> int:
    obj = _load(args.file, "canonical", "sem", "functional")
    if isinstance(obj, cn.CanonicalDiagram):
        out_obj = sm.from_canonical(obj)
    else:
        out_obj = sm.to_canonical_from_sem(obj)
    text = modelfile.dumps(out_obj)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {modelfile.model_kind(out_obj)} model to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_count_params(args) -> int:
    obj = _load(args.file, "influence_diagram", "canonical", "sem", "functional")
    pc = sm.parameter_count(obj)
    for name, count in pc.entries:
        print(f"{name} {count}")
    print(f"total {pc.total}")
    return 0


def cmd_infer(args) -> int:
    obj = _load(args.file, "influence_diagram", "canonical")
    d = obj.diagram if isinstance(obj, cn.CanonicalDiagram) else obj
    act = _assign(args.act)
    evidence = _assign(args.evidence) if args.evidence else {}
    query = _split(args.query)
    order = _split(args.order) if args.order else None
    f = dg.infer(d, act, evidence, query, order=order)
    _print_factor(f.reorder(tuple(query)), d)
    return 0


def cmd_cf(args) -> int:
    cd = _load(args.file, "canonical")
    d = cd.diagram
    decisions = {n.id for n in d.decision_nodes()}

    fact_act: dict[str, str] = {}
    fact_evidence: dict[str, str] = {}
    for k, v in _assign(args.factual).items():
        stem, _ = cf_strip(k)
        if stem not in d.by_id:
            raise InputError(f"--factual names unknown node {k!r}")
        (fact_act if stem in decisions else fact_evidence)[k] = v

    cf_act = dict(fact_act)
    for k, v in _assign(args.cf).items():
        if k not in decisions:
            raise InputError(f"--cf names non-decision {k!r}")
        cf_act[k] = v

    # plain query ids name the hypothetical outcome; explicit primes pass
    # through, so c and c' both denote the changed world
    raw_query = _split(args.query)
    query = [q if q.endswith(cf.PRIME) else q + cf.PRIME for q in raw_query]

    f = cf.evaluate(
        cd,
        factual_act=fact_act,
        factual_evidence=fact_evidence,
        counterfactual_act=cf_act,
        query=query,
        counterfactual_evidence=_assign(args.cf_evidence) if args.cf_evidence else None,
    )
    # evaluate may hand a shared (unprimed) node back for an unresponsive query
    resolved = [q if q in f.vars else cf_strip(q)[0] for q in query]
    f = f.reorder(tuple(dict.fromkeys(resolved)))
    labels = dict(zip(resolved, raw_query))
    spaces = [d.by_id[cf_strip(v)[0]].instances for v in f.vars]
    for cfg in itertools.product(*spaces):
        if cfg in f.table:
            pairs = " ".join(f"{labels.get(v, v)}={x}" for v, x in zip(f.vars, cfg))
            print(f"{pairs} {_fmt(f.table[cfg])}")
    return 0


def cf_strip(v: str) -> tuple[str, int]:
    k = 0
    while v.endswith(cf.PRIME):
        v = v[: -len(cf.PRIME)]
        k += 1
    return v, k


def cmd_voi(args) -> int:
    obj = _load(args.file, "influence_diagram", "canonical")
    if isinstance(obj, cn.CanonicalDiagram):
        d = obj.diagram
        responsive = obj.responsive
    else:
        d = obj
        desc = d.descendants([n.id for n in d.decision_nodes()])
        responsive = {n.id for n in d.value_nodes() if n.id in desc}
    gain = decide.value_of_information(d, args.observe, responsive)
    print(f"value of observing {args.observe}: {_fmt(gain)}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="causalworlds",
        description="Decision-based causal models: world tables, canonical "
        "influence diagrams, structural equations, counterfactuals.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", help="check a model file, report violations")
    q.add_argument("file")
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("outcome", help="chance outcomes of a state under an act")
    q.add_argument("file")
    q.add_argument("--state", required=True, help="state id")
    q.add_argument("--act", required=True, help="d=v,...")
    q.add_argument("--vars", help="chance variables to show (default: all)")
    q.set_defaults(func=cmd_outcome)

    q = sub.add_parser(
        "responsive",
        help="do these variables respond to the decisions? exit 1 if unresponsive",
    )
    q.add_argument("file")
    q.add_argument("--vars", required=True, help="x,...")
    q.add_argument("--limit", help="hold these variables fixed (limited unresponsiveness)")
    q.add_argument("--decisions", help="restrict to this decision subset")
    q.set_defaults(func=cmd_responsive)

    q = sub.add_parser("causes", help="minimal cause sets of a variable")
    q.add_argument("file")
    q.add_argument("--var", required=True)
    q.add_argument(
        "--instances",
        action="store_true",
        help="instance-level: print each cause set with its good configurations",
    )
    q.set_defaults(func=cmd_causes)

    q = sub.add_parser(
        "intervene",
        help="are these decisions a direct (or atomic) intervention on the targets?",
    )
    q.add_argument("file")
    q.add_argument("--decisions", required=True, help="d,...")
    q.add_argument("--on", required=True, help="x,...")
    q.add_argument("--atomic", action="store_true")
    q.set_defaults(func=cmd_intervene)

    q = sub.add_parser("mapping", help="enumerate a mapping variable")
    q.add_argument("file")
    q.add_argument("--targets", required=True, help="x,...")
    q.add_argument("--args", required=True, help="y,...")
    q.add_argument(
        "--states",
        action="store_true",
        help="also read the instance off each possible state (exit 1 if undefined)",
    )
    q.set_defaults(func=cmd_mapping)

    q = sub.add_parser("canonicalize", help="compile a world table to canonical form")
    q.add_argument("file")
    q.add_argument("-o", "--out")
    q.add_argument("--order", help="variable ordering, unresponsive first")
    q.set_defaults(func=cmd_canonicalize)

    q = sub.add_parser(
        "sem-convert",
        help="canonical -> structural model, or structural model -> canonical",
    )
    q.add_argument("file")
    q.add_argument("-o", "--out")
    q.set_defaults(func=cmd_sem_convert)

    q = sub.add_parser("count-params", help="free probabilities per component")
    q.add_argument("file")
    q.set_defaults(func=cmd_count_params)

    q = sub.add_parser("infer", help="posterior marginal in a diagram")
    q.add_argument("file")
    q.add_argument("--act", required=True, help="d=v,...")
    q.add_argument("--evidence", help="x=v,...")
    q.add_argument("--query", required=True, help="x,...")
    q.add_argument("--order", help="elimination order for the hidden variables")
    q.set_defaults(func=cmd_infer)

    q = sub.add_parser("cf", help="counterfactual query on a canonical model")
    q.add_argument("file")
    q.add_argument(
        "--factual",
        required=True,
        help="observed record, mixing act and evidence: d=v,x=v,...",
    )
    q.add_argument(
        "--cf",
        required=True,
        help="hypothetical act changes, d=v,... (unlisted decisions keep "
        "their factual choice)",
    )
    q.add_argument("--cf-evidence", dest="cf_evidence", help="hypothetical evidence")
    q.add_argument(
        "--query",
        required=True,
        help="variables whose hypothetical-world posterior to print",
    )
    q.set_defaults(func=cmd_cf)

    q = sub.add_parser("voi", help="expected value of observing a variable first")
    q.add_argument("file")
    q.add_argument("--observe", required=True)
    q.set_defaults(func=cmd_voi)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NEGATIVE as err:
        print(err)
        return 1
    except SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return 2
    except CausalWorldsError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

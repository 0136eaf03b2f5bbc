"""Regenerate the bundled model files under fixtures/.

Every artifact is written through the package serializer, so the files
stay byte-identical under a load/dump round trip. Derived models (the
canonical diagrams and the structural model) are produced by the library
itself; only the world tables, the functional model, and the betting
diagram are authored here.

Usage: python scripts/make_fixtures.py [outdir]
"""

from __future__ import annotations

import sys
from pathlib import Path

from causalworlds import canonical, diagram as dg, modelfile, sem, worlds

TAKE, DONT = "take", "dont_take"

# response of t to r: label -> (t when take, t when dont_take)
T_TYPES = {
    "complier": {TAKE: "yes", DONT: "no"},
    "defier": {TAKE: "no", DONT: "yes"},
    "always taker": {TAKE: "yes", DONT: "yes"},
    "never taker": {TAKE: "no", DONT: "no"},
}

# response of c to t: label -> (c when t=yes, c when t=no)
C_TYPES = {
    "helped": {"yes": "yes", "no": "no"},
    "hurt": {"yes": "no", "no": "yes"},
    "always cured": {"yes": "yes", "no": "yes"},
    "never cured": {"yes": "no", "no": "no"},
}


def medical_table() -> worlds.WorldTable:
    """Recommend-a-treatment problem: 12 possible states, 4 impossible."""
    rows = [
        ("complier, helped", "yes", "yes", "no", "no"),
        ("complier, hurt", "yes", "no", "no", "yes"),
        ("complier, always cured", "yes", "yes", "no", "yes"),
        ("complier, never cured", "yes", "no", "no", "no"),
        ("defier, helped", "no", "no", "yes", "yes"),
        ("defier, hurt", "no", "yes", "yes", "no"),
        ("defier, always cured", "no", "yes", "yes", "yes"),
        ("defier, never cured", "no", "no", "yes", "no"),
        ("always taker, cured", "yes", "yes", "yes", "yes"),
        ("always taker, not cured", "yes", "no", "yes", "no"),
        ("never taker, not cured", "no", "no", "no", "no"),
        ("never taker, cured", "no", "yes", "no", "yes"),
        ("(impossible)", "yes", "yes", "yes", "no"),
        ("(impossible)", "yes", "no", "yes", "yes"),
        ("(impossible)", "no", "no", "no", "yes"),
        ("(impossible)", "no", "yes", "no", "no"),
    ]
    states = []
    for i, (label, t1, c1, t2, c2) in enumerate(rows, start=1):
        prior = 1.0 / 12.0 if i <= 12 else 0.0
        states.append(
            (i, prior, {(TAKE,): (t1, c1), (DONT,): (t2, c2)}, label)
        )
    return worlds.build_table(
        decisions=[("r", (TAKE, DONT))],
        chances=[("t", ("yes", "no")), ("c", ("yes", "no"))],
        states=states,
        name="medical",
    )


def _forced_or(t_hat: str, fallback: str) -> str:
    if t_hat.startswith(worlds.SET_PREFIX):
        return t_hat[len(worlds.SET_PREFIX):]
    return fallback


def medical_that_table() -> worlds.WorldTable:
    """Medical story extended with an atomic intervention on t.

    The forcing decision reveals c at both values of t in every state, so
    the response of c to t is pinned down everywhere; 16 equally likely
    states, one per (t response, c response) pair.
    """
    t_hat = ("idle", worlds.set_instance("yes"), worlds.set_instance("no"))
    states = []
    sid = 0
    for t_name, t_map in T_TYPES.items():
        for c_name, c_map in C_TYPES.items():
            sid += 1
            outcomes = {}
            for rv in (TAKE, DONT):
                for hv in t_hat:
                    tv = _forced_or(hv, t_map[rv])
                    outcomes[(rv, hv)] = (tv, c_map[tv])
            states.append((sid, 1.0 / 16.0, outcomes, f"{t_name}, {c_name}"))
    return worlds.build_table(
        decisions=[("r", (TAKE, DONT)), ("t_hat", t_hat)],
        chances=[("t", ("yes", "no")), ("c", ("yes", "no"))],
        states=states,
        name="medical_that",
    )


# quantification for the genotype variant: responses are independent
# given g, and g shifts both
P_G = {"present": 0.25, "absent": 0.75}
P_T_GIVEN_G = {
    "present": {"complier": 0.5, "defier": 0.1, "always taker": 0.2, "never taker": 0.2},
    "absent": {"complier": 0.3, "defier": 0.2, "always taker": 0.3, "never taker": 0.2},
}
P_C_GIVEN_G = {
    "present": {"helped": 0.4, "hurt": 0.1, "always cured": 0.3, "never cured": 0.2},
    "absent": {"helped": 0.25, "hurt": 0.25, "always cured": 0.25, "never cured": 0.25},
}


def medical_g_table() -> worlds.WorldTable:
    """Genotype variant: g is unresponsive and correlates the two responses."""
    t_hat = ("idle", worlds.set_instance("yes"), worlds.set_instance("no"))
    states = []
    sid = 0
    for gv in ("present", "absent"):
        for t_name, t_map in T_TYPES.items():
            for c_name, c_map in C_TYPES.items():
                sid += 1
                prior = P_G[gv] * P_T_GIVEN_G[gv][t_name] * P_C_GIVEN_G[gv][c_name]
                outcomes = {}
                for rv in (TAKE, DONT):
                    for hv in t_hat:
                        tv = _forced_or(hv, t_map[rv])
                        outcomes[(rv, hv)] = (gv, tv, c_map[tv])
                states.append((sid, prior, outcomes, f"{gv}, {t_name}, {c_name}"))
    return worlds.build_table(
        decisions=[("r", (TAKE, DONT)), ("t_hat", t_hat)],
        chances=[
            ("g", ("present", "absent")),
            ("t", ("yes", "no")),
            ("c", ("yes", "no")),
        ],
        states=states,
        name="medical_g",
    )


def omelet_table() -> worlds.WorldTable:
    """Savage's sixth egg: two states with possibility flags, no priors."""
    acts = ("break_into_bowl", "break_into_saucer", "throw_away")
    good = {
        ("break_into_bowl",): ("six", "zero", "no"),
        ("break_into_saucer",): ("six", "zero", "yes"),
        ("throw_away",): ("five", "one", "no"),
    }
    bad = {
        ("break_into_bowl",): ("zero", "five", "no"),
        ("break_into_saucer",): ("five", "zero", "yes"),
        ("throw_away",): ("five", "zero", "no"),
    }
    return worlds.build_table(
        decisions=[("d", acts)],
        chances=[
            ("o", ("zero", "five", "six")),
            ("g", ("zero", "one", "five")),
            ("s", ("no", "yes")),
        ],
        states=[
            (1, True, good, "good egg"),
            (2, True, bad, "bad egg"),
        ],
        name="omelet",
    )


def smoking_table() -> worlds.WorldTable:
    """Continue or quit smoking; the four response states, equally likely."""
    rows = [
        ("cancer", "no_cancer"),
        ("no_cancer", "no_cancer"),
        ("cancer", "cancer"),
        ("no_cancer", "cancer"),
    ]
    states = [
        (i, 0.25, {("continue",): (a,), ("quit",): (b,)})
        for i, (a, b) in enumerate(rows, start=1)
    ]
    return worlds.build_table(
        decisions=[("s", ("continue", "quit"))],
        chances=[("l", ("cancer", "no_cancer"))],
        states=states,
        name="smoking",
    )


def coin_table() -> worlds.WorldTable:
    """Bet on a fair coin. w is responsive yet independent of the bet;
    w and m determine each other, so each is a cause of the other."""
    heads = {("heads",): ("win", "match"), ("tails",): ("lose", "no_match")}
    tails = {("heads",): ("lose", "no_match"), ("tails",): ("win", "match")}
    return worlds.build_table(
        decisions=[("b", ("heads", "tails"))],
        chances=[("w", ("win", "lose")), ("m", ("match", "no_match"))],
        states=[
            (1, 0.5, heads, "coin lands heads"),
            (2, 0.5, tails, "coin lands tails"),
        ],
        name="coin",
    )


def functional_model() -> sem.StructuralEquationModel:
    """The genotype story with g marginalized out.

    With g gone the two response disturbances are no longer independent,
    so they share a dependency block whose joint is the g-mixture of the
    conditional products: 16 cells, 15 free probabilities (the split
    representation keeps 13).
    """
    # disturbance symbols follow the response order above: value at the
    # first idle column | value at the second
    t_sym = {
        "complier": "yes|no",
        "defier": "no|yes",
        "always taker": "yes|yes",
        "never taker": "no|no",
    }
    c_sym = {
        "helped": "yes|no",
        "hurt": "no|yes",
        "always cured": "yes|yes",
        "never cured": "no|no",
    }
    joint = {}
    for t_name, ts in t_sym.items():
        for c_name, cs in c_sym.items():
            joint[(ts, cs)] = sum(
                P_G[gv] * P_T_GIVEN_G[gv][t_name] * P_C_GIVEN_G[gv][c_name]
                for gv in P_G
            )

    order = ("yes|yes", "yes|no", "no|yes", "no|no")
    binary = ("yes", "no")

    def response_rows(arg_space, eps_order):
        """Equation rows keyed (parent, hat, eps); set: overrides win."""
        rows = {}
        for pv in arg_space:
            for eps_val in eps_order:
                left, right = eps_val.split("|")
                picked = left if pv == arg_space[0] else right
                rows[(pv, "idle", eps_val)] = picked
                for forced in binary:
                    rows[(pv, worlds.set_instance(forced), eps_val)] = forced
        return rows

    variables = (
        sem.SemVariable("r", (TAKE, DONT), (), "r_hat", idle_forbidden=True),
        sem.SemVariable("t", binary, ("r",), "t_hat"),
        sem.SemVariable("c", binary, ("t",), "c_hat"),
    )
    disturbances = (
        sem.Disturbance("t(r,t_hat)", "t", order),
        sem.Disturbance("c(t,c_hat)", "c", order),
    )
    equations = {
        "r": {(worlds.set_instance(v),): v for v in (TAKE, DONT)},
        "t": response_rows((TAKE, DONT), order),
        "c": response_rows(binary, order),
    }
    blocks = (sem.DependencyBlock(("t(r,t_hat)", "c(t,c_hat)"), joint),)
    model = sem.StructuralEquationModel(
        variables=variables,
        disturbances=disturbances,
        equations=equations,
        blocks=blocks,
        name="medical_functional",
    )
    bad = sem.validate(model)
    assert not bad, bad
    return model


def coin_diagram() -> dg.InfluenceDiagram:
    """Betting diagram with a payoff, for value-of-information demos.

    Observing the coin before betting is worth 0.5: the informed bettor
    always wins, the uninformed one wins half the time.
    """
    nodes = (
        dg.Node("b", dg.DECISION, ("heads", "tails")),
        dg.Node("coin", dg.CHANCE, ("heads", "tails")),
        dg.Node("win", dg.DETERMINISTIC, ("win", "lose"), ("b", "coin")),
        dg.Node("u", dg.UTILITY, (), ("win",)),
    )
    table = {
        (bv, cv): "win" if bv == cv else "lose"
        for bv in ("heads", "tails")
        for cv in ("heads", "tails")
    }
    d = dg.InfluenceDiagram(
        nodes=nodes,
        cpts={"coin": {(): (0.5, 0.5)}},
        tables={"win": table},
        utilities={("win",): 1.0, ("lose",): 0.0},
        name="coin_bet",
    )
    bad = dg.validate(d)
    assert not bad, bad
    return d


def main(argv: list[str]) -> int:
    outdir = Path(argv[1]) if len(argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures"
    outdir.mkdir(parents=True, exist_ok=True)

    tables = {
        "medical": medical_table(),
        "medical_that": medical_that_table(),
        "medical_g": medical_g_table(),
        "omelet": omelet_table(),
        "smoking": smoking_table(),
        "coin": coin_table(),
    }
    written = []
    for name, table in tables.items():
        path = outdir / f"{name}.world.json"
        modelfile.dump(table, path)
        written.append(path)

    medical_cd = canonical.to_canonical(tables["medical"])
    medical_g_cd = canonical.to_canonical(tables["medical_g"])
    for name, cd in (("medical", medical_cd), ("medical_g", medical_g_cd)):
        assert not canonical.verify_canonical(cd.diagram, cd.responsive)
        path = outdir / f"{name}.canonical.json"
        modelfile.dump(cd, path)
        written.append(path)

    split = sem.from_canonical(medical_g_cd)
    assert not sem.validate(split)
    path = outdir / "medical_g.sem.json"
    modelfile.dump(split, path)
    written.append(path)

    path = outdir / "medical_g.functional.json"
    modelfile.dump(functional_model(), path)
    written.append(path)

    path = outdir / "coin.diagram.json"
    modelfile.dump(coin_diagram(), path)
    written.append(path)

    for p in written:
        again = modelfile.dumps(modelfile.load(p))
        assert again == p.read_text(encoding="utf-8"), f"round trip drift: {p}"
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

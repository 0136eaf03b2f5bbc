"""Twin-world construction and counterfactual queries."""

import pytest

import oracles
from causalworlds import (
    FormError,
    ImpossibleEvidenceError,
    InputError,
    canonical as cn,
    counterfactual as cf,
    diagram as dg,
)

RECORD = {"t": "yes", "c": "yes"}


# -- twin construction -----------------------------------------------------


def test_build_twin_duplicates_responsive_world(medical_canonical):
    tw = cf.build_twin(medical_canonical)
    assert tw.duplicated == {"r", "t", "c"}
    assert tw.primed == {"r": "r'", "t": "t'", "c": "c'"}
    assert set(tw.shared) == {"t(r)", "c(r)"}
    assert dg.validate(tw.diagram) == []
    # clones read the shared mapping nodes
    assert set(tw.diagram.node("t'").parents) == {"r'", "t(r)"}


def test_build_twin_changed_nothing(medical_canonical):
    tw = cf.build_twin(medical_canonical, changed=[])
    assert tw.duplicated == frozenset()
    assert set(tw.shared) == {n.id for n in medical_canonical.diagram.nodes}


def test_build_twin_include_pulls_decision_parents(medical_canonical):
    tw = cf.build_twin(medical_canonical, changed=[], include=["t"])
    assert tw.duplicated == {"t", "r"}
    # unresponsive ids are shared, never cloned
    tw2 = cf.build_twin(medical_canonical, changed=[], include=["t(r)"])
    assert tw2.duplicated == frozenset()


def test_build_twin_rejects_non_decision_changes(medical_canonical):
    with pytest.raises(InputError, match="must be decisions"):
        cf.build_twin(medical_canonical, changed=["t"])


def test_build_twin_requires_canonical_form():
    d = dg.InfluenceDiagram(
        nodes=(
            dg.Node("d", dg.DECISION, ("a", "b")),
            dg.Node("x", dg.CHANCE, ("0", "1"), ("d",)),
        ),
        cpts={"x": {("a",): (1.0, 0.0), ("b",): (0.0, 1.0)}},
    )
    with pytest.raises(FormError, match="canonical"):
        cf.build_twin(cn.CanonicalDiagram(d, frozenset()))


# -- the medical counterfactual ---------------------------------------------


def test_cured_complier_would_probably_still_be_cured(medical_canonical):
    f = cf.evaluate(
        medical_canonical,
        factual_act={"r": "take"},
        factual_evidence=RECORD,
        counterfactual_act={"r": "dont_take"},
        query=("c'",),
    )
    assert f.table[("yes",)] == pytest.approx(2 / 3, abs=1e-12)


def test_joint_over_both_hypothetical_variables(medical_canonical):
    f = cf.evaluate(
        medical_canonical,
        factual_act={"r": "take"},
        factual_evidence=RECORD,
        counterfactual_act={"r": "dont_take"},
        query=("t'", "c'"),
    ).reorder(("t'", "c'"))
    for cfg in (("yes", "yes"), ("no", "yes"), ("no", "no")):
        assert f.table[cfg] == pytest.approx(1 / 3)
    assert ("yes", "no") not in f.table


def test_hypothetical_evidence_conditions_the_twin(medical_canonical):
    f = cf.evaluate(
        medical_canonical,
        factual_act={"r": "take"},
        factual_evidence=RECORD,
        counterfactual_act={"r": "dont_take"},
        query=("c'",),
        counterfactual_evidence={"t'": "yes"},
    )
    # only the cured always-taker fits both records
    assert f.table[("yes",)] == pytest.approx(1.0)


def test_factual_and_hypothetical_sides_agree_with_enumeration(
    medical, medical_canonical, medical_g, medical_g_canonical
):
    cases = [
        (medical, medical_canonical, {"r": "take"}, {"r": "dont_take"}),
        (
            medical_g,
            medical_g_canonical,
            {"r": "take", "t_hat": "idle"},
            {"r": "dont_take", "t_hat": "idle"},
        ),
    ]
    for table, cd, fact, hyp in cases:
        for query in (("c",), ("c'",), ("t", "c'")):
            f = cf.evaluate(cd, fact, RECORD, hyp, query)
            got = oracles.factor_dict(f, f.vars)
            want = oracles.counterfactual(table, fact, RECORD, hyp, query)
            assert oracles.max_gap(got, want) < 1e-9


def test_genetic_factor_posterior(medical_g_canonical):
    f = cf.evaluate(
        medical_g_canonical,
        factual_act={"r": "take", "t_hat": "idle"},
        factual_evidence=RECORD,
        counterfactual_act={"r": "dont_take", "t_hat": "idle"},
        query=("g", "c'"),
    ).reorder(("g", "c'"))
    marg_g = f.marginalize("c'")
    assert marg_g.table[("present",)] == pytest.approx(0.3525179856115108)
    marg_c = f.marginalize("g")
    assert marg_c.table[("yes",)] == pytest.approx(0.6942446043165468)


def test_forcing_in_the_hypothetical_world(medical_g_canonical):
    f = cf.evaluate(
        medical_g_canonical,
        factual_act={"r": "take", "t_hat": "idle"},
        factual_evidence=RECORD,
        counterfactual_act={"r": "take", "t_hat": "set:no"},
        query=("c'",),
    )
    assert f.table[("yes",)] == pytest.approx(0.4748201438848921)


def test_unresponsive_query_resolves_to_shared_node(medical_g_canonical):
    f = cf.evaluate(
        medical_g_canonical,
        factual_act={"r": "take", "t_hat": "idle"},
        factual_evidence=RECORD,
        counterfactual_act={"r": "dont_take", "t_hat": "idle"},
        query=("g'",),
    )
    # g never responds, so both worlds read the one shared node
    assert f.vars == ("g",)
    assert f.table[("present",)] == pytest.approx(0.3525179856115108)


# -- several worlds at once ---------------------------------------------------


def test_three_worlds(medical_canonical):
    f = cf.evaluate_worlds(
        medical_canonical,
        [
            ({"r": "take"}, RECORD),
            ({"r": "dont_take"}, {}),
            ({"r": "take"}, {}),
        ],
        query=("c'", "c''"),
    ).reorder(("c'", "c''"))
    # the second hypothetical repeats the factual act, so c'' is pinned at yes
    assert all(cfg[1] == "yes" for cfg in f.table)
    assert f.marginalize("c''").table[("yes",)] == pytest.approx(2 / 3)


def test_query_world_out_of_range(medical_canonical):
    with pytest.raises(InputError, match="names world"):
        cf.evaluate(
            medical_canonical,
            {"r": "take"},
            RECORD,
            {"r": "dont_take"},
            query=("c''",),
        )


def test_unknown_query_id(medical_canonical):
    with pytest.raises(InputError, match="unknown id"):
        cf.evaluate(
            medical_canonical, {"r": "take"}, RECORD, {"r": "dont_take"}, ("zz'",)
        )


def test_contradictory_shared_evidence(medical_canonical):
    mv = medical_canonical.mappings["t(r)"]
    s_complier = mv.symbols[mv.index_by_label("complier")]
    s_defier = mv.symbols[mv.index_by_label("defier")]
    with pytest.raises(ImpossibleEvidenceError, match="contradictory"):
        cf.evaluate(
            medical_canonical,
            {"r": "take"},
            {"t(r)": s_complier},
            {"r": "dont_take"},
            ("c'",),
            counterfactual_evidence={"t(r)": s_defier},
        )


def test_impossible_record(medical_canonical):
    # same act in both worlds makes c' a deterministic copy of c
    with pytest.raises(ImpossibleEvidenceError, match="zero total"):
        cf.evaluate(
            medical_canonical,
            {"r": "take"},
            RECORD,
            {"r": "take"},
            ("c'",),
            counterfactual_evidence={"c'": "no"},
        )

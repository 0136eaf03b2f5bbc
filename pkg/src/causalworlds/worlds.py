"""World tables: exhaustive act-by-state descriptions of a decision problem.

A world table lists every possible state of the world. A state fixes, for
every available act (a joint assignment to the decision variables), the
values of all chance variables. Everything else in the package is defined
by enumeration over this structure:

* a set of chance variables ``X`` is *unresponsive* to the decisions,
  limited by a set ``Y``, when no two acts that agree on ``Y`` can
  disagree on ``X`` in any possible state;
* a *cause set* for a chance variable ``x`` is an inclusion-minimal set
  of other variables that x is unresponsive limited by;
* *interventions* are decision variables that force chance variables to
  chosen values without touching the rest of the world.

Acts are mappings from decision ids to instance ids. States may carry a
prior probability or only a possibility flag; operations that need a
distribution reject flag-only tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .constants import MAX_CAUSE_VARIABLES, PROB_TOL
from .errors import InputError, SizeLimitError, UnquantifiedTableError

# Instance naming convention for atomic interventions: one passive value
# plus one forcing value per target instance.
IDLE = "idle"
SET_PREFIX = "set:"


def set_instance(value: str) -> str:
    """The instance id an atomic intervention uses to force ``value``."""
    return SET_PREFIX + value


@dataclass(frozen=True)
class Variable:
    id: str
    kind: str  # "decision" | "chance"
    instances: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("decision", "chance"):
            raise InputError(f"variable {self.id!r}: unknown kind {self.kind!r}")
        if not self.instances:
            raise InputError(f"variable {self.id!r} has no instances")
        if len(set(self.instances)) != len(self.instances):
            raise InputError(f"variable {self.id!r} has duplicate instances")


@dataclass(frozen=True)
class WorldState:
    """One possible world: outcomes of all chance variables under every act.

    ``outcomes`` maps an act tuple (decision instances, table order) to a
    chance tuple (chance instances, table order). ``prior`` is None for
    flag-only tables.
    """

    id: int
    outcomes: Mapping[tuple[str, ...], tuple[str, ...]]
    prior: float | None = None
    possible: bool = True
    label: str | None = None


@dataclass(frozen=True)
class WorldTable:
    decisions: tuple[Variable, ...]
    chances: tuple[Variable, ...]
    states: tuple[WorldState, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        ids = [v.id for v in self.decisions + self.chances]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate variable ids in table")
        for v in self.decisions:
            if v.kind != "decision":
                raise InputError(f"{v.id!r} listed as decision but kind={v.kind!r}")
        for v in self.chances:
            if v.kind != "chance":
                raise InputError(f"{v.id!r} listed as chance but kind={v.kind!r}")
        seen = set()
        for s in self.states:
            if s.id in seen:
                raise InputError(f"duplicate state id {s.id}")
            seen.add(s.id)
        quantified = [s.prior is not None for s in self.states]
        if any(quantified) and not all(quantified):
            raise InputError("states mix priors with possible-flags")
        if all(quantified) and self.states:
            total = sum(s.prior for s in self.states)
            if abs(total - 1.0) > PROB_TOL:
                raise InputError(f"state priors sum to {total!r}, not 1")
            for s in self.states:
                if s.prior < 0.0:
                    raise InputError(f"state {s.id} has negative prior")
        acts = self.act_tuples
        for s in self.states:
            if set(s.outcomes) != set(acts):
                raise InputError(f"state {s.id}: outcomes are not total over acts")
            for row in s.outcomes.values():
                if len(row) != len(self.chances):
                    raise InputError(f"state {s.id}: outcome row has wrong arity")
                for var, value in zip(self.chances, row):
                    if value not in var.instances:
                        raise InputError(
                            f"state {s.id}: {value!r} is not an instance of {var.id!r}"
                        )
        if not any(self._is_possible(s) for s in self.states):
            raise InputError("table has no possible state")

    # -- basic structure ------------------------------------------------

    @cached_property
    def variables(self) -> tuple[Variable, ...]:
        return self.decisions + self.chances

    @cached_property
    def _by_id(self) -> dict[str, Variable]:
        return {v.id: v for v in self.variables}

    @cached_property
    def act_tuples(self) -> tuple[tuple[str, ...], ...]:
        spaces = [v.instances for v in self.decisions]
        return tuple(itertools.product(*spaces))

    @cached_property
    def quantified(self) -> bool:
        return all(s.prior is not None for s in self.states)

    def variable(self, var_id: str) -> Variable:
        try:
            return self._by_id[var_id]
        except KeyError:
            raise InputError(f"unknown variable {var_id!r}") from None

    def decision_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.decisions)

    def chance_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.chances)

    def state(self, state_id: int) -> WorldState:
        for s in self.states:
            if s.id == state_id:
                return s
        raise InputError(f"unknown state id {state_id}")

    def possible_states(self) -> tuple[WorldState, ...]:
        return tuple(s for s in self.states if self._is_possible(s))

    @staticmethod
    def _is_possible(state: WorldState) -> bool:
        if state.prior is not None:
            return state.prior > 0.0
        return state.possible

    def act_tuple(self, act: Mapping[str, str]) -> tuple[str, ...]:
        """Validate an act mapping and normalize it to table order."""
        extra = set(act) - {v.id for v in self.decisions}
        if extra:
            raise InputError(f"act assigns unknown decisions {sorted(extra)}")
        values = []
        for v in self.decisions:
            if v.id not in act:
                raise InputError(f"act does not assign decision {v.id!r}")
            value = act[v.id]
            if value not in v.instances:
                raise InputError(f"{value!r} is not an instance of decision {v.id!r}")
            values.append(value)
        return tuple(values)

    def ordered_ids(self, ids: Iterable[str]) -> tuple[str, ...]:
        """Normalize a set of variable ids to table declaration order."""
        wanted = set(ids)
        unknown = wanted - set(self._by_id)
        if unknown:
            raise InputError(f"unknown variables {sorted(unknown)}")
        return tuple(v.id for v in self.variables if v.id in wanted)

    def _reader(self, ids: Sequence[str]):
        """Build a fast (state, act_tuple) -> value tuple reader for ids."""
        dec_index = {v.id: i for i, v in enumerate(self.decisions)}
        cha_index = {v.id: i for i, v in enumerate(self.chances)}
        slots = []
        for i in ids:
            if i in dec_index:
                slots.append((True, dec_index[i]))
            else:
                slots.append((False, cha_index[i]))

        def read(state: WorldState, act: tuple[str, ...]) -> tuple[str, ...]:
            row = state.outcomes[act]
            return tuple(act[j] if is_dec else row[j] for is_dec, j in slots)

        return read


def build_table(
    decisions: Sequence[tuple[str, Sequence[str]]],
    chances: Sequence[tuple[str, Sequence[str]]],
    states: Sequence[tuple],
    name: str | None = None,
) -> WorldTable:
    """Assemble a table from friendly rows.

    Each state row is ``(id, prior_or_flag, outcomes)`` or
    ``(id, prior_or_flag, outcomes, label)`` where ``outcomes`` maps act
    dicts (or tuples) to chance dicts (or tuples). ``prior_or_flag`` is a
    float prior or a bool possibility flag.
    """
    dec_vars = tuple(Variable(i, "decision", tuple(inst)) for i, inst in decisions)
    cha_vars = tuple(Variable(i, "chance", tuple(inst)) for i, inst in chances)
    dec_ids = [v.id for v in dec_vars]
    cha_ids = [v.id for v in cha_vars]

    def norm_key(key):
        if isinstance(key, tuple):
            return key
        return tuple(key[d] for d in dec_ids)

    def norm_row(row):
        if isinstance(row, tuple):
            return row
        return tuple(row[c] for c in cha_ids)

    built = []
    for row in states:
        sid, quant, outcomes = row[0], row[1], row[2]
        label = row[3] if len(row) > 3 else None
        if isinstance(quant, bool):
            prior, possible = None, quant
        else:
            prior, possible = float(quant), float(quant) > 0.0
        built.append(
            WorldState(
                id=sid,
                outcomes={norm_key(k): norm_row(v) for k, v in outcomes.items()},
                prior=prior,
                possible=possible,
                label=label,
            )
        )
    return WorldTable(dec_vars, cha_vars, tuple(built), name=name)


# -- outcomes and distributions ----------------------------------------


def outcome(
    table: WorldTable, state_id: int, act: Mapping[str, str], X: Iterable[str]
) -> dict[str, str]:
    """Values of the variables ``X`` in a given state under a given act."""
    ids = table.ordered_ids(X)
    act_t = table.act_tuple(act)
    read = table._reader(ids)
    values = read(table.state(state_id), act_t)
    return dict(zip(ids, values))


def act_distribution(
    table: WorldTable, X: Iterable[str], act: Mapping[str, str]
) -> dict[tuple[str, ...], float]:
    """Distribution of the variables ``X`` under ``act``, from state priors.

    Keys are value tuples in table declaration order of ``X``.
    """
    if not table.quantified:
        raise UnquantifiedTableError("table has possible-flags only, no priors")
    ids = table.ordered_ids(X)
    act_t = table.act_tuple(act)
    read = table._reader(ids)
    dist: dict[tuple[str, ...], float] = {}
    for s in table.states:
        if s.prior > 0.0:
            key = read(s, act_t)
            dist[key] = dist.get(key, 0.0) + s.prior
    return dist


# -- unresponsiveness ---------------------------------------------------


def _check_chance_ids(table: WorldTable, X: Iterable[str]) -> tuple[str, ...]:
    ids = table.ordered_ids(X)
    for i in ids:
        if table.variable(i).kind != "chance":
            raise InputError(f"{i!r} is a decision; expected chance variables")
    return ids


def _unresponsive(table: WorldTable, X: Sequence[str], Y: Sequence[str]) -> bool:
    """Core check; X may contain decision ids here (internal use)."""
    read_x = table._reader(X)
    read_y = table._reader(Y)
    acts = table.act_tuples
    for state in table.possible_states():
        seen: dict[tuple[str, ...], tuple[str, ...]] = {}
        for act in acts:
            y = read_y(state, act)
            x = read_x(state, act)
            if seen.setdefault(y, x) != x:
                return False
    return True


def is_unresponsive_limited(
    table: WorldTable, X: Iterable[str], Y: Iterable[str] = ()
) -> bool:
    """Is ``X`` unresponsive to the decisions in states limited by ``Y``?

    True when, in every possible state, any two acts that agree on the
    values of ``Y`` also agree on the values of ``X``. With empty ``Y``
    this is plain unresponsiveness: X cannot be affected by acting.
    """
    X_ids = _check_chance_ids(table, X)
    Y_ids = table.ordered_ids(Y)
    return _unresponsive(table, X_ids, Y_ids)


def is_unresponsive_in_instance_set(
    table: WorldTable,
    X: Iterable[str],
    Y: Iterable[str],
    instance_subset: Iterable[Mapping[str, str]],
) -> bool:
    """Like :func:`is_unresponsive_limited`, but only where ``Y`` lands in
    ``instance_subset``.

    Each member of ``instance_subset`` must assign exactly the variables
    of ``Y``. With the full instance space this reduces to the limited
    check; with an empty subset it is vacuously true.
    """
    X_ids = _check_chance_ids(table, X)
    Y_ids = table.ordered_ids(Y)
    subset = frozenset(
        _normalize_assignment(table, Y_ids, a) for a in instance_subset
    )
    read_x = table._reader(X_ids)
    read_y = table._reader(Y_ids)
    for state in table.possible_states():
        seen: dict[tuple[str, ...], tuple[str, ...]] = {}
        for act in table.act_tuples:
            y = read_y(state, act)
            if y not in subset:
                continue
            x = read_x(state, act)
            if seen.setdefault(y, x) != x:
                return False
    return True


def _normalize_assignment(
    table: WorldTable, ids: Sequence[str], assignment: Mapping[str, str]
) -> tuple[str, ...]:
    if set(assignment) != set(ids):
        raise InputError(
            f"assignment {dict(assignment)!r} must cover exactly {list(ids)}"
        )
    values = []
    for i in ids:
        value = assignment[i]
        if value not in table.variable(i).instances:
            raise InputError(f"{value!r} is not an instance of {i!r}")
        values.append(value)
    return tuple(values)


def is_unresponsive_to_subset(
    table: WorldTable,
    X: Iterable[str],
    D_sub: Iterable[str],
    Y: Iterable[str] = (),
) -> bool:
    """Is ``X`` unresponsive to the decision subset ``D_sub``, limited by ``Y``?

    Holding the remaining decisions fixed is the same as limiting by
    them, so this reduces to a limited check with ``Y`` extended by the
    complement of ``D_sub``.
    """
    sub = set(D_sub)
    for d in sub:
        if table.variable(d).kind != "decision":
            raise InputError(f"{d!r} is not a decision variable")
    rest = {v.id for v in table.decisions} - sub
    return is_unresponsive_limited(table, X, set(Y) | rest)


# -- cause sets ---------------------------------------------------------


def _check_search_budget(table: WorldTable) -> None:
    n = len(table.variables)
    if n > MAX_CAUSE_VARIABLES:
        raise SizeLimitError(
            f"cause search over {n} variables exceeds the "
            f"{MAX_CAUSE_VARIABLES}-variable limit"
        )


def _cause_sort_key(members: frozenset[str]):
    return (tuple(sorted(members)), len(members))


def find_causes(table: WorldTable, x: str) -> list[frozenset[str]]:
    """All inclusion-minimal cause sets for the chance variable ``x``.

    A cause set is a set of other variables (decisions allowed) that
    ``x`` is unresponsive limited by. An unresponsive ``x`` has exactly
    the empty set; searching proceeds by increasing cardinality, pruning
    supersets of accepted sets, so every returned set is minimal.
    """
    _check_search_budget(table)
    _check_chance_ids(table, [x])
    if _unresponsive(table, (x,), ()):
        return [frozenset()]
    candidates = [i for i in (v.id for v in table.variables) if i != x]
    found: list[frozenset[str]] = []
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            cset = frozenset(combo)
            if any(f <= cset for f in found):
                continue
            if _unresponsive(table, (x,), combo):
                found.append(cset)
    return sorted(found, key=_cause_sort_key)


def _good_configs(
    table: WorldTable, x: str, Y_ids: tuple[str, ...]
) -> tuple[tuple[tuple[str, ...], ...], frozenset[tuple[str, ...]]]:
    """All Y configurations, and the subset under which ``x`` is pinned.

    A configuration is good when no possible state shows two acts with
    that Y value but different x values. Configurations never realized
    are vacuously good.
    """
    spaces = [table.variable(i).instances for i in Y_ids]
    total = 1
    for sp in spaces:
        total *= len(sp)
        if total > MAX_CAUSE_VARIABLES**4:
            raise SizeLimitError(
                f"instance space of {list(Y_ids)} is too large to enumerate"
            )
    all_configs = tuple(itertools.product(*spaces))
    read_x = table._reader((x,))
    read_y = table._reader(Y_ids)
    bad: set[tuple[str, ...]] = set()
    for state in table.possible_states():
        seen: dict[tuple[str, ...], tuple[str, ...]] = {}
        for act in table.act_tuples:
            y = read_y(state, act)
            xv = read_x(state, act)
            if seen.setdefault(y, xv) != xv:
                bad.add(y)
    return all_configs, frozenset(c for c in all_configs if c not in bad)


def find_instance_causes(
    table: WorldTable, x: str
) -> list[tuple[frozenset[str], frozenset[tuple[tuple[str, str], ...]]]]:
    """Instance-level causes: variable sets with the instances that pin ``x``.

    Returns pairs ``(C, configs)`` where ``configs`` is the maximal set
    of joint instances of ``C`` under which ``x`` is pinned, and ``C`` is
    minimal in the sense that no proper subset pins ``x`` under the
    projection of those instances. Configurations are frozensets of
    ``(variable, value)`` pairs sorted by variable id. An unresponsive
    ``x`` yields the empty set with the empty configuration.
    """
    _check_search_budget(table)
    _check_chance_ids(table, [x])
    candidates = [i for i in (v.id for v in table.variables) if i != x]
    results = []
    full_sets: list[frozenset[str]] = []
    for size in range(0, len(candidates) + 1):
        for combo in itertools.combinations(candidates, size):
            cset = frozenset(combo)
            # Supersets of a fully-pinning set are never minimal.
            if any(f <= cset and f != cset for f in full_sets):
                continue
            ids = table.ordered_ids(combo)
            all_configs, good = _good_configs(table, x, ids)
            if not good:
                continue
            if len(good) == len(all_configs):
                full_sets.append(cset)
            if _instance_minimal(table, x, ids, good):
                packed = frozenset(
                    tuple(sorted(zip(ids, config))) for config in good
                )
                results.append((cset, packed))
    results.sort(key=lambda pair: _cause_sort_key(pair[0]))
    return results


def _instance_minimal(
    table: WorldTable,
    x: str,
    ids: tuple[str, ...],
    good: frozenset[tuple[str, ...]],
) -> bool:
    """No proper subset of ``ids`` pins x under the projected instances."""
    index = {i: k for k, i in enumerate(ids)}
    for r in range(len(ids)):
        for sub in itertools.combinations(ids, r):
            projected = {tuple(cfg[index[i]] for i in sub) for cfg in good}
            assignments = [dict(zip(sub, cfg)) for cfg in projected]
            if is_unresponsive_in_instance_set(table, [x], sub, assignments):
                return False
    return True


# -- interventions ------------------------------------------------------


def is_direct_intervention(
    table: WorldTable, I: Iterable[str], X: Iterable[str]
) -> bool:
    """Do the decisions ``I`` intervene directly on exactly the chances ``X``?

    Requires every member of ``X`` to respond to ``I`` and every chance
    variable to be unresponsive to ``I`` once ``X`` is held fixed: the
    intervention touches the world only through ``X``.
    """
    I_ids = tuple(I)
    for d in I_ids:
        if table.variable(d).kind != "decision":
            raise InputError(f"{d!r} is not a decision variable")
    X_ids = _check_chance_ids(table, X)
    if not X_ids:
        raise InputError("X must be non-empty")
    for x in X_ids:
        if is_unresponsive_to_subset(table, [x], I_ids):
            return False
    for y in table.chance_ids():
        if not is_unresponsive_to_subset(table, [y], I_ids, X_ids):
            return False
    return True


def is_atomic_intervention(table: WorldTable, d: str, x: str) -> bool:
    """Is decision ``d`` an atomic intervention on chance variable ``x``?

    Checks three things: ``{d}`` is a direct intervention on ``{x}``;
    ``d``'s instances are exactly ``idle`` plus one ``set:<value>`` per
    instance of ``x``; and in every possible state every act with
    ``d = set:<value>`` in fact yields ``x = <value>``.
    """
    dv = table.variable(d)
    if dv.kind != "decision":
        raise InputError(f"{d!r} is not a decision variable")
    xv = table.variable(x)
    if xv.kind != "chance":
        raise InputError(f"{x!r} is not a chance variable")
    expected = {IDLE} | {set_instance(v) for v in xv.instances}
    if set(dv.instances) != expected:
        return False
    d_pos = table.decision_ids().index(d)
    read_x = table._reader((x,))
    for state in table.possible_states():
        for act in table.act_tuples:
            dval = act[d_pos]
            if dval.startswith(SET_PREFIX):
                if read_x(state, act)[0] != dval[len(SET_PREFIX):]:
                    return False
    return is_direct_intervention(table, [d], [x])


# -- table surgery ------------------------------------------------------


def adjoin_chance_variable(
    table: WorldTable,
    var_id: str,
    instances: Sequence[str],
    values_by_state: Mapping[int, str],
) -> WorldTable:
    """Extend a table with a chance variable that is constant within states.

    ``values_by_state`` must cover every possible state; impossible
    states default to the first instance. The new variable is by
    construction unresponsive to the decisions.
    """
    if var_id in {v.id for v in table.variables}:
        raise InputError(f"variable id {var_id!r} already in table")
    new_var = Variable(var_id, "chance", tuple(instances))
    states = []
    for s in table.states:
        if WorldTable._is_possible(s):
            value = values_by_state[s.id]
        else:
            value = values_by_state.get(s.id, new_var.instances[0])
        if value not in new_var.instances:
            raise InputError(f"{value!r} is not an instance of {var_id!r}")
        states.append(
            WorldState(
                id=s.id,
                outcomes={a: row + (value,) for a, row in s.outcomes.items()},
                prior=s.prior,
                possible=s.possible,
                label=s.label,
            )
        )
    return WorldTable(
        table.decisions, table.chances + (new_var,), tuple(states), name=table.name
    )

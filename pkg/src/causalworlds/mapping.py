"""Mapping variables: how targets depend on arguments, reified as variables.

A mapping variable for targets ``X`` and arguments ``Y`` has one instance
per total function from joint instances of ``Y`` to joint instances of
``X``. Reading one off a world table turns "how X depends on Y in this
state" into an ordinary chance variable, which is the bridge between
world tables and diagram form.

When an argument is an atomic intervention on one of the targets, the
function value at its ``set:`` configurations is forced, so those
columns carry no information and the instance space collapses to the
free columns only.

Instances are ordered canonically: argument configurations enumerate
lexicographically in declared order, and function tables are read as
mixed-radix numerals over the per-column choices (first column most
significant). For the two-column binary case the familiar response-type
labels (complier, defier, always_taker, never_taker) are attached.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import worlds
from .constants import MAX_MAPPING_INSTANCES
from .errors import DefinednessError, InputError, NotAFunctionError, SizeLimitError
from .worlds import SET_PREFIX, WorldTable

Config = tuple[str, ...]

RESPONSE_LABELS = ("complier", "defier", "always_taker", "never_taker")


def mapping_id(targets: Sequence[str], args: Sequence[str]) -> str:
    """Conventional node id for a mapping variable, e.g. ``t(r)``."""
    return f"{','.join(targets)}({','.join(args)})"


@dataclass(frozen=True)
class MappingVariable:
    target_ids: tuple[str, ...]
    target_spaces: tuple[tuple[str, ...], ...]
    arg_ids: tuple[str, ...]
    arg_spaces: tuple[tuple[str, ...], ...]
    # (argument id, target id) pairs where the argument atomically
    # intervenes on the target, forcing its value at set: configurations.
    atomic_args: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not self.target_ids:
            raise InputError("mapping variable needs at least one target")
        if len(self.target_ids) != len(self.target_spaces):
            raise InputError("target spaces do not match targets")
        if len(self.arg_ids) != len(self.arg_spaces):
            raise InputError("argument spaces do not match arguments")
        if len(set(self.arg_ids)) != len(self.arg_ids):
            raise InputError("duplicate mapping arguments")
        for arg, target in self.atomic_args:
            if arg not in self.arg_ids or target not in self.target_ids:
                raise InputError(f"atomic pair ({arg!r}, {target!r}) out of scope")

    @property
    def id(self) -> str:
        return mapping_id(self.target_ids, self.arg_ids)

    @cached_property
    def arg_configs(self) -> tuple[Config, ...]:
        return tuple(itertools.product(*self.arg_spaces))

    @cached_property
    def target_space(self) -> tuple[Config, ...]:
        return tuple(itertools.product(*self.target_spaces))

    @cached_property
    def _forced(self) -> tuple[dict[int, str], ...]:
        """Per argument configuration: forced target positions and values."""
        out = []
        pairs = [
            (self.arg_ids.index(a), self.target_ids.index(t))
            for a, t in self.atomic_args
        ]
        for cfg in self.arg_configs:
            forced: dict[int, str] = {}
            for a_pos, t_pos in pairs:
                value = cfg[a_pos]
                if value.startswith(SET_PREFIX):
                    forced[t_pos] = value[len(SET_PREFIX):]
            out.append(forced)
        return tuple(out)

    @cached_property
    def choices(self) -> tuple[tuple[Config, ...], ...]:
        """Allowed target configurations per column, in canonical order."""
        out = []
        for forced in self._forced:
            if forced:
                out.append(
                    tuple(
                        tc
                        for tc in self.target_space
                        if all(tc[i] == v for i, v in forced.items())
                    )
                )
            else:
                out.append(self.target_space)
        return tuple(out)

    @cached_property
    def count(self) -> int:
        n = 1
        for ch in self.choices:
            n *= len(ch)
            if n > MAX_MAPPING_INSTANCES:
                raise SizeLimitError(
                    f"mapping {self.id!r} would have more than "
                    f"{MAX_MAPPING_INSTANCES} instances"
                )
        return n

    @cached_property
    def _radices(self) -> tuple[int, ...]:
        self.count  # trip the size guard first
        return tuple(len(ch) for ch in self.choices)

    def instance(self, index: int) -> tuple[Config, ...]:
        """Decode an index into a full function table (one entry per column)."""
        if not 0 <= index < self.count:
            raise InputError(f"mapping index {index} out of range")
        digits = []
        for radix in reversed(self._radices):
            digits.append(index % radix)
            index //= radix
        digits.reverse()
        return tuple(ch[d] for ch, d in zip(self.choices, digits))

    def index_of(self, func: Sequence[Config]) -> int:
        if len(func) != len(self.arg_configs):
            raise InputError("function table has wrong number of columns")
        index = 0
        for value, ch in zip(func, self.choices):
            index = index * len(ch) + ch.index(value)
        return index

    @cached_property
    def _symbol_columns(self) -> tuple[int, ...]:
        """Columns rendered in instance symbols: those not fully forced."""
        cols = [
            j
            for j in range(len(self.arg_configs))
            if len(self._forced[j]) < len(self.target_ids)
        ]
        # A fully forced mapping still needs one column to render.
        return tuple(cols) if cols else (0,)

    def symbol(self, index: int) -> str:
        func = self.instance(index)
        return "|".join("&".join(func[j]) for j in self._symbol_columns)

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        return tuple(self.symbol(i) for i in range(self.count))

    @cached_property
    def labels(self) -> dict[int, str]:
        """Response-type names for the 2-column binary case."""
        if len(self.target_ids) != 1 or len(self.target_spaces[0]) != 2:
            return {}
        cols = self._symbol_columns
        if len(cols) != 2:
            return {}
        v1, v2 = self.target_spaces[0]
        patterns = {
            (v1, v2): "complier",
            (v2, v1): "defier",
            (v1, v1): "always_taker",
            (v2, v2): "never_taker",
        }
        out = {}
        for i in range(self.count):
            func = self.instance(i)
            key = (func[cols[0]][0], func[cols[1]][0])
            out[i] = patterns[key]
        return out

    def index_by_label(self, label: str) -> int:
        for i, lab in self.labels.items():
            if lab == label:
                return i
        raise InputError(f"no instance labelled {label!r}")

    def config_index(self, assignment: Mapping[str, str]) -> int:
        cfg = []
        for a, space in zip(self.arg_ids, self.arg_spaces):
            if a not in assignment:
                raise InputError(f"assignment misses mapping argument {a!r}")
            if assignment[a] not in space:
                raise InputError(
                    f"{assignment[a]!r} is not an instance of argument {a!r}"
                )
            cfg.append(assignment[a])
        return self.arg_configs.index(tuple(cfg))


def apply_mapping(
    mv: MappingVariable, index: int, assignment: Mapping[str, str]
) -> dict[str, str]:
    """Evaluate one mapping instance at an argument assignment."""
    func = mv.instance(index)
    out = func[mv.config_index(assignment)]
    return dict(zip(mv.target_ids, out))


# -- construction from world tables --------------------------------------


def _detect_atomic_args(
    table: WorldTable, targets: Sequence[str], args: Sequence[str]
) -> tuple[tuple[str, str], ...]:
    pairs = []
    for a in args:
        if table.variable(a).kind != "decision":
            continue
        for t in targets:
            if worlds.is_atomic_intervention(table, a, t):
                pairs.append((a, t))
    return tuple(pairs)


def _build(table: WorldTable, X: Iterable[str], Y: Sequence[str]) -> MappingVariable:
    targets = table.ordered_ids(X)
    for t in targets:
        if table.variable(t).kind != "chance":
            raise InputError(f"mapping target {t!r} is not a chance variable")
    args = tuple(Y)
    for a in args:
        table.variable(a)
    return MappingVariable(
        target_ids=targets,
        target_spaces=tuple(table.variable(t).instances for t in targets),
        arg_ids=args,
        arg_spaces=tuple(table.variable(a).instances for a in args),
        atomic_args=_detect_atomic_args(table, targets, args),
    )


def enumerate_mapping(
    table: WorldTable, X: Iterable[str], Y: Sequence[str]
) -> MappingVariable:
    """Materialize the mapping variable for targets ``X`` and arguments ``Y``.

    Chance arguments must come with an atomic intervention among the
    decisions; otherwise the mapping is not uniquely identified and a
    :class:`DefinednessError` is raised. The instance count is the
    target-space size raised to the number of argument configurations,
    with forcing columns collapsed.
    """
    mv = _build(table, X, Y)
    for a in mv.arg_ids:
        if table.variable(a).kind == "chance":
            if not any(
                worlds.is_atomic_intervention(table, d, a)
                for d in table.decision_ids()
            ):
                raise DefinednessError(
                    f"mapping {mv.id!r} is not uniquely identified: chance "
                    f"argument {a!r} has no atomic intervention"
                )
    mv.count  # trip the size guard eagerly
    return mv


def mapping_from_world(
    table: WorldTable, X: Iterable[str], Y: Sequence[str]
) -> tuple[MappingVariable, dict[int, int]]:
    """Read the mapping instance realized in each possible state.

    Ranges over all acts within each state to observe the function from
    ``Y`` to ``X``. Raises :class:`NotAFunctionError` when two acts agree
    on the arguments but disagree on the targets, and
    :class:`DefinednessError` when some argument configuration is never
    exercised (so the instance is not pinned down). Forced columns need
    no observation. Returns the mapping variable and a state-id-to-index
    map.
    """
    mv = _build(table, X, Y)
    mv.count
    read_x = table._reader(mv.target_ids)
    read_y = table._reader(mv.arg_ids)
    config_pos = {cfg: j for j, cfg in enumerate(mv.arg_configs)}
    fully_forced = {
        j
        for j in range(len(mv.arg_configs))
        if len(mv._forced[j]) == len(mv.target_ids)
    }

    conflict_states: list[int] = []
    undefined_states: list[int] = []
    by_state: dict[int, int] = {}
    for state in table.possible_states():
        observed: dict[int, Config] = {}
        ok = True
        for act in table.act_tuples:
            j = config_pos[read_y(state, act)]
            xv = read_x(state, act)
            if observed.setdefault(j, xv) != xv:
                conflict_states.append(state.id)
                ok = False
                break
        if not ok:
            continue
        func = []
        complete = True
        for j, choices in enumerate(mv.choices):
            if j in observed:
                func.append(observed[j])
            elif j in fully_forced:
                func.append(choices[0])
            else:
                complete = False
                break
        if not complete:
            undefined_states.append(state.id)
            continue
        by_state[state.id] = mv.index_of(func)

    if conflict_states:
        raise NotAFunctionError(
            f"mapping {mv.id!r} is not a function of its arguments in "
            f"states {conflict_states}",
            states=conflict_states,
        )
    if undefined_states:
        raise DefinednessError(
            f"mapping {mv.id!r} is not uniquely identified in states "
            f"{undefined_states}: some argument configurations are never "
            f"exercised",
            states=undefined_states,
        )
    return mv, by_state


def verify_theorem3(table: WorldTable, X: Iterable[str], Y: Sequence[str]) -> bool:
    """Check that limited unresponsiveness transfers to the mapping variable.

    Adjoins the mapping variable for ``(X, Y)`` as a chance variable and
    compares "X unresponsive limited by Y" with "the mapping variable is
    unresponsive outright". Definedness errors from reading the mapping
    propagate to the caller.
    """
    mv, by_state = mapping_from_world(table, X, Y)
    values = {sid: mv.symbol(idx) for sid, idx in by_state.items()}
    extended = worlds.adjoin_chance_variable(table, mv.id, mv.symbols, values)
    left = worlds.is_unresponsive_limited(table, X, Y)
    right = worlds.is_unresponsive_limited(extended, [mv.id], ())
    return left == right

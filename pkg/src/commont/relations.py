"""Effect-based relations between protocols.

Deep relations compare trace sets T(A), T(B); shallow ones compare their
time-abstracted multisets S(A), S(B). The "specialized" variants replace
equality of fluents by fluent subsumption: positionwise for traces, through
an injective matching for multisets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from .errors import ProtocolError
from .ontology import Ontology
from .protocol import Protocol
from .semantics import DEFAULT_REGISTRY, Fluent, fluent_to_json, matches
from .traces import AbstractTraceMultiset, ProtocolTrace, abstract_set, abstract_time, trace_set

__all__ = [
    "MatchingMap",
    "RELATIONS",
    "RelationVerdict",
    "Witness",
    "compare",
    "compare_trace_sets",
    "shallow_trace_specializes",
    "trace_specializes",
]

RELATIONS = (
    "equivalent",
    "restriction",
    "specialized-equivalent",
    "specialized-restriction",
    "shallow-equivalent",
    "shallow-restriction",
    "shallow-specialized-equivalent",
    "shallow-specialized-restriction",
)

T = TypeVar("T")


def trace_specializes(ont: Ontology, t: ProtocolTrace, s: ProtocolTrace) -> bool:
    """t ≪ s: same length and every entry of t subsumed by the entry of s at that rank."""
    if len(t) != len(s):
        return False
    return all(matches(ont, a, b) for a, b in zip(t.fluents, s.fluents))


@dataclass(frozen=True)
class MatchingMap:
    """Injective assignment of each element of one multiset to a more general one."""

    pairs: tuple[tuple[Fluent, Fluent], ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a} -> {b}" for a, b in self.pairs) + "}"

    def to_json(self) -> list[dict]:
        return [{"from": fluent_to_json(a), "to": fluent_to_json(b)} for a, b in self.pairs]


def _max_matching(adjacency: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Kuhn's augmenting-path matching; returns the right partner of each left vertex (-1 if none)."""
    owner = [-1] * n_right

    def augment(u: int, visited: list[bool]) -> bool:
        for v in adjacency[u]:
            if visited[v]:
                continue
            visited[v] = True
            if owner[v] < 0 or augment(owner[v], visited):
                owner[v] = u
                return True
        return False

    for u in range(len(adjacency)):
        augment(u, [False] * n_right)
    partner = [-1] * len(adjacency)
    for v, u in enumerate(owner):
        if u >= 0:
            partner[u] = v
    return partner


def shallow_trace_specializes(
    ont: Ontology, t: AbstractTraceMultiset, s: AbstractTraceMultiset
) -> MatchingMap | None:
    """t ≪_s s: a matching that sends every element of t to a distinct, more general element of s.

    Returns the matching, or ``None`` when no such injective map exists.
    """
    if isinstance(t, ProtocolTrace):
        t = abstract_time(t)
    if isinstance(s, ProtocolTrace):
        s = abstract_time(s)
    left, right = t.elements(), s.elements()
    if len(left) > len(right):
        return None
    adjacency = [[j for j, g in enumerate(right) if matches(ont, f, g)] for f in left]
    partner = _max_matching(adjacency, len(right))
    if any(p < 0 for p in partner):
        return None
    return MatchingMap(tuple((left[i], right[j]) for i, j in enumerate(partner)))


@dataclass(frozen=True)
class Witness:
    """Why a relation fails: a message and, when there is one, the offending trace."""

    reason: str
    item: ProtocolTrace | AbstractTraceMultiset | None = None

    def __str__(self) -> str:
        return self.reason if self.item is None else f"{self.reason}: {self.item}"

    def to_json(self) -> dict:
        item = None
        if isinstance(self.item, ProtocolTrace):
            item = self.item.to_json()
        elif isinstance(self.item, AbstractTraceMultiset):
            item = [fluent_to_json(f) for f in self.item.elements()]
        return {"reason": self.reason, "item": item}


@dataclass
class RelationVerdict:
    """Which relations hold between protocol ``a`` and protocol ``b``.

    Every relation reads "a is a <relation> of b", except the two
    specialized-equivalent variants, which hold if either protocol is a
    specialized-equivalent of the other; ``direction`` says which.
    """

    a: str
    b: str
    holds: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Witness] = field(default_factory=dict)
    direction: dict[str, str] = field(default_factory=dict)
    matchings: dict[str, list[MatchingMap]] = field(default_factory=dict)

    def __getitem__(self, relation: str) -> bool:
        return self.holds[relation]

    @property
    def strongest(self) -> str | None:
        return next((r for r in RELATIONS if self.holds.get(r)), None)

    @property
    def any_holds(self) -> bool:
        return any(self.holds.values())

    def to_json(self) -> dict:
        rels = {}
        for r in RELATIONS:
            entry: dict = {"holds": self.holds[r]}
            if r in self.witnesses:
                entry["witness"] = self.witnesses[r].to_json()
            if r in self.direction:
                entry["direction"] = self.direction[r]
            if r in self.matchings:
                entry["matchings"] = [m.to_json() for m in self.matchings[r]]
            rels[r] = entry
        return {"a": self.a, "b": self.b, "strongest": self.strongest, "relations": rels}

    def table(self) -> str:
        width = max(len(r) for r in RELATIONS)
        lines = [f"{self.a} vs {self.b}"]
        for r in RELATIONS:
            mark = "holds" if self.holds[r] else "fails"
            detail = ""
            if r in self.witnesses:
                detail = f"  ({self.witnesses[r]})"
            elif r in self.direction:
                lhs, rhs = (self.a, self.b) if self.direction[r] == "a-of-b" else (self.b, self.a)
                detail = f"  ({lhs} of {rhs})"
                for m in self.matchings.get(r, []):
                    detail += f" {m}"
            lines.append(f"  {r:<{width}}  {mark}{detail}")
        lines.append(f"strongest: {self.strongest or 'none'}")
        return "\n".join(lines)


def _ordered(items: Iterable[T]) -> list[T]:
    return sorted(items, key=str)


def _first_uncovered(
    left: Iterable[T], right: Iterable[T], related: Callable[[T, T], object]
) -> T | None:
    """First x in ``left`` with no y in ``right`` such that related(x, y)."""
    right = _ordered(right)
    for x in _ordered(left):
        if not any(related(x, y) for y in right):
            return x
    return None


def _first_unreached(
    left: Iterable[T], right: Iterable[T], related: Callable[[T, T], object]
) -> T | None:
    """First y in ``right`` with no x in ``left`` such that related(x, y)."""
    left = _ordered(left)
    for y in _ordered(right):
        if not any(related(x, y) for x in left):
            return y
    return None


def _set_relations(verdict, prefix, set_a, set_b, label):
    eq = f"{prefix}equivalent"
    sub = f"{prefix}restriction"
    verdict.holds[eq] = set_a == set_b
    if set_a != set_b:
        only_a = _ordered(set_a - set_b)
        if only_a:
            verdict.witnesses[eq] = Witness(f"only in {label}({verdict.a})", only_a[0])
        else:
            verdict.witnesses[eq] = Witness(
                f"only in {label}({verdict.b})", _ordered(set_b - set_a)[0]
            )
    verdict.holds[sub] = set_a < set_b
    if set_a == set_b:
        verdict.witnesses[sub] = Witness(f"{label}({verdict.a}) = {label}({verdict.b}), not a strict subset")
    elif not set_a <= set_b:
        verdict.witnesses[sub] = Witness(
            f"not in {label}({verdict.b})", _ordered(set_a - set_b)[0]
        )


def _specialized_relations(verdict, prefix, set_a, set_b, related, label):
    eq = f"{prefix}specialized-equivalent"
    sub = f"{prefix}specialized-restriction"

    def one_way(xs, ys, x_name, y_name):
        missing = _first_uncovered(xs, ys, related)
        if missing is not None:
            return Witness(f"no counterpart in {label}({y_name})", missing)
        extra = _first_unreached(xs, ys, related)
        if extra is not None:
            return Witness(f"not specialized by anything in {label}({x_name})", extra)
        return None

    a_to_b = one_way(set_a, set_b, verdict.a, verdict.b)
    b_to_a = one_way(set_b, set_a, verdict.b, verdict.a) if a_to_b is not None else None
    verdict.holds[eq] = a_to_b is None or b_to_a is None
    if a_to_b is None:
        verdict.direction[eq] = "a-of-b"
    elif b_to_a is None:
        verdict.direction[eq] = "b-of-a"
    else:
        verdict.witnesses[eq] = a_to_b

    missing = _first_uncovered(set_a, set_b, related)
    verdict.holds[sub] = missing is None
    if missing is not None:
        verdict.witnesses[sub] = Witness(f"no counterpart in {label}({verdict.b})", missing)


def compare_trace_sets(
    ont: Ontology,
    traces_a: frozenset[ProtocolTrace],
    traces_b: frozenset[ProtocolTrace],
    name_a: str = "A",
    name_b: str = "B",
) -> RelationVerdict:
    """All eight relations from precomputed trace sets."""
    verdict = RelationVerdict(name_a, name_b)
    _set_relations(verdict, "", traces_a, traces_b, "T")
    _specialized_relations(
        verdict, "", traces_a, traces_b, lambda t, s: trace_specializes(ont, t, s), "T"
    )
    shallow_a, shallow_b = abstract_set(traces_a), abstract_set(traces_b)
    _set_relations(verdict, "shallow-", shallow_a, shallow_b, "S")
    _specialized_relations(
        verdict,
        "shallow-",
        shallow_a,
        shallow_b,
        lambda t, s: shallow_trace_specializes(ont, t, s),
        "S",
    )

    rel = "shallow-specialized-equivalent"
    if verdict.holds[rel]:
        lhs, rhs = (shallow_a, shallow_b) if verdict.direction[rel] == "a-of-b" else (shallow_b, shallow_a)
        maps = []
        for t in _ordered(lhs):
            for s in _ordered(rhs):
                m = shallow_trace_specializes(ont, t, s)
                if m is not None:
                    maps.append(m)
                    break
        verdict.matchings[rel] = maps
    return verdict


def compare(
    a: Protocol, b: Protocol, ont: Ontology, registry: Mapping = DEFAULT_REGISTRY
) -> RelationVerdict:
    """Decide every relation between two acyclic protocols over the same two roles."""
    if set(a.roles) != set(b.roles):
        raise ProtocolError(
            f"cannot compare {a.name} (roles {', '.join(a.roles)}) with "
            f"{b.name} (roles {', '.join(b.roles)}): role names differ"
        )
    return compare_trace_sets(
        ont, trace_set(a, ont, registry), trace_set(b, ont, registry), a.name, b.name
    )

"""Protocol traces, trace sets and their time-abstracted multisets."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import FinalStateError
from .ontology import Ontology
from .protocol import Protocol, Run, enumerate_runs
from .semantics import (
    DEFAULT_REGISTRY,
    Fluent,
    FluentStore,
    apply_event,
    fluent_to_json,
    is_commitment,
)

__all__ = [
    "AbstractTraceMultiset",
    "ProtocolTrace",
    "abstract_set",
    "abstract_time",
    "fluent_to_json",
    "trace_of_run",
    "trace_set",
]


@dataclass(frozen=True)
class ProtocolTrace:
    """Stamped non-commitment fluents in ascending tick order."""

    entries: tuple[tuple[Fluent, int], ...] = ()

    def __post_init__(self):
        ticks = [t for _, t in self.entries]
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("trace ticks must strictly increase")
        if any(is_commitment(f) for f, _ in self.entries):
            raise ValueError("a protocol trace cannot contain commitments")

    @property
    def fluents(self) -> tuple[Fluent, ...]:
        return tuple(f for f, _ in self.entries)

    def normalized(self) -> ProtocolTrace:
        """Same fluents, ticks replaced by their ranks 1..n."""
        return ProtocolTrace(tuple((f, i) for i, (f, _) in enumerate(self.entries, start=1)))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fluent:
        return self.entries[i][0]

    def __str__(self) -> str:
        return "[" + ", ".join(f"({f}, {t})" for f, t in self.entries) + "]"

    def to_json(self) -> list[dict]:
        return [dict(fluent_to_json(f), rank=t) for f, t in self.entries]


@dataclass(frozen=True)
class AbstractTraceMultiset:
    """The fluents of a trace with ticks dropped, multiplicities kept."""

    items: frozenset[tuple[Fluent, int]] = frozenset()

    @classmethod
    def of(cls, fluents: Iterable[Fluent]) -> AbstractTraceMultiset:
        return cls(frozenset(Counter(fluents).items()))

    @property
    def counts(self) -> Counter:
        return Counter(dict(self.items))

    def elements(self) -> list[Fluent]:
        """Every element repeated by multiplicity, in a stable order."""
        out = []
        for fluent, n in sorted(self.items, key=lambda kv: str(kv[0])):
            out += [fluent] * n
        return out

    def __len__(self) -> int:
        return sum(n for _, n in self.items)

    def __str__(self) -> str:
        return "{" + ", ".join(str(f) for f in self.elements()) + "}"


def _final_store(run: Run, ont: Ontology, registry: Mapping) -> FluentStore:
    store = FluentStore()
    for ev in run.events:
        store = apply_event(store, ont, registry, ev)
    return store


def trace_of_run(
    p: Protocol,
    run: Run,
    ont: Ontology,
    registry: Mapping = DEFAULT_REGISTRY,
    normalize: bool = True,
) -> ProtocolTrace:
    """Replay ``run`` and read the trace off the final store."""
    store = _final_store(run, ont, registry)
    open_commitments = store.commitments()
    if open_commitments:
        final = run.transitions[-1].target if run.transitions else p.initial
        raise FinalStateError(
            f"{p.name}: run {run} ends in {final} with active commitments: "
            + ", ".join(f"{c}@t{store.tick_of(c)}" for c in open_commitments)
        )
    trace = ProtocolTrace(store.active)
    return trace.normalized() if normalize else trace


def trace_set(
    p: Protocol, ont: Ontology, registry: Mapping = DEFAULT_REGISTRY
) -> frozenset[ProtocolTrace]:
    """T(p): the normalized traces of every run of an acyclic protocol."""
    return frozenset(trace_of_run(p, run, ont, registry) for run in enumerate_runs(p))


def abstract_time(trace: ProtocolTrace) -> AbstractTraceMultiset:
    return AbstractTraceMultiset.of(trace.fluents)


def abstract_set(traces: Iterable[ProtocolTrace]) -> frozenset[AbstractTraceMultiset]:
    """S(p) computed from T(p)."""
    return frozenset(abstract_time(t) for t in traces)

"""Protocols as deterministic state transition systems over act classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from . import dsl
from .errors import (
    CommontError,
    CyclicProtocolError,
    Diagnostic,
    InvalidActError,
    ParseError,
    ProtocolError,
    SourceSpan,
)
from .ontology import Ontology
from .semantics import DEFAULT_REGISTRY, ActEvent, FluentStore, apply_event

__all__ = [
    "Protocol",
    "Run",
    "Transition",
    "ValidationReport",
    "enumerate_runs",
    "example_protocol",
    "is_acyclic",
    "load_protocol",
    "load_protocol_file",
    "simulate",
    "structural_findings",
    "validate",
]


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    act_class: str
    sender: str
    receiver: str

    @property
    def event(self) -> ActEvent:
        return ActEvent(self.act_class, self.sender, self.receiver)


@dataclass(frozen=True)
class Protocol:
    """A two-role protocol. ``states`` keeps declaration order."""

    name: str
    roles: tuple[str, str]
    states: tuple[str, ...]
    initial: str
    finals: frozenset[str]
    transitions: tuple[Transition, ...]
    # Where each state and transition was declared, when loaded from text.
    state_spans: Mapping[str, SourceSpan] = field(default_factory=dict, compare=False, repr=False)
    transition_spans: tuple[SourceSpan, ...] = field(default=(), compare=False, repr=False)

    def outgoing(self, state: str) -> list[Transition]:
        """Transitions leaving ``state``, ordered by act class name."""
        return sorted(
            (t for t in self.transitions if t.source == state),
            key=lambda t: (t.act_class, t.target),
        )

    def step(self, state: str, act_class: str) -> Transition | None:
        for t in self.transitions:
            if t.source == state and t.act_class == act_class:
                return t
        return None


@dataclass(frozen=True)
class Run:
    """A path from the initial state to a final state."""

    transitions: tuple[Transition, ...] = ()

    @property
    def events(self) -> tuple[ActEvent, ...]:
        return tuple(t.event for t in self.transitions)

    @property
    def acts(self) -> tuple[str, ...]:
        return tuple(t.act_class for t in self.transitions)

    def __len__(self) -> int:
        return len(self.transitions)

    def __str__(self) -> str:
        return "[" + ", ".join(self.acts) + "]"


def _reachable(p: Protocol) -> set[str]:
    seen = {p.initial}
    stack = [p.initial]
    while stack:
        state = stack.pop()
        for t in p.transitions:
            if t.source == state and t.target not in seen:
                seen.add(t.target)
                stack.append(t.target)
    return seen


def _coreachable(p: Protocol) -> set[str]:
    seen = set(p.finals)
    stack = list(p.finals)
    while stack:
        state = stack.pop()
        for t in p.transitions:
            if t.target == state and t.source not in seen:
                seen.add(t.source)
                stack.append(t.source)
    return seen


def is_acyclic(p: Protocol) -> bool:
    """True iff no cycle is reachable from the initial state."""
    reach = _reachable(p)
    indegree = dict.fromkeys(reach, 0)
    for t in p.transitions:
        if t.source in reach:
            indegree[t.target] += 1
    ready = [s for s, d in indegree.items() if d == 0]
    removed = 0
    while ready:
        state = ready.pop()
        removed += 1
        for t in p.transitions:
            if t.source == state:
                indegree[t.target] -= 1
                if indegree[t.target] == 0:
                    ready.append(t.target)
    return removed == len(reach)


def structural_findings(p: Protocol, ont: Ontology | None = None) -> list[Diagnostic]:
    """Every structural invariant breach of ``p`` (empty when well formed)."""
    out: list[Diagnostic] = []

    def err(message: str, code: str, span: SourceSpan | None = None) -> None:
        out.append(Diagnostic("error", span, message, code))

    def at_state(name: str) -> SourceSpan | None:
        return p.state_spans.get(name)

    def at_transition(i: int) -> SourceSpan | None:
        return p.transition_spans[i] if i < len(p.transition_spans) else None

    states = set(p.states)
    if len(p.roles) != 2 or p.roles[0] == p.roles[1]:
        err(f"a protocol needs two distinct roles, got {p.roles}", "E202")
    if p.initial not in states:
        err(f"initial state '{p.initial}' is not declared", "E205")
    if not p.finals:
        err("no final state", "E206")
    for f in sorted(p.finals - states):
        err(f"final state '{f}' is not declared", "E206")
    seen_labels: dict[tuple[str, str], str] = {}
    for i, t in enumerate(p.transitions):
        here = at_transition(i)
        for s in (t.source, t.target):
            if s not in states:
                err(f"transition {t.source} -> {t.target} names undeclared state '{s}'", "E207", here)
        for role in (t.sender, t.receiver):
            if role not in p.roles:
                err(f"transition on {t.act_class} uses unknown role '{role}'", "E208", here)
        if t.sender == t.receiver:
            err(f"transition on {t.act_class} has identical sender and receiver", "E209", here)
        if ont is not None and not ont.is_act(t.act_class):
            err(f"'{t.act_class}' is not a declared act class", "E301", here)
        key = (t.source, t.act_class)
        if key in seen_labels:
            err(
                f"state {t.source} has two transitions on {t.act_class} "
                f"(to {seen_labels[key]} and {t.target})",
                "E302",
                here,
            )
        else:
            seen_labels[key] = t.target
    if out:
        return out
    reach = _reachable(p)
    for s in p.states:
        if s not in reach:
            err(f"state '{s}' is unreachable from {p.initial}", "E303", at_state(s))
    coreach = _coreachable(p)
    for s in p.states:
        if s in reach and s not in coreach:
            err(f"no final state is reachable from '{s}'", "E304", at_state(s))
    return out


def _from_decl(decl: dsl.ProtocolDecl) -> Protocol:
    return Protocol(
        name=decl.name,
        roles=tuple(decl.roles),
        states=tuple(s.name for s in decl.states),
        initial=next(s.name for s in decl.states if s.initial),
        finals=frozenset(s.name for s in decl.states if s.final),
        transitions=tuple(
            Transition(t.source, t.target, t.act, t.sender, t.receiver) for t in decl.transitions
        ),
        state_spans={s.name: s.span for s in decl.states},
        transition_spans=tuple(t.span for t in decl.transitions),
    )


def load_protocol(
    source: str, ont: Ontology, filename: str = "<string>", check: bool = True
) -> Protocol:
    """Parse and check a protocol against ``ont``.

    Cycles are allowed here; operations that need the full trace set reject
    them later. With ``check=False`` only syntax errors raise, so that
    :func:`validate` can report the rest.
    """
    decl, diags = dsl.parse_protocol_file(source, filename)
    if diags:
        raise ParseError(f"{filename}: protocol source has errors", diags)
    p = _from_decl(decl)
    if not check:
        return p
    findings = structural_findings(p, ont)
    if findings:
        raise ProtocolError(f"{filename}: protocol '{p.name}' is malformed", findings)
    return p


def load_protocol_file(path: str | Path, ont: Ontology, check: bool = True) -> Protocol:
    return load_protocol(Path(path).read_text(encoding="utf-8"), ont, str(path), check)


EXAMPLE_PROTOCOLS = ("asktime", "p1", "p2")


def example_protocol_text(name: str) -> str:
    if name.lower() not in EXAMPLE_PROTOCOLS:
        raise ProtocolError(f"no bundled protocol '{name}' (have {', '.join(EXAMPLE_PROTOCOLS)})")
    return resources.files("commont").joinpath(f"data/{name.lower()}.sts").read_text(encoding="utf-8")


def example_protocol(name: str, ont: Ontology) -> Protocol:
    """One of the bundled protocols: ``asktime``, ``p1`` or ``p2``."""
    return load_protocol(example_protocol_text(name), ont, f"{name.lower()}.sts")


def _walk(p: Protocol, max_steps: int | None) -> Iterator[Run]:
    # Reaching a final state completes a run even if the state has successors.
    def visit(state: str, path: list[Transition]) -> Iterator[Run]:
        if state in p.finals:
            yield Run(tuple(path))
        if max_steps is not None and len(path) >= max_steps:
            return
        for t in p.outgoing(state):
            path.append(t)
            yield from visit(t.target, path)
            path.pop()

    yield from visit(p.initial, [])


def enumerate_runs(p: Protocol, max_steps: int | None = None) -> list[Run]:
    """All runs of ``p``, branches explored in act-class order.

    A cyclic protocol has infinitely many runs; it is only accepted when
    ``max_steps`` bounds the run length.
    """
    if max_steps is None and not is_acyclic(p):
        raise CyclicProtocolError(
            f"protocol '{p.name}' has a cycle; its runs cannot be enumerated "
            "exhaustively (bound them with max_steps for simulation)"
        )
    return list(_walk(p, max_steps))


def simulate(
    p: Protocol,
    ont: Ontology,
    acts: Sequence[str],
    registry: Mapping = DEFAULT_REGISTRY,
    max_steps: int | None = None,
) -> list[tuple[str, FluentStore]]:
    """Follow ``acts`` from the initial state; (state, store) before and after each act."""
    if max_steps is not None and len(acts) > max_steps:
        raise ProtocolError(f"run of {len(acts)} acts exceeds max_steps={max_steps}")
    state = p.initial
    store = FluentStore()
    steps = [(state, store)]
    for i, act in enumerate(acts, start=1):
        t = p.step(state, act)
        if t is None:
            allowed = [o.act_class for o in p.outgoing(state)]
            options = "{" + ", ".join(allowed) + "}" if allowed else "nothing (no outgoing transitions)"
            raise InvalidActError(
                f"step {i}: {act} is not allowed in state {state}; allowed: {options}",
                state,
                allowed,
            )
        state = t.target
        store = apply_event(store, ont, registry, t.event)
        steps.append((state, store))
    return steps


@dataclass
class RunCheck:
    run: Run
    final_store: FluentStore | None
    findings: list[Diagnostic] = field(default_factory=list)


@dataclass
class ValidationReport:
    protocol: str
    findings: list[Diagnostic] = field(default_factory=list)
    runs: list[RunCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.all_findings())

    def all_findings(self) -> list[Diagnostic]:
        return self.findings + [d for rc in self.runs for d in rc.findings]

    def __str__(self) -> str:
        lines = [f"protocol {self.protocol}: {'ok' if self.ok else 'violations found'}"]
        lines += [f"  {d}" for d in self.all_findings()]
        return "\n".join(lines)


def validate(p: Protocol, ont: Ontology, registry: Mapping = DEFAULT_REGISTRY) -> ValidationReport:
    """Structural checks plus a replay of every run against the final-state rule.

    Never raises; everything found goes into the report.
    """
    report = ValidationReport(p.name, structural_findings(p, ont))
    if any(d.severity == "error" for d in report.findings):
        return report
    if not is_acyclic(p):
        report.findings.append(
            Diagnostic("warning", None, "protocol has a cycle; runs were not checked", "W401")
        )
        return report
    for run in enumerate_runs(p):
        check = RunCheck(run, None)
        try:
            store = FluentStore()
            for ev in run.events:
                store = apply_event(store, ont, registry, ev)
        except CommontError as exc:
            check.findings.append(Diagnostic("error", None, f"run {run}: {exc}", "E402"))
        else:
            check.final_store = store
            final = run.transitions[-1].target if run.transitions else p.initial
            for c in store.commitments():
                check.findings.append(
                    Diagnostic(
                        "error",
                        None,
                        f"run {run}: active commitment at final state {final}: "
                        f"{c}@t{store.tick_of(c)}",
                        "E401",
                    )
                )
        report.runs.append(check)
    return report

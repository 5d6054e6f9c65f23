"""Commitment semantics of communication acts.

Each act class inherits an effect template from its closest registered
ancestor. Applying an act to a :class:`FluentStore` advances the logical
clock, applies the template, and then runs the two commitment rules to a
fixpoint:

* discharge: a base-level commitment ``C(x, y, p)`` ends when its debtor ``x``
  performs an act that initiates ``p``;
* promotion: a conditional commitment ``CC(x, y, c, p)`` whose condition ``c``
  holds is replaced by ``C(x, y, p)``, one tick later.

Matching everywhere is by subsumption over the content hierarchy, never by
plain equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union

from .errors import OntologyError, SemanticsError
from .ontology import Ontology, most_specific_semantic_ancestor

__all__ = [
    "Acceptance",
    "ActEvent",
    "Commitment",
    "ConditionalCommitment",
    "DEFAULT_REGISTRY",
    "Effects",
    "Fluent",
    "FluentStore",
    "Proposition",
    "apply_event",
    "effect_template",
    "fluent_to_json",
    "is_commitment",
    "matches",
    "replay",
]


@dataclass(frozen=True)
class Proposition:
    content: str

    kind = "Proposition"

    @property
    def roles(self) -> tuple[str, ...]:
        return ()

    def __str__(self) -> str:
        return self.content


@dataclass(frozen=True)
class Acceptance:
    signatory: str
    addressee: str
    object: str

    kind = "Acceptance"

    @property
    def roles(self) -> tuple[str, ...]:
        return (self.signatory, self.addressee)

    @property
    def content(self) -> str:
        return self.object

    def __str__(self) -> str:
        return f"accept({self.signatory},{self.addressee},{self.object})"


@dataclass(frozen=True)
class Commitment:
    debtor: str
    creditor: str
    condition: Proposition | Acceptance

    kind = "Commitment"

    def __post_init__(self):
        if not isinstance(self.condition, (Proposition, Acceptance)):
            raise TypeError("a commitment can only be about a proposition or an acceptance")

    @property
    def roles(self) -> tuple[str, ...]:
        return (self.debtor, self.creditor)

    def __str__(self) -> str:
        return f"C({self.debtor},{self.creditor},{self.condition})"


@dataclass(frozen=True)
class ConditionalCommitment:
    debtor: str
    creditor: str
    condition: Proposition | Acceptance
    conditioned_to: Proposition | Acceptance

    kind = "ConditionalCommitment"

    def __post_init__(self):
        for part in (self.condition, self.conditioned_to):
            if not isinstance(part, (Proposition, Acceptance)):
                raise TypeError("a commitment can only be about a proposition or an acceptance")

    @property
    def roles(self) -> tuple[str, ...]:
        return (self.debtor, self.creditor)

    def __str__(self) -> str:
        return f"CC({self.debtor},{self.creditor},{self.condition},{self.conditioned_to})"


Fluent = Union[Proposition, Acceptance, Commitment, ConditionalCommitment]


def is_commitment(fluent: Fluent) -> bool:
    return isinstance(fluent, (Commitment, ConditionalCommitment))


def fluent_to_json(fluent: Fluent) -> dict:
    out = {"kind": fluent.kind, "roles": list(fluent.roles)}
    if isinstance(fluent, (Proposition, Acceptance)):
        out["content"] = fluent.content
    else:
        out["condition"] = fluent_to_json(fluent.condition)
        if isinstance(fluent, ConditionalCommitment):
            out["conditioned_to"] = fluent_to_json(fluent.conditioned_to)
    return out


def matches(ont: Ontology, concrete: Fluent, pattern: Fluent) -> bool:
    """True iff ``concrete`` ⊑ ``pattern`` as fluents.

    Same kind, identical roles position by position, and every content class
    of ``concrete`` subsumed by the corresponding one of ``pattern``.
    """
    if type(concrete) is not type(pattern):
        return False
    if isinstance(concrete, Proposition):
        return _content_le(ont, concrete.content, pattern.content)
    if isinstance(concrete, Acceptance):
        return (
            concrete.signatory == pattern.signatory
            and concrete.addressee == pattern.addressee
            and _content_le(ont, concrete.object, pattern.object)
        )
    if concrete.debtor != pattern.debtor or concrete.creditor != pattern.creditor:
        return False
    if not matches(ont, concrete.condition, pattern.condition):
        return False
    if isinstance(concrete, ConditionalCommitment):
        return matches(ont, concrete.conditioned_to, pattern.conditioned_to)
    return True


def _content_le(ont: Ontology, specific: str, general: str) -> bool:
    if not ont.is_content(specific):
        raise OntologyError(f"unknown content class '{specific}'")
    if not ont.is_content(general):
        raise OntologyError(f"unknown content class '{general}'")
    return ont.subsumes(general, specific)


@dataclass(frozen=True)
class ActEvent:
    act_class: str
    sender: str
    receiver: str

    def __post_init__(self):
        if self.sender == self.receiver:
            raise ValueError(f"{self.act_class}: sender and receiver are both '{self.sender}'")

    def __str__(self) -> str:
        return f"{self.act_class}({self.sender}->{self.receiver})"


@dataclass(frozen=True)
class Effects:
    initiates: tuple[Fluent, ...] = ()
    terminates: tuple[Fluent, ...] = ()


EffectTemplate = Callable[[Ontology, ActEvent], Effects]


def _required(ont: Ontology, act: str, attribute: str, what: str) -> str:
    try:
        value = ont.inherited(act, attribute)
    except OntologyError as exc:
        raise SemanticsError(str(exc)) from None
    if value is None:
        raise SemanticsError(f"act class '{act}' has no {what}")
    return value


def request_effects(ont: Ontology, ev: ActEvent) -> Effects:
    p = _required(ont, ev.act_class, "content_class", "content class")
    s, r = ev.sender, ev.receiver
    return Effects(initiates=(ConditionalCommitment(r, s, Acceptance(r, s, p), Proposition(p)),))


def accept_effects(ont: Ontology, ev: ActEvent) -> Effects:
    p = _required(ont, ev.act_class, "content_class", "content class")
    return Effects(initiates=(Acceptance(ev.sender, ev.receiver, p),))


def assertive_effects(ont: Ontology, ev: ActEvent) -> Effects:
    p = _required(ont, ev.act_class, "content_class", "content class")
    return Effects(initiates=(Proposition(p),))


def commissive_effects(ont: Ontology, ev: ActEvent) -> Effects:
    p = _required(ont, ev.act_class, "content_class", "content class")
    c = _required(ont, ev.act_class, "condition", "condition annotation")
    return Effects(
        initiates=(ConditionalCommitment(ev.sender, ev.receiver, Proposition(c), Proposition(p)),)
    )


def responsive_effects(ont: Ontology, ev: ActEvent) -> Effects:
    p = _required(ont, ev.act_class, "content_class", "content class")
    replied = _required(ont, ev.act_class, "in_reply_to", "inReplyTo filler")
    asked = _required(ont, replied, "content_class", "content class")
    return Effects(
        initiates=(Proposition(p),),
        terminates=(Commitment(ev.sender, ev.receiver, Proposition(asked)),),
    )


DEFAULT_REGISTRY: Mapping[str, EffectTemplate] = {
    "Request": request_effects,
    "Accept": accept_effects,
    "Assertive": assertive_effects,
    "Commissive": commissive_effects,
    "Responsive": responsive_effects,
}


def effect_template(
    ont: Ontology, registry: Mapping[str, EffectTemplate], event: ActEvent
) -> tuple[list[Fluent], list[Fluent]]:
    """Initiated fluents and termination patterns of one act."""
    if not ont.is_act(event.act_class):
        raise SemanticsError(f"unknown act class '{event.act_class}'")
    owner = most_specific_semantic_ancestor(ont, event.act_class, registry)
    effects = registry[owner](ont, event)
    return list(effects.initiates), list(effects.terminates)


@dataclass(frozen=True)
class FluentStore:
    """Active fluents with the tick at which each was (last) initiated.

    ``active`` is kept in ascending tick order. The store is a value: every
    update returns a new one.
    """

    active: tuple[tuple[Fluent, int], ...] = ()
    clock: int = 0
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", dict(self.active))

    def __contains__(self, fluent: Fluent) -> bool:
        return fluent in self._index

    def __iter__(self):
        return iter(self.active)

    def __len__(self) -> int:
        return len(self.active)

    def tick_of(self, fluent: Fluent) -> int:
        return self._index[fluent]

    @property
    def fluents(self) -> list[Fluent]:
        return [f for f, _ in self.active]

    def commitments(self) -> list[Fluent]:
        return [f for f, _ in self.active if is_commitment(f)]

    def as_dict(self) -> dict[Fluent, int]:
        return dict(self._index)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{f}@t{t}" for f, t in self.active) + "}"


def _store(active: dict[Fluent, int], clock: int) -> FluentStore:
    ordered = sorted(active.items(), key=lambda kv: kv[1])
    return FluentStore(tuple(ordered), clock)


def apply_event(
    store: FluentStore,
    ont: Ontology,
    registry: Mapping[str, EffectTemplate],
    event: ActEvent,
) -> FluentStore:
    initiated, terminated = effect_template(ont, registry, event)
    clock = store.clock + 1
    active = store.as_dict()

    for pattern in terminated:
        for fluent in [f for f in active if matches(ont, pattern, f)]:
            del active[fluent]
    for fluent in initiated:
        active.pop(fluent, None)
        active[fluent] = clock

    changed = True
    while changed:
        changed = False
        for fluent in [f for f in active if isinstance(f, Commitment)]:
            if fluent.debtor == event.sender and any(
                matches(ont, g, fluent.condition) for g in initiated if not is_commitment(g)
            ):
                del active[fluent]
                changed = True
        pending = sorted(
            (item for item in active.items() if isinstance(item[0], ConditionalCommitment)),
            key=lambda kv: kv[1],
        )
        for cc, _ in pending:
            holding = [f for f in active if not is_commitment(f)]
            if any(matches(ont, f, cc.condition) for f in holding):
                del active[cc]
                clock += 1
                promoted = Commitment(cc.debtor, cc.creditor, cc.conditioned_to)
                active.pop(promoted, None)
                active[promoted] = clock
                changed = True
    return _store(active, clock)


def replay(
    events: Iterable[ActEvent],
    ont: Ontology,
    registry: Mapping[str, EffectTemplate] = DEFAULT_REGISTRY,
    start: FluentStore | None = None,
) -> list[FluentStore]:
    """Stores before the first act and after each act, in order."""
    stores = [start if start is not None else FluentStore()]
    for event in events:
        stores.append(apply_event(stores[-1], ont, registry, event))
    return stores

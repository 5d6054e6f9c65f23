"""Class hierarchies for communication acts and message contents.

Acts and contents live in two separate hierarchies sharing one namespace.
Subsumption is reflexive-transitive reachability over parent edges, so a
class may have any number of parents.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from . import dsl
from .errors import (
    AmbiguousSemanticsError,
    Diagnostic,
    OntologyError,
    ParseError,
    SemanticsError,
    SourceSpan,
    UnknownClassError,
)

__all__ = [
    "ActClass",
    "BUILTIN_ACTS",
    "CONTENT_ROOT",
    "ContentClass",
    "Ontology",
    "default_ontology",
    "load_ontology",
    "load_ontology_files",
    "most_specific_semantic_ancestor",
    "subsumes",
]

CONTENT_ROOT = "Content"

# name -> parents; the upper layer every ontology starts from.
BUILTIN_ACTS: dict[str, tuple[str, ...]] = {
    "CommunicationAct": (),
    "Assertive": ("CommunicationAct",),
    "Directive": ("CommunicationAct",),
    "Commissive": ("CommunicationAct",),
    "Expressive": ("CommunicationAct",),
    "Declarative": ("CommunicationAct",),
    "Request": ("Directive",),
    "Accept": ("Declarative",),
    "Responsive": ("Assertive",),
}


@dataclass(frozen=True)
class ContentClass:
    name: str
    parents: tuple[str, ...] = ()


@dataclass(frozen=True)
class ActClass:
    """An act class with the restrictions the engine reads from its axioms.

    ``content_class`` is the ``=1 hasContent`` filler, ``in_reply_to`` the
    ``inReplyTo`` filler and ``system_tag`` the ``theSystem`` filler.
    ``condition`` is only meaningful below ``Commissive``, where it names the
    content whose assertion triggers the promise.
    """

    name: str
    parents: tuple[str, ...] = ()
    content_class: str | None = None
    in_reply_to: str | None = None
    system_tag: str | None = None
    condition: str | None = None


class Ontology:
    """Immutable act and content hierarchies with precomputed closures.

    Build one with :func:`load_ontology` or :meth:`Ontology.build`; the
    constructor itself assumes already validated input.
    """

    CONTENT_ROOT = CONTENT_ROOT

    def __init__(
        self,
        act_classes: Mapping[str, ActClass],
        content_classes: Mapping[str, ContentClass],
        user_names: Iterable[str] = (),
    ):
        self._acts = dict(act_classes)
        self._contents = dict(content_classes)
        self._user = tuple(user_names)
        self._ancestors: dict[str, frozenset[str]] = {}
        for name in (*self._acts, *self._contents):
            self._closure(name)

    @classmethod
    def build(
        cls,
        acts: Iterable[ActClass] = (),
        contents: Iterable[ContentClass] = (),
    ) -> Ontology:
        decls: list = [dsl.ContentDecl(c.name, c.parents) for c in contents]
        decls += [
            dsl.ActDecl(
                a.name,
                a.parents,
                content=a.content_class,
                reply_to=a.in_reply_to,
                system=a.system_tag,
                condition=a.condition,
            )
            for a in acts
        ]
        return _from_declarations(decls)

    # -- lookup -------------------------------------------------------------

    @property
    def act_classes(self) -> Mapping[str, ActClass]:
        return self._acts

    @property
    def content_classes(self) -> Mapping[str, ContentClass]:
        return self._contents

    def user_act_classes(self) -> list[ActClass]:
        return [self._acts[n] for n in self._user if n in self._acts]

    def user_content_classes(self) -> list[ContentClass]:
        return [self._contents[n] for n in self._user if n in self._contents]

    def is_act(self, name: str) -> bool:
        return name in self._acts

    def is_content(self, name: str) -> bool:
        return name in self._contents

    def __contains__(self, name: str) -> bool:
        return name in self._acts or name in self._contents

    def act(self, name: str) -> ActClass:
        try:
            return self._acts[name]
        except KeyError:
            raise UnknownClassError(f"unknown act class '{name}'") from None

    def parents(self, name: str) -> tuple[str, ...]:
        if name in self._acts:
            return self._acts[name].parents
        if name in self._contents:
            return self._contents[name].parents
        raise UnknownClassError(f"unknown class '{name}'")

    def ancestors(self, name: str) -> frozenset[str]:
        """Reflexive ancestor set of ``name``."""
        try:
            return self._ancestors[name]
        except KeyError:
            raise UnknownClassError(f"unknown class '{name}'") from None

    def _closure(self, name: str) -> frozenset[str]:
        cached = self._ancestors.get(name)
        if cached is not None:
            return cached
        result = {name}
        for parent in self.parents(name):
            result |= self._closure(parent)
        frozen = frozenset(result)
        self._ancestors[name] = frozen
        return frozen

    def subsumes(self, general: str, specific: str) -> bool:
        """True iff ``specific`` ⊑ ``general``."""
        g_act, s_act = general in self._acts, specific in self._acts
        if not (g_act or general in self._contents):
            raise UnknownClassError(f"unknown class '{general}'")
        if not (s_act or specific in self._contents):
            raise UnknownClassError(f"unknown class '{specific}'")
        if g_act != s_act:
            raise OntologyError(
                f"'{general}' and '{specific}' belong to different hierarchies"
            )
        return general in self._ancestors[specific]

    def distances(self, name: str) -> dict[str, int]:
        """Shortest parent-edge distance from ``name`` to each ancestor."""
        dist = {name: 0}
        queue = deque([name])
        while queue:
            current = queue.popleft()
            for parent in self.parents(current):
                if parent not in dist:
                    dist[parent] = dist[current] + 1
                    queue.append(parent)
        return dist

    def inherited(self, act: str, attribute: str) -> str | None:
        """Most specific value of a class-valued restriction over ``act``'s ancestors.

        ``attribute`` is one of ``content_class``, ``condition``, ``in_reply_to``
        or ``system_tag``. Raises :class:`OntologyError` if two ancestors carry
        incomparable values and nothing more specific overrides them.
        """
        self.act(act)
        dist = self.distances(act)
        values: dict[str, int] = {}
        for anc, d in dist.items():
            value = getattr(self._acts[anc], attribute)
            if value is not None and (value not in values or d < values[value]):
                values[value] = d
        if not values:
            return None
        if attribute == "system_tag":
            return min(values, key=lambda v: (values[v], v))
        most_specific = [
            v for v in values if all(self.subsumes(w, v) for w in values)
        ]
        if len(most_specific) != 1:
            raise OntologyError(
                f"'{act}' inherits incomparable {attribute} values: "
                + ", ".join(sorted(values))
            )
        return most_specific[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return self._acts == other._acts and self._contents == other._contents

    def __repr__(self) -> str:
        return (
            f"Ontology({len(self._acts)} act classes, "
            f"{len(self._contents)} content classes)"
        )


def _builtin_acts() -> dict[str, ActClass]:
    return {name: ActClass(name, parents) for name, parents in BUILTIN_ACTS.items()}


def _from_declarations(decls: list) -> Ontology:
    diags: list[Diagnostic] = []

    def err(decl, message: str, code: str) -> None:
        diags.append(Diagnostic("error", decl.span, message, code))

    acts = _builtin_acts()
    contents = {CONTENT_ROOT: ContentClass(CONTENT_ROOT)}
    builtin = set(acts) | set(contents)
    user: list[str] = []
    spans: dict[str, SourceSpan | None] = {}
    for decl in decls:
        if decl.name in builtin:
            err(decl, f"'{decl.name}' is a built-in class and cannot be redeclared", "E106")
            continue
        if decl.name in spans:
            err(decl, f"duplicate class '{decl.name}'", "E006")
            continue
        spans[decl.name] = decl.span
        user.append(decl.name)
        if isinstance(decl, dsl.ContentDecl):
            contents[decl.name] = ContentClass(decl.name, decl.parents or (CONTENT_ROOT,))
        else:
            acts[decl.name] = ActClass(
                decl.name,
                decl.parents,
                content_class=decl.content,
                in_reply_to=decl.reply_to,
                system_tag=decl.system,
                condition=decl.condition,
            )

    by_name = {d.name: d for d in decls if d.name in spans}
    for name in user:
        decl = by_name[name]
        if name in acts:
            for parent in acts[name].parents:
                if parent not in acts:
                    kind = "a content class" if parent in contents else "undeclared"
                    err(decl, f"parent '{parent}' of act '{name}' is {kind}", "E101")
            cls = acts[name]
            for key, value in (("content", cls.content_class), ("condition", cls.condition)):
                if value is not None and value not in contents:
                    err(decl, f"{key}={value} does not name a content class", "E104")
            if cls.in_reply_to is not None and cls.in_reply_to not in acts:
                err(decl, f"replyto={cls.in_reply_to} does not name an act class", "E105")
        else:
            for parent in contents[name].parents:
                if parent not in contents:
                    kind = "an act class" if parent in acts else "undeclared"
                    err(decl, f"parent '{parent}' of content '{name}' is {kind}", "E101")
    if diags:
        raise OntologyError("invalid ontology", diags)

    cycle = _find_cycle({**{n: a.parents for n, a in acts.items()},
                         **{n: c.parents for n, c in contents.items()}})
    if cycle:
        first = by_name.get(cycle[0])
        diags.append(
            Diagnostic(
                "error",
                first.span if first else None,
                "cycle in class hierarchy: " + " -> ".join(cycle),
                "E102",
            )
        )
        raise OntologyError("invalid ontology", diags)

    ont = Ontology(acts, contents, user)
    for name in user:
        if name not in acts or acts[name].content_class is None:
            continue
        mine = acts[name].content_class
        for anc in ont.ancestors(name) - {name}:
            theirs = acts[anc].content_class
            if theirs is not None and not ont.subsumes(theirs, mine):
                err(
                    by_name[name],
                    f"content {mine} of '{name}' is not subsumed by content "
                    f"{theirs} of ancestor '{anc}'",
                    "E103",
                )
    if diags:
        raise OntologyError("invalid ontology", diags)
    return ont


def _find_cycle(graph: Mapping[str, tuple[str, ...]]) -> list[str] | None:
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(graph, WHITE)
    for root in graph:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(graph[root]))]
        path = [root]
        color[root] = GREY
        while stack:
            node, children = stack[-1]
            child = next(children, None)
            if child is None:
                color[node] = BLACK
                stack.pop()
                path.pop()
            elif color[child] == GREY:
                return path[path.index(child):] + [child]
            elif color[child] == WHITE:
                color[child] = GREY
                stack.append((child, iter(graph[child])))
                path.append(child)
    return None


def load_ontology(source: str, filename: str = "<string>") -> Ontology:
    """Parse and check one ontology source text."""
    return load_ontology_sources([(source, filename)])


def load_ontology_sources(sources: Iterable[tuple[str, str]]) -> Ontology:
    """Merge several ``(text, filename)`` sources into one ontology.

    Parents may live in any of the sources; a class declared in two sources
    is an error.
    """
    decls: list = []
    diags: list[Diagnostic] = []
    for text, filename in sources:
        file_decls, file_diags = dsl.parse_ontology_file(text, filename)
        decls += file_decls
        diags += file_diags
    if diags:
        raise ParseError("ontology source has syntax errors", diags)
    return _from_declarations(decls)


def load_ontology_files(*paths: str | Path) -> Ontology:
    return load_ontology_sources(
        (Path(p).read_text(encoding="utf-8"), str(p)) for p in paths
    )


def default_catalog_text() -> str:
    return resources.files("commont").joinpath("data/catalog.ont").read_text(encoding="utf-8")


def default_ontology() -> Ontology:
    """The bundled catalog: time, temperature and pulse acts plus their Aingeru variants."""
    return load_ontology(default_catalog_text(), "catalog.ont")


def subsumes(ont: Ontology, general: str, specific: str) -> bool:
    return ont.subsumes(general, specific)


def most_specific_semantic_ancestor(
    ont: Ontology, act: str, registry: Mapping[str, object]
) -> str:
    """Closest reflexive ancestor of ``act`` that has an effect template.

    Among registered ancestors at the minimal distance, one that is subsumed
    by all the others wins; otherwise the choice is ambiguous.
    """
    dist = ont.distances(ont.act(act).name)
    registered = {a: d for a, d in dist.items() if a in registry}
    if not registered:
        raise SemanticsError(f"no ancestor of '{act}' has registered semantics")
    nearest = min(registered.values())
    candidates = [a for a, d in registered.items() if d == nearest]
    best = [c for c in candidates if all(ont.subsumes(o, c) for o in candidates)]
    if len(best) != 1:
        raise AmbiguousSemanticsError(
            f"'{act}' inherits semantics from incomparable classes: "
            + ", ".join(sorted(candidates))
        )
    return best[0]

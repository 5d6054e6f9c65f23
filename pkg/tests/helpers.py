"""Random fixtures and brute-force oracles shared by the property tests.

The oracles deliberately avoid the package's own closures and matching code:
they walk declared parent lists directly.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from commont import (
    Acceptance,
    ActClass,
    ContentClass,
    Ontology,
    Proposition,
    Protocol,
    Transition,
)

SEGMENTS = {
    "time": ("TimeRequest", "TimeAccept", "TimeInform"),
    "temp": ("RequestTemp", "AcceptTemp", "TempInform"),
    "pulse": ("RequestPulse", "AcceptPulse", "PulseInform"),
    "a-temp": ("A-RequestTemp", "A-AcceptTemp", "A-TempInform"),
    "a-pulse": ("A-RequestPulse", "A-AcceptPulse", "A-PulseInform"),
}
SEGMENT_ROLES = (("A", "B"), ("B", "A"), ("B", "A"))


# -- oracles ----------------------------------------------------------------


def reach_oracle(parents: dict[str, tuple[str, ...]], general: str, specific: str) -> bool:
    """Plain DFS over parent edges."""
    stack, seen = [specific], set()
    while stack:
        node = stack.pop()
        if node == general:
            return True
        if node in seen:
            continue
        seen.add(node)
        stack.extend(parents[node])
    return False


def fluent_le_oracle(parents, f, g) -> bool:
    if type(f) is not type(g):
        return False
    if isinstance(f, Proposition):
        return reach_oracle(parents, g.content, f.content)
    return f.roles == g.roles and reach_oracle(parents, g.object, f.object)


def injective_map_oracle(parents, t: list, s: list) -> bool:
    """Try every injective assignment of t's elements to positions of s."""
    if len(t) > len(s):
        return False
    for image in itertools.permutations(range(len(s)), len(t)):
        if all(fluent_le_oracle(parents, f, s[j]) for f, j in zip(t, image)):
            return True
    return False


def run_count_oracle(p: Protocol) -> int:
    """Number of initial-to-final paths, counted by memoised recursion over successors."""
    succ: dict[str, list[str]] = {s: [] for s in p.states}
    for t in p.transitions:
        succ[t.source].append(t.target)

    @lru_cache(maxsize=None)
    def count(state: str) -> int:
        return int(state in p.finals) + sum(count(n) for n in succ[state])

    return count(p.initial)


# -- generators -------------------------------------------------------------


def random_hierarchy(rng: random.Random, n: int, prefix: str = "K") -> list[tuple[str, tuple[str, ...]]]:
    """A random DAG: class i draws up to two parents from earlier classes."""
    out = []
    for i in range(n):
        name = f"{prefix}{i}"
        k = rng.choice((0, 1, 1, 2)) if i else 0
        parents = tuple(sorted(rng.sample([c for c, _ in out], min(k, len(out)))))
        out.append((name, parents))
    return out


def content_ontology(rng: random.Random, n: int) -> Ontology:
    return Ontology.build(contents=[ContentClass(name, parents) for name, parents in random_hierarchy(rng, n)])


def random_act_ontology(rng: random.Random, max_classes: int = 20) -> Ontology:
    """Contents plus act classes under every templated root; at most ``max_classes`` user classes."""
    n_contents = rng.randint(2, max_classes // 2)
    n_acts = rng.randint(2, max_classes - n_contents)
    contents = random_hierarchy(rng, n_contents, "K")
    content_parents = {name: parents for name, parents in contents}

    def below(c: str) -> list[str]:
        return [d for d, _ in contents if reach_oracle(content_parents, c, d)]

    acts: list[ActClass] = []
    for i in range(n_acts):
        name = f"X{i}"
        requests = [a for a in acts if _root_of(acts, a) == "Request"]
        if acts and rng.random() < 0.35:
            parent = rng.choice(acts)
            content = rng.choice(below(parent.content_class))
            reply = parent.in_reply_to
            if reply is not None:
                reply = rng.choice([a.name for a in acts if _extends(acts, a, reply)])
            acts.append(ActClass(name, (parent.name,), content, reply, None, parent.condition))
            continue
        root = rng.choice(("Request", "Accept", "Responsive", "Assertive", "Commissive"))
        if root == "Responsive" and not requests:
            root = "Request"
        content = rng.choice(contents)[0]
        reply = rng.choice(requests).name if root == "Responsive" else None
        condition = rng.choice(contents)[0] if root == "Commissive" else None
        acts.append(ActClass(name, (root,), content, reply, None, condition))
    return Ontology.build(acts, [ContentClass(n, p) for n, p in contents])


def _root_of(acts: list[ActClass], act: ActClass) -> str:
    by_name = {a.name: a for a in acts}
    while act.parents[0] in by_name:
        act = by_name[act.parents[0]]
    return act.parents[0]


def _extends(acts: list[ActClass], act: ActClass, ancestor: str) -> bool:
    by_name = {a.name: a for a in acts}
    while True:
        if act.name == ancestor:
            return True
        if act.parents[0] not in by_name:
            return False
        act = by_name[act.parents[0]]


def random_protocol(rng: random.Random, act_names: list[str], max_states: int = 8, name: str = "R") -> Protocol:
    """Random acyclic, deterministic, trimmed protocol over roles A and B."""
    n = rng.randint(1, max_states)
    states = [f"S{i}" for i in range(n)]
    transitions: list[Transition] = []
    used: set[tuple[str, str]] = set()

    def add(i: int, j: int) -> bool:
        free = [a for a in act_names if (states[i], a) not in used]
        if not free:
            return False
        act = rng.choice(free)
        used.add((states[i], act))
        sender, receiver = rng.choice((("A", "B"), ("B", "A")))
        transitions.append(Transition(states[i], states[j], act, sender, receiver))
        return True

    for j in range(1, n):
        sources = list(range(j))
        rng.shuffle(sources)
        if not any(add(i, j) for i in sources):
            raise ValueError("alphabet too small for a connected protocol")
    for _ in range(rng.randint(0, n)):
        if n > 1:
            i = rng.randrange(n - 1)
            add(i, rng.randrange(i + 1, n))
    sources = {t.source for t in transitions}
    finals = {s for s in states if s not in sources}
    finals |= {s for s in states if rng.random() < 0.2}
    return Protocol(name, ("A", "B"), tuple(states), states[0], frozenset(finals), tuple(transitions))


def segment_protocol(rng: random.Random, name: str, n_arms: int | None = None) -> Protocol:
    """Branches of request/accept/inform segments over the default catalog, merged as a trie."""
    arms = set()
    for _ in range(n_arms or rng.randint(1, 3)):
        arms.add(tuple(rng.choice(list(SEGMENTS)) for _ in range(rng.randint(1, 2))))
    states = ["S0"]
    finals = set()
    transitions = []
    edges: dict[tuple[str, str], str] = {}
    for arm in sorted(arms):
        state = "S0"
        for seg in arm:
            for act, (snd, rcv) in zip(SEGMENTS[seg], SEGMENT_ROLES):
                key = (state, act)
                if key not in edges:
                    new = f"S{len(states)}"
                    states.append(new)
                    edges[key] = new
                    transitions.append(Transition(state, new, act, snd, rcv))
                state = edges[key]
        finals.add(state)
    return Protocol(name, ("A", "B"), tuple(states), "S0", frozenset(finals), tuple(transitions))


def random_fluent_multiset(rng: random.Random, classes: list[str], size: int) -> list:
    out = []
    for _ in range(size):
        c = rng.choice(classes)
        out.append(Proposition(c) if rng.random() < 0.6 else Acceptance("B", "A", c))
    return out

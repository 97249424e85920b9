"""Transition systems: configurations, legal moves, application and static oracles.

Three systems are provided: arc-eager and arc-standard (projective, stack +
buffer) and Covington's non-projective list-based system, where the stack
plays the role of the left list and ``aux`` holds the nodes already passed
over for the current buffer front.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .core import ROOT, Sentence, is_projective

SHIFT = "SHIFT"
REDUCE = "REDUCE"
LEFT_ARC = "LEFT-ARC"
RIGHT_ARC = "RIGHT-ARC"
NO_ARC = "NO-ARC"
ARC_KINDS = frozenset({LEFT_ARC, RIGHT_ARC})


class IllegalTransition(ValueError):
    pass


class NonProjectiveError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    kind: str
    label: Optional[str] = None

    def __post_init__(self):
        if (self.kind in ARC_KINDS) != (self.label is not None):
            raise ValueError(f"{self.kind}: label must be present iff the move adds an arc")

    def __str__(self):
        return self.kind if self.label is None else f"{self.kind}:{self.label}"

    @classmethod
    def parse(cls, text: str) -> "Transition":
        kind, _, label = text.strip().partition(":")
        return cls(kind.upper(), label or None)


@dataclass(frozen=True)
class Configuration:
    """Immutable parser state.

    ``heads``/``labels`` are indexed by node (entry 0 belongs to the root and
    stays empty); together they encode the arc set.
    """
    stack: tuple[int, ...]
    buffer: tuple[int, ...]
    heads: tuple[Optional[int], ...]
    labels: tuple[Optional[str], ...]
    aux: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.heads) - 1

    @property
    def arcs(self) -> frozenset:
        return frozenset((h, self.labels[d], d)
                         for d, h in enumerate(self.heads) if h is not None)

    def has_head(self, node: int) -> bool:
        return node != ROOT and self.heads[node] is not None

    def dependents(self, node: int) -> list[int]:
        return [d for d, h in enumerate(self.heads) if h == node]

    def leftmost_dependent(self, node: int) -> Optional[int]:
        for d, h in enumerate(self.heads):
            if h == node:
                return d
        return None

    def rightmost_dependent(self, node: int) -> Optional[int]:
        for d in range(len(self.heads) - 1, 0, -1):
            if self.heads[d] == node:
                return d
        return None

    def is_ancestor(self, anc: int, node: int) -> bool:
        """True if ``anc`` is reachable from ``node`` by following heads (reflexive)."""
        v: Optional[int] = node
        while v is not None:
            if v == anc:
                return True
            v = self.heads[v] if v != ROOT else None
        return False

    def with_arc(self, head: int, label: str, dep: int, **changes) -> "Configuration":
        if self.heads[dep] is not None:
            raise IllegalTransition(f"node {dep} already has a head")
        heads = list(self.heads)
        labels = list(self.labels)
        heads[dep] = head
        labels[dep] = label
        return Configuration(changes.get("stack", self.stack),
                             changes.get("buffer", self.buffer),
                             tuple(heads), tuple(labels),
                             changes.get("aux", self.aux))


def _empty_arcs(n: int):
    return (None,) * (n + 1), (None,) * (n + 1)


class _Gold:
    __slots__ = ("heads", "labels", "ndeps")

    def __init__(self, gold: Sentence):
        if not gold.is_annotated:
            raise ValueError("oracle requires a fully annotated sentence")
        self.heads = (None,) + tuple(t.head for t in gold.tokens)
        self.labels = (None,) + tuple(t.deprel for t in gold.tokens)
        ndeps = [0] * len(self.heads)
        for h in self.heads[1:]:
            ndeps[h] += 1
        self.ndeps = ndeps


def _attached_count(c: Configuration, node: int) -> int:
    return sum(1 for h in c.heads if h == node)


class TransitionSystem:
    name: str = ""
    kinds: tuple[str, ...] = ()
    handles_nonprojective = False

    def initial(self, sentence_or_n) -> Configuration:
        n = sentence_or_n if isinstance(sentence_or_n, int) else len(sentence_or_n)
        heads, labels = _empty_arcs(n)
        return Configuration((ROOT,), tuple(range(1, n + 1)), heads, labels)

    def legal(self, c: Configuration) -> frozenset:
        raise NotImplementedError

    def is_terminal(self, c: Configuration) -> bool:
        return not self.legal(c)

    def _apply(self, c: Configuration, t: Transition) -> Configuration:
        raise NotImplementedError

    def apply(self, c: Configuration, t: Transition) -> Configuration:
        if t.kind not in self.kinds:
            raise IllegalTransition(f"{t} is not a {self.name} transition")
        if t.kind not in self.legal(c):
            raise IllegalTransition(f"{t}: {self._violated(c, t.kind)}")
        return self._apply(c, t)

    def _violated(self, c: Configuration, kind: str) -> str:
        return f"{kind} precondition violated"

    def _check_gold(self, gold: Sentence):
        if not self.handles_nonprojective and not is_projective(gold):
            raise NonProjectiveError(f"non-projective sentence cannot be derived with {self.name}")

    def oracle(self, c: Configuration, gold: Sentence) -> Transition:
        self._check_gold(gold)
        return self._oracle(c, _Gold(gold))

    def _oracle(self, c: Configuration, g: _Gold) -> Transition:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class ArcEager(TransitionSystem):
    name = "arc-eager"
    kinds = (SHIFT, REDUCE, LEFT_ARC, RIGHT_ARC)

    def legal(self, c):
        moves = set()
        top = c.stack[-1] if c.stack else None
        if c.buffer:
            moves.add(SHIFT)
            if top is not None:
                moves.add(RIGHT_ARC)
                if top != ROOT and not c.has_head(top):
                    moves.add(LEFT_ARC)
        if top is not None and c.has_head(top):
            moves.add(REDUCE)
        # buffer exhausted: the parse is over even if REDUCE is still possible
        if not c.buffer:
            return frozenset()
        return frozenset(moves)

    def is_terminal(self, c):
        return not c.buffer

    def _violated(self, c, kind):
        if not c.buffer:
            return f"{kind} precondition: buffer is empty"
        if kind == REDUCE:
            return "REDUCE precondition: stack top has no head"
        if kind == LEFT_ARC:
            return "LEFT-ARC precondition: stack top is the root or already has a head"
        return f"{kind} precondition violated"

    def _apply(self, c, t):
        if t.kind == SHIFT:
            return Configuration(c.stack + c.buffer[:1], c.buffer[1:], c.heads, c.labels)
        if t.kind == REDUCE:
            return Configuration(c.stack[:-1], c.buffer, c.heads, c.labels)
        top, front = c.stack[-1], c.buffer[0]
        if t.kind == LEFT_ARC:
            return c.with_arc(front, t.label, top, stack=c.stack[:-1])
        return c.with_arc(top, t.label, front, stack=c.stack + (front,), buffer=c.buffer[1:])

    def _oracle(self, c, g):
        top = c.stack[-1]
        if c.buffer:
            front = c.buffer[0]
            if top != ROOT and g.heads[top] == front:
                return Transition(LEFT_ARC, g.labels[top])
            if g.heads[front] == top:
                return Transition(RIGHT_ARC, g.labels[front])
        if c.has_head(top) and _attached_count(c, top) == g.ndeps[top]:
            return Transition(REDUCE)
        return Transition(SHIFT)


class ArcStandard(TransitionSystem):
    name = "arc-standard"
    kinds = (SHIFT, LEFT_ARC, RIGHT_ARC)

    def legal(self, c):
        moves = set()
        if c.buffer:
            moves.add(SHIFT)
        if len(c.stack) >= 2:
            moves.add(RIGHT_ARC)
            if c.stack[-2] != ROOT:
                moves.add(LEFT_ARC)
        return frozenset(moves)

    def _violated(self, c, kind):
        if kind == SHIFT:
            return "SHIFT precondition: buffer is empty"
        if len(c.stack) < 2:
            return f"{kind} precondition: fewer than two stack items"
        return f"{kind} precondition: second stack item is the root"

    def _apply(self, c, t):
        if t.kind == SHIFT:
            return Configuration(c.stack + c.buffer[:1], c.buffer[1:], c.heads, c.labels)
        top, second = c.stack[-1], c.stack[-2]
        if t.kind == LEFT_ARC:
            return c.with_arc(top, t.label, second, stack=c.stack[:-2] + (top,))
        return c.with_arc(second, t.label, top, stack=c.stack[:-1])

    def _oracle(self, c, g):
        if len(c.stack) >= 2:
            top, second = c.stack[-1], c.stack[-2]
            if second != ROOT and g.heads[second] == top:
                return Transition(LEFT_ARC, g.labels[second])
            if g.heads[top] == second and _attached_count(c, top) == g.ndeps[top]:
                return Transition(RIGHT_ARC, g.labels[top])
        return Transition(SHIFT)


class Covington(TransitionSystem):
    """Non-projective list-based system.

    ``stack`` is the left list (top = the candidate left node), ``aux`` the
    nodes already compared with the buffer front; SHIFT concatenates both
    back in order and appends the front.
    """
    name = "covington"
    kinds = (SHIFT, NO_ARC, LEFT_ARC, RIGHT_ARC)
    handles_nonprojective = True

    def legal(self, c):
        if not c.buffer:
            return frozenset()
        moves = {SHIFT}
        if c.stack:
            i, j = c.stack[-1], c.buffer[0]
            moves.add(NO_ARC)
            if i != ROOT and not c.has_head(i) and not c.is_ancestor(i, j):
                moves.add(LEFT_ARC)
            if not c.has_head(j) and not c.is_ancestor(j, i):
                moves.add(RIGHT_ARC)
        return frozenset(moves)

    def is_terminal(self, c):
        return not c.buffer

    def _violated(self, c, kind):
        if not c.buffer:
            return f"{kind} precondition: buffer is empty"
        if not c.stack:
            return f"{kind} precondition: left list is empty"
        return f"{kind} precondition: target already has a head or the arc closes a cycle"

    def _apply(self, c, t):
        if t.kind == SHIFT:
            return Configuration(c.stack + c.aux + c.buffer[:1], c.buffer[1:],
                                 c.heads, c.labels, ())
        i, j = c.stack[-1], c.buffer[0]
        moved = dict(stack=c.stack[:-1], aux=(i,) + c.aux)
        if t.kind == NO_ARC:
            return Configuration(moved["stack"], c.buffer, c.heads, c.labels, moved["aux"])
        if t.kind == LEFT_ARC:
            return c.with_arc(j, t.label, i, **moved)
        return c.with_arc(i, t.label, j, **moved)

    def _oracle(self, c, g):
        if not c.stack:
            return Transition(SHIFT)
        i, j = c.stack[-1], c.buffer[0]
        if i != ROOT and g.heads[i] == j:
            return Transition(LEFT_ARC, g.labels[i])
        if g.heads[j] == i:
            return Transition(RIGHT_ARC, g.labels[j])
        for k in c.stack[:-1]:
            if g.heads[j] == k or (k != ROOT and g.heads[k] == j):
                return Transition(NO_ARC)
        return Transition(SHIFT)


SYSTEMS = {
    "arc-eager": ArcEager,
    "arc-standard": ArcStandard,
    "covington": Covington,
}
ALIASES = {
    "nivreeager": "arc-eager",
    "nivrestandard": "arc-standard",
    "covnonproj": "covington",
    "covington-nonprojective": "covington",
}


def get_system(name: str) -> TransitionSystem:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key not in SYSTEMS:
        raise ValueError(f"unknown transition system {name!r}")
    return SYSTEMS[key]()


def iter_oracle(gold: Sentence, system: TransitionSystem) -> Iterator[tuple[Configuration, Transition]]:
    """Yield (configuration, gold transition) pairs from the initial to a terminal state."""
    system._check_gold(gold)
    g = _Gold(gold)
    c = system.initial(gold)
    while not system.is_terminal(c):
        t = system._oracle(c, g)
        yield c, t
        c = system.apply(c, t)


def derive_sequence(gold: Sentence, system: TransitionSystem) -> list[Transition]:
    return [t for _, t in iter_oracle(gold, system)]


def replay(n: int, transitions: Sequence[Transition], system: TransitionSystem) -> Configuration:
    c = system.initial(n)
    for t in transitions:
        c = system.apply(c, t)
    return c


def extract_tree(c: Configuration, n: int, fallback_label: str) -> tuple[list[int], list[str]]:
    """Read heads and labels off a terminal configuration, repairing to a single-rooted tree.

    Unattached tokens go to node 0; every head-0 token after the first is
    then reattached to the first root token. Both repairs use ``fallback_label``.
    """
    heads: list[int] = []
    labels: list[str] = []
    for d in range(1, n + 1):
        h = c.heads[d]
        if h is None:
            heads.append(ROOT)
            labels.append(fallback_label)
        else:
            heads.append(h)
            labels.append(c.labels[d])
    roots = [d for d in range(1, n + 1) if heads[d - 1] == ROOT]
    for d in roots[1:]:
        heads[d - 1] = roots[0]
        labels[d - 1] = fallback_label
    return heads, labels

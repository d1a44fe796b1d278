"""ALC^N concept terms.

Concepts are immutable trees compared structurally. Every concept prints
itself in the ASCII concrete syntax accepted by the parser, so ``str(c)`` is
both the user-facing rendering and the key used to name normality atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple


class Concept:
    """Base class of concept terms."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)

    def __and__(self, other: "Concept") -> "And":
        return And(self, other)

    def __or__(self, other: "Concept") -> "Or":
        return Or(self, other)

    def __invert__(self) -> "Not":
        return Not(self)

    def children(self) -> tuple["Concept", ...]:
        return ()

    def walk(self) -> Iterator["Concept"]:
        """Yield this concept and all of its subterms, pre-order."""
        stack: list[Concept] = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children()))


@dataclass(frozen=True, slots=True)
class Top(Concept):
    pass


@dataclass(frozen=True, slots=True)
class Bottom(Concept):
    pass


@dataclass(frozen=True, slots=True)
class Atomic(Concept):
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("concept names must be non-empty")


@dataclass(frozen=True, slots=True)
class Not(Concept):
    operand: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.operand,)


@dataclass(frozen=True, slots=True)
class And(Concept):
    left: Concept
    right: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Or(Concept):
    left: Concept
    right: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Exists(Concept):
    role: str
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)


@dataclass(frozen=True, slots=True)
class Forall(Concept):
    role: str
    filler: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.filler,)


@dataclass(frozen=True, slots=True)
class Normal(Concept):
    """The normal (prototypical) instances of ``argument``."""

    argument: Concept

    def children(self) -> tuple[Concept, ...]:
        return (self.argument,)


TOP = Top()
BOTTOM = Bottom()


class Glyphs(NamedTuple):
    top: str
    bottom: str
    neg: str
    conj: str
    disj: str
    some: str
    only: str
    subsumed: str
    defeasible: str


PLAIN = Glyphs("Top", "Bot", "not ", " and ", " or ", "some ", "only ", "<=", "<~")
UNICODE = Glyphs("⊤", "⊥", "¬", " ⊓ ", " ⊔ ", "∃", "∀", "⊑", "⊑ₙ")


def _operand(concept: Concept, glyphs: Glyphs) -> str:
    text = render(concept, glyphs)
    if isinstance(concept, (And, Or)):
        return f"({text})"
    return text


def render(concept: Concept, glyphs: Glyphs = PLAIN) -> str:
    """Print a concept; binary operands are grouped whenever precedence could mislead a reader."""
    match concept:
        case Top():
            return glyphs.top
        case Bottom():
            return glyphs.bottom
        case Atomic(name):
            return name
        case Normal(argument):
            return f"N({render(argument, glyphs)})"
        case Not(operand):
            return glyphs.neg + _operand(operand, glyphs)
        case Exists(role, filler):
            return f"{glyphs.some}{role}.{_operand(filler, glyphs)}"
        case Forall(role, filler):
            return f"{glyphs.only}{role}.{_operand(filler, glyphs)}"
        case And(left, right):
            # left-associative chains print flat
            lhs = render(left, glyphs) if isinstance(left, And) else _operand(left, glyphs)
            return lhs + glyphs.conj + _operand(right, glyphs)
        case Or(left, right):
            lhs = render(left, glyphs) if isinstance(left, Or) else _operand(left, glyphs)
            return lhs + glyphs.disj + _operand(right, glyphs)
    raise TypeError(f"not a concept: {concept!r}")


def to_unicode(concept: Concept) -> str:
    return render(concept, UNICODE)


def conjunction(concepts: list[Concept]) -> Concept:
    """Left-nested conjunction; the empty conjunction is Top."""
    if not concepts:
        return TOP
    result = concepts[0]
    for concept in concepts[1:]:
        result = And(result, concept)
    return result

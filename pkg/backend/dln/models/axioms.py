"""Axioms: strict and defeasible inclusions, concept and role assertions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from dln.core.errors import SourceLocation
from dln.models.concepts import PLAIN, Concept, Glyphs, render


@dataclass(frozen=True, slots=True)
class StrictCI:
    lhs: Concept
    rhs: Concept
    location: Optional[SourceLocation] = field(default=None, compare=False, repr=False)

    def concepts(self) -> tuple[Concept, ...]:
        return (self.lhs, self.rhs)

    def __str__(self) -> str:
        return render_axiom(self)


@dataclass(frozen=True, slots=True)
class DefeasibleCI:
    """C <~ D: the normal instances of C are instances of D unless overridden."""

    lhs: Concept
    rhs: Concept
    rank: Optional[int] = None
    location: Optional[SourceLocation] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.rank is not None and self.rank < 0:
            raise ValueError("ranks must be non-negative integers")

    @property
    def pre(self) -> Concept:
        return self.lhs

    @property
    def con(self) -> Concept:
        return self.rhs

    def concepts(self) -> tuple[Concept, ...]:
        return (self.lhs, self.rhs)

    def __str__(self) -> str:
        return render_axiom(self)


@dataclass(frozen=True, slots=True)
class ConceptAssertion:
    individual: str
    concept: Concept
    location: Optional[SourceLocation] = field(default=None, compare=False, repr=False)

    def concepts(self) -> tuple[Concept, ...]:
        return (self.concept,)

    def __str__(self) -> str:
        return render_axiom(self)


@dataclass(frozen=True, slots=True)
class RoleAssertion:
    subject: str
    object: str
    role: str
    location: Optional[SourceLocation] = field(default=None, compare=False, repr=False)

    def concepts(self) -> tuple[Concept, ...]:
        return ()

    def __str__(self) -> str:
        return render_axiom(self)


Assertion = Union[ConceptAssertion, RoleAssertion]
Axiom = Union[StrictCI, DefeasibleCI, ConceptAssertion, RoleAssertion]


def render_axiom(axiom: Axiom, glyphs: Glyphs = PLAIN) -> str:
    match axiom:
        case StrictCI(lhs, rhs):
            return f"{render(lhs, glyphs)} {glyphs.subsumed} {render(rhs, glyphs)}"
        case DefeasibleCI(lhs, rhs, rank):
            arrow = glyphs.defeasible if rank is None else f"{glyphs.defeasible}[{rank}]"
            return f"{render(lhs, glyphs)} {arrow} {render(rhs, glyphs)}"
        case ConceptAssertion(individual, concept):
            return f"{individual} : {render(concept, glyphs)}"
        case RoleAssertion(subject, obj, role):
            return f"({subject}, {obj}) : {role}"
    raise TypeError(f"not an axiom: {axiom!r}")

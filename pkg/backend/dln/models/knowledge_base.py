"""Knowledge bases: the DL^N split KB = S ∪ D and its classical counterpart."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from dln.models.axioms import (
    Assertion,
    Axiom,
    ConceptAssertion,
    DefeasibleCI,
    RoleAssertion,
    StrictCI,
)
from dln.models.concepts import Normal


def _dedupe(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True, slots=True)
class KnowledgeBase:
    """A DL^N knowledge base.

    ``strong`` holds S (strict inclusions and assertions), ``defeasible``
    holds D. Input order of D is kept; it only breaks ties when the DIs are
    linearized.
    """

    strong: tuple[Axiom, ...] = ()
    defeasible: tuple[DefeasibleCI, ...] = ()

    def __post_init__(self) -> None:
        for axiom in self.strong:
            if isinstance(axiom, DefeasibleCI):
                raise TypeError("defeasible inclusions belong to the defeasible part")
        for axiom in self.defeasible:
            if not isinstance(axiom, DefeasibleCI):
                raise TypeError(f"not a defeasible inclusion: {axiom}")

    @classmethod
    def from_axioms(cls, axioms: Iterable[Axiom]) -> "KnowledgeBase":
        """Split axioms into S and D; duplicates collapse onto their first occurrence."""
        items = list(axioms)
        return cls(
            strong=_dedupe(a for a in items if not isinstance(a, DefeasibleCI)),
            defeasible=_dedupe(a for a in items if isinstance(a, DefeasibleCI)),
        )

    def with_axioms(self, *axioms: Axiom) -> "KnowledgeBase":
        """Return an extended copy; the receiver is left untouched."""
        return KnowledgeBase.from_axioms([*self.axioms(), *axioms])

    def axioms(self) -> Iterator[Axiom]:
        yield from self.strong
        yield from self.defeasible

    @property
    def tbox(self) -> tuple[StrictCI, ...]:
        return tuple(a for a in self.strong if isinstance(a, StrictCI))

    @property
    def abox(self) -> tuple[Assertion, ...]:
        return tuple(a for a in self.strong if isinstance(a, (ConceptAssertion, RoleAssertion)))

    def __len__(self) -> int:
        return len(self.strong) + len(self.defeasible)


@dataclass(frozen=True, slots=True)
class ClassicalKB:
    """A plain ALC knowledge base: no DIs, normality concepts already lowered to atoms."""

    tbox: tuple[StrictCI, ...] = ()
    abox: tuple[Assertion, ...] = ()

    def __post_init__(self) -> None:
        for axiom in (*self.tbox, *self.abox):
            if isinstance(axiom, DefeasibleCI):
                raise TypeError("classical knowledge bases contain no defeasible inclusions")
            for concept in axiom.concepts():
                if any(isinstance(sub, Normal) for sub in concept.walk()):
                    raise TypeError(f"normality concepts must be lowered first: {axiom}")

    @classmethod
    def from_axioms(cls, axioms: Iterable[Axiom]) -> "ClassicalKB":
        items = list(axioms)
        return cls(
            tbox=_dedupe(a for a in items if isinstance(a, StrictCI)),
            abox=_dedupe(a for a in items if isinstance(a, (ConceptAssertion, RoleAssertion))),
        )

    def axioms(self) -> Iterator[Axiom]:
        yield from self.tbox
        yield from self.abox

    def extended(self, *axioms: Axiom) -> "ClassicalKB":
        return ClassicalKB.from_axioms([*self.axioms(), *axioms])

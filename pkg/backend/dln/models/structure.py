"""Structural utilities over concepts, axioms and knowledge bases.

Negation normal form, signatures, normality-concept collection and the
lowering of ``Normal(C)`` to reserved atomic concepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional

from dln.constants import NORMALITY_ATOM_PREFIX
from dln.models.axioms import (
    Axiom,
    ConceptAssertion,
    DefeasibleCI,
    RoleAssertion,
    StrictCI,
)
from dln.models.concepts import (
    BOTTOM,
    TOP,
    And,
    Atomic,
    Bottom,
    Concept,
    Exists,
    Forall,
    Normal,
    Not,
    Or,
    Top,
)
from dln.models.knowledge_base import ClassicalKB, KnowledgeBase


def nnf(concept: Concept) -> Concept:
    """Push negations down to atoms; ``Normal(C)`` is opaque to negation but its argument is normalized."""
    match concept:
        case Top() | Bottom() | Atomic():
            return concept
        case Normal(argument):
            return Normal(nnf(argument))
        case And(left, right):
            return And(nnf(left), nnf(right))
        case Or(left, right):
            return Or(nnf(left), nnf(right))
        case Exists(role, filler):
            return Exists(role, nnf(filler))
        case Forall(role, filler):
            return Forall(role, nnf(filler))
        case Not(operand):
            return _negate(operand)
    raise TypeError(f"not a concept: {concept!r}")


def _negate(concept: Concept) -> Concept:
    match concept:
        case Top():
            return BOTTOM
        case Bottom():
            return TOP
        case Atomic():
            return Not(concept)
        case Normal(argument):
            return Not(Normal(nnf(argument)))
        case Not(operand):
            return nnf(operand)
        case And(left, right):
            return Or(_negate(left), _negate(right))
        case Or(left, right):
            return And(_negate(left), _negate(right))
        case Exists(role, filler):
            return Forall(role, _negate(filler))
        case Forall(role, filler):
            return Exists(role, _negate(filler))
    raise TypeError(f"not a concept: {concept!r}")


class Signature(NamedTuple):
    concepts: frozenset[str]
    roles: frozenset[str]
    individuals: frozenset[str]


def _names(axioms: Iterable[Axiom]) -> Signature:
    concepts: set[str] = set()
    roles: set[str] = set()
    individuals: set[str] = set()
    for axiom in axioms:
        if isinstance(axiom, ConceptAssertion):
            individuals.add(axiom.individual)
        elif isinstance(axiom, RoleAssertion):
            individuals.update((axiom.subject, axiom.object))
            roles.add(axiom.role)
        for concept in axiom.concepts():
            for sub in concept.walk():
                if isinstance(sub, Atomic):
                    concepts.add(sub.name)
                elif isinstance(sub, (Exists, Forall)):
                    roles.add(sub.role)
    return Signature(frozenset(concepts), frozenset(roles), frozenset(individuals))


def signature(kb: KnowledgeBase | ClassicalKB) -> Signature:
    """Concept, role and individual names occurring in ``kb``."""
    return _names(kb.axioms())


def axiom_signature(axiom: Axiom) -> Signature:
    return _names([axiom])


@dataclass(frozen=True)
class NormalitySet:
    """A finite set of normality concepts (Σ); iteration follows printed order."""

    concepts: frozenset[Normal] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for concept in self.concepts:
            if not isinstance(concept, Normal):
                raise TypeError(f"not a normality concept: {concept}")

    @classmethod
    def of(cls, concepts: Iterable[Normal]) -> "NormalitySet":
        return cls(frozenset(concepts))

    def __iter__(self) -> Iterator[Normal]:
        return iter(sorted(self.concepts, key=str))

    def __len__(self) -> int:
        return len(self.concepts)

    def __contains__(self, item: object) -> bool:
        return item in self.concepts

    def __or__(self, other: "NormalitySet") -> "NormalitySet":
        return NormalitySet(self.concepts | other.concepts)

    def __str__(self) -> str:
        return "{" + ", ".join(str(c) for c in self) + "}"


def _normal_subterms(axioms: Iterable[Axiom]) -> set[Normal]:
    found: set[Normal] = set()
    for axiom in axioms:
        for concept in axiom.concepts():
            found.update(sub for sub in concept.walk() if isinstance(sub, Normal))
    return found


def normality_concepts(kb: KnowledgeBase, query: Optional[Axiom] = None) -> NormalitySet:
    """Σ: every normality concept occurring in the KB or in the query (union reading)."""
    axioms = list(kb.axioms())
    if query is not None:
        axioms.append(query)
    return NormalitySet.of(_normal_subterms(axioms))


def contains_normal(concept: Concept) -> bool:
    return any(isinstance(sub, Normal) for sub in concept.walk())


def mentions_normality(kb: KnowledgeBase) -> bool:
    return bool(_normal_subterms(kb.axioms()))


def is_canonical(kb: KnowledgeBase) -> bool:
    """True iff no DI premise contains a normality concept."""
    return not any(contains_normal(di.pre) for di in kb.defeasible)


# Lowering ---------------------------------------------------------------------


def normality_atom_name(concept: Normal) -> str:
    """Reserved concept name standing for ``concept``; syntactically equal arguments share it."""
    return f"{NORMALITY_ATOM_PREFIX}{concept.argument})"


def normality_atom(concept: Normal) -> Atomic:
    return Atomic(normality_atom_name(concept))


def lower_concept(concept: Concept) -> Concept:
    match concept:
        case Top() | Bottom() | Atomic():
            return concept
        case Normal():
            return normality_atom(concept)
        case Not(operand):
            return Not(lower_concept(operand))
        case And(left, right):
            return And(lower_concept(left), lower_concept(right))
        case Or(left, right):
            return Or(lower_concept(left), lower_concept(right))
        case Exists(role, filler):
            return Exists(role, lower_concept(filler))
        case Forall(role, filler):
            return Forall(role, lower_concept(filler))
    raise TypeError(f"not a concept: {concept!r}")


def lower_axiom(axiom: Axiom) -> Axiom:
    match axiom:
        case StrictCI(lhs, rhs):
            return StrictCI(lower_concept(lhs), lower_concept(rhs), axiom.location)
        case ConceptAssertion(individual, concept):
            return ConceptAssertion(individual, lower_concept(concept), axiom.location)
        case RoleAssertion():
            return axiom
        case DefeasibleCI():
            raise TypeError("defeasible inclusions have no classical lowering; translate them first")
    raise TypeError(f"not an axiom: {axiom!r}")


def lower_strong(kb: KnowledgeBase) -> ClassicalKB:
    """The strong part S as a classical KB."""
    return ClassicalKB.from_axioms(lower_axiom(a) for a in kb.strong)

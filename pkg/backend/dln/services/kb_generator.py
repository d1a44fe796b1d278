"""Seeded random knowledge bases and axioms for property suites and sweeps."""

from __future__ import annotations

import random
from typing import List, Optional, Sequence

from dln.models import (
    BOTTOM,
    TOP,
    And,
    Atomic,
    Axiom,
    Concept,
    ConceptAssertion,
    DefeasibleCI,
    Exists,
    Forall,
    KnowledgeBase,
    Normal,
    Not,
    Or,
    RoleAssertion,
    StrictCI,
)
from dln.schemas.options import KBProfile

CONCEPT_NAMES = ("A", "B", "C", "D", "E", "F")
ROLE_NAMES = ("r", "s")
INDIVIDUAL_NAMES = ("a", "b", "c")


def random_concept(
    rng: random.Random,
    depth: int,
    names: Sequence[str] = CONCEPT_NAMES[:3],
    roles: Sequence[str] = ROLE_NAMES[:1],
    allow_normality: bool = False,
) -> Concept:
    """A concept of nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.05:
            return TOP
        if roll < 0.08:
            return BOTTOM
        atom = Atomic(rng.choice(names))
        return Not(atom) if roll < 0.3 else atom

    constructors = ["not", "and", "or"]
    if roles:
        constructors += ["some", "only"]
    if allow_normality:
        constructors.append("normal")
    choice = rng.choice(constructors)

    def sub() -> Concept:
        return random_concept(rng, depth - 1, names, roles, allow_normality)

    if choice == "not":
        return Not(sub())
    if choice == "and":
        return And(sub(), sub())
    if choice == "or":
        return Or(sub(), sub())
    if choice == "some":
        return Exists(rng.choice(roles), sub())
    if choice == "only":
        return Forall(rng.choice(roles), sub())
    return Normal(sub())


def _premise(rng: random.Random, names: Sequence[str]) -> Concept:
    first = Atomic(rng.choice(names))
    if rng.random() < 0.4:
        return And(first, Atomic(rng.choice(names)))
    return first


def random_axiom(
    rng: random.Random,
    depth: int = 5,
    names: Sequence[str] = CONCEPT_NAMES,
    roles: Sequence[str] = ROLE_NAMES,
    individuals: Sequence[str] = INDIVIDUAL_NAMES,
    allow_normality: bool = True,
) -> Axiom:
    """Any kind of axiom, concepts up to ``depth``; used by the round-trip suite."""

    def concept() -> Concept:
        return random_concept(rng, depth, names, roles, allow_normality)

    kind = rng.randrange(4)
    if kind == 0:
        return StrictCI(concept(), concept())
    if kind == 1:
        rank = rng.randrange(10) if rng.random() < 0.5 else None
        return DefeasibleCI(concept(), concept(), rank)
    if kind == 2 or not roles:
        return ConceptAssertion(rng.choice(individuals), concept())
    return RoleAssertion(rng.choice(individuals), rng.choice(individuals), rng.choice(roles))


def generate_random_kb(seed: int, profile: Optional[KBProfile] = None) -> KnowledgeBase:
    """A canonical KB, deterministic in ``seed``.

    DI premises are concept names or conjunctions of two names, so
    specificity relates some of them; normality concepts appear in strict
    axioms and DI conclusions only when the profile allows them.
    """
    profile = profile or KBProfile()
    rng = random.Random(seed)
    names = CONCEPT_NAMES[: profile.n_concepts]
    roles = ROLE_NAMES[: profile.n_roles]
    individuals = INDIVIDUAL_NAMES[: profile.n_individuals]

    def concept(depth: int = profile.max_depth) -> Concept:
        return random_concept(rng, depth, names, roles, profile.allow_normality)

    axioms: List[Axiom] = []
    for _ in range(profile.n_strong):
        axioms.append(StrictCI(_premise(rng, names), concept()))
    if individuals:
        for _ in range(profile.n_assertions):
            if roles and rng.random() < 0.3:
                axioms.append(RoleAssertion(rng.choice(individuals), rng.choice(individuals), rng.choice(roles)))
            else:
                axioms.append(ConceptAssertion(rng.choice(individuals), concept(1)))
    for _ in range(profile.n_dis):
        axioms.append(DefeasibleCI(_premise(rng, names), concept()))
    return KnowledgeBase.from_axioms(axioms)

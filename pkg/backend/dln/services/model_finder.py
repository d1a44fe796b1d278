"""Bounded finite-model search, an oracle independent of the tableau.

For each domain size ``n`` up to the bound, the interpretation of every
concept, role and individual name in the KB's signature is encoded as
propositional variables and handed to z3; a model found by the solver is
decoded into a :class:`FiniteInterpretation` and evaluated again in plain
Python by :func:`check_model`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

import z3

from dln.config import settings
from dln.models import (
    And,
    Atomic,
    Axiom,
    Bottom,
    ClassicalKB,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    Normal,
    Not,
    Or,
    RoleAssertion,
    StrictCI,
    Top,
    signature,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteInterpretation:
    """A finite interpretation: domain ``0..size-1`` plus name extensions."""

    size: int
    concepts: Mapping[str, FrozenSet[int]] = field(default_factory=dict)
    roles: Mapping[str, FrozenSet[Tuple[int, int]]] = field(default_factory=dict)
    individuals: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("the domain of an interpretation is non-empty")
        for name, element in self.individuals.items():
            if not 0 <= element < self.size:
                raise ValueError(f"individual {name} is mapped outside the domain")

    @property
    def domain(self) -> FrozenSet[int]:
        return frozenset(range(self.size))

    def extension(self, concept: Concept) -> FrozenSet[int]:
        """The set of elements satisfying ``concept``; names missing from the maps are empty."""
        match concept:
            case Top():
                return self.domain
            case Bottom():
                return frozenset()
            case Atomic(name):
                return frozenset(self.concepts.get(name, ()))
            case Not(operand):
                return self.domain - self.extension(operand)
            case And(left, right):
                return self.extension(left) & self.extension(right)
            case Or(left, right):
                return self.extension(left) | self.extension(right)
            case Exists(role, filler):
                inside = self.extension(filler)
                pairs = self.roles.get(role, ())
                return frozenset(d for d, e in pairs if e in inside)
            case Forall(role, filler):
                inside = self.extension(filler)
                pairs = self.roles.get(role, ())
                return self.domain - frozenset(d for d, e in pairs if e not in inside)
            case Normal():
                raise TypeError("normality concepts have no classical extension; lower them first")
        raise TypeError(f"not a concept: {concept!r}")

    def satisfies(self, axiom: Axiom) -> bool:
        match axiom:
            case StrictCI(lhs, rhs):
                return self.extension(lhs) <= self.extension(rhs)
            case ConceptAssertion(individual, concept):
                return individual in self.individuals and self.individuals[individual] in self.extension(concept)
            case RoleAssertion(subject, obj, role):
                if subject not in self.individuals or obj not in self.individuals:
                    return False
                pair = (self.individuals[subject], self.individuals[obj])
                return pair in self.roles.get(role, ())
        raise TypeError(f"{type(axiom).__name__} has no classical truth value")


def check_model(interpretation: FiniteInterpretation, kb: ClassicalKB) -> bool:
    """True iff ``interpretation`` satisfies every axiom of ``kb``."""
    return all(interpretation.satisfies(axiom) for axiom in kb.axioms())


class _Encoding:
    """Propositional encoding of interpretations over a domain of ``size`` elements."""

    def __init__(self, kb: ClassicalKB, size: int) -> None:
        self.size = size
        concepts, roles, individuals = signature(kb)
        self.concept_vars = {
            name: [z3.Bool(f"C[{name}][{d}]") for d in range(size)] for name in sorted(concepts)
        }
        self.role_vars = {
            name: [[z3.Bool(f"R[{name}][{d}][{e}]") for e in range(size)] for d in range(size)]
            for name in sorted(roles)
        }
        self.individual_vars = {
            name: [z3.Bool(f"I[{name}][{d}]") for d in range(size)] for name in sorted(individuals)
        }
        self._cache: Dict[Tuple[Concept, int], z3.BoolRef] = {}

    def holds(self, concept: Concept, d: int) -> z3.BoolRef:
        key = (concept, d)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        match concept:
            case Top():
                result = z3.BoolVal(True)
            case Bottom():
                result = z3.BoolVal(False)
            case Atomic(name):
                result = self.concept_vars[name][d]
            case Not(operand):
                result = z3.Not(self.holds(operand, d))
            case And(left, right):
                result = z3.And(self.holds(left, d), self.holds(right, d))
            case Or(left, right):
                result = z3.Or(self.holds(left, d), self.holds(right, d))
            case Exists(role, filler):
                edges = self.role_vars[role][d]
                result = z3.Or([z3.And(edges[e], self.holds(filler, e)) for e in range(self.size)])
            case Forall(role, filler):
                edges = self.role_vars[role][d]
                result = z3.And([z3.Implies(edges[e], self.holds(filler, e)) for e in range(self.size)])
            case _:
                raise TypeError(f"not a lowered concept: {concept}")
        self._cache[key] = result
        return result

    def constraints(self, kb: ClassicalKB) -> list:
        elements = range(self.size)
        formulas = [
            z3.PbEq([(var, 1) for var in placement], 1) for placement in self.individual_vars.values()
        ]
        for axiom in kb.axioms():
            match axiom:
                case StrictCI(lhs, rhs):
                    formulas.extend(z3.Implies(self.holds(lhs, d), self.holds(rhs, d)) for d in elements)
                case ConceptAssertion(individual, concept):
                    placement = self.individual_vars[individual]
                    formulas.extend(z3.Implies(placement[d], self.holds(concept, d)) for d in elements)
                case RoleAssertion(subject, obj, role):
                    formulas.extend(
                        z3.Implies(
                            z3.And(self.individual_vars[subject][d], self.individual_vars[obj][e]),
                            self.role_vars[role][d][e],
                        )
                        for d in elements
                        for e in elements
                    )
        return formulas

    def decode(self, model: z3.ModelRef) -> FiniteInterpretation:
        def true(var: z3.BoolRef) -> bool:
            return z3.is_true(model.eval(var, model_completion=True))

        elements = range(self.size)
        return FiniteInterpretation(
            size=self.size,
            concepts={
                name: frozenset(d for d in elements if true(vars_[d]))
                for name, vars_ in self.concept_vars.items()
            },
            roles={
                name: frozenset((d, e) for d in elements for e in elements if true(rows[d][e]))
                for name, rows in self.role_vars.items()
            },
            individuals={
                name: next(d for d in elements if true(vars_[d]))
                for name, vars_ in self.individual_vars.items()
            },
        )


def bounded_model_search(
    kb: ClassicalKB, max_domain: Optional[int] = None
) -> Optional[FiniteInterpretation]:
    """Find a model of ``kb`` with at most ``max_domain`` elements.

    Args:
        kb: A classical KB; normality atoms are ordinary concept names here.
        max_domain: Largest domain size tried; defaults to
            ``settings.MODEL_SEARCH_MAX_DOMAIN``, which is also its ceiling.

    Returns:
        The first model found, smallest domain first, or None when no model
        exists within the bound.

    Raises:
        ValueError: if ``max_domain`` is out of range.
    """
    ceiling = settings.MODEL_SEARCH_MAX_DOMAIN
    if max_domain is None:
        max_domain = ceiling
    if not 1 <= max_domain <= ceiling:
        raise ValueError(f"max_domain must be between 1 and {ceiling}")

    for size in range(1, max_domain + 1):
        encoding = _Encoding(kb, size)
        solver = z3.Solver()
        solver.add(*encoding.constraints(kb))
        if solver.check() == z3.sat:
            interpretation = encoding.decode(solver.model())
            logger.debug("model_found", extra={"domain_size": size})
            return interpretation
    return None

"""Tableau decision procedure for ALC knowledge bases with general TBoxes.

Every reasoning task is reduced to consistency of a completion graph:

- one root node per individual, plus an anonymous root for concept
  satisfiability and subsumption tests
- inclusions whose left side has an atomic conjunct ``A`` are absorbed:
  ``A and X <= D`` becomes the unfolding rule ``A -> not X or D``
- the remaining inclusions ``C <= D`` are added to every node as ``nnf(not C or D)``
- rules fire in the order and/only/unfolding, clash check, or, some
- every label entry carries the set of choice points it depends on; a clash
  backjumps to the latest choice point in its dependency set
- an anonymous node whose label is a subset of an ancestor's label is blocked

Normality atoms arrive already lowered to reserved concept names and get no
special treatment here.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from dln.config import settings
from dln.constants import LOG_EVENT_RESOURCE_LIMIT
from dln.core.errors import ResourceLimitExceeded
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
    Not,
    Or,
    RoleAssertion,
    StrictCI,
    Top,
    conjunction,
    contains_normal,
    nnf,
)
from dln.schemas.reports import ReasonerStats

logger = logging.getLogger(__name__)

_TOP, _BOTTOM, _ATOM, _NEGATED, _AND, _OR, _SOME, _ALL = range(8)


class _Terms:
    """Interned NNF terms: each distinct subconcept gets one integer id."""

    def __init__(self) -> None:
        self._index: Dict[tuple, int] = {}
        self.kind: List[int] = []
        self.first: List[object] = []
        self.second: List[object] = []
        self.top = self._intern(_TOP, None, None)

    def _intern(self, kind: int, first: object, second: object) -> int:
        key = (kind, first, second)
        term = self._index.get(key)
        if term is None:
            term = len(self.kind)
            self._index[key] = term
            self.kind.append(kind)
            self.first.append(first)
            self.second.append(second)
        return term

    def compile(self, concept: Concept) -> int:
        match concept:
            case Top():
                return self.top
            case Bottom():
                return self._intern(_BOTTOM, None, None)
            case Atomic(name):
                return self._intern(_ATOM, name, None)
            case Not(Atomic(name)):
                return self._intern(_NEGATED, name, None)
            case And(left, right):
                return self._intern(_AND, self.compile(left), self.compile(right))
            case Or(left, right):
                return self._intern(_OR, self.compile(left), self.compile(right))
            case Exists(role, filler):
                return self._intern(_SOME, role, self.compile(filler))
            case Forall(role, filler):
                return self._intern(_ALL, role, self.compile(filler))
        raise TypeError(f"not a lowered concept in negation normal form: {concept}")

    def complement(self, term: int) -> Optional[int]:
        kind = self.kind[term]
        if kind == _ATOM:
            return self._index.get((_NEGATED, self.first[term], None))
        if kind == _NEGATED:
            return self._index.get((_ATOM, self.first[term], None))
        return None


def _conjuncts(concept: Concept) -> List[Concept]:
    if isinstance(concept, And):
        return _conjuncts(concept.left) + _conjuncts(concept.right)
    if isinstance(concept, Top):
        return []
    return [concept]


def absorb(tbox: Sequence[StrictCI]) -> Tuple[List[Concept], Dict[str, List[Concept]]]:
    """Split inclusions into global constraints and unfolding rules keyed by concept name.

    Left sides are put in NNF first; disjunctive left sides split into one
    inclusion per disjunct.
    """
    general: List[Concept] = []
    unfolding: Dict[str, List[Concept]] = {}
    work = [(nnf(ci.lhs), ci.rhs) for ci in reversed(tbox)]
    while work:
        lhs, rhs = work.pop()
        if isinstance(lhs, Bottom):
            continue
        if isinstance(lhs, Or):
            work.append((lhs.right, rhs))
            work.append((lhs.left, rhs))
            continue
        conjuncts = _conjuncts(lhs)
        position = next((i for i, c in enumerate(conjuncts) if isinstance(c, Atomic)), None)
        if position is None:
            general.append(nnf(Or(Not(conjunction(conjuncts)), rhs)) if conjuncts else nnf(rhs))
            continue
        atom = conjuncts.pop(position)
        body = Or(Not(conjunction(conjuncts)), rhs) if conjuncts else rhs
        unfolding.setdefault(atom.name, []).append(nnf(body))
    return general, unfolding


@dataclass
class TableauNode:
    """A completion-graph node.

    ``label`` maps each term to its dependency set, a bitmask over choice
    points. ``deps`` is the dependency set of the existential that created the
    node; ``origin`` is the individual name of a root, None when anonymous.
    """

    label: Dict[int, int] = field(default_factory=dict)
    successors: Dict[str, List[int]] = field(default_factory=dict)
    parent: Optional[int] = None
    origin: Optional[str] = None
    deps: int = 0

    def copy(self) -> "TableauNode":
        return TableauNode(
            dict(self.label),
            {role: list(nodes) for role, nodes in self.successors.items()},
            self.parent,
            self.origin,
            self.deps,
        )


@dataclass
class _Branch:
    nodes: List[TableauNode] = field(default_factory=list)

    def copy(self) -> "_Branch":
        return _Branch([node.copy() for node in self.nodes])


@dataclass
class _Alternative:
    """The untried second disjunct of a choice point, over a snapshot taken before the choice."""

    branch: _Branch
    node: int
    disjunct: int
    deps: int
    level: int


_Pending = List[Tuple[int, int, int]]


class _Completion:
    """One tableau run over a fixed set of interned terms."""

    def __init__(
        self,
        terms: _Terms,
        inclusions: List[int],
        unfolding: Dict[int, List[int]],
        budget: int,
    ) -> None:
        self.terms = terms
        self.inclusions = inclusions
        self.unfolding = unfolding
        self.budget = budget
        self.levels = 0

    def new_node(
        self,
        branch: _Branch,
        pending: _Pending,
        parent: Optional[int] = None,
        origin: Optional[str] = None,
        deps: int = 0,
    ) -> int:
        if len(branch.nodes) >= self.budget:
            logger.warning(LOG_EVENT_RESOURCE_LIMIT, extra={"node_budget": self.budget})
            raise ResourceLimitExceeded(self.budget)
        index = len(branch.nodes)
        branch.nodes.append(TableauNode(parent=parent, origin=origin, deps=deps))
        pending.append((index, self.terms.top, deps))
        pending.extend((index, term, deps) for term in self.inclusions)
        return index

    def connect(self, branch: _Branch, source: int, role: str, target: int, pending: _Pending) -> None:
        terms = self.terms
        node = branch.nodes[source]
        node.successors.setdefault(role, []).append(target)
        edge = branch.nodes[target].deps
        for term, deps in node.label.items():
            if terms.kind[term] == _ALL and terms.first[term] == role:
                pending.append((target, terms.second[term], deps | edge))

    def conflict(self, label: Dict[int, int], term: int) -> Optional[int]:
        """Dependency set of the clash adding ``term`` would cause, None if there is none."""
        if self.terms.kind[term] == _BOTTOM:
            return 0
        partner = self.terms.complement(term)
        if partner is not None and partner in label:
            return label[partner]
        return None

    def saturate(self, branch: _Branch, pending: _Pending) -> Optional[int]:
        """Apply the deterministic rules; returns the clash's dependency set, None if clash-free."""
        terms = self.terms
        while pending:
            index, term, deps = pending.pop()
            node = branch.nodes[index]
            if term in node.label:
                continue
            clash = self.conflict(node.label, term)
            if clash is not None:
                pending.clear()
                return clash | deps
            node.label[term] = deps
            kind = terms.kind[term]
            if kind == _AND:
                pending.append((index, terms.second[term], deps))
                pending.append((index, terms.first[term], deps))
            elif kind == _ALL:
                for successor in node.successors.get(terms.first[term], ()):
                    pending.append((successor, terms.second[term], deps | branch.nodes[successor].deps))
            elif kind == _ATOM:
                pending.extend((index, body, deps) for body in self.unfolding.get(term, ()))
        return None

    def open_disjunction(self, branch: _Branch) -> Optional[Tuple[int, int]]:
        terms = self.terms
        for index, node in enumerate(branch.nodes):
            for term in node.label:
                if (
                    terms.kind[term] == _OR
                    and terms.first[term] not in node.label
                    and terms.second[term] not in node.label
                ):
                    return index, term
        return None

    def blocked(self, branch: _Branch, index: int) -> bool:
        label = branch.nodes[index].label.keys()
        ancestor = branch.nodes[index].parent
        while ancestor is not None:
            if label <= branch.nodes[ancestor].label.keys():
                return True
            ancestor = branch.nodes[ancestor].parent
        return False

    def generate(self, branch: _Branch, pending: _Pending) -> bool:
        """Create one successor for the first unsatisfied existential; False if none is left."""
        terms = self.terms
        for index, node in enumerate(branch.nodes):
            if node.parent is not None and self.blocked(branch, index):
                continue
            for term, deps in node.label.items():
                if terms.kind[term] != _SOME:
                    continue
                role, filler = terms.first[term], terms.second[term]
                if any(filler in branch.nodes[s].label for s in node.successors.get(role, ())):
                    continue
                successor = self.new_node(branch, pending, parent=index, deps=deps)
                self.connect(branch, index, role, successor, pending)
                pending.append((successor, filler, deps))
                return True
        return False

    def expand(self, branch: _Branch, pending: _Pending, alternatives: List[_Alternative]) -> Optional[int]:
        """Run ``branch`` to completion or to a clash; choice points go on ``alternatives``."""
        terms = self.terms
        while True:
            clash = self.saturate(branch, pending)
            if clash is not None:
                return clash
            choice = self.open_disjunction(branch)
            if choice is not None:
                index, term = choice
                label = branch.nodes[index].label
                deps = label[term]
                first, second = terms.first[term], terms.second[term]
                blocked_first = self.conflict(label, first)
                blocked_second = self.conflict(label, second)
                if blocked_first is not None and blocked_second is not None:
                    return deps | blocked_first | blocked_second
                if blocked_first is not None:
                    pending.append((index, second, deps | blocked_first))
                elif blocked_second is not None:
                    pending.append((index, first, deps | blocked_second))
                else:
                    level = self.levels
                    self.levels += 1
                    alternatives.append(_Alternative(branch.copy(), index, second, deps, level))
                    pending.append((index, first, deps | (1 << level)))
                continue
            if not self.generate(branch, pending):
                return None

    def run(self, branch: _Branch, pending: _Pending) -> bool:
        alternatives: List[_Alternative] = []
        while True:
            clash = self.expand(branch, pending, alternatives)
            if clash is None:
                return True
            while alternatives:
                alternative = alternatives.pop()
                if clash >> alternative.level & 1:
                    branch = alternative.branch
                    deps = alternative.deps | (clash & ~(1 << alternative.level))
                    pending = [(alternative.node, alternative.disjunct, deps)]
                    break
            else:
                return False


def _require_lowered(*concepts: Concept) -> None:
    for concept in concepts:
        if contains_normal(concept):
            raise ValueError(f"normality concepts must be lowered before classical reasoning: {concept}")


class ClassicalReasoner:
    """Sound and complete ALC reasoner with call counters.

    Counters are the only mutable state; they are updated under a lock so one
    reasoner can serve concurrent calls.
    """

    def __init__(self, node_budget: Optional[int] = None) -> None:
        self.node_budget = node_budget or settings.NODE_BUDGET
        self._lock = threading.Lock()
        self._consistency_checks = 0
        self._subsumption_checks = 0

    def stats(self) -> ReasonerStats:
        with self._lock:
            return ReasonerStats(
                consistency_checks=self._consistency_checks,
                subsumption_checks=self._subsumption_checks,
            )

    def reset_stats(self) -> None:
        with self._lock:
            self._consistency_checks = 0
            self._subsumption_checks = 0

    def _count(self, subsumption: bool = False) -> None:
        with self._lock:
            if subsumption:
                self._subsumption_checks += 1
            else:
                self._consistency_checks += 1

    def _consistent(
        self,
        kb: ClassicalKB,
        extra: Sequence[Tuple[Optional[str], Concept]] = (),
    ) -> bool:
        terms = _Terms()
        general, unfolding = absorb(kb.tbox)
        completion = _Completion(
            terms,
            [terms.compile(concept) for concept in general],
            {
                terms.compile(Atomic(name)): [terms.compile(body) for body in bodies]
                for name, bodies in unfolding.items()
            },
            self.node_budget,
        )
        branch = _Branch()
        pending: _Pending = []
        roots: Dict[str, int] = {}

        def root(name: str) -> int:
            if name not in roots:
                roots[name] = completion.new_node(branch, pending, origin=name)
            return roots[name]

        for assertion in kb.abox:
            if isinstance(assertion, ConceptAssertion):
                pending.append((root(assertion.individual), terms.compile(nnf(assertion.concept)), 0))
            else:
                root(assertion.subject)
                root(assertion.object)
        for individual, concept in extra:
            index = root(individual) if individual is not None else completion.new_node(branch, pending)
            pending.append((index, terms.compile(nnf(concept)), 0))
        if not branch.nodes:
            # domains are non-empty
            completion.new_node(branch, pending)
        for assertion in kb.abox:
            if isinstance(assertion, RoleAssertion):
                completion.connect(branch, roots[assertion.subject], assertion.role, roots[assertion.object], pending)
        return completion.run(branch, pending)

    def is_consistent(self, kb: ClassicalKB) -> bool:
        """True iff ``kb`` has a model."""
        self._count()
        return self._consistent(kb)

    def is_satisfiable(self, kb: ClassicalKB, concept: Concept) -> bool:
        """True iff some model of ``kb`` gives ``concept`` a non-empty extension."""
        _require_lowered(concept)
        self._count()
        return self._consistent(kb, [(None, concept)])

    def entails_subsumption(self, kb: ClassicalKB, sub: Concept, sup: Concept) -> bool:
        """kb |= sub <= sup, decided as unsatisfiability of ``sub and not sup``."""
        _require_lowered(sub, sup)
        self._count(subsumption=True)
        return not self._consistent(kb, [(None, And(sub, Not(sup)))])

    def entails_assertion(self, kb: ClassicalKB, assertion: Union[ConceptAssertion, RoleAssertion]) -> bool:
        """Instance checking.

        Role assertions cannot be negated in ALC: one is entailed iff it is
        present in ``kb`` or ``kb`` is inconsistent.
        """
        self._count()
        if isinstance(assertion, RoleAssertion):
            if assertion in kb.abox:
                return True
            return not self._consistent(kb)
        _require_lowered(assertion.concept)
        return not self._consistent(kb, [(assertion.individual, Not(assertion.concept))])

    def entails(self, kb: ClassicalKB, axiom: Axiom) -> bool:
        if isinstance(axiom, StrictCI):
            return self.entails_subsumption(kb, axiom.lhs, axiom.rhs)
        if isinstance(axiom, (ConceptAssertion, RoleAssertion)):
            return self.entails_assertion(kb, axiom)
        raise TypeError(f"classical entailment is not defined for {type(axiom).__name__}")

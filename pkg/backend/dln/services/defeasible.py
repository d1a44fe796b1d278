"""Defeasible reasoning by reduction to classical ALC.

A query α is entailed by ``KB = S ∪ D`` iff the classical knowledge base
KB^Σ entails it, where Σ collects the normality concepts of KB and α and
KB^Σ is built as follows:

1. start from S plus ``N(C) <= C`` for every ``N(C)`` in Σ
2. walk the DIs in a linearization of the priority order; for each DI δ
   and each ``N(C)`` in Σ, add ``N(C) and pre(δ) <= con(δ)`` unless,
   together with the axioms already added for strictly higher-priority
   DIs, it makes ``N(C)`` unsatisfiable (δ is then overridden in N(C))

Each step issues exactly |Σ| consistency checks, so a construction costs
|D|·|Σ| of them.
"""

from __future__ import annotations

import functools
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from dln.constants import (
    LOG_EVENT_DI_OVERRIDDEN,
    LOG_EVENT_PRIORITY_COMPUTED,
    LOG_EVENT_QUERY_ANSWERED,
    LOG_EVENT_REDUCTION_COMPLETE,
    PERFORMANCE_LOGGER,
    PRIORITY_RANK,
    PRIORITY_SPECIFICITY,
    REDUCTION_CACHE_SIZE,
    SPECIFICITY_CACHE_SIZE,
    WITNESS_INDIVIDUAL_PREFIX,
)
from dln.core.errors import MissingRankError, PreconditionError, PriorityOrderError
from dln.models import (
    BOTTOM,
    And,
    Atomic,
    Axiom,
    ClassicalKB,
    Concept,
    ConceptAssertion,
    DefeasibleCI,
    KnowledgeBase,
    Normal,
    NormalitySet,
    StrictCI,
    axiom_signature,
    lower_axiom,
    lower_concept,
    lower_strong,
    normality_atom,
    normality_concepts,
    signature,
)
from dln.schemas.options import ReasoningOptions
from dln.services.tableau import ClassicalReasoner

logger = logging.getLogger(__name__)
performance_logger = logging.getLogger(PERFORMANCE_LOGGER)


@dataclass(frozen=True)
class PriorityRelation:
    """A strict partial order over DIs; ``(d1, d2)`` in ``pairs`` means d1 has priority over d2."""

    mode: str
    pairs: frozenset = field(default_factory=frozenset)

    def precedes(self, first: DefeasibleCI, second: DefeasibleCI) -> bool:
        return (first, second) in self.pairs

    def validate(self) -> "PriorityRelation":
        """Raise PriorityOrderError unless the pairs form a strict partial order."""
        for first, second in self.pairs:
            if first == second:
                raise PriorityOrderError(f"priority relation is reflexive on {first}")
            if (second, first) in self.pairs:
                raise PriorityOrderError(f"priority relation is symmetric on {first} and {second}")
        successors: Dict[DefeasibleCI, set] = {}
        for first, second in self.pairs:
            successors.setdefault(first, set()).add(second)
        for first, middle in self.pairs:
            for last in successors.get(middle, ()):
                if (first, last) not in self.pairs:
                    raise PriorityOrderError(f"priority relation is not transitive on {first}, {middle}, {last}")
        return self


@dataclass(frozen=True)
class TranslatedDI:
    """δ^{N C}: the DI δ restricted to the normal instances N(C)."""

    di: DefeasibleCI
    normality: Normal
    lowered: StrictCI

    def __str__(self) -> str:
        return f"{self.di} [in {self.normality}]"


@dataclass(frozen=True)
class OverrideReason:
    """The failed check: ``axioms`` (filtered S^Σ plus the candidate) entail ``N(C) <= Bot``."""

    normality: Normal
    axioms: Tuple[Axiom, ...]

    @property
    def conclusion(self) -> StrictCI:
        return StrictCI(normality_atom(self.normality), BOTTOM)

    def __str__(self) -> str:
        return f"{self.conclusion} follows from {{{'; '.join(str(a) for a in self.axioms)}}}"


@dataclass(frozen=True)
class LedgerEntry:
    translated: TranslatedDI
    reason: Optional[OverrideReason] = None

    @property
    def kept(self) -> bool:
        return self.reason is None


@dataclass(frozen=True)
class ReductionResult:
    """KB^Σ and the ledger of every (DI, normality concept) decision, in construction order."""

    kb_sigma: ClassicalKB
    sigma: NormalitySet
    linearization: Tuple[DefeasibleCI, ...]
    decisions: Tuple[LedgerEntry, ...] = ()

    @property
    def selected(self) -> Tuple[TranslatedDI, ...]:
        return tuple(d.translated for d in self.decisions if d.kept)

    @property
    def overridden(self) -> Tuple[Tuple[TranslatedDI, OverrideReason], ...]:
        return tuple((d.translated, d.reason) for d in self.decisions if not d.kept)

    def partition(self) -> Tuple[frozenset, frozenset]:
        """(selected, overridden) as sets of (DI, normality concept) pairs."""
        kept = frozenset((t.di, t.normality) for t in self.selected)
        dropped = frozenset((t.di, t.normality) for t, _ in self.overridden)
        return kept, dropped


@dataclass(frozen=True)
class PrototypeReport:
    """Outcome of the inconsistent-prototype search.

    ``inconsistent`` and ``consistent`` partition the checked prototypes.
    ``unsatisfiable`` holds the inconsistent prototypes whose concept is
    already unsatisfiable w.r.t. S; the rest are the genuine ``conflicts``.
    """

    inconsistent: Tuple[Normal, ...] = ()
    consistent: Tuple[Normal, ...] = ()
    unsatisfiable: Tuple[Normal, ...] = ()

    @property
    def conflicts(self) -> Tuple[Normal, ...]:
        return tuple(n for n in self.inconsistent if n not in self.unsatisfiable)


# Linearization ----------------------------------------------------------------


def linearize(kb: KnowledgeBase, prio: PriorityRelation) -> Tuple[DefeasibleCI, ...]:
    """Order the DIs so that higher priority comes first; ties keep input order."""
    remaining = list(kb.defeasible)
    order: List[DefeasibleCI] = []
    while remaining:
        for candidate in remaining:
            if not any(prio.precedes(other, candidate) for other in remaining if other != candidate):
                order.append(candidate)
                remaining.remove(candidate)
                break
        else:
            raise PriorityOrderError("priority relation has a cycle")
    return tuple(order)


def all_linearizations(kb: KnowledgeBase, prio: PriorityRelation) -> Iterator[Tuple[DefeasibleCI, ...]]:
    """Every total order of the DIs compatible with ``prio``."""

    def extend(prefix: Tuple[DefeasibleCI, ...], remaining: Tuple[DefeasibleCI, ...]):
        if not remaining:
            yield prefix
            return
        for candidate in remaining:
            if any(prio.precedes(other, candidate) for other in remaining if other != candidate):
                continue
            rest = tuple(d for d in remaining if d != candidate)
            yield from extend(prefix + (candidate,), rest)

    yield from extend((), tuple(kb.defeasible))


def _check_linearization(kb: KnowledgeBase, prio: PriorityRelation, order: Sequence[DefeasibleCI]) -> None:
    if sorted(map(str, order)) != sorted(map(str, kb.defeasible)) or len(set(order)) != len(order):
        raise PriorityOrderError("linearization is not a permutation of the defeasible inclusions")
    for i, later in enumerate(order):
        for earlier in order[:i]:
            if prio.precedes(later, earlier):
                raise PriorityOrderError(f"linearization places {earlier} before {later}")


# Translation and filtering ----------------------------------------------------


def translate_di(di: DefeasibleCI, normality: Normal) -> TranslatedDI:
    """δ^{N C} = ``N(C) and pre(δ) <= con(δ)`` with normality concepts lowered."""
    lowered = StrictCI(
        And(normality_atom(normality), lower_concept(di.pre)),
        lower_concept(di.con),
        di.location,
    )
    return TranslatedDI(di, normality, lowered)


Stage = Union[Axiom, TranslatedDI]


def filter_higher_priority(
    stage: Iterable[Stage],
    di: DefeasibleCI,
    sigma: NormalitySet,
    prio: PriorityRelation,
) -> List[Stage]:
    """S′↓δ: drop every translated DI whose source does not have priority over ``di``.

    Plain axioms (S and the ``N(C) <= C`` axioms) are kept untouched.
    """
    kept: List[Stage] = []
    for item in stage:
        if isinstance(item, TranslatedDI):
            if item.normality not in sigma:
                raise ValueError(f"{item.normality} is not in {sigma}")
            if not prio.precedes(item.di, di):
                continue
        kept.append(item)
    return kept


def _classical(stage: Iterable[Stage]) -> ClassicalKB:
    return ClassicalKB.from_axioms(
        item.lowered if isinstance(item, TranslatedDI) else item for item in stage
    )


def _witness_name(concept: Concept, taken: set) -> str:
    stem = re.sub(r"[^A-Za-z0-9_]+", "_", str(concept)).strip("_") or "concept"
    name = f"{WITNESS_INDIVIDUAL_PREFIX}{stem}"
    suffix = 2
    while name in taken:
        name = f"{WITNESS_INDIVIDUAL_PREFIX}{stem}_{suffix}"
        suffix += 1
    return name


class DefeasibleReasoner:
    """Defeasible entailment over a :class:`ClassicalReasoner`.

    Specificity answers are memoized per (strong part, premise, premise) and
    ``n_entails`` reuses reductions per (KB, Σ, priority relation); both
    caches are bounded LRU caches owned by the instance.
    ``build_kb_sigma`` never caches, so each call issues its |D|·|Σ| checks.
    """

    def __init__(
        self,
        classical: Optional[ClassicalReasoner] = None,
        max_workers: Optional[int] = None,
    ) -> None:
        self.classical = classical or ClassicalReasoner()
        self.max_workers = max_workers
        self._specificity = functools.lru_cache(maxsize=SPECIFICITY_CACHE_SIZE)(self._decide_specificity)
        self._reduction = functools.lru_cache(maxsize=REDUCTION_CACHE_SIZE)(self.build_kb_sigma)

    # Priority -----------------------------------------------------------------

    def specificity(self, strong: Sequence[Axiom], first: DefeasibleCI, second: DefeasibleCI) -> bool:
        """True iff pre(first) is strictly more specific than pre(second) under ``strong``."""
        if first.pre == second.pre:
            return False
        base = ClassicalKB.from_axioms(lower_axiom(a) for a in strong)
        return self._specificity(base, first.pre, second.pre)

    def _decide_specificity(self, base: ClassicalKB, first: Concept, second: Concept) -> bool:
        sub, sup = lower_concept(first), lower_concept(second)
        return self.classical.entails_subsumption(base, sub, sup) and not self.classical.entails_subsumption(
            base, sup, sub
        )

    def priority_relation(self, kb: KnowledgeBase, mode: str = PRIORITY_SPECIFICITY) -> PriorityRelation:
        """Compute ≺ over D.

        Args:
            kb: The knowledge base.
            mode: ``specificity`` or ``rank``.

        Returns:
            A validated strict partial order.

        Raises:
            MissingRankError: if a DI has no rank in rank mode.
        """
        if mode == PRIORITY_RANK:
            for di in kb.defeasible:
                if di.rank is None:
                    raise MissingRankError(f"defeasible inclusion without rank in rank mode: {di}")
            pairs = frozenset(
                (d1, d2) for d1 in kb.defeasible for d2 in kb.defeasible if d1.rank < d2.rank
            )
        elif mode == PRIORITY_SPECIFICITY:
            pairs = frozenset(
                (d1, d2)
                for d1 in kb.defeasible
                for d2 in kb.defeasible
                if d1 != d2 and self.specificity(kb.strong, d1, d2)
            )
        else:
            raise ValueError(f"unknown priority mode: {mode}")
        relation = PriorityRelation(mode, pairs).validate()
        logger.debug(LOG_EVENT_PRIORITY_COMPUTED, extra={"mode": mode, "pairs": len(pairs)})
        return relation

    # Construction -------------------------------------------------------------

    def _check_all(self, kb: ClassicalKB, candidates: List[TranslatedDI]) -> List[bool]:
        def consistent(translated: TranslatedDI) -> bool:
            return self.classical.is_satisfiable(
                kb.extended(translated.lowered), normality_atom(translated.normality)
            )

        workers = self.max_workers or 1
        if workers > 1 and len(candidates) > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                return list(executor.map(consistent, candidates))
        return [consistent(t) for t in candidates]

    def build_kb_sigma(
        self,
        kb: KnowledgeBase,
        sigma: NormalitySet,
        prio: PriorityRelation,
        linearization: Optional[Sequence[DefeasibleCI]] = None,
    ) -> ReductionResult:
        """Build KB^Σ.

        Args:
            kb: The knowledge base.
            sigma: The normality concepts Σ.
            prio: A strict partial order over ``kb.defeasible``.
            linearization: An explicit order of the DIs; defaults to :func:`linearize`.

        Returns:
            ReductionResult with KB^Σ and every keep/override decision.
        """
        if linearization is None:
            order = linearize(kb, prio)
        else:
            order = tuple(linearization)
            _check_linearization(kb, prio, order)

        stage: List[Stage] = list(lower_strong(kb).axioms())
        stage.extend(StrictCI(normality_atom(n), lower_concept(n.argument)) for n in sigma)
        decisions: List[LedgerEntry] = []

        for di in order:
            filtered = filter_higher_priority(stage, di, sigma, prio)
            base = _classical(filtered)
            candidates = [translate_di(di, n) for n in sigma]
            outcomes = self._check_all(base, candidates)
            for translated, consistent in zip(candidates, outcomes):
                if consistent:
                    decisions.append(LedgerEntry(translated))
                    stage.append(translated)
                    continue
                reason = OverrideReason(translated.normality, (*base.axioms(), translated.lowered))
                decisions.append(LedgerEntry(translated, reason))
                logger.info(
                    LOG_EVENT_DI_OVERRIDDEN,
                    extra={"di": str(di), "normality": str(translated.normality)},
                )

        result = ReductionResult(_classical(stage), sigma, order, tuple(decisions))
        performance_logger.debug(
            LOG_EVENT_REDUCTION_COMPLETE,
            extra={
                "dis": len(order),
                "sigma": len(sigma),
                "overridden": len(result.overridden),
            },
        )
        return result

    # Entailment ---------------------------------------------------------------

    def prepare(self, kb: KnowledgeBase, options: ReasoningOptions, query: Optional[Axiom] = None) -> KnowledgeBase:
        """Apply the nonempty-prototype assumption to every classically consistent concept name."""
        if not options.assume_nonempty_prototypes:
            return kb
        names = set(signature(kb).concepts)
        if query is not None:
            names |= axiom_signature(query).concepts
        strong = lower_strong(kb)
        consistent = [
            Atomic(name) for name in sorted(names)
            if self.classical.is_satisfiable(strong, Atomic(name))
        ]
        return self.assume_nonempty_prototypes(kb, consistent)

    def n_entails(
        self,
        kb: KnowledgeBase,
        query: Axiom,
        options: Optional[ReasoningOptions] = None,
    ) -> Tuple[bool, ReductionResult]:
        """Decide KB |≈ query.

        Args:
            kb: The knowledge base.
            query: A strict inclusion or an assertion, possibly with normality concepts.
            options: Priority mode and the nonempty-prototype assumption.

        Returns:
            (entailed, reduction) where reduction is the KB^Σ the answer was read from.
        """
        if isinstance(query, DefeasibleCI):
            raise PreconditionError("defeasible inclusions cannot be queried")
        options = options or ReasoningOptions()
        kb = self.prepare(kb, options, query)
        sigma = normality_concepts(kb, query)
        prio = self.priority_relation(kb, options.priority_mode)
        result = self._reduction(kb, sigma, prio)
        entailed = self.classical.entails(result.kb_sigma, lower_axiom(query))
        logger.info(LOG_EVENT_QUERY_ANSWERED, extra={"query": str(query), "entailed": entailed})
        return entailed, result

    def entails(self, kb: KnowledgeBase, query: Axiom, options: Optional[ReasoningOptions] = None) -> bool:
        return self.n_entails(kb, query, options)[0]

    # Prototypes ---------------------------------------------------------------

    @staticmethod
    def default_candidates(kb: KnowledgeBase) -> List[Concept]:
        """Every concept name of the KB plus every normality argument occurring in it."""
        candidates: Dict[Concept, None] = {Atomic(name): None for name in sorted(signature(kb).concepts)}
        for n in normality_concepts(kb):
            candidates.setdefault(n.argument, None)
        return list(candidates)

    def inconsistent_prototypes(
        self,
        kb: KnowledgeBase,
        candidates: Optional[Iterable[Concept]] = None,
        options: Optional[ReasoningOptions] = None,
    ) -> PrototypeReport:
        """Partition the prototypes N(C) of the candidates by KB |≈ N(C) <= Bot."""
        options = options or ReasoningOptions()
        concepts = list(dict.fromkeys(candidates if candidates is not None else self.default_candidates(kb)))
        strong = lower_strong(kb)

        def classify(concept: Concept) -> Tuple[Normal, bool, bool]:
            prototype = Normal(concept)
            empty = self.entails(kb, StrictCI(prototype, BOTTOM), options)
            unsatisfiable = empty and not self.classical.is_satisfiable(strong, lower_concept(concept))
            return prototype, empty, unsatisfiable

        workers = self.max_workers or options.max_workers
        if workers > 1 and len(concepts) > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                outcomes = list(executor.map(classify, concepts))
        else:
            outcomes = [classify(c) for c in concepts]

        return PrototypeReport(
            inconsistent=tuple(p for p, empty, _ in outcomes if empty),
            consistent=tuple(p for p, empty, _ in outcomes if not empty),
            unsatisfiable=tuple(p for p, _, unsat in outcomes if unsat),
        )

    def assume_nonempty_prototypes(self, kb: KnowledgeBase, concepts: Iterable[Concept]) -> KnowledgeBase:
        """Assert a fresh witness ``aux_C : N(C)`` for each concept.

        Raises:
            PreconditionError: if some concept is unsatisfiable w.r.t. S.
        """
        concepts = list(dict.fromkeys(concepts))
        if not concepts:
            return kb
        strong = lower_strong(kb)
        taken = set(signature(kb).individuals)
        witnesses: List[Axiom] = []
        for concept in concepts:
            if not self.classical.is_satisfiable(strong, lower_concept(concept)):
                raise PreconditionError(f"{concept} is unsatisfiable w.r.t. the strong part")
            name = _witness_name(concept, taken)
            taken.add(name)
            witnesses.append(ConceptAssertion(name, Normal(concept)))
        return kb.with_axioms(*witnesses)

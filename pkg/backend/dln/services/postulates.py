"""Executable KLM rules for ALC^N.

Two families are checked:

- meta rules over axioms: REF, CT, CM, LLE, RW, with α and β classical
  axioms and γ any query
- internalized rules over normality concepts: REF_N, CT_N, CM_N, LLE_N,
  RW_N, OR_N, RM_N

An instance is a list of premise judgements and one conclusion judgement.
It holds when some premise fails or the conclusion is true; a failing
instance is kept as a :class:`Counterexample` that :func:`replay` re-runs.

Usage:
    from dln.services.postulates import check_internalized, sweep

    verdict = check_internalized(kb, "CM_N", Atomic("A"), Atomic("B"), Atomic("C"))
    summary = sweep("CT_N", range(200), KBProfile())
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from dln.config import settings
from dln.constants import (
    INTERNALIZED_RULES,
    LOG_EVENT_SWEEP_COMPLETE,
    META_RULES,
    PERFORMANCE_LOGGER,
    RESTRICTED_META_RULES,
    UNRESTRICTED_INTERNALIZED_RULES,
)
from dln.core.errors import PreconditionError
from dln.models import (
    And,
    Atomic,
    Axiom,
    ClassicalKB,
    Concept,
    ConceptAssertion,
    DefeasibleCI,
    KnowledgeBase,
    Normal,
    Not,
    Or,
    RoleAssertion,
    StrictCI,
    contains_normal,
    is_canonical,
    lower_axiom,
    lower_strong,
    mentions_normality,
    signature,
)
from dln.schemas.options import KBProfile
from dln.schemas.reports import ReasonerStats
from dln.services.defeasible import DefeasibleReasoner
from dln.services.kb_generator import generate_random_kb

logger = logging.getLogger(__name__)
performance_logger = logging.getLogger(PERFORMANCE_LOGGER)

DEFEASIBLE = "defeasible"
STRONG = "strong"
CLASSICAL = "classical"


@dataclass(frozen=True)
class Judgement:
    """One premise or conclusion of a rule instance.

    ``defeasible``: KB ∪ extra |≈ query. ``strong``: S ⊨ query.
    ``classical``: extra ⊨ query with no KB at all. ``expected`` False turns
    the judgement into a non-entailment.
    """

    query: Axiom
    extra: Tuple[Axiom, ...] = ()
    scope: str = DEFEASIBLE
    expected: bool = True

    def __str__(self) -> str:
        if self.scope == STRONG:
            left = "S"
        elif self.scope == CLASSICAL:
            left = "{" + ", ".join(map(str, self.extra)) + "}"
        elif self.extra:
            left = "KB + {" + ", ".join(map(str, self.extra)) + "}"
        else:
            left = "KB"
        if self.scope == DEFEASIBLE:
            turnstile = "|~" if self.expected else "|/~"
        else:
            turnstile = "|=" if self.expected else "|/="
        return f"{left} {turnstile} {self.query}"


@dataclass(frozen=True)
class PostulateInstance:
    name: str
    premises: Tuple[Judgement, ...]
    conclusion: Judgement

    def __str__(self) -> str:
        if not self.premises:
            return f"{self.name}: {self.conclusion}"
        return f"{self.name}: {' ; '.join(map(str, self.premises))} => {self.conclusion}"


@dataclass(frozen=True)
class Counterexample:
    kb: KnowledgeBase
    instance: PostulateInstance
    failing_query: Axiom


@dataclass(frozen=True)
class PostulateVerdict:
    holds: bool
    counterexample: Optional[Counterexample] = None

    def __post_init__(self) -> None:
        if self.holds == (self.counterexample is not None):
            raise ValueError("a verdict carries a counterexample exactly when it fails")


@dataclass(frozen=True)
class SweepSummary:
    rule: str
    kbs_checked: int = 0
    kbs_skipped: int = 0
    instances: int = 0
    instances_skipped: int = 0
    failures: int = 0
    counterexample: Optional[Counterexample] = None
    stats: ReasonerStats = field(default_factory=ReasonerStats)


# Instances ----------------------------------------------------------------------


def meta_instance(rule: str, alpha: Axiom, gamma: Axiom, beta: Optional[Axiom] = None) -> PostulateInstance:
    """Instantiate a meta rule; ``beta`` is used by LLE only, REF ignores ``gamma``."""
    if rule == "REF":
        return PostulateInstance(rule, (), Judgement(alpha))
    if rule == "CT":
        return PostulateInstance(rule, (Judgement(alpha), Judgement(gamma, (alpha,))), Judgement(gamma))
    if rule == "CM":
        return PostulateInstance(rule, (Judgement(alpha), Judgement(gamma)), Judgement(gamma, (alpha,)))
    if rule == "LLE":
        if beta is None:
            raise ValueError("LLE needs an equivalent axiom beta")
        return PostulateInstance(
            rule,
            (
                Judgement(gamma, (alpha,)),
                Judgement(beta, (alpha,), CLASSICAL),
                Judgement(alpha, (beta,), CLASSICAL),
            ),
            Judgement(gamma, (beta,)),
        )
    if rule == "RW":
        return PostulateInstance(rule, (Judgement(alpha), Judgement(gamma, (alpha,), CLASSICAL)), Judgement(gamma))
    raise ValueError(f"unknown meta rule: {rule}")


def internalized_instance(rule: str, c: Concept, d: Concept, e: Concept) -> PostulateInstance:
    """Instantiate an internalized rule; unused concepts are ignored (REF_N uses only ``c``)."""
    nc = Normal(c)
    if rule == "REF_N":
        return PostulateInstance(rule, (), Judgement(StrictCI(nc, c)))
    if rule == "CT_N":
        premises = (Judgement(StrictCI(nc, d)), Judgement(StrictCI(Normal(And(c, d)), e)))
        return PostulateInstance(rule, premises, Judgement(StrictCI(nc, e)))
    if rule == "CM_N":
        premises = (Judgement(StrictCI(nc, d)), Judgement(StrictCI(nc, e)))
        return PostulateInstance(rule, premises, Judgement(StrictCI(Normal(And(c, d)), e)))
    if rule == "LLE_N":
        premises = (
            Judgement(StrictCI(nc, e)),
            Judgement(StrictCI(c, d), scope=STRONG),
            Judgement(StrictCI(d, c), scope=STRONG),
        )
        return PostulateInstance(rule, premises, Judgement(StrictCI(Normal(d), e)))
    if rule == "RW_N":
        premises = (Judgement(StrictCI(nc, d)), Judgement(StrictCI(d, e), scope=STRONG))
        return PostulateInstance(rule, premises, Judgement(StrictCI(nc, e)))
    if rule == "OR_N":
        premises = (Judgement(StrictCI(nc, e)), Judgement(StrictCI(Normal(d), e)))
        return PostulateInstance(rule, premises, Judgement(StrictCI(Normal(Or(c, d)), e)))
    if rule == "RM_N":
        premises = (Judgement(StrictCI(nc, e)), Judgement(StrictCI(nc, Not(d)), expected=False))
        return PostulateInstance(rule, premises, Judgement(StrictCI(Normal(And(c, d)), e)))
    raise ValueError(f"unknown internalized rule: {rule}")


def _instance_prototypes(instance: PostulateInstance) -> List[Concept]:
    arguments: dict = {}
    for judgement in (*instance.premises, instance.conclusion):
        if judgement.scope != DEFEASIBLE:
            continue
        for concept in judgement.query.concepts():
            for sub in concept.walk():
                if isinstance(sub, Normal):
                    arguments.setdefault(sub.argument, None)
    return list(arguments)


# Evaluation ---------------------------------------------------------------------


def _holds(kb: KnowledgeBase, judgement: Judgement, reasoner: DefeasibleReasoner) -> bool:
    if judgement.scope == DEFEASIBLE:
        target = kb.with_axioms(*judgement.extra) if judgement.extra else kb
        entailed = reasoner.entails(target, judgement.query)
    elif judgement.scope == STRONG:
        entailed = reasoner.classical.entails(lower_strong(kb), lower_axiom(judgement.query))
    else:
        premises = ClassicalKB.from_axioms(lower_axiom(a) for a in judgement.extra)
        entailed = reasoner.classical.entails(premises, lower_axiom(judgement.query))
    return entailed == judgement.expected


def evaluate(
    kb: KnowledgeBase,
    instance: PostulateInstance,
    reasoner: Optional[DefeasibleReasoner] = None,
) -> PostulateVerdict:
    """Evaluate ``instance`` on ``kb`` without checking any precondition."""
    reasoner = reasoner or DefeasibleReasoner()
    for premise in instance.premises:
        if not _holds(kb, premise, reasoner):
            return PostulateVerdict(True)
    if _holds(kb, instance.conclusion, reasoner):
        return PostulateVerdict(True)
    return PostulateVerdict(False, Counterexample(kb, instance, instance.conclusion.query))


def replay(counterexample: Counterexample, reasoner: Optional[DefeasibleReasoner] = None) -> PostulateVerdict:
    """Re-run a failing instance on its KB."""
    return evaluate(counterexample.kb, counterexample.instance, reasoner)


def conflicts(
    kb: KnowledgeBase,
    concepts: Iterable[Concept],
    reasoner: Optional[DefeasibleReasoner] = None,
) -> Tuple[Normal, ...]:
    """Prototypes N(C) that are empty although C is satisfiable w.r.t. S."""
    reasoner = reasoner or DefeasibleReasoner()
    return reasoner.inconsistent_prototypes(kb, list(concepts)).conflicts


def _name_concepts(kb: KnowledgeBase) -> List[Concept]:
    return [Atomic(name) for name in sorted(signature(kb).concepts)]


def _require_classical(*axioms: Axiom) -> None:
    for axiom in axioms:
        if isinstance(axiom, DefeasibleCI) or any(contains_normal(c) for c in axiom.concepts()):
            raise PreconditionError(f"not a classical axiom: {axiom}")


def check_meta(
    kb: KnowledgeBase,
    rule: str,
    instance: PostulateInstance,
    reasoner: Optional[DefeasibleReasoner] = None,
) -> PostulateVerdict:
    """Check one instance of a meta rule.

    Args:
        kb: A canonical knowledge base.
        rule: One of REF, CT, CM, LLE, RW.
        instance: Built by :func:`meta_instance`.
        reasoner: Shared reasoner; a fresh one by default.

    Returns:
        The verdict on this instance.

    Raises:
        PreconditionError: if ``kb`` is not canonical, if α or β mention
            normality, or, for CT, CM and LLE, if some concept name of
            ``kb`` has a conflicting prototype.
    """
    if rule not in META_RULES:
        raise ValueError(f"unknown meta rule: {rule}")
    if instance.name != rule:
        raise ValueError(f"instance of {instance.name} checked as {rule}")
    reasoner = reasoner or DefeasibleReasoner()
    if not is_canonical(kb):
        raise PreconditionError("meta rules are checked on canonical knowledge bases only")
    for judgement in (*instance.premises, instance.conclusion):
        _require_classical(*judgement.extra)
        if judgement.scope == CLASSICAL and rule == "LLE":
            _require_classical(judgement.query)
    if rule == "REF":
        _require_classical(instance.conclusion.query)
    if rule in RESTRICTED_META_RULES:
        found = conflicts(kb, _name_concepts(kb), reasoner)
        if found:
            raise PreconditionError(f"{rule} needs a conflict-free KB; inconsistent prototypes: "
                                    + ", ".join(map(str, found)))
    return evaluate(kb, instance, reasoner)


def check_internalized(
    kb: KnowledgeBase,
    rule: str,
    c: Concept,
    d: Concept,
    e: Concept,
    enforce_preconditions: bool = True,
    reasoner: Optional[DefeasibleReasoner] = None,
) -> PostulateVerdict:
    """Check one instance of an internalized rule.

    Raises:
        PreconditionError: for CT_N, CM_N, LLE_N, OR_N and RM_N when ``kb``
            mentions normality or an instance prototype is conflicting;
            for every rule when c, d or e mention normality. Skipped when
            ``enforce_preconditions`` is False.
    """
    if rule not in INTERNALIZED_RULES:
        raise ValueError(f"unknown internalized rule: {rule}")
    reasoner = reasoner or DefeasibleReasoner()
    instance = internalized_instance(rule, c, d, e)
    if enforce_preconditions:
        for concept in (c, d, e):
            if contains_normal(concept):
                raise PreconditionError(f"rule concepts must be free of normality: {concept}")
        if rule not in UNRESTRICTED_INTERNALIZED_RULES:
            if mentions_normality(kb):
                raise PreconditionError(f"{rule} is checked on knowledge bases without normality concepts")
            found = conflicts(kb, _instance_prototypes(instance), reasoner)
            if found:
                raise PreconditionError(f"{rule} needs conflict-free prototypes; inconsistent: "
                                        + ", ".join(map(str, found)))
    return evaluate(kb, instance, reasoner)


# Enumeration --------------------------------------------------------------------


def instance_concepts(kb: KnowledgeBase) -> List[Concept]:
    """Concept names plus their pairwise conjunctions and disjunctions."""
    names = _name_concepts(kb)
    pool: List[Concept] = list(names)
    for i, first in enumerate(names):
        for second in names[i + 1:]:
            pool.append(And(first, second))
            pool.append(Or(first, second))
    return pool


def _equivalent_variant(rng: random.Random, concept: Concept) -> Concept:
    match rng.randrange(3):
        case 0:
            return And(concept, concept)
        case 1:
            return Not(Not(concept))
    if isinstance(concept, (And, Or)):
        return type(concept)(concept.right, concept.left)
    return Or(concept, concept)


def _equivalent_axiom(rng: random.Random, axiom: Axiom) -> Axiom:
    match axiom:
        case StrictCI(lhs, rhs):
            if rng.random() < 0.5:
                return StrictCI(_equivalent_variant(rng, lhs), rhs)
            return StrictCI(lhs, _equivalent_variant(rng, rhs))
        case ConceptAssertion(individual, concept):
            return ConceptAssertion(individual, _equivalent_variant(rng, concept))
    return axiom


def _weaker_axiom(rng: random.Random, axiom: Axiom, pool: Sequence[Concept]) -> Axiom:
    extra = rng.choice(pool)
    match axiom:
        case StrictCI(lhs, rhs):
            if rng.random() < 0.5:
                return StrictCI(lhs, Or(rhs, extra))
            return StrictCI(And(lhs, extra), rhs)
        case ConceptAssertion(individual, concept):
            return ConceptAssertion(individual, Or(concept, extra))
    return axiom


def _classical_axioms(rng: random.Random, kb: KnowledgeBase, pool: Sequence[Concept], count: int) -> List[Axiom]:
    individuals = sorted(signature(kb).individuals)
    axioms: List[Axiom] = [a for a in kb.strong if not isinstance(a, RoleAssertion)]
    for _ in range(count):
        if individuals and rng.random() < 0.3:
            axioms.append(ConceptAssertion(rng.choice(individuals), rng.choice(pool)))
        else:
            axioms.append(StrictCI(rng.choice(pool), rng.choice(pool)))
    return axioms


def _queries(rng: random.Random, kb: KnowledgeBase, pool: Sequence[Concept], count: int) -> List[Axiom]:
    individuals = sorted(signature(kb).individuals)
    queries: List[Axiom] = []
    for _ in range(count):
        roll = rng.random()
        if individuals and roll < 0.2:
            queries.append(ConceptAssertion(rng.choice(individuals), rng.choice(pool)))
        elif roll < 0.35:
            queries.append(StrictCI(rng.choice(pool), rng.choice(pool)))
        else:
            queries.append(StrictCI(Normal(rng.choice(pool)), rng.choice(pool)))
    return queries


def meta_instances(rule: str, kb: KnowledgeBase, rng: random.Random, limit: int) -> List[PostulateInstance]:
    pool = instance_concepts(kb)
    if not pool:
        return []
    if rule == "REF":
        return [meta_instance(rule, alpha, alpha) for alpha in kb.strong[:limit]]
    alphas = _classical_axioms(rng, kb, pool, limit)
    gammas = _queries(rng, kb, pool, limit)
    instances = []
    for _ in range(limit):
        alpha = rng.choice(alphas)
        if rule == "LLE":
            instances.append(meta_instance(rule, alpha, rng.choice(gammas), _equivalent_axiom(rng, alpha)))
        elif rule == "RW":
            instances.append(meta_instance(rule, alpha, _weaker_axiom(rng, alpha, pool)))
        else:
            instances.append(meta_instance(rule, alpha, rng.choice(gammas)))
    return instances


def internalized_instances(rule: str, kb: KnowledgeBase, rng: random.Random, limit: int) -> List[PostulateInstance]:
    pool = instance_concepts(kb)
    if not pool:
        return []
    targets = pool + [Not(c) for c in _name_concepts(kb)]
    if rule == "REF_N":
        return [internalized_instance(rule, c, c, c) for c in pool[:limit]]
    instances = []
    for _ in range(limit):
        c, d, e = rng.choice(pool), rng.choice(targets), rng.choice(targets)
        if rule == "LLE_N":
            d = _equivalent_variant(rng, c)
        elif rule == "RW_N" and rng.random() < 0.5:
            e = Or(d, rng.choice(pool))
        elif rule in ("OR_N", "CT_N", "CM_N", "RM_N"):
            d = rng.choice(pool)
        instances.append(internalized_instance(rule, c, d, e))
    return instances


# Sweeps -------------------------------------------------------------------------


@dataclass
class _KBOutcome:
    checked: bool
    instances: int = 0
    skipped: int = 0
    failures: int = 0
    counterexample: Optional[Counterexample] = None


def _sweep_one(rule: str, seed: int, profile: KBProfile, reasoner: DefeasibleReasoner) -> _KBOutcome:
    kb = generate_random_kb(seed, profile)
    rng = random.Random(f"{rule}:{seed}")
    limit = profile.instances_per_kb
    restricted = rule in RESTRICTED_META_RULES or (
        rule in INTERNALIZED_RULES and rule not in UNRESTRICTED_INTERNALIZED_RULES
    )
    if restricted and conflicts(kb, _name_concepts(kb), reasoner):
        logger.debug("sweep_kb_skipped", extra={"rule": rule, "seed": seed})
        return _KBOutcome(checked=False)

    if rule in META_RULES:
        instances = meta_instances(rule, kb, rng, limit)
    else:
        instances = internalized_instances(rule, kb, rng, limit)

    outcome = _KBOutcome(checked=True)
    for instance in instances:
        if restricted and rule in INTERNALIZED_RULES and conflicts(kb, _instance_prototypes(instance), reasoner):
            outcome.skipped += 1
            continue
        outcome.instances += 1
        verdict = evaluate(kb, instance, reasoner)
        if not verdict.holds:
            outcome.failures += 1
            if outcome.counterexample is None:
                outcome.counterexample = verdict.counterexample
    return outcome


def sweep(
    rule: str,
    seeds: Iterable[int],
    profile: Optional[KBProfile] = None,
    reasoner: Optional[DefeasibleReasoner] = None,
    max_workers: Optional[int] = None,
) -> SweepSummary:
    """Check ``rule`` on the KBs generated from ``seeds``.

    KBs with a conflicting prototype among their concept names are skipped
    for the restricted rules, as are single internalized instances whose
    own prototypes conflict.

    Raises:
        PreconditionError: if a restricted internalized rule is swept with a
            profile that allows normality concepts in the KB.
    """
    if rule not in META_RULES and rule not in INTERNALIZED_RULES:
        raise ValueError(f"unknown rule: {rule}")
    profile = profile or KBProfile()
    if rule in INTERNALIZED_RULES and rule not in UNRESTRICTED_INTERNALIZED_RULES and profile.allow_normality:
        raise PreconditionError(f"{rule} is checked on knowledge bases without normality concepts")

    reasoner = reasoner or DefeasibleReasoner()
    before = reasoner.classical.stats()
    seeds = list(seeds)
    workers = max_workers or settings.MAX_WORKERS
    if workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(lambda s: _sweep_one(rule, s, profile, reasoner), seeds))
    else:
        outcomes = [_sweep_one(rule, seed, profile, reasoner) for seed in seeds]

    summary = SweepSummary(
        rule=rule,
        kbs_checked=sum(o.checked for o in outcomes),
        kbs_skipped=sum(not o.checked for o in outcomes),
        instances=sum(o.instances for o in outcomes),
        instances_skipped=sum(o.skipped for o in outcomes),
        failures=sum(o.failures for o in outcomes),
        counterexample=next((o.counterexample for o in outcomes if o.counterexample), None),
        stats=reasoner.classical.stats() - before,
    )
    performance_logger.info(
        LOG_EVENT_SWEEP_COMPLETE,
        extra={
            "rule": rule,
            "kbs_checked": summary.kbs_checked,
            "kbs_skipped": summary.kbs_skipped,
            "instances": summary.instances,
            "failures": summary.failures,
        },
    )
    return summary

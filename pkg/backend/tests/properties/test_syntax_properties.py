"""Property-based tests for the concept model and the concrete syntax.

Properties:
1. nnf is idempotent and keeps negation on atoms and normality concepts
2. nnf preserves satisfiability, and C and nnf(C) are equivalent
3. printing then parsing returns the same axiom
4. printing then parsing a generated knowledge base returns the same KB
5. the signature only grows when axioms are added
6. the normality concepts of a union are the union of the normality concepts
"""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from dln.models import (
    BOTTOM,
    TOP,
    And,
    Atomic,
    ClassicalKB,
    DefeasibleCI,
    Exists,
    Forall,
    KnowledgeBase,
    Normal,
    Not,
    Or,
    StrictCI,
    nnf,
    normality_concepts,
    signature,
)
from dln.schemas.options import KBProfile
from dln.services.kb_generator import generate_random_kb, random_axiom
from dln.services.parser import parse_kb, print_axiom, print_kb
from dln.services.tableau import ClassicalReasoner

NAMES = st.sampled_from(["A", "B", "C", "Human", "SI"])
ROLES = st.sampled_from(["r", "has_heart"])

concepts = st.recursive(
    st.one_of(st.just(TOP), st.just(BOTTOM), NAMES.map(Atomic)),
    lambda inner: st.one_of(
        inner.map(Not),
        inner.map(Normal),
        st.tuples(inner, inner).map(lambda p: And(*p)),
        st.tuples(inner, inner).map(lambda p: Or(*p)),
        st.tuples(ROLES, inner).map(lambda p: Exists(*p)),
        st.tuples(ROLES, inner).map(lambda p: Forall(*p)),
    ),
    max_leaves=12,
)

classical_concepts = st.recursive(
    st.one_of(st.just(TOP), st.just(BOTTOM), NAMES.map(Atomic)),
    lambda inner: st.one_of(
        inner.map(Not),
        st.tuples(inner, inner).map(lambda p: And(*p)),
        st.tuples(inner, inner).map(lambda p: Or(*p)),
        st.tuples(ROLES, inner).map(lambda p: Exists(*p)),
        st.tuples(ROLES, inner).map(lambda p: Forall(*p)),
    ),
    max_leaves=10,
)

axiom_lists = st.lists(
    st.integers(min_value=0, max_value=2**32 - 1).map(lambda seed: random_axiom(random.Random(seed))),
    max_size=6,
)


def _negations_are_innermost(concept) -> bool:
    for sub in concept.walk():
        if isinstance(sub, Not) and not isinstance(sub.operand, (Atomic, Normal)):
            return False
    return True


@given(concepts)
def test_nnf_is_idempotent(concept):
    once = nnf(concept)
    assert nnf(once) == once
    assert _negations_are_innermost(once)


@settings(max_examples=150, deadline=None)
@given(classical_concepts)
def test_nnf_preserves_satisfiability(concept):
    reasoner = ClassicalReasoner()
    empty = ClassicalKB()
    normal_form = nnf(concept)
    assert reasoner.is_satisfiable(empty, concept) == reasoner.is_satisfiable(empty, normal_form)
    assert reasoner.entails_subsumption(empty, concept, normal_form)
    assert reasoner.entails_subsumption(empty, normal_form, concept)


@given(concepts, concepts, st.one_of(st.none(), st.integers(0, 9)))
def test_defeasible_inclusion_round_trip(lhs, rhs, rank):
    axiom = DefeasibleCI(lhs, rhs, rank)
    (parsed,) = parse_kb(print_axiom(axiom)).defeasible
    assert parsed == axiom
    assert parsed.rank == rank


@given(concepts, concepts)
def test_strict_inclusion_round_trip(lhs, rhs):
    axiom = StrictCI(lhs, rhs)
    assert parse_kb(print_axiom(axiom)).strong == (axiom,)


@given(concepts)
def test_unicode_printing_is_total(concept):
    assert print_axiom(StrictCI(concept, TOP), unicode=True)


@settings(max_examples=1000)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_random_axiom_round_trip(seed):
    axiom = random_axiom(random.Random(seed))
    kb = parse_kb(print_axiom(axiom))
    assert list(kb.axioms()) == [axiom]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_generated_kb_round_trip(seed):
    kb = generate_random_kb(seed, KBProfile(n_concepts=4, n_roles=2, max_depth=3, allow_normality=True))
    assert parse_kb(print_kb(kb)) == kb


@given(axiom_lists, axiom_lists)
def test_signature_grows_with_axioms(first, second):
    kb = KnowledgeBase.from_axioms(first)
    larger = kb.with_axioms(*second)
    before, after = signature(kb), signature(larger)
    assert before.concepts <= after.concepts
    assert before.roles <= after.roles
    assert before.individuals <= after.individuals


@given(axiom_lists, axiom_lists)
def test_normality_concepts_of_union(first, second):
    left, right = KnowledgeBase.from_axioms(first), KnowledgeBase.from_axioms(second)
    union = KnowledgeBase.from_axioms([*left.axioms(), *right.axioms()])
    sigma = normality_concepts(union)
    assert set(normality_concepts(left)) <= set(sigma)
    assert set(normality_concepts(right)) <= set(sigma)
    assert normality_concepts(left) | normality_concepts(right) == sigma

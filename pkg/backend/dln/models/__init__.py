"""Domain model.

This package contains the immutable ALC^N data model:
- Concepts: concept terms, including normality concepts N(C)
- Axioms: strict and defeasible inclusions, concept and role assertions
- Knowledge bases: the DL^N split S ∪ D and the lowered classical KB
- Structure: nnf, signatures, normality-concept collection, lowering

Barrel exports for clean imports:
    from dln.models import Atomic, Normal, StrictCI, KnowledgeBase, nnf
"""

from __future__ import annotations

from dln.models.axioms import (
    Assertion,
    Axiom,
    ConceptAssertion,
    DefeasibleCI,
    RoleAssertion,
    StrictCI,
    render_axiom,
)
from dln.models.concepts import (
    BOTTOM,
    PLAIN,
    TOP,
    UNICODE,
    And,
    Atomic,
    Bottom,
    Concept,
    Exists,
    Forall,
    Glyphs,
    Normal,
    Not,
    Or,
    Top,
    conjunction,
    render,
    to_unicode,
)
from dln.models.knowledge_base import ClassicalKB, KnowledgeBase
from dln.models.structure import (
    NormalitySet,
    Signature,
    axiom_signature,
    contains_normal,
    is_canonical,
    lower_axiom,
    lower_concept,
    lower_strong,
    mentions_normality,
    nnf,
    normality_atom,
    normality_atom_name,
    normality_concepts,
    signature,
)

__all__ = [
    "Assertion",
    "Axiom",
    "ConceptAssertion",
    "DefeasibleCI",
    "RoleAssertion",
    "StrictCI",
    "render_axiom",
    "BOTTOM",
    "PLAIN",
    "TOP",
    "UNICODE",
    "And",
    "Atomic",
    "Bottom",
    "Concept",
    "Exists",
    "Forall",
    "Glyphs",
    "Normal",
    "Not",
    "Or",
    "Top",
    "conjunction",
    "render",
    "to_unicode",
    "ClassicalKB",
    "KnowledgeBase",
    "NormalitySet",
    "Signature",
    "axiom_signature",
    "contains_normal",
    "is_canonical",
    "lower_axiom",
    "lower_concept",
    "lower_strong",
    "mentions_normality",
    "nnf",
    "normality_atom",
    "normality_atom_name",
    "normality_concepts",
    "signature",
]

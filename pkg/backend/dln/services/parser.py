"""Concrete syntax of knowledge bases and queries.

One axiom per line::

    # situs inversus
    Human <~ some has_heart.LH
    SI <= Human
    john : N(Human)
    (john, h1) : has_heart
    Human <~[2] some has_organ.Nose

``not``, ``some`` and ``only`` bind tighter than ``and``, which binds
tighter than ``or``; both binary connectives associate to the left.
"""

from __future__ import annotations

import logging
from typing import List, Optional

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from dln.constants import (
    COMMENT_CHAR,
    IDENTIFIER_PATTERN,
    KEYWORDS,
    LOG_EVENT_KB_LOADED,
    LOG_EVENT_KB_WARNING,
    PRIORITY_RANK,
    PRIORITY_SPECIFICITY,
    WITNESS_INDIVIDUAL_PREFIX,
)
from dln.core.errors import KnowledgeBaseError, ParseError, SourceLocation
from dln.models import (
    BOTTOM,
    PLAIN,
    TOP,
    UNICODE,
    And,
    Atomic,
    Axiom,
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
    contains_normal,
    render_axiom,
    signature,
)

logger = logging.getLogger(__name__)


GRAMMAR = r"""
?start: axiom

?axiom: concept _SUBSUMED concept                   -> strict
      | concept _DEFEASIBLE rank? concept           -> defeasible
      | IDENT ":" concept                           -> concept_assertion
      | "(" IDENT "," IDENT ")" ":" IDENT           -> role_assertion

rank: "[" INT "]"

?concept: conjunction
        | concept "or" conjunction                  -> or_

?conjunction: unary
            | conjunction "and" unary               -> and_

?unary: "not" unary                                 -> not_
      | "some" IDENT "." unary                      -> some
      | "only" IDENT "." unary                      -> only
      | primary

?primary: "Top"                                     -> top
        | "Bot"                                     -> bot
        | IDENT                                     -> name
        | "N" "(" concept ")"                       -> normal
        | "(" concept ")"

_SUBSUMED: "<="
_DEFEASIBLE: "<~"
INT: /[0-9]+/

%import common.WS_INLINE
%ignore WS_INLINE
""" + f"IDENT: /{IDENTIFIER_PATTERN}/\n"

_PARSER = Lark(GRAMMAR, parser="lalr", start="start")

_TERMINAL_NAMES = {
    "IDENT": "identifier",
    "INT": "non-negative integer",
    "_SUBSUMED": "'<='",
    "_DEFEASIBLE": "'<~'",
    "$END": "end of line",
}


def _describe(terminal: str) -> str:
    if terminal in _TERMINAL_NAMES:
        return _TERMINAL_NAMES[terminal]
    try:
        pattern = _PARSER.get_terminal(terminal).pattern
    except KeyError:
        return terminal
    if pattern.type == "str":
        return f"'{pattern.value}'"
    return terminal


class _Keyword(Exception):
    def __init__(self, token: Token) -> None:
        self.token = token


def _identifier(token: Token) -> str:
    if str(token) in KEYWORDS:
        raise _Keyword(token)
    return str(token)


@v_args(inline=True)
class _AxiomBuilder(Transformer):
    def strict(self, lhs, rhs):
        return StrictCI(lhs, rhs)

    def defeasible(self, lhs, *rest):
        if len(rest) == 2:
            rank, rhs = rest
        else:
            rank, rhs = None, rest[0]
        return DefeasibleCI(lhs, rhs, rank)

    def concept_assertion(self, individual, concept):
        return ConceptAssertion(_identifier(individual), concept)

    def role_assertion(self, subject, obj, role):
        return RoleAssertion(_identifier(subject), _identifier(obj), _identifier(role))

    def rank(self, value):
        return int(value)

    def or_(self, left, right):
        return Or(left, right)

    def and_(self, left, right):
        return And(left, right)

    def not_(self, operand):
        return Not(operand)

    def some(self, role, filler):
        return Exists(_identifier(role), filler)

    def only(self, role, filler):
        return Forall(_identifier(role), filler)

    def top(self):
        return TOP

    def bot(self):
        return BOTTOM

    def name(self, token):
        return Atomic(_identifier(token))

    def normal(self, argument):
        return Normal(argument)


_BUILDER = _AxiomBuilder()


def _clamp(text: str, line: int, column: Optional[int]) -> SourceLocation:
    width = max(1, len(text))
    if column is None or column < 1:
        column = width
    return SourceLocation(line, min(column, width))


def _strip_comment(text: str) -> str:
    index = text.find(COMMENT_CHAR)
    return text if index < 0 else text[:index]


def _parse_statement(text: str, line: int) -> Axiom:
    try:
        tree = _PARSER.parse(text)
        axiom = _BUILDER.transform(tree)
    except UnexpectedCharacters as exc:
        raise ParseError(
            _clamp(text, line, exc.column),
            f"unexpected character {text[exc.pos_in_stream]!r}",
            sorted({_describe(t) for t in exc.allowed or ()}),
        ) from None
    except UnexpectedToken as exc:
        found = "end of line" if exc.token.type == "$END" else f"{str(exc.token)!r}"
        raise ParseError(
            _clamp(text, line, getattr(exc.token, "column", None)),
            f"unexpected {found}",
            sorted({_describe(t) for t in exc.expected}),
        ) from None
    except UnexpectedEOF as exc:
        raise ParseError(
            _clamp(text, line, len(text) + 1),
            "unexpected end of line",
            sorted({_describe(t) for t in exc.expected}),
        ) from None
    except UnexpectedInput as exc:
        raise ParseError(_clamp(text, line, getattr(exc, "column", None)), "syntax error") from None
    except VisitError as exc:
        original = exc.orig_exc
        if isinstance(original, _Keyword):
            raise ParseError(
                _clamp(text, line, original.token.column),
                f"{str(original.token)!r} is a reserved keyword",
            ) from None
        if isinstance(original, ValueError):
            raise ParseError(_clamp(text, line, 1), str(original)) from None
        raise
    except RecursionError:
        raise ParseError(_clamp(text, line, 1), "expression nested too deeply") from None

    start = len(text) - len(text.lstrip()) + 1
    return _locate(axiom, SourceLocation(line, start))


def _locate(axiom: Axiom, location: SourceLocation) -> Axiom:
    match axiom:
        case StrictCI(lhs, rhs):
            return StrictCI(lhs, rhs, location)
        case DefeasibleCI(lhs, rhs, rank):
            return DefeasibleCI(lhs, rhs, rank, location)
        case ConceptAssertion(individual, concept):
            return ConceptAssertion(individual, concept, location)
        case RoleAssertion(subject, obj, role):
            return RoleAssertion(subject, obj, role, location)
    return axiom


def _statements(source: str) -> List[tuple[int, str]]:
    statements = []
    for number, raw in enumerate(source.splitlines(), start=1):
        text = _strip_comment(raw)
        if text.strip():
            statements.append((number, text))
    return statements


def parse_kb(source: str) -> KnowledgeBase:
    """Parse a knowledge base.

    Args:
        source: KB text, one axiom per line, ``#`` comments.

    Returns:
        KnowledgeBase with S and D split; duplicate axioms are dropped silently.

    Raises:
        ParseError: on the first syntax error, with its location.
    """
    axioms = [_parse_statement(text, number) for number, text in _statements(source)]
    kb = KnowledgeBase.from_axioms(axioms)
    logger.debug(
        LOG_EVENT_KB_LOADED,
        extra={"strong": len(kb.strong), "defeasible": len(kb.defeasible)},
    )
    return kb


def parse_query(source: str) -> Axiom:
    """Parse one query: a strict inclusion or an assertion."""
    statements = _statements(source)
    if not statements:
        raise ParseError(SourceLocation(1, 1), "empty query", ["concept", "identifier"])
    if len(statements) > 1:
        number, text = statements[1]
        raise ParseError(_clamp(text, number, 1), "a query is a single axiom")
    number, text = statements[0]
    axiom = _parse_statement(text, number)
    if isinstance(axiom, DefeasibleCI):
        raise ParseError(axiom.location, "queries cannot be defeasible inclusions", ["'<='"])
    return axiom


def parse_queries(source: str) -> List[Axiom]:
    """Parse a query file: one query per non-blank line."""
    queries = []
    for number, text in _statements(source):
        axiom = _parse_statement(text, number)
        if isinstance(axiom, DefeasibleCI):
            raise ParseError(axiom.location, "queries cannot be defeasible inclusions", ["'<='"])
        queries.append(axiom)
    return queries


def print_axiom(axiom: Axiom, unicode: bool = False) -> str:
    return render_axiom(axiom, UNICODE if unicode else PLAIN)


def print_kb(kb: KnowledgeBase, unicode: bool = False) -> str:
    """Print a KB, strong part first, in a form ``parse_kb`` reads back."""
    return "".join(print_axiom(axiom, unicode) + "\n" for axiom in kb.axioms())


def validate_kb(kb: KnowledgeBase, priority_mode: str = PRIORITY_SPECIFICITY) -> List[str]:
    """Check well-formedness beyond the grammar.

    Args:
        kb: Parsed knowledge base.
        priority_mode: The mode the KB will be reasoned with.

    Returns:
        Human-readable warnings; an empty list for a clean KB.

    Raises:
        KnowledgeBaseError: if a name is used in two namespaces.
    """
    concepts, roles, individuals = signature(kb)
    for first, second, label in (
        (concepts, roles, "concept and role"),
        (concepts, individuals, "concept and individual"),
        (roles, individuals, "role and individual"),
    ):
        clash = sorted(first & second)
        if clash:
            raise KnowledgeBaseError(f"names used as both {label}: {', '.join(clash)}")

    warnings: List[str] = []
    for di in kb.defeasible:
        where = f" (line {di.location.line})" if di.location else ""
        if contains_normal(di.pre):
            warnings.append(f"non-canonical DI{where}: {di}")
        if contains_normal(di.con):
            warnings.append(f"normality concept in DI conclusion{where}: {di}")
        if priority_mode == PRIORITY_SPECIFICITY and di.rank is not None:
            warnings.append(f"rank ignored in specificity mode{where}: {di}")
        if priority_mode == PRIORITY_RANK and di.rank is None:
            warnings.append(f"missing rank{where}: {di}")
    for axiom in kb.axioms():
        for concept in axiom.concepts():
            if any(
                isinstance(sub, Normal) and contains_normal(sub.argument)
                for sub in concept.walk()
            ):
                warnings.append(f"nested normality concept: {axiom}")
                break
    for individual in sorted(individuals):
        if individual.startswith(WITNESS_INDIVIDUAL_PREFIX):
            warnings.append(f"individual {individual} uses the reserved prefix {WITNESS_INDIVIDUAL_PREFIX}")

    for warning in warnings:
        logger.warning(LOG_EVENT_KB_WARNING, extra={"detail": warning})
    return warnings

"""Reasoner-wide constants.

This module centralizes the magic strings and numbers used throughout the
reasoner: reserved names, concrete-syntax keywords, priority modes, exit
codes and log event names.

Usage:
    from dln.constants import EXIT_ENTAILED, NORMALITY_ATOM_PREFIX

Organization:
    - Log & Output Formats
    - Reserved Names
    - Concrete Syntax
    - Defeasible Engine
    - Classical Engine
    - Exit Codes
    - Logging & Monitoring
    - Postulates
"""

from __future__ import annotations

# =============================================================================
# Log & Output Formats
# =============================================================================

VALID_LOG_LEVELS = frozenset({"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"})
"""Accepted logging level names."""

LOG_FORMAT_JSON = "json"
LOG_FORMAT_TEXT = "text"

VALID_LOG_FORMATS = frozenset({LOG_FORMAT_JSON, LOG_FORMAT_TEXT})
"""Formats understood by setup_logging()."""

OUTPUT_TEXT = "text"
OUTPUT_JSON = "json"

OUTPUT_FORMATS = frozenset({OUTPUT_TEXT, OUTPUT_JSON})
"""Report formats of the command-line front end."""

# =============================================================================
# Reserved Names
# =============================================================================

NORMALITY_ATOM_PREFIX = "N("
"""Lowered normality atoms are named N(<printed argument>); the parenthesis keeps them out of the identifier space."""

WITNESS_INDIVIDUAL_PREFIX = "aux_"
"""Prefix of the fresh individuals asserted by assume_nonempty_prototypes."""

# =============================================================================
# Concrete Syntax
# =============================================================================

KEYWORDS = frozenset({"and", "or", "not", "some", "only", "Top", "Bot", "N"})
"""Words that cannot be used as concept, role or individual names."""

IDENTIFIER_PATTERN = r"[A-Za-z_][A-Za-z0-9_]*"
"""Identifier syntax shared by concept, role and individual names."""

COMMENT_CHAR = "#"

# =============================================================================
# Defeasible Engine
# =============================================================================

PRIORITY_SPECIFICITY = "specificity"
"""DIs ordered by specificity of their premises over the strong part."""

PRIORITY_RANK = "rank"
"""DIs ordered by explicit ranks; a lower rank has higher priority."""

PRIORITY_MODES = frozenset({PRIORITY_SPECIFICITY, PRIORITY_RANK})

SPECIFICITY_CACHE_SIZE = 4096
"""Specificity answers a reasoner keeps, least recently used first out."""

REDUCTION_CACHE_SIZE = 64
"""KB^Σ reductions a reasoner keeps for reuse across queries."""

# =============================================================================
# Classical Engine
# =============================================================================

DEFAULT_NODE_BUDGET = 100_000
"""Default cap on the completion-graph nodes live on one tableau branch."""

# =============================================================================
# Exit Codes
# =============================================================================

EXIT_ENTAILED = 0
"""Query entailed / no inconsistent prototype / sweep without failures."""

EXIT_NOT_ENTAILED = 1
"""Query not entailed / inconsistent prototypes found / sweep failures."""

EXIT_INPUT_ERROR = 2
"""Unreadable or malformed input, violated precondition."""

EXIT_RESOURCE_LIMIT = 3
"""Tableau node budget exhausted; the answer is unknown."""

# =============================================================================
# Logging & Monitoring
# =============================================================================

PERFORMANCE_LOGGER = "performance"
"""Dedicated logger receiving reasoner statistics."""

LOG_EVENT_KB_LOADED = "kb_loaded"
LOG_EVENT_KB_WARNING = "kb_validation_warning"
LOG_EVENT_PRIORITY_COMPUTED = "priority_computed"
LOG_EVENT_DI_OVERRIDDEN = "di_overridden"
LOG_EVENT_REDUCTION_COMPLETE = "reduction_complete"
LOG_EVENT_QUERY_ANSWERED = "query_answered"
LOG_EVENT_RESOURCE_LIMIT = "resource_limit_exceeded"
LOG_EVENT_SWEEP_COMPLETE = "sweep_complete"

# =============================================================================
# Postulates
# =============================================================================

META_RULES = ("REF", "CT", "CM", "LLE", "RW")
"""Meta-level KLM rules that can be checked in ALC^N."""

INTERNALIZED_RULES = ("REF_N", "CT_N", "CM_N", "LLE_N", "RW_N", "OR_N", "RM_N")
"""Internalized KLM rules over normality concepts."""

UNRESTRICTED_INTERNALIZED_RULES = frozenset({"REF_N", "RW_N"})
"""Internalized rules that hold with normality concepts anywhere in the KB."""

RESTRICTED_META_RULES = frozenset({"CT", "CM", "LLE"})
"""Meta rules whose soundness needs a conflict-free KB; REF and RW always hold."""

MAX_PROFILE_CONCEPTS = 6
MAX_PROFILE_ROLES = 2
MAX_PROFILE_DIS = 6
MAX_PROFILE_DEPTH = 3

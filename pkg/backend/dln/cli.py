"""Command-line front end.

Usage:
    python -m dln entails --kb tests/data/situs_inversus.kb --query "N(Human) <= some has_heart.LH"
    python -m dln prototypes --kb tests/data/nixon.kb --format json
    python -m dln explain --kb tests/data/situs_inversus.kb --query "N(SI) <= some has_heart.RH"
    python -m dln check-postulates CT_N --seeds 100

Exit codes: 0 entailed / clean, 1 not entailed / inconsistent prototypes /
postulate failures, 2 input or precondition error, 3 node budget exhausted.
"""

from __future__ import annotations

import functools
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import click
from pydantic import ValidationError

from dln import __version__
from dln.config import settings
from dln.constants import (
    EXIT_ENTAILED,
    EXIT_INPUT_ERROR,
    EXIT_NOT_ENTAILED,
    INTERNALIZED_RULES,
    META_RULES,
    OUTPUT_JSON,
    OUTPUT_TEXT,
    PRIORITY_MODES,
    VALID_LOG_LEVELS,
)
from dln.core.errors import ParseError, ReasonerError
from dln.core.logging_config import setup_logging
from dln.models import Atomic, Axiom, KnowledgeBase
from dln.schemas.options import KBProfile, RunConfig
from dln.schemas.reports import (
    CounterexampleReport,
    Decision,
    ExplainReport,
    OverriddenEntry,
    PrototypeSummary,
    QueryReport,
    SweepReport,
)
from dln.services.defeasible import DefeasibleReasoner, ReductionResult
from dln.services.parser import parse_kb, parse_queries, parse_query, print_axiom, print_kb, validate_kb
from dln.services.postulates import SweepSummary, sweep
from dln.services.tableau import ClassicalReasoner


def _guarded(command: Callable[..., int]) -> Callable[..., None]:
    """Turn a command's return value into its exit code and reasoner errors into one-line messages."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs) -> None:
        try:
            code = command(*args, **kwargs)
        except ReasonerError as exc:
            click.echo(f"error: {exc}", err=True)
            code = exc.exit_code
        except ValidationError as exc:
            problems = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
            click.echo(f"error: {problems}", err=True)
            code = EXIT_INPUT_ERROR
        except OSError as exc:
            click.echo(f"error: {exc.filename}: {exc.strerror}", err=True)
            code = EXIT_INPUT_ERROR
        click.get_current_context().exit(code)

    return wrapper


def _load_kb(config: RunConfig) -> KnowledgeBase:
    source = config.kb_path.read_text(encoding="utf-8")
    try:
        kb = parse_kb(source)
    except ParseError as exc:
        raise ParseError(exc.location, f"{config.kb_path}: {exc.message}", exc.expected) from None
    validate_kb(kb, config.priority_mode)
    return kb


def _reasoner(config: RunConfig) -> DefeasibleReasoner:
    return DefeasibleReasoner(ClassicalReasoner(config.node_budget), max_workers=config.max_workers)


def _queries(query: Optional[str], query_file: Optional[Path]) -> List[Axiom]:
    if (query is None) == (query_file is None):
        raise click.UsageError("give exactly one of --query and --query-file")
    if query is not None:
        return [parse_query(query)]
    return parse_queries(query_file.read_text(encoding="utf-8"))


def _text(axiom: Axiom, unicode: bool) -> str:
    return print_axiom(axiom, unicode)


def _query_report(query: Axiom, entailed: bool, result: ReductionResult, stats, unicode: bool = False) -> QueryReport:
    return QueryReport(
        query=_text(query, unicode),
        entailed=entailed,
        sigma=[str(n) for n in result.sigma],
        linearization=[_text(di, unicode) for di in result.linearization],
        selected=[_text(t.lowered, unicode) for t in result.selected],
        overridden=[
            OverriddenEntry(di=_text(t.di, unicode), normality=str(t.normality), reason=str(reason))
            for t, reason in result.overridden
        ],
        stats=stats,
    )


def _answer(config: RunConfig, kb: KnowledgeBase, query: Axiom, explain: bool = False) -> QueryReport:
    # one reasoner per query keeps the counters independent of batch order
    reasoner = _reasoner(config)
    entailed, result = reasoner.n_entails(kb, query, config.reasoning_options())
    report = _query_report(query, entailed, result, reasoner.classical.stats(), config.unicode)
    if not explain:
        return report
    decisions = [
        Decision(
            di=_text(entry.translated.di, config.unicode),
            normality=str(entry.translated.normality),
            status="kept" if entry.kept else "overridden",
            reason=None if entry.kept else str(entry.reason),
        )
        for entry in result.decisions
    ]
    return ExplainReport(**report.model_dump(), decisions=decisions)


def _answer_all(config: RunConfig, kb: KnowledgeBase, queries: Sequence[Axiom], explain: bool) -> List[QueryReport]:
    if config.max_workers > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=config.max_workers) as executor:
            return list(executor.map(lambda q: _answer(config, kb, q, explain), queries))
    return [_answer(config, kb, q, explain) for q in queries]


def _render_query(report: QueryReport) -> str:
    lines = [f"{'ENTAILED' if report.entailed else 'NOT ENTAILED'}: {report.query}"]
    lines.append(f"Sigma: {{{', '.join(report.sigma)}}}")
    if report.overridden:
        lines.append("Overridden:")
        lines.extend(f"  {entry.di}  in {entry.normality}" for entry in report.overridden)
    return "\n".join(lines)


def _render_explain(report: ExplainReport) -> str:
    lines = [_render_query(report), "Linearization:"]
    lines.extend(f"  {position}. {di}" for position, di in enumerate(report.linearization, start=1))
    lines.append("Decisions:")
    if not report.decisions:
        lines.append("  (none)")
    for decision in report.decisions:
        lines.append(f"  {decision.status.upper():<10} {decision.di}  in {decision.normality}")
        if decision.reason:
            lines.append(f"             {decision.reason}")
    lines.append(
        f"Checks: {report.stats.consistency_checks} consistency, "
        f"{report.stats.subsumption_checks} subsumption"
    )
    return "\n".join(lines)


def _emit_queries(config: RunConfig, reports: List[QueryReport], batch: bool, render: Callable) -> None:
    if config.output_format == OUTPUT_JSON:
        if batch:
            payload = [json.loads(r.model_dump_json()) for r in reports]
            click.echo(json.dumps(payload, indent=2))
        else:
            click.echo(reports[0].model_dump_json(indent=2))
        return
    click.echo("\n\n".join(render(r) for r in reports))


def _run_config(kb: Path, options: dict) -> RunConfig:
    return RunConfig(kb_path=kb, **{key: value for key, value in options.items() if value is not None})


def _apply(options: Sequence[Callable]) -> Callable:
    def decorate(command):
        for option in reversed(options):
            command = option(command)
        return command

    return decorate


kb_option = click.option(
    "--kb", "kb", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Knowledge base file",
)
query_options = [
    click.option("--query", "query", default=None, help="One query axiom"),
    click.option(
        "--query-file", "query_file", default=None,
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="File with one query per line",
    ),
]
engine_options = [
    click.option("--format", "output_format", type=click.Choice([OUTPUT_TEXT, OUTPUT_JSON]), default=None),
    click.option("--node-budget", type=click.IntRange(min=1), default=None, help="Tableau node budget"),
    click.option("--workers", "max_workers", type=click.IntRange(min=1), default=None, help="Thread pool width"),
]
reasoning_options = [
    click.option("--priority", "priority_mode", type=click.Choice(sorted(PRIORITY_MODES)), default=None),
    click.option("--assume-nonempty-prototypes", "nonempty_prototypes", is_flag=True, default=False,
                 help="Assert a witness for every consistent concept name"),
    click.option("--unicode", is_flag=True, default=False, help="Print DL glyphs in text output"),
    *engine_options,
]


@click.group()
@click.option("--log-level", type=click.Choice(sorted(VALID_LOG_LEVELS), case_sensitive=False), default=None)
@click.version_option(version=__version__, message="%(version)s")
def main(log_level):
    """Defeasible reasoning in ALC with normality concepts."""
    setup_logging(log_level)


@main.command()
@kb_option
@_apply(query_options)
@_apply(reasoning_options)
@_guarded
def entails(kb, query, query_file, **options):
    """Decide KB |~ query; exit 0 iff every query is entailed."""
    config = _run_config(kb, options)
    knowledge_base = _load_kb(config)
    queries = _queries(query, query_file)
    reports = _answer_all(config, knowledge_base, queries, explain=False)
    _emit_queries(config, reports, query_file is not None, _render_query)
    return EXIT_ENTAILED if all(r.entailed for r in reports) else EXIT_NOT_ENTAILED


@main.command()
@kb_option
@_apply(query_options)
@_apply(reasoning_options)
@_guarded
def explain(kb, query, query_file, **options):
    """Show the linearization and every keep/override decision behind a query."""
    config = _run_config(kb, options)
    knowledge_base = _load_kb(config)
    queries = _queries(query, query_file)
    reports = _answer_all(config, knowledge_base, queries, explain=True)
    _emit_queries(config, reports, query_file is not None, _render_explain)
    return EXIT_ENTAILED if all(r.entailed for r in reports) else EXIT_NOT_ENTAILED


@main.command()
@kb_option
@click.option("--candidates", default=None, help="Comma-separated concept names (default: the whole signature)")
@_apply(reasoning_options)
@_guarded
def prototypes(kb, candidates, **options):
    """List inconsistent prototypes; exit 1 if there is any."""
    config = _run_config(kb, options)
    knowledge_base = _load_kb(config)
    concepts = None
    if candidates:
        concepts = [Atomic(name.strip()) for name in candidates.split(",") if name.strip()]
    reasoner = _reasoner(config)
    report = reasoner.inconsistent_prototypes(knowledge_base, concepts, config.reasoning_options())
    summary = PrototypeSummary(
        inconsistent=[str(n) for n in report.inconsistent],
        consistent=[str(n) for n in report.consistent],
        unsatisfiable=[str(n) for n in report.unsatisfiable],
        conflicts=[str(n) for n in report.conflicts],
        stats=reasoner.classical.stats(),
    )
    if config.output_format == OUTPUT_JSON:
        click.echo(summary.model_dump_json(indent=2))
    else:
        for prototype in summary.inconsistent:
            note = " (concept unsatisfiable)" if prototype in summary.unsatisfiable else ""
            click.echo(f"INCONSISTENT: {prototype}{note}")
        for prototype in summary.consistent:
            click.echo(f"consistent: {prototype}")
    return EXIT_NOT_ENTAILED if summary.inconsistent else EXIT_ENTAILED


def _sweep_report(summary: SweepSummary) -> SweepReport:
    counterexample = None
    found = summary.counterexample
    if found is not None:
        counterexample = CounterexampleReport(
            kb=print_kb(found.kb),
            rule=found.instance.name,
            premises=[str(p) for p in found.instance.premises],
            conclusion=str(found.instance.conclusion),
            failing_query=str(found.failing_query),
        )
    return SweepReport(
        rule=summary.rule,
        kbs_checked=summary.kbs_checked,
        kbs_skipped=summary.kbs_skipped,
        instances=summary.instances,
        instances_skipped=summary.instances_skipped,
        failures=summary.failures,
        counterexample=counterexample,
        stats=summary.stats,
    )


@main.command("check-postulates")
@click.argument("rule", type=click.Choice([*META_RULES, *INTERNALIZED_RULES]))
@click.option("--seeds", type=click.IntRange(min=1), default=100, show_default=True, help="Seeds 0..n-1")
@click.option("--max-instances", type=click.IntRange(min=1), default=None, help="Instances per KB")
@click.option("--profile-concepts", type=int, default=3, show_default=True)
@click.option("--profile-roles", type=int, default=1, show_default=True)
@click.option("--profile-dis", type=int, default=3, show_default=True)
@click.option("--profile-depth", type=int, default=2, show_default=True)
@click.option("--profile-normality", is_flag=True, default=False, help="Allow N(C) in generated KBs")
@_apply(engine_options)
@_guarded
def check_postulates(rule, seeds, max_instances, profile_concepts, profile_roles, profile_dis,
                     profile_depth, profile_normality, output_format, node_budget, max_workers):
    """Sweep a KLM rule over generated knowledge bases; exit 1 on any failing instance."""
    profile = KBProfile(
        n_concepts=profile_concepts,
        n_roles=profile_roles,
        n_dis=profile_dis,
        max_depth=profile_depth,
        allow_normality=profile_normality,
        max_instances=max_instances,
    )
    reasoner = DefeasibleReasoner(ClassicalReasoner(node_budget))
    summary = sweep(rule, range(seeds), profile, reasoner, max_workers=max_workers)
    report = _sweep_report(summary)
    if (output_format or settings.OUTPUT_FORMAT) == OUTPUT_JSON:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(
            f"{rule}: {report.failures} failures in {report.instances} instances "
            f"over {report.kbs_checked} KBs ({report.kbs_skipped} skipped)"
        )
        if report.counterexample is not None:
            click.echo("First counterexample:")
            click.echo(report.counterexample.kb.rstrip())
            click.echo(f"  premises: {'; '.join(report.counterexample.premises)}")
            click.echo(f"  fails:    {report.counterexample.conclusion}")
    return EXIT_NOT_ENTAILED if report.failures else EXIT_ENTAILED

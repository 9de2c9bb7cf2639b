"""Terminal client: validate input, call the server, present the result.

Every command is validate -> a few HTTP calls -> present; no business logic
and no data-tier access live here. Exit codes: 0 success, 1 usage error,
2 server-side or transport error, 3 failed composition integrity check.
"""

from __future__ import annotations

import pathlib
import sys

import click

from .client import ApiClient
from .config import ClientConfig, DEFAULT_SERVER, DEFAULT_TOKEN_CACHE, load_session, save_session
from .render import format_presented, format_table, present
from .validate import (
    MODES,
    SLOTS,
    validate_choice,
    validate_corpus_id,
    validate_doc_ids,
    validate_language,
    validate_project_id,
    validate_thresholds,
)
from ..common import canonical_json
from ..errors import IconError
from ..manifest import load_catalogue, load_registry, verify_system

_JSON_FLAG = click.option("--json", "as_json", is_flag=True, help="emit the raw API payload")


def _emit_json(payload: object) -> None:
    click.echo(canonical_json(payload).decode("utf-8"))


def _client(config: ClientConfig) -> ApiClient:
    session = load_session(config)
    return ApiClient(config.server, token=session.get("token") if session else None)


def _short(value: str | None, width: int = 12) -> str:
    return (value or "")[:width]


@click.group()
@click.option("--server", envvar="ICON_SERVER", default=DEFAULT_SERVER, show_default=True)
@click.option(
    "--token-cache", envvar="ICON_TOKEN_CACHE", default=DEFAULT_TOKEN_CACHE, show_default=True
)
@click.pass_context
def cli(ctx: click.Context, server: str, token_cache: str) -> None:
    """Ontology workbench terminal client."""
    ctx.obj = ClientConfig(server=server.rstrip("/"), token_cache=token_cache)


@cli.command()
@click.option("--user", prompt=True, envvar="ICON_USER")
@click.option("--password", prompt=True, hide_input=True, envvar="ICON_PASSWORD")
@click.pass_obj
def login(config: ClientConfig, user: str, password: str) -> None:
    """Obtain a bearer token and cache it for later commands."""
    client = _client(config)
    result = client.login(user, password)
    save_session(
        config,
        {"server": config.server, "token": result["token"], "user": result["user"]},
    )
    click.echo(f"logged in as {result['user']} (token valid {result['expires_in_s']}s)")


@cli.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--language", default=None, help="force the document language (ru or uk)")
@click.option("--title", default=None, help="title for a single ingested file")
@_JSON_FLAG
@click.pass_obj
def ingest(
    config: ClientConfig, files: tuple[str, ...], language: str | None, title: str | None, as_json: bool
) -> None:
    """Upload text files as documents."""
    validate_language(language)
    if title is not None and len(files) > 1:
        raise IconError("USAGE_ERROR", "--title applies to a single file", {"argument": "title"})
    client = _client(config)
    rows = []
    for name in files:
        path = pathlib.Path(name)
        doc = client.ingest(
            path.read_text(encoding="utf-8"), source=path.name, title=title or path.stem,
            language=language,
        )
        rows.append(doc)
    if as_json:
        _emit_json(rows)
        return
    table = [
        {
            "id": _short(doc["id"]),
            "title": doc["title"],
            "language": doc["language"],
            "warnings": "; ".join(doc.get("warnings", [])),
        }
        for doc in rows
    ]
    click.echo(format_table(table))


def _echo_progress(progress: dict, as_json: bool) -> None:
    if as_json:
        _emit_json(progress)
        return
    counters = progress["counters"]
    click.echo(f"{progress['id']}  {progress['name']}  state={progress['state']}")
    click.echo(format_table([counters]))
    if progress.get("legal_stages"):
        click.echo("next stages: " + ", ".join(progress["legal_stages"]))


@cli.command()
@click.argument("project", required=False)
@click.option("--new", "new_name", default=None, help="create a project with this name first")
@click.option("--docs", default=None, help="comma-separated document ids (default: all stored)")
@click.option("--name", default=None, help="corpus name (default: project name)")
@_JSON_FLAG
@click.pass_obj
def corpus(
    config: ClientConfig,
    project: str | None,
    new_name: str | None,
    docs: str | None,
    name: str | None,
    as_json: bool,
) -> None:
    """Form the linguistic corpus for a project (state NEW)."""
    if (project is None) == (new_name is None):
        raise IconError(
            "USAGE_ERROR", "pass a project id or --new NAME, not both", {"argument": "project"}
        )
    params: dict = {}
    if docs:
        params["doc_ids"] = validate_doc_ids([d for d in docs.split(",") if d])
    if name:
        params["name"] = name
    client = _client(config)
    if new_name is not None:
        project = client.create_project(new_name)["id"]
        click.echo(f"created project {project}", err=True)
    else:
        validate_project_id(project)
    _echo_progress(client.run_stage(project, "corpus", params), as_json)


@cli.command()
@click.argument("project")
@_JSON_FLAG
@click.pass_obj
def index(config: ClientConfig, project: str, as_json: bool) -> None:
    """Build the positional inverted index (state CORPUS_READY)."""
    validate_project_id(project)
    _echo_progress(_client(config).run_stage(project, "index"), as_json)


@cli.command()
@click.argument("project")
@_JSON_FLAG
@click.pass_obj
def build(config: ClientConfig, project: str, as_json: bool) -> None:
    """Assemble and bind the draft ontology (state ANALYZED)."""
    validate_project_id(project)
    _echo_progress(_client(config).run_stage(project, "build"), as_json)


@cli.command()
@click.argument("project")
@click.option("--tfidf-min", type=float, default=None)
@click.option("--cvalue-min", type=float, default=None)
@click.option("--pmi-min", type=float, default=None)
@click.option("--pmi-cap", type=float, default=None)
@click.option("--max-ngram", type=int, default=None)
@_JSON_FLAG
@click.pass_obj
def analyze(
    config: ClientConfig,
    project: str,
    tfidf_min: float | None,
    cvalue_min: float | None,
    pmi_min: float | None,
    pmi_cap: float | None,
    max_ngram: int | None,
    as_json: bool,
) -> None:
    """Extract terms, concepts and relations (state INDEXED or REJECTED)."""
    validate_project_id(project)
    params = validate_thresholds(
        tfidf_min=tfidf_min,
        cvalue_min=cvalue_min,
        pmi_min=pmi_min,
        pmi_cap=pmi_cap,
        max_ngram=max_ngram,
    )
    _echo_progress(_client(config).run_stage(project, "analyze", params), as_json)


@cli.command()
@click.argument("project")
@click.option("--approve", "verdict", flag_value="approve", default=None)
@click.option("--reject", "verdict", flag_value="reject", default=None)
@click.option("--comment", "-m", default="", help="verdict comment for the audit log")
@_JSON_FLAG
@click.pass_obj
def verify(
    config: ClientConfig, project: str, verdict: str | None, comment: str, as_json: bool
) -> None:
    """Submit the draft for verification, or pass a verdict on it.

    Without a flag the draft moves to UNDER_VERIFICATION; --approve or
    --reject records the expert verdict.
    """
    validate_project_id(project)
    client = _client(config)
    if verdict is None:
        _echo_progress(client.run_stage(project, "submit_verification"), as_json)
    else:
        _echo_progress(client.verify(project, verdict, comment), as_json)


@cli.command()
@click.argument("project", required=False)
@click.option("--events", is_flag=True, help="print the project event log")
@_JSON_FLAG
@click.pass_obj
def status(config: ClientConfig, project: str | None, events: bool, as_json: bool) -> None:
    """Show one project's progress, or list all projects grouped by state."""
    client = _client(config)
    if project is None:
        projects = client.list_projects()
        if as_json:
            _emit_json(projects)
            return
        shaped = present(projects, sort_key="created_at", group_key="state")
        click.echo(format_presented(shaped, ["id", "name", "created_at"], group_label="state"))
        return
    validate_project_id(project)
    if events:
        log = client.events(project)
        if as_json:
            _emit_json(log)
            return
        rows = [
            {
                "ts": entry.get("ts"),
                "actor": entry.get("actor"),
                "event": entry.get("event"),
                "detail": entry.get("detail"),
            }
            for entry in log
        ]
        click.echo(format_table(rows, ["ts", "actor", "event", "detail"]))
        return
    _echo_progress(client.progress(project), as_json)


@cli.command()
@click.argument("corpus_id")
@click.argument("query")
@click.option("--mode", default="any", show_default=True, help="any, all or phrase")
@_JSON_FLAG
@click.pass_obj
def search(config: ClientConfig, corpus_id: str, query: str, mode: str, as_json: bool) -> None:
    """Full-text search over an indexed corpus."""
    validate_corpus_id(corpus_id)
    validate_choice(mode, MODES, "mode")
    result = _client(config).search(corpus_id, query, mode)
    if as_json:
        _emit_json(result)
        return
    click.echo(f"query lemmas: {' '.join(result['lemmas']) or '(none)'}")
    rows = [
        {"doc_id": _short(r["doc_id"]), "score": r["score"], "title": r["title"]}
        for r in result["results"]
    ]
    click.echo(format_table(rows, ["doc_id", "score", "title"]))


@cli.command()
@click.argument("project")
@click.option("--slot", default="draft", show_default=True, help="draft or initial")
@click.option("--output", "-o", default="-", help="file path, or - for stdout")
@click.pass_obj
def export(config: ClientConfig, project: str, slot: str, output: str) -> None:
    """Download an ontology exchange document (canonical JSON bytes)."""
    validate_project_id(project)
    validate_choice(slot, SLOTS, "slot")
    doc = _client(config).get_ontology(project, slot)
    data = canonical_json(doc) + b"\n"
    if output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        pathlib.Path(output).write_bytes(data)
        click.echo(f"wrote {len(data)} bytes to {output}", err=True)


def startup_integrity() -> list[str]:
    """Violation strings from the composition check; empty means healthy."""
    report = verify_system(load_registry(), load_catalogue())
    return [f"{v.kind}: {v.subject}: {v.detail}" for v in report.violations]


def main(argv: list[str] | None = None) -> int:
    try:
        violations = startup_integrity()
    except IconError as exc:
        print(f"integrity check failed: {exc}", file=sys.stderr)
        return 3
    if violations:
        for line in violations:
            print(f"integrity violation: {line}", file=sys.stderr)
        return 3

    try:
        cli.main(args=argv, prog_name="icon", standalone_mode=False)
    except click.exceptions.Abort:
        print("aborted", file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except IconError as exc:
        detail = f" {exc.detail}" if exc.detail else ""
        print(f"error: {exc.code}: {exc.message}{detail}", file=sys.stderr)
        if exc.code == "USAGE_ERROR":
            return 1
        if exc.code == "INTEGRITY_VIOLATION":
            return 3
        return 2
    return 0


def entry() -> None:
    sys.exit(main())

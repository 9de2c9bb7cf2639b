"""Server entry point: integrity gate, storage, then the HTTP app."""

from __future__ import annotations

import argparse
import os
import sys

from .api import create_app
from .service import AppService
from ..config import load_config
from ..errors import IconError
from ..library import open_store
from ..manifest import load_catalogue, load_registry, verify_system


def startup_integrity() -> list[str]:
    """Violation strings from the composition check; empty means healthy."""
    report = verify_system(load_registry(), load_catalogue())
    return [f"{v.kind}: {v.subject}: {v.detail}" for v in report.violations]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="icon-server")
    parser.add_argument(
        "--config",
        default=os.environ.get("ICON_CONFIG"),
        help="path to the JSON config file (default: $ICON_CONFIG or built-ins)",
    )
    args = parser.parse_args(argv)

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
        config = load_config(args.config)
        store = open_store(config)
        service = AppService(store, config)
    except IconError as exc:
        print(f"startup failed: {exc}", file=sys.stderr)
        return 2

    import uvicorn

    uvicorn.run(create_app(service), host=config.host, port=config.port, log_level="info")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Shared fixtures: the Russian fixture corpus, dictionaries, and services."""

from __future__ import annotations

import json
import pathlib
import socket
import threading
import time

import pytest

from icon.analysis import Analyzer, Dictionary
from icon.config import AnalysisConfig, ServerConfig
from icon.library.store import LogStore
from icon.server.service import AppService

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
CORPUS_DIR = FIXTURES / "corpus"
DICTIONARY_FILES = sorted((FIXTURES / "dictionaries").glob("*.json"))


@pytest.fixture(scope="session")
def corpus_texts() -> dict[str, str]:
    """The ten-document fixture corpus keyed by file stem."""
    return {
        path.stem: path.read_text(encoding="utf-8")
        for path in sorted(CORPUS_DIR.glob("*.txt"))
    }


@pytest.fixture(scope="session")
def analyzer() -> Analyzer:
    return Analyzer()


@pytest.fixture(scope="session")
def dictionaries() -> list[Dictionary]:
    return [
        Dictionary.from_dict(json.loads(path.read_text(encoding="utf-8")))
        for path in DICTIONARY_FILES
    ]


@pytest.fixture()
def analysis_config() -> AnalysisConfig:
    return AnalysisConfig()


def make_server_config(tmp_path: pathlib.Path, **overrides) -> ServerConfig:
    overrides.setdefault("data_dir", str(tmp_path / "data"))
    overrides.setdefault("dictionaries", [str(p) for p in DICTIONARY_FILES])
    return ServerConfig(**overrides)


@pytest.fixture()
def service(tmp_path) -> AppService:
    config = make_server_config(tmp_path)
    store = LogStore(config.data_dir)
    svc = AppService(store, config)
    yield svc
    store.close()


def ingest_fixture_corpus(svc: AppService, texts: dict[str, str]) -> list[str]:
    """Ingest the fixture documents; returns their ids in file order."""
    doc_ids = []
    for name in sorted(texts):
        doc = svc.ingest(texts[name], source=f"{name}.txt", actor="tester")
        doc_ids.append(doc["id"])
    return doc_ids


def drive_pipeline(svc: AppService, texts: dict[str, str], until: str = "build") -> dict:
    """Create a project over the fixture corpus and run stages through `until`."""
    doc_ids = ingest_fixture_corpus(svc, texts)
    project = svc.create_project("fixture", actor="tester")
    order = ["corpus", "index", "analyze", "build", "submit_verification"]
    for stage in order[: order.index(until) + 1]:
        params = {"doc_ids": doc_ids, "name": "fixture corpus"} if stage == "corpus" else None
        project = svc.run_stage(project["id"], stage, actor="tester", params=params)
    return project


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture()
def live_server(tmp_path):
    """A real HTTP server over a fresh store; yields (base_url, config)."""
    import uvicorn

    from icon.server.api import create_app

    config = make_server_config(tmp_path, port=free_port())
    store = LogStore(config.data_dir)
    app = create_app(AppService(store, config))
    server = uvicorn.Server(
        uvicorn.Config(app, host=config.host, port=config.port, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10.0
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("test server did not start")
        time.sleep(0.02)
    yield f"http://{config.host}:{config.port}", config
    server.should_exit = True
    thread.join(timeout=5.0)
    store.close()

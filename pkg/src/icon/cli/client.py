"""Thin HTTP client for the logic-tier API.

Error payloads come back as IconError so command code handles one exception
shape; transport failures map to SERVER_UNREACHABLE.
"""

from __future__ import annotations

import json

import httpx

from ..errors import IconError


class ApiClient:
    def __init__(self, server: str, token: str | None = None, timeout: float = 60.0):
        self._http = httpx.Client(base_url=server, timeout=timeout)
        self.token = token

    def close(self) -> None:
        self._http.close()

    def _request(self, method: str, path: str, **kwargs) -> httpx.Response:
        headers = dict(kwargs.pop("headers", None) or {})
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        try:
            response = self._http.request(method, path, headers=headers, **kwargs)
        except httpx.HTTPError as exc:
            raise IconError(
                "SERVER_UNREACHABLE", f"cannot reach server: {exc}", {"server": str(self._http.base_url)}
            )
        if response.status_code >= 400:
            try:
                payload = response.json()
            except ValueError:
                payload = {}
            raise IconError(
                payload.get("error", "SERVER_ERROR"),
                payload.get("message", f"server returned HTTP {response.status_code}"),
                payload.get("detail"),
            )
        return response

    # ------------------------------------------------------------- endpoints

    def login(self, username: str, password: str) -> dict:
        return self._request(
            "POST", "/auth/login", json={"username": username, "password": password}
        ).json()

    def ingest(self, text: str, source: str, title: str | None, language: str | None) -> dict:
        return self._request(
            "POST",
            "/documents",
            json={"text": text, "source": source, "title": title, "language": language},
        ).json()

    def create_project(self, name: str) -> dict:
        return self._request("POST", "/projects", json={"name": name}).json()

    def list_projects(self) -> list[dict]:
        return self._request("GET", "/projects").json()

    def progress(self, project_id: str) -> dict:
        return self._request("GET", f"/projects/{project_id}/progress").json()

    def run_stage(self, project_id: str, stage: str, params: dict | None = None) -> dict:
        return self._request(
            "POST", f"/projects/{project_id}/stages/{stage}", json={"params": params or {}}
        ).json()

    def get_ontology(self, project_id: str, slot: str = "draft") -> dict:
        return self._request(
            "GET", f"/projects/{project_id}/ontology", params={"slot": slot}
        ).json()

    def put_ontology(
        self, project_id: str, doc: dict, slot: str = "draft", if_match: str | None = None
    ) -> dict:
        headers = {"If-Match": f'"{if_match}"'} if if_match else None
        return self._request(
            "PUT",
            f"/projects/{project_id}/ontology",
            params={"slot": slot},
            json=doc,
            headers=headers,
        ).json()

    def verify(self, project_id: str, verdict: str, comment: str = "") -> dict:
        return self._request(
            "POST",
            f"/projects/{project_id}/verify",
            json={"verdict": verdict, "comment": comment},
        ).json()

    def dictionaries(self) -> list[dict]:
        return self._request("GET", "/dictionaries").json()

    def events(self, project_id: str) -> list[dict]:
        """The stored event log, decoded from the SSE snapshot."""
        text = self._request("GET", f"/projects/{project_id}/events").text
        entries = []
        for line in text.splitlines():
            if line.startswith("data: "):
                entries.append(json.loads(line[len("data: ") :]))
        return entries

    def search(self, corpus_id: str, query: str, mode: str = "any") -> dict:
        return self._request(
            "GET", "/search", params={"corpus": corpus_id, "q": query, "mode": mode}
        ).json()

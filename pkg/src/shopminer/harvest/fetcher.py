"""Transport layer: GET-only fetchers behind one interface.

Two implementations: fixture replay from a recorded directory (what every
test and the bundled pipeline runs on) and a thin live HTTP adapter with a
per-host politeness delay.  The fixture store is also the recording format:
``FixtureStore.put`` writes files named by URL hash plus a sidecar index.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlsplit

from shopminer.errors import DataError, FixtureMissError, TransportError

DEFAULT_BODY_CAP = 8 * 1024 * 1024  # bytes
_INDEX_NAME = "index.json"


@dataclass(frozen=True)
class FetchRequest:
    url: str
    method: str = "GET"
    headers: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.method != "GET":
            raise TransportError(f"only GET is supported, got {self.method}")
        parts = urlsplit(self.url)
        if not parts.scheme or not parts.netloc:
            raise TransportError(f"url must be absolute: {self.url!r}")


@dataclass(frozen=True)
class FetchResponse:
    url: str
    status: int
    body: bytes
    headers: dict[str, str] = field(default_factory=dict)
    fetched_at: str = ""  # ISO-8601 UTC

    def __post_init__(self):
        if not 100 <= self.status <= 599:
            raise TransportError(f"status {self.status} outside 100-599")


class Fetcher:
    """Interface: fetch(request) -> FetchResponse, raising TransportError."""

    def fetch(self, request: FetchRequest) -> FetchResponse:
        raise NotImplementedError


def _url_key(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest()[:24]


class FixtureStore:
    """Directory of recorded responses with a URL->file sidecar index."""

    def __init__(self, root):
        self.root = Path(root)

    def _index_path(self) -> Path:
        return self.root / _INDEX_NAME

    def _load_index(self) -> dict:
        path = self._index_path()
        if not path.exists():
            return {"version": 1, "entries": {}}
        try:
            index = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"corrupt fixture index: {exc}", context=str(path)) from exc
        if index.get("version") != 1:
            raise DataError("unsupported fixture index version", context=str(path))
        return index

    def put(
        self,
        url: str,
        body: bytes,
        status: int = 200,
        headers: dict[str, str] | None = None,
        fetched_at: str = "2020-04-01T00:00:00Z",
    ) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        index = self._load_index()
        name = _url_key(url) + ".bin"
        (self.root / name).write_bytes(body)
        index["entries"][url] = {
            "file": name,
            "status": status,
            "headers": headers or {},
            "fetched_at": fetched_at,
        }
        self._index_path().write_text(
            json.dumps(index, indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )

    def get(self, url: str) -> FetchResponse:
        entry = self._load_index()["entries"].get(url)
        if entry is None:
            raise FixtureMissError(f"no fixture recorded for {url}")
        body = (self.root / entry["file"]).read_bytes()
        return FetchResponse(
            url=url,
            status=entry["status"],
            body=body,
            headers=dict(entry.get("headers", {})),
            fetched_at=entry.get("fetched_at", ""),
        )


class FixtureFetcher(Fetcher):
    def __init__(self, store_dir, body_cap: int = DEFAULT_BODY_CAP):
        self.store = FixtureStore(store_dir)
        self.body_cap = body_cap

    def fetch(self, request: FetchRequest) -> FetchResponse:
        response = self.store.get(request.url)
        if len(response.body) > self.body_cap:
            raise TransportError(
                f"fixture body for {request.url} exceeds cap ({len(response.body)} bytes)"
            )
        return response


class LiveFetcher(Fetcher):
    """requests-backed fetcher with a minimum per-host inter-request delay."""

    def __init__(
        self,
        min_delay_ms: int = 1000,
        timeout_s: float = 30.0,
        body_cap: int = DEFAULT_BODY_CAP,
        user_agent: str = "shopminer/0.1",
    ):
        self.min_delay_ms = min_delay_ms
        self.timeout_s = timeout_s
        self.body_cap = body_cap
        self.user_agent = user_agent
        self._last_fetch: dict[str, float] = {}

    def _politeness_wait(self, host: str) -> None:
        last = self._last_fetch.get(host)
        if last is not None and self.min_delay_ms > 0:
            remaining = self.min_delay_ms / 1000.0 - (time.monotonic() - last)
            if remaining > 0:
                time.sleep(remaining)

    def fetch(self, request: FetchRequest) -> FetchResponse:
        import requests  # deferred: fixture-only runs never need it

        host = urlsplit(request.url).netloc
        self._politeness_wait(host)
        headers = {"User-Agent": self.user_agent, **request.headers}
        try:
            resp = requests.get(
                request.url, headers=headers, timeout=self.timeout_s, stream=True
            )
            body = resp.raw.read(self.body_cap + 1, decode_content=True)
        except requests.RequestException as exc:
            raise TransportError(f"GET {request.url} failed: {exc}") from exc
        finally:
            self._last_fetch[host] = time.monotonic()
        if len(body) > self.body_cap:
            raise TransportError(f"{request.url}: body exceeds {self.body_cap} byte cap")
        fetched_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        return FetchResponse(
            url=request.url,
            status=resp.status_code,
            body=body,
            headers=dict(resp.headers),
            fetched_at=fetched_at,
        )

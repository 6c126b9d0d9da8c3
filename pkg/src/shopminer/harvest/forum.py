"""Forum crawling and marketplace-handle extraction.

The crawler is structure driven: it walks board -> thread link structure
breadth first (lexicographic URL order within a level), never revisits a URL,
and harvests two record kinds from each page: poster usernames (taken
verbatim as candidate shop handles) and marketplace links anywhere in the
page, typically post signatures.

Forum HTML is routinely malformed, so parsing sits on html.parser, which
recovers instead of raising.
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Optional
from urllib.parse import urljoin, urlsplit

from shopminer.errors import TransportError
from shopminer.harvest.fetcher import FetchRequest, Fetcher

log = logging.getLogger(__name__)

SOURCE_USERNAME = "forum_username"
SOURCE_SIGNATURE = "forum_signature"

HANDLE_RE = re.compile(r"[a-z0-9._-]+")

_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "source", "track", "wbr",
}


@dataclass(frozen=True)
class HarvestRecord:
    source: str  # SOURCE_USERNAME or SOURCE_SIGNATURE
    forum: str
    raw_value: str
    shop_handle: Optional[str]
    page_url: str


@dataclass(frozen=True)
class CrawlLimits:
    max_pages: int = 200
    max_depth: int = 5
    min_delay_ms: int = 0


@dataclass(frozen=True)
class CrawlRules:
    follow_patterns: tuple[str, ...] = (r"/board/", r"/thread/")
    username_class: str = "username"
    market_hosts: tuple[str, ...] = ("shoppy.gg",)
    same_host_only: bool = True


def normalize_handle(raw: str, grammar: re.Pattern = HANDLE_RE) -> Optional[str]:
    """Lowercase, strip leading '@'; None when the grammar rejects it."""
    candidate = raw.strip().lower().lstrip("@")
    if candidate and grammar.fullmatch(candidate):
        return candidate
    return None


class _PageScan(HTMLParser):
    """One tolerant pass collecting hrefs, username texts and visible text."""

    def __init__(self, username_class: str):
        super().__init__(convert_charrefs=True)
        self.username_class = username_class
        self.links: list[str] = []
        self.usernames: list[str] = []
        self.text_parts: list[str] = []
        self._stack: list[str] = []
        self._captures: list[tuple[int, list[str]]] = []  # (depth, parts)

    def handle_starttag(self, tag, attrs):
        attrs_d = dict(attrs)
        if tag == "a" and attrs_d.get("href"):
            self.links.append(attrs_d["href"])
        if tag in _VOID_TAGS:
            return
        self._stack.append(tag)
        classes = (attrs_d.get("class") or "").split()
        if self.username_class in classes:
            self._captures.append((len(self._stack), []))

    def handle_endtag(self, tag):
        if tag not in self._stack:
            return  # stray close tag: recover silently
        while self._stack:
            if self._stack.pop() == tag:
                break
        depth = len(self._stack)
        still_open = []
        for cap_depth, parts in self._captures:
            if cap_depth > depth:
                self._finish(parts)
            else:
                still_open.append((cap_depth, parts))
        self._captures = still_open

    def handle_data(self, data):
        self.text_parts.append(data)
        for _, parts in self._captures:
            parts.append(data)

    def _finish(self, parts):
        name = "".join(parts).strip()
        if name:
            self.usernames.append(name)

    def close(self):
        super().close()
        for _, parts in self._captures:
            self._finish(parts)
        self._captures = []


def _scan(html: bytes, username_class: str = "username") -> _PageScan:
    scanner = _PageScan(username_class)
    try:
        scanner.feed(html.decode("utf-8", errors="replace"))
        scanner.close()
    except Exception as exc:  # html.parser recovers; anything else is diagnostic-only
        log.warning("page scan aborted: %s", exc)
    return scanner


def _handle_from_url(
    url: str, hosts: tuple[str, ...], grammar: re.Pattern = HANDLE_RE
) -> Optional[str]:
    parts = urlsplit(url if "://" in url else "https://" + url)
    host = parts.netloc.lower()
    if host.startswith("www."):
        host = host[4:]
    if host not in hosts:
        return None
    segments = [s for s in parts.path.split("/") if s]
    if not segments:
        return None
    return normalize_handle(segments[0], grammar)


def _signature_matches(
    html: bytes,
    hosts: tuple[str, ...] = ("shoppy.gg",),
    handle_grammar: re.Pattern = HANDLE_RE,
) -> list[tuple[str, str]]:
    """Distinct (raw url, handle) pairs from anchors and visible text."""
    scanner = _scan(html)
    host_alt = "|".join(re.escape(h) for h in hosts)
    text_re = re.compile(
        r"(?:https?://)?(?:www\.)?(?:%s)/@?[A-Za-z0-9._-]+" % host_alt, re.IGNORECASE
    )
    candidates = list(scanner.links)
    candidates.extend(text_re.findall("".join(scanner.text_parts)))

    seen: set[str] = set()
    out = []
    for raw in candidates:
        handle = _handle_from_url(raw, hosts, handle_grammar)
        if handle is not None and handle not in seen:
            seen.add(handle)
            out.append((raw, handle))
    return out


def extract_signature_links(
    html: bytes,
    hosts: tuple[str, ...] = ("shoppy.gg",),
    handle_grammar: re.Pattern = HANDLE_RE,
) -> list[str]:
    """Distinct normalized shop handles referenced by marketplace URLs."""
    return [h for _, h in _signature_matches(html, hosts, handle_grammar)]


def crawl_forum(
    seed_url: str,
    fetcher: Fetcher,
    limits: CrawlLimits = CrawlLimits(),
    rules: CrawlRules = CrawlRules(),
    forum: str = "forum",
) -> list[HarvestRecord]:
    """Breadth-first crawl from the seed, bounded by ``limits``.

    Record order is deterministic for identical responses: page order is BFS
    with lexicographic tie-breaking, and within a page usernames precede
    signature links, each in document order.  A failed seed fetch raises;
    failures elsewhere skip the page with a warning.
    """
    seed_host = urlsplit(seed_url).netloc
    records: list[HarvestRecord] = []
    queued = {seed_url}
    level = [seed_url]
    pages_fetched = 0
    depth = 0

    while level and pages_fetched < limits.max_pages and depth <= limits.max_depth:
        next_level: set[str] = set()
        for url in level:
            if pages_fetched >= limits.max_pages:
                break
            if pages_fetched > 0 and limits.min_delay_ms > 0:
                time.sleep(limits.min_delay_ms / 1000.0)
            pages_fetched += 1
            try:
                response = fetcher.fetch(FetchRequest(url=url))
            except TransportError as exc:
                if url == seed_url:
                    raise
                log.warning("skipping page %s: %s", url, exc)
                continue
            if not 200 <= response.status < 300:
                if url == seed_url:
                    raise TransportError(f"seed {url} returned status {response.status}")
                log.warning("skipping page %s: status %d", url, response.status)
                continue

            scanner = _scan(response.body, rules.username_class)
            for name in scanner.usernames:
                records.append(
                    HarvestRecord(
                        source=SOURCE_USERNAME,
                        forum=forum,
                        raw_value=name,
                        shop_handle=normalize_handle(name),
                        page_url=url,
                    )
                )
            for raw, handle in _signature_matches(response.body, rules.market_hosts):
                records.append(
                    HarvestRecord(
                        source=SOURCE_SIGNATURE,
                        forum=forum,
                        raw_value=raw,
                        shop_handle=handle,
                        page_url=url,
                    )
                )
            for href in scanner.links:
                absolute = urljoin(url, href).split("#", 1)[0]
                if rules.same_host_only and urlsplit(absolute).netloc != seed_host:
                    continue
                if not any(re.search(p, absolute) for p in rules.follow_patterns):
                    continue
                if absolute not in queued:
                    queued.add(absolute)
                    next_level.add(absolute)
        level = sorted(next_level)
        depth += 1

    return records

"""Offline web-harvest utilities: HTML block extraction and fetch throttling.

Operates purely on local page corpora (a directory of ``<site_id>/<page_id>.html``
files); nothing here opens a network connection. Extraction walks the HTML
with the stdlib tolerant parser and emits visible text blocks; throttling
turns per-site page volumes into an inter-fetch delay and a round-robin
schedule.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path

from .errors import ValidationError

#: Elements that open or close a text block. ``<br>`` additionally splits a
#: block without nesting.
_BLOCK_TAGS = frozenset(
    {"p", "div", "li", "h1", "h2", "h3", "h4", "h5", "h6", "td"}
)
_SKIP_TAGS = frozenset({"script", "style"})

DEFAULT_BANDWIDTH = 1024 * 1024  # bytes per second


@dataclass(frozen=True)
class PageSet:
    """All harvested pages of one site."""

    site_id: str
    pages: tuple  # of (page_id, html, size_bytes)

    def __post_init__(self):
        object.__setattr__(self, "pages", tuple(tuple(p) for p in self.pages))
        seen = set()
        for page_id, html, size_bytes in self.pages:
            if page_id in seen:
                raise ValidationError(
                    f"duplicate page id {page_id!r} in site {self.site_id!r}"
                )
            seen.add(page_id)
            if size_bytes != len(html.encode("utf-8")):
                raise ValidationError(
                    f"size_bytes of page {page_id!r} does not match its html"
                )

    @property
    def total_bytes(self) -> int:
        return sum(size for _, _, size in self.pages)


@dataclass(frozen=True)
class ThrottleConfig:
    bandwidth: float = DEFAULT_BANDWIDTH  # bytes per second

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValidationError("bandwidth must be positive")


class _BlockParser(HTMLParser):
    """Accumulates character data, flushing a block at block-tag boundaries."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.blocks = []
        self._buffer = []
        self._skip_depth = 0

    def _flush(self):
        text = " ".join("".join(self._buffer).split())
        self._buffer = []
        if text:
            self.blocks.append(text)

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag in _BLOCK_TAGS or tag == "br":
            self._flush()

    def handle_startendtag(self, tag, attrs):
        if tag in _BLOCK_TAGS or tag == "br":
            self._flush()

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(self._skip_depth - 1, 0)
        elif tag in _BLOCK_TAGS:
            self._flush()

    def handle_data(self, data):
        if not self._skip_depth:
            self._buffer.append(data)

    def close(self):
        super().close()
        self._flush()


def extract_page(html) -> list:
    """Visible text blocks of one HTML document, in document order.

    One block per block-level element (``p``, ``div``, ``li``, headings,
    table cells, ``br``-separated runs); script/style/comment content is
    dropped, entities are decoded, and each block is whitespace-normalized.
    Total: malformed markup is tolerated and undecodable bytes yield ``[]``.
    """
    if isinstance(html, bytes):
        try:
            html = html.decode("utf-8")
        except UnicodeDecodeError:
            return []
    parser = _BlockParser()
    parser.feed(html)
    parser.close()
    return parser.blocks


def scrape_site(site: PageSet) -> list:
    """Union of block extractions over the site's pages, first-seen order."""
    seen = set()
    blocks = []
    for _, html, _ in site.pages:
        for block in extract_page(html):
            if block not in seen:
                seen.add(block)
                blocks.append(block)
    return blocks


def throttle_delay(site_sizes, cfg: ThrottleConfig) -> float:
    """Mean of size/bandwidth over sites: the adaptive inter-fetch delay."""
    sizes = list(site_sizes)
    if not sizes:
        raise ValidationError("throttle_delay needs at least one site size")
    return sum(size / cfg.bandwidth for size in sizes) / len(sizes)


def schedule_fetch(sites, cfg: ThrottleConfig) -> list:
    """Round-robin fetch schedule: list of (page_id, start_seconds).

    The delay between consecutive fetches is ``throttle_delay`` of the
    per-site total byte sizes at scheduling time; the first fetch starts at 0.
    """
    sites = list(sites)
    if not sites:
        raise ValidationError("schedule_fetch needs at least one site")
    delay = throttle_delay([site.total_bytes for site in sites], cfg)
    queues = [list(site.pages) for site in sites]
    order = []
    while any(queues):
        for queue in queues:
            if queue:
                page_id, _, _ = queue.pop(0)
                order.append(page_id)
    return [(page_id, i * delay) for i, page_id in enumerate(order)]


def load_page_dir(root) -> list:
    """Read a ``<site_id>/<page_id>.html`` tree into PageSets, sorted by id."""
    root = Path(root)
    if not root.is_dir():
        raise ValidationError(f"page corpus root {str(root)!r} is not a directory")
    sites = []
    for site_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        pages = []
        for page_path in sorted(site_dir.glob("*.html")):
            data = page_path.read_bytes()
            try:
                html = data.decode("utf-8")
            except UnicodeDecodeError:
                html = ""
            pages.append((page_path.stem, html, len(html.encode("utf-8"))))
        sites.append(PageSet(site_id=site_dir.name, pages=tuple(pages)))
    return sites


def save_schedule(schedule, path) -> None:
    body = "".join(f"{page_id}\t{start!r}\n" for page_id, start in schedule)
    Path(path).write_bytes(body.encode("utf-8"))

"""Pipeline configuration: one JSON file drives every stage.

Defaults match the values each module documents; the config round-trips
losslessly through to_dict/from_dict (tested), and unknown keys are rejected
so typos surface instead of silently falling back to defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from shopminer.errors import DataError
from shopminer.market_stats.stats import DEFAULT_BIN_EDGES, DEFAULT_FLAG_KEYWORDS


@dataclass
class ForumSeed:
    name: str
    seed_url: str


@dataclass
class HarvestConfig:
    forums: list[ForumSeed] = field(default_factory=list)
    fixture_dir: str | None = None
    live: bool = False
    max_pages: int = 200
    max_depth: int = 5
    min_delay_ms: int | None = None  # None: 0 on fixtures, 1000 live
    market_hosts: list[str] = field(default_factory=lambda: ["shoppy.gg"])
    api_base: str = "https://shoppy.gg"
    retries: int = 3
    follow_patterns: list[str] = field(default_factory=lambda: ["/board/", "/thread/"])
    username_class: str = "username"

    def effective_delay_ms(self) -> int:
        if self.min_delay_ms is not None:
            return self.min_delay_ms
        return 1000 if self.live else 0


@dataclass
class CorpusConfig:
    min_token_len: int = 2
    extra_stopwords: list[str] = field(default_factory=list)
    disable_default_stopwords: bool = False
    min_df: int = 2
    max_df_ratio: float = 0.5


@dataclass
class LdaConfig:
    k: int = 20
    alpha: float | None = None  # None -> 5/k
    beta: float = 0.01
    iterations: int = 1000
    average_samples: int = 0


@dataclass
class CoherenceConfig:
    k_values: list[int] = field(default_factory=lambda: list(range(5, 51, 5)))
    window_width: int = 110
    top_n: int = 20


@dataclass
class TermrankConfig:
    relevance_lambda: float = 0.6
    augment_terms: list[str] = field(default_factory=lambda: ["db"])
    query_top_terms: int = 3
    key_terms: int = 20
    samples_per_topic: int = 3


@dataclass
class StatsConfig:
    bin_edges: list[float] = field(default_factory=lambda: list(DEFAULT_BIN_EDGES))
    flag_price_threshold: float = 500.0
    flag_keywords: list[str] = field(default_factory=lambda: list(DEFAULT_FLAG_KEYWORDS))


@dataclass
class OutputConfig:
    dir: str = "out"


@dataclass
class PipelineConfig:
    seed: int = 0
    harvest: HarvestConfig = field(default_factory=HarvestConfig)
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    lda: LdaConfig = field(default_factory=LdaConfig)
    coherence: CoherenceConfig = field(default_factory=CoherenceConfig)
    termrank: TermrankConfig = field(default_factory=TermrankConfig)
    stats: StatsConfig = field(default_factory=StatsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict, context: str = "<config>") -> "PipelineConfig":
        return _build(cls, data, context)


def _build(dc_type, data, context):
    if not isinstance(data, dict):
        raise DataError(f"expected object for {dc_type.__name__}", context=context)
    fields = {f.name: f for f in dataclasses.fields(dc_type)}
    unknown = set(data) - set(fields)
    if unknown:
        raise DataError(
            f"unknown {dc_type.__name__} keys: {sorted(unknown)}", context=context
        )
    kwargs = {}
    for name, value in data.items():
        ftype = fields[name].type
        if name == "forums":
            kwargs[name] = [_build(ForumSeed, v, context) for v in value]
        elif isinstance(ftype, str) and ftype in _SECTION_TYPES:
            kwargs[name] = _build(_SECTION_TYPES[ftype], value, context)
        else:
            kwargs[name] = value
    try:
        return dc_type(**kwargs)
    except TypeError as exc:
        raise DataError(f"bad {dc_type.__name__}: {exc}", context=context) from exc


_SECTION_TYPES = {
    "HarvestConfig": HarvestConfig,
    "CorpusConfig": CorpusConfig,
    "LdaConfig": LdaConfig,
    "CoherenceConfig": CoherenceConfig,
    "TermrankConfig": TermrankConfig,
    "StatsConfig": StatsConfig,
    "OutputConfig": OutputConfig,
}


def load_config(path) -> PipelineConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError("config file not found", context=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid config JSON: {exc}", context=str(path)) from exc
    return PipelineConfig.from_dict(data, context=str(path))


def save_config(config: PipelineConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

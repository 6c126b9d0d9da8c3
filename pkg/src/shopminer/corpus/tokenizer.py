"""Title tokenization.

Marketplace titles are short, noisy and full of jargon ("combolist", "nfa",
"cpm", "528m"), so the pipeline deliberately keeps filtering light: length
floor of 2, no stemming by default, and a small stopword list limited to
function words.  Every knob is configurable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional

# Function words only. Aggressive lists would eat domain-bearing terms such
# as "full", "free" or "list" that matter in product titles.
DEFAULT_STOPWORDS = frozenset(
    """
    a an the and or but if not no nor so of for to in into on onto at with
    by from as is are was were be been being am it its this that these those
    there here then than you your yours we us our ours they them their theirs
    he him his she her hers i me my mine do does did done has have had having
    will would shall should can could may might must about above after all
    any before below between both down during each few more most other out
    over own same some such under until up very while what when where which
    who whom why how
    """.split()
)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass(frozen=True)
class TokenizerConfig:
    min_len: int = 2
    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    drop_pure_digits: bool = True
    # Optional per-token rewrite applied after all filters; None keeps tokens
    # verbatim. Off by default: no lemmatizer ships with the package.
    lemmatizer: Optional[Callable[[str], str]] = field(default=None, compare=False)


def tokenize(text: str, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    """Lowercase, split on non-alphanumeric runs and filter.

    Pure digits ("528", "40") are dropped; digit-letter mixes ("528m",
    "combo4u") are kept.  Deterministic: same input, same output.
    """
    out = []
    for token in _TOKEN_RE.findall(text.lower()):
        if len(token) < config.min_len:
            continue
        if config.drop_pure_digits and token.isdigit():
            continue
        if token in config.stopwords:
            continue
        if config.lemmatizer is not None:
            token = config.lemmatizer(token)
            if not token:
                continue
        out.append(token)
    return out

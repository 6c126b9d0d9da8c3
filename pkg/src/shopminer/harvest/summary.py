"""Harvest summary: collected vs. validated handle counts per source.

Per-row counts are distinct handles within one (forum, source); the totals
row deduplicates across all rows, so row counts may sum to more than the
total when the same handle shows up through several sources.
"""

from __future__ import annotations

from dataclasses import dataclass

from shopminer.harvest.forum import SOURCE_SIGNATURE, SOURCE_USERNAME, HarvestRecord

_SOURCE_LABEL = {SOURCE_USERNAME: "usernames", SOURCE_SIGNATURE: "signatures"}


@dataclass(frozen=True)
class SummaryRow:
    forum: str
    source: str
    collected: int
    valid: int


@dataclass
class HarvestSummary:
    rows: list[SummaryRow]
    total_collected: int
    total_valid: int


def build_summary(records: list[HarvestRecord], valid_handles) -> HarvestSummary:
    valid_set = set(valid_handles)
    groups: dict[tuple[str, str], set[str]] = {}
    all_handles: set[str] = set()
    for record in records:
        if record.shop_handle is None:
            continue
        groups.setdefault((record.forum, record.source), set()).add(record.shop_handle)
        all_handles.add(record.shop_handle)

    rows = [
        SummaryRow(
            forum=forum,
            source=source,
            collected=len(handles),
            valid=len(handles & valid_set),
        )
        for (forum, source), handles in sorted(groups.items())
    ]
    return HarvestSummary(
        rows=rows,
        total_collected=len(all_handles),
        total_valid=len(all_handles & valid_set),
    )


def summary_to_tsv(summary: HarvestSummary) -> str:
    lines = ["source\tcollected\tvalid"]
    for row in summary.rows:
        label = _SOURCE_LABEL.get(row.source, row.source)
        lines.append(f"{row.forum} - {label}\t{row.collected}\t{row.valid}")
    lines.append(f"total (unique)\t{summary.total_collected}\t{summary.total_valid}")
    return "\n".join(lines) + "\n"

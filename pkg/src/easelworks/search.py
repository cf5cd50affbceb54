"""Keyword search over captions and generation parameter text.

Case-insensitive token prefix matching with term-frequency ranking. The
index is derived state: it is rebuilt from the document on load and updated
in place when captions or runs change.
"""

from __future__ import annotations

import re
from collections import defaultdict

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class SearchIndex:
    def __init__(self):
        # token -> asset_id -> tf
        self._postings: dict[str, dict[str, int]] = defaultdict(dict)
        # asset_id -> {source -> text}, kept so sources can be replaced on change
        self._texts: dict[str, dict[str, str]] = defaultdict(dict)

    def set_text(self, asset_id: str, source: str, text: str | None) -> None:
        """Replace one text source (e.g. 'caption', 'prompt') for an asset."""
        old = self._texts[asset_id].pop(source, None)
        if old is not None:
            for tok in tokenize(old):
                entry = self._postings.get(tok)
                if entry and asset_id in entry:
                    entry[asset_id] -= 1
                    if entry[asset_id] <= 0:
                        del entry[asset_id]
                    if not entry:
                        del self._postings[tok]
        if text:
            self._texts[asset_id][source] = text
            for tok in tokenize(text):
                self._postings[tok][asset_id] = self._postings[tok].get(asset_id, 0) + 1

    def indexed_text(self, asset_id: str) -> str:
        return " ".join(self._texts.get(asset_id, {}).values())

    def query(self, q: str) -> list[tuple[str, int]]:
        """Return (asset_id, score) sorted by score desc, then id.

        Every query token must prefix-match at least one indexed token of
        the asset (AND semantics across query tokens).
        """
        q_tokens = tokenize(q)
        if not q_tokens:
            return []
        per_token_scores: list[dict[str, int]] = []
        for qt in q_tokens:
            scores: dict[str, int] = {}
            for tok, posting in self._postings.items():
                if tok.startswith(qt):
                    for asset_id, tf in posting.items():
                        scores[asset_id] = scores.get(asset_id, 0) + tf
            per_token_scores.append(scores)
        hits = set(per_token_scores[0])
        for scores in per_token_scores[1:]:
            hits &= set(scores)
        ranked = [(a, sum(s.get(a, 0) for s in per_token_scores)) for a in hits]
        ranked.sort(key=lambda pair: (-pair[1], pair[0]))
        return ranked

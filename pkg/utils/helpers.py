"""Helper functions."""

from datetime import datetime, timezone
from typing import Optional

import numpy as np


def trial_rng(seed: Optional[int], index: int) -> np.random.Generator:
    """
    Independent generator for trial ``index`` of a run seeded with ``seed``.

    Streams depend only on (seed, index), so shards of a run can be computed in
    any order and merged.
    """
    entropy = [0 if seed is None else int(seed), int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def format_date(date: Optional[datetime] = None) -> str:
    """UTC timestamp in ISO format."""
    date = date or datetime.now(timezone.utc)
    return date.strftime("%Y-%m-%dT%H:%M:%SZ")


def truncate_text(text: str, max_length: int = 100) -> str:
    """Truncate text to max length."""
    if len(text) <= max_length:
        return text
    return text[: max_length - 3] + "..."

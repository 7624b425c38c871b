"""Deterministic expansion of one user-facing seed into per-site streams.

Every sampling site gets its own ``random.Random`` seeded with
SHA-256("epm/<root>/<label>/<label>/..."), so runs with the same seed and
arguments are byte-identical while distinct sites stay decorrelated.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["derive_seed", "make_rng"]


def derive_seed(root: int, *labels: object) -> int:
    material = "epm/" + "/".join(str(part) for part in (root, *labels))
    return int.from_bytes(hashlib.sha256(material.encode()).digest()[:16], "big")


def make_rng(root: int, *labels: object) -> random.Random:
    return random.Random(derive_seed(root, *labels))

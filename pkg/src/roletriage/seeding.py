"""Deterministic sub-seed derivation.

All randomness flows from one master seed; sub-seeds come from hashing
(master, purpose) so adding a new consumer never perturbs existing ones.
Uses sha256, not Python's hash(), to stay stable across runs and platforms.
"""
from __future__ import annotations

import hashlib


def derive_seed(master: int, purpose: str) -> int:
    digest = hashlib.sha256(f"{master}:{purpose}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") % (2**63)

"""Signed supports: the common currency of every recovery method."""
from __future__ import annotations

import hashlib
from typing import Iterable

import numpy as np


class SignedSupport(frozenset):
    """Frozen set of ``(index, sign)`` pairs with sign in {-1, +1}."""

    def __new__(cls, entries: Iterable[tuple[int, int]] = ()):
        items = [(int(j), int(s)) for j, s in entries]
        for _, s in items:
            if s not in (-1, 1):
                raise ValueError(f"sign must be +-1, got {s}")
        idx = [j for j, _ in items]
        if len(set(idx)) != len(idx):
            raise ValueError("indices in a signed support must be unique")
        return super().__new__(cls, items)

    @classmethod
    def of(cls, v) -> "SignedSupport":
        v = np.asarray(v)
        nz = np.flatnonzero(v)
        return cls((j, 1 if v[j] > 0 else -1) for j in nz)

    @property
    def indices(self) -> list[int]:
        return sorted(j for j, _ in self)

    def flipped(self) -> "SignedSupport":
        return SignedSupport((j, -s) for j, s in self)

    def as_list(self) -> list[list[int]]:
        return [[j, s] for j, s in sorted(self)]

    def digest(self) -> str:
        text = ";".join(f"{j}:{s:+d}" for j, s in sorted(self))
        return hashlib.sha1(text.encode()).hexdigest()[:12]

    def __repr__(self):
        return f"SignedSupport({sorted(self)})"


def signed_support(v) -> SignedSupport:
    return SignedSupport.of(v)

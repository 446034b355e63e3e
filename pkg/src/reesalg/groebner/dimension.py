"""Krull dimension of monomial ideals via minimum hitting sets."""

from __future__ import annotations

from typing import Iterable


def minimal_supports(monomials: Iterable[tuple[int, ...]]) -> list[frozenset[int]]:
    """Inclusion-minimal variable supports of the given monomials."""
    sups = sorted({frozenset(i for i, a in enumerate(e) if a) for e in monomials}, key=len)
    out: list[frozenset[int]] = []
    for s in sups:
        if not any(t <= s for t in out):
            out.append(s)
    return out


def min_hitting_set_size(supports: list[frozenset[int]]) -> int:
    """Size of the smallest variable set meeting every support.

    Equals the height of the monomial ideal.  Branches on the smallest
    support not yet hit.
    """
    if any(not s for s in supports):
        raise ValueError("unit ideal has no height")
    best = [len(set().union(*supports)) if supports else 0]

    def search(chosen: frozenset[int], remaining: list[frozenset[int]]):
        if len(chosen) >= best[0]:
            return
        if not remaining:
            best[0] = len(chosen)
            return
        pivot = min(remaining, key=len)
        for v in sorted(pivot):
            c2 = chosen | {v}
            search(c2, [s for s in remaining if v not in s])

    search(frozenset(), supports)
    return best[0]


def monomial_height(monomials: Iterable[tuple[int, ...]]) -> int:
    return min_hitting_set_size(minimal_supports(monomials))


def monomial_dimension(monomials: Iterable[tuple[int, ...]], nvars: int) -> int:
    """dim k[x]/(monomials) = size of the largest independent variable set."""
    return nvars - monomial_height(monomials)

"""Buchberger kernel on packed monomials.

A monomial is one Python int: the order key (linear in the exponents) sits in
the high half, the raw exponent vector in the low half, FIELD bits per entry.
Because the key is linear, monomial product is integer addition and the
integer comparison is the monomial order.  Divisibility uses guard bits on
the raw half.

Polynomials inside the kernel are dicts {packed monomial: coefficient}; basis
elements are kept monic as (lead, tail) with tail a list of (mon, coeff).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

FIELD = 16
GUARD = 1 << (FIELD - 1)
FMASK = (1 << FIELD) - 1


class GroebnerBudgetExceeded(RuntimeError):
    """The configured pair budget ran out before the basis was complete."""


class Context:
    """Packing scheme for one (nvars, order) pair plus the coefficient field."""

    def __init__(self, nvars: int, blocks: tuple[tuple[int, ...], ...], p: int | None,
                 weights: tuple[int, ...] | None = None):
        self.n = nvars
        self.blocks = blocks
        self.p = p
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        n = nvars
        self.raw_bits = FIELD * n
        self.raw_mask = (1 << self.raw_bits) - 1
        self.raw_guard = sum(GUARD << (FIELD * i) for i in range(n))
        self.all_guard = self.raw_guard | (self.raw_guard << self.raw_bits)
        # key field k is a 0/1 combination of exponents; record it for packing
        rows = []
        for block in blocks:
            rows.append(tuple(block))
            for cut in range(len(block) - 1, 0, -1):
                rows.append(tuple(block[:cut]))
        self.key_rows = rows
        # contribution of a unit exponent in variable v to the packed int
        unit = []
        for v in range(n):
            u = 1 << (FIELD * (n - 1 - v))
            for r, row in enumerate(rows):
                if v in row:
                    u += 1 << (self.raw_bits + FIELD * (n - 1 - r))
            unit.append(u)
        self.unit = unit

    def pack(self, exps) -> int:
        out = 0
        for v, a in enumerate(exps):
            if a:
                if a >= GUARD:
                    raise OverflowError("exponent too large for packed monomial")
                out += a * self.unit[v]
        return out

    def unpack(self, mon: int) -> tuple[int, ...]:
        n = self.n
        return tuple((mon >> (FIELD * (n - 1 - v))) & FMASK for v in range(n))

    def degree(self, mon: int) -> int:
        w = self.weights
        return sum(a * b for a, b in zip(w, self.unpack(mon)))

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack(tuple(x if x > y else y for x, y in zip(ea, eb)))

    def divides(self, b: int, a: int) -> bool:
        """b | a."""
        g = self.raw_guard
        return (((a & self.raw_mask) | g) - (b & self.raw_mask)) & g == g

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.unpack(a), self.unpack(b)
        return not any(x and y for x, y in zip(ea, eb))

    def check(self, mon: int):
        if mon & self.all_guard:
            raise OverflowError("exponent overflow in packed monomial")

    def from_terms(self, terms: dict) -> dict:
        return {self.pack(e): c for e, c in terms.items()}

    def to_terms(self, poly: dict) -> dict:
        return {self.unpack(m): c for m, c in poly.items()}


@dataclass
class Stats:
    pairs_created: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0


class Basis:
    """Monic polynomials with packed leads; supports full reduction."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.lead: list[int] = []
        self.tail: list[list[tuple[int, object]]] = []
        self.raw: list[int] = []
        self.active: list[int] = []

    def add(self, poly: dict) -> int:
        """Append a monic polynomial (given as dict); returns its index."""
        lm = max(poly)
        self.lead.append(lm)
        self.tail.append([(m, c) for m, c in poly.items() if m != lm])
        self.raw.append(lm & self.ctx.raw_mask)
        return len(self.lead) - 1

    def poly(self, i: int) -> dict:
        out = dict(self.tail[i])
        out[self.lead[i]] = 1
        return out

    def reduce(self, f: dict, reducers: list[int] | None = None, full: bool = True) -> dict:
        """Remainder of f modulo the reducers (default: active set).

        ``f`` is consumed.  With ``full=False`` stops at the first
        irreducible leading term and returns the rest untouched.
        """
        ctx = self.ctx
        p = ctx.p
        rmask = ctx.raw_mask
        g = ctx.raw_guard
        red = self.active if reducers is None else reducers
        lead = self.lead
        tails = self.tail
        cand = [(self.raw[j], lead[j], tails[j]) for j in red]
        heap = [-m for m in f]
        heapq.heapify(heap)
        rem = {}
        push = heapq.heappush
        pop = heapq.heappop
        while heap:
            m = -pop(heap)
            c = f.pop(m, None)
            if c is None:
                continue
            a = (m & rmask) | g
            for rb, lb, tl in cand:
                if (a - rb) & g == g:
                    q = m - lb
                    if p is not None:
                        for mt, ct in tl:
                            t = mt + q
                            v = f.get(t)
                            if v is None:
                                f[t] = (-c * ct) % p
                                push(heap, -t)
                            else:
                                v = (v - c * ct) % p
                                if v:
                                    f[t] = v
                                else:
                                    del f[t]
                    else:
                        for mt, ct in tl:
                            t = mt + q
                            v = f.get(t)
                            if v is None:
                                f[t] = -c * ct
                                push(heap, -t)
                            else:
                                v = v - c * ct
                                if v:
                                    f[t] = v
                                else:
                                    del f[t]
                    break
            else:
                rem[m] = c
                if not full:
                    for mm in f:
                        rem[mm] = f[mm]
                    return rem
        return rem


def _monic(poly: dict, p: int | None) -> dict:
    lc = poly[max(poly)]
    if lc == 1:
        return poly
    if p is None:
        inv = 1 / lc
        return {m: c * inv for m, c in poly.items()}
    inv = pow(lc, -1, p)
    return {m: c * inv % p for m, c in poly.items()}


def spoly(basis: Basis, i: int, j: int) -> dict:
    ctx = basis.ctx
    p = ctx.p
    li, lj = basis.lead[i], basis.lead[j]
    l = ctx.lcm(li, lj)
    qi, qj = l - li, l - lj
    out: dict = {}
    for m, c in basis.tail[i]:
        out[m + qi] = c
    for m, c in basis.tail[j]:
        t = m + qj
        v = out.get(t, 0) - c
        if p is not None:
            v %= p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


class Buchberger:
    """Incremental Buchberger with Gebauer-Moeller pair management.

    Pairs are selected by the normal strategy (least weighted degree of the
    lcm, then least lcm, then generator indices), so runs are reproducible.
    """

    def __init__(self, ctx: Context, max_pairs: int | None = None):
        self.ctx = ctx
        self.basis = Basis(ctx)
        self.pairs: list[tuple[int, int, int, int, int]] = []  # (deg, lcm, i, j, lcm)
        self.max_pairs = max_pairs
        self.stats = Stats()
        self.done_degree = -1

    # pair bookkeeping

    def _update(self, h: int):
        ctx = self.ctx
        B = self.basis
        mh = B.lead[h]
        G = B.active
        C = []
        for g in G:
            mg = B.lead[g]
            C.append((g, ctx.lcm(mh, mg), ctx.coprime(mh, mg)))
        D = []
        while C:
            g, lhg, cop = C.pop()
            if cop or (not any(ctx.divides(l2, lhg) for _, l2, _ in C)
                       and not any(ctx.divides(l2, lhg) for _, l2, _ in D)):
                D.append((g, lhg, cop))
        kept = []
        for pr in self.pairs:
            _, l12, g1, g2, _ = pr
            if (not ctx.divides(mh, l12) or ctx.lcm(B.lead[g1], mh) == l12
                    or ctx.lcm(B.lead[g2], mh) == l12):
                kept.append(pr)
        for g, lhg, cop in D:
            if not cop:
                i, j = (g, h) if g < h else (h, g)
                kept.append((ctx.degree(lhg), lhg, i, j, lhg))
                self.stats.pairs_created += 1
        if self.max_pairs is not None and self.stats.pairs_created > self.max_pairs:
            raise GroebnerBudgetExceeded(
                f"pair budget {self.max_pairs} exceeded ({self.stats.pairs_created} pairs)")
        self.pairs = kept
        B.active = [g for g in G if not ctx.divides(mh, B.lead[g])] + [h]

    def add_generator(self, poly: dict):
        """Reduce and insert an input generator (any degree)."""
        if not poly:
            return
        r = self.basis.reduce(dict(poly))
        if r:
            self._insert(_monic(r, self.ctx.p))

    def _insert(self, poly: dict):
        h = self.basis.add(poly)
        self._update(h)

    def run(self, degree_bound: int | None = None):
        """Process pairs; with a bound, leave pairs of larger degree queued."""
        B = self.basis
        while self.pairs:
            best = min(self.pairs)
            if degree_bound is not None and best[0] > degree_bound:
                break
            self.pairs.remove(best)
            _, _, i, j, _ = best
            s = spoly(B, i, j)
            self.stats.pairs_reduced += 1
            r = B.reduce(s) if s else s
            if r:
                self._insert(_monic(r, self.ctx.p))
            else:
                self.stats.zero_reductions += 1

    def reduced_basis(self) -> list[dict]:
        """Interreduced monic basis, sorted by descending leading monomial."""
        B = self.basis
        act = sorted(B.active, key=lambda i: B.lead[i])
        out = []
        for i in act:
            others = [j for j in act if j != i]
            tail = B.reduce(dict(B.tail[i]), reducers=others)
            tail[B.lead[i]] = 1
            out.append(tail)
        out.sort(key=max, reverse=True)
        return out


def groebner(polys: list[dict], ctx: Context, max_pairs: int | None = None,
             degree_bound: int | None = None) -> tuple[list[dict], Stats]:
    """Reduced Groebner basis of packed input polynomials."""
    bb = Buchberger(ctx, max_pairs)
    for f in sorted((f for f in polys if f), key=lambda f: (ctx.degree(max(f)), max(f))):
        bb.add_generator(f)
        if bb.basis.active and any(not (bb.basis.lead[i] & ctx.raw_mask) for i in bb.basis.active):
            return [{0: 1}], bb.stats
    bb.run(degree_bound)
    for i in bb.basis.active:
        if not (bb.basis.lead[i] & ctx.raw_mask):
            return [{0: 1}], bb.stats
    return bb.reduced_basis(), bb.stats


def basis_from_reduced(polys: list[dict], ctx: Context) -> Basis:
    b = Basis(ctx)
    for f in polys:
        b.add(f)
    b.active = list(range(len(polys)))
    return b


def s_pairs_reduce_to_zero(polys: list[dict], ctx: Context) -> bool:
    """Buchberger's criterion checked over every pair, no shortcuts."""
    b = basis_from_reduced([_monic(dict(f), ctx.p) for f in polys], ctx)
    n = len(polys)
    for i in range(n):
        for j in range(i + 1, n):
            s = spoly(b, i, j)
            if s and b.reduce(s):
                return False
    return True

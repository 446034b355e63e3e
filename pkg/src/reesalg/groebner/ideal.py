"""Ideals of k[x, T] and the operations built on Groebner bases."""

from __future__ import annotations

import contextlib
import contextvars
import threading
from typing import Iterable, Sequence

from ..polyring import MonomialOrder, Polynomial, RingMismatch, RingSpec
from . import _engine
from ._engine import Context
from .dimension import monomial_height

DEFAULT_MAX_PAIRS = 500_000

_max_pairs = contextvars.ContextVar("max_pairs", default=DEFAULT_MAX_PAIRS)
_certify = contextvars.ContextVar("certify", default=False)


class CertificationLog:
    """Counts bases checked against Buchberger's criterion."""

    def __init__(self):
        self.checked = 0
        self.failed = 0
        self._lock = threading.Lock()

    def record(self, ok: bool):
        with self._lock:
            self.checked += 1
            if not ok:
                self.failed += 1


certification_log = CertificationLog()


class CertificationFailure(AssertionError):
    pass


@contextlib.contextmanager
def pair_budget(max_pairs: int | None):
    tok = _max_pairs.set(max_pairs)
    try:
        yield
    finally:
        _max_pairs.reset(tok)


@contextlib.contextmanager
def certify_bases(on: bool = True):
    """While active, every freshly computed basis is checked pair by pair."""
    tok = _certify.set(on)
    try:
        yield certification_log
    finally:
        _certify.reset(tok)


_ctx_cache: dict = {}
_ctx_lock = threading.Lock()


def _context(nvars: int, order: MonomialOrder, p, weights=None) -> Context:
    key = (nvars, order.blocks, p, weights)
    with _ctx_lock:
        ctx = _ctx_cache.get(key)
        if ctx is None:
            ctx = _ctx_cache[key] = Context(nvars, order.blocks, p, weights)
    return ctx


def _run_groebner(polys: list[dict], ctx: Context, degree_bound=None) -> list[dict]:
    gb, _ = _engine.groebner(polys, ctx, max_pairs=_max_pairs.get(), degree_bound=degree_bound)
    if degree_bound is None and _certify.get():
        ok = _engine.s_pairs_reduce_to_zero(gb, ctx)
        certification_log.record(ok)
        if not ok:
            raise CertificationFailure("computed basis fails Buchberger's criterion")
    return gb


class Ideal:
    """Generators in a fixed ring plus a per-order cache of reduced bases."""

    def __init__(self, ring: RingSpec, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if g.ring != ring:
                raise RingMismatch("generator from another ring")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._gb: dict[MonomialOrder, tuple[Context, list[dict]]] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def default_order(self) -> MonomialOrder:
        return MonomialOrder.degrevlex(self.ring.nvars)

    # bases

    def _basis(self, order: MonomialOrder | None) -> tuple[Context, list[dict]]:
        order = order or self.default_order()
        with self._lock:
            hit = self._gb.get(order)
        if hit is not None:
            return hit
        ctx = _context(self.ring.nvars, order, self.ring.field.p)
        gb = _run_groebner([ctx.from_terms(g._terms) for g in self.generators], ctx)
        with self._lock:
            self._gb.setdefault(order, (ctx, gb))
            return self._gb[order]

    def groebner_basis(self, order: MonomialOrder | None = None) -> list[Polynomial]:
        ctx, gb = self._basis(order)
        return [Polynomial(self.ring, ctx.to_terms(f), _normalized=True) for f in gb]

    def normal_form(self, f: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch("polynomial from another ring")
        ctx, gb = self._basis(order)
        b = _engine.basis_from_reduced(gb, ctx)
        r = b.reduce(ctx.from_terms(f._terms))
        return Polynomial(self.ring, ctx.to_terms(r), _normalized=True)

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def __contains__(self, f: Polynomial) -> bool:
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        if not other.generators:
            return True
        ctx, gb = self._basis(None)
        b = _engine.basis_from_reduced(gb, ctx)
        return all(not b.reduce(ctx.from_terms(g._terms)) for g in other.generators)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        if not self.generators:
            return False
        _, gb = self._basis(None)
        return len(gb) == 1 and set(gb[0]) == {0}

    def is_homogeneous(self, weights=None) -> bool:
        return all(g.is_homogeneous(weights) for g in self.generators)

    def is_bihomogeneous(self) -> bool:
        return all(g.is_bihomogeneous() for g in self.generators)

    def seed_basis(self, order: MonomialOrder, basis: list[Polynomial]):
        """Install a basis already known to be a reduced GB of this ideal."""
        ctx = _context(self.ring.nvars, order, self.ring.field.p)
        with self._lock:
            self._gb.setdefault(order, (ctx, [ctx.from_terms(g._terms) for g in basis]))

    # arithmetic

    def __add__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        _same_ring(self, other)
        return Ideal(self.ring, _dedupe(f * g for f in self.generators for g in other.generators))

    def power(self, k: int) -> "Ideal":
        if k < 0:
            raise ValueError("negative power")
        out = Ideal(self.ring, [self.ring.one()])
        for _ in range(k):
            out = out * self
        return out

    def __pow__(self, k: int) -> "Ideal":
        return self.power(k)

    def scale(self, f: Polynomial) -> "Ideal":
        return Ideal(self.ring, [f * g for g in self.generators])


def _dedupe(polys: Iterable[Polynomial]) -> list[Polynomial]:
    seen = set()
    out = []
    for f in polys:
        if f and f not in seen:
            seen.add(f)
            out.append(f)
    return out


def _same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring} vs {J.ring}")


def ideal_from_strings(ring: RingSpec, gens: Sequence[str]) -> Ideal:
    return Ideal(ring, [ring.parse(s) for s in gens])


def groebner_basis(I: Ideal, order: MonomialOrder | None = None) -> list[Polynomial]:
    return I.groebner_basis(order)


def normal_form(f: Polynomial, I: Ideal, order: MonomialOrder | None = None) -> Polynomial:
    return I.normal_form(f, order)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return I.contains_ideal(J) and J.contains_ideal(I)


def ideal_contains(I: Ideal, J: Ideal) -> bool:
    """J ⊆ I."""
    _same_ring(I, J)
    return I.contains_ideal(J)


# --- elimination -------------------------------------------------------------


def _eliminate_last(ring: RingSpec, polys: list[dict], extra: int, weights) -> list[Polynomial]:
    """Polynomials on nvars+extra variables; eliminate the trailing ``extra``."""
    n = ring.nvars
    total = n + extra
    order = MonomialOrder.block_elim(total, range(n, total))
    ctx = _context(total, order, ring.field.p, weights)
    gb = _run_groebner([ctx.from_terms(f) for f in polys], ctx)
    out = []
    for f in gb:
        terms = ctx.to_terms(f)
        if all(not any(e[n:]) for e in terms):
            out.append(Polynomial(ring, {e[:n]: c for e, c in terms.items()}, _normalized=True))
    return out


def _pad(f: Polynomial, extra: int) -> dict:
    z = (0,) * extra
    return {e + z: c for e, c in f._terms.items()}


def _variable_ideal_support(J: Ideal) -> set[int] | None:
    """Variable indices if J is generated by (scalar multiples of) variables."""
    out = set()
    for g in J.generators:
        if len(g) != 1:
            return None
        (e, _), = g._terms.items()
        if sum(e) != 1:
            return None
        out.add(e.index(1))
    return out


def intersect_by_elimination(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J = (t·I + (1−t)·J) ∩ S, t weighted 0 so homogeneity survives."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring)
    p = ring.field.p
    polys = []
    for g in I.generators:
        polys.append({e + (1,): c for e, c in g._terms.items()})
    for h in J.generators:
        f = {e + (0,): c for e, c in h._terms.items()}
        for e, c in h._terms.items():
            f[e + (1,)] = (-c) % p if p is not None else -c
        polys.append(f)
    weights = (1,) * ring.nvars + (0,)
    return Ideal(ring, _eliminate_last(ring, polys, 1, weights))


def intersect_with_variables(I: Ideal, variables: set[int]) -> Ideal:
    """I ∩ (x_v : v ∈ variables) for I generated by V-homogeneous elements.

    Elements of V-degree >= 1 stay; V-degree 0 generators get multiplied by
    every variable of V.
    """
    ring = I.ring
    vs = sorted(variables)
    out = []
    for g in I.generators:
        if any(e[v] for e in g._terms for v in vs):
            out.append(g)
        else:
            for v in vs:
                out.append(g * Polynomial.monomial(ring, ring._unit_exp(v)))
    return Ideal(ring, _dedupe(out))


def _v_homogeneous(I: Ideal, variables: set[int]) -> bool:
    for g in I.generators:
        degs = {sum(e[v] for v in variables) for e in g._terms}
        if len(degs) > 1:
            return False
    return True


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    for A, B in ((I, J), (J, I)):
        vs = _variable_ideal_support(B)
        if vs and _v_homogeneous(A, vs):
            return intersect_with_variables(A, vs)
    return intersect_by_elimination(I, J)


# --- colon and saturation ----------------------------------------------------


def colon_by_element_via_intersection(I: Ideal, f: Polynomial) -> Ideal:
    """I : (f) = (I ∩ (f)) / f."""
    inter = intersect_by_elimination(I, Ideal(I.ring, [f]))
    return Ideal(I.ring, [g.exact_divide(f) for g in inter.generators])


def colon_by_variable(I: Ideal, v: int) -> Ideal:
    """I : (x_v) for homogeneous I, from a degrevlex basis with x_v cheapest.

    For such a basis, x_v divides an element iff it divides its lead, and
    dividing out one factor of x_v yields a basis of the colon.
    """
    ring = I.ring
    n = ring.nvars
    order = MonomialOrder.degrevlex(n, [i for i in range(n) if i != v] + [v])
    out = []
    for g in I.groebner_basis(order):
        if all(e[v] for e in g._terms):
            unit = ring._unit_exp(v)
            out.append(g.divide_monomial(unit))
        else:
            out.append(g)
    J = Ideal(ring, out)
    return J


def colon_by_element(I: Ideal, f: Polynomial) -> Ideal:
    if f.is_zero():
        raise ValueError("colon by the zero element")
    if f.is_constant():
        return I
    if len(f) == 1 and I.is_homogeneous():
        (e, _), = f._terms.items()
        J = I
        for v, a in enumerate(e):
            for _ in range(a):
                J = colon_by_variable(J, v)
        return J
    return colon_by_element_via_intersection(I, f)


def ideal_colon(I: Ideal, J: Ideal) -> Ideal:
    """I : J = ∩_j (I : f_j)."""
    _same_ring(I, J)
    if J.is_zero():
        raise ValueError("colon by the zero ideal")
    parts = [colon_by_element(I, f) for f in J.generators]
    out = parts[0]
    for P in parts[1:]:
        out = intersect_by_elimination(out, P)
    return out


def colon_power(I: Ideal, J: Ideal, k: int) -> Ideal:
    """I : J^k by k successive colons."""
    out = I
    for _ in range(k):
        out = ideal_colon(out, J)
    return out


def saturation_ladder(I: Ideal, J: Ideal, max_steps: int | None = None) -> list[Ideal]:
    """[I, I:J, I:J^2, ...] up to and including the first repeat."""
    ladder = [I]
    while True:
        nxt = ideal_colon(ladder[-1], J)
        if ideal_equal(nxt, ladder[-1]):
            return ladder
        ladder.append(nxt)
        if max_steps is not None and len(ladder) > max_steps:
            raise RuntimeError(f"saturation did not stabilize within {max_steps} steps")


def ideal_saturate(I: Ideal, J: Ideal, max_steps: int | None = None) -> tuple[Ideal, int]:
    """(I : J^∞, least i with I:J^i = I:J^(i+1))."""
    ladder = saturation_ladder(I, J, max_steps)
    return ladder[-1], len(ladder) - 1


# --- dimension ---------------------------------------------------------------


def krull_height(I: Ideal) -> int:
    """Height via the leading-term ideal of a degrevlex basis."""
    if I.is_zero():
        return 0
    if I.is_unit():
        raise ValueError("height of the unit ideal is undefined")
    order = I.default_order()
    leads = [g.leading_term(order)[0] for g in I.groebner_basis(order)]
    return monomial_height(leads)


def krull_dimension(I: Ideal) -> int:
    return I.ring.nvars - krull_height(I)


# --- minimal generators ------------------------------------------------------


def minimal_generators(I: Ideal) -> list[Polynomial]:
    """A minimal generating subset, processed by increasing total degree.

    Degree by degree: a truncated basis of what was kept decides membership,
    and linear algebra on normal forms handles same-degree dependencies.
    """
    ring = I.ring
    for g in I.generators:
        if not g.is_bihomogeneous():
            raise ValueError(f"non-bihomogeneous generator {g}")
    gens = sorted(I.generators, key=lambda g: (g.total_degree(), g.bidegree()))
    if not gens:
        return []
    if gens[0].total_degree() == 0:
        return [ring.one()]
    order = I.default_order()
    ctx = _context(ring.nvars, order, ring.field.p)
    p = ring.field.p
    bb = _engine.Buchberger(ctx, _max_pairs.get())
    kept: list[Polynomial] = []
    i = 0
    while i < len(gens):
        D = gens[i].total_degree()
        batch = []
        while i < len(gens) and gens[i].total_degree() == D:
            batch.append(gens[i])
            i += 1
        bb.run(degree_bound=D)
        echelon: list[dict] = []
        new = []
        for g in batch:
            r = bb.basis.reduce(ctx.from_terms(g._terms))
            for row in echelon:
                if not r:
                    break
                piv = max(row)
                c = r.get(piv)
                if c:
                    for mm, cc in row.items():
                        v = r.get(mm, 0) - c * cc
                        if p is not None:
                            v %= p
                        if v:
                            r[mm] = v
                        else:
                            r.pop(mm, None)
            if r:
                echelon.append(_engine._monic(r, p))
                new.append(g)
        for g in new:
            bb.add_generator(ctx.from_terms(g._terms))
            kept.append(g)
    return kept

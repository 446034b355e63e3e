"""Defining equations of Rees algebras of almost linearly presented ideals.

Given an m×(m−1) Hilbert-Burch matrix φ over R = k[x1..xd] whose first m−2
columns are linear and whose last column has degree n, this module builds

* the symmetric-algebra ideal 𝓛 = ([T]·φ) in S = R[T1..Tm],
* Jacobian duals B with [T]·φ = [x]·B, and the iterated duals B_i,
* the defining ideal 𝓐 both as the saturation 𝓛 : (x)^∞ and as 𝓛 + I_d(B_i),

and reads off heights, the special fiber and the relation type.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from .groebner import (
    Ideal,
    colon_by_element,
    ideal_equal,
    ideal_intersect,
    krull_height,
    minimal_generators,
    saturation_ladder,
)
from .polymatrix import PolyMatrix, determinant, minor_ideal, minors
from .polyring import MonomialOrder, Polynomial, RingSpec

log = logging.getLogger(__name__)

PIVOTS = ("first", "last")
METHODS = ("general", "restricted")
GENERATOR_ORDERS = ("forward", "reverse")


class PresentationError(ValueError):
    """The matrix does not have the almost linear shape."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PresentationInput:
    ring: RingSpec
    phi: PolyMatrix
    n: int
    warnings: tuple[str, ...] = ()

    @property
    def d(self) -> int:
        return self.ring.d

    @property
    def m(self) -> int:
        return self.ring.m

    @property
    def linear_type(self) -> bool:
        return self.m <= self.d

    @property
    def phi_linear(self) -> PolyMatrix:
        """φ′: the linear columns."""
        return self.phi.columns_slice(range(self.phi.cols - 1))


def make_input(phi: PolyMatrix) -> PresentationInput:
    """Validate the almost linear shape and derive the last-column degree n."""
    ring = phi.ring
    m = ring.m
    if phi.rows != m or phi.cols != m - 1:
        raise PresentationError(
            f"expected a {m}x{m - 1} matrix for T1..T{m}, got {phi.rows}x{phi.cols}")
    if m < 2:
        raise PresentationError("need at least two generators")
    for j in range(phi.cols - 1):
        for i, e in enumerate(phi.column(j)):
            if e and e.bidegree() != (1, 0):
                raise PresentationError(
                    f"entry ({i + 1},{j + 1}) must be a linear form in x, got {e}")
    last = [e for e in phi.column(phi.cols - 1) if e]
    if not last:
        raise PresentationError("last column is zero")
    degs = {e.bidegree() for e in last}
    if len(degs) != 1 or None in degs or next(iter(degs))[1] != 0 or next(iter(degs))[0] < 1:
        raise PresentationError("last column must consist of forms in x of one positive degree")
    n = next(iter(degs))[0]
    warnings = []
    if m <= ring.d:
        warnings.append(f"m = {m} <= d = {ring.d}: the ideal is of linear type, A = L")
        log.warning(warnings[-1])
    return PresentationInput(ring, phi, n, tuple(warnings))


# --- the symmetric algebra and Jacobian duals ----------------------------------


def t_times(phi: PolyMatrix) -> list[Polynomial]:
    """Entries of the row vector [T1..Tm]·φ."""
    ring = phi.ring
    if phi.rows != ring.m:
        raise PresentationError(f"matrix has {phi.rows} rows but the ring has {ring.m} T-variables")
    Ts = ring.Ts()
    out = []
    for j in range(phi.cols):
        acc = ring.zero()
        for i in range(phi.rows):
            e = phi[i, j]
            if e:
                acc = acc + Ts[i] * e
        out.append(acc)
    return out


def symmetric_ideal(phi: PolyMatrix) -> Ideal:
    return Ideal(phi.ring, t_times(phi))


def decompose(f: Polynomial, pivot: str = "first") -> list[Polynomial]:
    """Write f = Σ x_k·c_k by sending each monomial to one x-variable dividing it.

    ``pivot="first"`` uses the smallest-index x dividing the monomial,
    ``"last"`` the largest.
    """
    ring = f.ring
    d = ring.d
    parts: list[dict] = [{} for _ in range(d)]
    for e, c in f.as_dict().items():
        idx = [k for k in range(d) if e[k]]
        if not idx:
            raise ValueError(f"{f} is not in the ideal (x1..x{d})")
        k = idx[0] if pivot == "first" else idx[-1]
        q = list(e)
        q[k] -= 1
        parts[k][tuple(q)] = c
    return [Polynomial(ring, p, _normalized=True) for p in parts]


def jacobian_dual(phi: PolyMatrix, pivot: str = "first") -> PolyMatrix:
    """A d×cols matrix B with [T]·φ = [x]·B."""
    if pivot not in PIVOTS:
        raise ValueError(f"pivot must be one of {PIVOTS}")
    cols = [decompose(f, pivot) for f in t_times(phi)]
    return PolyMatrix.from_columns(phi.ring, cols)


def x_times(B: PolyMatrix) -> list[Polynomial]:
    """Entries of [x1..xd]·B."""
    ring = B.ring
    xs = ring.xs()
    out = []
    for j in range(B.cols):
        acc = ring.zero()
        for i in range(B.rows):
            if B[i, j]:
                acc = acc + xs[i] * B[i, j]
        out.append(acc)
    return out


def maximal_minor_ideal(B: PolyMatrix) -> Ideal:
    """I_d(B) for d = rows; the zero ideal when B has fewer than d columns."""
    if B.cols < B.rows:
        return Ideal(B.ring)
    return minor_ideal(B, B.rows)


def x_ideal(ring: RingSpec) -> Ideal:
    return Ideal(ring, ring.xs())


# --- iterated Jacobian duals ------------------------------------------------------


@dataclass
class DualState:
    level: int
    B: PolyMatrix
    L_level: Ideal
    dual_ideal: Ideal
    stabilized: bool = False
    new_columns: int = 0


@dataclass
class DualContext:
    """What every step needs besides the previous state."""

    L: Ideal
    B_linear: PolyMatrix | None
    pivot: str = "first"
    generator_order: str = "forward"


def initial_dual_state(inp: PresentationInput, pivot: str = "first") -> tuple[DualState, DualContext]:
    phi = inp.phi
    L = symmetric_ideal(phi)
    B1 = jacobian_dual(phi, pivot)
    Bp = jacobian_dual(inp.phi_linear, pivot) if phi.cols > 1 else None
    state = DualState(1, B1, L, L + maximal_minor_ideal(B1))
    return state, DualContext(L, Bp, pivot)


def _candidates_general(state: DualState) -> list[Polynomial]:
    ring = state.B.ring
    M = ideal_intersect(maximal_minor_ideal(state.B), x_ideal(ring))
    return list(M.generators)


def _candidates_restricted(state: DualState, ctx: DualContext) -> list[Polynomial]:
    B = state.B
    d = B.rows
    Bp = ctx.B_linear
    nlin = Bp.cols if Bp is not None else 0
    if nlin < d - 1:
        return []
    out = []
    for cs in combinations(range(nlin), d - 1):
        for j in range(nlin, B.cols):
            sub = B.columns_slice(list(cs) + [j])
            det = determinant(sub)
            if det and all(sum(e[:d]) >= 1 for e, _ in det):
                out.append(det)
    return out


def iterated_dual_step(state: DualState, ctx: DualContext, method: str = "general") -> DualState:
    """B_{i+1} = [B_i | C] with [u_1..u_l] = [x]·C, the u's generating I_d(B_i) ∩ (x) mod 𝓛_i."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    ring = state.B.ring
    if method == "general":
        cands = _candidates_general(state)
    else:
        cands = _candidates_restricted(state, ctx)
    if ctx.generator_order == "reverse":
        cands = cands[::-1]
    us = minimal_generators(Ideal(ring, cands)) if cands else []
    us = [u for u in us if not state.L_level.contains(u)]
    if us:
        C = PolyMatrix.from_columns(ring, [decompose(u, ctx.pivot) for u in us])
        B_next = state.B.hconcat(C)
    else:
        B_next = state.B
    L_next = Ideal(ring, x_times(B_next))
    dual = ctx.L + maximal_minor_ideal(B_next)
    stabilized = ideal_equal(dual, state.dual_ideal)
    return DualState(state.level + 1, B_next, L_next, dual, stabilized, len(us))


def dual_ladder(inp: PresentationInput, method: str = "general", level_cap: int | None = None,
                pivot: str = "first", generator_order: str = "forward",
                run_to_cap: bool = False) -> list[DualState]:
    """States B_1, B_2, ... until the dual ideal repeats (or the cap is hit).

    The last state of a stabilized ladder is the confirming one: its ideal
    equals its predecessor's.
    """
    cap = level_cap if level_cap is not None else max(2 * inp.n, 2)
    state, ctx = initial_dual_state(inp, pivot)
    ctx.generator_order = generator_order
    chain = [state]
    while chain[-1].level < cap + 1:
        nxt = iterated_dual_step(chain[-1], ctx, method)
        chain.append(nxt)
        if nxt.stabilized and not run_to_cap:
            break
    return chain


def stabilization_level(chain: list[DualState]) -> int | None:
    """Least level i whose dual ideal equals that of level i+1."""
    for st in chain[1:]:
        if st.stabilized:
            return st.level - 1
    return None


def stable_dual_ideal(chain: list[DualState]) -> Ideal:
    lvl = stabilization_level(chain)
    if lvl is None:
        return chain[-1].dual_ideal
    return chain[lvl - 1].dual_ideal


# --- the saturation form ------------------------------------------------------------


def rees_via_saturation(inp: PresentationInput, max_steps: int | None = None) -> tuple[Ideal, int, list[Ideal]]:
    """(𝓛 : (x)^∞, saturation index, [𝓛, 𝓛:(x), 𝓛:(x)^2, ...])."""
    L = symmetric_ideal(inp.phi)
    ladder = saturation_ladder(L, x_ideal(inp.ring), max_steps)
    return ladder[-1], len(ladder) - 1, ladder


def _height_or_pass(I: Ideal) -> float:
    if I.is_zero():
        return 0
    if I.is_unit():
        return float("inf")
    return krull_height(I)


def gd_fitting_heights(phi: PolyMatrix) -> dict[int, float]:
    """{i: ht I_{m−i}(φ)} for 1 ≤ i ≤ d−1 (only sizes that exist)."""
    d = phi.ring.d
    m = phi.rows
    out = {}
    for i in range(1, d):
        r = m - i
        if r < 1:
            out[i] = float("inf")
            continue
        if r > min(phi.rows, phi.cols):
            out[i] = 0
            continue
        out[i] = _height_or_pass(minor_ideal(phi, r))
    return out


def check_Gd(phi: PolyMatrix) -> bool:
    """G_d through the Fitting ideals: ht I_{m−i}(φ) ≥ i+1 for 1 ≤ i ≤ d−1."""
    return all(h >= i + 1 for i, h in gd_fitting_heights(phi).items())


# --- fiber, relation type -------------------------------------------------------------


@dataclass(frozen=True)
class Fiber:
    is_principal: bool
    degree: int
    generator: Polynomial
    generators: tuple[Polynomial, ...]

    @property
    def degenerate(self) -> bool:
        return not self.generators


def special_fiber(A: Ideal) -> Fiber:
    """(A + (x)) ∩ k[T]: generators of A with x ↦ 0, minimalized."""
    ring = A.ring
    xs = range(ring.d)
    gens = [g.substitute_zero(xs) for g in A.generators]
    F = Ideal(ring, [g for g in gens if g])
    mins = minimal_generators(F) if not F.is_zero() else []
    if len(mins) == 1:
        f = mins[0]
        return Fiber(True, f.T_degree(), f, tuple(mins))
    return Fiber(False, 0, ring.zero(), tuple(mins))


def relation_type(A: Ideal) -> int:
    return max((g.T_degree() for g in minimal_generators(A)), default=0)


# --- second description of 𝓐 --------------------------------------------------------


def second_form_ideal(inp: PresentationInput) -> Ideal:
    """(g·K^n + J) : (x_d^n) with J = 𝓛′ + I_d(B(φ′)), K = 𝓛′ + I_{d−1}(B) + (x_d)."""
    if inp.m != inp.d + 1:
        raise PreconditionError(f"needs m = d + 1, got d = {inp.d}, m = {inp.m}")
    ring = inp.ring
    d, n = inp.d, inp.n
    Lgens = t_times(inp.phi)
    g = Lgens[-1]
    Lp = Ideal(ring, Lgens[:-1])
    if inp.phi.cols > 1:
        Bp = jacobian_dual(inp.phi_linear)
        J = Lp + maximal_minor_ideal(Bp)
        B = Bp.drop_row(d - 1)
        if d - 1 == 0:
            Id1 = Ideal(ring, [ring.one()])
        else:
            Id1 = Ideal(ring, [f for f in minors(B, d - 1) if f]) if B.cols >= d - 1 else Ideal(ring)
    else:
        J = Lp
        Id1 = Ideal(ring, [ring.one()]) if d == 1 else Ideal(ring)
    xd = ring.x(d)
    K = Lp + Id1 + Ideal(ring, [xd])
    lhs = K.power(n).scale(g) + J
    return colon_by_element(lhs, xd**n)


def second_form_check(inp: PresentationInput, A: Ideal | None = None) -> bool:
    if A is None:
        A, _, _ = rees_via_saturation(inp)
    return ideal_equal(second_form_ideal(inp), A)


# --- full pipeline ----------------------------------------------------------------------


HEIGHT_KEYS = ("L", "A", "I_d(B_1)", "I_d(B(phi'))", "I_{d-1}(B(phi'))")


@dataclass
class ReesReport:
    n: int
    d: int
    m: int
    Gd_ok: bool
    linear_type: bool
    heights: dict[str, int | None]
    sat_index: int
    A_sat: Ideal
    saturation_chain: list[Ideal]
    dual_chain: list[DualState]
    stabilization_level: int | None
    forms_equal: bool
    first_colon_equal: bool
    fiber: Fiber
    relation_type: int
    minimal_generators: list[Polynomial]
    method: str = "general"
    warnings: list[str] = field(default_factory=list)

    @property
    def fiber_degree(self) -> int:
        return self.fiber.degree

    def sorted_generators(self) -> list[Polynomial]:
        return sort_generators(self.minimal_generators)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gd": self.Gd_ok,
            "heights": self.heights,
            "sat_index": self.sat_index,
            "stabilization_level": self.stabilization_level,
            "forms_equal": self.forms_equal,
            "fiber_degree": self.fiber.degree if self.fiber.is_principal else None,
            "relation_type": self.relation_type,
            "generators": [str(g) for g in self.sorted_generators()],
        }


def sort_generators(gens: list[Polynomial]) -> list[Polynomial]:
    """By bidegree, then by descending leading monomial in degrevlex."""
    if not gens:
        return []
    order = MonomialOrder.degrevlex(gens[0].ring.nvars)
    return sorted(gens, key=lambda g: (g.bidegree() or (g.x_degree(), g.T_degree()),
                                       tuple(-k for k in order.key(g.leading_term(order)[0]))))


def run_full_report(inp: PresentationInput, method: str = "general", level_cap: int | None = None,
                    pivot: str = "first") -> ReesReport:
    d, m = inp.d, inp.m
    gd = check_Gd(inp.phi)
    if not gd:
        log.warning("G_d fails: the saturation is computed but is not claimed to be the Rees ideal")
    A, sat_index, sat_chain = rees_via_saturation(inp)
    chain = dual_ladder(inp, method, level_cap, pivot)
    stab = stabilization_level(chain)
    dual = stable_dual_ideal(chain)
    forms_equal = ideal_equal(A, dual)
    first_colon = sat_chain[1] if len(sat_chain) > 1 else sat_chain[0]
    first_colon_equal = ideal_equal(first_colon, chain[0].dual_ideal)

    heights: dict[str, int | None] = {
        "L": krull_height(chain[0].L_level),
        "A": krull_height(A),
        "I_d(B_1)": krull_height(maximal_minor_ideal(chain[0].B)),
    }
    if inp.phi.cols > 1:
        Bp = jacobian_dual(inp.phi_linear, pivot)
        heights["I_d(B(phi'))"] = krull_height(maximal_minor_ideal(Bp))
        if 1 <= d - 1 <= Bp.cols:
            heights["I_{d-1}(B(phi'))"] = krull_height(minor_ideal(Bp, d - 1))
        else:
            heights["I_{d-1}(B(phi'))"] = None
    else:
        heights["I_d(B(phi'))"] = 0
        heights["I_{d-1}(B(phi'))"] = None

    fib = special_fiber(A)
    mins = minimal_generators(A)
    rt = max((g.T_degree() for g in mins), default=0)
    warnings = list(inp.warnings)
    if not gd:
        warnings.append("G_d condition fails")
    return ReesReport(
        n=inp.n, d=d, m=m, Gd_ok=gd, linear_type=inp.linear_type, heights=heights,
        sat_index=sat_index, A_sat=A, saturation_chain=sat_chain, dual_chain=chain,
        stabilization_level=stab, forms_equal=forms_equal, first_colon_equal=first_colon_equal,
        fiber=fib, relation_type=rt, minimal_generators=mins, method=method, warnings=warnings,
    )


EXAMPLE_4X3 = [
    ["x1", "0", "0"],
    ["x2", "x1", "0"],
    ["x3", "x2", "x1^2"],
    ["0", "x3", "x3^2"],
]

NEGATIVE_EXAMPLE = [
    ["x1", "0", "x1^2"],
    ["x2", "x1", "x2^2"],
    ["0", "x2", "x1^2+x2^2"],
    ["0", "0", "x1^2+x2^2+x1*x2"],
]

NEGATIVE_WITNESS = "T2^2+T1*T2+T3^2+T1*T3+T3*T4+T1*T4-T2*T4"


def example_input(rows, d: int, field=None) -> PresentationInput:
    from .polyring import FieldSpec

    ring = RingSpec(d, len(rows), field or FieldSpec())
    return make_input(PolyMatrix.from_rows(ring, rows))

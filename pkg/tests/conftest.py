from __future__ import annotations

import random
from itertools import combinations, permutations
from pathlib import Path

import pytest

from reesalg.polymatrix import PolyMatrix
from reesalg.polyring import FieldSpec, MonomialOrder, Polynomial, RingSpec
from reesalg.reescore import EXAMPLE_4X3, NEGATIVE_EXAMPLE, example_input

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def example():
    return example_input(EXAMPLE_4X3, 3)


@pytest.fixture(scope="session")
def negative():
    return example_input(NEGATIVE_EXAMPLE, 2)


# --- independent oracles -----------------------------------------------------------
# These deliberately avoid the library's own arithmetic shortcuts.


def naive_product(f: Polynomial, g: Polynomial) -> dict:
    """Term-by-term convolution into a plain dict, reduced at the end."""
    p = f.ring.field.p
    out: dict = {}
    for ea, ca in f.as_dict().items():
        for eb, cb in g.as_dict().items():
            e = tuple(a + b for a, b in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    if p is not None:
        out = {e: c % p for e, c in out.items()}
    return {e: c for e, c in out.items() if c}


def _perm_sign(perm) -> int:
    sign = 1
    for i, j in combinations(range(len(perm)), 2):
        if perm[i] > perm[j]:
            sign = -sign
    return sign


def permutation_determinant(M: PolyMatrix) -> Polynomial:
    """Leibniz formula: the signed sum over all permutations."""
    n = M.rows
    acc = M.ring.zero()
    for perm in permutations(range(n)):
        term = M.ring.const(_perm_sign(perm))
        for i in range(n):
            term = term * M[i, perm[i]]
        acc = acc + term
    return acc


def brute_force_height(monos, nvars: int) -> int:
    """nvars minus the largest variable set containing no generator's support."""
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in monos]
    for size in range(nvars, -1, -1):
        for S in combinations(range(nvars), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return nvars - size
    return nvars


def gd_direct(phi, d: int) -> bool:
    """ht I_(m-i)(phi) >= i+1 for 1 <= i <= d-1, from the minors and the hitting-set height."""
    from reesalg.polymatrix import minor_ideal

    m = phi.rows
    for i in range(1, d):
        J = minor_ideal(phi, m - i)
        if not J.generators:
            return False
        if J.is_unit():
            continue
        order = MonomialOrder.degrevlex(phi.ring.nvars)
        leads = [g.leading_term(order)[0] for g in J.groebner_basis(order)]
        if brute_force_height(leads, phi.ring.nvars) < i + 1:
            return False
    return True


def naive_reduce(f: Polynomial, basis: list[Polynomial], order: MonomialOrder) -> Polynomial:
    """Textbook multivariate division; only Polynomial arithmetic is used."""
    ring = f.ring
    fld = ring.field
    rem = ring.zero()
    lead = [g.leading_term(order) for g in basis]
    while f:
        e, c = f.leading_term(order)
        for g, (ge, gc) in zip(basis, lead):
            if all(a >= b for a, b in zip(e, ge)):
                q = tuple(a - b for a, b in zip(e, ge))
                f = f - g.mul_monomial(q, fld.coerce(c) * fld.inv(gc))
                break
        else:
            mono = Polynomial.monomial(ring, e, c)
            rem = rem + mono
            f = f - mono
    return rem


def naive_spoly(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    fld = f.ring.field
    ef, cf = f.leading_term(order)
    eg, cg = g.leading_term(order)
    lcm = tuple(max(a, b) for a, b in zip(ef, eg))
    return (f.mul_monomial(tuple(a - b for a, b in zip(lcm, ef)), fld.inv(cf))
            - g.mul_monomial(tuple(a - b for a, b in zip(lcm, eg)), fld.inv(cg)))


def is_groebner_naive(basis: list[Polynomial], order: MonomialOrder) -> bool:
    for f, g in combinations(basis, 2):
        if naive_reduce(naive_spoly(f, g, order), basis, order):
            return False
    return True


def random_poly(rng: random.Random, ring: RingSpec, nterms: int, maxdeg: int = 3) -> Polynomial:
    p = ring.field.p or 50
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, maxdeg) for _ in range(ring.nvars))
        terms[e] = rng.randrange(1, p)
    return Polynomial(ring, terms)


def random_linear_form(rng: random.Random, ring: RingSpec, variables) -> Polynomial:
    p = ring.field.p or 19
    acc = ring.zero()
    for v in variables:
        e = [0] * ring.nvars
        e[v] = 1
        acc = acc + Polynomial.monomial(ring, tuple(e), rng.randrange(p))
    return acc


def random_matrix(rng: random.Random, ring: RingSpec, rows: int, cols: int,
                  variables=None) -> PolyMatrix:
    vs = list(range(ring.nvars)) if variables is None else list(variables)
    return PolyMatrix.from_rows(ring, [[random_linear_form(rng, ring, vs) for _ in range(cols)]
                                       for _ in range(rows)])


@pytest.fixture
def F():
    return FieldSpec()


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])

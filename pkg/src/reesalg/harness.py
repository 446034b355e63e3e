"""Random almost linear presentations and batch checks of the structural laws."""

from __future__ import annotations

import hashlib
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path

from .groebner import GroebnerBudgetExceeded, pair_budget
from .matfile import format_matrix_file
from .polymatrix import PolyMatrix
from .polyring import FieldSpec, Polynomial, RingSpec
from .reescore import PresentationInput, ReesReport, check_Gd, make_input, run_full_report

log = logging.getLogger(__name__)

RETRY_CAP = 100


class RetryBudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    d: int
    m: int
    n: int
    field: FieldSpec = field(default_factory=FieldSpec)
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if not 2 <= self.d <= 3:
            raise ValueError("d must be 2 or 3")
        if not self.d + 1 <= self.m <= self.d + 2:
            raise ValueError("m must be d+1 or d+2")
        if not 1 <= self.n <= 3:
            raise ValueError("n must be between 1 and 3")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")

    @property
    def ring(self) -> RingSpec:
        return RingSpec(self.d, self.m, self.field)


def stream_value(seed: int, index: int, attempt: int, position: int, modulus: int) -> int:
    """Deterministic value in [0, modulus) from a hash of the coordinates."""
    h = hashlib.blake2b(f"{seed}:{index}:{attempt}:{position}".encode(), digest_size=16).digest()
    return int.from_bytes(h, "big") % modulus


def _coefficient(spec: InstanceSpec, index: int, attempt: int, pos: int) -> int:
    p = spec.field.p
    if p is None:
        return stream_value(spec.seed, index, attempt, pos, 19) - 9
    return stream_value(spec.seed, index, attempt, pos, p)


def _random_form(ring: RingSpec, degree: int, spec: InstanceSpec, index: int, attempt: int,
                 start: int) -> tuple[Polynomial, int]:
    terms = {}
    pos = start
    for combo in combinations_with_replacement(range(ring.d), degree):
        e = [0] * ring.nvars
        for v in combo:
            e[v] += 1
        terms[tuple(e)] = _coefficient(spec, index, attempt, pos)
        pos += 1
    return Polynomial(ring, terms), pos


def random_matrix(spec: InstanceSpec, index: int, attempt: int = 0) -> PolyMatrix:
    ring = spec.ring
    m = spec.m
    pos = 0
    rows: list[list[Polynomial]] = [[] for _ in range(m)]
    for j in range(m - 1):
        deg = 1 if j < m - 2 else spec.n
        for i in range(m):
            f, pos = _random_form(ring, deg, spec, index, attempt, pos)
            rows[i].append(f)
    return PolyMatrix.from_rows(ring, rows)


def generate_instance(spec: InstanceSpec, index: int) -> PresentationInput:
    """Random almost linear φ, resampled until G_d holds."""
    for attempt in range(RETRY_CAP):
        M = random_matrix(spec, index, attempt)
        try:
            inp = make_input(M)
        except ValueError:
            continue
        if check_Gd(M):
            return inp
    raise RetryBudgetExhausted(f"no G_d instance after {RETRY_CAP} draws (index {index})")


# --- the laws -----------------------------------------------------------------------


def height_violations(r: ReesReport) -> list[str]:
    d, m = r.d, r.m
    out = []
    h = r.heights
    if h["L"] != d:
        out.append(f"ht L = {h['L']} != d = {d}")
    if h["A"] != m - 1:
        out.append(f"ht A = {h['A']} != m-1 = {m - 1}")
    top = h["I_d(B(phi'))"]
    if top != m - d - 1:
        out.append(f"ht I_d(B(phi')) = {top} != m-d-1 = {m - d - 1}")
    sub = h.get("I_{d-1}(B(phi'))")
    if m == d + 1 and sub != 2:
        out.append(f"ht I_(d-1)(B(phi')) = {sub} != 2")
    return out


def theorem_violations(r: ReesReport) -> list[str]:
    out = []
    if r.sat_index != r.n:
        out.append(f"sat_index = {r.sat_index} != n = {r.n}")
    if not r.first_colon_equal:
        out.append("L:(x) != L + I_d(B_1)")
    if r.m == r.d + 1:
        expect = r.n * (r.d - 1) + 1
        if not r.forms_equal:
            out.append("A != L + I_d(B_n)")
        if r.stabilization_level is not None and r.stabilization_level > r.n:
            out.append(f"dual ladder stabilized at {r.stabilization_level} > n")
        if not (r.fiber.is_principal and r.fiber.degree == expect):
            out.append(f"fiber {r.fiber.degree} (principal={r.fiber.is_principal}) != {expect}")
        if r.relation_type != expect:
            out.append(f"relation type {r.relation_type} != {expect}")
    return out


@dataclass
class InstanceOutcome:
    index: int
    status: str  # ok | violation | budget | generation
    gd: bool = False
    forms_equal: bool = False
    sat_index: int | None = None
    height_violations: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    dump: str | None = None


@dataclass
class BatchSummary:
    spec: dict
    trials_run: int = 0
    Gd_pass_count: int = 0
    forms_equal_count: int = 0
    sat_index_histogram: dict[int, int] = field(default_factory=dict)
    height_violation_count: int = 0
    theorem_violation_count: int = 0
    budget_exceeded_count: int = 0
    generation_failure_count: int = 0
    counterexample_dumps: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.height_violation_count or self.theorem_violation_count)

    def to_json(self) -> dict:
        out = asdict(self)
        out["sat_index_histogram"] = {str(k): v for k, v in sorted(self.sat_index_histogram.items())}
        out["failed"] = self.failed
        return out


def _dump(spec: InstanceSpec, index: int, inp: PresentationInput, problems: list[str],
          dump_dir: Path) -> str:
    dump_dir.mkdir(parents=True, exist_ok=True)
    path = dump_dir / f"violation_d{spec.d}_m{spec.m}_n{spec.n}_s{spec.seed}_i{index}.mat"
    header = [f"spec d={spec.d} m={spec.m} n={spec.n} field={spec.field} seed={spec.seed}",
              f"index {index}"] + [f"violation: {p}" for p in problems]
    path.write_text(format_matrix_file(inp.phi, header))
    return str(path)


def run_instance(spec: InstanceSpec, index: int, dump_dir: str | None = None,
                 max_pairs: int | None = None, method: str = "general") -> InstanceOutcome:
    try:
        inp = generate_instance(spec, index)
    except RetryBudgetExhausted as exc:
        log.warning("%s", exc)
        return InstanceOutcome(index, "generation")
    try:
        with pair_budget(max_pairs):
            r = run_full_report(inp, method=method)
    except GroebnerBudgetExceeded as exc:
        log.warning("instance %d skipped: %s", index, exc)
        return InstanceOutcome(index, "budget", gd=True)
    hv = height_violations(r)
    tv = theorem_violations(r)
    out = InstanceOutcome(index, "violation" if hv or tv else "ok", r.Gd_ok, r.forms_equal,
                          r.sat_index, hv, tv)
    if (hv or tv) and dump_dir is not None:
        out.dump = _dump(spec, index, inp, hv + tv, Path(dump_dir))
    return out


def _run_one(args):
    return run_instance(*args)


def summarize(spec: InstanceSpec, outcomes: list[InstanceOutcome]) -> BatchSummary:
    s = BatchSummary(spec={"d": spec.d, "m": spec.m, "n": spec.n, "field": str(spec.field),
                           "seed": spec.seed, "trials": spec.trials})
    hist: Counter = Counter()
    for o in sorted(outcomes, key=lambda o: o.index):
        if o.status == "generation":
            s.generation_failure_count += 1
            continue
        if o.status == "budget":
            s.budget_exceeded_count += 1
            continue
        s.trials_run += 1
        s.Gd_pass_count += o.gd
        s.forms_equal_count += o.forms_equal
        hist[o.sat_index] += 1
        s.height_violation_count += bool(o.height_violations)
        s.theorem_violation_count += bool(o.violations)
        if o.dump:
            s.counterexample_dumps.append(o.dump)
    s.sat_index_histogram = dict(sorted(hist.items()))
    return s


def run_batch(spec: InstanceSpec, dump_dir: str | None = None, workers: int | None = None,
              max_pairs: int | None = None, method: str = "general") -> BatchSummary:
    """Run every trial of ``spec``; the summary does not depend on worker count."""
    jobs = [(spec, i, dump_dir, max_pairs, method) for i in range(spec.trials)]
    workers = workers if workers is not None else min(4, os.cpu_count() or 1)
    if workers <= 1 or len(jobs) <= 1:
        outcomes = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            outcomes = list(ex.map(_run_one, jobs))
    summary = summarize(spec, outcomes)
    if summary.height_violation_count:
        log.error("height law violated in %d instance(s); dumps: %s",
                  summary.height_violation_count, summary.counterexample_dumps)
    return summary

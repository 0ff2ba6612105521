"""Brute-force verification harness.

Lowers symbolic labels and block elements to dense matrices, computes literal
n-fold matrix products, and adjudicates every closed-form rule of the label
algebra.  Exhaustive sweeps are budget-gated and refuse (rather than silently
sample) when the product count would exceed the budget, so an "exhaustively
verified" claim in a report is literally true.  Sweeps iterate in a fixed
row-major order; sampled sweeps draw from a seeded generator with stratified
coverage, so identical configurations give identical summaries.
"""

from __future__ import annotations

import json
import os
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import phases
from .errors import BudgetExceededError, DomainError
from .matrices import BlockCyclicMatrix
from .phases import check_modulus
from .sigma_algebra import mul_sigma_indices
from .su2 import PolyadicSU2Element, SU2Params, binary_su2_matrix

DEFAULT_TOL = 1e-12
DET_TOL = 1e-10
DEFAULT_BUDGET = 30_000_000

_FAMILIES = ("pauli", "elementary", "full", "het")

#: pairwise sigma-index tables used by the vectorized sweeps.
_JT = np.array(
    [[mul_sigma_indices(a, b)[0] for b in range(4)] for a in range(4)], dtype=np.int64
)
_QT = np.array(
    [[mul_sigma_indices(a, b)[1] for b in range(4)] for a in range(4)], dtype=np.int64
)


def worker_count(requested: int | None = None) -> int:
    """Worker count for parallel sweeps, capped by POLYSIGMA_THREADS."""
    if requested is None:
        cpus = os.cpu_count() or 1
        # on 1-2 cores the chunked numpy kernels saturate memory bandwidth
        # already; threads only add contention
        requested = 1 if cpus <= 2 else min(4, cpus)
    cap = os.environ.get("POLYSIGMA_THREADS")
    if cap is not None:
        try:
            requested = min(requested, max(1, int(cap)))
        except ValueError:
            raise DomainError(f"POLYSIGMA_THREADS must be an integer, got {cap!r}")
    return max(1, requested)


def lower(obj) -> np.ndarray:
    """Dense realization of a symbolic label or block element."""
    if isinstance(obj, BlockCyclicMatrix):
        return obj.dense()
    if isinstance(obj, PolyadicSU2Element):
        return obj.matrix().dense()
    if isinstance(obj, SU2Params):
        return obj.block()
    dense = getattr(obj, "dense", None)
    if callable(dense):
        return dense()
    raise DomainError(f"cannot lower {type(obj).__name__} to a dense matrix")


# ---------------------------------------------------------------------------
# family plumbing


@dataclass(frozen=True)
class _Family:
    name: str
    n: int
    q: int
    order: int
    mult_len: int                       # factor count of the basic product
    dense_stack: np.ndarray             # (order, d, d)
    index_mult: Callable[[np.ndarray], np.ndarray]   # (B, tl) -> (B,)
    tokens: tuple[str, ...]


def _fold_jr(js: np.ndarray, rs: np.ndarray, q: int) -> tuple[np.ndarray, np.ndarray]:
    j = js[:, 0].copy()
    quarter = np.zeros(js.shape[0], dtype=np.int64)
    rsum = rs[:, 0].astype(np.int64).copy()
    for t in range(1, js.shape[1]):
        quarter += _QT[j, js[:, t]]
        j = _JT[j, js[:, t]]
        rsum += rs[:, t]
    return j, (rsum + (q // 4) * quarter) % q


def family_context(name: str, n: int, q: int) -> _Family:
    check_modulus(q)
    if name == "pauli":
        labels = phases.pauli_labels(q)

        def mult_idx(idx: np.ndarray) -> np.ndarray:
            j, r = _fold_jr(idx // q, idx % q, q)
            return j * q + r

        return _Family(name, 2, q, len(labels), 2,
                       np.stack([lab.dense() for lab in labels]), mult_idx,
                       tuple(lab.token() for lab in labels))

    if n < 3:
        raise DomainError(f"arity must be >= 3 for family {name!r}, got {n}")
    m = n - 1

    if name == "full":
        labels = phases.full_labels(n, q)

        def mult_idx(idx: np.ndarray) -> np.ndarray:
            j, r = _fold_jr(idx // q, idx % q, q)
            return j * q + r

        return _Family(name, n, q, len(labels), n,
                       np.stack([lab.dense() for lab in labels]), mult_idx,
                       tuple(lab.token() for lab in labels))

    if name == "elementary":
        labels = phases.elementary_labels(n, q)
        zero_idx = len(labels) - 1

        def mult_idx(idx: np.ndarray) -> np.ndarray:
            zero = (idx == zero_idx).any(axis=1)
            j = idx // (m * q)
            k0 = (idx // q) % m
            r = idx % q
            chained = np.ones(idx.shape[0], dtype=bool)
            for t in range(idx.shape[1] - 1):
                chained &= k0[:, t + 1] == (k0[:, t] + 1) % m
            jr, rr = _fold_jr(np.where(zero[:, None], 0, j), r, q)
            out = (jr * m + k0[:, 0]) * q + rr
            out[zero | ~chained] = zero_idx
            return out

        return _Family(name, n, q, len(labels), n,
                       np.stack([lab.dense() for lab in labels]), mult_idx,
                       tuple(lab.token() for lab in labels))

    if name == "het":
        labels = phases.het_phased_labels(n, q)
        qm = q ** m

        def mult_idx(idx: np.ndarray) -> np.ndarray:
            jidx = idx // qm
            ridx = idx % qm
            js = np.stack([(jidx // 4 ** (m - 1 - i)) % 4 for i in range(m)], axis=-1)
            rs = np.stack([(ridx // q ** (m - 1 - i)) % q for i in range(m)], axis=-1)
            tl = idx.shape[1]
            jidx_out = np.zeros(idx.shape[0], dtype=np.int64)
            ridx_out = np.zeros(idx.shape[0], dtype=np.int64)
            for s in range(m):
                j = js[:, 0, s].copy()
                quarter = np.zeros(idx.shape[0], dtype=np.int64)
                rsum = rs[:, 0, s].astype(np.int64).copy()
                for t in range(1, tl):
                    col = (s + t) % m
                    quarter += _QT[j, js[:, t, col]]
                    j = _JT[j, js[:, t, col]]
                    rsum += rs[:, t, col]
                jidx_out = jidx_out * 4 + j
                ridx_out = ridx_out * q + (rsum + (q // 4) * quarter) % q
            return jidx_out * qm + ridx_out

        return _Family(name, n, q, len(labels), n,
                       np.stack([lab.dense() for lab in labels]), mult_idx,
                       tuple(lab.token() for lab in labels))

    raise DomainError(f"unknown family {name!r}; expected one of {_FAMILIES}")


# ---------------------------------------------------------------------------
# sweep summaries


@dataclass
class SweepSummary:
    family: str
    n: int
    q: int
    tuple_len: int
    kind: str                      # "closure" | "associativity"
    total: int
    checked: int
    passed: bool
    max_abs_deviation: float
    witness: dict | None
    exhaustive: bool
    tolerance: float
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "family": self.family, "n": self.n, "q": self.q,
            "tuple_len": self.tuple_len, "kind": self.kind,
            "total": self.total, "checked": self.checked,
            "passed": self.passed,
            "max_abs_deviation": self.max_abs_deviation,
            "witness": self.witness, "exhaustive": self.exhaustive,
            "tolerance": self.tolerance, "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def name(self) -> str:
        return f"{self.family}-n{self.n}-q{self.q}-{self.kind}-{self.tuple_len}"


def summaries_to_junit(summaries: Sequence[SweepSummary]) -> str:
    """JUnit-style XML for CI consumption."""
    suite = ET.Element(
        "testsuite",
        name="polysigma.oracle",
        tests=str(len(summaries)),
        failures=str(sum(0 if s.passed else 1 for s in summaries)),
    )
    for s in summaries:
        case = ET.SubElement(suite, "testcase", classname="polysigma.oracle", name=s.name())
        if not s.passed:
            fail = ET.SubElement(
                case, "failure",
                message=f"max deviation {s.max_abs_deviation} > {s.tolerance}",
            )
            fail.text = json.dumps(s.witness, sort_keys=True)
    return ET.tostring(suite, encoding="unicode", xml_declaration=True) + "\n"


# ---------------------------------------------------------------------------
# tuple generation


def _build_tuples(order: int, tuple_len: int, start: int, stop: int) -> np.ndarray:
    """Tuple rows for flat indices start..stop-1 in row-major order."""
    rem = np.arange(start, stop, dtype=np.int64)
    cols = []
    for _ in range(tuple_len):
        cols.append(rem % order)
        rem = rem // order
    return np.stack(cols[::-1], axis=1)


def _chunk_ranges(total: int, chunk: int):
    start = 0
    while start < total:
        yield start, min(start + chunk, total)
        start = min(start + chunk, total)


def _sampled_tuples(order: int, tuple_len: int, samples: int, seed: int) -> np.ndarray:
    """Seeded tuples with stratified coverage: a permutation of the label set
    fills the leading tuples so every label appears when capacity allows."""
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, order, size=(samples, tuple_len), dtype=np.int64)
    perm = rng.permutation(order)
    slots = min(samples * tuple_len, order)
    flat = idx.reshape(-1)
    flat[:slots] = perm[:slots]
    return flat.reshape(samples, tuple_len)


@dataclass
class CheckResult:
    passed: bool
    exhaustive: bool
    checked: int
    total: int
    max_abs_deviation: float
    witness: dict | None


def _closure_deviation(fam: _Family, idx: np.ndarray, prod: np.ndarray,
                       tol: float) -> tuple[float, int | None]:
    res = fam.index_mult(idx)
    np.subtract(prod, fam.dense_stack[res], out=prod)
    dev = np.abs(prod.reshape(idx.shape[0], -1)).max(axis=1)
    worst = float(dev.max()) if dev.size else 0.0
    if worst > tol:
        return worst, int(np.argmax(dev > tol))
    return worst, None


def _closure_on_tuples(fam: _Family, idx: np.ndarray, tol: float) -> tuple[float, int | None]:
    """Max deviation over tuple rows; returns (max_dev, first bad row or None)."""
    prod = fam.dense_stack[idx[:, 0]]
    for t in range(1, idx.shape[1]):
        prod = prod @ fam.dense_stack[idx[:, t]]
    return _closure_deviation(fam, idx, prod, tol)


def _closure_on_range(fam: _Family, tuple_len: int, start: int, stop: int,
                      tol: float) -> tuple[float, int | None, np.ndarray | None]:
    """Exhaustive chunk in flat row-major order.  Chunks aligned to the label
    count share the leading tuple_len-1 factors across runs, so the prefix
    product is computed once per run."""
    order = fam.order
    if tuple_len >= 2 and start % order == 0 and (stop - start) % order == 0:
        pref = _build_tuples(order, tuple_len - 1, start // order, stop // order)
        acc = fam.dense_stack[pref[:, 0]]
        for t in range(1, tuple_len - 1):
            acc = acc @ fam.dense_stack[pref[:, t]]
        last = np.tile(np.arange(order, dtype=np.int64), pref.shape[0])
        prod = np.repeat(acc, order, axis=0) @ fam.dense_stack[last]
        idx = np.concatenate(
            [np.repeat(pref, order, axis=0), last[:, None]], axis=1
        )
    else:
        idx = _build_tuples(order, tuple_len, start, stop)
        prod = fam.dense_stack[idx[:, 0]]
        for t in range(1, tuple_len):
            prod = prod @ fam.dense_stack[idx[:, t]]
    worst, bad = _closure_deviation(fam, idx, prod, tol)
    return worst, bad, (idx[bad] if bad is not None else None)


def _assoc_on_tuples(fam: _Family, idx: np.ndarray) -> int | None:
    """Compare all bracketings of a (2n-1)-factor product; exact in label space.
    Returns the first disagreeing row or None."""
    n = fam.mult_len
    results = []
    for p in range(n):
        inner = fam.index_mult(idx[:, p:p + n])
        outer = np.concatenate(
            [idx[:, :p], inner[:, None], idx[:, p + n:]], axis=1
        )
        results.append(fam.index_mult(outer))
    agree = np.ones(idx.shape[0], dtype=bool)
    for p in range(1, n):
        agree &= results[0] == results[p]
    if agree.all():
        return None
    return int(np.argmax(~agree))


def _witness(fam: _Family, row: np.ndarray, kind: str) -> dict:
    ops = [fam.tokens[int(i)] for i in row]
    return {"kind": kind, "operands": ops}


_CHUNK = 1 << 18


def _run_closure_exhaustive(fam: _Family, tuple_len: int, tol: float,
                            workers: int) -> CheckResult:
    total = fam.order ** tuple_len
    checked = 0
    worst = 0.0

    def work(rng: tuple[int, int]):
        start, stop = rng
        dev, bad, bad_row = _closure_on_range(fam, tuple_len, start, stop, tol)
        return start, stop, dev, bad, bad_row

    chunk = max(fam.order * (_CHUNK // fam.order), fam.order) if fam.order <= _CHUNK else _CHUNK
    ranges = _chunk_ranges(total, chunk)
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    results = pool.map(work, ranges) if pool else map(work, ranges)
    try:
        for start, stop, dev, bad, bad_row in results:
            worst = max(worst, dev)
            if bad is not None:
                witness = _witness(fam, bad_row, "closure")
                witness["max_abs_deviation"] = worst
                return CheckResult(False, True, start + bad + 1, total, worst, witness)
            checked = stop
    finally:
        if pool:
            pool.shutdown(wait=False, cancel_futures=True)
    return CheckResult(True, True, checked, total, worst, None)


def _run_closure_sampled(fam: _Family, tuple_len: int, samples: int,
                         seed: int, tol: float) -> CheckResult:
    idx = _sampled_tuples(fam.order, tuple_len, samples, seed)
    dev, bad = _closure_on_tuples(fam, idx, tol)
    if bad is not None:
        witness = _witness(fam, idx[bad], "closure")
        witness["max_abs_deviation"] = dev
        return CheckResult(False, False, bad + 1, samples, dev, witness)
    return CheckResult(True, False, samples, samples, dev, None)


def closure_check(family: str, n: int, q: int, *, mode: str = "auto",
                  budget: int = DEFAULT_BUDGET, samples: int = 100_000,
                  seed: int = 42, tol: float = DEFAULT_TOL,
                  workers: int | None = None) -> CheckResult:
    """Oracle check of the family's product: the symbolic result of every
    enumerated (or sampled) factor tuple must equal the literal dense product
    entrywise within ``tol``."""
    fam = family_context(family, n, q)
    tl = fam.mult_len
    total = fam.order ** tl
    w = worker_count(workers)
    if mode not in ("auto", "exhaustive", "sample"):
        raise DomainError(f"mode must be auto|exhaustive|sample, got {mode!r}")
    if mode == "exhaustive" and total > budget:
        raise BudgetExceededError(
            f"{total} products exceed the budget of {budget}; switch to sampling"
        )
    if mode == "exhaustive" or (mode == "auto" and total <= budget):
        return _run_closure_exhaustive(fam, tl, tol, w)
    return _run_closure_sampled(fam, tl, samples, seed, tol)


def assoc_check(family: str, n: int, q: int, *, mode: str = "auto",
                budget: int = 2_000_000, samples: int = 100_000,
                seed: int = 42) -> CheckResult:
    """Total polyadic associativity: all bracketings of a (2n-1)-factor
    product agree.  Exact label arithmetic; no tolerance involved."""
    fam = family_context(family, n, q)
    tl = 2 * fam.mult_len - 1
    total = fam.order ** tl
    if mode not in ("auto", "exhaustive", "sample"):
        raise DomainError(f"mode must be auto|exhaustive|sample, got {mode!r}")
    run_exhaustive = mode == "exhaustive" or (mode == "auto" and total <= budget)
    if mode == "exhaustive" and total > budget:
        raise BudgetExceededError(
            f"{total} bracketing tuples exceed the budget of {budget}"
        )
    checked = 0
    if run_exhaustive:
        for start, stop in _chunk_ranges(total, _CHUNK):
            idx = _build_tuples(fam.order, tl, start, stop)
            bad = _assoc_on_tuples(fam, idx)
            if bad is not None:
                return CheckResult(False, True, start + bad + 1, total, 0.0,
                                   _witness(fam, idx[bad], "associativity"))
            checked = stop
        return CheckResult(True, True, checked, total, 0.0, None)
    idx = _sampled_tuples(fam.order, tl, samples, seed)
    bad = _assoc_on_tuples(fam, idx)
    if bad is not None:
        return CheckResult(False, False, bad + 1, samples, 0.0,
                           _witness(fam, idx[bad], "associativity"))
    return CheckResult(True, False, samples, samples, 0.0, None)


def exhaustive_sweep(family: str, n: int, q: int, tuple_len: int, *,
                     budget: int = DEFAULT_BUDGET, tol: float = DEFAULT_TOL,
                     workers: int | None = None) -> SweepSummary:
    """Exhaustive verification sweep over all label tuples of the given length.

    ``tuple_len`` equal to the family's product arity runs the closure/oracle
    sweep; 2*arity-1 runs the bracketing (associativity) sweep.  Refuses with
    BudgetExceededError when the product count exceeds ``budget``.
    """
    fam = family_context(family, n, q)
    total = fam.order ** tuple_len
    if total > budget:
        raise BudgetExceededError(
            f"{total} products exceed the budget of {budget}; switch to sampling"
        )
    if tuple_len == fam.mult_len:
        res = closure_check(family, n, q, mode="exhaustive", budget=budget,
                            tol=tol, workers=workers)
        kind = "closure"
    elif tuple_len == 2 * fam.mult_len - 1:
        res = assoc_check(family, n, q, mode="exhaustive", budget=budget)
        kind = "associativity"
    else:
        raise DomainError(
            f"tuple length must be {fam.mult_len} (closure) or "
            f"{2 * fam.mult_len - 1} (associativity), got {tuple_len}"
        )
    return SweepSummary(
        family=family, n=fam.n, q=q, tuple_len=tuple_len, kind=kind,
        total=res.total, checked=res.checked, passed=res.passed,
        max_abs_deviation=res.max_abs_deviation, witness=res.witness,
        exhaustive=True, tolerance=tol,
    )


def sampled_sweep(family: str, n: int, q: int, tuple_len: int, *,
                  samples: int = 100_000, seed: int = 42,
                  tol: float = DEFAULT_TOL) -> SweepSummary:
    """Seeded, stratified sampling variant of ``exhaustive_sweep``."""
    fam = family_context(family, n, q)
    if tuple_len == fam.mult_len:
        res = closure_check(family, n, q, mode="sample", samples=samples,
                            seed=seed, tol=tol)
        kind = "closure"
    elif tuple_len == 2 * fam.mult_len - 1:
        res = assoc_check(family, n, q, mode="sample", samples=samples, seed=seed)
        kind = "associativity"
    else:
        raise DomainError(
            f"tuple length must be {fam.mult_len} or {2 * fam.mult_len - 1}, "
            f"got {tuple_len}"
        )
    return SweepSummary(
        family=family, n=fam.n, q=q, tuple_len=tuple_len, kind=kind,
        total=fam.order ** tuple_len, checked=res.checked, passed=res.passed,
        max_abs_deviation=res.max_abs_deviation, witness=res.witness,
        exhaustive=False, tolerance=tol, seed=seed,
    )


# ---------------------------------------------------------------------------
# targeted dense checks used by the structure builders


def querelement_dense_check(family: str, n: int, q: int, *, tol: float = DEFAULT_TOL) -> float:
    """Max deviation of the querelement defining relation, lowered to dense
    matrices, over every element and insertion position."""
    if family == "full":
        labels = phases.full_labels(n, q)
        quer = phases.full_querelement
        mult_len = n
    elif family == "het":
        labels = phases.het_phased_labels(n, q)
        quer = phases.het_querelement if n == 3 else phases.het_querelement_general
        mult_len = n
    else:
        raise DomainError(f"querelement check supports full|het, got {family!r}")
    worst = 0.0
    for a in labels:
        da = a.dense()
        dq = quer(a).dense()
        for pos in range(mult_len):
            prod = np.eye(da.shape[0], dtype=np.complex128)
            for t in range(mult_len):
                prod = prod @ (dq if t == pos else da)
            worst = max(worst, float(np.abs(prod - da).max()))
    return worst


def het_querelement_inverse_check(q: int, *, tol: float = DEFAULT_TOL) -> float:
    """Max deviation between the ternary heterogeneous querelement and the
    dense matrix inverse, over the full enumerated label set."""
    worst = 0.0
    for a in phases.het_phased_labels(3, q):
        inv = np.linalg.inv(a.dense())
        worst = max(worst, float(np.abs(phases.het_querelement(a).dense() - inv).max()))
    return worst


# ---------------------------------------------------------------------------
# single-case verification


@dataclass(frozen=True)
class VerificationCase:
    """One adjudication: operands, the claimed symbolic result, a tolerance."""

    family: str
    operands: tuple
    expected: object
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        object.__setattr__(self, "operands", tuple(self.operands))
        if not self.operands:
            raise DomainError("at least one operand required")
        for attr in ("q", "n"):
            vals = {getattr(o, attr) for o in self.operands if hasattr(o, attr)}
            if len(vals) > 1:
                raise DomainError(f"operands disagree on {attr}: {sorted(vals)}")


@dataclass(frozen=True)
class VerificationOutcome:
    passed: bool
    max_abs_deviation: float
    witness: tuple | None


def _case_lower(family: str, obj) -> np.ndarray:
    if family == "su2-params" and isinstance(obj, SU2Params):
        return binary_su2_matrix(obj)
    return lower(obj)


def verify(case: VerificationCase) -> VerificationOutcome:
    """Compare the lowered expected result against the literal dense product
    of the lowered operands, entrywise."""
    mats = [_case_lower(case.family, o) for o in case.operands]
    dims = {m.shape for m in mats}
    if len(dims) != 1:
        raise DomainError(f"inconsistent operand dimensions: {sorted(dims)}")
    prod = mats[0]
    for m in mats[1:]:
        prod = prod @ m
    expected = _case_lower(case.family, case.expected)
    if expected.shape != prod.shape:
        raise DomainError("expected result has inconsistent dimension")
    dev = float(np.abs(prod - expected).max())
    if dev <= case.tolerance:
        return VerificationOutcome(True, dev, None)
    return VerificationOutcome(False, dev, case.operands)

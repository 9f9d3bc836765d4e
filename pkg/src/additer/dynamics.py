"""Periodic points and factor statistics of iterated additive maps."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .additive import AdditivePoly, AffinePoly, as_affine, is_exceptional, iterate_affine, to_dense
from .errors import ExceptionalForm, OracleTooLarge
from .field import make_extension
from .linalg import affine_solve, fitting, mat_pow, matmul, matrix_of_map, rank
from .poly import DensePoly, FrobeniusOperator, distinct_degree, factorize
from .splitting import reduced_iterate, split_degree

FULL_FACTOR_LIMIT = 1 << 8


def orbit_cap() -> int:
    return int(os.environ.get("ADDITER_ORBIT_CAP", 1 << 12))


def oracle_cap() -> int:
    return int(os.environ.get("ADDITER_ORACLE_CAP", 1 << 12))


# -- periodic points --------------------------------------------------------------


@dataclass
class PeriodicEntry:
    n: int
    delta: int
    pi: int
    proportion: Fraction
    verified: bool | None = None


def _span_codes(basis, p):
    """Integer codes of every vector in the span of the rows of basis."""
    dim = basis.shape[1]
    weights = p ** np.arange(dim, dtype=np.int64)
    vecs = np.zeros((1, dim), dtype=np.int64)
    for row in basis:
        vecs = np.concatenate([(vecs + c * row) % p for c in range(p)])
    codes = vecs @ weights
    return set(codes.tolist())


def _periodic_by_orbits(T, p):
    """Periodic points of z -> Tz on F_p^D, by shrinking the image until stable."""
    D = T.shape[0]
    size = p**D
    weights = p ** np.arange(D, dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    vecs = (idx[:, None] // weights[None, :]) % p
    images = matmul(vecs, T.T % p, p) @ weights
    current = np.ones(size, dtype=bool)
    while True:
        nxt = np.zeros(size, dtype=bool)
        nxt[images[current]] = True
        if np.array_equal(nxt, current):
            return set(np.flatnonzero(current).tolist())
        current = nxt


def periodic_count(A: AdditivePoly, n: int, verify_cap: int | None = None) -> PeriodicEntry:
    """pi_A(n) = q^n / #W_0, from the stable kernel of z -> A(z) on F_(q^n)."""
    ctx = A.ctx
    ext = make_extension(ctx, n)
    T = matrix_of_map(A, ext)
    fp = fitting(T)
    qn = ctx.q**n
    pi, rem = divmod(qn, ctx.p**fp.delta0)
    assert rem == 0
    entry = PeriodicEntry(n, fp.delta0, pi, Fraction(pi, qn))
    cap = orbit_cap() if verify_cap is None else verify_cap
    if qn <= cap:
        periodic = _periodic_by_orbits(T.a, ctx.p)
        span1 = _span_codes(fp.W1_basis, ctx.p)
        kills = all(
            not mat_pow(T, fp.delta0).apply(v).any() for v in fp.W0_basis
        )
        entry.verified = periodic == span1 and kills and len(periodic) == pi
        if not entry.verified:
            raise AssertionError(f"periodic points disagree with the stable image at n = {n}")
    return entry


@dataclass
class PeriodicReport:
    A: AdditivePoly
    entries: list[PeriodicEntry]
    M: int | None = None
    N: int | None = None
    bound: Fraction | None = None
    coprime_ns: list[int] = field(default_factory=list)
    ladder_ns: list[int] = field(default_factory=list)
    coprime_ok: bool | None = None
    ladder_decreasing: bool | None = None

    def entry(self, n: int) -> PeriodicEntry:
        return next(e for e in self.entries if e.n == n)


def _kernel_growth_end(A: AdditivePoly, M: int) -> int:
    """Largest N such that A^(N) has a root in F_(q^M) that A^(N-1) lacks."""
    ext = make_extension(A.ctx, M)
    T = matrix_of_map(A, ext)
    prev, k, last = 0, 0, 0
    P = np.eye(ext.D, dtype=np.int64)
    while True:
        k += 1
        P = matmul(T.a, P, ext.p)
        nullity = ext.D - rank(type(T)(ext.p, P))
        if nullity == prev:
            return last
        prev, last = nullity, k


def proportion_scan(A: AdditivePoly, n_range, verify_cap: int | None = None) -> PeriodicReport:
    """Proportions pi_A(n)/q^n and the two subsequences n = Mt and n = Mp^i."""
    ns = sorted(set(n_range))
    report = PeriodicReport(A, [periodic_count(A, n, verify_cap) for n in ns])
    if A.is_zero() or is_exceptional(A):
        return report
    p = A.ctx.p
    M = split_degree(A, 1)
    N = _kernel_growth_end(A, M)
    report.M, report.N = M, N
    report.bound = Fraction(1, p ** (A.d * N))
    report.coprime_ns = [n for n in ns if n % M == 0 and gcd(n // M, p) == 1]
    report.ladder_ns = []
    i = 0
    while M * p**i <= ns[-1]:
        if M * p**i in ns:
            report.ladder_ns.append(M * p**i)
        i += 1
    report.coprime_ok = all(report.entry(n).proportion >= report.bound for n in report.coprime_ns)
    props = [report.entry(n).proportion for n in report.ladder_ns]
    report.ladder_decreasing = all(a > b for a, b in zip(props, props[1:]))
    return report


# -- factor statistics ---------------------------------------------------------------


@dataclass
class FactorStatsReport:
    n: int
    s: int
    exact_counts: dict[int, int]
    N: int
    rho: Fraction
    method: str

    @property
    def rho_over_n(self) -> Fraction:
        return self.rho / self.n

    @property
    def factor_counts(self) -> dict[int, int]:
        return {d: c // d for d, c in self.exact_counts.items()}


def _kernel_counts(F: AffinePoly, n: int, s: int) -> dict[int, int]:
    """Distinct roots of F^(n) of each exact degree, via subfield counts."""
    _, beta = iterate_affine(F, n)
    in_field = {}
    for e in divisors(s):
        ext = make_extension(F.ctx, e)
        Tn = mat_pow(matrix_of_map(F.A, ext), n)
        consistent, count = affine_solve(Tn, ext.neg(ext.embed(beta)))
        in_field[e] = count if consistent else 0
    exact = {}
    for d in divisors(s):
        c = sum(mobius(d // e) * in_field[e] for e in divisors(d))
        if c:
            exact[d] = int(c)
    return exact


def _oracle_counts(F: AffinePoly, n: int, cap: int) -> tuple[int, dict[int, int]]:
    At, gamma = reduced_iterate(F, n)
    p = F.ctx.p
    if p**At.top > cap:
        raise OracleTooLarge(f"dense degree {p}^{At.top} exceeds the oracle cap {cap}")
    f = to_dense(AffinePoly(At, gamma))
    X = DensePoly.x(f.ctx) % f
    op = FrobeniusOperator(f)
    h, s = X, 0
    while True:
        s += 1
        for _ in range(F.ctx.R):
            h = op(h)
        if h == X:
            break
    if f.degree <= FULL_FACTOR_LIMIT:
        exact: dict[int, int] = {}
        for g, mult in factorize(f).factors:
            assert mult == 1
            exact[g.degree] = exact.get(g.degree, 0) + g.degree
        return s, exact
    parts = distinct_degree(f, set(divisors(s)))
    return s, {d: P.degree for d, P in parts.items()}


def _finish(F, n, s, exact, method):
    p = F.ctx.p
    total = p ** (F.A.d * n)
    if sum(exact.values()) != total:
        raise AssertionError(f"root counts sum to {sum(exact.values())}, expected {total}")
    if any(c < 0 or c % d for d, c in exact.items()):
        raise AssertionError("inconsistent root counts by degree")
    N = sum(c // d for d, c in exact.items())
    rho = Fraction(total, N)
    assert rho * N == total
    return FactorStatsReport(n, s, dict(sorted(exact.items())), N, rho, method)


def factor_stats(B, n: int, method: str = "kernel", cap: int | None = None) -> FactorStatsReport:
    """N_B(n) and rho_B(n) = p^(dn) / N_B(n)."""
    F = as_affine(B)
    if is_exceptional(F):
        raise ExceptionalForm("factor statistics need a non-exceptional polynomial")
    if method not in ("kernel", "oracle", "both"):
        raise ValueError(f"unknown method {method!r}")
    cap = oracle_cap() if cap is None else cap
    if method == "oracle":
        s, exact = _oracle_counts(F, n, cap)
        return _finish(F, n, s, exact, "oracle")
    s = split_degree(F, n)
    kernel = _finish(F, n, s, _kernel_counts(F, n, s), "kernel")
    if method == "both":
        s_o, exact_o = _oracle_counts(F, n, cap)
        oracle = _finish(F, n, s_o, exact_o, "oracle")
        if (oracle.s, oracle.exact_counts) != (kernel.s, kernel.exact_counts):
            raise AssertionError(f"kernel and oracle disagree at n = {n}")
        kernel.method = "both"
    return kernel


@dataclass
class RhoScan:
    reports: list[FactorStatsReport]
    min_ratio: Fraction
    max_ratio: Fraction


def rho_scan(B, n_max: int, method: str = "kernel") -> RhoScan:
    reports = [factor_stats(B, n, method) for n in range(1, n_max + 1)]
    ratios = [r.rho_over_n for r in reports]
    return RhoScan(reports, min(ratios), max(ratios))

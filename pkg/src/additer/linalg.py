"""Exact linear algebra over F_p.

Dense numpy int64 matrices with entries in [0, p).  Products go through
float64 BLAS whenever the inner dimension times (p-1)^2 stays below 2^53,
which keeps them exact.  Elimination over F_2 runs on rows packed into
uint64 words and cleared by XOR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContextMismatch, DimensionMismatch, NonSquare

_EXACT = float(1 << 53)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    p: int
    a: np.ndarray

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @property
    def shape(self):
        return self.a.shape

    def __eq__(self, other):
        return isinstance(other, FpMatrix) and self.p == other.p and np.array_equal(self.a, other.a)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.p != other.p:
            raise ContextMismatch("matrices over different primes")
        return FpMatrix(self.p, matmul(self.a, other.a, self.p))

    def __pow__(self, k: int) -> "FpMatrix":
        return mat_pow(self, k)

    def apply(self, v):
        return matmul(self.a, np.asarray(v, dtype=np.int64).reshape(-1, 1), self.p).ravel()

    def is_zero(self) -> bool:
        return not self.a.any()


def matmul(a, b, p: int):
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] * float(p - 1) ** 2 < _EXACT:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.fmod(out, p).astype(np.int64)
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def _square(M: FpMatrix):
    if M.a.ndim != 2 or M.a.shape[0] != M.a.shape[1]:
        raise NonSquare(f"matrix of shape {M.a.shape} is not square")


def mat_pow(M: FpMatrix, k: int) -> FpMatrix:
    _square(M)
    result = np.eye(M.a.shape[0], dtype=np.int64)
    base = M.a % M.p
    while k:
        if k & 1:
            result = matmul(result, base, M.p)
        k >>= 1
        if k:
            base = matmul(base, base, M.p)
    return FpMatrix(M.p, result)


def _rref_gf2(a):
    rows, cols = a.shape
    nwords = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, nwords * 64), dtype=np.uint8)
    padded[:, :cols] = a & 1
    words = np.packbits(padded, axis=1, bitorder="little").view(np.uint64).copy()
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        w, b = divmod(c, 64)
        bit = np.uint64(1) << np.uint64(b)
        hits = np.flatnonzero(words[r:, w] & bit)
        if len(hits) == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            words[[r, piv]] = words[[piv, r]]
        mask = (words[:, w] & bit) != 0
        mask[r] = False
        if mask.any():
            words[mask] ^= words[r]
        pivots.append(c)
        r += 1
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")[:, :cols]
    return bits.astype(np.int64), pivots


def rref(a, p: int):
    """Reduced row echelon form over F_p and the list of pivot columns."""
    a = np.array(a, dtype=np.int64) % p
    if a.size == 0:
        return a, []
    if p == 2:
        return _rref_gf2(a)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(a[r:, c])
        if len(hits) == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        col = a[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if len(others):
            a[others] = (a[others] - np.outer(col[others], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _pivots_blocked(a, p: int, block: int = 64) -> list[int]:
    """Pivot columns of a row echelon form, by blocked LU over F_p.

    Each panel of columns is eliminated on its own, recording the
    multipliers L; the rows to the right are then updated in one product,
    A22 -= L21 (L11^-1 A12), so the cubic work runs through matmul.
    """
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c0 in range(0, cols, block):
        if r == rows:
            break
        c1 = min(c0 + block, cols)
        panel = a[r:, c0:c1]
        L = np.zeros((rows - r, c1 - c0), dtype=np.int64)
        k = 0
        for c in range(c1 - c0):
            if k == rows - r:
                break
            hits = np.flatnonzero(panel[k:, c])
            if len(hits) == 0:
                continue
            piv = k + hits[0]
            if piv != k:
                a[[r + k, r + piv]] = a[[r + piv, r + k]]
                L[[k, piv]] = L[[piv, k]]
            inv = pow(int(panel[k, c]), p - 2, p)
            below = np.flatnonzero(panel[k + 1 :, c]) + k + 1
            if len(below):
                m = panel[below, c] * inv % p
                L[below, k] = m
                panel[below] = (panel[below] - np.outer(m, panel[k])) % p
            pivots.append(c0 + c)
            k += 1
        if k and c1 < cols:
            # U12 = L11^-1 A12, then A22 -= L21 U12
            U12 = a[r : r + k, c1:]
            for j in range(k - 1):
                m = L[j + 1 : k, j]
                nz = np.flatnonzero(m)
                if len(nz):
                    U12[j + 1 + nz] = (U12[j + 1 + nz] - np.outer(m[nz], U12[j])) % p
            if r + k < rows:
                L21 = L[k:, :k]
                a[r + k :, c1:] = (a[r + k :, c1:] - matmul(L21, U12, p)) % p
        r += k
    return pivots


def _kernel_from_rref(red, pivots, cols, p):
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-red[i, f]) % p
    return basis


def rank_kernel(M, p: int | None = None):
    """Rank and a kernel basis (as rows) of M, given as FpMatrix or (array, p)."""
    if isinstance(M, FpMatrix):
        a, p = M.a, M.p
    else:
        a = np.asarray(M, dtype=np.int64)
    red, pivots = rref(a, p)
    kernel = _kernel_from_rref(red, pivots, a.shape[1], p)
    assert len(pivots) + len(kernel) == a.shape[1]
    return len(pivots), kernel


def rank(M: FpMatrix) -> int:
    if M.p == 2 or min(M.a.shape, default=0) < 96:
        return len(rref(M.a, M.p)[1])
    return len(_pivots_blocked(M.a, M.p))


def image_basis(M: FpMatrix):
    """Basis (as rows) of the column space of M."""
    _, pivots = rref(M.a, M.p)
    return M.a[:, pivots].T.copy() % M.p


def is_nilpotent(M: FpMatrix) -> bool:
    _square(M)
    return mat_pow(M, M.a.shape[0]).is_zero()


@dataclass(frozen=True, eq=False)
class FittingPair:
    """Stable kernel W0 and stable image W1 of a square matrix (bases as rows)."""

    W0_basis: np.ndarray
    W1_basis: np.ndarray

    @property
    def delta0(self) -> int:
        return len(self.W0_basis)

    @property
    def delta1(self) -> int:
        return len(self.W1_basis)


def fitting(M: FpMatrix) -> FittingPair:
    _square(M)
    stable = mat_pow(M, M.a.shape[0])
    _, w0 = rank_kernel(stable)
    w1 = image_basis(stable)
    assert len(w0) + len(w1) == M.a.shape[0]
    return FittingPair(w0, w1)


def affine_solve(M: FpMatrix, v):
    """Is M z = v solvable?  Returns (consistent, number of solutions)."""
    v = np.asarray(v, dtype=np.int64).ravel() % M.p
    rows, cols = M.a.shape
    if len(v) != rows:
        raise DimensionMismatch(f"vector of length {len(v)} against {rows} rows")
    aug = np.concatenate([M.a % M.p, v.reshape(-1, 1)], axis=1)
    if M.p == 2 or min(aug.shape) < 96:
        pivots = rref(aug, M.p)[1]
    else:
        pivots = _pivots_blocked(aug, M.p)
    if pivots and pivots[-1] == cols:
        return False, 0
    return True, M.p ** (cols - len(pivots))


def matrix_of_map(A, ext) -> FpMatrix:
    """Matrix over F_p of z -> A(z) on ext = F_{q^s}, A an additive polynomial.

    Since z^(p^D) = z on F_(p^D), the coefficient at index i is folded onto
    index i mod D first; Frobenius powers between occupied indices are
    reached by repeated squaring.
    """
    if A.ctx != ext.base:
        raise ContextMismatch("polynomial and extension use different base fields")
    p, D = ext.p, ext.D
    base = A.ctx
    folded: dict[int, int] = {}
    for i, c in enumerate(A.acoeffs):
        if c:
            folded[i % D] = base.add(folded.get(i % D, 0), c)
    total = np.zeros((D, D), dtype=np.int64)
    frob_i = np.eye(D, dtype=np.int64)
    at = 0
    for i in sorted(folded):
        c = folded[i]
        if not c:
            continue
        if i > at:
            step = mat_pow(FpMatrix(p, ext.frob_matrix), i - at).a if i - at > 1 else ext.frob_matrix
            frob_i = matmul(step, frob_i, p)
            at = i
        total = (total + matmul(ext.mul_matrix(ext.embed(c)), frob_i, p)) % p
    return FpMatrix(p, total)

"""Exact integer linear algebra: Hermite and Smith normal forms, lattice
membership and abelian group invariants.

Matrices are plain lists of rows of Python ints.  Everything here is exact;
no floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def determinant(M):
    """Exact determinant via fraction-free Bareiss elimination."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def xgcd(a, b):
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def lcm(*xs):
    return reduce(lambda a, b: a * b // gcd(a, b) if a and b else 0, xs, 1)


def prime_factors(n):
    """Sorted list of the distinct primes dividing |n| (empty for 0, +-1)."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_prime(n):
    return n >= 2 and prime_factors(n) == [n]


def _row_addmul(A, dst, src, q):
    if q:
        rs, rd = A[src], A[dst]
        for j in range(len(rd)):
            rd[j] += q * rs[j]


def hermite_normal_form(M):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U * M == H``.  Nonzero rows
    of ``H`` come first, pivots are positive and the entries above each pivot
    lie in ``[0, pivot)``.
    """
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            rows = [i for i in range(r, m) if A[i][c]]
            if not rows:
                break
            p = min(rows, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if A[i][c]:
                    q = -(A[i][c] // A[r][c])
                    _row_addmul(A, i, r, q)
                    _row_addmul(U, i, r, q)
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = -(A[i][c] // A[r][c])
            _row_addmul(A, i, r, q)
            _row_addmul(U, i, r, q)
        r += 1
    return A, U


def smith_normal_form(M):
    """Smith normal form ``(S, U, V)`` with ``U * M * V == S``.

    Pivoting always moves the smallest nonzero entry of the active block to
    the diagonal.  The diagonal of ``S`` is nonnegative and forms a
    divisibility chain.
    """
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        cells = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not cells:
            break
        _, i, j = min(cells)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = -(A[i][t] // A[t][t])
                    _row_addmul(A, i, t, q)
                    _row_addmul(U, i, t, q)
                    dirty = dirty or bool(A[i][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    dirty = dirty or bool(A[t][j])
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            piv = A[t][t]
            bad = next((i for i in range(t + 1, m)
                        for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            _row_addmul(A, t, bad, 1)
            _row_addmul(U, t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return A, U, V


def diagonal(S):
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def left_kernel(rows, ncols=None):
    """Basis of the integer vectors ``c`` with ``sum(c[i] * rows[i]) == 0``."""
    if not rows:
        return []
    if ncols is None:
        ncols = len(rows[0])
    if ncols == 0:
        return identity(len(rows))
    H, U = hermite_normal_form(rows)
    return [U[i] for i in range(len(rows)) if not any(H[i])]


def lattice_membership(generators, v):
    """Decide whether ``v`` lies in the integer span of ``generators``.

    Returns ``(True, coefficients)`` with ``sum(c_i * g_i) == v`` or
    ``(False, None)``.
    """
    v = list(v)
    if not generators:
        return (not any(v)), ([] if not any(v) else None)
    H, U = hermite_normal_form(generators)
    rest = list(v)
    y = [0] * len(H)
    n = len(v)
    for r, row in enumerate(H):
        c = next((j for j in range(n) if row[j]), None)
        if c is None:
            break
        if any(rest[j] for j in range(c)):
            return False, None
        if rest[c] % row[c]:
            return False, None
        q = rest[c] // row[c]
        y[r] = q
        for j in range(c, n):
            rest[j] -= q * row[j]
    if any(rest):
        return False, None
    coeffs = [sum(y[r] * U[r][i] for r in range(len(H))) for i in range(len(generators))]
    return True, coeffs


@dataclass(frozen=True)
class AbelianInvariants:
    """Torsion-free rank plus elementary divisors ``d_1 | d_2 | ...``."""

    rank: int
    divisors: tuple = ()

    def __post_init__(self):
        ds = tuple(self.divisors)
        if any(d < 2 for d in ds) or any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError(f"divisors {ds} are not a divisibility chain of integers >= 2")
        object.__setattr__(self, "divisors", ds)

    @property
    def torsion_order(self):
        return reduce(lambda a, b: a * b, self.divisors, 1)

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.divisors

    def torsion_primes(self):
        return sorted({p for d in self.divisors for p in prime_factors(d)})

    def __str__(self):
        parts = [f"C{d}" for d in self.divisors] + ["Z"] * self.rank
        return " x ".join(parts) if parts else "trivial"


def abelian_invariants(relations, ngens):
    """Invariants of ``Z^ngens`` modulo the row span of ``relations``."""
    rows = [list(r) for r in relations if any(r)]
    if not rows:
        return AbelianInvariants(ngens, ())
    S, _, _ = smith_normal_form(rows)
    d = [x for x in diagonal(S) if x]
    return AbelianInvariants(ngens - len(d), tuple(x for x in d if x > 1))


def snf_generators(relations, ngens):
    """Cyclic decomposition of ``Z^ngens / rowspan(relations)``.

    Returns a list of ``(order, vector)`` pairs, order 0 meaning infinite,
    whose vectors generate independent cyclic factors.  Trivial factors are
    dropped.
    """
    rows = [list(r) for r in relations if any(r)]
    if ngens == 0:
        return []
    if not rows:
        return [(0, e) for e in identity(ngens)]
    S, _, V = smith_normal_form(rows)
    d = diagonal(S) + [0] * (ngens - min(len(rows), ngens))
    Vinv = _unimodular_inverse(V)
    return [(d[i], Vinv[i]) for i in range(ngens) if d[i] != 1]


def _unimodular_inverse(V):
    n = len(V)
    H, U = hermite_normal_form(V)
    if H != identity(n):
        raise ValueError("matrix is not unimodular")
    return U


def unimodular_inverse(V):
    """Inverse of an integer matrix with determinant +-1."""
    return _unimodular_inverse(V)

"""Central series machinery on pc groups.

Lower and upper central series, abelian invariants of their factors, the
torsion prime set tau, Hirsch length, pi-isolators and the power-exponent
search for subgroups of nilpotent groups.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd

from . import arith
from .pcgroup import CheckReport, class_bound
from .subgroup import (AbelianSection, QuotientMap, Subgroup, abelian_kernel,
                       join, normal_closure)


class NotNilpotentError(ValueError):
    """Nilpotency could not be established within the class bound."""


class PreconditionError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class PrimeSet:
    """A finite set of primes, or the complement of one (``kind='cofinite'``)."""

    primes: frozenset = frozenset()
    kind: str = "finite"

    def __post_init__(self):
        ps = frozenset(int(p) for p in self.primes)
        bad = [p for p in ps if not arith.is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {sorted(bad)}")
        if self.kind not in ("finite", "cofinite"):
            raise ValueError(f"unknown prime set kind {self.kind!r}")
        object.__setattr__(self, "primes", ps)

    @classmethod
    def of(cls, *primes):
        return cls(frozenset(primes))

    def __contains__(self, p):
        return (p in self.primes) == (self.kind == "finite")

    def complement(self):
        return PrimeSet(self.primes, "cofinite" if self.kind == "finite" else "finite")

    def is_number(self, n):
        """True when every prime dividing ``n`` lies in the set."""
        return all(p in self for p in arith.prime_factors(n))

    def __str__(self):
        body = "{" + ", ".join(str(p) for p in sorted(self.primes)) + "}"
        return body if self.kind == "finite" else f"complement of {body}"


@dataclass
class SeriesTable:
    terms: list
    step_invariants: list
    stabilized: bool = False
    stabilization_index: int | None = None
    sections: list = field(default_factory=list, repr=False)

    @property
    def ambient(self):
        return self.terms[0].ambient

    @property
    def depth(self):
        return len(self.step_invariants)

    def term(self, i):
        """``gamma_i`` with 1-based indexing."""
        return self.terms[i - 1]

    def torsion_primes(self, upto=None):
        upto = self.depth if upto is None else upto
        return sorted({p for inv in self.step_invariants[:upto] for p in inv.torsion_primes()})


def whole(P):
    return Subgroup.whole(P)


def _gens(P):
    return [P.unit(i) for i in range(P.n)]


def next_lower_term(P, K):
    """``[K, P]`` for a normal subgroup ``K``."""
    return normal_closure(P, [P.commutator(x, g) for x in K.cgs for g in _gens(P)])


def lower_central_series(P, depth) -> SeriesTable:
    """``gamma_1, ..., gamma_{depth+1}`` with invariants of each factor."""
    terms = [whole(P)]
    for _ in range(depth):
        prev = terms[-1]
        terms.append(prev if len(terms) > 1 and prev == terms[-2] else next_lower_term(P, prev))
    sections = [AbelianSection(terms[i], terms[i + 1]) for i in range(depth)]
    invs = [s.invariants() for s in sections]
    k = next((i + 1 for i in range(depth) if terms[i].hirsch_length() == terms[i + 1].hirsch_length()),
             None)
    return SeriesTable(terms, invs, k is not None, k, sections)


def nilpotency_class(P, bound=None):
    """Class of ``P``, or ``None`` if ``gamma_{bound+1}`` is not trivial."""
    bound = class_bound() if bound is None else bound
    K = whole(P)
    if K.is_trivial:
        return 0
    for c in range(1, bound + 1):
        K = next_lower_term(P, K)
        if K.is_trivial:
            return c
    return None


def require_nilpotent(P, bound=None):
    bound = class_bound() if bound is None else bound
    c = nilpotency_class(P, bound)
    if c is None:
        raise NotNilpotentError(f"group is not nilpotent of class <= {bound} (class bound {bound})")
    return c


def lower_terms_until_trivial(P, bound=None):
    c = require_nilpotent(P, bound)
    terms = [whole(P)]
    for _ in range(c):
        terms.append(next_lower_term(P, terms[-1]))
    return terms


def hirsch_length(obj):
    if isinstance(obj, Subgroup):
        return obj.hirsch_length()
    return obj.hirsch_length()


def abelianization(P):
    """Invariants of ``P/P'`` and the projection onto a presentation of it."""
    W = whole(P)
    D = next_lower_term(P, W)
    return AbelianSection(W, D).invariants(), QuotientMap(P, D, check=False)


def tau(P) -> PrimeSet:
    """Primes dividing torsion in the lower central factors.

    The series is walked until two consecutive terms have equal Hirsch
    length; from there on every factor has exponent dividing the order of
    that finite factor, so no new primes can appear.
    """
    terms = [whole(P)]
    primes = set()
    while True:
        nxt = next_lower_term(P, terms[-1])
        primes.update(AbelianSection(terms[-1], nxt).invariants().torsion_primes())
        if nxt.hirsch_length() == terms[-1].hirsch_length():
            return PrimeSet(frozenset(primes))
        terms.append(nxt)


def tau_from_table(T: SeriesTable) -> PrimeSet:
    if not T.stabilized:
        raise ValueError("series table has not stabilized; compute it deeper")
    return PrimeSet(frozenset(T.torsion_primes(T.stabilization_index)))


def center(P, bound=None):
    """Centre of a nilpotent pc group.

    Narrows ``S_j = {x : [x, g] in gamma_j}`` one lower central factor at a
    time; on ``S_j`` the map ``x -> ([x, g] gamma_{j+1})_g`` is a homomorphism
    into an abelian group.
    """
    C = lower_terms_until_trivial(P, bound)
    c = len(C) - 1
    gens = _gens(P)
    S = whole(P)
    for j in range(1, c):
        sec = AbelianSection(C[j], C[j + 1])
        k = sec.k
        images = []
        for x in S.cgs:
            row = []
            for g in gens:
                row.extend(sec.express(P.commutator(x, g)))
            images.append(row)
        rels = []
        for b in range(len(gens)):
            for r in sec.relations:
                row = [0] * (k * len(gens))
                row[b * k:(b + 1) * k] = r
                rels.append(row)
        S = abelian_kernel(S, images, rels)
    return S


def upper_central_series(P, j, bound=None):
    """``[Z_1, ..., Z_j]`` for a nilpotent pc group."""
    require_nilpotent(P, bound)
    W = whole(P)
    out = [center(P, bound)]
    while len(out) < j:
        Z = out[-1]
        if Z == W:
            out.append(Z)
            continue
        pi = QuotientMap(P, Z, check=False)
        out.append(pi.preimage(center(pi.codomain, bound)))
    return out[:j]


def subgroup_upper_central_series(S, j, bound=None):
    """Upper central series of a subgroup viewed as a group in its own right."""
    Q, _ = S.presentation()
    return [S.lift(Z) for Z in upper_central_series(Q, j, bound)]


def subgroup_lower_central_series(S, depth):
    Q, _ = S.presentation()
    T = lower_central_series(Q, depth)
    return [S.lift(K) for K in T.terms]


def membership(S, u):
    """``(True, exponents)`` if ``u`` lies in ``S``, else ``(False, None)``."""
    e = S.express(u)
    return (e is not None), e


def _pi_part(n, primes):
    out = 1
    for p in primes:
        while n % p == 0:
            out *= p
            n //= p
    return out


def isolator(P, K, primes, bound=None):
    """The pi-isolator of a normal subgroup ``K`` with nilpotent quotient.

    Repeatedly adjoins the pi-torsion of the centre of ``P/K``: a nontrivial
    finite normal subgroup of a nilpotent group meets its centre.
    """
    if not isinstance(primes, PrimeSet):
        primes = PrimeSet(frozenset(primes))
    if primes.kind != "finite":
        raise ValueError("isolator needs a finite prime set")
    if not K.is_normal():
        raise ValueError("subgroup is not normal")
    current = K
    while True:
        pi = QuotientMap(P, current, check=False)
        Q = pi.codomain
        if nilpotency_class(Q, bound) is None:
            b = class_bound() if bound is None else bound
            raise NotNilpotentError(f"quotient is not nilpotent of class <= {b} (class bound {b})")
        Z = center(Q, bound)
        sec = AbelianSection(Z, Subgroup.trivial(Q))
        new = []
        for order, vec in arith.snf_generators(sec.relations, sec.k):
            if order == 0:
                continue
            part = _pi_part(order, primes.primes)
            if part > 1:
                new.append(sec.element([x * (order // part) for x in vec]))
        if not new:
            return current
        current = Subgroup(P, list(current.cgs) + [pi.lift(u) for u in new])


def exponent_of_pc_group(Q, limit=10 ** 6):
    """Exponent of a finite pc group."""
    if not Q.is_finite:
        raise ValueError("group is infinite")
    abelian = all(w == Q.unit(j) for (j, i), w in Q.conjugates.items())
    if abelian:
        rels = []
        for i, o in enumerate(Q.orders):
            row = [-x for x in Q.powers[i]]
            row[i] += o
            rels.append(row)
        inv = arith.abelian_invariants(rels, Q.n)
        return inv.divisors[-1] if inv.divisors else 1
    if Q.order() > limit:
        raise ValueError(f"group of order {Q.order()} too large to enumerate")
    exp = 1
    elems = [()]
    for o in Q.orders:
        elems = [e + (x,) for e in elems for x in range(o)]
    for e in elems:
        exp = arith.lcm(exp, Q.element_order(Q.normalize(e)))
    return exp


def power_exponent(S, T):
    """Least ``n`` with ``S^n <= T`` for ``T`` normal of finite index in ``S``.

    Returns ``None`` when the index is infinite.
    """
    if S.hirsch_length() != T.hirsch_length():
        return None
    if not T.is_subgroup_of(S):
        raise ValueError("second subgroup is not contained in the first")
    if not T.is_normal(within=S):
        raise ValueError("power exponent needs the smaller subgroup to be normal")
    PS, _ = S.presentation()
    pi = QuotientMap(PS, S.restrict(T), check=False)
    return exponent_of_pc_group(pi.codomain)


def power_exponent_search(P, N, m, bound=None):
    """Exponents for ``G^m <= N G'`` in a nilpotent group.

    Returns ``{'n': n, 'n_i': {i: n_i}}`` with ``G^n <= N`` and
    ``gamma_i(G)^{n_i} <= gamma_i(N)``, each minimal.
    """
    c = require_nilpotent(P, bound)
    W = whole(P)
    D = next_lower_term(P, W)
    ND = join(N, D)
    for i in range(P.n):
        g = P.power(P.unit(i), m)
        if g not in ND:
            raise PreconditionError(f"{P.names[i]}^{m} is not in N G'", witness=P.word_str(g))
    n = power_exponent(W, N)
    GT = lower_terms_until_trivial(P, bound)
    NT = subgroup_lower_central_series(N, c)
    n_i = {}
    for i in range(2, c + 1):
        n_i[i] = power_exponent(GT[i - 1], NT[i - 1])
    allowed = PrimeSet(frozenset(arith.prime_factors(m)))
    ok = all(x is not None and allowed.is_number(x) for x in [n, *n_i.values()])
    return {"n": n, "n_i": n_i, "pi_m_numbers": ok}


def tensor_epi_check(T: SeriesTable, i) -> CheckReport:
    """Surjectivity of ``gamma_i/gamma_{i+1} (x) G_ab -> gamma_{i+1}/gamma_{i+2}``."""
    if T.depth < i + 1:
        raise ValueError(f"series table needs depth >= {i + 1}")
    P = T.ambient
    src, dst = T.sections[i - 1], T.sections[i]
    gens = _gens(P)
    images = [dst.express(P.commutator(src.lift(a), g)) for a in range(src.k) for g in gens]
    rows = images + dst.relations
    missing = []
    for b in range(dst.k):
        e = [0] * dst.k
        e[b] = 1
        if not rows or not arith.lattice_membership(rows, e)[0]:
            missing.append(b)
    ok = not missing
    verdict = "pass" if ok else "fail"
    summary = (f"surjective: layer {i} (x) G_ab onto layer {i + 1}" if ok
               else f"not surjective: layer {i + 1} generators {missing} missed")
    return CheckReport("tensor_epi", verdict, summary,
                       witnesses={"source": str(T.step_invariants[i - 1]),
                                  "target": str(T.step_invariants[i]),
                                  "image_generators": len(images)})


def derived_subgroup(S):
    """``[S, S]`` of a subgroup, as a subgroup of the same ambient group."""
    P = S.ambient
    return normal_closure(P, [P.commutator(a, b) for a in S.cgs for b in S.cgs], S.cgs)


def residual_nilpotence_status(P, depth):
    """How much of ``intersection gamma_i = 1`` is actually known."""
    if P.info.get("certified_by_construction"):
        return "certified-by-construction"
    c = nilpotency_class(P, depth)
    if c is not None:
        return f"verified (nilpotent of class {c})"
    return f"unverified (gamma_{depth + 1} nontrivial; not decidable by bounded search)"


def exponent_gcd(values):
    return reduce(gcd, values, 0)

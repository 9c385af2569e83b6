"""Subgroups of pc groups via canonical generating sequences.

A subgroup is stored as its canonical generating sequence (cgs): elements
``u_1, ..., u_m`` of strictly increasing depth, positive leading exponents
(dividing the relative order at that depth when it is finite), and every
``u_i`` reduced modulo the leading exponents of the deeper ``u_j``.  The cgs
is unique, so subgroup equality is tuple equality.
"""
from __future__ import annotations

from math import gcd

from . import arith
from .arith import AbelianInvariants
from .pcgroup import GroupHom, PcPresentation, _letters


def depth(u):
    for i, x in enumerate(u):
        if x:
            return i
    return len(u)


def _sift(P, table, u):
    n = P.n
    while True:
        d = depth(u)
        if d == n or d not in table:
            return u
        v = table[d]
        if u[d] % v[d]:
            return u
        u = P.multiply(P.power(v, -(u[d] // v[d])), u)


def _normalize_lead(P, w):
    d = depth(w)
    o = P.orders[d]
    if o:
        l = w[d]
        g = gcd(l, o)
        if g != l:
            k = pow(l // g, -1, o // g)
            w = P.power(w, k)
    elif w[d] < 0:
        w = P.invert(w)
    return w


def _closure_items(P, table, d):
    w = table[d]
    out = [P.commutator(w, v) if e > d else P.commutator(v, w)
           for e, v in table.items() if e != d]
    o = P.orders[d]
    if o and w[d] != o:
        out.append(P.power(w, o // w[d]))
    return out


def _induced_table(P, gens):
    n = P.n
    table = {}
    queue = [P.normalize(g) for g in gens]
    pending_check = True
    while pending_check:
        while queue:
            u = _sift(P, table, queue.pop())
            d = depth(u)
            if d == n:
                continue
            if d in table:
                v = table[d]
                _, s, t = arith.xgcd(u[d], v[d])
                w = P.multiply(P.power(u, s), P.power(v, t))
                queue.extend([u, v])
            else:
                w = u
            w2 = _normalize_lead(P, w)
            if w2 != w:
                queue.append(w)
            table[d] = w2
            queue.extend(_closure_items(P, table, d))
        # final closure pass: every commutator and power must sift to 1
        for d in sorted(table):
            for x in _closure_items(P, table, d):
                if depth(_sift(P, table, x)) != n:
                    queue.append(x)
        pending_check = bool(queue)
    return table


def canonical_generating_sequence(P, gens):
    table = _induced_table(P, gens)
    ds = sorted(table)
    cgs = [table[d] for d in ds]
    for a in range(len(cgs)):
        for b in range(a + 1, len(cgs)):
            d = ds[b]
            q = cgs[a][d] // cgs[b][d]
            if q:
                cgs[a] = P.multiply(cgs[a], P.power(cgs[b], -q))
    return tuple(cgs)


class Subgroup:
    """Subgroup of a pc group, held as its canonical generating sequence."""

    def __init__(self, ambient, gens=(), *, cgs=None):
        self.ambient = ambient
        if cgs is None:
            cgs = canonical_generating_sequence(ambient, [tuple(g) for g in gens])
        self.cgs = tuple(tuple(u) for u in cgs)
        self.depths = tuple(depth(u) for u in self.cgs)
        self.leads = tuple(u[d] for u, d in zip(self.cgs, self.depths))
        self._presentation = None

    @classmethod
    def whole(cls, P):
        return cls(P, cgs=[P.unit(i) for i in range(P.n)])

    @classmethod
    def trivial(cls, P):
        return cls(P, cgs=[])

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.ambient is self.ambient
                and other.cgs == self.cgs)

    def __hash__(self):
        return hash(self.cgs)

    def __repr__(self):
        P = self.ambient
        gens = ", ".join(P.word_str(u) for u in self.cgs)
        return f"<{gens}>"

    def __len__(self):
        return len(self.cgs)

    def __contains__(self, u):
        return self.express(u) is not None

    @property
    def is_trivial(self):
        return not self.cgs

    def relative_orders(self):
        P = self.ambient
        return tuple(P.orders[d] // L if P.orders[d] else 0
                     for d, L in zip(self.depths, self.leads))

    def hirsch_length(self):
        return sum(1 for o in self.relative_orders() if o == 0)

    def order(self):
        """Order of the subgroup, 0 when infinite."""
        out = 1
        for o in self.relative_orders():
            if not o:
                return 0
            out *= o
        return out

    def express(self, u):
        """Exponents ``e`` with ``u = prod(u_i ** e_i)``, or ``None``."""
        P = self.ambient
        u = tuple(u)
        exps = []
        for v, d, L in zip(self.cgs, self.depths, self.leads):
            if depth(u) < d:
                return None
            x = u[d]
            if x % L:
                return None
            q = x // L
            exps.append(q)
            if q:
                u = P.multiply(P.power(v, -q), u)
        if any(u):
            return None
        return tuple(exps)

    def element(self, exps):
        P = self.ambient
        out = P.identity
        for v, x in zip(self.cgs, exps):
            if x:
                out = P.multiply(out, P.power(v, x))
        return out

    def is_subgroup_of(self, other):
        return all(u in other for u in self.cgs)

    def is_normal(self, within=None):
        """Normality in the ambient group (or in the subgroup ``within``)."""
        P = self.ambient
        conj = within.cgs if within is not None else [P.unit(i) for i in range(P.n)]
        return all(P.conjugate(u, g) in self for u in self.cgs for g in conj)

    def index_in(self, other):
        """``|other : self|`` for ``self <= other``; 0 when infinite."""
        P = self.ambient
        mine = dict(zip(self.depths, self.leads))
        out = 1
        for d, L in zip(other.depths, other.leads):
            if d in mine:
                out *= mine[d] // L
            elif P.orders[d]:
                out *= P.orders[d] // L
            else:
                return 0
        return out

    def presentation(self):
        """A pc presentation of the subgroup on its cgs, plus the inclusion."""
        if self._presentation is None:
            P = self.ambient
            m = len(self.cgs)
            names = [P.names[d] if u == P.unit(d) else f"{P.names[d]}_s"
                     for u, d in zip(self.cgs, self.depths)]
            orders = self.relative_orders()
            powers, conj, inv = {}, {}, {}
            for k in range(m):
                if orders[k]:
                    powers[k] = self._coords(P.power(self.cgs[k], orders[k]))
                for l in range(k + 1, m):
                    conj[l, k] = self._coords(P.conjugate(self.cgs[l], self.cgs[k]))
                    if not orders[k]:
                        inv[l, k] = self._coords(P.conjugate(self.cgs[l], P.invert(self.cgs[k])))
            Q = PcPresentation(names, orders, powers, conj, inv or None,
                               name=f"sub({P.name})", step_budget=P.step_budget)
            incl = GroupHom(Q, P, self.cgs)
            incl.verified = True
            self._presentation = (Q, incl)
        return self._presentation

    def _coords(self, u):
        e = self.express(u)
        if e is None:
            raise ValueError("subgroup generating sequence is not closed")
        return e

    def restrict(self, sub):
        """``sub`` (a subgroup of the ambient contained in self) in own coordinates."""
        Q, _ = self.presentation()
        return Subgroup(Q, [self._coords(u) for u in sub.cgs])

    def lift(self, sub):
        """Inverse of :meth:`restrict`: a subgroup of own presentation, in the ambient."""
        _, incl = self.presentation()
        return Subgroup(self.ambient, [incl(u) for u in sub.cgs])


def join(*subgroups):
    P = subgroups[0].ambient
    return Subgroup(P, [u for S in subgroups for u in S.cgs])


def image(f, S):
    return Subgroup(f.codomain, [f(u) for u in S.cgs])


def normal_closure(P, gens, conjugators=None):
    """Smallest subgroup containing ``gens`` normalised by ``conjugators``.

    Closure under conjugation by ``g`` alone suffices: in a polycyclic group
    ``K^g <= K`` forces ``K^g = K``.
    """
    if conjugators is None:
        conjugators = [P.unit(i) for i in range(P.n)]
    S = Subgroup(P, gens)
    while True:
        new = [x for x in (P.conjugate(u, g) for u in S.cgs for g in conjugators)
               if x not in S]
        if not new:
            return S
        S = Subgroup(P, list(S.cgs) + new)


def commutator_subgroup(A, B):
    """``[A, B]`` for normal subgroups ``A``, ``B``."""
    P = A.ambient
    return normal_closure(P, [P.commutator(a, b) for a in A.cgs for b in B.cgs])


def abelian_kernel(S, images, relations):
    """Kernel of the homomorphism ``S -> Z^k / <relations>`` with ``u_i -> images[i]``."""
    P = S.ambient
    if not any(any(r) for r in images):
        return S
    rows = [list(r) for r in images] + [list(r) for r in relations]
    m = len(S.cgs)
    basis = arith.left_kernel(rows)
    gens = [S.element(b[:m]) for b in basis]
    gens += [P.commutator(S.cgs[i], S.cgs[j]) for i in range(m) for j in range(i + 1, m)]
    return normal_closure(P, gens, S.cgs)


def kernel(f):
    """Kernel of a homomorphism between pc groups.

    Walks down the codomain's pc series: on the current subgroup the map into
    each cyclic factor ``Q_i / Q_{i+1}`` is a homomorphism, whose kernel is
    found by integer linear algebra.
    """
    G, Q = f.domain, f.codomain
    S = Subgroup.whole(G)
    for i in range(Q.n):
        imgs = [[f(u)[i]] for u in S.cgs]
        rels = [[Q.orders[i]]] if Q.orders[i] else []
        S = abelian_kernel(S, imgs, rels)
    return S


class QuotientMap(GroupHom):
    """Projection of a pc group onto its quotient by a normal subgroup."""

    def __init__(self, P, K, check=True):
        if check and not K.is_normal():
            raise ValueError("subgroup is not normal")
        self.source = P
        self.kernel = K
        lead = dict(zip(K.depths, K.leads))
        self.kept = [i for i in range(P.n) if lead.get(i, 0) != 1]
        orders = [lead.get(i, P.orders[i]) for i in self.kept]
        names = [P.names[i] for i in self.kept]
        pos = {p: k for k, p in enumerate(self.kept)}
        self._pos = pos
        m = len(self.kept)
        powers, conj, inv = {}, {}, {}
        for a, p in enumerate(self.kept):
            if orders[a]:
                powers[a] = self._reduce(P.power(P.unit(p), orders[a]))
            for b in range(a + 1, m):
                q = self.kept[b]
                conj[b, a] = self._reduce(P.conjugate(P.unit(q), P.unit(p)))
                if not orders[a]:
                    inv[b, a] = self._reduce(P.conjugate(P.unit(q), P.invert(P.unit(p))))
        Q = PcPresentation(names, orders, powers, conj, inv or None,
                           name=f"{P.name}/K" if P.name else "", step_budget=P.step_budget)
        super().__init__(P, Q, [self._reduce(P.unit(i)) for i in range(P.n)])
        self.verified = True

    def representative(self, u):
        P = self.source
        u = tuple(u)
        for v, d, L in zip(self.kernel.cgs, self.kernel.depths, self.kernel.leads):
            q = u[d] // L
            if q:
                u = P.multiply(u, P.power(v, -q))
        return u

    def _reduce(self, u):
        r = self.representative(u)
        return tuple(r[p] for p in self.kept)

    def __call__(self, u):
        return self._reduce(u)

    def lift(self, q):
        return self.source.collect([(self.kept[a], x) for a, x in enumerate(q) if x])

    def preimage(self, S):
        """Full preimage of a subgroup ``S`` of the quotient."""
        return Subgroup(self.source, [self.lift(u) for u in S.cgs] + list(self.kernel.cgs))


def quotient_presentation(P, K):
    """Presentation of ``P/K`` and the projection homomorphism."""
    pi = QuotientMap(P, K)
    return pi.codomain, pi


def preimage(f, K):
    """``f^-1(K)`` for a normal subgroup ``K`` of the codomain."""
    pi = QuotientMap(f.codomain, K)
    return kernel(f.compose(pi))


class AbelianSection:
    """The abelian factor ``A/B`` as ``Z^k / <relations>``."""

    def __init__(self, A, B):
        self.A, self.B = A, B
        PA, _ = A.presentation()
        self.pi = QuotientMap(PA, A.restrict(B))
        Q = self.Q = self.pi.codomain
        for (j, i), w in Q.conjugates.items():
            if w != Q.unit(j):
                raise ValueError("section is not abelian")
        self.k = Q.n
        self.relations = []
        for i, o in enumerate(Q.orders):
            if o:
                row = [-x for x in Q.powers[i]]
                row[i] += o
                self.relations.append(row)

    def express(self, u):
        e = self.A.express(u)
        if e is None:
            raise ValueError("element is not in the section's top group")
        return list(self.pi(e))

    def element(self, vec):
        """An element of ``A`` mapping to ``vec``."""
        return self.A.element(self.pi.lift(vec))

    def lift(self, i):
        v = [0] * self.k
        v[i] = 1
        return self.element(v)

    def invariants(self) -> AbelianInvariants:
        return arith.abelian_invariants(self.relations, self.k)

    def contains_vector(self, vec):
        return arith.lattice_membership(self.relations, vec)[0] if self.relations else not any(vec)


def word_letters(v):
    return _letters(v)

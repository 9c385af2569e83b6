"""Builders for concrete pc groups: free abelian and free class-2 nilpotent
groups, cyclotomic companion actions, semidirect products by commuting
automorphisms, sub-semidirect inclusions and direct factors.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd

from . import arith
from .pcgroup import CheckReport, GroupHom, PcPresentation, PresentationError, verify_hom
from .subgroup import AbelianSection, Subgroup
from .nilpotent import (derived_subgroup, lower_terms_until_trivial, next_lower_term, nilpotency_class,
                        power_exponent)

DEFAULT_SEARCH_BOUND = 64


class ConstructionError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _search_bound():
    return int(os.environ.get("PARANIL_EXPONENT_SEARCH", DEFAULT_SEARCH_BOUND))


# -- matrices -----------------------------------------------------------------

def companion_cyclotomic(p):
    """Companion matrix of ``1 + t + ... + t^(p-1)``, images as columns."""
    if not arith.is_prime(p):
        raise ValueError(f"{p} is not prime")
    d = p - 1
    M = [[0] * d for _ in range(d)]
    for i in range(d - 1):
        M[i + 1][i] = 1
    for i in range(d):
        M[i][d - 1] = -1
    return M


def matrix_power(M, k):
    out = arith.identity(len(M))
    for _ in range(k):
        out = arith.matmul(out, M)
    return out


# -- groups -------------------------------------------------------------------

def free_abelian(r, names=None, name=None):
    names = names or [f"x{i + 1}" for i in range(r)]
    return PcPresentation(names, [0] * r, name=name or f"Z^{r}")


def trivial_group():
    return PcPresentation([], [], name="1")


def free_nilpotent_class2(r, names=None, name=None):
    """Free nilpotent group of class 2 on ``r`` generators.

    Generators ``g1..gr`` then central ``c_ij`` (i < j) with
    ``gj^gi = gj c_ij``, so that ``c_ij = [gj, gi]``.
    """
    if r < 1:
        raise ValueError("rank must be at least 1")
    base = list(names) if names else [f"g{i + 1}" for i in range(r)]
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    if names and r == 2:
        comm = ["c"]
    else:
        comm = [f"c{i + 1}{j + 1}" if r < 10 else f"c{i + 1}_{j + 1}" for i, j in pairs]
    n = r + len(pairs)
    conj = {}
    for k, (i, j) in enumerate(pairs):
        w = [0] * n
        w[j] = 1
        w[r + k] = 1
        conj[j, i] = tuple(w)
    return PcPresentation(base + comm, [0] * n, None, conj,
                          name=name or f"F{r}(class 2)", info={"rank": r, "pairs": pairs})


def heisenberg():
    """The integral Heisenberg group on ``a, b, c`` with ``b^a = b c``."""
    return free_nilpotent_class2(2, names=["a", "b"], name="Heisenberg")


# -- automorphisms ------------------------------------------------------------

@dataclass
class AutomorphismAction:
    base: PcPresentation
    images: list
    abelianized: list = field(default_factory=list)
    verified: bool = False

    def __call__(self, u):
        return _apply(self.base, self.images, u)

    def compose(self, other):
        """``self`` after ``other``."""
        return make_action(self.base, [self(v) for v in other.images])

    def power(self, k):
        out = identity_action(self.base)
        for _ in range(k):
            out = self.compose(out)
        return out

    def __eq__(self, other):
        return (isinstance(other, AutomorphismAction) and other.base is self.base
                and [tuple(v) for v in other.images] == [tuple(v) for v in self.images])

    def as_hom(self):
        return GroupHom(self.base, self.base, self.images, name="alpha")


def _apply(P, images, u):
    out = P.identity
    for i, e in enumerate(u):
        if e:
            out = P.multiply(out, P.power(images[i], e))
    return out


def _abelianized_matrix(P, images):
    W = Subgroup.whole(P)
    sec = AbelianSection(W, next_lower_term(P, W))
    cols = [sec.express(_apply(P, images, sec.lift(b))) for b in range(sec.k)]
    return [[cols[c][r] for c in range(sec.k)] for r in range(sec.k)]


def make_action(P, images, check=True):
    images = [P.normalize(v) for v in images]
    act = AutomorphismAction(P, images, _abelianized_matrix(P, images))
    if check:
        rep = verify_hom(act.as_hom())
        if not rep.passed:
            raise ConstructionError(f"images do not define an endomorphism: {rep.summary}")
        if Subgroup(P, images) != Subgroup.whole(P):
            raise ConstructionError("images do not generate the group")
        act.verified = True
    return act


def identity_action(P):
    return make_action(P, [P.unit(i) for i in range(P.n)], check=False)


def lift_automorphism_class2(N, M):
    """Lift an integer matrix on ``N_ab`` to an automorphism of ``N``.

    Generator ``gi`` maps to ``g1^M[0][i] ... gr^M[r-1][i]``; the images of the
    commutator generators follow by collection.
    """
    r = N.info.get("rank")
    if r is None:
        raise ValueError("base group must come from free_nilpotent_class2")
    if len(M) != r or any(len(row) != r for row in M):
        raise ValueError(f"matrix must be {r}x{r}")
    if abs(arith.determinant(M)) != 1:
        raise ConstructionError(f"matrix is not unimodular (det {arith.determinant(M)})")
    images = []
    for i in range(r):
        images.append(N.collect([(k, M[k][i]) for k in range(r) if M[k][i]]))
    for i, j in N.info["pairs"]:
        images.append(N.commutator(images[j], images[i]))
    return make_action(N, images)


def free_abelian_action(N, M):
    """Action of an integer matrix (images as columns) on ``Z^r``."""
    r = N.n
    if abs(arith.determinant(M)) != 1:
        raise ConstructionError(f"matrix is not unimodular (det {arith.determinant(M)})")
    return make_action(N, [tuple(M[k][i] for k in range(r)) for i in range(r)])


# -- semidirect products ------------------------------------------------------

def _product_condition(N, act, bound, Nd):
    # smallest a with x alpha(x) ... alpha^(a-1)(x) in N' for every generator x
    cur = [N.unit(i) for i in range(N.n)]
    acc = [N.unit(i) for i in range(N.n)]
    for a in range(1, bound + 1):
        if all(u in Nd for u in acc):
            return a
        cur = [act(u) for u in cur]
        acc = [N.multiply(u, v) for u, v in zip(acc, cur)]
    return None


def _subgroup_product_condition(H, M, bound):
    # same search as above, for the fiber subgroup M with t = first generator
    D = derived_subgroup(M)
    t = H.unit(0)
    cur, acc = list(M.cgs), list(M.cgs)
    for a in range(1, bound + 1):
        if all(u in D for u in acc):
            return a
        cur = [H.conjugate(u, t) for u in cur]
        acc = [H.multiply(u, v) for u, v in zip(acc, cur)]
    return None


def _is_prime_power(b):
    return b > 1 and len(arith.prime_factors(b)) == 1


def semidirect_by_automorphisms(N, actions, t_names=None, name=None, bound=None):
    """``N x| Z^r`` with ``x^{t_k} = alpha_k(x)``; the ``t_k`` come first."""
    r = len(actions)
    for act in actions:
        if act.base is not N:
            raise ValueError("action is not defined on the given base group")
    for k in range(r):
        for l in range(k + 1, r):
            if actions[k].compose(actions[l]) != actions[l].compose(actions[k]):
                raise ConstructionError(f"actions {k + 1} and {l + 1} do not commute")
    t_names = t_names or (["t"] if r == 1 else [f"t{k + 1}" for k in range(r)])
    clash = set(t_names) & set(N.names)
    if clash:
        raise PresentationError(f"generator names clash: {sorted(clash)}")
    n = r + N.n

    def shift(v):
        return (0,) * r + tuple(v)

    orders = [0] * r + list(N.orders)
    powers = {r + i: shift(w) for i, w in N.powers.items()}
    conj = {}
    for (j, i), w in N.conjugates.items():
        conj[r + j, r + i] = shift(w)
    inv = {(r + j, r + i): shift(w) for (j, i), w in N.inverse_conjugates.items()}
    for k, act in enumerate(actions):
        for j in range(N.n):
            conj[r + j, k] = shift(act.images[j])
    bound = _search_bound() if bound is None else bound
    W = Subgroup.whole(N)
    Nd = next_lower_term(N, W)
    a_i = [_product_condition(N, act, bound, Nd) for act in actions]
    found = bool(a_i) and all(x is not None for x in a_i)
    info = {"rank": r, "fiber": list(range(r, n)), "search_bound": bound,
            "a_i": a_i, "product_condition": found}
    if found:
        a = 0
        for x in a_i:
            a = gcd(a, x)
        info["a"] = a
        info["b"] = arith.lcm(*a_i)
        nil = nilpotency_class(N) is not None and all(o == 0 for o in N.orders)
        info["certified_by_construction"] = nil and _is_prime_power(info["b"])
    else:
        info["certified_by_construction"] = False
    H = PcPresentation(t_names + list(N.names), orders, powers, conj, inv or None,
                       name=name or f"{N.name} x| Z^{r}", info=info,
                       step_budget=N.step_budget)
    return H


def fiber(H):
    return Subgroup(H, [H.unit(i) for i in H.info["fiber"]])


def companion_semidirect(p, r=1):
    """``Z^(p-1) x| Z`` with the cyclotomic companion action (``r = 1``)."""
    N = free_abelian(p - 1)
    act = free_abelian_action(N, companion_cyclotomic(p))
    return semidirect_by_automorphisms(N, [act], name=f"Z^{p - 1} x| Z (p={p})")


def sub_semidirect_inclusion(H, M, names=None):
    """``G = M x| <t>`` inside ``H`` for an action-invariant ``M`` of the fiber."""
    if H.info.get("rank") != 1:
        raise ValueError("expected a semidirect product with a single acting generator")
    N = fiber(H)
    if not M.is_subgroup_of(N):
        raise ConstructionError("subgroup is not contained in the fiber")
    t = H.unit(0)
    tinv = H.invert(t)
    for u in M.cgs:
        for g, label in ((t, "t"), (tinv, "t^-1")):
            v = H.conjugate(u, g)
            if v not in M:
                raise ConstructionError(
                    f"not invariant: ({H.word_str(u)})^{label} = {H.word_str(v)} is not in M",
                    witness=H.word_str(u))
    if not M.is_normal():
        raise ConstructionError("subgroup is not normal in the ambient group")
    S = Subgroup(H, [t] + list(M.cgs))
    Q, incl = S.presentation()
    gen_names = names or [H.names[0]] + [f"m{i}" for i in range(1, Q.n)]
    info = {"rank": 1, "fiber": list(range(1, Q.n)), "index_exponent": power_exponent(N, M)}
    a = _subgroup_product_condition(H, M, _search_bound())
    info["product_condition"] = a is not None
    if a is not None:
        info.update({"a_i": [a], "a": a, "b": a})
    info["certified_by_construction"] = (a is not None and _is_prime_power(a)
                                         and bool(H.info.get("certified_by_construction")))
    G = Q.renamed(gen_names, name=f"M x| <{H.names[0]}>", info=info)
    f = GroupHom(G, H, incl.images, name="incl")
    rep = verify_hom(f)
    if not rep.passed:
        raise ConstructionError(f"inclusion failed to verify: {rep.summary}")
    f.verified = True
    return G, f


def direct_with_cyclic(G, p, name="z"):
    """``C_p x G`` with the cyclic generator first."""
    if p < 2:
        raise ValueError("cyclic order must be at least 2")
    while name in G.names:
        name += "_"

    def shift(v):
        return (0,) + tuple(v)

    powers = {i + 1: shift(w) for i, w in G.powers.items()}
    conj = {(j + 1, i + 1): shift(w) for (j, i), w in G.conjugates.items()}
    inv = {(j + 1, i + 1): shift(w) for (j, i), w in G.inverse_conjugates.items()}
    return PcPresentation([name] + list(G.names), [p] + list(G.orders), powers, conj,
                          inv or None, name=f"C{p} x {G.name}" if G.name else f"C{p}",
                          step_budget=G.step_budget)


def central_extension_check(G, act, t_name="t"):
    """``G x| <t>`` for an action trivial on ``G_ab`` keeps the class of ``G``."""
    k = len(act.abelianized)
    if act.abelianized != arith.identity(k):
        raise ConstructionError("action is not the identity on the abelianization")
    c = len(lower_terms_until_trivial(G)) - 1
    E = semidirect_by_automorphisms(G, [act], t_names=[t_name], name=f"{G.name} x| <{t_name}>")
    K = Subgroup.whole(E)
    for _ in range(max(c, 1)):
        K = next_lower_term(E, K)
    ok = K.is_trivial
    ec = nilpotency_class(E)
    verdict = "pass" if ok else "fail"
    summary = (f"class preserved: gamma_{max(c, 1) + 1} of the extension is trivial"
               if ok else f"class grows: gamma_{max(c, 1) + 1} of the extension is {K!r}")
    return CheckReport("central_extension", verdict, summary,
                       witnesses={"class_G": c, "class_extension": ec,
                                  "consistent": E.check_consistency().passed})

"""Checkers for lower central quotients of pc group homomorphisms.

Every checker returns a :class:`CheckReport` whose witnesses hold the
exponents and invariants needed to replay the verdict.  Statements about all
``i`` are only checked up to a depth; the report says how far, and whether
the lower central series has stabilized in Hirsch length by then.
"""
from __future__ import annotations

from fractions import Fraction

from . import arith
from .pcgroup import CheckReport, GroupHom, verify_hom
from .subgroup import (AbelianSection, QuotientMap, Subgroup, image, join,
                       preimage)
from .nilpotent import (NotNilpotentError, PrimeSet, derived_subgroup, isolator,
                        lower_central_series, nilpotency_class, power_exponent,
                        residual_nilpotence_status, subgroup_upper_central_series, tau)

DEFAULT_DEPTH = 8


class GenusError(ValueError):
    """A checker's precondition does not hold."""


def _primes(x):
    if isinstance(x, PrimeSet):
        return x
    return PrimeSet(frozenset(x))


def _require_verified(f):
    if not getattr(f, "verified", False):
        rep = verify_hom(f)
        if not rep.passed:
            raise GenusError(f"map is not a homomorphism: {rep.summary}")


def _classify(f, Gi, Hi):
    G, H = f.domain, f.codomain
    epi = join(image(f, Subgroup.whole(G)), Hi) == Subgroup.whole(H)
    mono = preimage(f, Hi) == Gi
    return epi, mono


def induced_quotient_map(f, i, tables=None):
    """The map ``G/gamma_i(G) -> H/gamma_i(H)`` induced by ``f``.

    Returns ``(data, kind)`` where ``kind`` is one of ``iso``, ``epi``,
    ``mono`` or ``neither``.
    """
    _require_verified(f)
    if i < 1:
        raise ValueError("quotient index must be at least 1")
    if tables is None:
        tables = (lower_central_series(f.domain, i - 1), lower_central_series(f.codomain, i - 1))
    TG, TH = tables
    if TG.depth < i - 1 or TH.depth < i - 1:
        raise GenusError(f"series depth {min(TG.depth, TH.depth)} is too small for i = {i}")
    Gi, Hi = TG.term(i), TH.term(i)
    epi, mono = _classify(f, Gi, Hi)
    piG, piH = QuotientMap(f.domain, Gi, check=False), QuotientMap(f.codomain, Hi, check=False)
    images = [piH(f(piG.lift(piG.codomain.unit(a)))) for a in range(piG.codomain.n)]
    phi = GroupHom(piG.codomain, piH.codomain, images, name=f"phi_{i}")
    phi.verified = True
    kind = "iso" if epi and mono else "epi" if epi else "mono" if mono else "neither"
    return {"map": phi, "epi": epi, "mono": mono, "G_i": Gi, "H_i": Hi}, kind


def _fmt_exponents(n_i):
    vals = set(n_i.values())
    if len(vals) == 1:
        return f"n_i = {vals.pop()}"
    return "n_i = " + ", ".join(f"n_{i}={n_i[i]}" for i in sorted(n_i))


def _stab_text(T):
    if T.stabilized:
        return f"stabilized at k={T.stabilization_index}"
    return "not stabilized"


def _layer_exponents(f, TG, TH, upto):
    out = {}
    for i in range(2, upto + 1):
        try:
            out[i] = power_exponent(TH.term(i), image(f, TG.term(i)))
        except ValueError:
            out[i] = None
    return out


def check_tau_monomorphism(f, tau_set, depth=DEFAULT_DEPTH):
    """Minimal ``n_i`` with ``gamma_i(H)^n_i <= f(gamma_i(G))`` for ``2 <= i <= depth``."""
    _require_verified(f)
    tau_set = _primes(tau_set)
    G, H = f.domain, f.codomain
    TG, TH = lower_central_series(G, depth), lower_central_series(H, depth)
    _, kind = induced_quotient_map(f, 2, (TG, TH))
    if kind != "iso":
        raise GenusError(f"abelianization map is not an isomorphism ({kind})")
    n_i = _layer_exponents(f, TG, TH, depth)
    wit = {"n_i": n_i, "tau": str(tau_set), "stabilization": _stab_text(TH),
           "tau_H": str(tau(H))}
    for i in range(2, depth + 1):
        n = n_i[i]
        if n is None:
            return CheckReport("tau_monomorphism", "fail",
                               f"fail at i = {i} (no exponent: index infinite or not normal)",
                               depth, wit)
        bad = [p for p in arith.prime_factors(n) if p in tau_set]
        if bad:
            wit["failing_primes"] = bad
            return CheckReport("tau_monomorphism", "fail",
                               f"fail at i = {i} (n_{i} = {n} is not a tau'-number)", depth, wit)
    return CheckReport("tau_monomorphism", "pass",
                       f"pass (depth {depth}, {_stab_text(TH)}), {_fmt_exponents(n_i)}",
                       depth, wit)


def _derived_class(P):
    D = derived_subgroup(Subgroup.whole(P))
    Q, _ = D.presentation()
    return nilpotency_class(Q)


def check_para(f, depth=DEFAULT_DEPTH):
    """``G/gamma_i(G) -> H/gamma_i(H)`` is an isomorphism for ``2 <= i <= depth + 1``.

    So the first ``depth`` lower central layers are compared.
    """
    _require_verified(f)
    G, H = f.domain, f.codomain
    TG, TH = lower_central_series(G, depth), lower_central_series(H, depth)
    wit = {"stabilization": _stab_text(TH)}
    if G.hirsch_length() != image(f, Subgroup.whole(G)).hirsch_length():
        wit["h_G"] = G.hirsch_length()
        return CheckReport("para", "fail", "fail: map is not injective (Hirsch length drops)",
                           depth, wit)
    for i in range(2, depth + 2):
        _, kind = induced_quotient_map(f, i, (TG, TH))
        if kind != "iso":
            return CheckReport("para", "fail", f"fail at i = {i} ({kind})", depth, wit)
    layers_G = [str(x) for x in TG.step_invariants]
    layers_H = [str(x) for x in TH.step_invariants]
    if layers_G != layers_H:
        return CheckReport("para", "fail", "fail: layer invariants differ", depth,
                           {**wit, "layers_G": layers_G, "layers_H": layers_H})
    n_i = _layer_exponents(f, TG, TH, depth)
    tG, tH = tau(G), tau(H)
    wit.update({"layers": layers_H, "n_i": n_i, "tau_G": str(tG), "tau_H": str(tH),
                "residual_nilpotence_G": residual_nilpotence_status(G, depth),
                "residual_nilpotence_H": residual_nilpotence_status(H, depth)})
    try:
        cG, cH = _derived_class(G), _derived_class(H)
        wit["derived_class"] = {"G": cG, "H": cH}
    except NotNilpotentError:
        wit["derived_class"] = "not nilpotent within bound"
    known = [x for x in n_i.values() if x is not None]
    tail = f", {_fmt_exponents(n_i)}" if known and len(known) == len(n_i) else ""
    return CheckReport("para", "pass", f"pass (depth {depth}, {_stab_text(TH)}){tail}",
                       depth, wit)


def check_cor23_fastpath(f):
    """Single-layer para certificate when ``H'`` has class at most 2."""
    _require_verified(f)
    G, H = f.domain, f.codomain
    TG, TH = lower_central_series(G, 1), lower_central_series(H, 1)
    D = TH.term(2)
    c = nilpotency_class(D.presentation()[0])
    if c is None or c > 2:
        raise GenusError("derived subgroup of the codomain has class > 2")
    _, kind = induced_quotient_map(f, 2, (TG, TH))
    if kind != "iso":
        return CheckReport("cor23", "fail", f"fail (abelianization map is {kind}, not iso)", 1, {})
    tG = tau(G)
    n = power_exponent(D, image(f, TG.term(2)))
    wit = {"n": n, "tau_G": str(tG), "derived_class_H": c}
    if n is None:
        return CheckReport("cor23", "fail", "fail (gamma_2 index infinite)", 2, wit)
    if not tG.complement().is_number(n):
        return CheckReport("cor23", "fail", f"fail (n = {n} is not a tau'-number)", 2, wit)
    if c <= 1:
        wit["extrapolation"] = f"n_i = {n} for all i >= 2"
    else:
        a = 2 if n % 2 == 0 else 1
        wit["extrapolation"] = f"n_(i+1) = a^3 m^4 with a = {a}, m = n_i; n_3 <= {a ** 3 * n ** 4}"
    return CheckReport("cor23", "pass", f"pass with n = {n}", 2, wit)


def _second_derived(P):
    D = derived_subgroup(Subgroup.whole(P))
    return D, derived_subgroup(D)


def thm34_hirsch_check(G, H, f, mode="i", depth=DEFAULT_DEPTH):
    """Hirsch lengths of ``G``, ``H`` and of their metabelian quotients."""
    _require_verified(f)
    if f.domain is not G or f.codomain is not H:
        raise ValueError("map does not go from G to H")
    if mode not in ("i", "ii"):
        raise ValueError("mode must be 'i' or 'ii'")
    wit = {}
    for label, P in (("G", G), ("H", H)):
        D1, D2 = _second_derived(P)
        wit[f"h_{label}"] = P.hirsch_length()
        wit[f"h_{label}/{label}''"] = P.hirsch_length() - D2.hirsch_length()
        wit[f"{label}''_trivial"] = D2.is_trivial
        if mode == "i":
            if D2.is_trivial:
                wit[f"hyp_{label}"] = residual_nilpotence_status(P, depth)
            else:
                Q = QuotientMap(P, D2, check=False).codomain
                wit[f"hyp_{label}"] = residual_nilpotence_status(Q, depth)
        else:
            Q, _ = D1.presentation()
            c = nilpotency_class(Q)
            if c is None:
                raise GenusError(f"derived subgroup of {label} is not nilpotent within bound")
            Z = (subgroup_upper_central_series(D1, c - 1)[-1] if c > 1
                 else Subgroup.trivial(P))
            finite = Z.hirsch_length() == D2.hirsch_length()
            wit[f"hyp_{label}"] = "finite index" if finite else "infinite index"
    hG, hH = wit["h_G"], wit["h_H"]
    if mode == "ii" and "infinite index" in (wit["hyp_G"], wit["hyp_H"]):
        return CheckReport("thm34", "indeterminate",
                           f"indeterminate: mode (ii) hypothesis fails; h(G) = {hG}, h(H) = {hH}",
                           depth, wit)
    if hG == hH:
        return CheckReport("thm34", "pass", f"pass: h(G) = h(H) = {hG}", depth, wit)
    return CheckReport("thm34", "fail", f"fail: h(G) = {hG}, h(H) = {hH}", depth, wit)


def prop26_pair(f, k, primes, j, depth=DEFAULT_DEPTH):
    """Quotients ``R = G/Z_j(M)``, ``S = H/Z_j(N)`` and the induced map between them."""
    _require_verified(f)
    primes = _primes(primes)
    G, H = f.domain, f.codomain
    TG, TH = lower_central_series(G, k - 1), lower_central_series(H, k - 1)
    M = isolator(G, TG.term(k), primes)
    N = isolator(H, TH.term(k), primes)
    for label, S in (("M", M), ("N", N)):
        if nilpotency_class(S.presentation()[0]) is None:
            raise GenusError(f"{label} is not nilpotent within the class bound")
    ZM = subgroup_upper_central_series(M, j)[-1]
    ZN = subgroup_upper_central_series(N, j)[-1]
    pre_ok = preimage(f, ZN) == ZM
    piR = QuotientMap(G, ZM, check=False)
    piS = QuotientMap(H, ZN, check=False)
    R, S = piR.codomain, piS.codomain
    mu = GroupHom(R, S, [piS(f(piR.lift(R.unit(a)))) for a in range(R.n)], name="mu")
    rep = verify_hom(mu)
    if not rep.passed:
        raise GenusError(f"induced map is not a homomorphism: {rep.summary}")
    para = check_para(mu, depth)
    para.witnesses.update({"preimage_identity": pre_ok, "h_M": M.hirsch_length(),
                           "h_N": N.hirsch_length(), "h_R": R.hirsch_length(),
                           "h_S": S.hirsch_length(), "tau_R": str(tau(R))})
    if not pre_ok:
        para.verdict = "fail"
        para.summary = "fail: preimage of Z_j(N) differs from Z_j(M)"
    return R, S, mu, para


# -- annihilators -------------------------------------------------------------

def charpoly(M):
    """Characteristic polynomial of a square integer matrix, low degree first."""
    n = len(M)
    if n == 0:
        return [1]
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I
        for i in range(n):
            Mk[i][i] += coeffs[n - k + 1]
        AM = [[sum(A[i][l] * Mk[l][jj] for l in range(n)) for jj in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(AM[i][i] for i in range(n)) / k
        Mk = AM
    out = [int(c) for c in coeffs]
    if any(Fraction(o) != c for o, c in zip(out, coeffs)):
        raise ArithmeticError("characteristic polynomial is not integral")
    return out


def poly_str(c, var="t"):
    terms = []
    for d in range(len(c) - 1, -1, -1):
        x = c[d]
        if not x:
            continue
        mono = "" if d == 0 else var if d == 1 else f"{var}^{d}"
        mag = abs(x)
        body = (str(mag) if (mag != 1 or not mono) else "") + mono
        if not terms:
            terms.append(("-" if x < 0 else "") + body)
        else:
            terms.append(("- " if x < 0 else "+ ") + body)
    return " ".join(terms) if terms else "0"


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_action(P, a, x, poly):
    """``a^{poly(x)}`` in multiplicative notation inside an abelian normal subgroup."""
    out = P.identity
    cur = a
    for d, c in enumerate(poly):
        if d:
            cur = P.conjugate(cur, x)
        if c:
            out = P.multiply(out, P.power(cur, c))
    return out


def _free_action(sec, P, g):
    # action of conjugation by g on A modulo its torsion, rows are images
    rels = [r for r in sec.relations if any(r)]
    V = arith.smith_normal_form(rels)[2] if rels else arith.identity(sec.k)
    pairs = arith.snf_generators(rels, sec.k)
    d = arith.diagonal(arith.smith_normal_form(rels)[0]) if rels else []
    d = d + [0] * (sec.k - len(d))
    free_pos = [i for i in range(sec.k) if d[i] == 0]
    rows = []
    for o, vec in pairs:
        if o:
            continue
        img = sec.express(P.conjugate(sec.element(vec), g))
        coords = [sum(img[r] * V[r][c] for r in range(sec.k)) for c in range(sec.k)]
        rows.append([coords[c] for c in free_pos])
    return rows


def _torsion_period(sec, P, x, bound=10 ** 4):
    tors = [(o, v) for o, v in arith.snf_generators(sec.relations, sec.k) if o]
    if not tors:
        return 0
    for d in range(1, bound + 1):
        xd = P.power(x, d)
        if all(sec.contains_vector([p - q for p, q in zip(sec.express(P.conjugate(sec.element(v), xd)), v)])
               for _, v in tors):
            return d
    raise GenusError("action on the torsion of A has no small period")


def annihilator_polynomials(G, A, x):
    """Monic polynomials ``alpha``, ``beta`` with ``A alpha(t) = A beta(t^-1) = 0``.

    ``t`` is conjugation by ``x``.  Also reports how many conjugates of each
    generator of ``A`` generate its normal closure under ``<x>``.
    """
    xi = G.invert(x)
    for u in A.cgs:
        for g in (x, xi):
            if G.conjugate(u, g) not in A:
                raise GenusError(f"conjugation by the element does not stabilize A "
                                 f"({G.word_str(u)} leaves A)")
    for u in A.cgs:
        for v in A.cgs:
            if G.commutator(u, v) != G.identity:
                raise GenusError("A is not abelian")
    sec = AbelianSection(A, Subgroup.trivial(G))
    alpha = charpoly(_free_action(sec, G, x))
    beta = charpoly(_free_action(sec, G, xi))
    d = _torsion_period(sec, G, x)
    if d:
        cyc = [-1] + [0] * (d - 1) + [1]
        alpha, beta = poly_mul(alpha, cyc), poly_mul(beta, cyc)
    m, n = len(alpha) - 1, len(beta) - 1
    killed_a = all(_poly_action(G, a, x, alpha) == G.identity for a in A.cgs)
    killed_b = all(_poly_action(G, a, xi, beta) == G.identity for a in A.cgs)
    closures = []
    for a in A.cgs:
        conjs = [G.conjugate(a, G.power(x, e)) for e in range(-(n - 1), m)]
        S = Subgroup(G, conjs)
        closed = all(G.conjugate(u, g) in S for u in S.cgs for g in (x, xi))
        closures.append({"generator": G.word_str(a), "conjugates": len(conjs),
                         "closed": closed, "subgroup": repr(S), "equals_A": S == A})
    ok = killed_a and killed_b and all(c["closed"] for c in closures)
    wit = {"alpha": poly_str(alpha), "beta": poly_str(beta), "m": m, "n": n,
           "alpha_kills_A": killed_a, "beta_kills_A": killed_b,
           "closure": [f"{c['generator']}: {c['conjugates']} conjugates, "
                       f"closed={c['closed']}, equals_A={c['equals_A']}" for c in closures]}
    rep = CheckReport("annihilator", "pass" if ok else "fail",
                      f"alpha(t) = {poly_str(alpha)}, beta(t) = {poly_str(beta)}", 0, wit)
    return alpha, beta, rep

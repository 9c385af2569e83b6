"""Polycyclic presentations and collection from the left.

Elements are exponent vectors (tuples of ints) relative to a pc sequence
``g_1, ..., g_n``.  Relations are stored as exponent vectors too:

* ``powers[i]``           -- ``g_i ** o_i`` for finite relative order ``o_i``
* ``conjugates[j, i]``    -- ``g_j ** g_i = g_i^-1 g_j g_i`` for ``i < j``
* ``inverse_conjugates[j, i]`` -- ``g_j ** (g_i^-1)`` for infinite ``o_i``

Missing conjugation relations default to "commute"; missing power relations
default to the identity.  Inverse conjugates for infinite generators are
derived automatically when the action of ``g_i`` on the later generators can
be inverted layer by layer.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd

from . import arith

DEFAULT_STEP_BUDGET = 10 ** 7


class CollectionError(RuntimeError):
    """Raised when collection exceeds its rewrite-step budget."""


class PresentationError(ValueError):
    """Raised for syntactically invalid presentation data."""


@dataclass
class CheckReport:
    """Verdict of a check plus the data needed to replay it."""

    name: str
    verdict: str
    summary: str = ""
    depth_checked: int = 0
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict in ("pass", "consistent", "verified")

    def __bool__(self):
        return self.passed

    def render(self):
        lines = [self.summary or self.verdict]
        lines.append(f"check: {self.name}")
        lines.append(f"verdict: {self.verdict}")
        if self.depth_checked:
            lines.append(f"depth_checked: {self.depth_checked}")
        for key in sorted(self.witnesses):
            lines.append(f"{key}: {_fmt(self.witnesses[key])}")
        return "\n".join(lines) + "\n"


def _fmt(value):
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(value[k])}" for k in sorted(value, key=str)) + "}"
    if isinstance(value, (set, frozenset)):
        return "{" + ", ".join(str(x) for x in sorted(value)) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in value) + "]"
    return str(value)


def _letters(v):
    return [(i, x) for i, x in enumerate(v) if x]


class PcPresentation:
    """An immutable polycyclic presentation with a collector attached."""

    def __init__(self, names, orders, powers=None, conjugates=None,
                 inverse_conjugates=None, *, name="", info=None,
                 step_budget=None):
        self.names = tuple(names)
        n = self.n = len(self.names)
        if len(set(self.names)) != n:
            raise PresentationError("duplicate generator names")
        self.orders = tuple(int(o) for o in orders)
        if len(self.orders) != n:
            raise PresentationError("one relative order per generator is required")
        for i, o in enumerate(self.orders):
            if o < 0 or o == 1:
                raise PresentationError(f"relative order of {self.names[i]} must be 0 or >= 2, got {o}")
        self.name = name
        self.info = dict(info or {})
        if step_budget is None:
            step_budget = int(os.environ.get("PARANIL_STEP_BUDGET", DEFAULT_STEP_BUDGET))
        self.step_budget = step_budget

        self.powers = {}
        for i, w in (powers or {}).items():
            if not self.orders[i]:
                raise PresentationError(f"power relation given for infinite generator {self.names[i]}")
            self.powers[i] = self._check_word(w, i, f"power relation of {self.names[i]}")
        for i, o in enumerate(self.orders):
            if o and i not in self.powers:
                self.powers[i] = self.identity
        self.conjugates = {}
        for (j, i), w in (conjugates or {}).items():
            if not i < j:
                raise PresentationError("conjugation relations need i < j")
            self.conjugates[j, i] = self._check_word(w, i, f"{self.names[j]}^{self.names[i]}")
        given_inv = {}
        for (j, i), w in (inverse_conjugates or {}).items():
            if not i < j:
                raise PresentationError("conjugation relations need i < j")
            if self.orders[i]:
                raise PresentationError(
                    f"inverse conjugate given for finite generator {self.names[i]}")
            given_inv[j, i] = self._check_word(w, i, f"{self.names[j]}^{self.names[i]}^-1")
        self.inverse_conjugates = {}
        self._conj_cache = {}
        self._power_cache = {}
        self._steps = 0
        # derive missing inverse conjugates, deepest generator first, so the
        # collector for the subgroup <g_{i+1}, ...> is complete before g_i
        for i in reversed(range(n)):
            if self.orders[i]:
                continue
            if all((j, i) in given_inv for j in range(i + 1, n)):
                for j in range(i + 1, n):
                    self.inverse_conjugates[j, i] = given_inv[j, i]
            elif all(self.conj_relation(j, i) == self.unit(j) for j in range(i + 1, n)):
                for j in range(i + 1, n):
                    self.inverse_conjugates[j, i] = self.unit(j)
            else:
                images = [self.conj_relation(j, i) for j in range(i + 1, n)]
                inv = invert_automorphism(self, i + 1, images)
                for j in range(i + 1, n):
                    self.inverse_conjugates[j, i] = given_inv.get((j, i), inv[j - i - 1])

    # -- basic data -------------------------------------------------------

    def _check_word(self, w, i, what):
        w = tuple(int(x) for x in w)
        if len(w) != self.n:
            raise PresentationError(f"{what}: word has length {len(w)}, expected {self.n}")
        if any(w[: i + 1]):
            raise PresentationError(f"{what}: word must only involve generators after {self.names[i]}")
        return w

    @property
    def identity(self):
        return (0,) * self.n

    def unit(self, i, e=1):
        v = [0] * self.n
        v[i] = e
        return self.normalize(v) if self.orders[i] else tuple(v)

    def conj_relation(self, j, i, sign=1):
        if sign > 0:
            return self.conjugates.get((j, i), self.unit(j))
        return self.inverse_conjugates[j, i]

    @property
    def is_finite(self):
        return all(self.orders)

    def order(self):
        """Group order, or 0 when infinite."""
        out = 1
        for o in self.orders:
            if not o:
                return 0
            out *= o
        return out

    def hirsch_length(self):
        return sum(1 for o in self.orders if o == 0)

    def relations(self):
        """Iterate ``(kind, i, j, word)`` over all defining relations."""
        for i in range(self.n):
            if self.orders[i]:
                yield "power", i, None, self.powers[i]
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield "conj", i, j, self.conj_relation(j, i)
                if not self.orders[i]:
                    yield "conjinv", i, j, self.conj_relation(j, i, -1)

    def __eq__(self, other):
        if not isinstance(other, PcPresentation):
            return NotImplemented
        return (self.orders == other.orders
                and list(self.relations()) == list(other.relations()))

    def __hash__(self):
        return hash((self.orders, tuple(self.relations())))

    def __repr__(self):
        return f"PcPresentation({self.name or '?'}: {' '.join(self.names)}; orders {list(self.orders)})"

    def word_str(self, v):
        toks = [self.names[i] if x == 1 else f"{self.names[i]}^{x}" for i, x in _letters(v)]
        return " ".join(toks) if toks else "1"

    def renamed(self, names=None, name=None, info=None):
        return PcPresentation(names or self.names, self.orders, self.powers, self.conjugates,
                              self.inverse_conjugates, name=name if name is not None else self.name,
                              info=self.info if info is None else info,
                              step_budget=self.step_budget)

    # -- collection -------------------------------------------------------

    def normalize(self, v):
        """Normal form of an exponent vector read as the word g_1^v_1 ... g_n^v_n."""
        v = tuple(v)
        if all(0 <= x < o for x, o in zip(v, self.orders) if o):
            return v
        return self.collect(_letters(v))

    def collect(self, word, start=None):
        """Collect a word of ``(generator index, exponent)`` letters.

        ``start`` is an optional normal-form prefix the word is multiplied onto.
        """
        top = self._steps == 0
        if top:
            self._steps = 1
        try:
            return self._collect(word, start)
        finally:
            if top:
                self._steps = 0

    def _tick(self):
        self._steps += 1
        if self._steps > self.step_budget:
            self._steps = 0
            raise CollectionError(
                f"collection exceeded the step budget of {self.step_budget} rewrite steps")

    def _collect(self, word, start=None):
        n = self.n
        orders = self.orders
        e = list(start) if start is not None else [0] * n
        stack = [(int(k), int(m)) for k, m in reversed(list(word))]
        while stack:
            k, m = stack.pop()
            if not m:
                continue
            if not 0 <= k < n:
                raise IndexError(f"generator index {k} out of range")
            self._tick()
            o = orders[k]
            if o and not 0 < m < o:
                q, r = divmod(m, o)
                pending = [(k, r)] + _letters(self._power_of_relation(k, q))
                stack.extend(reversed(pending))
                continue
            tail = [(j, e[j]) for j in range(k + 1, n) if e[j]]
            s = e[k] + m
            q = 0
            if o:
                q, s = divmod(s, o)
            e[k] = s
            moved = []
            for j, x in tail:
                c = self._conj_power(j, k, m)
                if c == self._unit_raw(j):
                    moved.append((j, x))
                else:
                    moved.extend(_letters(self._vpower(c, x)))
            if not q and moved == tail:
                continue
            for j, _ in tail:
                e[j] = 0
            pending = (_letters(self._power_of_relation(k, q)) if q else []) + moved
            stack.extend(reversed(pending))
        return tuple(e)

    def _unit_raw(self, j):
        v = [0] * self.n
        v[j] = 1
        return tuple(v)

    def _power_of_relation(self, k, q):
        key = ("pow", k, q)
        if key not in self._power_cache:
            self._power_cache[key] = self._vpower(self.powers[k], q)
        return self._power_cache[key]

    def _vpower(self, v, x):
        if x == 1:
            return v
        key = (v, x)
        hit = self._power_cache.get(key)
        if hit is None:
            hit = self._power_cache[key] = self._binary_power(v, x)
        return hit

    def _binary_power(self, v, x):
        if x < 0:
            v, x = self._collect([(i, -a) for i, a in reversed(_letters(v))]), -x
        result = self.identity
        base = v
        while x:
            if x & 1:
                result = self._collect(_letters(base), result)
            x >>= 1
            if x:
                base = self._collect(_letters(base), base)
        return result

    def _conj_power(self, j, k, m):
        """Normal form of g_j ** (g_k ** m) for j > k."""
        if m == 0:
            return self._unit_raw(j)
        key = (j, k, m)
        hit = self._conj_cache.get(key)
        if hit is not None:
            return hit
        if m == 1 or m == -1:
            hit = self.conj_relation(j, k, m)
            hit = tuple(hit)
        else:
            half = m // 2 if m > 0 else -((-m) // 2)
            rest = m - half
            hit = self._apply_conj(self._conj_power(j, k, half), k, rest)
        self._conj_cache[key] = hit
        return hit

    def _apply_conj(self, v, k, m):
        word = []
        for l, x in _letters(v):
            c = self._conj_power(l, k, m)
            word.extend([(l, x)] if c == self._unit_raw(l) else _letters(self._vpower(c, x)))
        return self._collect(word)

    # -- group operations -------------------------------------------------

    def multiply(self, u, v):
        return self.collect(_letters(v), tuple(u))

    def product(self, *elements):
        out = self.identity
        for v in elements:
            out = self.multiply(out, v)
        return out

    def invert(self, u):
        return self.collect([(i, -x) for i, x in reversed(_letters(u))])

    def power(self, u, k):
        u = tuple(u)
        if k == 0:
            return self.identity
        top = self._steps == 0
        if top:
            self._steps = 1
        try:
            return self._vpower(u, k)
        finally:
            if top:
                self._steps = 0

    def conjugate(self, u, g):
        """``u ** g = g^-1 u g``."""
        return self.collect(_letters(g), self.multiply(self.invert(g), u))

    def commutator(self, u, v):
        """``[u, v] = u^-1 v^-1 u v``."""
        return self.multiply(self.invert(self.multiply(v, u)), self.multiply(u, v))

    def element_order(self, u, limit=10 ** 6):
        """Order of ``u``; 0 if it has infinite order (detected by Hirsch data)."""
        u = tuple(u)
        if not any(u):
            return 1
        d = next(i for i, x in enumerate(u) if x)
        if not self.orders[d]:
            return 0
        o = self.orders[d]
        step = o // gcd(o, u[d])
        w = self.power(u, step)
        rest = self.element_order(w, limit)
        return 0 if rest == 0 else step * rest

    # -- consistency ------------------------------------------------------

    def check_consistency(self):
        """Run the standard overlap tests; report the first disagreement."""
        n, o, N = self.n, self.orders, self.names
        c = self.collect
        L = _letters
        tests = []
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    tests.append((f"{N[k]} {N[j]} {N[i]}",
                                  lambda i=i, j=j, k=k: c([(k, 1)] + L(c([(j, 1), (i, 1)]))),
                                  lambda i=i, j=j, k=k: c([(i, 1)], c([(k, 1), (j, 1)]))))
        for i in range(n):
            for j in range(i + 1, n):
                if o[j]:
                    tests.append((f"{N[j]}^{o[j]} {N[i]}",
                                  lambda i=i, j=j: c([(i, 1)], self.powers[j]),
                                  lambda i=i, j=j: c([(j, o[j] - 1)] + L(c([(j, 1), (i, 1)])))))
        for i in range(n):
            if not o[i]:
                continue
            for j in range(i + 1, n):
                tests.append((f"{N[j]}^({N[i]}^{o[i]})",
                              lambda i=i, j=j: c([(j, 1)] + L(self.powers[i])),
                              lambda i=i, j=j: c([(i, o[i] - 1)], c([(j, 1), (i, 1)]))))
        for i in range(n):
            if o[i]:
                tests.append((f"{N[i]}^{o[i] + 1}",
                              lambda i=i: c([(i, 1)], self.powers[i]),
                              lambda i=i: c([(i, 1)] + L(self.powers[i]))))
        for i in range(n):
            for j in range(i + 1, n):
                if not o[i]:
                    tests.append((f"{N[j]} {N[i]}^-1 {N[i]}",
                                  lambda j=j: self._unit_raw(j),
                                  lambda i=i, j=j: c([(i, 1)], c([(j, 1), (i, -1)]))))
                if not o[j]:
                    tests.append((f"{N[j]}^-1 {N[j]} {N[i]}",
                                  lambda i=i: self._unit_raw(i),
                                  lambda i=i, j=j: c([(j, -1)] + L(c([(j, 1), (i, 1)])))))
                if not o[i] and not o[j]:
                    tests.append((f"{N[j]}^-1 {N[j]} {N[i]}^-1",
                                  lambda i=i: c([(i, -1)]),
                                  lambda i=i, j=j: c([(j, -1)] + L(c([(j, 1), (i, -1)])))))
        for label, left, right in tests:
            try:
                a, b = left(), right()
            except CollectionError as exc:
                return CheckReport("consistency", "inconsistent",
                                   f"inconsistent: overlap {label} (collection did not terminate)",
                                   witnesses={"overlap": label, "error": str(exc)})
            if a != b:
                return CheckReport("consistency", "inconsistent", f"inconsistent: overlap {label}",
                                   witnesses={"overlap": label, "left": self.word_str(a),
                                              "right": self.word_str(b)})
        return CheckReport("consistency", "consistent", "consistent",
                           witnesses={"generators": self.n, "overlaps_tested": len(tests)})


def invert_automorphism(P, start, images):
    """Invert an automorphism of the subgroup ``<g_start, ..., g_n>``.

    ``images[j - start]`` is the image of ``g_j``.  The subgroup is split into
    consecutive blocks on which the map induces an invertible linear map
    (free abelian blocks, or single cyclic generators); the inverse is built
    from the deepest block upward.
    """
    n = P.n
    img = {j: tuple(images[j - start]) for j in range(start, n)}
    for j, v in img.items():
        if any(v[:start]):
            raise PresentationError("automorphism does not preserve the subgroup")
    blocks = []
    b = start
    while b < n:
        e = b
        while e < n and not _block_ok(P, img, b, e):
            e += 1
        if e == n:
            raise PresentationError(
                f"cannot invert the action on generators {P.names[b]}..; "
                "give the inverse conjugation relations explicitly")
        blocks.append((b, e))
        b = e + 1
    inv = {}

    def apply_inv(v):
        out = P.identity
        for l, x in _letters(v):
            out = P.multiply(out, P.power(inv[l], x))
        return out

    def apply_fwd(v):
        out = P.identity
        for l, x in _letters(v):
            out = P.multiply(out, P.power(img[l], x))
        return out

    for b, e in reversed(blocks):
        size = e - b + 1
        if P.orders[b]:
            o = P.orders[b]
            u = img[b][b] % o
            guesses = {b: P.unit(b, pow(u, -1, o))}
        else:
            A = [[img[j][k] for j in range(b, e + 1)] for k in range(b, e + 1)]
            Ainv = arith.unimodular_inverse(A)
            guesses = {}
            for c in range(size):
                v = [0] * n
                for r in range(size):
                    v[b + r] = Ainv[r][c]
                guesses[b + c] = tuple(v)
        for j in range(b, e + 1):
            y = guesses[j]
            z = P.multiply(P.invert(P.unit(j)), apply_fwd(y))
            if any(z[: e + 1]):
                raise PresentationError("block decomposition failed while inverting automorphism")
            inv[j] = P.multiply(y, P.invert(apply_inv(z)))
    return [inv[j] for j in range(start, n)]


def _block_ok(P, img, b, e):
    n = P.n
    for j in range(b, n):
        if any(img[j][:b]):
            return False
    # the tail after the block must be invariant too
    for j in range(e + 1, n):
        if any(img[j][:e + 1]):
            return False
    if b == e and P.orders[b]:
        o = P.orders[b]
        return gcd(img[b][b], o) == 1 and not any(img[b][b + 1:e + 1])
    for j in range(b, e + 1):
        if P.orders[j]:
            return False
    for k in range(b, e + 1):
        for l in range(k + 1, e + 1):
            c = P.conj_relation(l, k)
            if any(c[b:l]) or c[l] != 1 or any(c[l + 1:e + 1]):
                return False
    for k in range(b, e + 1):
        for l in range(e + 1, n):
            if any(P.conj_relation(l, k)[: e + 1]):
                return False
    A = [[img[j][k] for j in range(b, e + 1)] for k in range(b, e + 1)]
    return abs(arith.determinant(A)) == 1


class GroupHom:
    """Homomorphism given by images of the domain's pc generators."""

    def __init__(self, domain, codomain, images, name=""):
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(codomain.normalize(v) for v in images)
        if len(self.images) != domain.n:
            raise ValueError("one image per domain generator is required")
        self.name = name
        self.verified = False

    def __call__(self, u):
        P = self.codomain
        out = P.identity
        for i, x in _letters(u):
            out = P.multiply(out, P.power(self.images[i], x))
        return out

    def word_image(self, word):
        P = self.codomain
        out = P.identity
        for i, x in word:
            out = P.multiply(out, P.power(self.images[i], x))
        return out

    def compose(self, other):
        """``other o self``."""
        return GroupHom(self.domain, other.codomain, [other(v) for v in self.images])

    def verify(self):
        return verify_hom(self)


def verify_hom(f):
    """Check every defining relation of the domain maps to the identity."""
    G, H = f.domain, f.codomain
    im = f.images
    for kind, i, j, w in G.relations():
        if kind == "power":
            lhs = H.power(im[i], G.orders[i])
            label = f"{G.names[i]}^{G.orders[i]}"
        elif kind == "conj":
            lhs = H.conjugate(im[j], im[i])
            label = f"{G.names[j]}^{G.names[i]}"
        else:
            lhs = H.conjugate(im[j], H.invert(im[i]))
            label = f"{G.names[j]}^{G.names[i]}^-1"
        rhs = f(w)
        if lhs != rhs:
            f.verified = False
            return CheckReport("hom", "fail", f"fail: relation {label} not preserved",
                               witnesses={"relation": label, "lhs": H.word_str(lhs),
                                          "rhs": H.word_str(rhs)})
    f.verified = True
    return CheckReport("hom", "pass", "verified",
                       witnesses={"relations_checked": sum(1 for _ in G.relations())})


def class_bound():
    return int(os.environ.get("PARANIL_CLASS_BOUND", 16))

"""Command line front end and the ``.grp`` group definition format.

A file is a sequence of sections::

    # the integral Heisenberg group
    [group]
    name = heis
    generators = a b c
    orders = 0 0 0
    b^a = b c

    [construct]
    name = H
    kind = companion_semidirect
    p = 3

    [hom]
    name = f
    domain = G
    codomain = H
    t -> t
    m1 -> x1^2

Relation lines are ``gj^gi = word``, ``gj^gi^-1 = word`` and ``gi^o = word``
for a generator of finite relative order ``o``.  Words are whitespace
separated tokens ``name`` or ``name^int``; ``1`` is the empty word.
"""
from __future__ import annotations

import argparse
import random
import re
import sys
from dataclasses import dataclass, field

from . import arith
from .constructions import (ConstructionError, central_extension_check, companion_cyclotomic,
                            direct_with_cyclic, free_abelian, free_abelian_action,
                            free_nilpotent_class2, heisenberg, make_action,
                            semidirect_by_automorphisms, sub_semidirect_inclusion)
from .genus import (GenusError, annihilator_polynomials, check_cor23_fastpath, check_para,
                    check_tau_monomorphism, thm34_hirsch_check)
from .nilpotent import (NotNilpotentError, PreconditionError, PrimeSet, abelianization,
                        isolator, lower_central_series, power_exponent_search, tau,
                        tensor_epi_check)
from .pcgroup import (CollectionError, GroupHom, PcPresentation, PresentationError,
                      verify_hom)
from .subgroup import Subgroup

KINDS = ("free_abelian", "free_nilpotent_class2", "companion_semidirect", "sub_semidirect",
         "direct_with_cyclic", "semidirect")


class GrpError(ValueError):
    """Parse or semantic error, located by line and column (1-based)."""

    def __init__(self, message, line=0, col=0, source="<input>"):
        super().__init__(message)
        self.message, self.line, self.col, self.source = message, line, col, source

    def __str__(self):
        if self.line:
            return f"{self.source}:{self.line}:{self.col}: {self.message}"
        return f"{self.source}: {self.message}"


@dataclass
class Entry:
    key: str
    value: str
    line: int
    col: int        # column of the key
    vcol: int       # column of the value
    op: str = "="


@dataclass
class Section:
    kind: str
    line: int
    entries: list = field(default_factory=list)

    def get(self, key, required=True):
        hits = [e for e in self.entries if e.key == key and e.op == "="]
        if len(hits) > 1:
            raise GrpError(f"duplicate key '{key}'", hits[1].line, hits[1].col)
        if not hits:
            if required:
                raise GrpError(f"[{self.kind}] section is missing '{key}'", self.line, 1)
            return None
        return hits[0]


@dataclass
class Document:
    groups: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    source: str = "<input>"

    def group(self, name=None):
        if not self.groups:
            raise GrpError("file defines no group", source=self.source)
        if name is None:
            return list(self.groups.values())[-1]
        if name not in self.groups:
            raise GrpError(f"unknown group '{name}'", source=self.source)
        return self.groups[name]

    def hom(self, name=None):
        if not self.homs:
            raise GrpError("file defines no hom", source=self.source)
        if name is None:
            return list(self.homs.values())[-1]
        if name not in self.homs:
            raise GrpError(f"unknown hom '{name}'", source=self.source)
        return self.homs[name]


# -- lexing -------------------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_INT = re.compile(r"[+-]?\d+$")


def _tokens(text, col0):
    """Whitespace separated tokens with their 1-based columns."""
    return [(m.group(), col0 + m.start()) for m in re.finditer(r"\S+", text)]


def parse_word(text, names, line=0, col0=1):
    """Letters ``[(index, exponent)]`` of a word over ``names``."""
    toks = _tokens(text, col0)
    if not toks:
        raise GrpError("empty word (write 1 for the identity)", line, col0)
    if len(toks) == 1 and toks[0][0] == "1":
        return []
    out = []
    for tok, col in toks:
        base, _, exp = tok.partition("^")
        if not _NAME.match(base):
            raise GrpError(f"bad token '{tok}'", line, col)
        if base not in names:
            raise GrpError(f"undeclared generator '{base}'", line, col)
        if exp == "" and "^" in tok:
            raise GrpError(f"missing exponent in '{tok}'", line, col)
        if exp and not _INT.match(exp):
            raise GrpError(f"bad exponent in '{tok}'", line, col + len(base) + 1)
        e = int(exp) if exp else 1
        if e:
            out.append((names.index(base), e))
    return out


def parse_word_list(text, names, line=0, col0=1, sep=","):
    out = []
    pos = 0
    for part in text.split(sep):
        if part.strip():
            out.append(parse_word(part, names, line, col0 + pos))
        pos += len(part) + 1
    return out


def parse_int(entry, lo=None):
    v = entry.value.strip()
    if not _INT.match(v):
        raise GrpError(f"'{entry.key}' needs an integer, got '{v}'", entry.line, entry.vcol)
    x = int(v)
    if lo is not None and x < lo:
        raise GrpError(f"'{entry.key}' must be at least {lo}", entry.line, entry.vcol)
    return x


def parse_matrix(entry):
    v = entry.value.strip()
    if not re.fullmatch(r"\[\s*(\[[^\[\]]*\]\s*,?\s*)*\]", v):
        raise GrpError("matrix must look like [[0,-1],[1,-1]]", entry.line, entry.vcol)
    rows = []
    for m in re.finditer(r"\[([^\[\]]*)\]", v[1:-1]):
        cells = [c.strip() for c in m.group(1).split(",") if c.strip()]
        for c in cells:
            if not _INT.match(c):
                raise GrpError(f"bad matrix entry '{c}'", entry.line, entry.vcol + 1 + m.start())
        rows.append([int(c) for c in cells])
    if not rows or any(len(r) != len(rows) for r in rows):
        raise GrpError("matrix must be square and nonempty", entry.line, entry.vcol)
    return rows


def split_sections(text, source="<input>"):
    sections = []
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.strip()
        lead = len(body) - len(body.lstrip()) + 1
        if stripped.startswith("["):
            m = re.fullmatch(r"\[(\w+)\]", stripped)
            if not m or m.group(1) not in ("group", "construct", "hom"):
                raise GrpError(f"unknown section header '{stripped}'", ln, lead, source)
            sections.append(Section(m.group(1), ln))
            continue
        if not sections:
            raise GrpError("content before the first section header", ln, lead, source)
        if "->" in body:
            op = "->"
        elif "=" in body:
            op = "="
        else:
            raise GrpError("expected 'key = value' or 'generator -> word'", ln, lead, source)
        k, v = body.split(op, 1)
        key = k.strip()
        if not key:
            raise GrpError("missing left-hand side", ln, lead, source)
        vcol = len(k) + len(op) + 1 + (len(v) - len(v.lstrip()))
        sections[-1].entries.append(Entry(key, v.strip(), ln, lead, vcol, op))
    return sections


# -- sections -----------------------------------------------------------------

_GROUP_KEYS = ("name", "generators", "orders")


def _build_group(sec):
    name = sec.get("name").value
    g = sec.get("generators")
    names = g.value.replace(",", " ").split()
    for tok, col in _tokens(g.value.replace(",", " "), g.vcol):
        if not _NAME.match(tok):
            raise GrpError(f"bad generator name '{tok}'", g.line, col)
    if len(set(names)) != len(names):
        raise GrpError("duplicate generator name", g.line, g.vcol)
    o = sec.get("orders")
    otoks = _tokens(o.value.replace(",", " "), o.vcol)
    if len(otoks) != len(names):
        raise GrpError(f"expected {len(names)} relative orders, got {len(otoks)}", o.line, o.vcol)
    orders = []
    for tok, col in otoks:
        if not _INT.match(tok) or int(tok) < 0 or int(tok) == 1:
            raise GrpError(f"relative order must be 0 or >= 2, got '{tok}'", o.line, col)
        orders.append(int(tok))
    n = len(names)
    powers, conj, inv = {}, {}, {}
    for e in sec.entries:
        if e.key in _GROUP_KEYS:
            continue
        if e.op != "=":
            raise GrpError("'->' lines belong in a [hom] section", e.line, e.col)
        parts = e.key.replace(" ", "").split("^")
        if len(parts) not in (2, 3) or parts[0] not in names:
            if parts and parts[0] and _NAME.match(parts[0]) and parts[0] not in names:
                raise GrpError(f"undeclared generator '{parts[0]}'", e.line, e.col)
            raise GrpError(f"bad relation left-hand side '{e.key}'", e.line, e.col)
        j = names.index(parts[0])
        letters = parse_word(e.value, names, e.line, e.vcol)
        w = [0] * n
        last = -1
        for idx, x in letters:
            if idx <= last:
                raise GrpError("relation words must list generators in increasing order",
                               e.line, e.vcol)
            last = idx
            w[idx] = x
        w = tuple(w)
        if len(parts) == 2 and _INT.match(parts[1]):
            if int(parts[1]) != orders[j] or not orders[j]:
                raise GrpError(f"power relation exponent must equal the relative order of "
                               f"{parts[0]}", e.line, e.col)
            key, table = j, powers
        else:
            gi = parts[1]
            if gi not in names:
                raise GrpError(f"undeclared generator '{gi}'", e.line, e.col + len(parts[0]) + 1)
            i = names.index(gi)
            if not i < j:
                raise GrpError(f"conjugation relation needs {gi} before {parts[0]}", e.line, e.col)
            if len(parts) == 3:
                if parts[2] != "-1":
                    raise GrpError(f"bad relation left-hand side '{e.key}'", e.line, e.col)
                key, table = (j, i), inv
            else:
                key, table = (j, i), conj
        if key in table:
            raise GrpError(f"duplicate relation '{e.key}'", e.line, e.col)
        table[key] = w
    try:
        return PcPresentation(names, orders, powers, conj, inv or None, name=name)
    except PresentationError as exc:
        raise GrpError(str(exc), sec.line, 1) from None


def _subgroup_words(P, entry):
    return [P.collect(w) for w in parse_word_list(entry.value, list(P.names), entry.line, entry.vcol)]


def _base(doc, sec):
    e = sec.get("base")
    if e.value not in doc.groups:
        raise GrpError(f"unknown group '{e.value}'", e.line, e.vcol)
    return doc.groups[e.value]


def _build_construct(doc, sec):
    name = sec.get("name").value
    ke = sec.get("kind")
    kind = ke.value
    if kind not in KINDS:
        raise GrpError(f"unknown construct kind '{kind}'", ke.line, ke.vcol)
    try:
        if kind == "free_abelian":
            return free_abelian(parse_int(sec.get("r"), 0), name=name), None
        if kind == "free_nilpotent_class2":
            return free_nilpotent_class2(parse_int(sec.get("r"), 1), name=name), None
        if kind == "companion_semidirect":
            me, pe = sec.get("matrix", False), sec.get("p", False)
            if me is None and pe is None:
                raise GrpError("companion_semidirect needs 'p' or 'matrix'", sec.line, 1)
            if me is not None:
                mat = parse_matrix(me)
            else:
                p = parse_int(pe, 2)
                if not arith.is_prime(p):
                    raise GrpError(f"{p} is not prime", pe.line, pe.vcol)
                mat = companion_cyclotomic(p)
            N = free_abelian(len(mat))
            return semidirect_by_automorphisms(N, [free_abelian_action(N, mat)], name=name), None
        if kind == "semidirect":
            N = _base(doc, sec)
            ie = sec.get("images")
            imgs = [N.collect(w) for w in
                    parse_word_list(ie.value, list(N.names), ie.line, ie.vcol, sep=";")]
            if len(imgs) != N.n:
                raise GrpError(f"expected {N.n} images, got {len(imgs)}", ie.line, ie.vcol)
            te = sec.get("t", False)
            tn = [te.value] if te else None
            return semidirect_by_automorphisms(N, [make_action(N, imgs)], t_names=tn,
                                               name=name), None
        if kind == "direct_with_cyclic":
            G = _base(doc, sec)
            pe = sec.get("p")
            out = direct_with_cyclic(G, parse_int(pe, 2))
            return out.renamed(name=name), None
        H = _base(doc, sec)
        M = Subgroup(H, _subgroup_words(H, sec.get("subgroup")))
        he = sec.get("hom", False)
        G, f = sub_semidirect_inclusion(H, M)
        G = G.renamed(name=name, info=G.info)
        f = GroupHom(G, H, f.images, name=he.value if he else "incl")
        f.verified = True
        return G, f
    except ConstructionError as exc:
        msg = str(exc)
        raise GrpError(msg, sec.line, 1) from None


def _build_hom(doc, sec):
    name = sec.get("name").value
    de, ce = sec.get("domain"), sec.get("codomain")
    for e in (de, ce):
        if e.value not in doc.groups:
            raise GrpError(f"unknown group '{e.value}'", e.line, e.vcol)
    G, H = doc.groups[de.value], doc.groups[ce.value]
    images = {}
    for e in sec.entries:
        if e.op != "->":
            if e.key not in ("name", "domain", "codomain"):
                raise GrpError(f"unknown key '{e.key}' in [hom]", e.line, e.col)
            continue
        if e.key not in G.names:
            raise GrpError(f"undeclared generator '{e.key}'", e.line, e.col)
        images[G.names.index(e.key)] = H.collect(parse_word(e.value, list(H.names), e.line, e.vcol))
    missing = [G.names[i] for i in range(G.n) if i not in images]
    if missing:
        raise GrpError(f"no image for generator(s) {', '.join(missing)}", sec.line, 1)
    f = GroupHom(G, H, [images[i] for i in range(G.n)], name=name)
    f.verified = verify_hom(f).passed
    return f


def parse_text(text, source="<input>"):
    doc = Document(source=source)
    try:
        for sec in split_sections(text, source):
            if sec.kind == "group":
                P = _build_group(sec)
                doc.groups[P.name] = P
            elif sec.kind == "construct":
                P, f = _build_construct(doc, sec)
                doc.groups[P.name] = P
                if f is not None:
                    doc.homs[f.name] = f
            else:
                f = _build_hom(doc, sec)
                doc.homs[f.name] = f
    except GrpError as exc:
        exc.source = source
        raise
    return doc


def parse_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise GrpError(f"cannot read file: {exc.strerror}", source=path) from None
    return parse_text(text, path)


# -- writing ------------------------------------------------------------------

def _word_text(P, v):
    toks = [P.names[i] if x == 1 else f"{P.names[i]}^{x}" for i, x in enumerate(v) if x]
    return " ".join(toks) if toks else "1"


def format_group(P):
    lines = ["[group]", f"name = {P.name}", f"generators = {' '.join(P.names)}",
             f"orders = {' '.join(str(o) for o in P.orders)}"]
    for i, o in enumerate(P.orders):
        if o and any(P.powers[i]):
            lines.append(f"{P.names[i]}^{o} = {_word_text(P, P.powers[i])}")
    for j in range(P.n):
        for i in range(j):
            w = P.conj_relation(j, i)
            if w != P.unit(j):
                lines.append(f"{P.names[j]}^{P.names[i]} = {_word_text(P, w)}")
            if not P.orders[i]:
                w = P.inverse_conjugates[j, i]
                if w != P.unit(j):
                    lines.append(f"{P.names[j]}^{P.names[i]}^-1 = {_word_text(P, w)}")
    return "\n".join(lines) + "\n"


def format_hom(f):
    lines = ["[hom]", f"name = {f.name}", f"domain = {f.domain.name}",
             f"codomain = {f.codomain.name}"]
    for i, v in enumerate(f.images):
        lines.append(f"{f.domain.names[i]} -> {_word_text(f.codomain, v)}")
    return "\n".join(lines) + "\n"


def format_document(doc):
    parts = [format_group(P) for P in doc.groups.values()]
    parts += [format_hom(f) for f in doc.homs.values()]
    return "\n".join(parts)


# -- commands -----------------------------------------------------------------

def _primes_arg(text):
    text = (text or "").strip()
    if text in ("", "{}"):
        return PrimeSet()
    try:
        ps = [int(x) for x in text.strip("{}").split(",") if x.strip()]
        return PrimeSet(frozenset(ps))
    except ValueError as exc:
        raise GrpError(f"bad prime list '{text}': {exc}", source="argv") from None


def _arg_words(P, text, what, sep=","):
    try:
        return [P.collect(w) for w in parse_word_list(text, list(P.names), sep=sep)]
    except GrpError as exc:
        raise GrpError(f"argument {what}: column {exc.col}: {exc.message}", source="argv") from None


def cmd_consistency(doc, args, out):
    rep = doc.group(args.group).check_consistency()
    out.write(rep.render())
    return 0 if rep.passed else 1


def cmd_lcs(doc, args, out):
    P = doc.group(args.group)
    T = lower_central_series(P, args.depth)
    out.write(f"group: {P.name}\n")
    for i, inv in enumerate(T.step_invariants, 1):
        out.write(f"gamma_{i}/gamma_{i + 1}: {inv}\n")
    out.write("hirsch: " + " ".join(str(t.hirsch_length()) for t in T.terms) + "\n")
    out.write(f"stabilized: {'k=' + str(T.stabilization_index) if T.stabilized else 'no'}\n")
    for i in range(1, T.depth):
        out.write(f"tensor_epi i={i}: {tensor_epi_check(T, i).verdict}\n")
    return 0


def cmd_tau(doc, args, out):
    out.write(f"tau = {tau(doc.group(args.group))}\n")
    return 0


def cmd_hirsch(doc, args, out):
    out.write(f"h = {doc.group(args.group).hirsch_length()}\n")
    return 0


def cmd_abelianization(doc, args, out):
    inv, _ = abelianization(doc.group(args.group))
    out.write(f"abelianization = {inv}\n")
    return 0


def cmd_isolator(doc, args, out):
    P = doc.group(args.group)
    primes = _primes_arg(args.primes)
    K = lower_central_series(P, max(args.k - 1, 0)).term(args.k)
    I = isolator(P, K, primes)
    out.write(f"isolator of gamma_{args.k} for primes {primes}: {I!r}\n")
    out.write(f"index over gamma_{args.k}: {K.index_in(I)}\n")
    out.write(f"hirsch: {I.hirsch_length()}\n")
    return 0


def cmd_build(doc, args, out):
    text = format_document(doc)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    out.write(f"wrote {len(doc.groups)} group(s), {len(doc.homs)} hom(s) to {args.out}\n")
    return 0


def _report(rep, out):
    out.write(rep.render())
    return 0 if rep.passed else 1


def cmd_check_para(doc, args, out):
    return _report(check_para(doc.hom(args.hom), args.depth), out)


def cmd_check_tau(doc, args, out):
    return _report(check_tau_monomorphism(doc.hom(args.hom), _primes_arg(args.tau), args.depth), out)


def cmd_check_cor23(doc, args, out):
    return _report(check_cor23_fastpath(doc.hom(args.hom)), out)


def cmd_check_thm34(doc, args, out):
    f = doc.hom(args.hom)
    return _report(thm34_hirsch_check(f.domain, f.codomain, f, args.mode), out)


def cmd_check_extension(doc, args, out):
    P = doc.group(args.group)
    imgs = _arg_words(P, args.images, "--images", sep=";")
    if len(imgs) != P.n:
        raise GrpError(f"argument --images: expected {P.n} images, got {len(imgs)}", source="argv")
    try:
        act = make_action(P, imgs)
    except ConstructionError as exc:
        raise GrpError(f"argument --images: {exc}", source="argv") from None
    return _report(central_extension_check(P, act), out)


def cmd_annihilator(doc, args, out):
    P = doc.group(args.group)
    A = Subgroup(P, _arg_words(P, args.subgroup, "--subgroup"))
    xs = _arg_words(P, args.element, "--element")
    if len(xs) != 1:
        raise GrpError("argument --element: expected a single word", source="argv")
    _, _, rep = annihilator_polynomials(P, A, xs[0])
    return _report(rep, out)


def cmd_power_exponent(doc, args, out):
    P = doc.group(args.group)
    N = Subgroup(P, _arg_words(P, args.subgroup, "--subgroup"))
    res = power_exponent_search(P, N, args.m)
    out.write(f"n = {res['n']}\n")
    for i in sorted(res["n_i"]):
        out.write(f"n_{i} = {res['n_i'][i]}\n")
    out.write(f"pi(m)-numbers: {res['pi_m_numbers']}\n")
    return 0


def _heis_matrix(v):
    a, b, c = v
    # a -> E + E23, b -> E + E12, c -> E + E13; normal form a^x b^y c^z
    return ((1, b, c), (0, 1, a), (0, 0, 1))


def _mat3(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3))
                 for i in range(3))


def run_selftest(seed, count=1000, out=None):
    """Randomized consistency checks; returns the list of failure strings."""
    rng = random.Random(seed)
    fails = []
    P = heisenberg()
    for _ in range(count):
        u = tuple(rng.randint(-20, 20) for _ in range(3))
        v = tuple(rng.randint(-20, 20) for _ in range(3))
        if _heis_matrix(P.multiply(u, v)) != _mat3(_heis_matrix(u), _heis_matrix(v)):
            fails.append(f"collect/matrix {u} {v}")
    Z2 = free_abelian(2)
    groups = [semidirect_by_automorphisms(Z2, [free_abelian_action(Z2, companion_cyclotomic(3))]),
              direct_with_cyclic(heisenberg(), 3)]
    triples = 0
    for G in groups:
        for _ in range(100):
            u, v, w = (G.normalize(tuple(rng.randint(-6, 6) for _ in range(G.n))) for _ in range(3))
            if G.multiply(G.multiply(u, v), w) != G.multiply(u, G.multiply(v, w)):
                fails.append(f"associativity {G.name} {u} {v} {w}")
            if G.multiply(u, G.invert(u)) != G.identity or G.multiply(G.invert(u), u) != G.identity:
                fails.append(f"inverse {G.name} {u}")
            triples += 1
    snf = 0
    for _ in range(100):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        Mx = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        S, U, V = arith.smith_normal_form(Mx)
        if arith.matmul(arith.matmul(U, Mx), V) != S or abs(arith.determinant(U)) != 1 \
                or abs(arith.determinant(V)) != 1:
            fails.append(f"snf {Mx}")
        snf += 1
    if out is not None:
        out.write(f"selftest seed={seed}\n")
        out.write(f"collect vs matrix: {count} pairs\n")
        out.write(f"associativity and inverses: {triples} triples\n")
        out.write(f"smith normal form: {snf} matrices\n")
        out.write(("pass" if not fails else f"fail ({len(fails)} failures)") + "\n")
        for f in fails[:10]:
            out.write(f"  {f}\n")
    return fails


def cmd_selftest(doc, args, out):
    return 0 if not run_selftest(args.seed, args.count, out) else 1


COMMANDS = {
    "consistency": cmd_consistency, "lcs": cmd_lcs, "tau": cmd_tau, "hirsch": cmd_hirsch,
    "abelianization": cmd_abelianization, "isolator": cmd_isolator, "build": cmd_build,
    "check-para": cmd_check_para, "check-tau": cmd_check_tau, "check-cor23": cmd_check_cor23,
    "check-thm34": cmd_check_thm34, "check-extension": cmd_check_extension,
    "annihilator": cmd_annihilator, "power-exponent": cmd_power_exponent,
    "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise GrpError(message, source="argv")


def build_parser():
    p = _Parser(prog="paranil", description="Polycyclic presentations and lower central checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, file=True, group=False, hom=False):
        sp = sub.add_parser(name)
        if file:
            sp.add_argument("file")
        sp.add_argument("--seed", type=int, default=0)
        if group:
            sp.add_argument("--group", default=None)
        if hom:
            sp.add_argument("--hom", default=None)
        return sp

    add("consistency", group=True)
    add("lcs", group=True).add_argument("--depth", type=int, default=3)
    add("tau", group=True)
    add("hirsch", group=True)
    add("abelianization", group=True)
    sp = add("isolator", group=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--primes", required=True)
    add("build").add_argument("--out", required=True)
    add("check-para", hom=True).add_argument("--depth", type=int, default=8)
    sp = add("check-tau", hom=True)
    sp.add_argument("--tau", required=True)
    sp.add_argument("--depth", type=int, default=8)
    add("check-cor23", hom=True)
    add("check-thm34", hom=True).add_argument("--mode", choices=["i", "ii"], default="i")
    add("check-extension", group=True).add_argument("--images", required=True)
    sp = add("annihilator", group=True)
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--element", required=True)
    sp = add("power-exponent", group=True)
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--m", type=int, required=True)
    add("selftest", file=False).add_argument("--count", type=int, default=1000)
    return p


def execute(argv, out=None, err=None):
    """Run one command; returns the exit code (0 pass, 1 fail, 2 error)."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "depth", 1) is not None and getattr(args, "depth", 1) < 1:
            raise GrpError("--depth must be at least 1", source="argv")
        if getattr(args, "k", 1) < 1:
            raise GrpError("--k must be at least 1", source="argv")
        doc = parse_file(args.file) if getattr(args, "file", None) else Document()
        return COMMANDS[args.command](doc, args, out)
    except GrpError as exc:
        err.write(f"error: {exc}\n")
    except PreconditionError as exc:
        err.write(f"error: precondition failed: {exc} (witness {exc.witness})\n")
    except (NotNilpotentError, CollectionError, GenusError, ConstructionError,
            PresentationError) as exc:
        err.write(f"error: {exc}\n")
    except ValueError as exc:
        err.write(f"error: {exc}\n")
    return 2


def main(argv=None):
    sys.exit(execute(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

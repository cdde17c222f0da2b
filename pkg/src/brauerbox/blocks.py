"""Linear characters, idempotents on normal p'-subgroups, and projections.

Linear characters take values in F_p^x, so only homomorphisms onto cyclic
groups of order dividing p-1 occur (for p = 3: order at most 2). A value
assignment on the generators is certified to be a homomorphism by an
exact order count of the graph group on an extended domain; no relator
sampling is involved.

Idempotents are supported on a normal p'-subgroup E: for a character
lambda of E the element |E|^-1 sum lambda(g^-1) g is a primitive
idempotent of kE; the family over all p-realizable characters is
orthogonal and sums to 1.
"""

import itertools
from math import gcd

import numpy as np

from .errors import BoundExceeded, ParseError
from .ffla import FpMatrix, check_prime, row_space, _inv_mod, _rref_array
from .modrep import MatRep, element_matrices, evaluate
from .permgrp import Perm, PermGroup, Subgroup, format_cycles, make_group, parse_cycles

ELEMENT_BOUND = 10 ** 4


class LinearCharacter:
    """A homomorphism G -> F_p^x, stored by its values on the generators."""

    def __init__(self, group, p, gen_values):
        self.group = group
        self.p = p
        self.gen_values = tuple(int(v) % p for v in gen_values)
        if any(v == 0 for v in self.gen_values):
            raise ValueError("character values must be units")

    def value(self, g):
        member, word = self.group.sift(g)
        if not member:
            raise ValueError("element not in the character's group")
        out = 1
        for x in word:
            v = self.gen_values[abs(x) - 1]
            out = (out * (v if x > 0 else _inv_mod(v, self.p))) % self.p
        return out

    def is_trivial(self):
        return all(v == 1 for v in self.gen_values)

    def validate(self, seed=0, samples=20, length=8):
        """Spot-check multiplicativity on random relations."""
        import random
        rng = random.Random(seed)
        k = len(self.group.gens)
        for _ in range(samples):
            word = tuple(rng.randrange(1, k + 1)
                         for _ in range(rng.randrange(1, length)))
            g = self.group.evaluate_word(word)
            direct = 1
            for x in word:
                direct = (direct * self.gen_values[x - 1]) % self.p
            if direct != self.value(g):
                raise AssertionError("character violates a group relation")
        return True

    def __eq__(self, other):
        return (isinstance(other, LinearCharacter)
                and other.group is self.group
                and other.p == self.p
                and other.gen_values == self.gen_values)

    def __hash__(self):
        return hash((id(self.group), self.p, self.gen_values))

    def __repr__(self):
        return f"LinearCharacter(p={self.p}, values={self.gen_values})"


def _primitive_root(p):
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = (x * g) % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1  # p == 2


def _unit_log(p):
    """Discrete logs in F_p^x with respect to a fixed primitive root."""
    root = _primitive_root(p)
    logs = {}
    x = 1
    for k in range(p - 1):
        logs[x] = k
        x = (x * root) % p
    return root, logs


def linear_characters(G, p):
    """All homomorphisms G -> F_p^x.

    Candidate values per generator are restricted to the unit subgroup of
    order gcd(|g|, p-1); each assignment is certified to extend to a
    homomorphism by checking that the graph group on the domain extended
    by p-1 shift points has the same order as G.
    """
    check_prime(p)
    if p == 2:
        return [LinearCharacter(G, p, [1] * len(G.gens))]
    root, logs = _unit_log(p)
    shift_base = G.degree
    extra = p - 1

    def unit_of_order_dividing(d):
        # the subgroup of F_p^x of order gcd(d, p-1)
        m = gcd(d, p - 1)
        step = (p - 1) // m
        return [pow(root, step * k, p) for k in range(m)]

    candidates = [unit_of_order_dividing(g.order()) for g in G.gens]
    total = 1
    for c in candidates:
        total *= len(c)
    if total > 4096:
        raise BoundExceeded(
            f"{total} candidate assignments exceed the enumeration bound")
    out = []
    for values in itertools.product(*candidates):
        graph_gens = []
        for g, v in zip(G.gens, values):
            k = logs[v]
            images = list(g.images) + [
                shift_base + ((i + k) % extra) for i in range(extra)]
            graph_gens.append(Perm(images))
        if not graph_gens:
            out.append(LinearCharacter(G, p, ()))
            continue
        graph = PermGroup(graph_gens, degree=G.degree + extra)
        if graph.order == G.order:
            out.append(LinearCharacter(G, p, values))
    return out


def classify_linear_labels(G, p=3, element_bound=ELEMENT_BOUND):
    """Label the four linear characters of a P:D8-type group a, b, c, d.

    'a' is the trivial character; 'b' the unique nontrivial one whose
    kernel contains an element of order 4; the remaining pair is ordered
    lexicographically by generator values, a convention relative to the
    stored generator sequence (an outer automorphism may swap c and d).
    """
    chars = linear_characters(G, p)
    if len(chars) != 4:
        raise ValueError(f"expected 4 linear characters, found {len(chars)}")
    trivial = next(c for c in chars if c.is_trivial())
    order4 = [g for g in G.elements(bound=element_bound) if g.order() == 4]
    if not order4:
        raise ValueError("group has no elements of order 4 to anchor label b")
    with_order4_kernel = [
        c for c in chars
        if not c.is_trivial() and any(c.value(x) == 1 for x in order4)]
    if len(with_order4_kernel) != 1:
        raise ValueError(
            f"label b is ambiguous: {len(with_order4_kernel)} candidates")
    b = with_order4_kernel[0]
    rest = sorted((c for c in chars if c is not trivial and c is not b),
                  key=lambda c: c.gen_values)
    return {"a": trivial, "b": b, "c": rest[0], "d": rest[1]}


def label_of_character(labels, char):
    for name, c in labels.items():
        if c.gen_values == char.gen_values:
            return name
    raise ValueError("character does not match any label")


def character_of_one_dim(rep):
    """The linear character carried by a 1-dimensional representation."""
    if rep.dim != 1:
        raise ValueError("not one-dimensional")
    return LinearCharacter(rep.group, rep.p,
                           [int(m[0, 0]) for m in rep.raw()])


def rep_of_character(char):
    """The 1-dimensional representation realizing a linear character."""
    mats = [np.array([[v]], dtype=np.int64) for v in char.gen_values]
    return MatRep(char.group, char.p, mats, check=False, dim=1)


# -- group algebra elements -----------------------------------------------------


class GroupAlgebraElement:
    """A sparse element of kG: a map from group elements to F_p scalars."""

    def __init__(self, group, p, support):
        check_prime(p)
        self.group = group
        self.p = p
        clean = {}
        for g, c in support.items():
            c = int(c) % p
            if c:
                if g not in group:
                    raise ValueError("support element outside the group")
                clean[g] = c
        self.support = clean

    def __add__(self, other):
        self._chk(other)
        out = dict(self.support)
        for g, c in other.support.items():
            out[g] = (out.get(g, 0) + c) % self.p
        return GroupAlgebraElement(self.group, self.p, out)

    def __mul__(self, other):
        self._chk(other)
        out = {}
        for g, a in self.support.items():
            for h, b in other.support.items():
                gh = g * h
                out[gh] = (out.get(gh, 0) + a * b) % self.p
        return GroupAlgebraElement(self.group, self.p, out)

    def _chk(self, other):
        if other.group is not self.group or other.p != self.p:
            raise ValueError("group algebra mismatch")

    def conjugate(self, x):
        return GroupAlgebraElement(
            self.group, self.p,
            {g.conjugate(x): c for g, c in self.support.items()})

    def is_idempotent(self):
        return (self * self) == self

    def __eq__(self, other):
        return (isinstance(other, GroupAlgebraElement)
                and other.p == self.p and other.support == self.support)

    def __hash__(self):
        return hash((self.p, frozenset(self.support.items())))

    def matrix(self, rep):
        """Evaluate through a representation: sum of scaled element matrices."""
        out = np.zeros((rep.dim, rep.dim), dtype=np.int64)
        for g, c in self.support.items():
            out = (out + c * evaluate(rep, g).a) % rep.p
        return FpMatrix(rep.p, out)

    def to_text(self):
        lines = [f"idem p={self.p}"]
        for g in sorted(self.support, key=lambda x: x.images):
            lines.append(f"{self.support[g]} {format_cycles(g)}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"GroupAlgebraElement(p={self.p}, support size {len(self.support)})"


def parse_group_algebra_element(text, group, filename="<string>"):
    import re
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError(filename, 1, "empty idempotent file")
    m = re.fullmatch(r"idem\s+p=(\d+)", lines[0].strip())
    if not m:
        raise ParseError(filename, 1, f"bad header {lines[0]!r}")
    p = int(m.group(1))
    support = {}
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(None, 1)
        if len(parts) != 2:
            raise ParseError(filename, i, f"malformed line {ln!r}")
        try:
            coeff = int(parts[0])
            g = parse_cycles(parts[1], group.degree)
        except ValueError as e:
            raise ParseError(filename, i, str(e)) from e
        support[g] = coeff
    return GroupAlgebraElement(group, p, support)


def idempotent_from_character(E, values, p=None):
    """The primitive idempotent of kE attached to a character of E.

    E must be a p'-subgroup; values is a LinearCharacter on E.group or a
    dict mapping every element of E to a unit. The output is
    |E|^-1 * sum over g of values(g^-1) * g, an idempotent of k[parent].
    """
    if isinstance(values, LinearCharacter):
        if p is None:
            p = values.p
        lam = values.value
    else:
        table = dict(values)
        if p is None:
            raise ValueError("p required when values are given as a dict")
        lam = lambda g: table[g]
    check_prime(p)
    if E.order % p == 0:
        raise ValueError(f"|E| = {E.order} is divisible by p = {p}")
    elements = list(E.group.elements())
    for g in elements:
        for h in elements:
            if (lam(g) * lam(h) - lam(g * h)) % p != 0:
                raise ValueError("values are not multiplicative on E")
    inv_order = _inv_mod(E.order % p, p)
    support = {g: (inv_order * lam(g.inverse())) % p for g in elements}
    e = GroupAlgebraElement(E.parent, p, support)
    if not e.is_idempotent():
        raise AssertionError("constructed element is not idempotent")
    return e


def p_realizable_characters(E, p):
    """All characters of E with values in F_p^x (via linear_characters)."""
    return linear_characters(E.group, p)


def project(V, e, S):
    """Image of V under a stabilized inner idempotent, as a module for S.

    e must be supported on a normal p'-subgroup of V's group, and every
    generator of the designated subgroup S must stabilize e under
    conjugation (both checked). The result is the row space of the
    evaluated idempotent with the S-action in its coordinates.
    """
    H = V.group
    E_group = PermGroup([g for g in e.support if not g.is_identity()] or [],
                        degree=H.degree) if e.support else None
    if E_group is not None:
        for x in list(e.support):
            for h in H.gens:
                if x.conjugate(h) not in E_group:
                    raise ValueError("support subgroup is not normal in the group")
    for s in S.gens:
        if e.conjugate(s) != e:
            raise ValueError("designated subgroup does not stabilize the idempotent")
        if s not in H:
            raise ValueError("designated subgroup is not contained in the group")
    e_mat = e.matrix(V).a
    if ((e_mat @ e_mat) % V.p != e_mat).any():
        raise AssertionError("idempotent does not evaluate to an idempotent matrix")
    basis = row_space(FpMatrix(V.p, e_mat))
    red, rank, piv = _rref_array(basis.a, V.p)
    mats = []
    for s in S.gens:
        ms = evaluate(V, s).a
        rows = (red[:rank] @ ms) % V.p
        for row in rows:
            check = row.copy()
            for i, c in enumerate(piv):
                if check[c]:
                    check = (check - check[c] * red[i]) % V.p
            if check.any():
                raise AssertionError("projected subspace is not stable")
        mats.append(rows[:, piv] % V.p)
    out = MatRep(S.group, V.p, mats, check=False, dim=rank)
    out.basis = FpMatrix(V.p, red[:rank])
    return out

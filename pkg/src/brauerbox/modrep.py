"""Modules over group algebras as matrix representations.

A MatRep pins one invertible matrix over F_p to each ORIGINAL generator of
a permutation group; arbitrary elements are evaluated through their sift
word in the stabilizer chain. All module-theoretic work (chopping, hom
spaces, radical series, direct sum decompositions) is delegated to the
algebra-level meataxe routines and re-wrapped with the group structure.

Matrices act on row vectors from the right, matching right modules.
"""

import random

import numpy as np

from . import meataxe
from .errors import BoundExceeded, Inconclusive, ParseError
from .ffla import (Echelon, FpMatrix, _parse_fpmat_block, _rref_array,
                   nullspace, rref)
from .permgrp import PermAction, PermGroup, Subgroup, right_transversal, sylow

PROJECTIVITY_GROUP_BOUND = 10 ** 4
DECOMPOSE_DIM_BOUND = 500


class MatRep:
    """A representation: group handle plus one matrix per group generator."""

    def __init__(self, group, p, matrices, check=True, dim=None):
        if isinstance(group, Subgroup):
            group = group.group
        self.group = group
        self.p = p
        mats = []
        for m in matrices:
            if isinstance(m, FpMatrix):
                if m.p != p:
                    raise ValueError("matrix modulus differs from representation modulus")
                mats.append(m.a.copy())
            else:
                mats.append(np.asarray(m, dtype=np.int64) % p)
        if len(mats) != len(group.gens):
            raise ValueError("need exactly one matrix per group generator")
        dims = {m.shape for m in mats}
        if len(dims) > 1 or any(a != b for a, b in dims):
            raise ValueError("representation matrices must be square of equal size")
        if mats:
            self.dim = mats[0].shape[0]
            if dim is not None and dim != self.dim:
                raise ValueError("declared dimension disagrees with the matrices")
        elif dim is not None:
            self.dim = dim
        else:
            raise ValueError("dimension required for a representation of a "
                             "group without generators")
        self._mats = mats
        self._inverses = None
        if check:
            for m in mats:
                if meataxe._rank(m, p) != self.dim:
                    raise ValueError("representation matrix is singular")

    @property
    def matrices(self):
        return [FpMatrix(self.p, m) for m in self._mats]

    def raw(self):
        return self._mats

    def _inv_mats(self):
        if self._inverses is None:
            self._inverses = [FpMatrix(self.p, m).inverse().a for m in self._mats]
        return self._inverses

    def validate(self, seed=0, samples=12, length=8):
        """Spot-check multiplicativity on random relations of the group."""
        rng = random.Random(seed)
        k = len(self.group.gens)
        if k == 0:
            return True
        for _ in range(samples):
            word = tuple(rng.randrange(1, k + 1)
                         for _ in range(rng.randrange(1, length)))
            g = self.group.evaluate_word(word)
            direct = self._eval_word(word)
            via_sift = evaluate(self, g).a
            if (direct != via_sift).any():
                raise AssertionError("representation violates a group relation")
        return True

    def _eval_word(self, word):
        acc = np.eye(self.dim, dtype=np.int64)
        invs = None
        for x in word:
            if x > 0:
                acc = (acc @ self._mats[x - 1]) % self.p
            else:
                if invs is None:
                    invs = self._inv_mats()
                acc = (acc @ invs[-x - 1]) % self.p
        return acc

    def __repr__(self):
        return (f"MatRep(dim={self.dim}, p={self.p}, "
                f"group order {self.group.order})")

    def to_text(self):
        lines = [f"matrep p={self.p} dim={self.dim} gens={len(self._mats)}"]
        for m in self.matrices:
            lines.append(m.to_text().rstrip("\n"))
        return "\n".join(lines) + "\n"


def parse_matrep_raw(text, filename="<string>"):
    """Parse a matrep file without a group: (p, dim, list of FpMatrix)."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    import re
    if idx >= len(lines):
        raise ParseError(filename, 1, "empty representation file")
    m = re.fullmatch(r"matrep\s+p=(\d+)\s+dim=(\d+)\s+gens=(\d+)",
                     lines[idx].strip())
    if not m:
        raise ParseError(filename, idx + 1, f"bad matrep header {lines[idx]!r}")
    p, dim, ngens = int(m.group(1)), int(m.group(2)), int(m.group(3))
    mats = []
    idx += 1
    for _ in range(ngens):
        while idx < len(lines) and not lines[idx].strip():
            idx += 1
        try:
            mat, idx = _parse_fpmat_block(lines, idx)
        except ValueError as e:
            raise ParseError(filename, idx + 1, str(e)) from e
        if mat.rows != dim or mat.cols != dim or mat.p != p:
            raise ParseError(filename, idx, "matrix block does not match header")
        mats.append(mat)
    return p, dim, mats


def parse_matrep(text, group, filename="<string>"):
    p, _dim, mats = parse_matrep_raw(text, filename=filename)
    return MatRep(group, p, mats)


# -- constructions -----------------------------------------------------------


def perm_rep(action, p):
    """The permutation module of an action over F_p (0/1 matrices)."""
    mats = []
    for im in action.gen_images:
        m = np.zeros((action.n, action.n), dtype=np.int64)
        for i, j in enumerate(im):
            m[i, j] = 1
        mats.append(m)
    rep = MatRep(action.group, p, mats, check=False, dim=action.n)
    rep.action = action
    return rep


def evaluate(rep, g):
    """The matrix of an arbitrary group element, via its sift word."""
    member, word = rep.group.sift(g)
    if not member:
        raise ValueError("element is not a member of the representation's group")
    return FpMatrix(rep.p, rep._eval_word(word))


def element_matrices(rep, bound=10 ** 4):
    """All element matrices of a small group, by orbit closure."""
    if rep.group.order > bound:
        raise BoundExceeded(f"group order {rep.group.order} exceeds {bound}")
    ident = rep.group.identity
    table = {ident: np.eye(rep.dim, dtype=np.int64)}
    frontier = [ident]
    while frontier:
        g = frontier.pop()
        mg = table[g]
        for s, ms in zip(rep.group.gens, rep._mats):
            h = g * s
            if h not in table:
                table[h] = (mg @ ms) % rep.p
                frontier.append(h)
    return table


def restrict(rep, H):
    """Restriction to a subgroup, re-anchored to the subgroup's generators."""
    if not isinstance(H, Subgroup):
        raise ValueError("restrict expects a Subgroup")
    mats = [evaluate(rep, h).a for h in H.gens]
    return MatRep(H.group, rep.p, mats, check=False, dim=rep.dim)


def induce(rep, G):
    """Induction to an overgroup along a fixed right transversal."""
    H = Subgroup(G, rep.group.gens)  # verifies containment
    reps = right_transversal(G, H)
    n = len(reps)
    d = rep.dim
    lookup = {}
    from .permgrp import canonical_coset_rep
    for i, t in enumerate(reps):
        lookup[canonical_coset_rep(H, t).images] = i
    mats = []
    for s in G.gens:
        m = np.zeros((n * d, n * d), dtype=np.int64)
        for i, t in enumerate(reps):
            ts = t * s
            j = lookup[canonical_coset_rep(H, ts).images]
            h = ts * reps[j].inverse()
            block = evaluate(rep, h).a
            m[i * d:(i + 1) * d, j * d:(j + 1) * d] = block
        mats.append(m)
    return MatRep(G, rep.p, mats, check=False, dim=n * d)


def dual(rep):
    """The k-dual: matrices become inverse transposes."""
    mats = [m.T.copy() for m in rep._inv_mats()]
    return MatRep(rep.group, rep.p, mats, check=False, dim=rep.dim)


def tensor_linear(rep, char):
    """Twist by a linear character: scale each generator matrix."""
    if char.group is not rep.group:
        raise ValueError("character is defined on a different group")
    mats = [(v * m) % rep.p for v, m in zip(char.gen_values, rep._mats)]
    return MatRep(rep.group, rep.p, mats, check=False, dim=rep.dim)


def direct_sum(rep_a, rep_b):
    if rep_a.group is not rep_b.group or rep_a.p != rep_b.p:
        raise ValueError("direct sum needs representations of one group over one field")
    mats = meataxe.direct_sum(rep_a.raw(), rep_a.dim, rep_b.raw(), rep_b.dim, rep_a.p)
    return MatRep(rep_a.group, rep_a.p, mats, check=False,
                  dim=rep_a.dim + rep_b.dim)


# -- submodules and constituents ----------------------------------------------


def spin(rep, seeds):
    """Smallest subspace containing the seed rows, stable under the action."""
    if isinstance(seeds, FpMatrix):
        seeds = seeds.a
    seeds = np.atleast_2d(np.asarray(seeds, dtype=np.int64))
    if seeds.shape[1] != rep.dim:
        raise ValueError("seed rows have the wrong length")
    basis = meataxe.spin(seeds, rep.raw(), rep.dim, rep.p)
    return FpMatrix(rep.p, basis)


def submodule_rep(rep, basis):
    """The action on a stable row space (rows echelonized first)."""
    if isinstance(basis, FpMatrix):
        basis = basis.a
    red, rank, piv = _rref_array(np.asarray(basis, dtype=np.int64), rep.p)
    mats = meataxe.submodule_action(rep.raw(), red[:rank], piv, rep.p)
    sub = MatRep(rep.group, rep.p, mats, check=False, dim=rank)
    sub.basis = FpMatrix(rep.p, red[:rank])
    return sub


def quotient_rep(rep, basis):
    """The action on the quotient by a stable row space."""
    if isinstance(basis, FpMatrix):
        basis = basis.a
    red, rank, piv = _rref_array(np.asarray(basis, dtype=np.int64), rep.p)
    mats, comp = meataxe.quotient_action(rep.raw(), red[:rank], piv, rep.p, rep.dim)
    quo = MatRep(rep.group, rep.p, mats, check=False, dim=rep.dim - rank)
    quo.complement_coords = comp
    return quo


class Constituents:
    """Irreducible constituents with multiplicities; dims sum to the input."""

    def __init__(self, items, total_dim):
        self.items = list(items)  # (MatRep, multiplicity)
        self.total_dim = total_dim
        if sum(r.dim * m for r, m in self.items) != total_dim:
            raise AssertionError("constituent dimensions do not sum up")

    def dims(self):
        """Sorted multiset of constituent dimensions, with multiplicity."""
        out = []
        for r, m in self.items:
            out.extend([r.dim] * m)
        return sorted(out)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __repr__(self):
        inner = " + ".join(f"{m}x{r.dim}" for r, m in self.items)
        return f"Constituents({inner})"


def chop(rep, seed=0):
    """Irreducible constituents of a module, via the MeatAxe."""
    simples = meataxe.chop(rep.raw(), rep.dim, rep.p, seed=seed)
    items = [(MatRep(rep.group, rep.p, s.mats, check=False, dim=s.dim),
              s.multiplicity) for s in simples]
    return Constituents(items, rep.dim)


def hom_space(rep_a, rep_b):
    """Basis of module homomorphisms rep_a -> rep_b as matrices."""
    _check_compatible(rep_a, rep_b)
    homs = meataxe.hom_space(rep_a.raw(), rep_a.dim, rep_b.raw(), rep_b.dim,
                             rep_a.p)
    return [FpMatrix(rep_a.p, h) for h in homs]


def is_isomorphic(rep_a, rep_b, seed=0):
    """An invertible intertwiner or None; raises Inconclusive when the hom
    space is too large for a certified negative."""
    _check_compatible(rep_a, rep_b)
    if rep_a.dim != rep_b.dim:
        return None
    h = meataxe.is_isomorphic(rep_a.raw(), rep_b.raw(), rep_a.dim, rep_a.p,
                              seed=seed)
    return None if h is None else FpMatrix(rep_a.p, h)


def _check_compatible(rep_a, rep_b):
    if rep_a.p != rep_b.p:
        raise ValueError("representations live over different fields")
    if rep_a.group is not rep_b.group:
        ga, gb = rep_a.group, rep_b.group
        if ga.degree != gb.degree or ga.gens != gb.gens:
            raise ValueError("representations belong to different groups")


# -- series -------------------------------------------------------------------


class SeriesReport:
    """Semisimple layers of a filtration; dims sum to the module dimension."""

    def __init__(self, layers, total_dim):
        self.layers = list(layers)
        self.total_dim = total_dim
        if sum(c.total_dim for c in self.layers) != total_dim:
            raise AssertionError("series layers do not fill the module")

    def layer_dims(self):
        return [c.total_dim for c in self.layers]

    def __repr__(self):
        return f"SeriesReport(layers={self.layer_dims()})"


def radical_series(rep, seed=0):
    """Radical filtration, reported top layer first.

    rad(M) is the intersection of the kernels of all homomorphisms onto
    the simples found by chop(M); each layer is chopped and certified
    semisimple by having a zero radical.
    """
    layers = []
    cur = rep
    guard = rep.dim + 1
    while cur.dim > 0 and guard:
        guard -= 1
        rad_rows = meataxe.radical(cur.raw(), cur.dim, cur.p, seed=seed)
        layer = quotient_rep(cur, rad_rows) if rad_rows.shape[0] else cur
        layers.append(chop(layer, seed=seed))
        if rad_rows.shape[0] == 0:
            break
        cur = submodule_rep(cur, rad_rows)
    return SeriesReport(layers, rep.dim)


def socle_series(rep, seed=0):
    """Socle filtration, reported bottom layer first.

    Computed as the dual of the radical series of the dual module; each
    reported layer is the dual of the corresponding radical layer.
    """
    rad = radical_series(dual(rep), seed=seed)
    layers = []
    for cons in rad.layers:
        items = [(dual(simple), mult) for simple, mult in cons]
        layers.append(Constituents(items, cons.total_dim))
    return SeriesReport(layers, rep.dim)


# -- direct sum decomposition --------------------------------------------------


def indecomposable_summands(rep, seed=0):
    """Indecomposable direct summands, each certified (see meataxe).

    The returned MatReps carry a .basis attribute (rows in the ambient
    module); the stacked bases form a change of basis, which is verified.
    """
    if rep.dim > DECOMPOSE_DIM_BOUND:
        raise BoundExceeded(
            f"dimension {rep.dim} exceeds the decomposition bound {DECOMPOSE_DIM_BOUND}")
    pieces = meataxe.indecomposable_summands(rep.raw(), rep.dim, rep.p, seed=seed)
    out = []
    for piece in pieces:
        r = MatRep(rep.group, rep.p, piece.mats, check=False, dim=piece.dim)
        r.basis = FpMatrix(rep.p, piece.basis)
        out.append(r)
    return out


# -- projectivity and vertices --------------------------------------------------


def _solve_trace_equation(twisted_pairs, dim, p, targets):
    """Solve sum_j x_j * (sum_i A_i T_j B_i) = I for given basis maps T_j.

    twisted_pairs is a list of (A_i, B_i) matrix pairs; targets the basis
    endomorphisms. Returns coefficients or None.
    """
    if not targets:
        return None
    cols = []
    for t in targets:
        acc = np.zeros((dim, dim), dtype=np.int64)
        for a, b in twisted_pairs:
            acc = (acc + a @ t @ b) % p
        cols.append(acc.reshape(-1))
    m = np.array(cols, dtype=np.int64).T % p
    rhs = np.eye(dim, dtype=np.int64).reshape(-1)
    aug = np.hstack([m, rhs.reshape(-1, 1)])
    red, rank, piv = _rref_array(aug, p)
    ncols = m.shape[1]
    if any(c == ncols for c in piv):
        return None  # inconsistent
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red[i, ncols]
    return x


def is_projective(rep):
    """Higman's criterion, tested over a Sylow p-subgroup.

    A module is projective over the whole group iff its restriction to a
    Sylow p-subgroup is projective there; the criterion asks for an
    endomorphism whose trace sum over the p-group is the identity.
    """
    if rep.group.order > PROJECTIVITY_GROUP_BOUND:
        raise BoundExceeded(
            f"group order {rep.group.order} exceeds the projectivity bound")
    P = sylow(rep.group, rep.p)
    if P.order == 1:
        return True
    res = restrict(rep, P)
    table = element_matrices(res)
    pairs = []
    for g, mg in table.items():
        inv = table[g.inverse()]
        pairs.append((inv, mg))
    x = _solve_trace_equation(pairs, rep.dim, rep.p,
                              _endo_basis_full(rep.dim))
    return x is not None


def _endo_basis_full(dim):
    out = []
    for i in range(dim):
        for j in range(dim):
            m = np.zeros((dim, dim), dtype=np.int64)
            m[i, j] = 1
            out.append(m)
    return out


def relatively_projective(rep, Q):
    """Higman's relative criterion: is the identity a trace from Q?

    Looks for a Q-equivariant endomorphism phi with
    sum over a right transversal of Q of conj(t^-1) phi conj(t) = identity.
    """
    G = rep.group
    res_q = restrict(rep, Q)
    endos = meataxe.hom_space(res_q.raw(), res_q.dim, res_q.raw(), res_q.dim,
                              rep.p)
    if not endos:
        return False
    transversal = right_transversal(G, Q)
    pairs = []
    for t in transversal:
        mt = evaluate(rep, t).a
        mt_inv = evaluate(rep, t.inverse()).a
        pairs.append((mt_inv, mt))
    x = _solve_trace_equation(pairs, rep.dim, rep.p, endos)
    return x is not None


def _subgroups_of_p_group(P, bound=243):
    """All subgroups of a small p-group, by single-generator extensions."""
    if P.order > bound:
        raise BoundExceeded(f"p-group of order {P.order} exceeds {bound}")
    elements = list(P.group.elements())
    seen = {}
    trivial = Subgroup(P.parent, [])
    seen[frozenset([P.parent.identity])] = trivial
    frontier = [trivial]
    while frontier:
        S = frontier.pop()
        for x in elements:
            if x in S:
                continue
            T = Subgroup(P.parent, list(S.gens) + [x])
            key = frozenset(T.group.elements())
            if key not in seen:
                seen[key] = T
                frontier.append(T)
    return list(seen.values())


def p_subgroup_classes(G, p, seed=0):
    """Conjugacy class representatives of p-subgroups, ascending order."""
    from .permgrp import conjugating_element
    P = sylow(G, p, seed=seed)
    subs = _subgroups_of_p_group(P)
    classes = []
    for S in sorted(subs, key=lambda s: s.order):
        if any(S.order == C.order and
               conjugating_element(G, S, C) is not None for C in classes):
            continue
        classes.append(S)
    return classes


def vertex(rep, seed=0):
    """A vertex: minimal p-subgroup relative to which the module is projective.

    Tests conjugacy class representatives of p-subgroups in ascending
    order; for an indecomposable module the first success is the vertex.
    """
    if rep.group.order > PROJECTIVITY_GROUP_BOUND:
        raise BoundExceeded(
            f"group order {rep.group.order} exceeds the vertex bound")
    for Q in p_subgroup_classes(rep.group, rep.p, seed=seed):
        if relatively_projective(rep, Q):
            return Q
    raise AssertionError("no relatively projective subgroup found; "
                         "the Sylow subgroup must always work")

"""Fixed points, relative traces, Brauer quotients and Green correspondents.

For a module V over kG and a p-subgroup P, the Brauer quotient V(P) is the
quotient of the P-fixed points by the sum of the images of the relative
trace maps from proper subgroups of P; it carries an action of the
normalizer N_G(P). Only maximal subgroups of P need to be traced, since
trace maps compose transitively along subgroup chains.

For modules with a basis permuted by P the quotient is realized directly
on the fixed basis vectors; when the basis is N_G(P)-stable this shortcut
is an isomorphism of N_G(P)-modules and, for an indecomposable trivial
source module with vertex P, computes the Green correspondent
(Broue-Puig, "Modules et groupes finis", 1985).
"""

import numpy as np

from . import meataxe
from .errors import BoundExceeded, Inconclusive
from .ffla import FpMatrix, _rref_array, nullspace, row_space
from .modrep import (MatRep, _subgroups_of_p_group, evaluate,
                     indecomposable_summands, is_projective, perm_rep,
                     quotient_rep, restrict, vertex)
from .permgrp import (DEFAULT_BOUND, PermAction, Subgroup, coset_action,
                      fusion_data, normalizer, right_transversal)


def fixed_points(rep, K):
    """Row basis of V^K, the joint fixed space of the generators of K."""
    gens = K.gens if isinstance(K, (Subgroup,)) else list(K)
    if not gens:
        return FpMatrix(rep.p, np.eye(rep.dim, dtype=np.int64))
    blocks = []
    for k in gens:
        m = evaluate(rep, k).a
        blocks.append((m - np.eye(rep.dim, dtype=np.int64)) % rep.p)
    stacked = np.hstack(blocks)
    return nullspace(FpMatrix(rep.p, stacked.T))


def relative_trace(rep, Q, P, subspace):
    """Image of a Q-fixed subspace under the trace map into V^P.

    The trace sums the translates over a right transversal of Q in P.
    """
    for q in Q.gens:
        if q not in P.group:
            raise ValueError("Q is not contained in P")
    if isinstance(subspace, FpMatrix):
        rows = subspace.a
    else:
        rows = np.atleast_2d(np.asarray(subspace, dtype=np.int64)) % rep.p
    for k in Q.gens:
        m = evaluate(rep, k).a
        if ((rows @ m) % rep.p != rows).any():
            raise ValueError("subspace is not Q-fixed")
    transversal = right_transversal(P.group, Subgroup(P.group, Q.gens))
    total = np.zeros((rep.dim, rep.dim), dtype=np.int64)
    for t in transversal:
        total = (total + evaluate(rep, t).a) % rep.p
    return row_space(FpMatrix(rep.p, (rows @ total) % rep.p))


def maximal_subgroups(P):
    """The maximal subgroups of a small p-group (index p)."""
    if P.order == 1:
        return []
    p = _prime_of(P.order)
    subs = _subgroups_of_p_group(P)
    return [S for S in subs if S.order * p == P.order]


def _prime_of(n):
    for q in range(2, n + 1):
        if n % q == 0:
            return q
    raise ValueError("trivial group has no prime")


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


class BrauerQuotient:
    """The quotient of the P-fixed points by the traced subspace.

    fixed_basis and traced_subspace are row spaces in ambient coordinates;
    brauer_map is the projection matrix from fixed-basis coordinates onto
    quotient coordinates; quotient_rep carries the N_G(P)-action.
    """

    def __init__(self, normalizer_subgroup, quotient_rep, fixed_basis,
                 traced_subspace, brauer_map):
        self.normalizer = normalizer_subgroup
        self.quotient_rep = quotient_rep
        self.fixed_basis = fixed_basis
        self.traced_subspace = traced_subspace
        self.brauer_map = brauer_map

    @property
    def dim(self):
        return self.quotient_rep.dim

    def __repr__(self):
        return (f"BrauerQuotient(dim={self.dim}, fixed={self.fixed_basis.rows}, "
                f"traced={self.traced_subspace.rows})")


def brauer_quotient(rep, P, N=None):
    """The Brauer quotient V(P) with its normalizer action.

    The traced subspace sums the relative traces from the maximal
    subgroups of P only; smaller subgroups are redundant by transitivity
    of the trace maps.
    """
    if not _is_p_power(P.order, rep.p):
        raise ValueError(
            f"P has order {P.order}, not a power of the field characteristic {rep.p}")
    if N is None:
        N = normalizer(rep.group, P)
    else:
        for n in N.gens:
            for k in P.gens:
                if k.conjugate(n) not in P:
                    raise ValueError("N does not normalize P")
    fixed = fixed_points(rep, P)
    f = fixed.rows
    piv_f = list(_rref_array(fixed.a, rep.p)[2])
    traced_rows = np.zeros((0, rep.dim), dtype=np.int64)
    for Q in maximal_subgroups(P):
        fq = fixed_points(rep, Q)
        img = relative_trace(rep, Q, P, fq)
        traced_rows = np.vstack([traced_rows, img.a])
    traced = row_space(FpMatrix(rep.p, traced_rows))
    # traced subspace must lie inside the fixed space
    for row in traced.a:
        if _residue(row, fixed.a, piv_f, rep.p).any():
            raise AssertionError("traced subspace escapes the fixed space")
    # express traced in fixed coordinates and pass to the quotient
    t_coords = traced.a[:, piv_f] % rep.p
    coord_mats = []
    for n in N.gens:
        m = evaluate(rep, n).a
        fm = (fixed.a @ m) % rep.p
        for row in fm:
            if _residue(row, fixed.a, piv_f, rep.p).any():
                raise AssertionError("normalizer does not stabilize the fixed space")
        coord_mats.append(fm[:, piv_f] % rep.p)
    red, rank, piv_t = _rref_array(t_coords, rep.p)
    quo_mats, comp = meataxe.quotient_action(coord_mats, red[:rank], piv_t,
                                             rep.p, f)
    quot = MatRep(N.group, rep.p, quo_mats, check=False, dim=f - rank)
    eye = np.eye(f, dtype=np.int64)
    reduced = (eye - eye[:, piv_t] @ red[:rank]) % rep.p if rank else eye
    brauer_map = FpMatrix(rep.p, reduced[:, comp])
    return BrauerQuotient(N, quot, fixed, traced, brauer_map)


def _residue(row, basis, pivots, p):
    row = row % p
    for i, c in enumerate(pivots):
        if row[c]:
            row = (row - row[c] * basis[i]) % p
    return row


# -- fixed points of coset actions ---------------------------------------------


class FixedPointPart:
    """One transport part of a fixed-point set: (K_i, g_i, orbit points)."""

    def __init__(self, subgroup, conjugator, points, size):
        self.subgroup = subgroup
        self.conjugator = conjugator
        self.points = points
        self.size = size


class FixedPointReport:
    """Fixed points of K on a coset space with their normalizer action."""

    def __init__(self, points, labels, parts, action, normalizer_subgroup):
        self.points = points
        self.labels = labels
        self.parts = parts
        self.action = action
        self.normalizer = normalizer_subgroup

    @property
    def size(self):
        return len(self.points)

    def __repr__(self):
        return (f"FixedPointReport(size={self.size}, "
                f"parts={[p.size for p in self.parts]})")


def perm_fixed_points(G, H, K, fusion=None, bound=DEFAULT_BOUND):
    """The K-fixed cosets of H\\G as a module datum for N_G(K).

    Decomposes the fixed points into one part per fusion representative;
    part i is the N_G(K)-orbit of the coset of the conjugator g_i and has
    size [N_G(K) : N_H(K_i)]. The marks formula total is verified against
    the direct fixed-point count.
    """
    if fusion is None:
        fusion = fusion_data(G, H, K, bound=bound)
    N = fusion.normalizer_of_K
    act = coset_action(G, H)
    fixed = act.fixed_points(K)
    if fusion.t == 0:
        if fixed:
            raise AssertionError("no fusion but fixed points exist")
        empty = PermAction(N.group, 0, [()] * len(N.group.gens))
        return FixedPointReport([], [], [], empty, N)
    expected = 0
    part_sizes = []
    for K_i, g_i in fusion.reps:
        NH = normalizer(H.group, K_i, bound=bound)
        size = N.order // NH.order
        part_sizes.append(size)
        expected += size
    if expected != len(fixed):
        raise AssertionError(
            f"marks formula gives {expected} but {len(fixed)} cosets are fixed")
    index_of = {pt: i for i, pt in enumerate(fixed)}
    images = []
    for n in N.gens:
        im = act.act(n)
        images.append(tuple(index_of[im[pt]] for pt in fixed))
    sub_action = PermAction(N.group, len(fixed), images,
                            labels=[act.label(pt) for pt in fixed])
    parts = []
    from .permgrp import canonical_coset_rep, orbit as action_orbit
    for (K_i, g_i), size in zip(fusion.reps, part_sizes):
        base = act.coset_lookup[canonical_coset_rep(H, g_i.inverse()).images]
        orb, _ = action_orbit(sub_action, index_of[base])
        if len(orb) != size:
            raise AssertionError("part orbit size disagrees with the marks formula")
        parts.append(FixedPointPart(K_i, g_i, [fixed[i] for i in orb], size))
    covered = sorted(pt for part in parts for pt in part.points)
    if covered != sorted(fixed):
        raise AssertionError("parts do not partition the fixed points")
    return FixedPointReport(fixed, [act.label(pt) for pt in fixed],
                            parts, sub_action, N)


def marks_count(G, H, K, bound=DEFAULT_BOUND):
    """|Omega^K| by the marks formula: sum of |N_G(K)| / |N_H(K_i)|."""
    fusion = fusion_data(G, H, K, bound=bound)
    N = fusion.normalizer_of_K
    total = 0
    for K_i, _g_i in fusion.reps:
        NH = normalizer(H.group, K_i, bound=bound)
        total += N.order // NH.order
    return total


def report_from_parts(N_group, part_subgroups):
    """Assemble the fixed-point action from supplied subgroups of N.

    Used when the ambient coset space is out of reach: each subgroup U
    contributes the coset action of N on U\\N as one part. Fusion data
    (K_i, g_i) is not available in this mode and is recorded as None.
    """
    actions = [coset_action(N_group, U) for U in part_subgroups]
    total = sum(a.n for a in actions)
    images = []
    for j in range(len(N_group.gens)):
        im = []
        offset = 0
        for a in actions:
            im.extend(offset + q for q in a.gen_images[j])
            offset += a.n
        images.append(tuple(im))
    labels = []
    for i, a in enumerate(actions):
        labels.extend(f"part{i + 1}:{a.label(q)}" for q in range(a.n))
    action = PermAction(N_group, total, images, labels=labels)
    parts = []
    offset = 0
    for U, a in zip(part_subgroups, actions):
        parts.append(FixedPointPart(U, None, list(range(offset, offset + a.n)),
                                    a.n))
        offset += a.n
    N_sub = Subgroup(N_group, N_group.gens)
    return FixedPointReport(list(range(total)), labels, parts, action, N_sub)


# -- green correspondents --------------------------------------------------------


def green_trivial_source(V, P, N):
    """Brauer quotient along a permuted basis; the trivial-source shortcut.

    Requires the standard basis of V to be permuted by P (checked). When
    the basis is N-stable as well, V(P) is realized as the permutation
    module on the fixed basis vectors; otherwise the generic quotient
    construction is used. For an indecomposable trivial source module
    with vertex P the result is the Green correspondent.
    """
    p_perms = []
    for k in P.gens:
        m = evaluate(V, k).a
        perm = _as_permutation(m)
        if perm is None:
            raise ValueError("the designated basis is not P-stable")
        p_perms.append(perm)
    n_perms = []
    for n in N.gens:
        perm = _as_permutation(evaluate(V, n).a)
        if perm is None:
            n_perms = None
            break
        n_perms.append(perm)
    if n_perms is None:
        return brauer_quotient(V, P, N).quotient_rep
    fixed = [i for i in range(V.dim) if all(pm[i] == i for pm in p_perms)]
    index_of = {pt: i for i, pt in enumerate(fixed)}
    images = []
    for perm in n_perms:
        images.append(tuple(index_of[perm[i]] for i in fixed))
    action = PermAction(N.group, len(fixed), images,
                        labels=[str(i + 1) for i in fixed])
    return perm_rep(action, V.p)


def _as_permutation(m):
    n = m.shape[0]
    perm = [0] * n
    for i in range(n):
        nz = np.nonzero(m[i])[0]
        if nz.size != 1 or m[i, nz[0]] != 1:
            return None
        perm[i] = int(nz[0])
    if sorted(perm) != list(range(n)):
        return None
    return perm


def green_correspondent(V, P, N, seed=0):
    """The Green correspondent of an indecomposable module with vertex P.

    Restricts to N, decomposes, and returns the unique summand with
    vertex P; every discarded summand is certified to have a strictly
    smaller vertex (projectivity shortcut first, then a vertex
    computation).
    """
    from .modrep import PROJECTIVITY_GROUP_BOUND
    if V.group.order <= PROJECTIVITY_GROUP_BOUND:
        vx = vertex(V, seed=seed)
        if vx.order != P.order:
            raise ValueError(
                f"input has vertex of order {vx.order}, expected {P.order}")
    res = restrict(V, N)
    summands = indecomposable_summands(res, seed=seed)
    candidates = []
    for s in summands:
        if is_projective(s):
            if P.order == 1:
                candidates.append(s)
            continue
        vx = vertex(s, seed=seed)
        if vx.order == P.order:
            candidates.append(s)
        elif vx.order > P.order:
            raise Inconclusive(
                "a summand has a larger vertex than the input; "
                "the input was not an indecomposable module with vertex P")
    if len(candidates) != 1:
        raise Inconclusive(
            f"expected a unique summand with vertex of order {P.order}, "
            f"found {len(candidates)}")
    return candidates[0]

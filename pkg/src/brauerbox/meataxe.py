"""MeatAxe-style algebra machinery on raw matrices over F_p.

Everything here works with a list of square numpy int64 matrices generating
a matrix algebra (no group structure needed); the group-aware wrappers live
in modrep. Submodules are row spaces in reduced echelon form.

Splitting follows the classic recipe: draw a random algebra element, factor
its minimal polynomial, spin up kernel vectors of an irreducible factor,
and either split or certify irreducibility with Norton's criterion (kernel
vectors on both the module and its transpose). With an irreducible factor
of minimal nullity one vector per side suffices; otherwise all kernel
vectors up to scalar are exhausted, which keeps the certificate exact.
"""

import random

import numpy as np

from .errors import Inconclusive
from .ffla import Echelon, FpMatrix, FpPoly, min_poly, factor_poly, nullspace, _rref_array

CHOP_TRIES = 50
CHOP_WORD_LEN = 12
FITTING_ROUNDS = 25
ENDO_CERT_LIMIT = 64
PROJECTIVE_ENUM_LIMIT = 250


def identity_mats(p, dim):
    return np.eye(dim, dtype=np.int64) % p


def random_algebra_element(mats, dim, p, rng, max_len=CHOP_WORD_LEN, terms=3):
    """A random element of the generated algebra: a small sum of random
    words in the generators with random nonzero coefficients."""
    total = np.zeros((dim, dim), dtype=np.int64)
    for _ in range(terms):
        w = np.eye(dim, dtype=np.int64)
        for _ in range(rng.randrange(1, max_len + 1)):
            w = (w @ mats[rng.randrange(len(mats))]) % p
        total = (total + rng.randrange(1, p) * w) % p
    if rng.randrange(2):
        total = (total + rng.randrange(1, p) * np.eye(dim, dtype=np.int64)) % p
    return total


def spin(seeds, mats, dim, p):
    """Smallest subspace containing the seed rows and stable under mats.

    Returns the echelonized basis as a 2-d array (possibly with 0 rows).
    """
    ech = Echelon(p, dim)
    seeds = np.atleast_2d(np.asarray(seeds, dtype=np.int64)) % p
    queue = [v for v in seeds if ech.add(v)]
    while queue:
        v = queue.pop()
        for m in mats:
            w = (v @ m) % p
            if ech.add(w):
                queue.append(w)
    return ech.rows.copy()


def submodule_action(mats, basis, pivots, p):
    """Action matrices on a stable row space given by an rref basis."""
    piv = list(pivots)
    out = []
    for m in mats:
        rows = (basis @ m) % p
        out.append(rows[:, piv] % p)
    return out


def quotient_action(mats, basis, pivots, p, dim):
    """Action matrices on the quotient by a stable row space."""
    piv = list(pivots)
    comp = [c for c in range(dim) if c not in set(piv)]
    out = []
    for m in mats:
        rows = m[comp, :] % p
        rows = (rows - rows[:, piv] @ basis) % p
        out.append(rows[:, comp] % p)
    return out, comp


def perp_of_transpose_submodule(basis, dim, p):
    """Orthogonal complement of a transpose-module row space; a submodule."""
    if basis.shape[0] == 0:
        return np.eye(dim, dtype=np.int64)
    return nullspace(FpMatrix(p, basis)).a.copy()


class Simple:
    """An irreducible constituent: matrices plus multiplicity bookkeeping."""

    def __init__(self, mats, dim, p):
        self.mats = mats
        self.dim = dim
        self.p = p
        self.multiplicity = 1


def chop(mats, dim, p, seed=0, tries=CHOP_TRIES, word_len=CHOP_WORD_LEN):
    """Irreducible constituents with multiplicities.

    Returns a list of Simple objects, pairwise non-isomorphic; the sum of
    dim * multiplicity equals the input dimension.
    """
    rng = random.Random(seed)
    simples = []
    stack = [(list(mats), dim)]
    while stack:
        cur_mats, cur_dim = stack.pop()
        if cur_dim == 0:
            continue
        verdict = _split_or_certify(cur_mats, cur_dim, p, rng, tries, word_len)
        if verdict is None:
            _record_simple(simples, cur_mats, cur_dim, p, rng)
        else:
            stack.extend(verdict)
    simples.sort(key=lambda s: s.dim)
    return simples


def _record_simple(simples, mats, dim, p, rng):
    for s in simples:
        if s.dim == dim:
            iso = is_isomorphic(s.mats, mats, dim, p,
                                seed=rng.randrange(2 ** 32))
            if iso is not None:
                s.multiplicity += 1
                return
    simples.append(Simple(mats, dim, p))


def _split_on(mats, dim, p, basis):
    """Split along a proper nonzero submodule basis (rref rows)."""
    red, rank, piv = _rref_array(basis, p)
    basis = red[:rank]
    sub = submodule_action(mats, basis, piv, p)
    quo, _ = quotient_action(mats, basis, piv, p, dim)
    return [(sub, rank), (quo, dim - rank)]


def _split_or_certify(mats, dim, p, rng, tries, word_len):
    """Return split pieces, or None when irreducibility is certified."""
    if dim == 1:
        return None
    if not mats:
        # trivial algebra: any coordinate subspace is a submodule
        basis = np.zeros((1, dim), dtype=np.int64)
        basis[0, 0] = 1
        return _split_on(mats, dim, p, basis)
    mats_t = [m.T.copy() for m in mats]
    for attempt in range(tries):
        theta = random_algebra_element(mats, dim, p, rng, max_len=word_len)
        f = min_poly(FpMatrix(p, theta))
        if f.degree < 1:
            continue
        factors = factor_poly(f, seed=rng.randrange(2 ** 32))
        # low degree first; minimal nullity is checked per factor below
        factors.sort(key=lambda t: (t[0].degree, t[1]))
        for q, _mult in factors:
            e_mat = q.eval_matrix(FpMatrix(p, theta))
            # rows act from the left, so the module-side kernel is the left kernel
            kernel = nullspace(e_mat.transpose()).a
            if kernel.shape[0] == 0:
                continue
            w = kernel[0]
            s = spin(w, mats, dim, p)
            if s.shape[0] < dim:
                return _split_on(mats, dim, p, s)
            kernel_t = nullspace(e_mat).a
            if kernel.shape[0] == q.degree:
                # minimal nullity: one vector on each side decides
                st = spin(kernel_t[0], mats_t, dim, p)
                if st.shape[0] < dim:
                    return _split_on(mats, dim, p,
                                     perp_of_transpose_submodule(st, dim, p))
                return None
            # general case: try every kernel vector up to scalars
            split = _norton_exhaustive(mats, mats_t, dim, p, kernel, kernel_t)
            if split is IRREDUCIBLE:
                return None
            if split is not None:
                return _split_on(mats, dim, p, split)
            # too many kernel vectors to exhaust: resample theta
    raise Inconclusive(
        f"chop could not split or certify a {dim}-dimensional module "
        f"after {tries} attempts")


def _projective_vectors(kernel, p):
    """All nonzero row-space vectors of the kernel, one per scalar class."""
    k = kernel.shape[0]
    count = (p ** k - 1) // (p - 1)
    if count > PROJECTIVE_ENUM_LIMIT:
        return None
    vecs = []

    def rec(i, acc, leading_seen):
        if i == k:
            if leading_seen:
                vecs.append(acc % p)
            return
        if not leading_seen:
            rec(i + 1, acc, False)
            rec(i + 1, (acc + kernel[i]) % p, True)
        else:
            for c in range(p):
                rec(i + 1, (acc + c * kernel[i]) % p, True)

    rec(0, np.zeros(kernel.shape[1], dtype=np.int64), False)
    return vecs


IRREDUCIBLE = object()


def _norton_exhaustive(mats, mats_t, dim, p, kernel, kernel_t):
    """Norton's criterion without the minimal-nullity shortcut.

    Returns a proper submodule basis if one is found, the IRREDUCIBLE
    sentinel if every kernel vector on both sides spins up to the whole
    space, or None when the kernel is too large to enumerate.
    """
    vecs = _projective_vectors(kernel, p)
    vecs_t = _projective_vectors(kernel_t, p)
    if vecs is None or vecs_t is None:
        return None
    for v in vecs:
        s = spin(v, mats, dim, p)
        if s.shape[0] < dim:
            return s
    for v in vecs_t:
        st = spin(v, mats_t, dim, p)
        if st.shape[0] < dim:
            return perp_of_transpose_submodule(st, dim, p)
    return IRREDUCIBLE


# -- hom spaces ---------------------------------------------------------------


HOM_DIM_LIMIT = 4096


def hom_space(mats_a, dim_a, mats_b, dim_b, p):
    """Basis of intertwiners X with A_g X = X B_g for all generators g.

    X is dim_a x dim_b, acting on row vectors from the right. Constraints
    are imposed generator by generator on a shrinking coefficient space.
    """
    if dim_a * dim_b > HOM_DIM_LIMIT:
        from .errors import BoundExceeded
        raise BoundExceeded(
            f"hom space of {dim_a}x{dim_b} matrices exceeds the dense solver limit")
    n = dim_a * dim_b
    if dim_a == 0 or dim_b == 0:
        return []
    basis = None  # rows of the current solution space, as vectors of length n
    eye_a = np.eye(dim_a, dtype=np.int64)
    eye_b = np.eye(dim_b, dtype=np.int64)
    for ma, mb in zip(mats_a, mats_b):
        c = (np.kron(ma, eye_b) - np.kron(eye_a, mb.T)) % p
        if basis is None:
            basis = nullspace(FpMatrix(p, c)).a
        else:
            if basis.shape[0] == 0:
                break
            constraint = (c @ basis.T) % p
            y = nullspace(FpMatrix(p, constraint)).a
            basis = (y @ basis) % p
    if basis is None:
        basis = np.eye(n, dtype=np.int64)
    return [basis[i].reshape(dim_a, dim_b) for i in range(basis.shape[0])]


def is_isomorphic(mats_a, mats_b, dim, p, seed=0, random_tries=25):
    """An invertible intertwiner, or None certified by exhaustion.

    Searches single basis intertwiners, random combinations, and for hom
    spaces of dimension <= 4 the full scalar enumeration. Raises
    Inconclusive when the hom space is too large to certify a negative.
    """
    homs = hom_space(mats_a, dim, mats_b, dim, p)
    if not homs:
        return None
    for h in homs:
        if _rank(h, p) == dim:
            return h
    rng = random.Random(seed)
    for _ in range(random_tries):
        x = np.zeros((dim, dim), dtype=np.int64)
        for h in homs:
            x = (x + rng.randrange(p) * h) % p
        if _rank(x, p) == dim:
            return x
    if p ** len(homs) <= 700:
        for combo in _all_combos(len(homs), p):
            x = np.zeros((dim, dim), dtype=np.int64)
            for c, h in zip(combo, homs):
                x = (x + c * h) % p
            if _rank(x, p) == dim:
                return x
        return None
    raise Inconclusive(
        f"hom space dimension {len(homs)} too large for certified non-isomorphism")


def _all_combos(k, p):
    if k == 0:
        return
    combo = [0] * k
    total = p ** k
    for idx in range(1, total):
        rem = idx
        for i in range(k):
            combo[i] = rem % p
            rem //= p
        yield tuple(combo)


def _rank(m, p):
    return _rref_array(np.asarray(m, dtype=np.int64), p)[1]


# -- radicals and decomposition ----------------------------------------------


def radical(mats, dim, p, seed=0):
    """Basis of rad(V): intersection of kernels of all maps onto simples.

    The simples are taken from chop(V); for each, the kernels of all
    intertwiners V -> S are intersected.
    """
    if dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    simples = chop(mats, dim, p, seed=seed)
    ech = None
    current = np.eye(dim, dtype=np.int64)
    for s in simples:
        for f in hom_space(mats, dim, s.mats, s.dim, p):
            ker = nullspace(FpMatrix(p, f.T)).a
            current = _intersect(current, ker, dim, p)
    return current


def _intersect(a, b, dim, p):
    from .ffla import intersect_row_spaces
    return intersect_row_spaces(FpMatrix(p, a), FpMatrix(p, b)).a.copy()


def direct_sum(mats_a, dim_a, mats_b, dim_b, p):
    out = []
    for ma, mb in zip(mats_a, mats_b):
        m = np.zeros((dim_a + dim_b, dim_a + dim_b), dtype=np.int64)
        m[:dim_a, :dim_a] = ma
        m[dim_a:, dim_a:] = mb
        out.append(m)
    return out


class SummandWitness:
    """A direct summand: basis rows in the ambient module plus its action."""

    def __init__(self, basis, mats, dim):
        self.basis = basis
        self.mats = mats
        self.dim = dim


def indecomposable_summands(mats, dim, p, seed=0, rounds=FITTING_ROUNDS):
    """Split into indecomposable direct summands, with certificates.

    Random endomorphisms whose minimal polynomial has coprime factors give
    Fitting splits. A piece is certified indecomposable once its
    endomorphism ring is local (head of the regular module simple); if the
    head is not simple, an idempotent is lifted through the radical by
    Frobenius powering and the split continues. Raises Inconclusive only
    when the endomorphism ring is too large to certify.
    """
    rng = random.Random(seed)
    finished = []
    stack = [SummandWitness(np.eye(dim, dtype=np.int64), list(mats), dim)]
    while stack:
        piece = stack.pop()
        split = _try_split_summand(piece, p, rng, rounds)
        if split is None:
            finished.append(piece)
        else:
            stack.extend(split)
    finished.sort(key=lambda s: s.dim)
    # the concatenated bases must give a change of basis of the ambient space
    if finished:
        total = np.vstack([s.basis for s in finished])
        if total.shape[0] != total.shape[1] or _rank(total, p) != total.shape[0]:
            raise AssertionError("summand bases do not assemble to a basis")
    return finished


def _try_split_summand(piece, p, rng, rounds):
    mats, dim = piece.mats, piece.dim
    if dim <= 1:
        return None
    endos = hom_space(mats, dim, mats, dim, p)
    if len(endos) == 1:
        return None  # End(V) = k, local
    for _ in range(rounds):
        theta = np.zeros((dim, dim), dtype=np.int64)
        for h in endos:
            theta = (theta + rng.randrange(p) * h) % p
        split = _fitting_split(piece, theta, p)
        if split is not None:
            return split
    if len(endos) > ENDO_CERT_LIMIT:
        raise Inconclusive(
            f"endomorphism ring of dimension {len(endos)} exceeds the "
            "certification budget and random Fitting rounds found no split")
    idem = _nontrivial_idempotent(endos, dim, p, rng)
    if idem is None:
        return None  # End(V) is local: certified indecomposable
    return _split_by_idempotent(piece, idem, p)


def _fitting_split(piece, theta, p):
    """Split along coprime factors of the minimal polynomial of theta."""
    f = min_poly(FpMatrix(p, theta))
    if f.degree < 1:
        return None
    factors = factor_poly(f, seed=0)
    if len(factors) < 2:
        return None
    pieces = []
    for q, mult in factors:
        power = q
        for _ in range(mult - 1):
            power = power * q
        e_mat = power.eval_matrix(FpMatrix(p, theta))
        ker = nullspace(e_mat.transpose()).a  # left kernel: rows act from the left
        pieces.append(_restrict_summand(piece, ker, p))
    total = sum(s.dim for s in pieces)
    if total != piece.dim:
        raise AssertionError("fitting split dimensions do not add up")
    return pieces


def _restrict_summand(piece, rows, p):
    """Sub-witness for a stable subspace given by rows (in piece coordinates)."""
    red, rank, piv = _rref_array(rows, p)
    rows = red[:rank]
    mats = submodule_action(piece.mats, rows, piv, p)
    basis = (rows @ piece.basis) % p
    return SummandWitness(basis, mats, rank)


def _split_by_idempotent(piece, e, p):
    image = _row_space(e, p)
    kernel = nullspace(FpMatrix(p, e.T)).a
    return [_restrict_summand(piece, image, p),
            _restrict_summand(piece, kernel, p)]


def _row_space(m, p):
    red, rank, _ = _rref_array(m, p)
    return red[:rank]


def _nontrivial_idempotent(endos, dim, p, rng):
    """A nontrivial idempotent of the endomorphism algebra, or None if local.

    Builds the regular module of End(V), finds its radical, and inspects
    the head. If the head is simple the algebra is local. Otherwise a
    projection onto a proper summand of the head is lifted to an honest
    idempotent by Frobenius powering through the nilpotent radical.
    """
    k = len(endos)
    dim_v = endos[0].shape[0]
    # work in the reduced row basis of the endomorphism space
    flat = np.array([e.reshape(-1) for e in endos], dtype=np.int64)
    red, rank, piv = _rref_array(flat, p)
    if rank != k:
        raise AssertionError("endomorphism basis is degenerate")
    basis_red = red[:rank]
    alg_basis = [basis_red[i].reshape(dim_v, dim_v) for i in range(k)]

    def to_coords(mat):
        return _coords_in_rref(mat.reshape(-1) % p, basis_red, piv, p)

    def from_coords(v):
        out = np.zeros((dim_v, dim_v), dtype=np.int64)
        for c, e in zip(v, alg_basis):
            out = (out + int(c) * e) % p
        return out

    # right multiplication matrices of the regular module
    regmats = []
    for e in alg_basis:
        rows = [to_coords((f @ e) % p) for f in alg_basis]
        regmats.append(np.array(rows, dtype=np.int64) % p)
    rad_rows = radical(regmats, k, p, seed=rng.randrange(2 ** 32))
    head_mats, comp = quotient_action(regmats, *_rref_pair(rad_rows, p), p, k)
    head_dim = k - rad_rows.shape[0]
    head_simples = chop(head_mats, head_dim, p, seed=rng.randrange(2 ** 32))
    if len(head_simples) == 1 and head_simples[0].multiplicity == 1:
        return None  # head simple: End(V) local
    # find a proper direct summand of the head as a right module
    sub = _proper_head_summand(head_mats, head_dim, p, rng)
    # complement of sub inside the head
    complement = _module_complement(head_mats, head_dim, sub, p)
    # projection onto sub along complement, as right multiplication by ebar
    proj = _projection_matrix(sub, complement, p)
    one_coords = to_coords(np.eye(dim, dtype=np.int64))
    one_head = _project_to_quotient(one_coords, rad_rows, comp, p)
    ebar_head = (one_head @ proj) % p
    # lift ebar back to algebra coordinates (choose any preimage)
    e_coords = _lift_from_quotient(ebar_head, rad_rows, comp, k, p)
    e = from_coords(e_coords)
    # Frobenius powering turns an idempotent mod the radical into one on the nose
    steps = 1
    while p ** steps < k + 1:
        steps += 1
    for _ in range(steps):
        e = _mat_pow(e, p, p)
    if ((e @ e) % p != e).any():
        raise AssertionError("idempotent lifting failed")
    if not e.any() or _rank(e, p) == dim:
        raise AssertionError("lifted idempotent is trivial")
    return e


def _rref_pair(rows, p):
    red, rank, piv = _rref_array(rows, p)
    return red[:rank], piv


def _coords_in_rref(v, basis_red, piv, p):
    v = v % p
    coords = []
    for i, c in enumerate(piv):
        coords.append(int(v[c]))
        v = (v - v[c] * basis_red[i]) % p
    if v.any():
        raise AssertionError("vector outside the endomorphism span")
    return np.array(coords, dtype=np.int64)


def _project_to_quotient(v, rad_rows, comp, p):
    red, rank, piv = _rref_array(rad_rows, p)
    v = v % p
    for i in range(rank):
        c = piv[i]
        if v[c]:
            v = (v - v[c] * red[i]) % p
    return v[comp]


def _lift_from_quotient(vq, rad_rows, comp, k, p):
    v = np.zeros(k, dtype=np.int64)
    for val, c in zip(vq, comp):
        v[c] = val
    return v


def _proper_head_summand(head_mats, head_dim, p, rng):
    """A proper nonzero submodule of the (semisimple) head."""
    simples = chop(head_mats, head_dim, p, seed=rng.randrange(2 ** 32))
    s = simples[0]
    homs = hom_space(s.mats, s.dim, head_mats, head_dim, p)
    for f in homs:
        img = _row_space(f, p)
        if 0 < img.shape[0] < head_dim:
            return img
    raise AssertionError("no proper summand found in a non-simple head")


def _module_complement(mats, dim, sub, p):
    """A stable complement of a submodule inside a SEMISIMPLE module.

    Greedily adjoins whole simple submodules (images of intertwiners from
    the constituents) whose intersection with the running span is zero; in
    a semisimple module this always fills up to a direct complement.
    """
    red, rank, piv = _rref_array(sub, p)
    sub = red[:rank]
    ech = Echelon(p, dim)
    for row in sub:
        ech.add(row)
    complement_rows = np.zeros((0, dim), dtype=np.int64)
    for s in chop(mats, dim, p, seed=0):
        for f in hom_space(s.mats, s.dim, mats, dim, p):
            img = _row_space(f, p)
            if img.shape[0] == 0:
                continue
            # the image of a simple is simple: it meets the span in 0 or fully
            residues = [ech.reduce(row) for row in img]
            if all(r.any() for r in residues):
                for row in img:
                    ech.add(row)
                complement_rows = np.vstack([complement_rows, img])
            if ech.dim == dim:
                return _row_space(complement_rows, p)
    if ech.dim == dim:
        return _row_space(complement_rows, p)
    raise AssertionError("failed to complement a summand of a semisimple module")


def _projection_matrix(sub, complement, p):
    """Matrix of the projection onto sub along complement (row action)."""
    dim = sub.shape[1]
    full = np.vstack([sub, complement])
    inv = FpMatrix(p, full).inverse().a
    target = np.vstack([sub, np.zeros_like(complement)])
    return (inv @ target) % p


def _mat_pow(m, e, p):
    out = np.eye(m.shape[0], dtype=np.int64)
    base = m % p
    while e:
        if e & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        e >>= 1
    return out

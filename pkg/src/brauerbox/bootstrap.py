"""Construction of the shipped datasets from first principles.

Two scenes are built here:

* the alternating-group scene: A8 in its natural action, a Sylow
  3-subgroup P, its normalizer (order 72), and the point stabilizer A7;

* the local scene: a group N of order 3456 = 2^3 * 3^2 * 48, built as a
  split extension of 2^3 x 3^2 by GL2(3), where GL2(3) acts naturally on
  3^2 and through its quotient S4 (permuting the four lines of F_3^2) on
  the 3-dimensional F_2-module F_2^4 / <(1,1,1,1)>. Inside N we single
  out a subgroup of order 216 (index 16), a subgroup H of order 576 and
  its complement-type subgroup of order 72, plus the two idempotents of
  kE fixed by H. Every structural claim used downstream is verified at
  build time: the dual F_2-module is uniserial with layers [2, 1] and
  orbit lengths [1, 1, 6]; the order-8 subgroup sees dual orbits
  [1, 1, 1, 1, 4]; the order-216 subgroup matches the fingerprint of an
  independently built model of shape 2 x (3^2 : B) with B a Borel
  subgroup of GL2(3).
"""

import numpy as np

from .blocks import LinearCharacter, idempotent_from_character
from .ffla import FpMatrix
from .modrep import MatRep, radical_series
from .permgrp import (Perm, PermGroup, Subgroup, fingerprint, make_group,
                      normalizer, parse_cycles, reduce_generators,
                      semidirect_product, sylow)

# -- the alternating group scene ------------------------------------------------


def a8_scene(seed=0):
    """A8 with P (order 9), its normalizer (order 72) and A7 = Stab(8)."""
    a8 = make_group([parse_cycles("(1,2,3)", 8),
                     parse_cycles("(2,3,4,5,6,7,8)", 8)], seed=seed)
    assert a8.order == 20160
    P = Subgroup(a8, [parse_cycles("(1,2,3)", 8), parse_cycles("(4,5,6)", 8)])
    assert P.order == 9
    H = normalizer(a8, P)
    assert H.order == 72
    a7 = Subgroup(a8, [parse_cycles("(1,2,3)", 8), parse_cycles("(3,4,5,6,7)", 8)])
    assert a7.order == 2520
    return {"G": a8, "P": P, "H": H, "A7": a7}


# -- GL2(3) and its two actions ---------------------------------------------------


_NONZERO = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
_LINES = [(0, 1), (1, 0), (1, 1), (1, 2)]  # one representative per line


def _vec_times_mat(v, m):
    return (int(v[0] * m.a[0, 0] + v[1] * m.a[1, 0]) % 3,
            int(v[0] * m.a[0, 1] + v[1] * m.a[1, 1]) % 3)


def _mat_to_perm(m):
    """GL2(3) element as a permutation of the 8 nonzero row vectors."""
    index = {v: i for i, v in enumerate(_NONZERO)}
    return Perm([index[_vec_times_mat(v, m)] for v in _NONZERO])


def _line_permutation(m):
    """Induced permutation of the four lines of F_3^2."""
    images = []
    for v in _LINES:
        w = _vec_times_mat(v, m)
        neg = ((2 * w[0]) % 3, (2 * w[1]) % 3)
        images.append(_LINES.index(w if w in _LINES else neg))
    return images


def _e_action_matrix(m):
    """Action on F_2^4 / <(1,1,1,1)> induced by the line permutation.

    Basis: the images of the first three unit vectors; the fourth maps to
    their sum.
    """
    pi = _line_permutation(m)
    rows = []
    for i in range(3):
        j = pi[i]
        rows.append([1, 1, 1] if j == 3 else [1 if k == j else 0 for k in range(3)])
    return FpMatrix(2, rows)


GL23_GENS = [FpMatrix(3, [[1, 1], [0, 1]]), FpMatrix(3, [[0, 1], [1, 0]])]
D8_GENS = [FpMatrix(3, [[0, 1], [2, 0]]), FpMatrix(3, [[1, 0], [0, 2]])]
BOREL_GENS = [FpMatrix(3, [[1, 1], [0, 1]]), FpMatrix(3, [[2, 0], [0, 1]]),
              FpMatrix(3, [[1, 0], [0, 2]])]


def gl23_action_data():
    """GL2(3) as a permutation group with its two module actions."""
    Q = make_group([_mat_to_perm(m) for m in GL23_GENS])
    assert Q.order == 48
    mats_p = GL23_GENS
    mats_e = [_e_action_matrix(m) for m in GL23_GENS]
    return Q, mats_e, mats_p


def _dual_f2_module(Q, mats_e):
    """The dual of the E-module, as inverse-transpose matrices over F_2."""
    return MatRep(Q, 2, [m.inverse().transpose() for m in mats_e])


def _vector_orbits(mats, dim, p):
    """Orbit lengths of the matrix group on all of F_p^dim."""
    vectors = []

    def rec(i, acc):
        if i == dim:
            vectors.append(tuple(acc))
            return
        for c in range(p):
            rec(i + 1, acc + [c])

    rec(0, [])
    seen = set()
    lengths = []
    for v in vectors:
        if v in seen:
            continue
        orbit = {v}
        queue = [v]
        while queue:
            x = np.array(queue.pop(), dtype=np.int64)
            for m in mats:
                y = tuple(int(t) for t in (x @ m.a) % p)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        seen |= orbit
        lengths.append(len(orbit))
    return sorted(lengths)


def _q_element_perm(x_mat, Q, factors, layout, quotient_offset, total):
    """The permutation of the product domain induced by (0, x)."""
    member, word = Q.sift(_mat_to_perm(x_mat))
    if not member:
        raise ValueError("matrix does not lie in the quotient group")
    images = list(range(total))
    for (q, d, offset), (qq, dd, mats) in zip(layout, factors):
        acc = FpMatrix(q, np.eye(d, dtype=np.int64))
        for w in word:
            m = mats[abs(w) - 1]
            acc = acc @ (m if w > 0 else m.inverse())
        for pt in range(offset, offset + q ** d):
            idx = pt - offset
            vec = []
            for _ in range(d):
                vec.append(idx % q)
                idx //= q
            out = [int(sum(vec[i] * int(acc.a[i, j]) for i in range(d))) % q
                   for j in range(d)]
            code = 0
            for i in reversed(range(d)):
                code = code * q + out[i]
            images[pt] = offset + code
    qp = _mat_to_perm(x_mat)
    for pt in range(Q.degree):
        images[quotient_offset + pt] = quotient_offset + qp.images[pt]
    return Perm(images)


def local_scene(seed=0):
    """The order-3456 local group with its distinguished subgroups.

    Returns a dict with N, the translation subgroups E and P, the
    order-216 subgroup NT, H (order 576), HP (order 72, a complement of E
    in H), the two H-fixed idempotents e1, e2 of kE, and their sum.
    """
    Q, mats_e, mats_p = gl23_action_data()

    # build-time certificates for the chosen action on E
    dual = _dual_f2_module(Q, mats_e)
    layers = radical_series(dual, seed=seed).layer_dims()
    assert layers == [2, 1], f"dual module layers {layers}"
    orbs = _vector_orbits(dual.matrices, 3, 2)
    assert orbs == [1, 1, 6], f"dual module orbits {orbs}"

    factors = [(2, 3, mats_e), (3, 2, mats_p)]
    N = semidirect_product(factors, Q, seed=seed)
    assert N.order == 3456
    layout = N.factor_layout
    qoff = N.quotient_offset
    e_trans = N.translation_gens[:3]
    p_trans = N.translation_gens[3:]
    E = Subgroup(N, e_trans)
    P = Subgroup(N, p_trans)
    assert E.order == 8 and P.order == 9

    def embed(x):
        return _q_element_perm(x, Q, factors, layout, qoff, N.degree)

    d8_elems = [embed(m) for m in D8_GENS]
    borel_elems = [embed(m) for m in BOREL_GENS]
    assert make_group(d8_elems, degree=N.degree).order == 8
    assert make_group(borel_elems, degree=N.degree).order == 12

    # the order-8 subgroup must see five orbits [1,1,1,1,4] on the dual
    d8_dual = [_e_action_matrix(m).inverse().transpose() for m in D8_GENS]
    assert _vector_orbits(d8_dual, 3, 2) == [1, 1, 1, 1, 4]

    H = Subgroup(N, list(e_trans) + list(p_trans) + d8_elems)
    assert H.order == 576
    HP = Subgroup(N, list(p_trans) + d8_elems)
    assert HP.order == 72

    # order-216 subgroup: P : Borel extended by the Borel-fixed involution of E
    fixed_e = _borel_fixed_involution(mats_e, Q, e_trans)
    NT = Subgroup(N, reduce_generators(
        list(p_trans) + borel_elems + [fixed_e], N.degree))
    assert NT.order == 216
    assert N.order // NT.order == 16
    _check_ntilde_fingerprint(NT, seed=seed)

    e1, e2 = _fixed_idempotents(E, d8_dual, mats_e)
    for s in H.gens:
        assert e1.conjugate(s) == e1 and e2.conjugate(s) == e2
    e12 = e1 + e2
    assert e12.is_idempotent()
    return {"N": N, "E": E, "P": P, "NT": NT, "H": H, "HP": HP,
            "e1": e1, "e2": e2, "e12": e12}


def _borel_fixed_involution(mats_e, Q, e_trans):
    """The translation of E by the unique nonzero Borel-fixed vector."""
    borel_e = []
    for m in BOREL_GENS:
        borel_e.append(_e_action_matrix(m))
    fixed = []
    for code in range(1, 8):
        v = np.array([code & 1, (code >> 1) & 1, (code >> 2) & 1], dtype=np.int64)
        if all(((v @ m.a) % 2 == v).all() for m in borel_e):
            fixed.append(v)
    assert len(fixed) == 1, f"expected one Borel-fixed vector, got {len(fixed)}"
    v = fixed[0]
    t = None
    for i, bit in enumerate(v):
        if bit:
            t = e_trans[i] if t is None else t * e_trans[i]
    return t


def _check_ntilde_fingerprint(NT, seed=0):
    """Compare against an independently built model of shape 2 x (3^2 : B)."""
    borel_perm = make_group([_mat_to_perm(m) for m in BOREL_GENS])
    assert borel_perm.order == 12
    trivial_c2 = [FpMatrix(2, [[1]]) for _ in BOREL_GENS]
    model = semidirect_product([(2, 1, trivial_c2), (3, 2, BOREL_GENS)],
                               borel_perm, seed=seed)
    assert model.order == 216
    fp_model = fingerprint(model)
    fp_nt = fingerprint(NT.group)
    if fp_model != fp_nt:
        raise AssertionError(
            f"order-216 subgroup fingerprint {fp_nt} differs from the model {fp_model}")


def write_datasets(out_dir, seed=0):
    """Generate every shipped data file into out_dir; returns the paths.

    Group files, representation files, idempotent files and the scenario
    configs are all deterministic functions of the constructions above.
    """
    from pathlib import Path
    from .brauer import green_trivial_source
    from .modrep import perm_rep
    from .permgrp import format_group, natural_action

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        path = out / name
        path.write_text(text)
        written.append(path)

    a8 = a8_scene(seed=seed)
    put("a8.grp", format_group(a8["G"]))
    put("p.grp", format_group(a8["P"].group))
    put("hprime.grp", format_group(a8["H"].group))
    put("a7.grp", format_group(a8["A7"].group))
    omega8 = perm_rep(natural_action(a8["G"]), 3)
    put("omega8.rep", omega8.to_text())
    quotient = green_trivial_source(omega8, a8["P"], a8["H"])
    put("d8modc4.rep", quotient.to_text())

    scene = local_scene(seed=seed)
    put("n.grp", format_group(scene["N"]))
    put("ntilde.grp", format_group(scene["NT"].group))
    put("hcopy.grp", format_group(scene["H"].group))
    put("hprimecopy.grp", format_group(scene["HP"].group))
    put("e1.idem", scene["e1"].to_text())
    put("e2.idem", scene["e2"].to_text())

    put("a8-green.toml", _A8_GREEN_TOML)
    put("a8-f13.toml", _A8_F13_TOML)
    put("j4-local.toml", _J4_LOCAL_TOML)
    return written


_A8_GREEN_TOML = """\
name = "a8-green"
seed = 0

[expect]
quotient_dim = 2
labels = ["a", "b"]
"""

_A8_F13_TOML = """\
name = "a8-f13"
seed = 0

[expect]
radical_layers = [1, 2, 1]
"""

_J4_LOCAL_TOML = """\
name = "j4-local"
seed = 0

[inputs]
group = "n.grp"
subgroup = "ntilde.grp"
h = "hcopy.grp"
hprime = "hprimecopy.grp"
idem1 = "e1.idem"
idem2 = "e2.idem"

[expect]
constituent_dims = [1, 3, 6, 6]
projection_packages = ["a+a", "c+d"]
"""


def _fixed_idempotents(E, d8_dual, mats_e):
    """The two idempotents of kE from order-8-fixed characters in the 6-orbit.

    Characters of E are identified with the vectors of the dual module; the
    two we need are fixed by the order-8 subgroup but not by the full
    quotient (i.e. they lie in the orbit of length 6).
    """
    gl_dual = [m.inverse().transpose() for m in mats_e]
    fixed_chars = []
    for code in range(1, 8):
        c = np.array([code & 1, (code >> 1) & 1, (code >> 2) & 1], dtype=np.int64)
        if not all(((c @ m.a) % 2 == c).all() for m in d8_dual):
            continue
        if all(((c @ m.a) % 2 == c).all() for m in gl_dual):
            continue  # fixed by everything: belongs to a singleton orbit
        fixed_chars.append(c)
    assert len(fixed_chars) == 2, f"expected two characters, got {len(fixed_chars)}"
    out = []
    for c in sorted(fixed_chars, key=tuple):
        values = [2 if c[i] else 1 for i in range(3)]  # (-1)^{c_i} in F_3
        char = LinearCharacter(E.group, 3, values)
        out.append(idempotent_from_character(E, char))
    return out

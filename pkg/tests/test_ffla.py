import random

import numpy as np
import pytest

from brauerbox.ffla import (Echelon, FpMatrix, FpPoly, PrimeField, check_prime,
                            factor_poly, mat_mul, min_poly, nullspace, rref,
                            row_space)


def test_modulus_validation():
    check_prime(2)
    check_prime(251)
    with pytest.raises(ValueError):
        check_prime(4)
    with pytest.raises(ValueError):
        check_prime(1)
    with pytest.raises(ValueError):
        check_prime(257)  # above the supported range
    with pytest.raises(ValueError):
        PrimeField(9)


def test_mat_mul_identity():
    m = FpMatrix(3, [[1, 2, 0], [0, 1, 1], [2, 2, 2]])
    eye = FpMatrix.identity(3, 3)
    assert mat_mul(eye, m) == m
    assert mat_mul(m, eye) == m


def test_mat_mul_hand_computed():
    # 1+2 = 3 vanishes mod 3
    a = FpMatrix(3, [[1, 2], [2, 1]])
    b = FpMatrix(3, [[1, 1], [1, 1]])
    assert mat_mul(a, b) == FpMatrix.zeros(3, 2, 2)


def test_mat_mul_against_naive():
    rng = random.Random(11)
    for p in (2, 3, 5, 251):
        a = FpMatrix(p, [[rng.randrange(p) for _ in range(50)] for _ in range(50)])
        b = FpMatrix(p, [[rng.randrange(p) for _ in range(50)] for _ in range(50)])
        naive = [[sum(int(a.a[i, k]) * int(b.a[k, j]) for k in range(50)) % p
                  for j in range(50)] for i in range(50)]
        assert mat_mul(a, b) == FpMatrix(p, naive)


def test_mat_mul_errors():
    a = FpMatrix(3, [[1, 2]])
    with pytest.raises(ValueError):
        mat_mul(a, FpMatrix(3, [[1, 2]]))
    with pytest.raises(ValueError):
        mat_mul(a, FpMatrix(5, [[1], [2]]))


def test_rref_examples():
    red, rank, piv = rref(FpMatrix.identity(3, 3))
    assert rank == 3 and piv == (0, 1, 2)
    red, rank, piv = rref(FpMatrix.zeros(3, 4, 4))
    assert rank == 0 and piv == ()
    red, rank, piv = rref(FpMatrix(3, [[1, 2], [2, 1]]))
    assert rank == 1  # second row is twice the first mod 3


def test_rref_idempotent_random():
    rng = random.Random(5)
    for _ in range(25):
        p = rng.choice([2, 3, 5])
        rows, cols = rng.randrange(1, 8), rng.randrange(1, 8)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
        red, rank, piv = rref(m)
        again, rank2, piv2 = rref(red)
        assert again == red and rank2 == rank and piv2 == piv


def test_nullspace_examples():
    ns = nullspace(FpMatrix(3, [[1, 2], [2, 1]]))
    assert ns.a.tolist() == [[1, 1]]
    assert nullspace(FpMatrix(3, [[1, 1], [0, 1]])).rows == 0
    assert nullspace(FpMatrix.zeros(3, 3, 3)).rows == 3


def test_rank_nullity_random():
    rng = random.Random(7)
    for _ in range(30):
        p = rng.choice([2, 3, 7])
        rows, cols = rng.randrange(1, 9), rng.randrange(1, 9)
        m = FpMatrix(p, [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)])
        _, rank, _ = rref(m)
        assert rank + nullspace(m).rows == cols


def test_min_poly_three_cycle():
    # permutation matrix of a 3-cycle over F3: (x - 1)^3 = x^3 - 1
    m = FpMatrix(3, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    f = min_poly(m)
    assert f == FpPoly(3, [2, 0, 0, 1])
    square = (m - FpMatrix.identity(3, 3))
    assert not mat_mul(square, square).is_zero()  # (M-I)^2 nonzero


def test_min_poly_identity():
    assert min_poly(FpMatrix.identity(5, 4)) == FpPoly(5, [4, 1])  # x - 1


def _char_poly_cofactor(m):
    """Characteristic polynomial by cofactor expansion over F_p[x]."""
    p = m.p
    n = m.rows
    entries = [[FpPoly(p, [(-int(m.a[i, j])) % p]) for j in range(n)]
               for i in range(n)]
    for i in range(n):
        entries[i][i] = entries[i][i] + FpPoly.x(p)

    def det(rows, cols):
        if len(cols) == 1:
            return entries[rows[0]][cols[0]]
        total = FpPoly.zero(p)
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = entries[rows[0]][c] * minor
            if k % 2:
                term = term * (p - 1)
            total = total + term
        return total

    return det(tuple(range(n)), tuple(range(n)))


def test_min_poly_divides_char_poly_random():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randrange(1, 7)
        m = FpMatrix(3, [[rng.randrange(3) for _ in range(n)] for _ in range(n)])
        f = min_poly(m)
        assert f.eval_matrix(m).is_zero()
        chi = _char_poly_cofactor(m)
        assert (chi % f).is_zero()
        # same irreducible support
        sup_f = {g for g, _ in factor_poly(f)}
        sup_chi = {g for g, _ in factor_poly(chi)}
        assert sup_f == sup_chi


def test_min_poly_annihilates_up_to_40():
    rng = random.Random(17)
    for n in (10, 25, 40):
        m = FpMatrix(3, [[rng.randrange(3) for _ in range(n)] for _ in range(n)])
        assert min_poly(m).eval_matrix(m).is_zero()


def test_min_poly_requires_square():
    with pytest.raises(ValueError):
        min_poly(FpMatrix(3, [[1, 2, 0], [0, 1, 1]]))


def test_factor_poly_examples():
    cubic = FpPoly(3, [2, 0, 0, 1])  # x^3 - 1
    assert factor_poly(cubic) == [(FpPoly(3, [2, 1]), 3)]
    quad = FpPoly(3, [1, 0, 1])  # x^2 + 1 has no roots mod 3
    assert factor_poly(quad) == [(quad, 1)]
    for p in (2, 3, 5, 251):
        x = FpPoly.x(p)
        assert factor_poly(x) == [(x, 1)]
    with pytest.raises(ValueError):
        factor_poly(FpPoly.zero(3))


def _exhaustive_low_degree_factors(f):
    """All monic irreducible divisors found by trial division."""
    p = f.p
    found = []

    def monic_polys(deg):
        if deg == 0:
            yield FpPoly.one(p)
            return
        coeffs = [0] * deg + [1]

        def rec(i):
            if i == deg:
                yield FpPoly(p, list(coeffs))
                return
            for c in range(p):
                coeffs[i] = c
                yield from rec(i + 1)

        yield from rec(0)

    def is_irreducible(g):
        if g.degree <= 1:
            return g.degree == 1
        for d in range(1, g.degree // 2 + 1):
            for h in monic_polys(d):
                if h.degree >= 1 and (g % h).is_zero():
                    return False
        return True

    rest = f.monic()
    for d in range(1, f.degree + 1):
        for g in monic_polys(d):
            if g.degree < 1:
                continue
            mult = 0
            while (rest % g).is_zero():
                rest = rest // g
                mult += 1
            if mult and is_irreducible(g):
                found.append((g, mult))
    return sorted(found, key=lambda t: (t[0].degree, t[0].coeffs))


def test_factor_poly_against_exhaustive_oracle():
    rng = random.Random(23)
    for _ in range(15):
        p = rng.choice([2, 3])
        deg = rng.randrange(1, 7)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [1]
        f = FpPoly(p, coeffs)
        assert factor_poly(f) == _exhaustive_low_degree_factors(f)


def test_factor_poly_remultiplies():
    rng = random.Random(29)
    for _ in range(30):
        p = rng.choice([2, 3, 5])
        deg = rng.randrange(1, 13)
        coeffs = [rng.randrange(p) for _ in range(deg)] + [rng.randrange(1, p)]
        f = FpPoly(p, coeffs)
        product = FpPoly(p, [f.coeffs[-1]])
        for g, mult in factor_poly(f):
            for _ in range(mult):
                product = product * g
        assert product == f


def test_poly_divmod_property():
    rng = random.Random(31)
    for _ in range(30):
        p = rng.choice([2, 3, 5])
        a = FpPoly(p, [rng.randrange(p) for _ in range(rng.randrange(1, 10))])
        b = FpPoly(p, [rng.randrange(p) for _ in range(rng.randrange(1, 6))])
        if b.is_zero():
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_matrix_immutable_and_hashable():
    m = FpMatrix(3, [[1, 2], [0, 1]])
    with pytest.raises(AttributeError):
        m.p = 5
    with pytest.raises(ValueError):
        m.a[0, 0] = 2
    assert hash(m) == hash(FpMatrix(3, [[1, 2], [0, 1]]))


def test_matrix_text_roundtrip():
    m = FpMatrix(5, [[0, 4, 3], [1, 2, 0]])
    assert FpMatrix.from_text(m.to_text()) == m
    with pytest.raises(ValueError):
        FpMatrix.from_text("fpmat p=3 rows=1 cols=2\n1 7\n")


def test_echelon_accumulator():
    ech = Echelon(3, 4)
    assert ech.add(np.array([1, 1, 0, 0]))
    assert ech.add(np.array([0, 0, 1, 2]))
    assert not ech.add(np.array([2, 2, 1, 2]))  # combination of the first two
    assert ech.dim == 2
    assert ech.contains(np.array([1, 1, 1, 2]))


def test_row_space_canonical():
    a = FpMatrix(3, [[1, 1, 0], [2, 2, 0], [0, 0, 1]])
    b = FpMatrix(3, [[2, 2, 2], [0, 0, 2]])
    assert row_space(a) == row_space(FpMatrix(3, [[1, 1, 1], [0, 0, 1]]))
    assert row_space(b) == row_space(FpMatrix(3, [[1, 1, 0], [0, 0, 1]]))

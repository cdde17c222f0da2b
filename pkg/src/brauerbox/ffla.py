"""Exact dense linear algebra and polynomial arithmetic over prime fields F_p.

Matrices are stored as numpy int64 arrays with entries reduced mod p.
All arithmetic is exact; p is restricted to primes <= 251 so that products
of entries stay far away from int64 overflow even for large dimensions.

Polynomials are coefficient tuples, lowest degree first, no trailing zeros.
Factorisation uses squarefree + distinct-degree + Cantor-Zassenhaus
equal-degree splitting with an explicit seed.
"""

import random
from functools import lru_cache

import numpy as np

MAX_PRIME = 251


@lru_cache(maxsize=None)
def check_prime(p):
    """Validate a field modulus; raise ValueError if p is not a prime <= 251."""
    if not isinstance(p, int) or p < 2 or p > MAX_PRIME:
        raise ValueError(f"modulus must be a prime in [2, {MAX_PRIME}], got {p!r}")
    for d in range(2, int(p ** 0.5) + 1):
        if p % d == 0:
            raise ValueError(f"modulus {p} is not prime")
    return p


class PrimeField:
    """The prime field F_p; scalars are plain ints reduced mod p."""

    def __init__(self, p):
        self.p = check_prime(p)

    def inv(self, x):
        x %= self.p
        if x == 0:
            raise ZeroDivisionError(f"0 is not invertible mod {self.p}")
        return pow(x, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


def _inv_mod(x, p):
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError(f"0 is not invertible mod {p}")
    return pow(x, p - 2, p)


def _as_array(data, p):
    a = np.array(data, dtype=np.int64)
    if a.ndim != 2:
        raise ValueError(f"matrix data must be 2-dimensional, got shape {a.shape}")
    return a % p


class FpMatrix:
    """An immutable dense matrix over F_p."""

    __slots__ = ("p", "a")

    def __init__(self, p, data):
        check_prime(p)
        object.__setattr__(self, "p", p)
        a = _as_array(data, p)
        a.flags.writeable = False
        object.__setattr__(self, "a", a)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.a.shape == other.a.shape and bool(
            np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def _check_same_field(self, other):
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other):
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return FpMatrix(self.p, (self.a + other.a) % self.p)

    def __sub__(self, other):
        self._check_same_field(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        return FpMatrix(self.p, (self.a - other.a) % self.p)

    def __neg__(self):
        return FpMatrix(self.p, (-self.a) % self.p)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def scale(self, c):
        return FpMatrix(self.p, (self.a * (int(c) % self.p)) % self.p)

    def transpose(self):
        return FpMatrix(self.p, self.a.T)

    def is_zero(self):
        return not self.a.any()

    def is_identity(self):
        return self.rows == self.cols and bool(
            np.array_equal(self.a, np.eye(self.rows, dtype=np.int64)))

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n = self.rows
        aug = np.hstack([self.a, np.eye(n, dtype=np.int64)])
        red, rank, _ = _rref_array(aug, self.p)
        if rank < n or not np.array_equal(red[:, :n], np.eye(n, dtype=np.int64)):
            raise ZeroDivisionError("matrix is singular")
        return FpMatrix(self.p, red[:, n:])

    def rank(self):
        return _rref_array(self.a, self.p)[1]

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols})"

    def to_text(self):
        """Serialize in the repo-wide matrix text format."""
        lines = [f"fpmat p={self.p} rows={self.rows} cols={self.cols}"]
        for row in self.a:
            lines.append(" ".join(str(int(x)) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln for ln in text.splitlines()]
        return _parse_fpmat_block(lines, 0)[0]


def _parse_header(line, expected, lineno):
    parts = line.split()
    if not parts or parts[0] != expected:
        raise ValueError(f"line {lineno + 1}: expected '{expected}' header, got {line!r}")
    fields = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise ValueError(f"line {lineno + 1}: malformed field {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = int(v)
    return fields


def _parse_fpmat_block(lines, start):
    """Parse one fpmat block from lines[start:]; return (FpMatrix, next_line)."""
    fields = _parse_header(lines[start], "fpmat", start)
    p, rows, cols = fields["p"], fields["rows"], fields["cols"]
    data = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        lineno = start + 1 + i
        if lineno >= len(lines):
            raise ValueError(f"line {lineno + 1}: unexpected end of matrix block")
        entries = lines[lineno].split()
        if len(entries) != cols:
            raise ValueError(f"line {lineno + 1}: expected {cols} entries, got {len(entries)}")
        for j, e in enumerate(entries):
            v = int(e)
            if not 0 <= v < p:
                raise ValueError(f"line {lineno + 1}: entry {v} out of range [0, {p})")
            data[i, j] = v
    return FpMatrix(p, data), start + 1 + rows


def mat_mul(a, b):
    """Exact product of two FpMatrix values over the same field."""
    if not isinstance(a, FpMatrix) or not isinstance(b, FpMatrix):
        raise TypeError("mat_mul expects FpMatrix operands")
    a._check_same_field(b)
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return FpMatrix(a.p, (a.a @ b.a) % a.p)


def _rref_array(a, p):
    """Row reduce a copy of the int64 array a mod p.

    Returns (reduced, rank, pivot column list). Entries of intermediate
    results stay below p**2 < 2**16, so int64 arithmetic is exact.
    """
    a = (a % p).astype(np.int64)
    m, n = a.shape
    r = 0
    pivots = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(a[r, c], p)) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rref(m):
    """Reduced row echelon form of m; returns (reduced, rank, pivots)."""
    red, rank, pivots = _rref_array(m.a, m.p)
    return FpMatrix(m.p, red), rank, tuple(pivots)


def nullspace(m):
    """Row basis of the right kernel {v : m @ v^T = 0}, echelonized."""
    red, rank, pivots = _rref_array(m.a, m.p)
    n = m.cols
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-red[i, f]) % m.p
    return FpMatrix(m.p, basis)


class Echelon:
    """Incremental row-space accumulator over F_p, kept fully reduced."""

    def __init__(self, p, width):
        self.p = p
        self.width = width
        self.rows = np.zeros((0, width), dtype=np.int64)
        self.pivots = []

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, v):
        """Return the residue of v modulo the current row space."""
        v = np.asarray(v, dtype=np.int64) % self.p
        for i, c in enumerate(self.pivots):
            if v[c]:
                v = (v - v[c] * self.rows[i]) % self.p
        return v

    def add(self, v):
        """Reduce v and adjoin the residue if nonzero; return True if grown."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * _inv_mod(v[c], self.p)) % self.p
        col = self.rows[:, c].copy()
        if col.any():
            self.rows = (self.rows - np.outer(col, v)) % self.p
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows = np.insert(self.rows, pos, v, axis=0)
        self.pivots.insert(pos, c)
        return True

    def contains(self, v):
        return not self.reduce(v).any()

    def basis(self):
        return FpMatrix(self.p, self.rows)


def row_space(m):
    """Canonical (rref, zero rows dropped) basis of the row space of m."""
    red, rank, _ = _rref_array(m.a, m.p)
    return FpMatrix(m.p, red[:rank])


def intersect_row_spaces(a, b):
    """Canonical basis of the intersection of two row spaces (Zassenhaus)."""
    a._check_same_field(b)
    if a.cols != b.cols:
        raise ValueError("ambient dimensions differ")
    n = a.cols
    top = np.hstack([a.a, a.a])
    bot = np.hstack([b.a, np.zeros_like(b.a)])
    red, rank, pivots = _rref_array(np.vstack([top, bot]), a.p)
    rows = [red[i, n:] for i in range(rank) if pivots[i] >= n]
    out = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    return row_space(FpMatrix(a.p, out))


class FpPoly:
    """A univariate polynomial over F_p, coefficients low degree first."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p, coeffs):
        check_prime(p)
        cs = [int(c) % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("FpPoly is immutable")

    @classmethod
    def zero(cls, p):
        return cls(p, ())

    @classmethod
    def one(cls, p):
        return cls(p, (1,))

    @classmethod
    def x(cls, p):
        return cls(p, (0, 1))

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def __eq__(self, other):
        if not isinstance(other, FpPoly):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __add__(self, other):
        self._chk(other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [0] * n
        for i, c in enumerate(self.coeffs):
            cs[i] = c
        for i, c in enumerate(other.coeffs):
            cs[i] = (cs[i] + c) % self.p
        return FpPoly(self.p, cs)

    def __sub__(self, other):
        self._chk(other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [0] * n
        for i, c in enumerate(self.coeffs):
            cs[i] = c
        for i, c in enumerate(other.coeffs):
            cs[i] = (cs[i] - c) % self.p
        return FpPoly(self.p, cs)

    def __mul__(self, other):
        if isinstance(other, int):
            return FpPoly(self.p, [(c * other) % self.p for c in self.coeffs])
        self._chk(other)
        if self.is_zero() or other.is_zero():
            return FpPoly.zero(self.p)
        cs = np.convolve(np.array(self.coeffs, dtype=np.int64),
                         np.array(other.coeffs, dtype=np.int64)) % self.p
        return FpPoly(self.p, cs)

    __rmul__ = __mul__

    def _chk(self, other):
        if not isinstance(other, FpPoly) or other.p != self.p:
            raise ValueError("polynomial field mismatch")

    def __divmod__(self, other):
        self._chk(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.coeffs)
        d = other.degree
        lead_inv = _inv_mod(other.coeffs[-1], p)
        q = [0] * max(0, len(r) - d)
        while len(r) - 1 >= d and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            c = (r[-1] * lead_inv) % p
            q[k] = c
            for i, oc in enumerate(other.coeffs):
                r[k + i] = (r[k + i] - c * oc) % p
        return FpPoly(p, q), FpPoly(p, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self * _inv_mod(self.coeffs[-1], self.p)

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def lcm(self, other):
        if self.is_zero() or other.is_zero():
            return FpPoly.zero(self.p)
        return ((self * other) // self.gcd(other)).monic()

    def derivative(self):
        return FpPoly(self.p, [(i * c) % self.p for i, c in enumerate(self.coeffs)][1:])

    def pow_mod(self, e, modulus):
        """self**e reduced mod modulus, by square and multiply."""
        result = FpPoly.one(self.p)
        base = self % modulus
        while e > 0:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def eval_matrix(self, m):
        """Evaluate at a square FpMatrix by Horner's rule."""
        if m.rows != m.cols:
            raise ValueError("matrix must be square")
        n = m.rows
        acc = np.zeros((n, n), dtype=np.int64)
        eye = np.eye(n, dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = (acc @ m.a + c * eye) % self.p
        return FpMatrix(self.p, acc)

    def __repr__(self):
        if self.is_zero():
            return "FpPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c if c != 1 else ''}x")
            else:
                terms.append(f"{c if c != 1 else ''}x^{i}")
        return f"FpPoly({' + '.join(reversed(terms))} mod {self.p})"


def min_poly(m):
    """Monic minimal polynomial of a square matrix over F_p.

    Takes the lcm of the minimal polynomials of the standard basis vectors
    relative to m (Krylov subspaces with coefficient tracking), stopping as
    soon as the accumulated polynomial annihilates m. The result is exact:
    the lcm of vector annihilators divides the minimal polynomial, and a
    verified annihilator is divisible by it.
    """
    if m.rows != m.cols:
        raise ValueError("minimal polynomial requires a square matrix")
    n = m.rows
    p = m.p
    if n == 0:
        return FpPoly.one(p)
    f = FpPoly.one(p)
    seen = Echelon(p, n)
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        if seen.contains(e):
            continue
        g = _vector_min_poly(m.a, e, p)
        f = f.lcm(g)
        if f.degree == n or f.eval_matrix(m).is_zero():
            break
        # fold the Krylov orbit of e into the seen space to skip spanned vectors
        v = e
        for _ in range(g.degree):
            seen.add(v)
            v = (v @ m.a) % p
    return f


def _vector_min_poly(a, v, p):
    """Minimal polynomial of the Krylov sequence v, vA, vA^2, ..."""
    n = a.shape[0]
    ech = Echelon(p, n)
    coeff_rows = []  # row i = coefficients expressing reduced power i
    v = v % p
    powers = []
    w = v
    while True:
        residue = ech.reduce(w)
        if not residue.any():
            # w = sum c_j (vA^j) over recorded powers: solve for coefficients
            coeffs = _express_in_echelon(ech, powers, w, p)
            k = len(powers)
            poly = [(-c) % p for c in coeffs] + [1]
            return FpPoly(p, poly)
        ech.add(w)
        powers.append(w.copy())
        w = (w @ a) % p


def _express_in_echelon(ech, powers, w, p):
    """Coefficients writing w as a combination of the recorded power vectors."""
    k = len(powers)
    if k == 0:
        return []
    n = ech.width
    aug = np.zeros((k, n + k), dtype=np.int64)
    aug[:, :n] = np.array(powers, dtype=np.int64)
    aug[:, n:] = np.eye(k, dtype=np.int64)
    red, rank, pivots = _rref_array(aug, p)
    t = np.concatenate([w % p, np.zeros(k, dtype=np.int64)])
    for i, c in enumerate(pivots):
        if c < n and t[c]:
            t = (t - t[c] * red[i]) % p
    if t[:n].any():
        raise AssertionError("vector not in the span of recorded powers")
    return [int((-t[n + j]) % p) for j in range(k)]


def factor_poly(f, seed=0):
    """Factor a nonzero polynomial into monic irreducibles with multiplicities.

    Squarefree decomposition, then distinct-degree splitting, then randomized
    Cantor-Zassenhaus equal-degree splitting driven by the given seed.
    Returns a list of (irreducible FpPoly, multiplicity) sorted by degree
    then coefficients.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    p = f.p
    rng = random.Random(seed)
    result = {}
    for g, mult in _squarefree_parts(f.monic()):
        for h in _factor_squarefree(g, rng):
            result[h] = result.get(h, 0) + mult
    return sorted(result.items(), key=lambda t: (t[0].degree, t[0].coeffs))


def _squarefree_parts(f):
    """Yield (squarefree polynomial, multiplicity) pairs with product f."""
    p = f.p
    out = []
    if f.degree < 1:
        return out
    d = f.derivative()
    if d.is_zero():
        # f = g(x^p); over the prime field the p-th root keeps coefficients
        root = FpPoly(p, [f.coeffs[i] for i in range(0, len(f.coeffs), p)])
        for g, m in _squarefree_parts(root):
            out.append((g, m * p))
        return out
    c = f.gcd(d)
    w = f // c
    i = 1
    while w.degree > 0:
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            out.append((z.monic(), i))
        w = y
        c = c // y
        i += 1
    # factors with multiplicity divisible by p never enter w: they remain in
    # c at full multiplicity, and c is then a p-th power, so the recursion
    # descends through the p-th-root branch with the right multiplicities
    if c.degree > 0:
        out.extend(_squarefree_parts(c))
    return out


def _factor_squarefree(f, rng):
    """Monic irreducible factors of a squarefree monic polynomial."""
    p = f.p
    factors = []
    x = FpPoly.x(p)
    h = x
    v = f
    d = 0
    while v.degree > 2 * (d + 1) - 1 and v.degree > 0:
        d += 1
        h = h.pow_mod(p, v)
        g = (h - x).gcd(v)
        if g.degree > 0:
            factors.extend(_split_equal_degree(g, d, rng))
            v = v // g
            h = h % v
    if v.degree > 0:
        factors.append(v.monic())
    return factors


def _split_equal_degree(f, d, rng):
    """Cantor-Zassenhaus: split f into its irreducible factors of degree d."""
    p = f.p
    if f.degree == d:
        return [f.monic()]
    n = f.degree
    while True:
        r = FpPoly(p, [rng.randrange(p) for _ in range(n)] + [1])
        if p == 2:
            # trace map sum r^(2^i) over the degree-d tower
            t = r
            acc = r
            for _ in range(d - 1):
                t = t.pow_mod(2, f)
                acc = (acc + t) % f
            g = acc.gcd(f)
        else:
            e = (p ** d - 1) // 2
            g = (r.pow_mod(e, f) - FpPoly.one(p)).gcd(f)
        if 0 < g.degree < f.degree:
            return (_split_equal_degree(g, d, rng)
                    + _split_equal_degree((f // g).monic(), d, rng))

"""Permutation groups with stabilizer chains.

Points are 0-based internally and 1-based in all I/O (cycle notation).
Products act left to right: i^(g*h) = (i^g)^h, matching right modules.

The stabilizer chain is built by a deterministic Schreier-Sims pass; every
strong generator and transversal element carries a word in the ORIGINAL
generators (signed indices, +k for gens[k-1], -k for its inverse), so that
matrix representations defined on the original generators can be evaluated
at arbitrary group elements.

Normalizers, conjugating elements and fusion data use a depth-first
backtrack over the stabilizer chain, pruned by orbit invariants of the
subgroup being normalized, with a hard search bound. The searches are
exhaustive, so negative answers are certificates.
"""

import itertools
import random
import re
from math import gcd

from .errors import BoundExceeded

DEFAULT_BOUND = 10 ** 7
DEGREE_BOUND = 10 ** 4


class Perm:
    """A permutation of {0, ..., degree-1} stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("images do not describe a permutation")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, degree):
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree, cycles):
        """Build from 0-based cycles, e.g. [(0,1,2), (3,4,5)]."""
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:]):
                images[a] = b
            if cyc:
                images[cyc[-1]] = cyc[0]
        return cls(images)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, point):
        return self.images[point]

    def __mul__(self, other):
        # apply self first, then other
        oi = other.images
        return Perm(tuple(oi[i] for i in self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, g):
        """g^-1 * self * g."""
        return g.inverse() * self * g

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, include_fixed=False):
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self):
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self):
        o = 1
        for c in self.cycles():
            o = o * len(c) // gcd(o, len(c))
        return o

    def __eq__(self, other):
        if not isinstance(other, Perm):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Perm({format_cycles(self)})"


_CYCLE_RE = re.compile(r"\(\s*([0-9]+(?:\s*,\s*[0-9]+)*)?\s*\)")


def format_cycles(perm):
    """Cycle notation with 1-based points; identity is '()'."""
    cycles = perm.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(i + 1) for i in c) + ")" for c in cycles)


def parse_cycles(text, degree):
    """Parse 1-based cycle notation into a Perm of the given degree."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty permutation string")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(stripped):
        if m.start() != pos:
            raise ValueError(f"could not parse permutation {text!r}")
        pos = m.end()
        if m.group(1):
            pts = [int(tok) - 1 for tok in m.group(1).split(",")]
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle {m.group(0)!r}")
            if any(q < 0 or q >= degree for q in pts):
                raise ValueError(f"point out of range in {m.group(0)!r}")
            cycles.append(pts)
    if pos != len(stripped):
        raise ValueError(f"could not parse permutation {text!r}")
    return Perm.from_cycles(degree, cycles)


def _inv_word(word):
    return tuple(-x for x in reversed(word))


class _Level:
    """One level of a stabilizer chain."""

    __slots__ = ("base", "gens", "transversal", "_done")

    def __init__(self, base):
        self.base = base
        self.gens = []  # (Perm, word) generating the stabilizer of earlier bases
        self.transversal = {base: (None, ())}  # point -> (Perm or None for id, word)
        self._done = set()  # processed (point, gen index) Schreier pairs

    def rep(self, point, degree):
        u, w = self.transversal[point]
        if u is None:
            return Perm.identity(degree), ()
        return u, w


class PermGroup:
    """A permutation group with a verified stabilizer chain and exact order."""

    def __init__(self, gens, degree=None, seed=0):
        gens = [g if isinstance(g, Perm) else Perm(g) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        if degree > DEGREE_BOUND:
            raise BoundExceeded(f"degree {degree} exceeds limit {DEGREE_BOUND}")
        for g in gens:
            if g.degree != degree:
                raise ValueError("generator degrees differ")
        self.degree = degree
        self.gens = tuple(g for g in gens)
        self.seed = seed
        self._levels = []
        self._identity = Perm.identity(degree)
        for i, g in enumerate(self.gens):
            self._adjoin(0, g, (i + 1,))
        self._order = 1
        for lvl in self._levels:
            self._order *= len(lvl.transversal)

    # -- chain construction -------------------------------------------------
    #
    # Level l holds the strong generators fixing the base points of levels
    # 0..l-1. A new strong generator fixing bases 0..j-1 is adjoined to
    # every level it qualifies for, then the affected levels are re-closed
    # bottom-up so that all Schreier generators sift to the identity.

    def _adjoin(self, start, g, word):
        residue, rword, j = self._strip(start, g, word)
        if residue.is_identity():
            return False
        if j == len(self._levels):
            moved = next(k for k in range(self.degree) if residue.images[k] != k)
            self._levels.append(_Level(moved))
        for l in range(start, j + 1):
            self._levels[l].gens.append((residue, rword))
        for l in range(j, start - 1, -1):
            self._close_level(l)
        return True

    def _close_level(self, i):
        lvl = self._levels[i]
        # grow the orbit of the base point under the current level generators
        queue = list(lvl.transversal)
        while queue:
            pt = queue.pop()
            u, uw = lvl.rep(pt, self.degree)
            for s, sw in lvl.gens:
                q = s.images[pt]
                if q not in lvl.transversal:
                    lvl.transversal[q] = (u * s, uw + sw)
                    queue.append(q)
        # sift unprocessed Schreier generators; failures adjoin new strong
        # generators at deeper levels only, so this level stays stable
        pending = [(pt, k) for pt in lvl.transversal
                   for k in range(len(lvl.gens)) if (pt, k) not in lvl._done]
        for pt, k in pending:
            lvl._done.add((pt, k))
            s, sw = lvl.gens[k]
            u, uw = lvl.rep(pt, self.degree)
            q = s.images[pt]
            v, vw = lvl.rep(q, self.degree)
            schreier = u * s * v.inverse()
            if schreier.is_identity():
                continue
            word = uw + sw + _inv_word(vw)
            self._adjoin(i + 1, schreier, word)

    def _strip(self, i, g, word):
        for j in range(i, len(self._levels)):
            lvl = self._levels[j]
            pt = g.images[lvl.base]
            if pt not in lvl.transversal:
                return g, word, j
            u, uw = lvl.rep(pt, self.degree)
            g = g * u.inverse()
            word = word + _inv_word(uw)
        return g, word, len(self._levels)

    # -- queries ------------------------------------------------------------

    @property
    def order(self):
        return self._order

    @property
    def identity(self):
        return self._identity

    def base(self):
        return tuple(lvl.base for lvl in self._levels)

    def strong_generators(self):
        """All strong generators with their words in the original generators."""
        out = []
        for lvl in self._levels:
            out.extend(lvl.gens)
        return out

    def sift(self, g):
        """Return (is_member, word); for members the word evaluates to g."""
        if g.degree != self.degree:
            raise ValueError("degree mismatch")
        words = []
        h = g
        for lvl in self._levels:
            pt = h.images[lvl.base]
            if pt not in lvl.transversal:
                return False, None
            u, uw = lvl.rep(pt, self.degree)
            h = h * u.inverse()
            words.append(uw)
        if not h.is_identity():
            return False, None
        word = ()
        for w in reversed(words):
            word = word + w
        return True, word

    def __contains__(self, g):
        return self.sift(g)[0]

    def evaluate_word(self, word):
        g = self._identity
        for x in word:
            s = self.gens[abs(x) - 1]
            g = g * (s if x > 0 else s.inverse())
        return g

    def random_element(self, rng):
        """Uniform random element via the transversal structure."""
        g = self._identity
        for lvl in self._levels:
            pt = rng.choice(sorted(lvl.transversal))
            u, _ = lvl.rep(pt, self.degree)
            g = u * g
        return g

    def elements(self, bound=10 ** 6):
        """Iterate over all group elements (bounded)."""
        if self.order > bound:
            raise BoundExceeded(f"group order {self.order} exceeds {bound}")

        # element = u_m * ... * u_1 with u_i from level i
        def rec(i, acc):
            if i < 0:
                yield acc
                return
            for pt in self._levels[i].transversal:
                u, _ = self._levels[i].rep(pt, self.degree)
                yield from rec(i - 1, acc * u)

        yield from rec(len(self._levels) - 1, self._identity)

    def is_abelian(self):
        return all(a * b == b * a
                   for a, b in itertools.combinations(self.gens, 2))

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"


def make_group(gens, seed=0, degree=None):
    """Build a PermGroup with a verified stabilizer chain and exact order."""
    return PermGroup(gens, degree=degree, seed=seed)


def sift(G, g):
    """Membership test with word recovery: (is_member, word or None)."""
    return G.sift(g)


class Subgroup:
    """A subgroup given by generators, with membership verified by sifting."""

    def __init__(self, parent, gens):
        gens = [g if isinstance(g, Perm) else Perm(g) for g in gens]
        for g in gens:
            if g not in parent:
                raise ValueError(f"generator {format_cycles(g)} not in parent group")
        self.parent = parent
        self.gens = tuple(gens)
        self.group = PermGroup(self.gens, degree=parent.degree)

    @property
    def order(self):
        return self.group.order

    @property
    def degree(self):
        return self.group.degree

    def __contains__(self, g):
        return g in self.group

    def conjugate(self, g):
        """The subgroup generated by the g-conjugates of the generators."""
        return Subgroup(self.parent, [k.conjugate(g) for k in self.gens])

    def orbits(self):
        return _orbit_partition(self.gens, self.degree)

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.parent!r})"


def subgroup(parent, gens):
    return Subgroup(parent, gens)


def whole_group_as_subgroup(G):
    return Subgroup(G, G.gens)


def _orbit_partition(gens, degree):
    """List of sorted orbits of <gens> on the domain."""
    seen = [False] * degree
    orbits = []
    for start in range(degree):
        if seen[start]:
            continue
        orb = [start]
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop()
            for g in gens:
                y = g.images[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    queue.append(y)
        orbits.append(sorted(orb))
    return orbits


# -- actions ----------------------------------------------------------------


class PermAction:
    """A PermGroup acting on a labeled finite set.

    Stores one image tuple per group generator. Arbitrary group elements act
    through their sift word in the original generators.
    """

    def __init__(self, group, n, gen_images, labels=None):
        self.group = group
        self.n = n
        imgs = []
        for im in gen_images:
            im = tuple(int(x) for x in im)
            if sorted(im) != list(range(n)):
                raise ValueError("generator image is not a bijection of the domain")
            imgs.append(im)
        if len(imgs) != len(group.gens):
            raise ValueError("need exactly one image tuple per group generator")
        self.gen_images = tuple(imgs)
        self._gen_inverses = None
        self.labels = list(labels) if labels is not None else None

    def label(self, i):
        return self.labels[i] if self.labels else str(i + 1)

    def _inverses(self):
        if self._gen_inverses is None:
            invs = []
            for im in self.gen_images:
                inv = [0] * self.n
                for a, b in enumerate(im):
                    inv[b] = a
                invs.append(tuple(inv))
            self._gen_inverses = tuple(invs)
        return self._gen_inverses

    def apply_word(self, word, point):
        invs = self._inverses()
        for x in word:
            im = self.gen_images[x - 1] if x > 0 else invs[-x - 1]
            point = im[point]
        return point

    def act(self, g):
        """The image tuple of a group element on the domain."""
        member, word = self.group.sift(g)
        if not member:
            raise ValueError("element does not belong to the acting group")
        invs = self._inverses()
        pts = list(range(self.n))
        for x in word:
            im = self.gen_images[x - 1] if x > 0 else invs[-x - 1]
            pts = [im[q] for q in pts]
        return tuple(pts)

    def fixed_points(self, gens_or_subgroup):
        """Domain points fixed by every given element (or subgroup generator)."""
        gens = getattr(gens_or_subgroup, "gens", gens_or_subgroup)
        images = [self.act(g) for g in gens]
        return [i for i in range(self.n)
                if all(im[i] == i for im in images)]

    def validate(self, seed=0, samples=20, length=8):
        """Spot-check that random relations of the group hold on the domain."""
        rng = random.Random(seed)
        k = len(self.group.gens)
        if k == 0:
            return True
        for _ in range(samples):
            word = tuple(rng.randrange(1, k + 1) for _ in range(rng.randrange(1, length)))
            g = self.group.evaluate_word(word)
            member, sword = self.group.sift(g)
            if not member:
                raise AssertionError("generator word left the group")
            for pt in range(self.n):
                if self.apply_word(word, pt) != self.apply_word(sword, pt):
                    raise AssertionError("action violates a group relation")
        return True

    def __repr__(self):
        return f"PermAction(group order {self.group.order} on {self.n} points)"


def natural_action(G):
    return PermAction(G, G.degree, [g.images for g in G.gens],
                      labels=[str(i + 1) for i in range(G.degree)])


def subsets_action(G, k):
    """Action of G on sorted k-subsets of the natural domain."""
    domain = list(itertools.combinations(range(G.degree), k))
    index = {s: i for i, s in enumerate(domain)}
    images = []
    for g in G.gens:
        images.append(tuple(index[tuple(sorted(g.images[x] for x in s))]
                            for s in domain))
    labels = ["{" + ",".join(str(x + 1) for x in s) + "}" for s in domain]
    return PermAction(G, len(domain), images, labels=labels)


def orbit(action, point):
    """Orbit of a domain point with Schreier words.

    Returns (sorted orbit list, words) where words[q] is a word in the
    group generators moving point to q.
    """
    if not 0 <= point < action.n:
        raise ValueError(f"point {point} out of range [0, {action.n})")
    words = {point: ()}
    queue = [point]
    while queue:
        x = queue.pop()
        for j, im in enumerate(action.gen_images):
            y = im[x]
            if y not in words:
                words[y] = words[x] + (j + 1,)
                queue.append(y)
    return sorted(words), words


def canonical_coset_rep(H, g):
    """The canonical representative of the right coset H*g.

    Greedily minimizes the images of the base points of H's stabilizer
    chain; two elements get the same output iff they lie in the same coset.
    """
    Hg = H.group if isinstance(H, Subgroup) else H
    for lvl in Hg._levels:
        best_q = None
        best_pt = None
        for pt in lvl.transversal:
            q = g.images[pt]
            if best_q is None or q < best_q:
                best_q, best_pt = q, pt
        u, _ = lvl.rep(best_pt, Hg.degree)
        g = u * g
    return g


def coset_action(G, H):
    """The action of G on the right cosets of H, as a PermAction.

    The base coset is point 0; its stabilizer is exactly H.
    """
    Hgens = H.gens if isinstance(H, Subgroup) else H.gens
    for h in Hgens:
        if h not in G:
            raise ValueError("H is not a subgroup of G")
    index = G.order // (H.order if isinstance(H, Subgroup) else H.order)
    reps = [canonical_coset_rep(H, G.identity)]
    lookup = {reps[0].images: 0}
    frontier = [0]
    while frontier:
        i = frontier.pop(0)
        for s in G.gens:
            r = canonical_coset_rep(H, reps[i] * s)
            if r.images not in lookup:
                lookup[r.images] = len(reps)
                reps.append(r)
                frontier.append(len(reps) - 1)
    if len(reps) != index:
        raise AssertionError("coset enumeration mismatch")
    images = []
    for s in G.gens:
        images.append(tuple(lookup[canonical_coset_rep(H, r * s).images]
                            for r in reps))
    action = PermAction(G, len(reps), images,
                        labels=[format_cycles(r) for r in reps])
    action.coset_reps = reps
    action.coset_lookup = lookup
    action.coset_subgroup = H
    return action


def right_transversal(G, H):
    """Canonical representatives of the right cosets of H in G, id first."""
    act = coset_action(G, H)
    reps = act.coset_reps
    reps[0] = G.identity  # the base coset is H itself
    return reps


# -- sylow subgroups --------------------------------------------------------


def _p_part(n, p):
    m = 1
    while n % p == 0:
        n //= p
        m *= p
    return m


def sylow(G, p, seed=0):
    """A Sylow p-subgroup, found by powering random elements and climbing
    through normalizers until the index is prime to p."""
    from .ffla import check_prime
    check_prime(p)
    target = _p_part(G.order, p)
    if target == 1:
        return Subgroup(G, [])
    rng = random.Random(seed)

    def p_element(group):
        for _ in range(10000):
            r = group.random_element(rng)
            o = r.order()
            m = _p_part(o, p)
            if m > 1:
                return r ** (o // m)
        raise RuntimeError("failed to find a p-element")

    P = Subgroup(G, [p_element(G)])
    while P.order < target:
        N = normalizer(G, P)
        grown = False
        for _ in range(10000):
            n = N.group.random_element(rng)
            o = n.order()
            m = _p_part(o, p)
            if m == 1:
                continue
            y = n ** (o // m)
            if y not in P:
                P = Subgroup(G, list(P.gens) + [y])
                grown = True
                break
        if not grown:
            raise RuntimeError("sylow climb stalled")
    return P


# -- backtrack searches -----------------------------------------------------


def _orbit_data(gens, degree):
    """(orbit id per point, orbit size per point) for the group <gens>."""
    orbits = _orbit_partition(gens, degree)
    oid = [0] * degree
    osize = [0] * degree
    for i, orb in enumerate(orbits):
        for x in orb:
            oid[x] = i
            osize[x] = len(orb)
    return orbits, oid, osize


def _conjugates_into(K1, g, K2):
    """True iff K1^g <= K2."""
    return all(k.conjugate(g) in K2 for k in K1.gens)


def _chain_search(G, K1, K2, collect_all, bound):
    """Backtrack over G's stabilizer chain for elements g with K1^g = K2.

    Prunes on K1/K2 orbit sizes, on consistency of the induced orbit map,
    and (at the top level) by restricting the image of the first base point
    to the minimum of its K2-orbit, which visits at least one element of
    every coset g*K2 of the solution set.
    """
    if G.order > bound:
        raise BoundExceeded(f"group order {G.order} exceeds search bound {bound}")
    degree = G.degree
    orbs1, oid1, osize1 = _orbit_data(K1.gens, degree)
    orbs2, oid2, osize2 = _orbit_data(K2.gens, degree)
    if sorted(len(o) for o in orbs1) != sorted(len(o) for o in orbs2):
        return []
    levels = G._levels
    found = []
    # orbit_map[i] = j means K1-orbit i must map onto K2-orbit j
    orbit_map = {}
    inverse_map = {}

    def assign(pairs):
        added = []
        ok = True
        for x, q in pairs:
            a, b = oid1[x], oid2[q]
            if osize1[x] != osize2[q]:
                ok = False
                break
            if a in orbit_map:
                if orbit_map[a] != b:
                    ok = False
                    break
            elif b in inverse_map:
                ok = False
                break
            else:
                orbit_map[a] = b
                inverse_map[b] = a
                added.append(a)
        if not ok:
            for a in added:
                inverse_map.pop(orbit_map.pop(a))
        return ok, added

    def unassign(added):
        for a in added:
            inverse_map.pop(orbit_map.pop(a))

    def rec(i, t):
        if i == len(levels):
            if _conjugates_into(K1, t, K2):
                found.append(t)
                return not collect_all
            return False
        lvl = levels[i]
        for pt in sorted(lvl.transversal):
            q = t.images[pt]  # image of lvl.base under the completed element
            if i == 0:
                # restrict to minimal point of the K2-orbit of the image
                orb = orbs2[oid2[q]]
                if q != orb[0]:
                    continue
            ok, added = assign([(lvl.base, q)])
            if not ok:
                continue
            u, _ = lvl.rep(pt, degree)
            stop = rec(i + 1, u * t)
            unassign(added)
            if stop:
                return True
        return False

    rec(0, G.identity)
    return found


def reduce_generators(gens, degree):
    """Drop generators that do not grow the generated group, in order."""
    kept = []
    group = PermGroup([], degree=degree)
    for g in gens:
        if g not in group:
            kept.append(g)
            group = PermGroup(kept, degree=degree)
    return kept


def normalizer(G, K, bound=DEFAULT_BOUND):
    """The normalizer of K in G, by exhaustive pruned backtrack.

    The result contains K, normalizes it by construction, and is the full
    normalizer because the search visits at least one element of every
    coset g*K contained in it.
    """
    K = K if isinstance(K, Subgroup) else Subgroup(G, K.gens)
    for k in K.gens:
        if k not in G:
            raise ValueError("K is not a subgroup of G")
    elements = _chain_search(G, K, K, collect_all=True, bound=bound)
    gens = list(K.gens) + [g for g in elements if not g.is_identity()]
    return Subgroup(G, reduce_generators(gens, G.degree))


def conjugating_element(G, K1, K2, bound=DEFAULT_BOUND):
    """An element g of G with K1^g = K2, or None (certified by exhaustion)."""
    K1 = K1 if isinstance(K1, Subgroup) else Subgroup(G, K1.gens)
    K2 = K2 if isinstance(K2, Subgroup) else Subgroup(G, K2.gens)
    if K1.order != K2.order:
        return None
    found = _chain_search(G, K1, K2, collect_all=False, bound=bound)
    if not found:
        return None
    g = found[0]
    if not _conjugates_into(K1, g, K2):
        raise AssertionError("backtrack returned a non-conjugating element")
    return g


# -- fusion data ------------------------------------------------------------


class FusionData:
    """Representatives of the H-classes of subgroups of H fused to K in G.

    reps is a list of (K_i, g_i) with K_i <= H and K_i^{g_i} = K; the double
    cosets H g_i N_G(K) are pairwise distinct. t == 0 means K is not
    G-subconjugate into H.
    """

    def __init__(self, G, H, K, reps, normalizer_of_K):
        self.G = G
        self.H = H
        self.K = K
        self.reps = reps
        self.normalizer_of_K = normalizer_of_K

    @property
    def t(self):
        return len(self.reps)

    def __repr__(self):
        return f"FusionData(t={self.t})"


def fusion_data(G, H, K, bound=DEFAULT_BOUND):
    """Fusion of K into H inside G.

    Enumerates all G-conjugates of K lying inside H (one conjugate per
    coset of N_G(K), hence exhaustively), then groups them into
    H-conjugacy classes by certified backtrack searches.
    """
    H = H if isinstance(H, Subgroup) else Subgroup(G, H.gens)
    K = K if isinstance(K, Subgroup) else Subgroup(G, K.gens)
    N = normalizer(G, K, bound=bound)
    if G.order // N.order > bound:
        raise BoundExceeded("too many conjugates of K")
    reps = right_transversal(G, N)
    Hgroup = H.group
    classes = []  # list of (Subgroup of H, conjugator x with K^x = subgroup)
    for x in reps:
        if not _conjugates_into(K, x, H):
            continue
        S = Subgroup(Hgroup, [k.conjugate(x) for k in K.gens])
        if any(conjugating_element(Hgroup, S, C, bound=bound) is not None
               for C, _ in classes):
            continue
        classes.append((S, x))
    # put the class of K itself first, with the identity conjugator
    if _conjugates_into(K, G.identity, H):
        KinH = Subgroup(Hgroup, K.gens)
        for i, (C, x) in enumerate(classes):
            if conjugating_element(Hgroup, KinH, C, bound=bound) is not None:
                classes[i] = (KinH, G.identity)
                classes.insert(0, classes.pop(i))
                break
    pairs = [(C, x.inverse()) for C, x in classes]
    for C, g in pairs:
        if not (_conjugates_into(C, g, K) and
                Subgroup(G, [k.conjugate(g) for k in C.gens]).order == K.order):
            raise AssertionError("fusion representative fails verification")
    return FusionData(G, H, K, pairs, N)


# -- semidirect products ----------------------------------------------------


def semidirect_product(factors, Q, seed=0):
    """Split extension of a direct sum of elementary abelian groups by Q.

    Each factor is (q, d, mats) with q prime and mats one invertible d x d
    matrix over F_q per generator of Q. The result acts on the disjoint
    union of the affine point sets F_q^d, where the element (v, x) maps a
    point w to w*A_x + v, followed by a copy of the natural domain of Q
    (so the action is faithful even when some matrices are trivial).
    The homomorphism property of the matrices is certified by a relator
    spot-check followed by an exact order count.
    """
    from .ffla import FpMatrix, check_prime
    rng = random.Random(seed)
    total = 0
    enc = []
    for q, d, mats in factors:
        check_prime(q)
        if len(mats) != len(Q.gens):
            raise ValueError("need one action matrix per generator of Q")
        for m in mats:
            if m.p != q or m.rows != d or m.cols != d:
                raise ValueError("action matrix has wrong shape or modulus")
            if m.rank() != d:
                raise ValueError("action matrix is not invertible")
        enc.append((q, d, total))
        total += q ** d
    affine_total = total
    total += Q.degree

    def point_of(vec, q, d, offset):
        idx = 0
        for i in reversed(range(d)):
            idx = idx * q + int(vec[i]) % q
        return offset + idx

    def vec_of(point, q, d, offset):
        idx = point - offset
        vec = []
        for _ in range(d):
            vec.append(idx % q)
            idx //= q
        return vec

    def linear_perm(fidx, mat):
        q, d, offset = enc[fidx]
        images = list(range(total))
        for pt in range(offset, offset + q ** d):
            v = vec_of(pt, q, d, offset)
            w = [sum(v[i] * int(mat.a[i, j]) for i in range(d)) % q for j in range(d)]
            images[pt] = point_of(w, q, d, offset)
        return images

    def translation_perm(fidx, basis_index):
        q, d, offset = enc[fidx]
        images = list(range(total))
        for pt in range(offset, offset + q ** d):
            v = vec_of(pt, q, d, offset)
            v[basis_index] = (v[basis_index] + 1) % q
            images[pt] = point_of(v, q, d, offset)
        return images

    qgen_perms = []
    for j, qgen in enumerate(Q.gens):
        images = list(range(total))
        for fidx, (q, d, mats) in enumerate(factors):
            lp = linear_perm(fidx, mats[j])
            off = enc[fidx][2]
            for pt in range(off, off + q ** d):
                images[pt] = lp[pt]
        for pt in range(Q.degree):
            images[affine_total + pt] = affine_total + qgen.images[pt]
        qgen_perms.append(Perm(images))
    trans_perms = []
    for fidx, (q, d, mats) in enumerate(factors):
        for b in range(d):
            trans_perms.append(Perm(translation_perm(fidx, b)))

    # relator spot check: words trivial in Q must act trivially via the matrices
    k = len(Q.gens)
    if k:
        for _ in range(10):
            word = tuple(rng.randrange(1, k + 1) for _ in range(rng.randrange(1, 9)))
            g = Q.evaluate_word(word)
            member, sword = Q.sift(g)
            if not member:
                raise AssertionError("generator word left Q")
            relator = word + _inv_word(sword)
            for fidx, (q, d, mats) in enumerate(factors):
                acc = FpMatrix.identity(q, d)
                for x in relator:
                    m = mats[x - 1] if x > 0 else mats[-x - 1].inverse()
                    acc = acc @ m
                if not acc.is_identity():
                    raise ValueError("action matrices violate a relation of Q")

    group = PermGroup(trans_perms + qgen_perms, degree=total, seed=seed)
    expected = Q.order
    for q, d, _ in factors:
        expected *= q ** d
    if group.order != expected:
        raise ValueError(
            f"order certificate failed: got {group.order}, expected {expected}"
            " (the matrix action is not a faithful homomorphism)")
    group.translation_gens = tuple(trans_perms)
    group.quotient_gens = tuple(qgen_perms)
    group.factor_layout = tuple(enc)
    group.quotient_offset = affine_total
    return group


# -- structure invariants ----------------------------------------------------


def derived_subgroup(G):
    """The commutator subgroup, as the normal closure of generator commutators."""
    gens = []
    group = PermGroup([], degree=G.degree)
    for a, b in itertools.combinations_with_replacement(G.gens, 2):
        c = a.inverse() * b.inverse() * a * b
        if c not in group:
            gens.append(c)
            group = PermGroup(gens, degree=G.degree)
    changed = True
    while changed:
        changed = False
        for d in list(gens):
            for g in G.gens:
                c = d.conjugate(g)
                if c not in group:
                    gens.append(c)
                    group = PermGroup(gens, degree=G.degree)
                    changed = True
    return Subgroup(G, gens)


def abelianization_order(G):
    return G.order // derived_subgroup(G).order


def element_order_histogram(G, bound=10 ** 5):
    hist = {}
    for g in G.elements(bound=bound):
        o = g.order()
        hist[o] = hist.get(o, 0) + 1
    return dict(sorted(hist.items()))


def center_order(G, bound=10 ** 5):
    count = 0
    for g in G.elements(bound=bound):
        if all(g * s == s * g for s in G.gens):
            count += 1
    return count


def fingerprint(G, bound=10 ** 5):
    """Cheap isomorphism-type invariants used to recognize small groups."""
    return {
        "order": G.order,
        "abelianization": abelianization_order(G),
        "center": center_order(G, bound=bound),
        "order_histogram": tuple(sorted(element_order_histogram(G, bound=bound).items())),
    }


# -- file format -------------------------------------------------------------


def format_group(G):
    lines = [f"permgroup degree={G.degree}"]
    for g in G.gens:
        lines.append(format_cycles(g))
    return "\n".join(lines) + "\n"


def parse_group(text, filename="<string>", seed=0):
    from .errors import ParseError
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError(filename, 1, "empty group file")
    m = re.fullmatch(r"permgroup\s+degree=(\d+)", lines[0].strip())
    if not m:
        raise ParseError(filename, 1, f"bad header {lines[0]!r}")
    degree = int(m.group(1))
    gens = []
    for i, ln in enumerate(lines[1:], start=2):
        try:
            gens.append(parse_cycles(ln, degree))
        except ValueError as e:
            raise ParseError(filename, i, str(e)) from e
    return make_group(gens, seed=seed, degree=degree)

"""Type-level engine for crystals with reductive-group structure.

A classification tuple (Lie type, rank, number of cyclically permuted
factors n, diagram automorphism tau, minuscule-node assignment eta) is
stored in fixed Bourbaki coordinates per factor, with tau applied once at
the index wrap n -> 1.  From it we build the monomial crystal on roots and
read off: the largest slope delta, the node sets E/Etilde, nilpotency
classes, the stable-image invariant, adjoint Newton polygons, orbit
decompositions, isomorphism types of the attached positive/negative
p-divisible groups, duality exponents, and weight-enumeration counts.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from . import roots as rootsys
from .polygons import NewtonPolygon
from .roots import DiagramAutomorphism, RootSystem
from .witt import SemilinearMap, WittRingParams, witt_ring

Q = Fraction
Label = Tuple
Root = Tuple[int, ...]


class IllegalEtaNode(ValueError):
    pass


class IllegalAutomorphismOrder(ValueError):
    pass


class EmptyI1(ValueError):
    pass


class IncompatibleSteps(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomial crystals
# ---------------------------------------------------------------------------


class MonomialCrystal:
    """A basis permuted by Frobenius with integer p-exponents.

    ``step`` maps each label to its Frobenius image; ``exp`` gives the
    p-power applied at that step.  ``filt``, when present, records the
    Hodge filtration weight of each basis line.
    """

    def __init__(
        self,
        labels: Sequence[Label],
        step: Dict[Label, Label],
        exp: Dict[Label, int],
        filt: Optional[Dict[Label, int]] = None,
    ):
        self.labels: Tuple[Label, ...] = tuple(labels)
        lab = set(self.labels)
        if len(lab) != len(self.labels):
            raise IncompatibleSteps("duplicate labels")
        if set(step) != lab or set(step.values()) != lab:
            raise IncompatibleSteps("step is not a bijection of the basis")
        if set(exp) != lab:
            raise IncompatibleSteps("exp must be defined on every label")
        self.step = dict(step)
        self.exp = {l: int(exp[l]) for l in self.labels}
        self.filt = None if filt is None else {l: int(filt[l]) for l in self.labels}

    @property
    def rank(self) -> int:
        return len(self.labels)

    def orbits(self) -> List[List[Label]]:
        """Step-orbits, each listed in step order from a deterministic start."""
        seen: Set[Label] = set()
        out: List[List[Label]] = []
        for start in sorted(self.labels, key=repr):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            cur = self.step[start]
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                cur = self.step[cur]
            out.append(cyc)
        return out

    def orbit_words(self) -> List[Tuple[Label, Tuple[int, ...]]]:
        return [(cyc[0], tuple(self.exp[l] for l in cyc)) for cyc in self.orbits()]

    def newton_polygon(self) -> NewtonPolygon:
        pairs: Dict[Q, int] = {}
        for _, word in self.orbit_words():
            s = Q(sum(word), len(word))
            pairs[s] = pairs.get(s, 0) + len(word)
        return NewtonPolygon(pairs.items())

    def restrict(self, keep) -> "MonomialCrystal":
        """Sub-crystal on the labels satisfying ``keep`` (must be step-stable)."""
        labels = [l for l in self.labels if keep(l)]
        lab = set(labels)
        if any(self.step[l] not in lab for l in labels):
            raise IncompatibleSteps("restriction is not step-stable")
        return MonomialCrystal(
            labels,
            {l: self.step[l] for l in labels},
            {l: self.exp[l] for l in labels},
            None if self.filt is None else {l: self.filt[l] for l in labels},
        )

    def complemented(self) -> "MonomialCrystal":
        """Same step, exponents e -> 1 - e (mirror of a 0/1 crystal)."""
        return MonomialCrystal(
            self.labels,
            self.step,
            {l: 1 - self.exp[l] for l in self.labels},
            None
            if self.filt is None
            else {l: 1 - self.filt[l] for l in self.labels},
        )

    def lift_to_witt(self, p: int, m: int, r: int = 1) -> SemilinearMap:
        """The monomial matrix p^exp(l) at (step(l), l) over W_m(F_{p^r})."""
        if any(e < 0 for e in self.exp.values()):
            raise ValueError("lift requires non-negative exponents")
        ring = witt_ring(p, r, m)
        idx = {l: i for i, l in enumerate(self.labels)}
        n = self.rank
        rows = [[0] * n for _ in range(n)]
        for l in self.labels:
            rows[idx[self.step[l]]][idx[l]] = p ** self.exp[l]
        return SemilinearMap(ring, rows, twist=1)


def tensor_crystal(factors: Sequence[MonomialCrystal]) -> MonomialCrystal:
    """Componentwise product: basis tuples, exponents added, steps composed."""
    if not factors:
        raise IncompatibleSteps("need at least one factor")
    import itertools

    labels = list(itertools.product(*[f.labels for f in factors]))
    step = {
        t: tuple(f.step[c] for f, c in zip(factors, t)) for t in labels
    }
    exp = {t: sum(f.exp[c] for f, c in zip(factors, t)) for t in labels}
    filt = None
    if all(f.filt is not None for f in factors):
        filt = {t: sum(f.filt[c] for f, c in zip(factors, t)) for t in labels}
    return MonomialCrystal(labels, step, exp, filt)


def slope_zero_multiplicity(mc: MonomialCrystal) -> int:
    """Number of basis elements in orbits whose exponent word sums to zero."""
    return sum(
        len(word) for _, word in mc.orbit_words() if sum(word) == 0
    )


# ---------------------------------------------------------------------------
# circular words and p-divisible types
# ---------------------------------------------------------------------------


def minimal_period(word: Sequence[int]) -> int:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and all(word[i] == word[i % d] for i in range(n)):
            return d
    return n


def canonical_rotation(word: Sequence[int]) -> Tuple[int, ...]:
    w = tuple(word)
    return min(w[i:] + w[:i] for i in range(len(w)))


class PDivTypeMultiset:
    """Isomorphism type of a cyclic p-divisible group: a multiset of
    circular indecomposables (rank d, aperiodic 0/1 word up to rotation)."""

    def __init__(self, entries: Iterable[Tuple[Tuple[int, ...], int]]):
        self.counter: Counter = Counter()
        for word, mult in entries:
            word = canonical_rotation(word)
            if minimal_period(word) != len(word):
                raise ValueError(f"word {word} is periodic")
            self.counter[word] += mult

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]]) -> "PDivTypeMultiset":
        return cls((tuple(w), 1) for w in words)

    @property
    def height(self) -> int:
        return sum(len(w) * m for w, m in self.counter.items())

    @property
    def dimension(self) -> int:
        return sum(sum(w) * m for w, m in self.counter.items())

    def newton_polygon(self) -> NewtonPolygon:
        pairs: Dict[Q, int] = {}
        for w, m in self.counter.items():
            s = Q(sum(w), len(w))
            pairs[s] = pairs.get(s, 0) + len(w) * m
        return NewtonPolygon(pairs.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, PDivTypeMultiset) and self.counter == other.counter

    def __repr__(self) -> str:
        return f"PDivTypeMultiset({self.format()})"

    @staticmethod
    def _name(word: Tuple[int, ...]) -> str:
        d, s = len(word), sum(word)
        if word == (1,):
            return "mu"
        if word == (0,):
            return "et"
        if s == 1:
            return f"D[1/{d}]"
        if s == d - 1:
            return f"D[{d - 1}/{d}]"
        if word == canonical_rotation((1, 1, 0, 0)):
            return "D[2,4]"
        return "C" + "".join(str(b) for b in word)

    def format(self) -> str:
        if not self.counter:
            return "0"
        parts = []
        for w in sorted(self.counter, key=lambda w: (-Q(sum(w), len(w)), len(w))):
            m = self.counter[w]
            name = self._name(w)
            parts.append(name if m == 1 else f"{name}^{m}")
        return " + ".join(parts)

    def to_json(self) -> list:
        return sorted(
            [[list(w), m] for w, m in self.counter.items()],
            key=lambda e: (len(e[0]), e[0]),
        )


def circular_decomposition(mc: MonomialCrystal) -> PDivTypeMultiset:
    """Split every step-orbit of minimal period d into length/d copies of
    the rank-d aperiodic rotation class of its exponent word."""
    entries: List[Tuple[Tuple[int, ...], int]] = []
    for _, word in mc.orbit_words():
        d = minimal_period(word)
        entries.append((canonical_rotation(word[:d]), len(word) // d))
    return PDivTypeMultiset(entries)


# ---------------------------------------------------------------------------
# classification tuples
# ---------------------------------------------------------------------------


class ShimuraTypeSpec:
    """Classification tuple (lie_type, rank, n, tau, eta) in fixed coordinates.

    eta assigns to each of the n cyclically permuted factors either 0 or a
    minuscule node; tau is a diagram automorphism applied once at the wrap
    n -> 1.  Construction normalizes by rotation so that eta[0] != 0.
    """

    def __init__(
        self,
        lie_type: str,
        rank: int,
        n: int,
        tau: Optional[DiagramAutomorphism] = None,
        eta: Sequence[int] = (),
    ):
        if n < 1:
            raise IllegalAutomorphismOrder("need n >= 1 factors")
        self.rs: RootSystem = rootsys.build_root_system(lie_type, rank)
        self.lie_type = lie_type
        self.rank = rank
        self.n = n
        if tau is None:
            tau = DiagramAutomorphism.identity(lie_type, rank)
        if (tau.lie_type, tau.rank) != (lie_type, rank):
            raise IllegalAutomorphismOrder("tau belongs to a different diagram")
        e = tau.order()
        if e not in (1, 2, 3):
            raise IllegalAutomorphismOrder(f"tau has order {e}")
        if e == 2 and not (
            (lie_type == "A" and rank >= 2) or lie_type in ("D", "E6")
        ):
            raise IllegalAutomorphismOrder(f"order 2 not allowed for {lie_type}{rank}")
        if e == 3 and (lie_type, rank) != ("D", 4):
            raise IllegalAutomorphismOrder("order 3 only for D4")
        self.tau = tau
        self.e = e

        eta = tuple(int(v) for v in eta)
        if len(eta) != n:
            raise IllegalEtaNode(f"eta must have length n = {n}")
        allowed = rootsys.minuscule_nodes(lie_type, rank)
        for v in eta:
            if v != 0 and v not in allowed:
                raise IllegalEtaNode(f"node {v} is not minuscule for {lie_type}{rank}")
        if all(v == 0 for v in eta):
            raise EmptyI1("eta vanishes on every factor")
        # rotate so eta[0] != 0; entries rotated past the wrap pick up the
        # inverse automorphism (root labels move forward through the wrap)
        k = next(i for i, v in enumerate(eta) if v != 0)
        if k:
            eta = tuple(
                eta[i + k]
                if i + k < n
                else (tau.node_inv(eta[i + k - n]) if eta[i + k - n] else 0)
                for i in range(n)
            )
        self.eta = eta

    # -- derived data ------------------------------------------------------

    @property
    def I1(self) -> Tuple[int, ...]:
        return tuple(i + 1 for i, v in enumerate(self.eta) if v != 0)

    def en_tuple(self) -> Tuple[int, ...]:
        """The length-(e*n) node word: eta twisted by successive tau powers."""
        out: List[int] = []
        for s in range(self.e):
            ts = self.tau.power(s)
            out.extend(ts.node(v) if v else 0 for v in self.eta)
        return tuple(out)

    def __repr__(self) -> str:
        return (
            f"ShimuraTypeSpec({self.lie_type}{self.rank}, n={self.n}, "
            f"e={self.e}, eta={self.eta})"
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ShimuraTypeSpec) and (
            self.lie_type,
            self.rank,
            self.n,
            self.tau.perm,
            self.eta,
        ) == (other.lie_type, other.rank, other.n, other.tau.perm, other.eta)


def validate(
    lie_type: str,
    rank: int,
    n: int,
    tau: Optional[Sequence[int]] = None,
    eta: Sequence[int] = (),
) -> ShimuraTypeSpec:
    """Build and normalize a classification tuple from raw data."""
    auto = (
        DiagramAutomorphism(lie_type, rank, tau)
        if tau is not None
        else DiagramAutomorphism.identity(lie_type, rank)
    )
    return ShimuraTypeSpec(lie_type, rank, n, auto, eta)


def delta(spec: ShimuraTypeSpec) -> Q:
    """The largest adjoint slope |I1| / n."""
    return Q(len(spec.I1), spec.n)


def epsilon_sets(spec: ShimuraTypeSpec) -> Tuple[Set[int], Set[int]]:
    """The node sets (E, Etilde): nodes hit by the en-tuple, and their
    interval-hull reduction in type A (extreme nodes only)."""
    E = {v for v in spec.en_tuple() if v != 0}
    if spec.lie_type == "A":
        Et = {min(E), max(E)}
    else:
        Et = set(E)
    return E, Et


def nilpotency_classes(spec: ShimuraTypeSpec) -> Tuple[int, int]:
    E, Et = epsilon_sets(spec)
    return len(E), len(Et)


def fshw_invariant(spec: ShimuraTypeSpec) -> int:
    """n times the number of positive roots containing every node of Etilde;
    equals the multiplicity of the slope -delta in the adjoint polygon."""
    _, Et = epsilon_sets(spec)
    return spec.n * rootsys.intersect_nilradicals(spec.rs, Et)


# ---------------------------------------------------------------------------
# the adjoint monomial crystal
# ---------------------------------------------------------------------------


def _root_step(spec: ShimuraTypeSpec, a: Root, i: int) -> Tuple[Root, int]:
    if i < spec.n:
        return a, i + 1
    return spec.tau.root(a), 1


def adjoint_crystal(spec: ShimuraTypeSpec) -> MonomialCrystal:
    """Monomial crystal on all roots times factors, plus n*rank Cartan
    labels of exponent zero."""
    rs = spec.rs
    labels: List[Label] = []
    step: Dict[Label, Label] = {}
    exp: Dict[Label, int] = {}
    for a in rs.roots:
        for i in range(1, spec.n + 1):
            l = ("r", a, i)
            labels.append(l)
            b, j = _root_step(spec, a, i)
            step[l] = ("r", b, j)
            node = spec.eta[i - 1]
            exp[l] = a[node - 1] if node else 0
    for c in range(1, spec.rank + 1):
        for i in range(1, spec.n + 1):
            l = ("h", c, i)
            labels.append(l)
            step[l] = ("h", c, i + 1) if i < spec.n else ("h", spec.tau.node(c), 1)
            exp[l] = 0
    return MonomialCrystal(labels, step, exp, filt=dict(exp))


def adjoint_newton_polygon(spec: ShimuraTypeSpec) -> NewtonPolygon:
    return adjoint_crystal(spec).newton_polygon()


def _positive_support(spec: ShimuraTypeSpec) -> Set[Root]:
    E, _ = epsilon_sets(spec)
    return {a for a in spec.rs.positive if any(a[x - 1] >= 1 for x in E)}


def positive_crystal(spec: ShimuraTypeSpec) -> MonomialCrystal:
    """The adjoint crystal restricted to positive roots supported on E."""
    support = _positive_support(spec)
    mc = adjoint_crystal(spec)
    return mc.restrict(lambda l: l[0] == "r" and l[1] in support)


def positive_pdiv_type(spec: ShimuraTypeSpec) -> PDivTypeMultiset:
    """Isomorphism type of the positive p-divisible group."""
    return circular_decomposition(positive_crystal(spec))


def negative_pdiv_type(spec: ShimuraTypeSpec) -> PDivTypeMultiset:
    """Mirror type: complemented words on the negated roots."""
    return circular_decomposition(positive_crystal(spec).complemented())


# ---------------------------------------------------------------------------
# minimal orbit decomposition
# ---------------------------------------------------------------------------


class Orbit:
    """One tau-orbit of positive roots supported on E."""

    __slots__ = ("roots", "length", "word", "slope", "type2", "weight")

    def __init__(self, roots, length, word, slope, type2, weight):
        self.roots: Tuple[Root, ...] = roots
        self.length = length  # n * |orbit|
        self.word: Tuple[int, ...] = word
        self.slope: Q = slope
        self.type2: bool = type2
        self.weight = weight  # sum over E of root coefficients, the ordering key

    def __repr__(self) -> str:
        kind = 2 if self.type2 else 1
        return f"Orbit(roots={self.roots}, word={self.word}, type={kind})"


class OrbitDecomposition:
    def __init__(self, spec: ShimuraTypeSpec, orbits: List[Orbit], j3):
        self.spec = spec
        self.orbits = orbits
        self.j3: List[Tuple[int, int, int]] = j3

    def pdiv_type(self) -> PDivTypeMultiset:
        entries = []
        for o in self.orbits:
            d = minimal_period(o.word)
            entries.append((canonical_rotation(o.word[:d]), len(o.word) // d))
        return PDivTypeMultiset(entries)

    def __repr__(self) -> str:
        return f"OrbitDecomposition({len(self.orbits)} orbits, J3={self.j3})"


def minimal_decomposition(spec: ShimuraTypeSpec) -> OrbitDecomposition:
    """tau-orbits on the positive roots supported on E, ordered by
    descending coefficient weight (ties by root coordinates), with type-2
    flags and the commutator triples found by root addition."""
    rs = spec.rs
    E, _ = epsilon_sets(spec)
    support = _positive_support(spec)
    pos_crystal = positive_crystal(spec)

    seen: Set[Root] = set()
    orbit_of: Dict[Root, int] = {}
    raw: List[Tuple[Root, ...]] = []
    for a in sorted(support):
        if a in seen:
            continue
        orb = [a]
        seen.add(a)
        b = spec.tau.root(a)
        while b != a:
            orb.append(b)
            seen.add(b)
            b = spec.tau.root(b)
        for r in orb:
            orbit_of[r] = len(raw)
        raw.append(tuple(sorted(orb)))

    exceptional = spec.lie_type == "A" and spec.e == 2 and spec.rank % 2 == 0

    orbits: List[Orbit] = []
    for orb in raw:
        rep = orb[0]
        weight = sum(rep[x - 1] for x in E)
        # exponent word read off the positive crystal orbit through (rep, 1)
        word = None
        for lbl, w in pos_crystal.orbit_words():
            if lbl[1] in orb:
                word = w
                break
        assert word is not None
        type2 = False
        if exceptional:
            sums = {
                tuple(x + y for x, y in zip(a, b))
                for a in orb
                for b in orb
            }
            type2 = any(s in rs._root_set for s in sums)
        orbits.append(
            Orbit(orb, len(word), word, Q(sum(word), len(word)), type2, weight)
        )

    order = sorted(
        range(len(orbits)), key=lambda i: (-orbits[i].weight, orbits[i].roots)
    )
    rank_of = {old: new for new, old in enumerate(order)}
    orbits = [orbits[i] for i in order]

    j3: List[Tuple[int, int, int]] = []
    for i1, o1 in enumerate(orbits):
        for i2, o2 in enumerate(orbits):
            targets = set()
            for a in o1.roots:
                for b in o2.roots:
                    s = tuple(x + y for x, y in zip(a, b))
                    if s in rs._root_set:
                        targets.add(rank_of[orbit_of[s]])
            if targets:
                assert len(targets) == 1, "commutator target orbit is not unique"
                j3.append((i1, i2, targets.pop()))
    return OrbitDecomposition(spec, orbits, j3)


def duality_exponents(spec: ShimuraTypeSpec, p: int) -> List[int]:
    """Per orbit: the p-valuation of the Killing pairing of any of its roots."""
    if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    dec = minimal_decomposition(spec)
    out = []
    for o in dec.orbits:
        kappa = rootsys.killing_pairing(spec.rs, o.roots[0])
        v = 0
        while kappa % p == 0:
            kappa //= p
            v += 1
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# sign-word counts
# ---------------------------------------------------------------------------


def count_nu(n: int) -> Tuple[int, int]:
    """Number of torus-Levi twists among the 2^n sign choices for a cyclic
    product of n rank-one factors: closed form and exhaustive count.

    Closed form: 2^(n-1) for odd n, 2^(n-1) - C(n-1, n/2) for even n.
    Oracle: a twist fails (all adjoint slopes zero) iff its sign word
    theta has theta_{n+1} = -1, or theta_{n+1} = 1 with zero sum.
    """
    if not 1 <= n <= 24:
        raise ValueError("supported range is 1 <= n <= 24")
    if n % 2:
        formula = 2 ** (n - 1)
    else:
        formula = 2 ** (n - 1) - math.comb(n - 1, n // 2)

    zero = 0
    for bits in range(2**n):
        # theta_1 = +1; bits encode theta_2 .. theta_{n+1} (1 = minus)
        theta_last = -1 if (bits >> (n - 1)) & 1 else 1
        minus_inner = bin(bits & ((1 << (n - 1)) - 1)).count("1")
        total = 1 + (n - 1) - 2 * minus_inner  # sum of theta_1 .. theta_n
        if theta_last == -1 or total == 0:
            zero += 1
    oracle = 2**n - zero
    return formula, oracle


def sign_twist_crystal(n: int, flips: Sequence[bool]) -> MonomialCrystal:
    """Adjoint crystal of a cyclic product of n rank-one factors with the
    given per-step sign flips; used as the from-definition count oracle."""
    if len(flips) != n:
        raise IncompatibleSteps("one flip flag per factor")
    labels: List[Label] = []
    step: Dict[Label, Label] = {}
    exp: Dict[Label, int] = {}
    for i in range(1, n + 1):
        for kind in ("+", "-", "h"):
            labels.append((kind, i))
    for i in range(1, n + 1):
        j = i + 1 if i < n else 1
        swap = flips[j - 1]
        step[("+", i)] = ("-", j) if swap else ("+", j)
        step[("-", i)] = ("+", j) if swap else ("-", j)
        step[("h", i)] = ("h", j)
        exp[("+", i)] = 1
        exp[("-", i)] = -1
        exp[("h", i)] = 0
    return MonomialCrystal(labels, step, exp)


# ---------------------------------------------------------------------------
# block endomorphism crystals
# ---------------------------------------------------------------------------


def adjoint_of_module_crystal(
    mc: MonomialCrystal, blocks: Sequence[Sequence[Label]]
) -> MonomialCrystal:
    """Adjoint (block-diagonal trace-zero endomorphism) crystal of a
    monomial module crystal whose step permutes the given blocks.

    Off-diagonal labels (block, l1, l2) carry exponent exp(l1) - exp(l2);
    each block contributes size-1 Cartan labels of exponent zero.
    """
    block_of: Dict[Label, int] = {}
    for bi, blk in enumerate(blocks):
        for l in blk:
            block_of[l] = bi
    if set(block_of) != set(mc.labels):
        raise IncompatibleSteps("blocks must partition the basis")
    nb = len(blocks)
    gamma: Dict[int, int] = {}
    for bi, blk in enumerate(blocks):
        images = {block_of[mc.step[l]] for l in blk}
        if len(images) != 1:
            raise IncompatibleSteps(f"step does not map block {bi} into one block")
        gamma[bi] = images.pop()

    labels: List[Label] = []
    step: Dict[Label, Label] = {}
    exp: Dict[Label, int] = {}
    for bi, blk in enumerate(blocks):
        for l1 in blk:
            for l2 in blk:
                if l1 == l2:
                    continue
                lbl = ("E", l1, l2)
                labels.append(lbl)
                step[lbl] = ("E", mc.step[l1], mc.step[l2])
                exp[lbl] = mc.exp[l1] - mc.exp[l2]
        for c in range(1, len(blk)):
            lbl = ("H", bi, c)
            labels.append(lbl)
            step[lbl] = ("H", gamma[bi], c)
            exp[lbl] = 0
    return MonomialCrystal(labels, step, exp)

"""Root systems for types A, B, C, D, E6, E7 in Bourbaki coordinates.

Roots are stored as integer coefficient tuples over the simple-root basis
(Bourbaki numbering).  Weyl groups are enumerated by closure under simple
reflections; diagram automorphisms act on nodes and, coefficient-wise, on
roots.  The Killing pairing of a root pair (e_a, e_{-a}) is computed as an
exact integer trace from root strings, with no structure-constant signs.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

Root = Tuple[int, ...]


class UnsupportedType(ValueError):
    pass


class NodeOutOfRange(ValueError):
    pass


class EnumerationBoundExceeded(RuntimeError):
    pass


_RANK_RANGE = {
    "A": (1, None),
    "B": (1, None),
    "C": (3, None),
    "D": (4, None),
    "E6": (6, 6),
    "E7": (7, 7),
}


def cartan_matrix(lie_type: str, rank: int) -> Tuple[Tuple[int, ...], ...]:
    """Cartan matrix C[i][j] = <alpha_j, alpha_i-coroot>, Bourbaki numbering."""
    n = rank
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2

    def join(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if lie_type in ("A", "B", "C"):
        for i in range(n - 1):
            join(i, i + 1)
        if lie_type == "B" and n >= 2:
            # alpha_n short: <alpha_{n-1}, alpha_n-coroot> = -2
            C[n - 1][n - 2] = -2
        if lie_type == "C":
            C[n - 2][n - 1] = -2
    elif lie_type == "D":
        for i in range(n - 2):
            join(i, i + 1)
        join(n - 3, n - 1)
    elif lie_type in ("E6", "E7"):
        chain = [0, 2, 3, 4, 5] if lie_type == "E6" else [0, 2, 3, 4, 5, 6]
        for a, b in zip(chain, chain[1:]):
            join(a, b)
        join(1, 3)  # node 2 hangs off node 4
    else:
        raise UnsupportedType(f"unsupported Lie type {lie_type!r}")
    return tuple(tuple(row) for row in C)


class RootSystem:
    """All roots of an irreducible system, in simple-root integer coordinates."""

    def __init__(self, lie_type: str, rank: int):
        if lie_type not in _RANK_RANGE:
            raise UnsupportedType(f"unsupported Lie type {lie_type!r}")
        lo, hi = _RANK_RANGE[lie_type]
        if rank < lo or (hi is not None and rank != hi):
            raise UnsupportedType(f"rank {rank} out of range for type {lie_type}")
        self.lie_type = lie_type
        self.rank = rank
        self.cartan = cartan_matrix(lie_type, rank)
        self.simple: Tuple[Root, ...] = tuple(
            tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)
        )
        roots: Set[Root] = set(self.simple)
        frontier = list(self.simple)
        while frontier:
            nxt = []
            for a in frontier:
                for i in range(rank):
                    b = self.reflect(i + 1, a)
                    if b not in roots:
                        roots.add(b)
                        nxt.append(b)
            frontier = nxt
        self.roots: Tuple[Root, ...] = tuple(sorted(roots))
        self.positive: FrozenSet[Root] = frozenset(
            a for a in roots if all(c >= 0 for c in a)
        )
        assert len(self.positive) * 2 == len(self.roots)
        self.highest_root: Root = max(self.positive, key=sum)
        self._root_set = roots

    # -- elementary queries ----------------------------------------------

    def is_root(self, a: Sequence[int]) -> bool:
        return tuple(a) in self._root_set

    def check_node(self, x: int) -> int:
        if not 1 <= x <= self.rank:
            raise NodeOutOfRange(f"node {x} outside 1..{self.rank}")
        return x

    def pairing(self, a: Root, i: int) -> int:
        """<a, alpha_i-coroot> for the i-th simple coroot (1-indexed)."""
        return sum(self.cartan[i - 1][j] * a[j] for j in range(self.rank))

    def reflect(self, i: int, a: Root) -> Root:
        c = self.pairing(a, i)
        if c == 0:
            return tuple(a)
        out = list(a)
        out[i - 1] -= c
        return tuple(out)

    def root_string(self, a: Root, b: Root) -> Tuple[int, int]:
        """(p, q) with b - p a, ..., b + q a the a-string through b."""
        p = 0
        cur = tuple(x - y for x, y in zip(b, a))
        while cur in self._root_set:
            p += 1
            cur = tuple(x - y for x, y in zip(cur, a))
        q = 0
        cur = tuple(x + y for x, y in zip(b, a))
        while cur in self._root_set:
            q += 1
            cur = tuple(x + y for x, y in zip(cur, a))
        return p, q

    def __repr__(self) -> str:
        return f"RootSystem({self.lie_type}{self.rank}, {len(self.roots)} roots)"


_CACHE: Dict[Tuple[str, int], RootSystem] = {}


def build_root_system(lie_type: str, rank: int) -> RootSystem:
    key = (lie_type, rank)
    if key not in _CACHE:
        _CACHE[key] = RootSystem(lie_type, rank)
    return _CACHE[key]


# ---------------------------------------------------------------------------
# nodes and nilradicals
# ---------------------------------------------------------------------------


def minuscule_nodes(lie_type: str, rank: int) -> Set[int]:
    """Nodes whose coefficient in the highest root is exactly 1."""
    rs = build_root_system(lie_type, rank)
    return {i + 1 for i, c in enumerate(rs.highest_root) if c == 1}


def nilradical_roots(rs: RootSystem, x: int) -> Set[Root]:
    """Positive roots whose expression contains alpha_x."""
    rs.check_node(x)
    return {a for a in rs.positive if a[x - 1] >= 1}


def intersect_nilradicals(rs: RootSystem, nodes) -> int:
    """Number of positive roots containing alpha_x for every x in nodes."""
    nodes = list(nodes)
    if not nodes:
        raise NodeOutOfRange("need at least one node")
    for x in nodes:
        rs.check_node(x)
    return sum(1 for a in rs.positive if all(a[x - 1] >= 1 for x in nodes))


def intersect_nilradical_roots(rs: RootSystem, nodes) -> Set[Root]:
    return {a for a in rs.positive if all(a[x - 1] >= 1 for x in nodes)}


# ---------------------------------------------------------------------------
# Weyl elements
# ---------------------------------------------------------------------------


class WeylElement:
    """An element of W as an integer matrix in simple-root coordinates."""

    __slots__ = ("rs", "matrix")

    def __init__(self, rs: RootSystem, matrix: Tuple[Tuple[int, ...], ...]):
        self.rs = rs
        self.matrix = matrix

    @classmethod
    def identity(cls, rs: RootSystem) -> "WeylElement":
        n = rs.rank
        return cls(rs, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def simple_reflection(cls, rs: RootSystem, i: int) -> "WeylElement":
        rs.check_node(i)
        cols = [rs.reflect(i, a) for a in rs.simple]
        n = rs.rank
        return cls(rs, tuple(tuple(cols[j][k] for j in range(n)) for k in range(n)))

    def apply(self, a: Sequence[int]) -> Root:
        n = self.rs.rank
        return tuple(
            sum(self.matrix[k][j] * a[j] for j in range(n)) for k in range(n)
        )

    def compose(self, other: "WeylElement") -> "WeylElement":
        n = self.rs.rank
        A, B = self.matrix, other.matrix
        M = tuple(
            tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        return WeylElement(self.rs, M)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"WeylElement({self.matrix})"


def weyl_elements(rs: RootSystem, bound: int = 10**6) -> Iterator[WeylElement]:
    """All Weyl elements, generated by simple reflections with dedup.

    Raises EnumerationBoundExceeded as soon as more than ``bound`` elements
    appear; E7 (order 2903040) needs the bound raised explicitly.
    """
    gens = [WeylElement.simple_reflection(rs, i + 1) for i in range(rs.rank)]
    seen = {WeylElement.identity(rs).matrix}
    frontier = [WeylElement.identity(rs)]
    yield frontier[0]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                u = s.compose(w)
                if u.matrix not in seen:
                    seen.add(u.matrix)
                    if len(seen) > bound:
                        raise EnumerationBoundExceeded(
                            f"Weyl group larger than bound {bound}"
                        )
                    nxt.append(u)
                    yield u
        frontier = nxt


def weyl_order(lie_type: str, rank: int) -> int:
    """|W| from the product-of-degrees formula (independent of enumeration)."""
    import math

    if lie_type == "A":
        return math.factorial(rank + 1)
    if lie_type in ("B", "C"):
        return 2**rank * math.factorial(rank)
    if lie_type == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    if lie_type == "E6":
        degrees = [2, 5, 6, 8, 9, 12]
    elif lie_type == "E7":
        degrees = [2, 6, 8, 10, 12, 14, 18]
    else:
        raise UnsupportedType(lie_type)
    out = 1
    for d in degrees:
        out *= d
    return out


def projection_dim(rs: RootSystem, x: int, w: WeylElement, y: int) -> int:
    """Dimension of the projection of the w-conjugated nilradical at node y
    onto the nilradical at node x, along the opposite parabolic.

    Root bookkeeping: count roots b of the radical at y with w(b) in the
    radical at x (computed on the positive-root mirrors)."""
    uy = nilradical_roots(rs, y)
    ux = nilradical_roots(rs, x)
    return sum(1 for b in uy if w.apply(b) in ux)


# ---------------------------------------------------------------------------
# Killing pairing from root strings (sign-free)
# ---------------------------------------------------------------------------


def killing_pairing(rs: RootSystem, a: Root) -> int:
    """Exact integer trace of ad(e_a).ad(e_{-a}) over the Chevalley lattice.

    The e_b-diagonal entry is p(q+1) from the a-string through b; together
    with 2 from the Cartan block and 2 from b = a itself the result is
    sign-free.  Constant on Weyl orbits of roots.
    """
    a = tuple(a)
    if a not in rs._root_set:
        raise NodeOutOfRange(f"{a} is not a root")
    neg = tuple(-c for c in a)
    total = 4  # Cartan block and the b = a term
    for b in rs.roots:
        if b == a or b == neg:
            continue
        p, q = rs.root_string(a, b)
        if p:
            total += p * (q + 1)
    return total


# ---------------------------------------------------------------------------
# diagram automorphisms
# ---------------------------------------------------------------------------


class DiagramAutomorphism:
    """A node permutation preserving the Dynkin diagram (= the Cartan matrix)."""

    def __init__(self, lie_type: str, rank: int, perm: Optional[Sequence[int]] = None):
        self.lie_type = lie_type
        self.rank = rank
        if perm is None:
            perm = tuple(range(1, rank + 1))
        perm = tuple(int(v) for v in perm)
        if sorted(perm) != list(range(1, rank + 1)):
            raise NodeOutOfRange(f"{perm} is not a permutation of 1..{rank}")
        C = cartan_matrix(lie_type, rank)
        for i in range(rank):
            for j in range(rank):
                if C[perm[i] - 1][perm[j] - 1] != C[i][j]:
                    raise NodeOutOfRange(f"{perm} does not preserve the diagram")
        self.perm = perm
        self._inv = tuple(
            self.perm.index(i + 1) + 1 for i in range(rank)
        )

    @classmethod
    def identity(cls, lie_type: str, rank: int) -> "DiagramAutomorphism":
        return cls(lie_type, rank)

    @classmethod
    def flip(cls, lie_type: str, rank: int) -> "DiagramAutomorphism":
        """The standard order-2 automorphism (A: reversal, D: swap of the
        fork nodes, E6: reversal of the long chain)."""
        if lie_type == "A":
            perm = tuple(range(rank, 0, -1))
        elif lie_type == "D":
            perm = tuple(range(1, rank - 1)) + (rank, rank - 1)
        elif lie_type == "E6":
            perm = (6, 2, 5, 4, 3, 1)
        else:
            raise UnsupportedType(f"no standard flip for type {lie_type}")
        return cls(lie_type, rank, perm)

    @classmethod
    def triality(cls, lie_type: str, rank: int) -> "DiagramAutomorphism":
        if lie_type != "D" or rank != 4:
            raise UnsupportedType("triality exists only for D4")
        return cls("D", 4, (3, 2, 4, 1))

    def node(self, i: int) -> int:
        return self.perm[i - 1]

    def node_inv(self, i: int) -> int:
        return self._inv[i - 1]

    def root(self, a: Root) -> Root:
        out = [0] * self.rank
        for i, c in enumerate(a):
            out[self.perm[i] - 1] = c
        return tuple(out)

    def order(self) -> int:
        e = 1
        cur = self.perm
        ident = tuple(range(1, self.rank + 1))
        while cur != ident:
            cur = tuple(self.perm[c - 1] for c in cur)
            e += 1
        return e

    def power(self, s: int) -> "DiagramAutomorphism":
        e = self.order()
        s %= e
        perm = tuple(range(1, self.rank + 1))
        for _ in range(s):
            perm = tuple(self.perm[c - 1] for c in perm)
        return DiagramAutomorphism(self.lie_type, self.rank, perm)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiagramAutomorphism)
            and (self.lie_type, self.rank, self.perm)
            == (other.lie_type, other.rank, other.perm)
        )

    def __repr__(self) -> str:
        return f"DiagramAutomorphism({self.lie_type}{self.rank}, {self.perm})"


# ---------------------------------------------------------------------------
# epsilon-coordinate realizations for the classical types
# ---------------------------------------------------------------------------


def simple_roots_epsilon(lie_type: str, rank: int) -> List[Tuple[int, ...]]:
    """Bourbaki simple roots as vectors in the standard epsilon basis."""
    n = rank

    def e(i, dim):
        v = [0] * dim
        v[i] = 1
        return v

    out = []
    if lie_type == "A":
        dim = n + 1
        for i in range(n):
            v = e(i, dim)
            v[i + 1] -= 1
            out.append(tuple(v))
    elif lie_type in ("B", "C", "D"):
        dim = n
        for i in range(n - 1):
            v = e(i, dim)
            v[i + 1] -= 1
            out.append(tuple(v))
        if lie_type == "B":
            out.append(tuple(e(n - 1, dim)))
        elif lie_type == "C":
            v = e(n - 1, dim)
            v[n - 1] = 2
            out.append(tuple(v))
        else:
            v = e(n - 2, dim)
            v[n - 1] += 1
            out.append(tuple(v))
    else:
        raise UnsupportedType(f"no epsilon realization wired for {lie_type}")
    return out


def root_to_epsilon(rs: RootSystem, a: Root) -> Tuple[int, ...]:
    basis = simple_roots_epsilon(rs.lie_type, rs.rank)
    dim = len(basis[0])
    out = [0] * dim
    for c, v in zip(a, basis):
        for i in range(dim):
            out[i] += c * v[i]
    return tuple(out)

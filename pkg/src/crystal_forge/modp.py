"""Concrete sigma-semilinear algebra over F_{p^r}.

Hasse-Witt invariants as stable-image dimensions, the GL-level shift map
X -> phi.X.theta on endomorphisms, ordinariness tests, and monomial
classification.  Kernels and images are computed by plain Gaussian
elimination over the field; semilinear maps are iterated directly (the
image chain is decreasing, so it stabilizes in at most dim steps).
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .crystals import MonomialCrystal, PDivTypeMultiset, circular_decomposition
from .witt import (
    Coeffs,
    PrecisionExhausted,
    SemilinearMap,
    WittRingParams,
    verschiebung,
    witt_ring,
)

Vector = Tuple[Coeffs, ...]


class MissingVerschiebung(ValueError):
    pass


class NotMonomial(ValueError):
    pass


# ---------------------------------------------------------------------------
# linear algebra over F_{p^r}
# ---------------------------------------------------------------------------


def _rref(ring: WittRingParams, rows: List[List[Coeffs]]) -> List[List[Coeffs]]:
    """Row-reduced basis of the span of the given vectors."""
    rows = [list(r) for r in rows]
    basis: List[List[Coeffs]] = []
    pivots: List[int] = []
    for row in rows:
        for b, j in zip(basis, pivots):
            c = row[j]
            if c != ring.zero:
                row = [ring.sub(x, ring.mul(c, y)) for x, y in zip(row, b)]
        lead = next((j for j, c in enumerate(row) if c != ring.zero), None)
        if lead is None:
            continue
        inv = ring.inv(row[lead])
        row = [ring.mul(inv, c) for c in row]
        for b in basis:
            c = b[lead]
            if c != ring.zero:
                for j in range(len(b)):
                    b[j] = ring.sub(b[j], ring.mul(c, row[j]))
        basis.append(row)
        pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [basis[i] for i in order]


def _mat_vec(ring: WittRingParams, A, v: Sequence[Coeffs]) -> List[Coeffs]:
    d = len(A)
    out = []
    for i in range(d):
        acc = ring.zero
        for j in range(d):
            if A[i][j] != ring.zero:
                acc = ring.add(acc, ring.mul(A[i][j], v[j]))
        out.append(acc)
    return out


class ModpCrystal:
    """Rank-d module over F_{p^r} with a sigma-linear phi and, optionally,
    a sigma^{-1}-linear verschiebung theta."""

    def __init__(self, p: int, r: int, phi: Sequence[Sequence], theta=None):
        self.ring = witt_ring(p, r, 1)
        self.phi = self._conv(phi)
        self.d = len(self.phi)
        self.theta = None if theta is None else self._conv(theta)

    def _conv(self, rows):
        ring = self.ring
        out = []
        for row in rows:
            conv = []
            for e in row:
                conv.append(ring.from_int(e) if isinstance(e, int) else ring.element(e))
            out.append(tuple(conv))
        return tuple(out)

    @classmethod
    def from_lift(cls, f: SemilinearMap) -> "ModpCrystal":
        """Reduce a precision >= 2 lift mod p, with theta = p.f^{-1}."""
        if f.ring.m < 2:
            raise PrecisionExhausted("need a lift of precision m >= 2")
        v = verschiebung(f)
        p, r = f.ring.p, f.ring.r
        red = lambda M: [[list(c % p for c in e) for e in row] for row in M]
        return cls(p, r, red(f.matrix), red(v.matrix))

    def apply_phi(self, v: Sequence[Coeffs]) -> List[Coeffs]:
        sv = [self.ring.sigma(c, 1) for c in v]
        return _mat_vec(self.ring, self.phi, sv)

    def apply_theta(self, v: Sequence[Coeffs]) -> List[Coeffs]:
        if self.theta is None:
            raise MissingVerschiebung("no verschiebung on this crystal")
        sv = [self.ring.sigma(c, -1) for c in v]
        return _mat_vec(self.ring, self.theta, sv)

    def conjugate(self, U: Sequence[Sequence]) -> "ModpCrystal":
        """Inner twist: phi -> U.phi.sigma(U^{-1}), theta -> U.theta.sigma^{-1}(U^{-1})."""
        ring = self.ring
        Um = ModpCrystal(ring.p, ring.r, U).phi
        Uinv = _invert(ring, Um)
        sU = tuple(tuple(ring.sigma(e, 1) for e in row) for row in Uinv)
        phi = _mat_mul(ring, _mat_mul(ring, Um, self.phi), sU)
        theta = None
        if self.theta is not None:
            sUm = tuple(tuple(ring.sigma(e, -1) for e in row) for row in Uinv)
            theta = _mat_mul(ring, _mat_mul(ring, Um, self.theta), sUm)
        out = ModpCrystal.__new__(ModpCrystal)
        out.ring, out.phi, out.d, out.theta = ring, phi, len(phi), theta
        return out


def _mat_mul(ring, A, B):
    n = len(A)
    return tuple(
        tuple(
            _sum(ring, [ring.mul(A[i][k], B[k][j]) for k in range(n)])
            for j in range(n)
        )
        for i in range(n)
    )


def _sum(ring, elems):
    acc = ring.zero
    for e in elems:
        acc = ring.add(acc, e)
    return acc


def _invert(ring, A):
    n = len(A)
    aug = [list(A[i]) + [ring.one if j == i else ring.zero for j in range(n)] for i in range(n)]
    red = _rref(ring, aug)
    if len(red) < n or any(red[i][i] != ring.one for i in range(n)):
        raise PrecisionExhausted("matrix is not invertible over the field")
    return tuple(tuple(red[i][n:]) for i in range(n))


def _stable_image_dim(apply_map, dim: int, ring: WittRingParams) -> int:
    """Dimension of the intersection of the images of all iterates."""
    basis = [
        [ring.one if j == i else ring.zero for j in range(dim)] for i in range(dim)
    ]
    prev = dim
    while True:
        basis = _rref(ring, [apply_map(v) for v in basis])
        if len(basis) == prev:
            return prev
        prev = len(basis)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def hasse_witt(c: ModpCrystal) -> int:
    """dim of the stable image of phi; the slope-zero multiplicity of any lift."""
    return _stable_image_dim(c.apply_phi, c.d, c.ring)


def hasse_witt_dual(c: ModpCrystal) -> int:
    """Hasse-Witt invariant of the dual crystal (stable image of theta)."""
    if c.theta is None:
        raise MissingVerschiebung("no verschiebung on this crystal")
    return _stable_image_dim(c.apply_theta, c.d, c.ring)


class FSHWMapGL:
    """The sigma-linear shift X -> phi.X.theta on d x d endomorphisms."""

    def __init__(self, c: ModpCrystal):
        if c.theta is None:
            raise MissingVerschiebung("shift map needs the verschiebung")
        self.c = c
        ring = c.ring
        self.sigma_theta = tuple(
            tuple(ring.sigma(e, 1) for e in row) for row in c.theta
        )

    def apply_matrix(self, X) -> Tuple[Tuple[Coeffs, ...], ...]:
        ring = self.c.ring
        sX = tuple(tuple(ring.sigma(e, 1) for e in row) for row in X)
        return _mat_mul(ring, _mat_mul(ring, self.c.phi, sX), self.sigma_theta)

    def apply_flat(self, v: Sequence[Coeffs]) -> List[Coeffs]:
        d = self.c.d
        X = tuple(tuple(v[i * d + j] for j in range(d)) for i in range(d))
        Y = self.apply_matrix(X)
        return [Y[i][j] for i in range(d) for j in range(d)]

    def stable_image_dim(self) -> int:
        return _stable_image_dim(self.apply_flat, self.c.d**2, self.c.ring)


def fshw_map_gl(c: ModpCrystal) -> FSHWMapGL:
    return FSHWMapGL(c)


def gl_fshw_invariant(c: ModpCrystal) -> int:
    """Stable-image dimension of the shift map on endomorphisms; equals the
    product of the Hasse-Witt invariants of the crystal and its dual."""
    return fshw_map_gl(c).stable_image_dim()


def crystal_dimension(c: ModpCrystal) -> int:
    """dim Ker(phi) (the dimension of the attached p-divisible group)."""
    basis = [
        [c.ring.one if j == i else c.ring.zero for j in range(c.d)]
        for i in range(c.d)
    ]
    return c.d - len(_rref(c.ring, [c.apply_phi(v) for v in basis]))


def is_ordinary(c: ModpCrystal) -> bool:
    """Ordinary iff the shift invariant equals dim x codim of the filtration."""
    ddim = crystal_dimension(c)
    return gl_fshw_invariant(c) == ddim * (c.d - ddim)


# ---------------------------------------------------------------------------
# monomial classification
# ---------------------------------------------------------------------------


def monomial_from_semilinear(f: SemilinearMap) -> MonomialCrystal:
    """Extract (permutation, exponent) data from a monomial matrix.

    Each column must have exactly one entry of valuation < m; the unit part
    is immaterial for the isomorphism type.  Raises NotMonomial otherwise.
    """
    ring = f.ring
    d = f.dim
    step: Dict[int, int] = {}
    exp: Dict[int, int] = {}
    for j in range(d):
        hits = [
            (i, ring.val(f.matrix[i][j]))
            for i in range(d)
            if ring.val(f.matrix[i][j]) < ring.m
        ]
        if len(hits) != 1:
            raise NotMonomial(f"column {j} has {len(hits)} nonzero entries")
        i, v = hits[0]
        step[j] = i
        exp[j] = v
    if sorted(step.values()) != list(range(d)):
        raise NotMonomial("nonzero pattern is not a permutation")
    labels = list(range(d))
    return MonomialCrystal(labels, step, exp, filt=dict(exp))


def classify_cyclic(obj) -> PDivTypeMultiset:
    """Isomorphism type of a cyclic filtered crystal in monomial form.

    Accepts a MonomialCrystal carrying filtration weights, or a
    SemilinearMap whose matrix is monomial.  General inputs are rejected
    with NotMonomial.
    """
    if isinstance(obj, SemilinearMap):
        mc = monomial_from_semilinear(obj)
    elif isinstance(obj, MonomialCrystal):
        mc = obj
    else:
        raise NotMonomial(f"cannot classify {type(obj).__name__}")
    if mc.filt is None:
        raise NotMonomial("classification needs filtration weights")
    if any(mc.filt[l] != mc.exp[l] for l in mc.labels):
        raise NotMonomial("filtration weights do not match the exponents")
    return circular_decomposition(mc)

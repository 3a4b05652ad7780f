"""Exact arithmetic in truncated unramified Witt rings W_m(F_{p^r}).

The ring is realized as (Z/p^m)[x]/(f) where f is the deterministic
minimal primitive polynomial of degree r over F_p, lifted coefficient-wise.
The Frobenius automorphism is the unique ring automorphism reducing to the
p-power map mod p; it is computed once by Hensel-lifting the p-power image
of x and stored as an r x r matrix over Z/p^m.

Elements are coordinate tuples of length r with entries in [0, p^m).
Semilinear maps x -> A.sigma^t(x) carry an integer twist t.  Hodge polygons
come from elementary divisors over the local ring; Newton polygons from the
characteristic polynomial of the linearized power (exact once the
determinant valuation resolves at precision m).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .polygons import NewtonPolygon

Q = Fraction
Coeffs = Tuple[int, ...]


class NonPrime(ValueError):
    pass


class InvalidDegree(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    """An elementary divisor exponent is >= the working precision m."""


class NewtonPrecisionExceeded(ArithmeticError):
    """Newton polygon not certifiable at precision m; rebuild at required_m."""

    def __init__(self, required_m: int):
        super().__init__(f"rebuild the map at precision m >= {required_m}")
        self.required_m = required_m


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _factor(n: int) -> List[int]:
    """Distinct prime factors by trial division (inputs stay desk-scale)."""
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p, used only to fix the ring presentation
# ---------------------------------------------------------------------------


def _polmul_mod(a: Coeffs, b: Coeffs, f: Coeffs, p: int) -> Coeffs:
    r = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for i in range(len(prod) - 1, r - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(r):
                prod[i - r + j] = (prod[i - r + j] - c * f[j]) % p
    out = prod[:r]
    while len(out) < r:
        out.append(0)
    return tuple(out)


def _polpow_mod(a: Coeffs, e: int, f: Coeffs, p: int) -> Coeffs:
    r = len(f) - 1
    res = tuple([1] + [0] * (r - 1))
    base = a
    while e:
        if e & 1:
            res = _polmul_mod(res, base, f, p)
        base = _polmul_mod(base, base, f, p)
        e >>= 1
    return res


def _is_irreducible(f: Coeffs, p: int) -> bool:
    r = len(f) - 1
    x = tuple([0, 1] + [0] * (r - 2)) if r >= 2 else (0,)
    if r == 1:
        return True
    xq = _polpow_mod(x, p**r, f, p)
    if xq != x:
        return False
    for q in _factor(r):
        xe = _polpow_mod(x, p ** (r // q), f, p)
        diff = tuple((a - b) % p for a, b in zip(xe, x))
        if not _pol_coprime(diff, f, p):
            return False
    return True


def _pol_coprime(a: Sequence[int], f: Coeffs, p: int) -> bool:
    a = list(a)
    b = list(f)

    def deg(u):
        d = len(u) - 1
        while d >= 0 and u[d] % p == 0:
            d -= 1
        return d

    while True:
        da, db = deg(a), deg(b)
        if da < 0:
            return db == 0
        if db < 0:
            return da == 0
        if da < db:
            a, b = b, a
            continue
        inv = pow(b[deg(b)], -1, p)
        shift = da - db
        c = a[da] * inv % p
        for i in range(db + 1):
            a[i + shift] = (a[i + shift] - c * b[i]) % p
    # unreachable


def _is_primitive(f: Coeffs, p: int) -> bool:
    r = len(f) - 1
    order = p**r - 1
    if r == 1:
        g = (-f[0]) % p
        if g == 0:
            return False
        return all(pow(g, order // q, p) != 1 for q in _factor(order))
    x = tuple([0, 1] + [0] * (r - 2))
    one = tuple([1] + [0] * (r - 1))
    if _polpow_mod(x, order, f, p) != one:
        return False
    return all(_polpow_mod(x, order // q, f, p) != one for q in _factor(order))


@lru_cache(maxsize=None)
def _minimal_primitive_poly(p: int, r: int) -> Coeffs:
    """Monic primitive polynomial of degree r over F_p, least in the
    base-p ordering of its low-coefficient tuple.  Deterministic."""
    for k in range(p**r):
        coeffs = []
        kk = k
        for _ in range(r):
            coeffs.append(kk % p)
            kk //= p
        f = tuple(coeffs) + (1,)
        if _is_irreducible(f, p) and _is_primitive(f, p):
            return f
    raise InvalidDegree(f"no primitive polynomial found for p={p}, r={r}")


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------


class WittRingParams:
    """Handle for W_m(F_{p^r}): presentation, arithmetic, Frobenius."""

    def __init__(self, p: int, r: int, m: int):
        if not _is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if r < 1 or m < 1:
            raise InvalidDegree(f"need r >= 1 and m >= 1, got r={r}, m={m}")
        self.p = p
        self.r = r
        self.m = m
        self.pm = p**m
        self.residue_poly = _minimal_primitive_poly(p, r)
        # reduction rows: x^(r+i) = sum_j red[i][j] x^j  (mod f, p^m)
        f_low = [c % self.pm for c in self.residue_poly[:r]]
        red = [[(-c) % self.pm for c in f_low]]
        for _ in range(1, r):
            prev = red[-1]
            row = [0] + prev[:-1]
            top = prev[-1]
            if top:
                for j in range(r):
                    row[j] = (row[j] - top * f_low[j]) % self.pm
            red.append(row)
        self._red = red
        self._sigma_pows: Optional[List[List[List[int]]]] = None

    # -- element constructors -------------------------------------------

    @property
    def zero(self) -> Coeffs:
        return (0,) * self.r

    @property
    def one(self) -> Coeffs:
        return (1,) + (0,) * (self.r - 1)

    def from_int(self, n: int) -> Coeffs:
        return (n % self.pm,) + (0,) * (self.r - 1)

    def element(self, coeffs: Sequence[int]) -> Coeffs:
        if len(coeffs) != self.r:
            raise InvalidDegree(f"expected {self.r} coordinates")
        return tuple(c % self.pm for c in coeffs)

    def gen(self) -> Coeffs:
        if self.r == 1:
            return self.one
        return (0, 1) + (0,) * (self.r - 2)

    # -- arithmetic ------------------------------------------------------

    def add(self, a: Coeffs, b: Coeffs) -> Coeffs:
        pm = self.pm
        return tuple((x + y) % pm for x, y in zip(a, b))

    def sub(self, a: Coeffs, b: Coeffs) -> Coeffs:
        pm = self.pm
        return tuple((x - y) % pm for x, y in zip(a, b))

    def neg(self, a: Coeffs) -> Coeffs:
        pm = self.pm
        return tuple((-x) % pm for x in a)

    def mul(self, a: Coeffs, b: Coeffs) -> Coeffs:
        r, pm = self.r, self.pm
        if r == 1:
            return (a[0] * b[0] % pm,)
        prod = [0] * (2 * r - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = prod[:r]
        for i in range(r, 2 * r - 1):
            c = prod[i] % pm
            if c:
                row = self._red[i - r]
                for j in range(r):
                    out[j] += c * row[j]
        return tuple(c % pm for c in out)

    def scal(self, n: int, a: Coeffs) -> Coeffs:
        pm = self.pm
        return tuple(n * x % pm for x in a)

    def val(self, a: Coeffs) -> int:
        """p-adic valuation, capped at m (so m means 'zero at precision')."""
        v = self.m
        for c in a:
            if c:
                w = 0
                while c % self.p == 0:
                    c //= self.p
                    w += 1
                v = min(v, w)
        return v

    def is_unit(self, a: Coeffs) -> bool:
        return self.val(a) == 0

    def shift_right(self, a: Coeffs, k: int) -> Coeffs:
        """Divide by p^k; requires val(a) >= k.  Canonical integer lift."""
        if any(c % self.p**k for c in a):
            raise PrecisionExhausted(f"element not divisible by p^{k}")
        return tuple(c // self.p**k for c in a)

    def inv(self, a: Coeffs) -> Coeffs:
        """Inverse of a unit, by Newton iteration from the residue field."""
        if not self.is_unit(a):
            raise PrecisionExhausted("attempted to invert a non-unit")
        z = self._inv_mod_p(a)
        two = self.from_int(2)
        prec = 1
        while prec < self.m:
            z = self.mul(z, self.sub(two, self.mul(a, z)))
            prec *= 2
        return z

    def _inv_mod_p(self, a: Coeffs) -> Coeffs:
        p, r = self.p, self.r
        if r == 1:
            return (pow(a[0] % p, -1, p),) + (0,) * 0
        # extended Euclid in F_p[x]/(f)
        f = list(self.residue_poly)
        u = [c % p for c in a] + [0]
        s0, s1 = [0] * (r + 1), [1] + [0] * r

        def deg(w):
            d = len(w) - 1
            while d >= 0 and w[d] % p == 0:
                d -= 1
            return d

        g0, g1 = f[:], u
        while True:
            d1 = deg(g1)
            if d1 < 0:
                raise PrecisionExhausted("non-unit residue")
            if d1 == 0:
                c = pow(g1[0], -1, p)
                out = [x * c % p for x in s1[:r]]
                return tuple(out + [0] * (r - len(out)))
            d0 = deg(g0)
            if d0 < d1:
                g0, g1 = g1, g0
                s0, s1 = s1, s0
                continue
            c = g0[d0] * pow(g1[d1], -1, p) % p
            sh = d0 - d1
            for i in range(d1 + 1):
                g0[i + sh] = (g0[i + sh] - c * g1[i]) % p
            for i in range(len(s1) - sh):
                s0[i + sh] = (s0[i + sh] - c * s1[i]) % p

    # -- Frobenius ---------------------------------------------------------

    def _sigma_matrices(self) -> List[List[List[int]]]:
        if self._sigma_pows is not None:
            return self._sigma_pows
        r, pm = self.r, self.pm
        if r == 1:
            self._sigma_pows = [[[1]]]
            return self._sigma_pows
        # Hensel-lift the root of f congruent to x^p (mod p)
        xi = self._pow_small(self.gen(), self.p)
        fpoly = self.residue_poly
        dpoly = tuple(i * fpoly[i] % pm for i in range(1, r + 1))
        prec = 1
        while prec < self.m:
            fx = self._eval_poly(fpoly, xi)
            dfx = self._eval_poly_low(dpoly, xi)
            xi = self.sub(xi, self.mul(fx, self.inv(dfx)))
            prec *= 2
        # sigma as matrix: column j = coordinates of xi^j
        cols = [self.one]
        for _ in range(1, r):
            cols.append(self.mul(cols[-1], xi))
        S = [[cols[j][i] for j in range(r)] for i in range(r)]
        pows = [[[1 if i == j else 0 for j in range(r)] for i in range(r)], S]
        for _ in range(2, r):
            pows.append(self._matmul_int(pows[-1], S))
        self._sigma_pows = pows
        return pows

    def _matmul_int(self, A, B):
        r, pm = self.r, self.pm
        return [
            [sum(A[i][k] * B[k][j] for k in range(r)) % pm for j in range(r)]
            for i in range(r)
        ]

    def _pow_small(self, a: Coeffs, e: int) -> Coeffs:
        res = self.one
        base = a
        while e:
            if e & 1:
                res = self.mul(res, base)
            base = self.mul(base, base)
            e >>= 1
        return res

    def _eval_poly(self, poly: Sequence[int], at: Coeffs) -> Coeffs:
        # monic integer polynomial, Horner
        acc = self.from_int(poly[-1])
        for c in reversed(poly[:-1]):
            acc = self.add(self.mul(acc, at), self.from_int(c))
        return acc

    def _eval_poly_low(self, poly: Sequence[int], at: Coeffs) -> Coeffs:
        acc = self.from_int(poly[-1])
        for c in reversed(poly[:-1]):
            acc = self.add(self.mul(acc, at), self.from_int(c))
        return acc

    def sigma(self, a: Coeffs, power: int = 1) -> Coeffs:
        S = self._sigma_matrices()[power % self.r]
        pm = self.pm
        return tuple(
            sum(S[i][j] * a[j] for j in range(self.r)) % pm for i in range(self.r)
        )

    def __repr__(self) -> str:
        return f"W_{self.m}(F_{self.p}^{self.r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittRingParams)
            and (self.p, self.r, self.m) == (other.p, other.r, other.m)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.m))


@lru_cache(maxsize=None)
def witt_ring(p: int, r: int, m: int) -> WittRingParams:
    """Ring handle for W_m(F_{p^r}); construction is cached and deterministic."""
    return WittRingParams(p, r, m)


class WittElement:
    """Convenience wrapper with operator overloading around a coordinate tuple."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: WittRingParams, coeffs: Sequence[int]):
        self.ring = ring
        self.coeffs = ring.element(coeffs)

    def _wrap(self, c: Coeffs) -> "WittElement":
        out = object.__new__(WittElement)
        out.ring = self.ring
        out.coeffs = c
        return out

    def __add__(self, other):
        return self._wrap(self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return self._wrap(self.ring.sub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        return self._wrap(self.ring.mul(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._wrap(self.ring.neg(self.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, WittElement)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def inverse(self) -> "WittElement":
        return self._wrap(self.ring.inv(self.coeffs))

    def frobenius(self, power: int = 1) -> "WittElement":
        return self._wrap(self.ring.sigma(self.coeffs, power))

    def valuation(self) -> int:
        return self.ring.val(self.coeffs)

    def __repr__(self):
        return f"WittElement{self.coeffs}"


def frobenius(x: WittElement) -> WittElement:
    """The Frobenius automorphism; reduces mod p to the p-power map."""
    return x.frobenius()


# ---------------------------------------------------------------------------
# matrices and semilinear maps
# ---------------------------------------------------------------------------

Matrix = Tuple[Tuple[Coeffs, ...], ...]


def _mat_from_ints(ring: WittRingParams, rows: Sequence[Sequence]) -> Matrix:
    out = []
    for row in rows:
        conv = []
        for e in row:
            if isinstance(e, int):
                conv.append(ring.from_int(e))
            else:
                conv.append(ring.element(e))
        out.append(tuple(conv))
    return tuple(out)


def _mat_mul(ring: WittRingParams, A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ring.zero
            for k in range(n):
                if ring.val(A[i][k]) < ring.m:
                    acc = ring.add(acc, ring.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _mat_sigma(ring: WittRingParams, A: Matrix, power: int) -> Matrix:
    if power % ring.r == 0:
        return A
    return tuple(
        tuple(ring.sigma(e, power) for e in row) for row in A
    )


def _mat_identity(ring: WittRingParams, n: int) -> Matrix:
    return tuple(
        tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n)
    )


class SemilinearMap:
    """The map x -> A . sigma^t(x) on a free W_m(F_{p^r})-module."""

    def __init__(self, ring: WittRingParams, matrix: Sequence[Sequence], twist: int = 1):
        self.ring = ring
        self.matrix: Matrix = _mat_from_ints(ring, matrix)
        self.twist = twist
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise InvalidDegree("matrix must be square")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """(A, t) o (B, s) = (A . sigma^t(B), t + s)."""
        if self.ring != other.ring:
            raise InvalidDegree("maps over different rings")
        M = _mat_mul(self.ring, self.matrix, _mat_sigma(self.ring, other.matrix, self.twist))
        return SemilinearMap(self.ring, M, self.twist + other.twist)

    def power(self, n: int) -> "SemilinearMap":
        if n < 1:
            raise InvalidDegree("power must be >= 1")
        out = self
        for _ in range(n - 1):
            out = out.compose(self)
        return out

    def apply(self, vec: Sequence[Coeffs]) -> List[Coeffs]:
        ring = self.ring
        tv = [ring.sigma(v, self.twist) for v in vec]
        return [
            _dot(ring, row, tv) for row in self.matrix
        ]

    def __repr__(self):
        return f"SemilinearMap(dim={self.dim}, twist={self.twist}, ring={self.ring})"


def _dot(ring: WittRingParams, row: Sequence[Coeffs], vec: Sequence[Coeffs]) -> Coeffs:
    acc = ring.zero
    for a, b in zip(row, vec):
        acc = ring.add(acc, ring.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# elementary divisors (Smith reduction over the local ring W_m)
# ---------------------------------------------------------------------------


def smith_exponents(
    ring: WittRingParams, matrix: Matrix, with_transforms: bool = False
):
    """Exponents e_1 <= ... <= e_d of the elementary divisors p^e over W_m.

    Pivot on the entry of minimal valuation; units are invertible mod p^m,
    so row/column operations stay exact at precision m.  Raises
    PrecisionExhausted if any exponent would be >= m.  With transforms,
    also returns (P, Q) with P . matrix . Q = diag(p^e).
    """
    d = len(matrix)
    W = [list(row) for row in matrix]
    P = [list(row) for row in _mat_identity(ring, d)] if with_transforms else None
    Qm = [list(row) for row in _mat_identity(ring, d)] if with_transforms else None
    exps: List[int] = []
    m = ring.m

    for k in range(d):
        best = None
        bestv = m
        for i in range(k, d):
            for j in range(k, d):
                v = ring.val(W[i][j])
                if v < bestv:
                    bestv, best = v, (i, j)
                    if v == 0:
                        break
            if bestv == 0:
                break
        if best is None:
            raise PrecisionExhausted(
                f"elementary divisor exponent >= precision m={m} at pivot {k}"
            )
        i0, j0 = best
        if i0 != k:
            W[k], W[i0] = W[i0], W[k]
            if P is not None:
                P[k], P[i0] = P[i0], P[k]
        if j0 != k:
            for row in W:
                row[k], row[j0] = row[j0], row[k]
            if Qm is not None:
                for row in Qm:
                    row[k], row[j0] = row[j0], row[k]
        v = bestv
        unit = ring.shift_right(W[k][k], v)
        uinv = ring.inv(unit)
        # scale row k so the pivot becomes exactly p^v
        W[k] = [ring.mul(uinv, e) for e in W[k]]
        if P is not None:
            P[k] = [ring.mul(uinv, e) for e in P[k]]
        pv = ring.from_int(ring.p**v)
        W[k][k] = pv
        for i in range(k + 1, d):
            if ring.val(W[i][k]) < m:
                q = ring.shift_right(W[i][k], v)
                for j in range(k, d):
                    W[i][j] = ring.sub(W[i][j], ring.mul(q, W[k][j]))
                if P is not None:
                    for j in range(d):
                        P[i][j] = ring.sub(P[i][j], ring.mul(q, P[k][j]))
                W[i][k] = ring.zero
        for j in range(k + 1, d):
            if ring.val(W[k][j]) < m:
                q = ring.shift_right(W[k][j], v)
                for i in range(k, d):
                    W[i][j] = ring.sub(W[i][j], ring.mul(q, W[i][k]))
                if Qm is not None:
                    for i in range(d):
                        Qm[i][j] = ring.sub(Qm[i][j], ring.mul(q, Qm[i][k]))
                W[k][j] = ring.zero
        exps.append(v)

    if with_transforms:
        return exps, tuple(tuple(r) for r in P), tuple(tuple(r) for r in Qm)
    return exps


def hodge_polygon(f: SemilinearMap) -> NewtonPolygon:
    """Multiset of elementary-divisor exponents of the matrix of f.

    The semilinear twist is irrelevant: sigma is a ring automorphism and
    preserves valuations.
    """
    exps = smith_exponents(f.ring, f.matrix)
    return NewtonPolygon.from_slopes([Q(e) for e in exps])


# ---------------------------------------------------------------------------
# characteristic polynomial (division-free) and Newton polygons
# ---------------------------------------------------------------------------


def charpoly(ring: WittRingParams, A: Matrix) -> List[Coeffs]:
    """Coefficients [a_0, ..., a_d] of det(T - A), a_d = 1, by the
    division-free Toeplitz (Berkowitz) scheme."""
    d = len(A)
    poly = [ring.one]  # descending-degree vector for the 0x0 matrix
    for k in range(d - 1, -1, -1):
        a = A[k][k]
        R = [A[k][j] for j in range(k + 1, d)]
        C = [A[i][k] for i in range(k + 1, d)]
        B = [[A[i][j] for j in range(k + 1, d)] for i in range(k + 1, d)]
        nsub = d - k - 1
        t = [ring.one, ring.neg(a)]
        if nsub:
            w = C[:]
            for _ in range(nsub):
                t.append(ring.neg(_dot(ring, R, w)))
                w = [_dot(ring, row, w) for row in B]
        new = []
        for i in range(len(poly) + 1):
            acc = ring.zero
            for j in range(len(poly)):
                if 0 <= i - j < len(t):
                    acc = ring.add(acc, ring.mul(t[i - j], poly[j]))
            new.append(acc)
        poly = new
    return list(reversed(poly))


def _lower_hull(points: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    pts = sorted(points)
    hull: List[Tuple[int, int]] = []
    for x, y in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    return hull


def newton_polygon(f: SemilinearMap) -> NewtonPolygon:
    """Exact Newton polygon of the sigma^t-linear map f.

    Let r' be the order of sigma^t on the residue field.  The r'-th power
    of f is W_m-linear; the valuations of the roots of its characteristic
    polynomial, divided by r', are the slopes.  The result is certified
    exact as soon as the constant coefficient (the determinant) has
    valuation < m: every unresolved coefficient then lies strictly above
    the hull of the resolved ones.
    """
    ring = f.ring
    d = f.dim
    if d == 0:
        return NewtonPolygon([])
    g = math.gcd(f.twist % ring.r, ring.r)
    rp = ring.r // g if ring.r > 1 else 1
    B = f.power(rp).matrix if rp > 1 else f.matrix
    coeffs = charpoly(ring, B)
    m = ring.m
    vals = [ring.val(c) for c in coeffs]
    if vals[0] >= m:
        # determinant unresolved: estimate the deficit from the plain matrix
        vdet = ring.val(charpoly(ring, f.matrix)[0])
        required = rp * vdet + 1 if vdet < m else 2 * m
        raise NewtonPrecisionExceeded(max(required, m + 1))
    pts = [(i, v) for i, v in enumerate(vals) if v < m or i == d]
    hull = _lower_hull(pts)
    pairs: Dict[Q, int] = {}
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slope = Q(-(y2 - y1), (x2 - x1) * rp)
        pairs[slope] = pairs.get(slope, 0) + (x2 - x1)
    return NewtonPolygon(pairs.items())


# ---------------------------------------------------------------------------
# Verschiebung reconstruction
# ---------------------------------------------------------------------------


def verschiebung(f: SemilinearMap) -> SemilinearMap:
    """The sigma^{-1}-linear map v with v.f = f.v = p, from a lift with m >= 2.

    Requires all elementary divisor exponents of f to be 0 or 1 (the
    Dieudonne condition pM <= f(M))."""
    ring = f.ring
    if ring.m < 2:
        raise PrecisionExhausted("verschiebung reconstruction needs m >= 2")
    exps, P, Qm = smith_exponents(ring, f.matrix, with_transforms=True)
    if any(e > 1 for e in exps):
        raise PrecisionExhausted(
            "not a Dieudonne matrix: an elementary divisor exceeds p"
        )
    d = f.dim
    mid = tuple(
        tuple(
            ring.from_int(ring.p ** (1 - exps[i])) if i == j else ring.zero
            for j in range(d)
        )
        for i in range(d)
    )
    pAinv = _mat_mul(ring, _mat_mul(ring, Qm, mid), P)
    B = _mat_sigma(ring, pAinv, -f.twist)
    return SemilinearMap(ring, B, -f.twist)


# ---------------------------------------------------------------------------
# JSON wire format (shared with the CLI)
# ---------------------------------------------------------------------------

SCHEMA = "crystal-forge/1"


def semilinear_to_json(f: SemilinearMap) -> dict:
    return {
        "schema": SCHEMA,
        "p": f.ring.p,
        "r": f.ring.r,
        "m": f.ring.m,
        "twist": f.twist,
        "entries": [[list(e) for e in row] for row in f.matrix],
    }


def semilinear_from_json(obj: dict) -> SemilinearMap:
    keys = {"schema", "p", "r", "m", "twist", "entries"}
    if set(obj) != keys:
        raise ValueError(f"matrix object must have exactly the keys {sorted(keys)}")
    if obj["schema"] != SCHEMA:
        raise ValueError(f"unsupported schema {obj['schema']!r}")
    ring = witt_ring(int(obj["p"]), int(obj["r"]), int(obj["m"]))
    entries = obj["entries"]
    rows = []
    for row in entries:
        conv = []
        for e in row:
            if not isinstance(e, list) or len(e) != ring.r:
                raise ValueError("each entry must be a list of r coefficients")
            conv.append([int(c) for c in e])
        rows.append(conv)
    return SemilinearMap(ring, rows, int(obj["twist"]))

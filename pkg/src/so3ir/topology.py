"""Exact arithmetic for the topological obstructions of the irreducible structure.

Stiefel-Whitney classes of the symmetric trace-free square of a 3-plane bundle
are computed in the mod-2 root ring GF(2)[x1, x2, x3]/(x1 + x2 + x3); every
identity here is exact, never numerical.  The intersection-form search and the
semicharacteristic / splitting checks are plain integer arithmetic on
user-supplied cohomological data.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import SpaceInputError


class Mod2ClassExpr:
    """Element of GF(2)[x1, x2, x3] reduced modulo x1 + x2 + x3 = 0.

    Canonical form: a frozenset of (i, j) exponent pairs for monomials
    x1^i x2^j after eliminating x3.  Two expressions are equal exactly when
    their canonical forms coincide.
    """

    __slots__ = ("monomials",)

    def __init__(self, monomials=()):
        self.monomials = frozenset(tuple(m) for m in monomials)

    @classmethod
    def zero(cls) -> "Mod2ClassExpr":
        return cls()

    @classmethod
    def one(cls) -> "Mod2ClassExpr":
        return cls({(0, 0)})

    @classmethod
    def root(cls, k: int) -> "Mod2ClassExpr":
        """The k-th Stiefel-Whitney root, k in {1, 2, 3}; x3 reduces to x1 + x2."""
        if k == 1:
            return cls({(1, 0)})
        if k == 2:
            return cls({(0, 1)})
        if k == 3:
            return cls({(1, 0), (0, 1)})
        raise SpaceInputError("root index must be 1, 2 or 3")

    def __add__(self, other: "Mod2ClassExpr") -> "Mod2ClassExpr":
        return Mod2ClassExpr(self.monomials ^ other.monomials)

    def __mul__(self, other: "Mod2ClassExpr") -> "Mod2ClassExpr":
        acc = set()
        for a in self.monomials:
            for b in other.monomials:
                m = (a[0] + b[0], a[1] + b[1])
                acc.symmetric_difference_update({m})
        return Mod2ClassExpr(acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mod2ClassExpr) and self.monomials == other.monomials

    def __hash__(self):
        return hash(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def graded_part(self, degree: int) -> "Mod2ClassExpr":
        return Mod2ClassExpr(m for m in self.monomials if m[0] + m[1] == degree)

    def degrees(self) -> set[int]:
        return {m[0] + m[1] for m in self.monomials}

    def total_square(self) -> "Mod2ClassExpr":
        """Total Steenrod square, acting on roots by x -> x + x^2."""
        out = Mod2ClassExpr.zero()
        for i, j in self.monomials:
            term = Mod2ClassExpr.one()
            # (x + x^2)^i = x^i (1 + x)^i, binomials mod 2
            part = Mod2ClassExpr(
                {(i + a, 0) for a in range(i + 1) if comb(i, a) % 2}
            ) * Mod2ClassExpr({(0, j + b) for b in range(j + 1) if comb(j, b) % 2})
            out = out + term * part
        return out

    def sq(self, i: int) -> "Mod2ClassExpr":
        """Graded Steenrod operation Sq^i on a homogeneous expression."""
        degs = self.degrees()
        if len(degs) > 1:
            raise SpaceInputError("Sq^i needs a homogeneous expression")
        if not degs:
            return Mod2ClassExpr.zero()
        return self.total_square().graded_part(next(iter(degs)) + i)

    def to_elementary(self) -> dict[tuple[int, int], int]:
        """Present as a polynomial in e2 = w2(E^3), e3 = w3(E^3).

        Returns exponent pairs {(a, b): 1} with e2^a e3^b summed mod 2; raises
        when the expression is not symmetric in the roots.
        """
        degs = self.degrees()
        if not degs:
            return {}
        out = {}
        rest = self
        for d in sorted(degs):
            part = rest.graded_part(d)
            target = part
            found = {}
            combos = [(a, b) for a in range(d // 2 + 1) for b in range(d // 3 + 1) if 2 * a + 3 * b == d]
            for bits in itertools.product((0, 1), repeat=len(combos)):
                acc = Mod2ClassExpr.zero()
                for bit, (a, b) in zip(bits, combos):
                    if bit:
                        acc = acc + _e2_pow(a) * _e3_pow(b)
                if acc == target:
                    found = {(a, b): 1 for bit, (a, b) in zip(bits, combos) if bit}
                    break
            else:
                raise SpaceInputError("expression is not a polynomial in the elementary classes e2, e3")
            out.update(found)
        return out

    def __repr__(self):
        if not self.monomials:
            return "Mod2ClassExpr(0)"
        terms = []
        for i, j in sorted(self.monomials):
            factors = [f"x1^{i}" if i > 1 else "x1"] if i else []
            factors += [f"x2^{j}" if j > 1 else "x2"] if j else []
            terms.append("*".join(factors) or "1")
        return f"Mod2ClassExpr({' + '.join(terms)})"


def elementary_to_str(pres: dict[tuple[int, int], int]) -> str:
    if not pres:
        return "0"
    terms = []
    for a, b in sorted(pres):
        factors = ([f"e2^{a}" if a > 1 else "e2"] if a else []) + ([f"e3^{b}" if b > 1 else "e3"] if b else [])
        terms.append("*".join(factors) or "1")
    return " + ".join(terms)


def _e2_pow(a: int) -> Mod2ClassExpr:
    out = Mod2ClassExpr.one()
    for _ in range(a):
        out = out * elementary_e2()
    return out


def _e3_pow(b: int) -> Mod2ClassExpr:
    out = Mod2ClassExpr.one()
    for _ in range(b):
        out = out * elementary_e3()
    return out


def elementary_e2() -> Mod2ClassExpr:
    x1, x2, x3 = Mod2ClassExpr.root(1), Mod2ClassExpr.root(2), Mod2ClassExpr.root(3)
    return x1 * x2 + x1 * x3 + x2 * x3


def elementary_e3() -> Mod2ClassExpr:
    return Mod2ClassExpr.root(1) * Mod2ClassExpr.root(2) * Mod2ClassExpr.root(3)


def sw_classes_s20() -> list[Mod2ClassExpr]:
    """Graded Stiefel-Whitney classes w1..w5 of the symmetric trace-free square.

    Expands prod_{1 <= i <= j <= 3} (1 + x_i + x_j) in the root ring; the
    result must come out as (0, e2, e3, 0, 0).
    """
    total = Mod2ClassExpr.one()
    roots = [Mod2ClassExpr.root(k) for k in (1, 2, 3)]
    for i in range(3):
        for j in range(i, 3):
            total = total * (Mod2ClassExpr.one() + roots[i] + roots[j])
    return [total.graded_part(d) for d in range(1, 6)]


def wu_consistency() -> dict[str, bool]:
    """Ring-level checks behind the Wu-formula corollary.

    In the root model Sq^1 w2 = w3 and Sq^2 w3 = w2 w3 hold as identities,
    and w4 vanishes; combined with the 5-manifold Wu relation w4 = w2 u w2
    this forces w2 u w2 = 0 on the manifold.
    """
    w1, w2, w3, w4, w5 = sw_classes_s20()
    return {
        "w1_zero": not w1,
        "w4_zero": not w4,
        "w5_zero": not w5,
        "w3_is_sq1_w2": w2.sq(1) == w3,
        "w2w3_is_sq2_w3": w3.sq(2) == w2 * w3,
        "w2_cup_w2_zero_on_manifold": not w4,  # via the Wu relation w4 = w2 u w2
    }


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def pontrjagin_relation(weights: tuple[int, int] = (1, 2)) -> int:
    """Divisibility factor of p1 under the weight map w -> (c1 w, c2 w).

    Expands (c1 w)^2 + (c2 w)^2 as an integer polynomial and verifies it is a
    single multiple of w^2; the irreducible embedding weights (1, 2) give 5.
    """
    c1, c2 = weights
    p = [0] * 3
    for poly in (_poly_mul([0, c1], [0, c1]), _poly_mul([0, c2], [0, c2])):
        p = [a + b for a, b in zip(p, poly)]
    if p[0] != 0 or p[1] != 0:
        raise SpaceInputError("weight expansion produced terms below degree 2")
    return p[2]


def semicharacteristics(
    real_betti: tuple[int, int, int],
    z2_betti: tuple[int, int, int],
    w2w3_pairing: int,
) -> tuple[int, int, bool]:
    """Kervaire semicharacteristic, its Z2-homology analogue, and their linkage.

    k = b0 + b2 + b4 mod 2 from the even real Betti numbers, chi2 = the mod-2
    sum of the first three Z2-homology dimensions; the linkage bit checks
    k - chi2 = w2 u w3 mod 2.
    """
    if any(b < 0 for b in (*real_betti, *z2_betti)) or w2w3_pairing not in (0, 1):
        raise SpaceInputError("betti numbers must be nonnegative and the pairing a bit")
    k = sum(real_betti) % 2
    chi2 = sum(z2_betti) % 2
    return k, chi2, (k - chi2) % 2 == w2w3_pairing % 2


def split_conditions(chi: int, sigma: int, csq: int) -> tuple[bool, bool, bool]:
    """The two equivalent splitting criteria for a 4-manifold tangent bundle.

    cond2: chi = 2 c^2 and p1 = 5 c^2 with p1 = 3 sigma (signature theorem);
    cond3: chi = 2 c^2 and 6 sigma = 5 chi.  The third bit records their
    agreement, which the substitution p1 = 3 sigma makes an identity.
    """
    p1 = 3 * sigma
    cond2 = chi == 2 * csq and p1 == 5 * csq
    cond3 = chi == 2 * csq and 6 * sigma == 5 * chi
    return cond2, cond3, cond2 == cond3


def spin_split_obstruction(p: int) -> tuple[Fraction, bool]:
    """Rank q of the even factor forced by 8q = 10p + 10, plus the violation bit.

    The bit is set when q is non-integral or p < q; it is set for every
    nonnegative p, which is the arithmetic behind the smoothness obstruction.
    """
    if p < 0:
        raise SpaceInputError("p must be nonnegative")
    q = Fraction(10 * p + 10, 8)
    return q, q.denominator != 1 or p < q


@dataclass(frozen=True)
class IntersectionSolution:
    """Uniform-coefficient solution of the odd intersection-form system."""

    s: int
    t: int
    a: int
    b: int

    def verify(self) -> bool:
        return (
            self.s - 11 * self.t == 10
            and self.s * self.a**2 - self.t * self.b**2 == 6 + 6 * self.t
            and self.a % 2 == 1
            and self.b % 2 == 1
        )

    @property
    def chi(self) -> int:
        return 2 + self.s + self.t

    @property
    def sigma(self) -> int:
        return self.s - self.t

    @property
    def csq(self) -> int:
        return self.s * self.a**2 - self.t * self.b**2


def uniform_intersection_solutions(t_max: int, a_max: int, b_max: int) -> list[IntersectionSolution]:
    """Exhaustive scan for s - 11t = 10, s a^2 - t b^2 = 6 + 6t with odd uniform a, b.

    Deterministic output sorted by (t, a, b); every returned tuple satisfies
    both equations exactly.
    """
    if t_max < 0 or a_max <= 0 or b_max <= 0:
        raise SpaceInputError("bounds must be positive (t_max nonnegative)")
    out = []
    for t in range(t_max + 1):
        s = 10 + 11 * t
        for a in range(1, a_max + 1, 2):
            lhs = s * a * a - 6 - 6 * t
            for b in range(1, b_max + 1, 2):
                if t * b * b == lhs:
                    out.append(IntersectionSolution(s, t, a, b))
    return sorted(out, key=lambda sol: (sol.t, sol.a, sol.b))

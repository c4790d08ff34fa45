"""Exact-rational helpers: polynomials over Q, Gaussian rationals, binomials.

Used wherever the library promises *exact* verification (Vandermonde
elimination, the Chu-Vandermonde identity, the integration-by-parts kernel
recursion) rather than floating point.
"""

from fractions import Fraction


class PolyQ:
    """Dense univariate polynomial with Fraction coefficients (in `s`)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=(Fraction(0),)):
        cs = [Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls([Fraction(c)])

    @classmethod
    def x(cls):
        return cls([Fraction(0), Fraction(1)])

    def __add__(self, other):
        other = other if isinstance(other, PolyQ) else PolyQ.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyQ([
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)
        ])

    __radd__ = __add__

    def __neg__(self):
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, PolyQ) else PolyQ.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return PolyQ.const(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, PolyQ):
            return PolyQ([c * Fraction(other) for c in self.coeffs])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = other if isinstance(other, PolyQ) else PolyQ.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, s):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * s + (c if isinstance(s, (Fraction, int)) else float(c))
        return acc

    def __repr__(self):
        return f"PolyQ({list(self.coeffs)})"


def binom_poly(top: PolyQ, j: int) -> PolyQ:
    """binom(top, j) = top (top-1) ... (top-j+1) / j! as a PolyQ in s."""
    out = PolyQ.const(1)
    for i in range(j):
        out = out * (top - i)
    return out * Fraction(1, _factorial(j))


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


class QC:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = other if isinstance(other, QC) else QC(other)
        return QC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __sub__(self, other):
        other = other if isinstance(other, QC) else QC(other)
        return QC(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = other if isinstance(other, QC) else QC(other)
        return QC(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = QC(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = other if isinstance(other, QC) else QC(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"QC({self.re}, {self.im})"


QC_I = QC(0, 1)


class BiSeries:
    """Truncated series in u whose coefficients are polynomials in an
    auxiliary symbol p over the Gaussian rationals: coeffs[d][e] = QC
    coefficient of u^d p^e (stored as dict e -> QC)."""

    def __init__(self, order, coeffs=None):
        self.order = order
        self.coeffs = coeffs if coeffs is not None else [dict() for _ in range(order + 1)]

    @classmethod
    def const(cls, order, value):
        out = cls(order)
        if not isinstance(value, QC):
            value = QC(value)
        if value:
            out.coeffs[0][0] = value
        return out

    @classmethod
    def monomial(cls, order, value, du=0, dp=0):
        out = cls(order)
        if not isinstance(value, QC):
            value = QC(value)
        if du <= order and value:
            out.coeffs[du][dp] = value
        return out

    def __add__(self, other):
        out = BiSeries(self.order, [dict(d) for d in self.coeffs])
        for du, dd in enumerate(other.coeffs):
            for dp, v in dd.items():
                cur = out.coeffs[du].get(dp, QC()) + v
                if cur:
                    out.coeffs[du][dp] = cur
                else:
                    out.coeffs[du].pop(dp, None)
        return out

    def __mul__(self, other):
        out = BiSeries(self.order)
        for du1, d1 in enumerate(self.coeffs):
            if not d1:
                continue
            for du2, d2 in enumerate(other.coeffs):
                if du1 + du2 > self.order or not d2:
                    continue
                tgt = out.coeffs[du1 + du2]
                for dp1, v1 in d1.items():
                    for dp2, v2 in d2.items():
                        cur = tgt.get(dp1 + dp2, QC()) + v1 * v2
                        if cur:
                            tgt[dp1 + dp2] = cur
                        else:
                            tgt.pop(dp1 + dp2, None)
        return out

    def u_coefficient(self, du):
        return dict(self.coeffs[du])

    def __eq__(self, other):
        return self.order == other.order and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

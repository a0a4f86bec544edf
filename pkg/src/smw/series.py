"""Truncated power series with exact rational coefficients, closed-form
generating functions and large-order asymptotics."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import mpmath as mp

from .models import Family, ModelSpec

__all__ = ["RationalSeries", "closed_form", "QUANTITIES", "AsymptoticForm", "asymptotic_form",
           "asymptotic_value", "asymptotic_ratio_scan", "EULER_GAMMA", "X0", "SIGMA"]

# Euler-Mascheroni constant to 50 digits
EULER_GAMMA = "0.57721566490153286060651209008240243104215933593992"


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class RationalSeries:
    """Coefficients ``c_0 .. c_K`` of a power series known to order K."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        cs = [_frac(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * (order + 1))[:order + 1]
        if not cs:
            raise ValueError("a series needs at least one coefficient")
        self.coeffs = cs

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def x(cls, order):
        return cls([0, 1], order)

    @classmethod
    def const(cls, c, order):
        return cls([c], order)

    @classmethod
    def poly(cls, cs, order):
        return cls(cs, order)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"RationalSeries({[str(c) for c in self.coeffs[:8]]}{'...' if self.order > 7 else ''}, order={self.order})"

    def _lift(self, other):
        if isinstance(other, RationalSeries):
            return other
        return RationalSeries.const(other, self.order)

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return RationalSeries(self.coeffs[:order + 1])

    def __eq__(self, other):
        if not isinstance(other, RationalSeries):
            return NotImplemented
        K = min(self.order, other.order)
        return self.coeffs[:K + 1] == other.coeffs[:K + 1]

    def __add__(self, other):
        o = self._lift(other)
        K = min(self.order, o.order)
        return RationalSeries([self.coeffs[i] + o.coeffs[i] for i in range(K + 1)])

    __radd__ = __add__

    def __neg__(self):
        return RationalSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalSeries):
            c = _frac(other)
            return RationalSeries([c * a for a in self.coeffs])
        K = min(self.order, other.order)
        a, da = _as_ints(self.coeffs[:K + 1])
        b, db = _as_ints(other.coeffs[:K + 1])
        out = [0] * (K + 1)
        nz_b = [(j, v) for j, v in enumerate(b) if v]
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in nz_b:
                if i + j > K:
                    break
                out[i + j] += ai * bj
        den = da * db
        return RationalSeries([Fraction(v, den) for v in out])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = RationalSeries.const(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self):
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series is not a unit")
        K = self.order
        inv = [Fraction(1) / c0]
        for m in range(1, K + 1):
            s = sum(self.coeffs[j] * inv[m - j] for j in range(1, m + 1))
            inv.append(-s / c0)
        return RationalSeries(inv)

    def __truediv__(self, other):
        if isinstance(other, RationalSeries):
            return self * other.inverse()
        return self * (Fraction(1) / _frac(other))

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def shift(self, k: int):
        """Exact division by x^k; the order drops by k."""
        if any(self.coeffs[:k]):
            raise ValueError(f"series not divisible by x^{k}")
        return RationalSeries(self.coeffs[k:])

    def mul_x(self, k: int):
        return RationalSeries([0] * k + self.coeffs[:len(self.coeffs) - k])

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def scale_x(self, r):
        """The series of f(r x)."""
        r = _frac(r)
        return RationalSeries([c * r ** i for i, c in enumerate(self.coeffs)])

    def compose(self, inner: "RationalSeries"):
        """f(g(x)) by Horner; g must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series needs zero constant term")
        K = min(self.order, inner.order)
        v = inner.valuation() or (K + 1)
        top = min(self.order, K // v)
        g = inner.truncate(K)
        acc = RationalSeries.const(self.coeffs[top], K)
        for c in reversed(self.coeffs[:top]):
            acc = acc * g + c
        return acc


def _as_ints(cs):
    den = 1
    for c in cs:
        if c.denominator != 1:
            den = lcm(den, c.denominator)
    if den == 1:
        return [c.numerator for c in cs], 1
    return [c.numerator * (den // c.denominator) for c in cs], den


def sqrt_one_minus_4(y: RationalSeries) -> RationalSeries:
    """sqrt(1 - 4y) for y without constant term, via 1 - 2 sum C_{k-1} y^k."""
    K = y.order
    cat = [Fraction(1)]
    for m in range(1, K + 1):
        cat.append(cat[-1] * 2 * (2 * m - 1) / (m + 1))
    f = RationalSeries([1] + [-2 * cat[k - 1] for k in range(1, K + 1)])
    return f.compose(y)


def catalan_series(order) -> RationalSeries:
    """N(X) = (1 - sqrt(1 - 4X^2)) / (2X^2)."""
    K = order + 2
    x2 = RationalSeries.x(K) ** 2
    return ((1 - sqrt_one_minus_4(x2)) / 2).shift(2).truncate(order)


# --------------------------------------------------------------------------
# closed forms

QUANTITIES = ("11", "12", "13", "21", "22", "23", "31", "32", "33")


def _x(K):
    return RationalSeries.x(K)


def _s31_zero(K):
    x = _x(K)
    one = RationalSeries.const(1, K)
    d = (1 - x) * (1 - 2 * x - 2 * x ** 2)          # X = x^3 / d
    X = x ** 3 / d
    root = sqrt_one_minus_4(X * X)
    T = 1 - root
    N11 = ((1 - 2 * x) * T * d / 2).shift(6)
    N22 = ((1 - x) * ((1 - 2 * x) - (1 - 2 * x - 2 * x ** 2) * root) / (1 - 2 * x) / 2).shift(2)
    N21 = (T * d / 2).shift(4)
    N33 = one / (1 - x)
    G = (x ** 3 * N11 / (1 - 2 * x))
    return dict(x=x, N11=N11, N22=N22, N21=N21, N33=N33, G=G,
                q=1 - 2 * x, flatfac=1 - x, c_pair=1, c_down=1, delta=x / (1 - x))


def _s32_case2(K):
    x = _x(K)
    one = RationalSeries.const(1, K)
    q = 1 - 4 * x + 2 * x ** 2
    r = 1 - 4 * x - 2 * x ** 2
    Y = 8 * x ** 6 / ((1 - 2 * x) * r) ** 2        # X^2
    root = sqrt_one_minus_4(Y)
    T = 1 - root
    N11 = (q * (1 - 2 * x) * r * T / 16).shift(6)
    N22 = ((1 - 2 * x) * (q - r * root) / q / 4).shift(2)
    N21 = (T * (1 - 2 * x) * r / 8).shift(4)
    N33 = one / (1 - 2 * x)
    G = 4 * x ** 3 * N11 / q
    return dict(x=x, N11=N11, N22=N22, N21=N21, N33=N33, G=G)


def _height_forms_s31(base, h, K):
    """Nonzero-height families for S31 lambda = 0."""
    x, N22, G = base["x"], base["N22"], base["G"]
    tail = (1 - x - x ** 2 * N22)
    out = {
        "21": (G ** (h + 1)).shift(1),
        "11": ((1 - 2 * x) * G ** (h + 1)).shift(3),
        "22": G ** h * N22,
        "12": ((1 - 2 * x) * G ** h * N22).shift(2),
        "23": (G ** h * tail).shift(2),
        "13": ((1 - 2 * x) * G ** h * tail - (x ** 3 if h == 1 else 0)).shift(4),
    }
    return out


def _height_forms_s32(base, h, K):
    x, N22, G = base["x"], base["N22"], base["G"]
    q = 1 - 4 * x + 2 * x ** 2
    tail = (1 - 2 * x - 2 * x ** 2 * N22)
    return {
        "21": (G ** (h + 1) / 2).shift(1),
        "11": (q * G ** (h + 1) / 4).shift(3),
        "22": G ** h * N22,
        "12": (q * G ** h * N22 / 2).shift(2),
        "23": (G ** h * tail / 2).shift(2),
        "13": (q * G ** h * tail / 4 - (x ** 3 if h == 1 else 0)).shift(4),
    }


def closed_form(model: ModelSpec, quantity: str, h: int = 0, order: int = 200,
                tilde: bool = False) -> RationalSeries:
    """Expansion of the generating function of ``N^{(h)}_{a->b}(x)``.

    ``quantity`` is the two-digit string ``"ab"``.  Working precision is
    padded internally so every returned coefficient is exact.
    """
    quantity = str(quantity)
    if quantity not in QUANTITIES:
        raise KeyError(f"unknown quantity {quantity!r}")
    a, b = int(quantity[0]), int(quantity[1])
    if max(a, b) > model.k:
        raise KeyError(f"quantity {quantity} outside the S21 alphabet")
    K = order
    W = K + 12 + 3 * h     # shifts consume at most this many orders
    zero = RationalSeries.const(0, K)
    fam = model.family
    x = _x(W)
    if fam is Family.S21:
        if h == 0 and quantity == "11":
            s = (1 - x) / (1 - 2 * x)
        elif h == 0 and quantity == "22":
            s = 1 / (1 - x)
        elif h == 1 and quantity == "12":
            s = x / (1 - 2 * x)
        else:
            return zero
        return s.truncate(K)
    if fam is Family.S31 and model.balanced:
        D = 1 - 4 * x + 3 * x ** 2 + 2 * x ** 3 - x ** 4
        table = {
            (0, "11"): (1 - x) * (1 - 2 * x) / D,
            (0, "22"): (1 - x) / (1 - 2 * x),
            (0, "33"): 1 / (1 - x),
            (1, "12"): x * (1 - x) ** 2 / D,
            (1, "13"): x * (1 - 2 * x) / D,
            (2, "13"): x ** 2 * (1 - x) / D,
            (1, "23"): x / (1 - 2 * x),
        }
        s = table.get((h, quantity))
        return zero if s is None else s.truncate(K)
    if fam is Family.S32_CASE1:
        # colors double every step: x -> 2x in the S31 forms
        return closed_form(ModelSpec.s31(0), quantity, h, K).scale_x(2)
    if fam is Family.S32_CASE2:
        base = _s32_case2(W)
        forms = _height_forms_s32
    else:
        base = _s31_zero(W)
        forms = _height_forms_s31
    if h == 0:
        table = {"11": base["N11"], "22": base["N22"], "21": base["N21"],
                 "12": base["N21"], "33": base["N33"]}
        s = table.get(quantity)
        return zero if s is None else s.truncate(K)
    if a == 3:
        return zero
    s = forms(base, h, W)[quantity].truncate(K)
    if tilde and fam is Family.S32_CASE2:
        s = s / 2 ** h
    return s


# --------------------------------------------------------------------------
# asymptotics

def _mpf(v):
    return mp.mpf(v)


def X0():
    """Radius of convergence of the S32 case 2 series."""
    return (mp.sqrt(2) - 1) / 2


def SIGMA():
    return (mp.sqrt(2) - 1) / (9 * mp.sqrt(2))


@dataclass(frozen=True)
class AsymptoticForm:
    """``prefactor * base^n * n^power * hweight(n, h)``.

    ``hweight`` is one of ``"none"``, ``"h+1"``, ``"2h+(h+1)"``,
    ``"4h-(h+1)"``; the Gaussian factors use ``exp(-g m^2 / n)`` with
    ``g = gaussian_scale``.  ``color_root`` multiplies by ``2^(h/2)``.
    """

    model: str
    quantity: str
    prefactor: object
    base: object
    power: object
    gaussian_scale: object = None
    hweight: str = "none"
    color_root: bool = False

    def __call__(self, n, h=0):
        return asymptotic_value(self, n, h)


def asymptotic_form(model: ModelSpec, quantity: str, h: int = 0, dps: int = 50) -> AsymptoticForm:
    """Leading large-n form of ``N^{(h)}_{n, a->b}``."""
    with mp.workdps(dps):
        fam = model.family
        q = str(quantity)
        if fam is Family.S21:
            if (h, q) in ((0, "11"), (1, "12")):
                return AsymptoticForm("s21", q, mp.mpf(1) / 2, mp.mpf(2), mp.mpf(0))
            if (h, q) == (0, "22"):
                return AsymptoticForm("s21", q, mp.mpf(1), mp.mpf(1), mp.mpf(0))
            raise KeyError(q)
        if fam is Family.S31 and model.balanced:
            s5 = mp.sqrt(5)
            phi2 = (3 + s5) / 2
            forms = {
                (0, "11"): ((s5 + 1) / (4 * s5), phi2),
                (1, "12"): ((s5 + 1) / (4 * s5), phi2),
                (1, "13"): (1 / (2 * s5), phi2),
                (2, "13"): (1 / (2 * s5), phi2),
                (0, "22"): (mp.mpf(1) / 2, mp.mpf(2)),
                (1, "23"): (mp.mpf(1) / 2, mp.mpf(2)),
                (0, "33"): (mp.mpf(1), mp.mpf(1)),
            }
            pre, base = forms[(h, q)]
            return AsymptoticForm("s31-bal", q, pre, base, mp.mpf(0))
        if fam in (Family.S31, Family.S32_CASE1):
            c = 3 * mp.sqrt(3) / (2 * mp.sqrt(mp.pi))
            g = mp.mpf(27) / 4
            base = mp.mpf(3) if fam is Family.S31 else mp.mpf(6)
            pref = {"11": 9, "22": 1, "21": 3, "12": 3}
            color = False
        else:
            x0 = X0()
            c = 1 / (2 ** (mp.mpf(7) / 4) * x0 ** (mp.mpf(3) / 2) * mp.sqrt(mp.pi))
            g = 9 / (4 * mp.sqrt(2) * x0)
            base = 1 / x0
            pref = {"11": 9, "22": 1, "21": 3, "12": 3}
            color = True
        if q == "33" and h == 0:
            return AsymptoticForm(model.walk_key(), q, mp.mpf(1), base / 3 if fam is Family.S31 else mp.mpf(2), mp.mpf(0))
        if h == 0:
            return AsymptoticForm(model.walk_key(), q, pref[q] * c, base, mp.mpf(-3) / 2)
        # nonzero heights: prefactors relative to the height-zero shapes
        hw = {"21": ("h+1", 3), "11": ("h+1", 9), "22": ("2h+(h+1)", 1),
              "12": ("2h+(h+1)", 3), "23": ("4h-(h+1)", 1), "13": ("4h-(h+1)", 3)}
        w, p = hw[q]
        return AsymptoticForm(model.walk_key(), q, p * c, base, mp.mpf(-3) / 2, g, w, color)


def asymptotic_value(form: AsymptoticForm, n, h: int = 0, dps: int = 50):
    with mp.workdps(dps):
        n = mp.mpf(n)
        val = form.prefactor * form.base ** n * n ** form.power
        if form.hweight != "none":
            g = form.gaussian_scale
            e = lambda m: mp.e ** (-g * m * m / n)
            if form.hweight == "h+1":
                wt = (h + 1) * e(h + 1)
            elif form.hweight == "2h+(h+1)":
                wt = 2 * h * e(h) + (h + 1) * e(h + 1)
            else:
                wt = 4 * h * e(h) - (h + 1) * e(h + 1)
            val *= wt
            if form.color_root:
                val *= mp.sqrt(2) ** h
        return +val


def asymptotic_ratio_scan(model: ModelSpec, quantity: str, ns, h: int = 0, dps: int = 50):
    """Rows ``(n, exact count, asymptotic value, ratio)``."""
    from .counting import count
    form = asymptotic_form(model, quantity, h, dps)
    a, b = int(quantity[0]), int(quantity[1])
    rows = []
    with mp.workdps(dps):
        for n in ns:
            exact = count(model, n, h, a, b)
            approx = asymptotic_value(form, n, h, dps)
            rows.append((n, exact, approx, mp.mpf(exact) / approx))
    return rows

"""Univariate and tensor-square polynomial arithmetic with localization.

Coefficients of the engine live in three rings, all exact:

* ``Poly``     -- k[x], used for the per-class matrix H and forbidden factors;
* ``BiPoly``   -- k[x] (x) k[y], the coefficient ring of dotted generators
                  (x acts on the left of a symbol, y on the right);
* ``LocElem``  -- a BiPoly divided by monic factors taken from the forbidden
                  lists of the two classes involved.

``Tri`` is the three-factor analogue used for bilinear differential terms
(v (x) a and a (x) v), where the middle factor multiplies between the two
symbols.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import Mat, frac, frac_str

try:
    import sympy
except ImportError:  # pragma: no cover - sympy is a declared dependency
    sympy = None


# ----------------------------------------------------------------------
# Univariate polynomials


class Poly:
    """Univariate polynomial over Fraction; coeffs ascending, no trailing 0."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [frac(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @staticmethod
    def const(x) -> "Poly":
        return Poly([frac(x)])

    @staticmethod
    def x(shift=0) -> "Poly":
        """The monomial x - shift."""
        return Poly([-frac(shift), 1])

    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def constant(self) -> Fraction:
        return self.c[0] if self.c else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.c), len(other.c))
        return Poly(
            [
                (self.c[i] if i < len(self.c) else 0)
                + (other.c[i] if i < len(other.c) else 0)
                for i in range(n)
            ]
        )

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.c])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] += x * y
        return Poly(out)

    def scale(self, k) -> "Poly":
        k = frac(k)
        return Poly([k * x for x in self.c])

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, len(self.c) - len(other.c) + 1)
        r = list(self.c)
        d = other.degree()
        lead = other.c[-1]
        while len(r) - 1 >= d and any(r):
            while r and not r[-1]:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lead
            q[k] = f
            for i, y in enumerate(other.c):
                r[i + k] -= f * y
        return Poly(q), Poly(r)

    def divides(self, other: "Poly") -> bool:
        _, r = other.divmod(self)
        return r.is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.c[-1])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            _, r = a.divmod(b)
            a, b = b, r
        return a.monic()

    def eval(self, x) -> Fraction:
        x = frac(x)
        acc = Fraction(0)
        for c in reversed(self.c):
            acc = acc * x + c
        return acc

    def eval_mat(self, w: Mat) -> Mat:
        acc = Mat.zeros(w.rows, w.cols)
        for c in reversed(self.c):
            acc = acc * w
            for i in range(w.rows):
                acc.a[i][i] += c
        return acc

    def key(self):
        return (len(self.c), self.c)

    def render(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for d in range(len(self.c) - 1, -1, -1):
            c = self.c[d]
            if not c:
                continue
            if d == 0:
                term = frac_str(c)
            else:
                xs = var if d == 1 else f"{var}^{d}"
                if c == 1:
                    term = xs
                elif c == -1:
                    term = f"-{xs}"
                else:
                    term = f"{frac_str(c)}{xs}"
            parts.append(term)
        out = parts[0]
        for t in parts[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"Poly({self.render()})"


def poly_prod(factors) -> Poly:
    out = Poly.const(1)
    for f in factors:
        out = out * f
    return out


def irreducible_factors(p: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors over the rationals, with multiplicities."""
    if sympy is None:  # pragma: no cover
        raise RuntimeError("sympy is required for polynomial factorization")
    x = sympy.Symbol("x")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * x**d for d, c in enumerate(p.c)
    )
    _, factors = sympy.factor_list(sympy.Poly(expr, x))
    out = []
    for fac, mult in factors:
        coeffs = list(reversed(fac.all_coeffs()))
        q = Poly([Fraction(c.p, c.q) for c in [sympy.Rational(v) for v in coeffs]])
        out.append((q.monic(), int(mult)))
    return sorted(out, key=lambda t: t[0].key())


def is_irreducible(p: Poly) -> bool:
    if p.degree() < 1:
        return False
    f = irreducible_factors(p)
    return len(f) == 1 and f[0][1] == 1


# ----------------------------------------------------------------------
# Two-sided tensor polynomials


class BiPoly:
    """Element of k[x] (x) k[y]: sparse map (deg_x, deg_y) -> Fraction."""

    __slots__ = ("m",)

    def __init__(self, m=None):
        self.m = {}
        if m:
            for k, v in m.items():
                v = frac(v)
                if v:
                    self.m[(int(k[0]), int(k[1]))] = v

    @staticmethod
    def const(x) -> "BiPoly":
        return BiPoly({(0, 0): frac(x)})

    @staticmethod
    def left(poly: Poly) -> "BiPoly":
        return BiPoly({(d, 0): c for d, c in enumerate(poly.c)})

    @staticmethod
    def right(poly: Poly) -> "BiPoly":
        return BiPoly({(0, d): c for d, c in enumerate(poly.c)})

    def is_zero(self) -> bool:
        return not self.m

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.m)

    def constant(self) -> Fraction:
        return self.m.get((0, 0), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.m == other.m

    def __hash__(self):
        return hash(frozenset(self.m.items()))

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.m)
        for k, v in other.m.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        r = BiPoly()
        r.m = out
        return r

    def __neg__(self) -> "BiPoly":
        r = BiPoly()
        r.m = {k: -v for k, v in self.m.items()}
        return r

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        out = {}
        for (a, b), v in self.m.items():
            for (c, d), w in other.m.items():
                k = (a + c, b + d)
                s = out.get(k, Fraction(0)) + v * w
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        r = BiPoly()
        r.m = out
        return r

    def scale(self, k) -> "BiPoly":
        k = frac(k)
        r = BiPoly()
        if k:
            r.m = {key: k * v for key, v in self.m.items()}
        return r

    def mul_left_poly(self, p: Poly) -> "BiPoly":
        return BiPoly.left(p) * self

    def mul_right_poly(self, p: Poly) -> "BiPoly":
        return self * BiPoly.right(p)

    def eval(self, x, y) -> Fraction:
        x, y = frac(x), frac(y)
        return sum((v * x**a * y**b for (a, b), v in self.m.items()), Fraction(0))

    def eval_left(self, x) -> Poly:
        out = {}
        x = frac(x)
        for (a, b), v in self.m.items():
            out[b] = out.get(b, Fraction(0)) + v * x**a
        deg = max(out) if out else -1
        return Poly([out.get(d, 0) for d in range(deg + 1)])

    def eval_right(self, y) -> Poly:
        out = {}
        y = frac(y)
        for (a, b), v in self.m.items():
            out[a] = out.get(a, Fraction(0)) + v * y**b
        deg = max(out) if out else -1
        return Poly([out.get(d, 0) for d in range(deg + 1)])

    def apply(self, wl: Mat, c: Mat, wr: Mat) -> Mat:
        """Substitution sum_{ab} v_ab wl^a c wr^b, all powers exact."""
        if wl.rows != wl.cols or wr.rows != wr.cols:
            raise ValueError("weyr parts must be square")
        if c.rows != wl.rows or c.cols != wr.rows:
            raise ValueError("dimension mismatch in tensor substitution")
        dl = max((k[0] for k in self.m), default=0)
        dr = max((k[1] for k in self.m), default=0)
        lpow = [Mat.identity(wl.rows)]
        for _ in range(dl):
            lpow.append(lpow[-1] * wl)
        rpow = [Mat.identity(wr.rows)]
        for _ in range(dr):
            rpow.append(rpow[-1] * wr)
        out = Mat.zeros(c.rows, c.cols)
        for (a, b), v in self.m.items():
            out = out + (lpow[a] * c * rpow[b]).scale(v)
        return out

    def swap_sides(self) -> "BiPoly":
        r = BiPoly()
        r.m = {(b, a): v for (a, b), v in self.m.items()}
        return r

    def rank_one_split(self):
        """Write self as g(x) * h(y) if possible, else None.

        Returns (g, h) with g monic; the scalar is absorbed into h.
        """
        if self.is_zero():
            return None
        degx = max(k[0] for k in self.m)
        degy = max(k[1] for k in self.m)
        cols = {}
        for (a, b), v in self.m.items():
            cols.setdefault(b, {})[a] = v
        b0 = min(cols)
        g = Poly([cols[b0].get(d, 0) for d in range(degx + 1)])
        h_coeffs = [Fraction(0)] * (degy + 1)
        lead = g.c[-1]
        for b, col in cols.items():
            p = Poly([col.get(d, 0) for d in range(degx + 1)])
            q, r = p.divmod(g)
            if not r.is_zero() or not q.is_constant():
                return None
            h_coeffs[b] = q.constant() * lead
        return g.monic(), Poly(h_coeffs)

    def key(self):
        return tuple(sorted(self.m.items()))

    def render(self, lvar: str = "x", rvar: str = "y") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (a, b) in sorted(self.m, key=lambda k: (k[0] + k[1], k)):
            v = self.m[(a, b)]
            bits = []
            if a:
                bits.append(lvar if a == 1 else f"{lvar}^{a}")
            if b:
                bits.append(rvar if b == 1 else f"{rvar}^{b}")
            if not bits or abs(v) != 1:
                bits.insert(0, frac_str(abs(v)))
            term = "*".join(bits)
            parts.append(("-" if v < 0 else "+", term))
        sign, term = parts[0]
        out = ("-" if sign == "-" else "") + term
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __repr__(self):
        return f"BiPoly({self.render()})"


def bipoly_div_left(num: BiPoly, f: Poly):
    """Exact division of num by f(x) acting on the left factor, or None."""
    cols = {}
    for (a, b), v in num.m.items():
        cols.setdefault(b, {})[a] = v
    out = {}
    for b, col in cols.items():
        degx = max(col)
        p = Poly([col.get(d, 0) for d in range(degx + 1)])
        q, r = p.divmod(f)
        if not r.is_zero():
            return None
        for d, c in enumerate(q.c):
            if c:
                out[(d, b)] = c
    res = BiPoly()
    res.m = out
    return res


def bipoly_div_right(num: BiPoly, f: Poly):
    got = bipoly_div_left(num.swap_sides(), f)
    return None if got is None else got.swap_sides()


# ----------------------------------------------------------------------
# Localized elements


def _sorted_factors(factors) -> tuple[Poly, ...]:
    return tuple(sorted((f.monic() for f in factors), key=lambda p: p.key()))


class LocElem:
    """BiPoly numerator over products of monic denominator factors per side."""

    __slots__ = ("num", "den_l", "den_r")

    def __init__(self, num: BiPoly, den_l=(), den_r=()):
        den_l = [f for f in den_l]
        den_r = [f for f in den_r]
        for f in den_l + den_r:
            if f.is_constant():
                raise ValueError("constant denominator factor")
        # cancel factors dividing the numerator exactly
        kept_l = []
        for f in den_l:
            q = bipoly_div_left(num, f.monic())
            if q is not None:
                num = q
            else:
                kept_l.append(f.monic())
        kept_r = []
        for f in den_r:
            q = bipoly_div_right(num, f.monic())
            if q is not None:
                num = q
            else:
                kept_r.append(f.monic())
        self.num = num
        self.den_l = _sorted_factors(kept_l)
        self.den_r = _sorted_factors(kept_r)

    @staticmethod
    def const(x) -> "LocElem":
        return LocElem(BiPoly.const(x))

    @staticmethod
    def from_bipoly(b: BiPoly) -> "LocElem":
        return LocElem(b)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and not self.den_l and not self.den_r

    def constant(self) -> Fraction:
        return self.num.constant()

    def den_l_poly(self) -> Poly:
        return poly_prod(self.den_l)

    def den_r_poly(self) -> Poly:
        return poly_prod(self.den_r)

    def __eq__(self, other):
        if not isinstance(other, LocElem):
            return NotImplemented
        lhs = self.num.mul_left_poly(other.den_l_poly()).mul_right_poly(
            other.den_r_poly()
        )
        rhs = other.num.mul_left_poly(self.den_l_poly()).mul_right_poly(
            self.den_r_poly()
        )
        return lhs == rhs

    def __hash__(self):
        return hash((self.num.key(), self.den_l, self.den_r))

    def __add__(self, other: "LocElem") -> "LocElem":
        num = self.num.mul_left_poly(other.den_l_poly()).mul_right_poly(
            other.den_r_poly()
        ) + other.num.mul_left_poly(self.den_l_poly()).mul_right_poly(
            self.den_r_poly()
        )
        return LocElem(num, self.den_l + other.den_l, self.den_r + other.den_r)

    def __neg__(self) -> "LocElem":
        out = LocElem.__new__(LocElem)
        out.num = -self.num
        out.den_l = self.den_l
        out.den_r = self.den_r
        return out

    def __sub__(self, other: "LocElem") -> "LocElem":
        return self + (-other)

    def __mul__(self, other: "LocElem") -> "LocElem":
        return LocElem(
            self.num * other.num,
            self.den_l + other.den_l,
            self.den_r + other.den_r,
        )

    def scale(self, k) -> "LocElem":
        out = LocElem.__new__(LocElem)
        out.num = self.num.scale(k)
        out.den_l = self.den_l if out.num.m else ()
        out.den_r = self.den_r if out.num.m else ()
        return out

    def eval(self, x, y) -> Fraction:
        dl = self.den_l_poly().eval(x)
        dr = self.den_r_poly().eval(y)
        if not dl or not dr:
            raise ZeroDivisionError("evaluation at a forbidden point")
        return self.num.eval(x, y) / (dl * dr)

    def invertible_split(self, forbidden_l, forbidden_r):
        """Split the numerator as c * g(x) * h(y) with g, h built from
        forbidden factors.  Returns (c, g_factors, h_factors) or None.
        """
        split = self.num.rank_one_split()
        if split is None:
            return None
        g, h = split
        gl, hr = [], []
        for f in forbidden_l:
            while f.divides(g):
                g, _ = g.divmod(f)
                gl.append(f.monic())
        for f in forbidden_r:
            while f.divides(h):
                h, _ = h.divmod(f)
                hr.append(f.monic())
        if not g.is_constant() or not h.is_constant():
            return None
        c = g.constant() * h.constant()
        return c, _sorted_factors(gl), _sorted_factors(hr)

    def is_invertible(self, forbidden_l, forbidden_r) -> bool:
        return (
            not self.is_zero()
            and self.invertible_split(forbidden_l, forbidden_r) is not None
        )

    def inverse(self, forbidden_l, forbidden_r) -> "LocElem":
        split = self.invertible_split(forbidden_l, forbidden_r)
        if split is None:
            raise ZeroDivisionError("element is not invertible in the localized ring")
        c, gl, hr = split
        num = BiPoly.left(self.den_l_poly()).mul_right_poly(self.den_r_poly())
        return LocElem(num.scale(1 / c), gl, hr)

    def render(self, lvar="x", rvar="y") -> str:
        s = self.num.render(lvar, rvar)
        if self.den_l or self.den_r:
            dens = [f"({f.render(lvar)})" for f in self.den_l] + [
                f"({f.render(rvar)})" for f in self.den_r
            ]
            s = f"({s})/" + "".join(dens)
        return s

    def __repr__(self):
        return f"LocElem({self.render()})"


# ----------------------------------------------------------------------
# Three-sided coefficients for bilinear differential terms


class Tri:
    """Sparse element of k[x] (x) k[y] (x) k[z] with denominator factors.

    Used only to carry coefficients of bilinear terms; supports sums,
    scaling, and products assembled from two-sided pieces.
    """

    __slots__ = ("m", "den")

    def __init__(self, m=None, den=((), (), ())):
        self.m = {}
        if m:
            for k, v in m.items():
                v = frac(v)
                if v:
                    self.m[(int(k[0]), int(k[1]), int(k[2]))] = v
        self.den = tuple(_sorted_factors(d) for d in den)
        if not self.m:
            self.den = ((), (), ())

    @staticmethod
    def const(x) -> "Tri":
        return Tri({(0, 0, 0): frac(x)})

    @staticmethod
    def from_pair(left: LocElem, right: LocElem) -> "Tri":
        """Coefficient of (s (x) t) where left multiplies around s and right
        around t; the middle slot collects left's right factor times right's
        left factor."""
        m = {}
        for (a, b), v in left.num.m.items():
            for (c, d), w in right.num.m.items():
                k = (a, b + c, d)
                s = m.get(k, Fraction(0)) + v * w
                if s:
                    m[k] = s
                else:
                    m.pop(k, None)
        den = (left.den_l, left.den_r + right.den_l, right.den_r)
        return Tri(m, den)

    def is_zero(self) -> bool:
        return not self.m

    def _common(self, other: "Tri"):
        return tuple(self.den[i] + other.den[i] for i in range(3))

    def __add__(self, other: "Tri") -> "Tri":
        if self.den == other.den:
            out = dict(self.m)
            for k, v in other.m.items():
                s = out.get(k, Fraction(0)) + v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            return Tri(out, self.den)
        # general case: scale each numerator by the other's denominators
        def blow(tri: Tri, extra):
            polys = [poly_prod(e) for e in extra]
            out = {}
            for (a, b, c), v in tri.m.items():
                for da, ca in enumerate(polys[0].c):
                    if not ca:
                        continue
                    for db, cb in enumerate(polys[1].c):
                        if not cb:
                            continue
                        for dc, cc in enumerate(polys[2].c):
                            if not cc:
                                continue
                            k = (a + da, b + db, c + dc)
                            s = out.get(k, Fraction(0)) + v * ca * cb * cc
                            if s:
                                out[k] = s
                            else:
                                out.pop(k, None)
            return out

        den = self._common(other)
        m = blow(self, other.den)
        for k, v in blow(other, self.den).items():
            s = m.get(k, Fraction(0)) + v
            if s:
                m[k] = s
            else:
                m.pop(k, None)
        return Tri(m, den)

    def __neg__(self) -> "Tri":
        out = Tri.__new__(Tri)
        out.m = {k: -v for k, v in self.m.items()}
        out.den = self.den
        return out

    def __sub__(self, other: "Tri") -> "Tri":
        return self + (-other)

    def scale(self, k) -> "Tri":
        k = frac(k)
        out = Tri.__new__(Tri)
        out.m = {key: k * v for key, v in self.m.items()} if k else {}
        out.den = self.den if out.m else ((), (), ())
        return out

    def __eq__(self, other):
        if not isinstance(other, Tri):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((tuple(sorted(self.m.items())), self.den))

    def key(self):
        return (tuple(sorted(self.m.items())), self.den)

    def render(self, vars=("x", "y", "z")) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in sorted(self.m, key=lambda t: (sum(t), t)):
            v = self.m[k]
            bits = []
            for d, var in zip(k, vars):
                if d:
                    bits.append(var if d == 1 else f"{var}^{d}")
            if not bits or abs(v) != 1:
                bits.insert(0, frac_str(abs(v)))
            parts.append(("-" if v < 0 else "+", "*".join(bits)))
        sign, term = parts[0]
        out = ("-" if sign == "-" else "") + term
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __repr__(self):
        return f"Tri({self.render()})"

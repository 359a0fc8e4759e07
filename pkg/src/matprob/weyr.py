"""Jordan data and Weyr canonical forms of exact rational matrices.

A Weyr matrix of eigenvalue lam with multiplicities m_1 >= m_2 >= ... >= m_d
is the block matrix with lam*I_{m_j} on the diagonal and superdiagonal blocks
W_{j,j+1} = (I_{m_{j+1}}; 0).  Distinct eigenvalues are kept in ascending
numeric order so every similarity class has exactly one Weyr form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import Mat, frac
from .errors import NonSplitSpectrum
from .rings import Poly


def char_poly(a: Mat) -> Poly:
    """Characteristic polynomial det(xI - A) via Faddeev-LeVerrier."""
    n = a.rows
    if n != a.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = Mat.zeros(n, n)
    c = Fraction(1)
    for k in range(1, n + 1):
        for i in range(n):
            m.a[i][i] += c
        m = a * m
        tr = sum(m.a[i][i] for i in range(n))
        c = -tr / k
        coeffs[n - k] = c
    return Poly(coeffs)


def rational_roots(p: Poly) -> dict[Fraction, int]:
    """Rational roots with multiplicities, by the rational root theorem."""
    roots: dict[Fraction, int] = {}
    q = Poly(p.c)
    # root 0 first
    while not q.is_zero() and q.c[0] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        q = Poly(q.c[1:])
    while q.degree() >= 1:
        # scale to integer coefficients
        den = 1
        for c in q.c:
            den = den * c.denominator // _gcd(den, c.denominator)
        ints = [int(c * den) for c in q.c]
        a0, an = abs(ints[0]), abs(ints[-1])
        found = None
        for num in _divisors(a0):
            for d in _divisors(an):
                for cand in (Fraction(num, d), Fraction(-num, d)):
                    if q.eval(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots[found] = roots.get(found, 0) + 1
        q, r = q.divmod(Poly([-found, 1]))
        assert r.is_zero()
    if q.degree() >= 1:
        roots["__residual__"] = q  # type: ignore[index]
    return roots


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


def _divisors(n: int):
    if n == 0:
        return [1]
    n = abs(n)
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


@dataclass(frozen=True)
class JordanData:
    """Per eigenvalue, block counts e[j] = number of Jordan blocks of size j.

    Eigenvalues are pairwise distinct and sorted ascending; e is a tuple
    indexed from 1 (e[0] unused, kept zero).
    """

    eigs: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def __post_init__(self):
        lams = [l for l, _ in self.eigs]
        if lams != sorted(set(lams)):
            raise ValueError("eigenvalues must be distinct and ascending")
        for _, e in self.eigs:
            if len(e) < 2 or e[0] != 0 or all(c == 0 for c in e[1:]) or any(
                c < 0 for c in e
            ):
                raise ValueError("invalid block multiplicities")

    @staticmethod
    def make(pairs) -> "JordanData":
        """pairs: iterable of (eigenvalue, {size: count})."""
        eigs = []
        for lam, blocks in pairs:
            if not blocks:
                continue
            d = max(blocks)
            e = [0] * (d + 1)
            for size, count in blocks.items():
                if size < 1 or count < 0:
                    raise ValueError("invalid Jordan block spec")
                e[size] = count
            eigs.append((frac(lam), tuple(e)))
        eigs.sort(key=lambda t: t[0])
        return JordanData(tuple(eigs))

    def size(self) -> int:
        return sum(j * e[j] for _, e in self.eigs for j in range(1, len(e)))

    def m_sequence(self, lam) -> tuple[int, ...]:
        """Weakly decreasing Weyr multiplicities m_j = e_d + ... + e_j."""
        for l, e in self.eigs:
            if l == lam:
                d = len(e) - 1
                return tuple(sum(e[j:]) for j in range(1, d + 1))
        raise KeyError(lam)

    def jordan_matrix(self) -> Mat:
        blocks = []
        for lam, e in self.eigs:
            for size in range(len(e) - 1, 0, -1):
                for _ in range(e[size]):
                    b = Mat.zeros(size, size)
                    for i in range(size):
                        b.a[i][i] = lam
                        if i + 1 < size:
                            b.a[i][i + 1] = Fraction(1)
                    blocks.append(b)
        n = sum(b.rows for b in blocks)
        out = Mat.zeros(n, n)
        r = 0
        for b in blocks:
            for i in range(b.rows):
                out.a[r + i][r : r + b.rows] = b.a[i][:]
            r += b.rows
        return out


@dataclass(frozen=True)
class WeyrForm:
    """Assembled Weyr matrix with its per-eigenvalue multiplicity sequences."""

    jordan: JordanData
    matrix: Mat

    def eigenvalues(self) -> list[Fraction]:
        return [l for l, _ in self.jordan.eigs]

    def m_sequences(self) -> dict[Fraction, tuple[int, ...]]:
        return {l: self.jordan.m_sequence(l) for l, _ in self.jordan.eigs}

    def size(self) -> int:
        return self.matrix.rows

    def link_count(self) -> int:
        """Number of non-eigenvalue 1 entries: sum of m_j for j >= 2."""
        total = 0
        for _, e in self.jordan.eigs:
            ms = tuple(sum(e[j:]) for j in range(1, len(e)))
            total += sum(ms[1:])
        return total


def weyr_matrix(jd: JordanData) -> WeyrForm:
    """The Weyr matrix of the given Jordan data, per the block template."""
    blocks = []
    for lam, e in jd.eigs:
        d = len(e) - 1
        ms = [sum(e[j:]) for j in range(1, d + 1)]
        size = sum(ms)
        w = Mat.zeros(size, size)
        offs = [0]
        for m in ms:
            offs.append(offs[-1] + m)
        for j, m in enumerate(ms):
            for i in range(m):
                w.a[offs[j] + i][offs[j] + i] = lam
            if j + 1 < len(ms):
                for i in range(ms[j + 1]):
                    w.a[offs[j] + i][offs[j + 1] + i] = Fraction(1)
        blocks.append(w)
    n = sum(b.rows for b in blocks)
    out = Mat.zeros(n, n)
    r = 0
    for b in blocks:
        for i in range(b.rows):
            out.a[r + i][r : r + b.rows] = b.a[i][:]
        r += b.rows
    return WeyrForm(jd, out)


def jordan_data(a: Mat) -> JordanData:
    """Jordan block counts from nullity jumps of powers of (A - lam*I).

    Raises NonSplitSpectrum when the characteristic polynomial has an
    irrational root.
    """
    n = a.rows
    p = char_poly(a)
    roots = rational_roots(p)
    residual = roots.pop("__residual__", None)
    if residual is not None:
        raise NonSplitSpectrum(residual.monic().render())
    eigs = []
    for lam in sorted(roots):
        alg = roots[lam]
        shifted = a.copy()
        for i in range(n):
            shifted.a[i][i] -= lam
        nullities = [0]
        power = Mat.identity(n)
        while True:
            power = power * shifted
            nullities.append(n - power.rank())
            if nullities[-1] == nullities[-2]:
                nullities.pop()
                break
            if len(nullities) > alg + 1:
                break
        ms = [nullities[j] - nullities[j - 1] for j in range(1, len(nullities))]
        d = len(ms)
        e = [0] * (d + 1)
        for j in range(1, d + 1):
            nxt = ms[j] if j < d else 0
            e[j] = ms[j - 1] - nxt
        eigs.append((lam, tuple(e)))
    jd = JordanData(tuple(eigs))
    if jd.size() != n:
        # defensive: multiplicities must exhaust the matrix size
        raise NonSplitSpectrum(p.monic().render())
    return jd


def weyr_canonical(a: Mat) -> tuple[WeyrForm, Mat]:
    """Weyr form W and an exact similarity S with S^-1 A S = W."""
    jd = jordan_data(a)
    w = weyr_matrix(jd)
    n = a.rows
    columns: list[Mat] = []
    for lam, e in jd.eigs:
        d = len(e) - 1
        shifted = a.copy()
        for i in range(n):
            shifted.a[i][i] -= lam
        powers = [Mat.identity(n)]
        for _ in range(d):
            powers.append(powers[-1] * shifted)
        kernels = [powers[j].kernel_basis() for j in range(d + 1)]
        # chains[h] = list of chain tops of height h (top-down generation)
        chains: list[list[Mat]] = []
        for h in range(d, 0, -1):
            # span to avoid: ker (A-lam)^(h-1) plus images of taller chains
            avoid = [v for v in kernels[h - 1]]
            for top, height in chains:
                avoid.append(powers[height - h] * top)
            cand = kernels[h]
            cur = _col_concat(avoid, n)
            base_rank = cur.rank() if cur.cols else 0
            for v in cand:
                trial = cur.hstack(v) if cur.cols else v
                r = trial.rank()
                if r > base_rank:
                    chains.append((v, h))
                    cur = trial
                    base_rank = r
                    avoid.append(v)
        # Weyr basis: layers bottom-up; within a layer, chains by height desc
        order = sorted(range(len(chains)), key=lambda i: (-chains[i][1], i))
        for layer in range(1, d + 1):
            for i in order:
                top, height = chains[i]
                if height >= layer:
                    columns.append(powers[height - layer] * top)
    s = _col_concat(columns, n)
    if s.cols != n or s.rank() != n:
        raise RuntimeError("failed to assemble a full generalized eigenbasis")
    check = s.inv() * a * s
    if check != w.matrix:
        raise RuntimeError("similarity certificate failed")
    return w, s


def _col_concat(cols, n: int) -> Mat:
    out = Mat.zeros(n, 0)
    for c in cols:
        out = out.hstack(c)
    return out


def is_regular(w: WeyrForm, forbidden) -> bool:
    """True iff no eigenvalue of w is a root of any forbidden polynomial."""
    for lam in w.eigenvalues():
        for f in forbidden:
            if f.eval(lam) == 0:
                return False
    return True

"""Exact arithmetic in small finite fields F_{p^n} and dense exact linear algebra.

Field elements are plain Python ints in ``range(q)``: the int encodes the
coefficient vector of the residue-class representative in little-endian base
``p``, so ``0`` and ``1`` are the additive and multiplicative identities for
every field.  The modulus is a deterministic function of ``(p, n)`` (the
lexicographically least monic irreducible, reading coefficient vectors as
base-``p`` integers), which keeps every serialized value reproducible.

Matrices are dense lists of rows of ints.  Row vectors are the default
orientation throughout the package: a module element is a row vector ``m``
and acts as ``m @ rho(a)``.  Over characteristic 2 the row-reduction kernels
switch to a bit-packed representation (one int bitmask per coefficient
plane), which is what keeps the intertwiner solves cheap.
"""

from __future__ import annotations

from functools import lru_cache

SIZE_BOUND = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# bootstrap polynomial arithmetic on digit tuples (used only to build tables)
# ---------------------------------------------------------------------------

def _digits(x: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _poly_mod(ds: list[int], modulus: list[int], p: int) -> list[int]:
    """Reduce a digit list modulo a monic modulus (in place, little-endian)."""
    n = len(modulus) - 1
    ds = list(ds)
    for i in range(len(ds) - 1, n - 1, -1):
        c = ds[i]
        if c:
            for j in range(n + 1):
                ds[i - n + j] = (ds[i - n + j] - c * modulus[j]) % p
    return ds[:n] + [0] * max(0, n - len(ds))


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_mod(prod, modulus, p)


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    n = len(coeffs) - 1
    if n <= 0:
        return False
    for d in range(1, n // 2 + 1):
        for enc in range(p ** d):
            div = _digits(enc, p, d) + [1]
            # long division remainder
            rem = list(coeffs)
            for i in range(len(rem) - 1, d - 1, -1):
                c = rem[i]
                if c:
                    for j in range(d + 1):
                        rem[i - d + j] = (rem[i - d + j] - c * div[j]) % p
            if all(x == 0 for x in rem[:d]):
                return False
    return True


def _canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    for enc in range(p ** n):
        coeffs = _digits(enc, p, n) + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RuntimeError(f"no irreducible of degree {n} over F_{p}")  # unreachable


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


class GF:
    """The finite field F_{p^n} with its canonical modulus.

    Use the module-level :func:`field` factory so that equal parameters give
    the identical object (callers rely on identity for cache keys).
    """

    def __init__(self, p: int, n: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        q = p ** n
        if q > SIZE_BOUND:
            raise ValueError(f"field size {q} exceeds bound {SIZE_BOUND}")
        self.p = p
        self.n = n
        self.q = q
        self.modulus = _canonical_modulus(p, n)
        self._build_tables()
        self._scalar_planes: dict[int, tuple] = {}

    # -- table construction -------------------------------------------------

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        mod = list(self.modulus)

        def raw_mul(a: int, b: int) -> int:
            return _undigits(
                _poly_mulmod(_digits(a, p, n), _digits(b, p, n), mod, p), p
            )

        def raw_pow(a: int, e: int) -> int:
            r = 1
            while e:
                if e & 1:
                    r = raw_mul(r, a)
                a = raw_mul(a, a)
                e >>= 1
            return r

        # least primitive element in the integer encoding
        fac = _prime_factors(q - 1) if q > 2 else []
        gen = None
        for g in range(1, q):
            if q == 2:
                gen = 1
                break
            if all(raw_pow(g, (q - 1) // f) != 1 for f in fac):
                gen = g
                break
        assert gen is not None
        self.gen = gen

        exp = [1] * (2 * (q - 1))
        log = [0] * q
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            log[acc] = i
            acc = raw_mul(acc, gen)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log

        if p == 2:
            self._add_table = None
            self._neg = None
        else:
            self._neg = [_undigits([(-d) % p for d in _digits(a, p, n)], p) for a in range(q)]
            if q <= 256:
                self._add_table = [
                    [
                        _undigits(
                            [(x + y) % p for x, y in zip(_digits(a, p, n), _digits(b, p, n))],
                            p,
                        )
                        for b in range(q)
                    ]
                    for a in range(q)
                ]
            else:
                self._add_table = None

        self._frob = [raw_pow(a, p) for a in range(q)]

    # -- element arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        p, n = self.p, self.n
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, n), _digits(b, p, n))], p)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frob(self, a: int) -> int:
        """The Frobenius x -> x^p (a field automorphism fixing F_p)."""
        return self._frob[a]

    def elements(self):
        return range(self.q)

    def digits(self, a: int) -> list[int]:
        return _digits(a, self.p, self.n)

    def from_digits(self, ds) -> int:
        return _undigits(list(ds), self.p)

    def scalar_planes(self, c: int) -> tuple:
        """Bit-plane mixing masks for multiplication by ``c`` (p == 2 only).

        ``out_plane[i] = XOR of in_plane[j] for j in masks[i]``.
        """
        planes = self._scalar_planes.get(c)
        if planes is None:
            n = self.n
            cols = [self.digits(self.mul(c, 1 << j)) for j in range(n)]
            planes = tuple(
                tuple(j for j in range(n) if cols[j][i]) for i in range(n)
            )
            self._scalar_planes[c] = planes
        return planes

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(p: int, n: int = 1) -> GF:
    """The canonical F_{p^n}; repeated calls return the identical object."""
    return GF(p, n)


# ---------------------------------------------------------------------------
# field embeddings / restriction of scalars
# ---------------------------------------------------------------------------

class FieldEmbedding:
    """The canonical ring embedding F_{p^n} -> F_{p^{nm}}.

    The image of the small field's generator-of-the-modulus is the least root
    (in the integer encoding) of the small modulus inside the big field, so
    the embedding is deterministic.  ``block(y)`` realizes restriction of
    scalars: the m x m matrix of multiplication-by-y on the big field in the
    fixed small-field basis ``1, g, ..., g^{m-1}`` (g the big field's
    primitive generator).
    """

    def __init__(self, small: GF, m: int):
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        self.small = small
        self.m = m
        self.big = field(small.p, small.n * m)
        big = self.big

        # least root of the small modulus in the big field
        root = None
        for y in range(big.q):
            acc = 0
            ypow = 1
            for c in self.small.modulus:
                if c:
                    acc = big.add(acc, big.mul(_int_in(big, c), ypow))
                ypow = big.mul(ypow, y)
            if acc == 0:
                root = y
                break
        assert root is not None
        self._root_pows = [big.pow(root, i) for i in range(small.n)]

        self.basis = tuple(big.pow(big.gen, j) for j in range(m))

        # F_p change-of-basis: columns are digit vectors of eps(x^i) * g^j
        fp = field(small.p, 1)
        cols = []
        for j in range(m):
            for i in range(small.n):
                u = big.mul(self._root_pows[i], self.basis[j])
                cols.append(big.digits(u))
        C = Mat(fp, [[cols[c][r] for c in range(big.n)] for r in range(big.n)])
        self._Cinv = C.inverse()

    def map(self, a: int) -> int:
        """Image of a small-field element in the big field."""
        big = self.big
        acc = 0
        for i, c in enumerate(self.small.digits(a)):
            if c:
                acc = big.add(acc, big.mul(_int_in(big, c), self._root_pows[i]))
        return acc

    def coords(self, y: int) -> tuple[int, ...]:
        """Coordinates of a big-field element over the small field."""
        digit_vec = self.big.digits(y)
        sol = self._Cinv.apply_right(digit_vec)
        ns = self.small.n
        return tuple(
            self.small.from_digits(sol[j * ns: (j + 1) * ns]) for j in range(self.m)
        )

    def block(self, y: int) -> "Mat":
        """m x m small-field matrix of multiplication-by-y (row convention)."""
        big = self.big
        return Mat(
            self.small, [list(self.coords(big.mul(b, y))) for b in self.basis]
        )


def _int_in(f: GF, c: int) -> int:
    """The prime-field integer c as an element of f (digit c in plane 0)."""
    return c % f.p


@lru_cache(maxsize=None)
def embed(small: GF, m: int) -> FieldEmbedding:
    return FieldEmbedding(small, m)


# ---------------------------------------------------------------------------
# dense exact matrices
# ---------------------------------------------------------------------------

class Mat:
    """A dense matrix over a GF; rows of ints, treated as immutable."""

    __slots__ = ("field", "r", "c", "rows")

    def __init__(self, f: GF, rows):
        self.field = f
        self.rows = [list(row) for row in rows]
        self.r = len(self.rows)
        self.c = len(self.rows[0]) if self.rows else 0

    @staticmethod
    def zeros(f: GF, r: int, c: int) -> "Mat":
        return Mat(f, [[0] * c for _ in range(r)])

    @staticmethod
    def identity(f: GF, d: int) -> "Mat":
        m = Mat.zeros(f, d, d)
        for i in range(d):
            m.rows[i][i] = 1
        return m

    def copy(self) -> "Mat":
        return Mat(self.field, self.rows)

    def to_tuple(self) -> tuple:
        return tuple(tuple(row) for row in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field is other.field
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((id(self.field), self.to_tuple()))

    def __repr__(self):
        return f"Mat({self.field}, {self.r}x{self.c})"

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.rows)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        f = self.field
        add = f.add
        return Mat(f, [
            [add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)
        ])

    def __sub__(self, other: "Mat") -> "Mat":
        f = self.field
        add, neg = f.add, f.neg
        return Mat(f, [
            [add(a, neg(b)) for a, b in zip(ra, rb)]
            for ra, rb in zip(self.rows, other.rows)
        ])

    def scale(self, c: int) -> "Mat":
        f = self.field
        mul = f.mul
        return Mat(f, [[mul(c, x) for x in row] for row in self.rows])

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.c != other.r:
            raise ValueError(f"shape mismatch {self.r}x{self.c} @ {other.r}x{other.c}")
        f = self.field
        add, mul = f.add, f.mul
        orows = other.rows
        out = []
        for arow in self.rows:
            acc = [0] * other.c
            for k, a in enumerate(arow):
                if a:
                    brow = orows[k]
                    if a == 1:
                        acc = [add(x, y) for x, y in zip(acc, brow)]
                    else:
                        acc = [add(x, mul(a, y)) for x, y in zip(acc, brow)]
            out.append(acc)
        return Mat(f, out)

    def transpose(self) -> "Mat":
        return Mat(self.field, [list(col) for col in zip(*self.rows)]) if self.r else Mat(self.field, [])

    def apply_left(self, v) -> list[int]:
        """Row vector times matrix: v @ A."""
        f = self.field
        add, mul = f.add, f.mul
        acc = [0] * self.c
        for k, a in enumerate(v):
            if a:
                row = self.rows[k]
                if a == 1:
                    acc = [add(x, y) for x, y in zip(acc, row)]
                else:
                    acc = [add(x, mul(a, y)) for x, y in zip(acc, row)]
        return acc

    def apply_right(self, v) -> list[int]:
        """Matrix times column vector: A @ v."""
        f = self.field
        add, mul = f.add, f.mul
        out = []
        for row in self.rows:
            acc = 0
            for a, x in zip(row, v):
                if a and x:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return out

    # -- echelon forms ----------------------------------------------------------

    def rref(self) -> tuple["Mat", tuple[int, ...]]:
        """Reduced row echelon form and the pivot columns."""
        if self.field.p == 2:
            return self._rref_packed()
        return self._rref_generic()

    def _rref_generic(self):
        f = self.field
        add, mul, neg, inv = f.add, f.mul, f.neg, f.inv
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for col in range(self.c):
            piv = None
            for r in range(pr, len(rows)):
                if rows[r][col]:
                    piv = r
                    break
            if piv is None:
                continue
            rows[pr], rows[piv] = rows[piv], rows[pr]
            c0 = inv(rows[pr][col])
            if c0 != 1:
                rows[pr] = [mul(c0, x) for x in rows[pr]]
            prow = rows[pr]
            for r in range(len(rows)):
                if r != pr and rows[r][col]:
                    fac = neg(rows[r][col])
                    rows[r] = [add(x, mul(fac, y)) for x, y in zip(rows[r], prow)]
            pivots.append(col)
            pr += 1
            if pr == len(rows):
                break
        return Mat(f, rows), tuple(pivots)

    # packed char-2 kernel: each row is a list of n ints (bit planes)

    def _pack(self):
        f = self.field
        n = f.n
        packed = []
        for row in self.rows:
            planes = [0] * n
            for j, x in enumerate(row):
                if x:
                    for i, d in enumerate(f.digits(x)):
                        if d:
                            planes[i] |= 1 << j
            packed.append(planes)
        return packed

    def _unpack(self, packed):
        f = self.field
        n = f.n
        rows = []
        for planes in packed:
            row = []
            for j in range(self.c):
                ds = [(planes[i] >> j) & 1 for i in range(n)]
                row.append(f.from_digits(ds))
            rows.append(row)
        return rows

    def _rref_packed(self):
        f = self.field
        n = f.n
        packed = self._pack()
        pivots = []
        pr = 0
        nrows = len(packed)
        for col in range(self.c):
            bit = 1 << col
            piv = None
            for r in range(pr, nrows):
                if any(packed[r][i] & bit for i in range(n)):
                    piv = r
                    break
            if piv is None:
                continue
            packed[pr], packed[piv] = packed[piv], packed[pr]
            # normalize pivot entry to 1
            ent = f.from_digits([(packed[pr][i] >> col) & 1 for i in range(n)])
            if ent != 1:
                packed[pr] = _scale_packed(f, packed[pr], f.inv(ent))
            prow = packed[pr]
            multiples = {}
            for r in range(nrows):
                if r == pr:
                    continue
                ent = f.from_digits([(packed[r][i] >> col) & 1 for i in range(n)])
                if ent:
                    mrow = multiples.get(ent)
                    if mrow is None:
                        mrow = _scale_packed(f, prow, ent)
                        multiples[ent] = mrow
                    packed[r] = [a ^ b for a, b in zip(packed[r], mrow)]
            pivots.append(col)
            pr += 1
            if pr == nrows:
                break
        return Mat(f, self._unpack(packed)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def row_space_basis(self) -> "Mat":
        R, piv = self.rref()
        return Mat(self.field, R.rows[: len(piv)])

    def right_nullspace(self) -> list[tuple[int, ...]]:
        """Basis of {x : A @ x = 0}, as tuples of length c."""
        f = self.field
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.c) if j not in pivset]
        basis = []
        for fc in free:
            v = [0] * self.c
            v[fc] = 1
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(R.rows[i][fc])
            basis.append(tuple(v))
        return basis

    def left_nullspace(self) -> list[tuple[int, ...]]:
        """Basis of {x : x @ A = 0}, as tuples of length r."""
        return self.transpose().right_nullspace()

    def solve_right(self, b) -> list[int] | None:
        """One solution x of A @ x = b, or None if inconsistent."""
        f = self.field
        aug = Mat(f, [row + [bv] for row, bv in zip(self.rows, b)])
        R, pivots = aug.rref()
        if self.c in pivots:
            return None
        x = [0] * self.c
        for i, pc in enumerate(pivots):
            x[pc] = R.rows[i][self.c]
        return x

    def solve_left(self, b) -> list[int] | None:
        """One solution x of x @ A = b, or None."""
        sol = self.transpose().solve_right(list(b))
        return sol

    def inverse(self) -> "Mat":
        if self.r != self.c:
            raise ValueError("inverse of a non-square matrix")
        f = self.field
        d = self.r
        aug = Mat(f, [row + [1 if i == j else 0 for j in range(d)]
                      for i, row in enumerate(self.rows)])
        R, pivots = aug.rref()
        if list(pivots[:d]) != list(range(d)):
            raise ValueError("matrix is singular")
        return Mat(f, [row[d:] for row in R.rows[:d]])

    def is_invertible(self) -> bool:
        return self.r == self.c and self.rank() == self.r

    # -- characteristic polynomial (Hessenberg recurrence) ----------------------

    def charpoly(self) -> tuple[int, ...]:
        """Monic characteristic polynomial, little-endian coefficient tuple."""
        if self.r != self.c:
            raise ValueError("charpoly of a non-square matrix")
        f = self.field
        d = self.r
        if d == 0:
            return (1,)
        add, mul, neg, inv = f.add, f.mul, f.neg, f.inv
        H = [list(row) for row in self.rows]
        # reduce to upper Hessenberg by similarity
        for m in range(d - 2):
            piv = None
            for r in range(m + 1, d):
                if H[r][m]:
                    piv = r
                    break
            if piv is None:
                continue
            if piv != m + 1:
                H[m + 1], H[piv] = H[piv], H[m + 1]
                for r in range(d):
                    H[r][m + 1], H[r][piv] = H[r][piv], H[r][m + 1]
            pval = H[m + 1][m]
            for r in range(m + 2, d):
                if H[r][m]:
                    fac = mul(H[r][m], inv(pval))
                    nfac = neg(fac)
                    H[r] = [add(x, mul(nfac, y)) for x, y in zip(H[r], H[m + 1])]
                    for rr in range(d):
                        H[rr][m + 1] = add(H[rr][m + 1], mul(fac, H[rr][r]))
        # Hessenberg charpoly recurrence
        polys = [(1,)]  # charpoly of the empty leading block
        for m in range(1, d + 1):
            prev = polys[m - 1]
            # (x - H[m-1][m-1]) * prev
            cur = [0] * (len(prev) + 1)
            negd = neg(H[m - 1][m - 1])
            for i, cval in enumerate(prev):
                cur[i + 1] = add(cur[i + 1], cval)
                cur[i] = add(cur[i], mul(negd, cval))
            run = 1
            for i in range(m - 1, 0, -1):
                run = mul(run, H[i][i - 1])
                if run == 0:
                    break
                coeff = mul(H[i - 1][m - 1], run)
                if coeff:
                    ncoeff = neg(coeff)
                    for j, cval in enumerate(polys[i - 1]):
                        cur[j] = add(cur[j], mul(ncoeff, cval))
            polys.append(tuple(cur))
        return polys[d]

    # -- block helpers -----------------------------------------------------------

    @staticmethod
    def vstack(mats: list["Mat"]) -> "Mat":
        f = mats[0].field
        rows = []
        for m in mats:
            rows.extend(m.rows)
        return Mat(f, rows)

    @staticmethod
    def hstack(mats: list["Mat"]) -> "Mat":
        f = mats[0].field
        rows = []
        for i in range(mats[0].r):
            row = []
            for m in mats:
                row.extend(m.rows[i])
            rows.append(row)
        return Mat(f, rows)

    @staticmethod
    def block_diag(f: GF, mats: list["Mat"]) -> "Mat":
        rt = sum(m.r for m in mats)
        ct = sum(m.c for m in mats)
        out = Mat.zeros(f, rt, ct)
        ro = co = 0
        for m in mats:
            for i in range(m.r):
                out.rows[ro + i][co: co + m.c] = m.rows[i]
            ro += m.r
            co += m.c
        return out

    def submatrix(self, rows, cols) -> "Mat":
        return Mat(self.field, [[self.rows[i][j] for j in cols] for i in rows])


def _scale_packed(f: GF, planes, c: int):
    masks = f.scalar_planes(c)
    out = []
    for idxs in masks:
        acc = 0
        for j in idxs:
            acc ^= planes[j]
        out.append(acc)
    return out


class Span:
    """A row-space with membership tests and coordinates in the original basis."""

    def __init__(self, basis: Mat):
        f = basis.field
        self.field = f
        self.basis = basis
        aug = Mat.hstack([basis, Mat.identity(f, basis.r)]) if basis.r else basis.copy()
        R, piv = aug.rref()
        piv = tuple(p for p in piv if p < basis.c)
        self.dim = len(piv)
        if self.dim != basis.r:
            raise ValueError("Span expects independent rows")
        self._R = Mat(f, [row[: basis.c] for row in R.rows[: self.dim]])
        self._T = Mat(f, [row[basis.c:] for row in R.rows[: self.dim]])
        self._pivots = piv

    def reduce(self, v):
        """Remainder of v after reduction against the span."""
        f = self.field
        add, mul, neg = f.add, f.mul, f.neg
        v = list(v)
        for i, pc in enumerate(self._pivots):
            if v[pc]:
                fac = neg(v[pc])
                row = self._R.rows[i]
                v = [add(x, mul(fac, y)) for x, y in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def coords(self, v):
        """Coefficients c with c @ basis = v, or None if v is outside."""
        f = self.field
        add, mul = f.add, f.mul
        v = list(v)
        cs = [0] * self.dim
        for i, pc in enumerate(self._pivots):
            if v[pc]:
                fac = v[pc]
                cs[i] = fac
                nfac = f.neg(fac)
                row = self._R.rows[i]
                v = [add(x, mul(nfac, y)) for x, y in zip(v, row)]
        if any(x != 0 for x in v):
            return None
        # cs are coordinates in the rref basis; translate through the transform
        out = [0] * self.basis.r
        for i, cval in enumerate(cs):
            if cval:
                trow = self._T.rows[i]
                out = [add(x, mul(cval, y)) for x, y in zip(out, trow)]
        return out


# ---------------------------------------------------------------------------
# polynomials over a GF (little-endian int coefficient lists)
# ---------------------------------------------------------------------------

def poly_trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def poly_is_zero(a):
    return all(x == 0 for x in a)


def poly_add(f: GF, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = f.add(out[i], x)
    return poly_trim(out)


def poly_scale(f: GF, a, c):
    return poly_trim([f.mul(c, x) for x in a])


def poly_mul(f: GF, a, b):
    if poly_is_zero(a) or poly_is_zero(b):
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = f.add(out[i + j], f.mul(x, y))
    return poly_trim(out)


def poly_divmod(f: GF, a, b):
    b = poly_trim(b)
    if poly_is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    a = list(poly_trim(a))
    db, lb = len(b) - 1, b[-1]
    ilb = f.inv(lb)
    quot = [0] * max(1, len(a) - db)
    while len(a) - 1 >= db and not poly_is_zero(a):
        c = f.mul(a[-1], ilb)
        k = len(a) - 1 - db
        quot[k] = c
        for i, y in enumerate(b):
            a[k + i] = f.sub(a[k + i], f.mul(c, y))
        a = poly_trim(a) if a[-1] == 0 else a
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) - 1 < db:
            break
    return poly_trim(quot), poly_trim(a)


def poly_gcd(f: GF, a, b):
    a, b = poly_trim(a), poly_trim(b)
    while not poly_is_zero(b):
        _, r = poly_divmod(f, a, b)
        a, b = b, r
    if not poly_is_zero(a) and a[-1] != 1:
        a = poly_scale(f, a, f.inv(a[-1]))
    return a


def poly_xgcd(f: GF, a, b):
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = poly_trim(a), poly_trim(b)
    u0, u1 = [1], [0]
    v0, v1 = [0], [1]
    while not poly_is_zero(r1):
        q, r = poly_divmod(f, r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, poly_add(f, u0, poly_scale(f, poly_mul(f, q, u1), f.neg(1)))
        v0, v1 = v1, poly_add(f, v0, poly_scale(f, poly_mul(f, q, v1), f.neg(1)))
    if not poly_is_zero(r0) and r0[-1] != 1:
        c = f.inv(r0[-1])
        r0, u0, v0 = poly_scale(f, r0, c), poly_scale(f, u0, c), poly_scale(f, v0, c)
    return r0, u0, v0


def poly_pow_mod(f: GF, a, e, m):
    r = [1]
    a = poly_divmod(f, a, m)[1]
    while e:
        if e & 1:
            r = poly_divmod(f, poly_mul(f, r, a), m)[1]
        a = poly_divmod(f, poly_mul(f, a, a), m)[1]
        e >>= 1
    return r


def poly_irreducible(f: GF, a) -> bool:
    """Irreducibility by trial division over F_q (small degrees only)."""
    a = poly_trim(a)
    n = len(a) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        # enumerate monic polynomials of degree d over f
        for enc in range(f.q ** d):
            div = []
            e = enc
            for _ in range(d):
                div.append(e % f.q)
                e //= f.q
            div.append(1)
            _, r = poly_divmod(f, a, div)
            if poly_is_zero(r):
                return False
    return True


def poly_roots(f: GF, a) -> list[int]:
    return [x for x in f.elements() if poly_eval(f, a, x) == 0]


def poly_eval(f: GF, a, x: int) -> int:
    acc = 0
    for c in reversed(poly_trim(a)):
        acc = f.add(f.mul(acc, x), c)
    return acc


def min_poly_of_matrix(A: Mat) -> list[int]:
    """Minimal polynomial of a square matrix (Krylov on the full algebra)."""
    f = A.field
    d = A.r
    cur = Mat.identity(f, d)
    pows = [cur]
    flat = [sum(cur.rows, [])]
    while True:
        cur = pows[-1] @ A
        pows.append(cur)
        flat.append(sum(cur.rows, []))
        M = Mat(f, flat)
        ns = M.left_nullspace()
        if ns:
            # the relation involves the newest power by minimality
            for v in ns:
                if v[-1] != 0:
                    c = f.inv(v[-1])
                    return poly_trim([f.mul(c, x) for x in v])
        if len(pows) > d + 1:
            raise RuntimeError("minimal polynomial search failed")  # unreachable

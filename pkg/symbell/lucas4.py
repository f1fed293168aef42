"""Closed forms for four inputs per party.

With m = 4 there are two strategy orbits, the constant one and (1, 1, -1, 1).
Folding a party into the convolution state multiplies by R = I + A + A^2 + A^3
or S = I + A - A^2 + A^3, where A is the signed 4-cycle (A^4 = -I). The
local bound of [1, 0] (odd N) or [0, 1] (even N) is then an induced 1-norm
of R^i S^j, and the optimal value is reached with every party playing the
constant strategy.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2)


@dataclass(frozen=True)
class Mat4(object):
    """Exact integer 4x4 matrix."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in row) for row in self.rows)
        if len(rows) != 4 or any(len(row) != 4 for row in rows):
            raise ValueError("Mat4 needs 4x4 entries, got {}".format(self.rows))
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def identity(cls):
        return cls(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))

    def __add__(self, other):
        return Mat4(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other):
        return Mat4(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return Mat4(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, k):
        return Mat4(tuple(tuple(k * a for a in r) for r in self.rows))

    __rmul__ = __mul__

    def __matmul__(self, other):
        cols = list(zip(*other.rows))
        return Mat4(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows))

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative matrix power {}".format(n))
        result, base = Mat4.identity(), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def norm1(self):
        """Induced 1-norm: largest column absolute sum."""
        return max(sum(abs(r[j]) for r in self.rows) for j in range(4))

    def det(self):
        return int(sympy.Matrix(self.rows).det())


@dataclass(frozen=True)
class RootTwoScalar(object):
    """Exact (a + b*sqrt(2)) / 2^k, kept with the smallest k."""

    a: int
    b: int = 0
    k: int = 0

    def __post_init__(self):
        a, b, k = int(self.a), int(self.b), int(self.k)
        while k > 0 and a % 2 == 0 and b % 2 == 0:
            a, b, k = a // 2, b // 2, k - 1
        while k < 0:
            a, b, k = a * 2, b * 2, k + 1
        if a == 0 and b == 0:
            k = 0
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'k', k)

    def _aligned(self, other):
        other = _as_root_two(other)
        k = max(self.k, other.k)
        return (self.a << (k - self.k), self.b << (k - self.k),
                other.a << (k - other.k), other.b << (k - other.k), k)

    def __add__(self, other):
        a, b, c, d, k = self._aligned(other)
        return RootTwoScalar(a + c, b + d, k)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, c, d, k = self._aligned(other)
        return RootTwoScalar(a - c, b - d, k)

    def __rsub__(self, other):
        return _as_root_two(other) - self

    def __neg__(self):
        return RootTwoScalar(-self.a, -self.b, self.k)

    def __mul__(self, other):
        o = _as_root_two(other)
        return RootTwoScalar(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a, self.k + o.k)

    __rmul__ = __mul__

    def __pow__(self, n):
        result, base = RootTwoScalar(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self):
        """The Galois conjugate, sqrt(2) -> -sqrt(2)."""
        return RootTwoScalar(self.a, -self.b, self.k)

    def div_sqrt2(self):
        return RootTwoScalar(2 * self.b, self.a, self.k + 1)

    @property
    def is_integer(self):
        return self.b == 0 and self.k == 0

    def __int__(self):
        if not self.is_integer:
            raise ArithmeticError("{} is not an integer".format(self))
        return self.a

    def __float__(self):
        return (self.a + self.b * SQRT2) / 2 ** self.k

    def as_sympy(self):
        return (sympy.Integer(self.a) + sympy.Integer(self.b) * sympy.sqrt(2)) / sympy.Integer(2) ** self.k

    def __str__(self):
        return str(sympy.radsimp(self.as_sympy()))


def _as_root_two(x):
    return x if isinstance(x, RootTwoScalar) else RootTwoScalar(int(x))


def shift_matrix():
    """A: e_x -> e_{x+1}, with e_3 -> -e_0."""
    rows = [[0] * 4 for _ in range(4)]
    for x in range(3):
        rows[x + 1][x] = 1
    rows[0][3] = -1
    return Mat4(tuple(tuple(r) for r in rows))


def orbit_matrices():
    """(R, S) for the strategies (1, 1, 1, 1) and (1, 1, -1, 1)."""
    A = shift_matrix()
    I = Mat4.identity()
    return I + A + A ** 2 + A ** 3, I + A - A ** 2 + A ** 3


def lij(i, j):
    """||R^i S^j||_1, the value with i constant parties, j parties on the other orbit and one free party."""
    if i < 0 or j < 0:
        raise ValueError("exponents must be nonnegative, got ({}, {})".format(i, j))
    R, S = orbit_matrices()
    return (R ** i @ S ** j).norm1()


def lij_even(i, j):
    """Same as lij for the even-N inequality [0, 1], whose pattern is A - A^3."""
    if i < 0 or j < 0:
        raise ValueError("exponents must be nonnegative, got ({}, {})".format(i, j))
    R, S = orbit_matrices()
    A = shift_matrix()
    return (R ** i @ S ** j @ (A - A ** 3)).norm1()


def alpha(s1, s2):
    """Eigenvalue 1 + s1 (sqrt(2) s2 + 1) i shared by R and S."""
    return complex(1, s1 * (SQRT2 * s2 + 1))


#: (R eigenvalue, S eigenvalue) for the eigenvector of A with eigenvalue exp(i pi (2l + 1) / 4)
EIGENPAIRS = (
    (alpha(1, 1), alpha(-1, -1)),
    (alpha(-1, -1), alpha(1, 1)),
    (alpha(1, -1), alpha(-1, 1)),
    (alpha(-1, 1), alpha(1, -1)),
)


def lij_spectral(i, j):
    """lij from the eigenvalues, in complex floating point."""
    p = [r ** i * s ** j for r, s in EIGENPAIRS]
    total = 0.0
    for k in range(4):
        total += abs(sum(p[l] * (1j) ** (-l * k) for l in range(4)))
    return total / 4


def det_check():
    """(|det R|, |product of R's eigenvalues|), equal up to rounding."""
    R, _ = orbit_matrices()
    product = 1 + 0j
    for r, _ in EIGENPAIRS:
        product *= r
    return abs(R.det()), abs(product)


def closed_form_m4(n_parties):
    """L_N from l_n = (1 + 1/sqrt2)^n - (1 - 1/sqrt2)^n in exact arithmetic."""
    if n_parties < 3:
        raise ValueError("closed form needs N >= 3, got {}".format(n_parties))
    plus, minus = RootTwoScalar(2, 1, 1), RootTwoScalar(2, -1, 1)
    if n_parties % 2:
        n = (n_parties + 1) // 2
        scale = 4 ** (n - 1)
    else:
        n = n_parties // 2
        scale = 4 ** n
    value = ((plus ** n - minus ** n) * scale).div_sqrt2()
    return int(value)


def local_bound_m4(n_parties):
    """Local bound for m = 4 by the parity-preserving recursion L_{N+4} = 8 (L_{N+2} - L_N)."""
    if n_parties < 3:
        raise ValueError("m = 4 bound needs N >= 3, got {}".format(n_parties))
    if n_parties % 2:
        seeds = {3: lij(2, 0), 5: lij(4, 0)}
    else:
        seeds = {4: lij_even(3, 0), 6: lij_even(5, 0)}
    lo = min(seeds)
    values = dict(seeds)
    for n in range(lo + 4, n_parties + 1, 2):
        values[n] = 8 * (values[n - 2] - values[n - 4])
    L = values[n_parties]
    closed = closed_form_m4(n_parties)
    if closed != L:
        raise ArithmeticError("recursion gives {} but closed form gives {} for N={}".format(
            L, closed, n_parties))
    return L


@dataclass(frozen=True)
class M4Visibility(object):
    n_parties: int
    local_bound: int
    quantum_value: str
    exact: RootTwoScalar
    expression: str
    value: float


def visibility_m4(n_parties):
    """v = L / Q with Q = 4^(N-1) for odd N and 4^(N-1) sqrt(2) for even N."""
    L = local_bound_m4(n_parties)
    power = 4 ** (n_parties - 1)
    if n_parties % 2:
        exact = RootTwoScalar(L) * RootTwoScalar(1, 0, 2 * (n_parties - 1))
        Q = str(power)
    else:
        # L / (Q sqrt2) = L sqrt2 / (2 Q)
        exact = RootTwoScalar(0, L, 2 * (n_parties - 1) + 1)
        Q = "{}*sqrt(2)".format(power)
    return M4Visibility(n_parties, L, Q, exact, str(exact), float(exact))


@dataclass(frozen=True)
class AntidiagonalReport(object):
    n_max: int
    table: dict
    violations: tuple

    @property
    def passed(self):
        return not self.violations


def lij_table(size):
    """L_{i,j} for 0 <= i, j < size, from exact matrix powers."""
    R, S = orbit_matrices()
    powers_r = [Mat4.identity()]
    powers_s = [Mat4.identity()]
    for _ in range(size):
        powers_r.append(powers_r[-1] @ R)
        powers_s.append(powers_s[-1] @ S)
    return {(i, j): (powers_r[i] @ powers_s[j]).norm1() for i in range(size) for j in range(size)}


def antidiagonal_check(n_max=40):
    """Check both recursions and that every antidiagonal peaks on its edges."""
    table = lij_table(n_max + 4)
    violations = []
    for i in range(n_max):
        for j in range(n_max - i):
            if table[i + 2, j + 2] != 8 * table[i, j]:
                violations.append("L[{},{}] = {} != 8 L[{},{}]".format(
                    i + 2, j + 2, table[i + 2, j + 2], i, j))
            if table[i, j + 4] != 8 * (table[i, j + 2] - table[i, j]):
                violations.append("L[{},{}] breaks the period-eight recursion".format(i, j + 4))
    for n in range(1, n_max + 1):
        diagonal = [table[i, n - 1 - i] for i in range(n)]
        top = max(diagonal)
        if diagonal[0] != top or diagonal[-1] != top:
            violations.append("antidiagonal N={} peaks at {}, not on its edges".format(
                n, diagonal.index(top)))
    if violations:
        logger.warning("%d violations up to N=%d", len(violations), n_max)
    small = {k: v for k, v in table.items() if k[0] + k[1] < n_max}
    return AntidiagonalReport(n_max, small, tuple(violations))


if __name__ == "__main__":
    import argparse
    parser = argparse.ArgumentParser(description='Local bounds and visibilities for m = 4.')
    parser.add_argument('--parties', type=int, default=9, help="Number of parties N.")
    args = parser.parse_args()
    vis = visibility_m4(args.parties)
    print("L = {}, Q = {}, v = {} = {:.5f}".format(
        vis.local_bound, vis.quantum_value, vis.expression, vis.value))

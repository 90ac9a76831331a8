"""Four-holed sphere relative character variety E_kappa.

Boundary traces kappa = (a, b, c, d) with ABCD = I; coordinates
x = tr(AB), y = tr(BC), z = tr(CA). Defining equation:

    x^2+y^2+z^2+xyz = (ab+cd)x + (ad+bc)y + (ac+bd)z
                      - (a^2+b^2+c^2+d^2+abcd-4).

Fibres x = const are ellipses in (y, z); in the completed-square variables
u = y+z, v = y-z they read

    (2+x)/4 (u - u0)^2 + (2-x)/4 (v - v0)^2 = RHS(x),
    u0 = (a+b)(c+d)/(2+x),  v0 = (a-b)(d-c)/(2-x),
    RHS = (x^2-abx+a^2+b^2-4)(x^2-cdx+c^2+d^2-4)/(4-x^2).

(The printed display's v-offset denominator and the printed center formula
disagree with this by a typo'd denominator and a factor 2 respectively; the
forms above vanish identically on matrix-generated characters.)

The twist tau_X rotates each fibre rigidly by 2*arccos(x/2); matrix-level
conventions are in the twist functions below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .su2 import Quaternion, normalize, quat_conj, quat_inv, quat_mul, trace

#: crude box-metric bound on the circumference of any fibre ellipse in [-2,2]^3
L_MAX = 16.0


@dataclass(frozen=True)
class Kappa4:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for t in (self.a, self.b, self.c, self.d):
            if not -2.0 <= t <= 2.0:
                raise ValueError("boundary traces must lie in [-2, 2]")
        lo1, hi1 = trace_interval(self.a, self.b)
        lo2, hi2 = trace_interval(self.c, self.d)
        if max(lo1, lo2) > min(hi1, hi2) + 1e-12:
            raise ValueError("I_{a,b} and I_{c,d} do not intersect: E_kappa empty")

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


T4Point = tuple[float, float, float]


def trace_interval(a: float, b: float) -> tuple[float, float]:
    """I_{a,b}: the possible values of tr(AB) given tr A = a, tr B = b."""
    s = math.sqrt(max((a * a - 4.0) * (b * b - 4.0), 0.0))
    return ((a * b - s) / 2.0, (a * b + s) / 2.0)


def e_kappa_residual(kappa: Kappa4, p: T4Point) -> float:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    return (x * x + y * y + z * z + x * y * z
            - (a * b + c * d) * x - (a * d + b * c) * y - (a * c + b * d) * z
            + (a * a + b * b + c * c + d * d + a * b * c * d - 4.0))


# ---------------------------------------------------------------------------
# coordinate twist maps (forward direction matches the matrix convention)
# ---------------------------------------------------------------------------

def tau_x4(kappa: Kappa4, p: T4Point) -> T4Point:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    z2 = a * c + b * d - x * y - z
    y2 = a * d + b * c - x * z2 - y
    return (x, y2, z2)


def tau_x4_inv(kappa: Kappa4, p: T4Point) -> T4Point:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    y2 = a * d + b * c - x * z - y
    z2 = a * c + b * d - x * y2 - z
    return (x, y2, z2)


def tau_y4(kappa: Kappa4, p: T4Point) -> T4Point:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    x2 = b * a + c * d - y * z - x
    z2 = b * d + c * a - y * x2 - z
    return (x2, y, z2)


def tau_y4_inv(kappa: Kappa4, p: T4Point) -> T4Point:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    z2 = b * d + c * a - y * x - z
    x2 = b * a + c * d - y * z2 - x
    return (x2, y, z2)


def tau_z4(kappa: Kappa4, p: T4Point) -> T4Point:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    y2 = c * b + a * d - z * x - y
    x2 = c * d + a * b - z * y2 - x
    return (x2, y2, z)


def tau_z4_inv(kappa: Kappa4, p: T4Point) -> T4Point:
    a, b, c, d = kappa.as_tuple()
    x, y, z = p
    x2 = c * d + a * b - z * y - x
    y2 = c * b + a * d - z * x2 - y
    return (x2, y2, z)


# ---------------------------------------------------------------------------
# matrix-level twists; (A, B, C, D) with ABCD = I
# ---------------------------------------------------------------------------

Rep4 = tuple[Quaternion, Quaternion, Quaternion, Quaternion]


def twist_x4_matrices(rep: Rep4) -> Rep4:
    # conjugators are normalized because quat_inv assumes unit norm;
    # otherwise rounding drift compounds geometrically along long walks
    A, B, C, D = rep
    X = normalize(quat_mul(A, B))
    return (A, B, quat_conj(X, C), quat_conj(X, D))


def twist_y4_matrices(rep: Rep4) -> Rep4:
    A, B, C, D = rep
    Y = normalize(quat_mul(B, C))
    return (quat_conj(Y, A), B, C, quat_conj(Y, D))


def twist_z4_matrices(rep: Rep4) -> Rep4:
    A, B, C, D = rep
    Z = normalize(quat_mul(C, A))
    AC = normalize(quat_mul(A, C))
    return (A, quat_conj(Z, B), C, quat_conj(AC, D))


def twist_x4_matrices_inv(rep: Rep4) -> Rep4:
    A, B, C, D = rep
    Xi = quat_inv(normalize(quat_mul(A, B)))
    return (A, B, quat_conj(Xi, C), quat_conj(Xi, D))


def twist_y4_matrices_inv(rep: Rep4) -> Rep4:
    A, B, C, D = rep
    Yi = quat_inv(normalize(quat_mul(B, C)))
    return (quat_conj(Yi, A), B, C, quat_conj(Yi, D))


def twist_z4_matrices_inv(rep: Rep4) -> Rep4:
    A, B, C, D = rep
    Zi = quat_inv(normalize(quat_mul(C, A)))
    ACi = quat_inv(normalize(quat_mul(A, C)))
    return (A, quat_conj(Zi, B), C, quat_conj(ACi, D))


def coords_of_rep4(rep: Rep4) -> T4Point:
    A, B, C, _ = rep
    return (trace(quat_mul(A, B)), trace(quat_mul(B, C)), trace(quat_mul(C, A)))


def kappa_of_rep4(rep: Rep4) -> Kappa4:
    return Kappa4(*(trace(g) for g in rep))


# ---------------------------------------------------------------------------
# level ellipses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelEllipse4:
    """Fibre x = const of E_kappa in the (y, z) plane."""

    kappa: Kappa4
    x: float
    coeff_plus: float     # (2+x)/4, multiplies (u-u0)^2, u = y+z
    coeff_minus: float    # (2-x)/4, multiplies (v-v0)^2, v = y-z
    u0: float
    v0: float
    rhs: float
    center: tuple[float, float]   # (y_c, z_c)
    angle: float                  # 2*arccos(x/2)
    degenerate: bool

    def extents(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """((y_lo, y_hi), (z_lo, z_hi)) box extents of the fibre."""
        if self.degenerate:
            yc, zc = self.center
            return ((yc, yc), (zc, zc))
        ru = math.sqrt(self.rhs / self.coeff_plus)
        rv = math.sqrt(self.rhs / self.coeff_minus)
        half = 0.5 * (ru + rv)
        yc, zc = self.center
        return ((yc - half, yc + half), (zc - half, zc + half))

    def parametrize(self, t: float) -> tuple[float, float]:
        """Point (y, z) at parameter t in [0, 2pi); identity map if degenerate."""
        if self.degenerate:
            return self.center
        u = self.u0 + math.sqrt(self.rhs / self.coeff_plus) * math.cos(t)
        v = self.v0 + math.sqrt(self.rhs / self.coeff_minus) * math.sin(t)
        return ((u + v) / 2.0, (u - v) / 2.0)


def x_level_ellipse(kappa: Kappa4, x: float) -> LevelEllipse4:
    if abs(4.0 - x * x) < 1e-14:
        raise ValueError("singular parameter: x = +-2")
    a, b, c, d = kappa.as_tuple()
    u0 = (a + b) * (c + d) / (2.0 + x)
    v0 = (a - b) * (d - c) / (2.0 - x)
    rhs = ((x * x - a * b * x + a * a + b * b - 4.0)
           * (x * x - c * d * x + c * c + d * d - 4.0) / (4.0 - x * x))
    yc = (2.0 * (a * d + b * c) - x * (a * c + b * d)) / (4.0 - x * x)
    zc = (2.0 * (a * c + b * d) - x * (a * d + b * c)) / (4.0 - x * x)
    return LevelEllipse4(
        kappa=kappa, x=x,
        coeff_plus=(2.0 + x) / 4.0, coeff_minus=(2.0 - x) / 4.0,
        u0=u0, v0=v0, rhs=max(rhs, 0.0) if rhs > -1e-12 else rhs,
        center=(yc, zc), angle=2.0 * math.acos(max(-1.0, min(1.0, x / 2.0))),
        degenerate=rhs <= 1e-15,
    )


def y_level_extent_x(kappa: Kappa4, y: float) -> tuple[float, float]:
    """Box extent of the x-coordinate over the fibre y = const.

    By symmetry of the defining equation under (a,b,c,d;x,y,z) ->
    (b,c,a,d;y,z,x), the fibre Y_kappa(y) is the x-ellipse of the cycled
    kappa; its x-extent follows from the same completed square.
    """
    a, b, c, d = kappa.as_tuple()
    cycled = Kappa4(b, c, a, d)
    e = x_level_ellipse(cycled, y)
    # in the cycled chart, coordinates are (y, z, x); the extent of the second
    # slot pair covers (z, x); x is slot "z" there -> second extent
    return e.extents()[1]


# ---------------------------------------------------------------------------
# rotation filtration and quantitative lemmas
# ---------------------------------------------------------------------------

def filtration_member(t: float, n: int, tol: float = 1e-12) -> bool:
    """t in Y_n: the twist rotation by 2*arccos(t/2) is periodic with period
    <= n, i.e. t = 2 cos(pi k/m) for some gcd(k,m)=1, 2 <= m <= n."""
    if n < 2:
        raise ValueError("n >= 2 required")
    for m in range(2, n + 1):
        for k in range(1, m):
            if math.gcd(k, m) != 1:
                continue
            if abs(t - 2.0 * math.cos(math.pi * k / m)) <= tol:
                return True
    return False


def n_of_eps(eps: float) -> int:
    """N(eps): rotations with angle not 2*pi*k/m (m <= N) are eps-dense on
    every fibre ellipse. Sufficient bound from the L_MAX circumference."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return math.ceil(2.0 * L_MAX / eps) + 1


@lru_cache(maxsize=None)
def delta_inband(a: float, b: float, eps: float, *, delta_min: float = 1e-6) -> float:
    """A delta > 0 such that for all |c|,|d|,|y| <= delta the fibre structure
    of E_{(a,b,c,d)} is controlled:

    - every fibre y = const with |y| <= delta realizes x-values eps-dense in
      the full x-range of E_kappa (checked via the x-extent of Y_kappa(y)),
    - every fibre x = const either realizes all (y, z) in [-delta/2, delta/2]
      or stays inside [-delta, delta].

    Found by halving from eps and verifying on a grid of pitch delta/8; the
    sampled predicate is the artifact's stand-in for the purely existential
    continuity argument of the source.
    """
    delta = min(eps, 0.5)
    while delta >= delta_min:
        if _inband_predicate(a, b, delta, eps):
            return delta
        delta /= 2.0
    raise ArithmeticError("delta_inband: no verified delta above delta_min")


def _inband_predicate(a: float, b: float, delta: float, eps: float) -> bool:
    pitch = delta / 8.0
    grid = [-delta + i * pitch for i in range(int(2 * delta / pitch) + 1)]
    lo_ab, hi_ab = trace_interval(a, b)
    for c in grid:
        for d in grid:
            try:
                kappa = Kappa4(a, b, c, d)
            except ValueError:
                return False
            lo_cd, hi_cd = trace_interval(c, d)
            xlo, xhi = max(lo_ab, lo_cd), min(hi_ab, hi_cd)
            if xlo > xhi:
                return False
            for y in grid:
                # x-range realized over the fibre y = const
                try:
                    ex = y_level_extent_x(kappa, y)
                except ValueError:
                    return False
                if ex[0] > xlo + eps or ex[1] < xhi - eps:
                    return False
            # fibre x = const: all-of-[-delta/2,delta/2] or inside [-delta,delta]
            nx = max(3, int((xhi - xlo) / max(pitch, 1e-9)) + 1)
            for i in range(nx):
                x = xlo + (xhi - xlo) * i / (nx - 1)
                if abs(x) >= 2.0 - 1e-9:
                    continue
                e = x_level_ellipse(kappa, x)
                (ylo, yhi), (zlo, zhi) = e.extents()
                # the dichotomy only matters for fibres meeting the band
                # [-delta, delta]^2; pinch fibres at the ends of the
                # x-interval sit far from the origin and never arise as
                # small-coordinate candidates
                meets_band = ylo <= delta and yhi >= -delta \
                    and zlo <= delta and zhi >= -delta
                if not meets_band:
                    continue
                covers = ylo <= -delta / 2 and yhi >= delta / 2 and zlo <= -delta / 2 and zhi >= delta / 2
                inside = ylo >= -delta and yhi <= delta and zlo >= -delta and zhi <= delta
                if not (covers or inside):
                    return False
    return True

"""One-holed torus character variety.

Coordinates (x, y, z) = (tr X, tr Y, tr XY); boundary invariant
k = tr(XYX^-1Y^-1) = x^2 + y^2 + z^2 - xyz - 2.

Twist coordinate maps: tau_X(x,y,z) = (x, z, xz-y), tau_Y(x,y,z) = (z, y, yz-x).
Matrix-level convention (pins the coordinate maps in the forward direction):
tau_X: (X, Y) -> (X, YX); tau_Y: (X, Y) -> (XY, Y).

On a nondegenerate fibre x = const of E_k, tau_X acts as a rigid rotation by
arccos(x/2) in the coordinates (u, v) = (sqrt((2-x)/R)(y+z), sqrt((2+x)/R)(y-z))
with R = 2 + k - x^2: the fibre equation y^2 + z^2 - xyz = R diagonalizes as
(2-x)/4 (y+z)^2 + (2+x)/4 (y-z)^2 = R.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import su2
from .su2 import Quaternion, quat_mul, trace
from .tolerances import DEFAULT, RENORM_EVERY

T1Point = tuple[float, float, float]

#: special boundary-trace values 𝒮 = {0, 1, (1±√5)/2} where the genericity
#: shortcut does not apply
SPECIAL_SET = (0.0, 1.0, (1.0 + math.sqrt(5.0)) / 2.0, (1.0 - math.sqrt(5.0)) / 2.0)


def k_of(p: T1Point) -> float:
    x, y, z = p
    return x * x + y * y + z * z - x * y * z - 2.0


def tau_x(p: T1Point) -> T1Point:
    x, y, z = p
    return (x, z, x * z - y)


def tau_x_inv(p: T1Point) -> T1Point:
    x, y, z = p
    return (x, x * y - z, y)


def tau_y(p: T1Point) -> T1Point:
    x, y, z = p
    return (z, y, y * z - x)


def tau_y_inv(p: T1Point) -> T1Point:
    x, y, z = p
    return (x * y - z, y, x)


def twist_x_matrices(X: Quaternion, Y: Quaternion) -> tuple[Quaternion, Quaternion]:
    """Matrix-level tau_X: (X, Y) -> (X, YX)."""
    return X, quat_mul(Y, X)


def twist_y_matrices(X: Quaternion, Y: Quaternion) -> tuple[Quaternion, Quaternion]:
    """Matrix-level tau_Y: (X, Y) -> (XY, Y)."""
    return quat_mul(X, Y), Y


def coords_of_matrices(X: Quaternion, Y: Quaternion) -> T1Point:
    return (trace(X), trace(Y), trace(quat_mul(X, Y)))


def in_special_set(k: float, tol: float = DEFAULT.identity) -> bool:
    return any(abs(k - s) <= tol for s in SPECIAL_SET)


@dataclass(frozen=True)
class LevelEllipse:
    """Fibre x = const of E_k in the (y, z) plane.

    coeff_plus (y+z)^2 + coeff_minus (y-z)^2 = radius_sq, center (0,0);
    the twist tau_X rotates it rigidly by `angle`.
    """

    fixed_name: str
    fixed_value: float
    coeff_plus: float   # (2-x)/4, multiplies (y+z)^2
    coeff_minus: float  # (2+x)/4, multiplies (y-z)^2
    radius_sq: float    # 2 + k - x^2
    center: tuple[float, float]
    angle: float        # arccos(x/2)
    degenerate: bool

    def extent_y(self) -> float:
        """Half-extent of y over the ellipse (box-metric bound)."""
        if self.degenerate:
            return 0.0
        # y = (u+v)/2 with u,v on the axis-aligned ellipse; maximize
        return 0.5 * math.sqrt(self.radius_sq / self.coeff_plus) \
            + 0.5 * math.sqrt(self.radius_sq / self.coeff_minus) if self.radius_sq > 0 else 0.0


def level_ellipse_x(k: float, x: float) -> LevelEllipse:
    if not -2.0 < x < 2.0:
        raise ValueError("x must lie in (-2, 2)")
    r2 = 2.0 + k - x * x
    return LevelEllipse(
        fixed_name="x",
        fixed_value=x,
        coeff_plus=(2.0 - x) / 4.0,
        coeff_minus=(2.0 + x) / 4.0,
        radius_sq=r2,
        center=(0.0, 0.0),
        angle=math.acos(x / 2.0),
        degenerate=r2 <= 0.0,
    )


def pin2_locus_points(k: float) -> list[T1Point]:
    """The six coordinate-axis points of E_k fixed by the Pin(2) analysis."""
    if not -2.0 < k < 2.0:
        raise ValueError("k must lie in (-2, 2)")
    c = math.sqrt(k + 2.0)
    return [
        (c, 0.0, 0.0), (-c, 0.0, 0.0),
        (0.0, c, 0.0), (0.0, -c, 0.0),
        (0.0, 0.0, c), (0.0, 0.0, -c),
    ]


# ---------------------------------------------------------------------------
# steering
# ---------------------------------------------------------------------------

# twist word letters: name and the coordinate/matrix actions
_COORD_MOVES = {
    "X": tau_x, "X'": tau_x_inv, "Y": tau_y, "Y'": tau_y_inv,
}


def apply_twist_word_coords(p: T1Point, word: list[str]) -> T1Point:
    for w in word:
        p = _COORD_MOVES[w](p)
    return p


def apply_twist_word_matrices(X: Quaternion, Y: Quaternion, word: list[str]):
    count = 0
    for w in word:
        if w == "X":
            X, Y = X, quat_mul(Y, X)
        elif w == "X'":
            X, Y = X, quat_mul(Y, su2.quat_inv(X))
        elif w == "Y":
            X, Y = quat_mul(X, Y), Y
        elif w == "Y'":
            X, Y = quat_mul(X, su2.quat_inv(Y)), Y
        else:
            raise ValueError(f"unknown twist letter {w}")
        count += 1
        if count % RENORM_EVERY == 0:
            X, Y = su2.normalize(X), su2.normalize(Y)
    return su2.normalize(X), su2.normalize(Y)


class SteerFailure(Exception):
    """Raised when a steering search exhausts its budget."""

    def __init__(self, msg: str, budget: int):
        super().__init__(msg)
        self.budget = budget


def _cycle_best(p: T1Point, move: str, objective, max_steps: int):
    """Walk one rotation cycle of `move`, return (best word, best point).

    `objective(p)` is minimized. The cycle length is bounded by max_steps;
    greedy best-of-cycle, deterministic.
    """
    best_val = objective(p)
    best_n, best_p = 0, p
    q = p
    for n in range(1, max_steps + 1):
        q = _COORD_MOVES[move](q)
        v = objective(q)
        if v < best_val - 1e-15:
            best_val, best_n, best_p = v, n, q
    return [move] * best_n, best_p


def steer_t1(p: T1Point, target: tuple[float, float], eps: float, budget: int,
             *, cycle_cap: int = 600) -> tuple[list[str], T1Point]:
    """Greedy alternating rotation search on E_k.

    Uses tau_Y cycles (the handle rotation moving x) and tau_X cycles (moving
    y) to bring |x - x0| < eps and |y - y0| < eps, preserving k by
    construction. Returns (twist word, final point); raises SteerFailure if
    the budget of twist applications is exhausted first.

    Either target component may be None to steer that coordinate freely.
    """
    x0, y0 = target

    def obj(q: T1Point) -> float:
        dx = abs(q[0] - x0) if x0 is not None else 0.0
        dy = abs(q[1] - y0) if y0 is not None else 0.0
        return max(dx, dy)

    word: list[str] = []
    spent = 0
    cur = p
    if obj(cur) < eps:
        return word, cur
    stall = 0
    moves = ("Y", "X", "Y'", "X'")
    mi = 0
    while spent < budget:
        steps = min(cycle_cap, budget - spent)
        w, nxt = _cycle_best(cur, moves[mi % len(moves)], obj, steps)
        spent += steps
        if obj(nxt) < obj(cur) - 1e-12:
            word += w
            cur = nxt
            stall = 0
        else:
            stall += 1
        if obj(cur) < eps:
            return word, cur
        mi += 1
        if stall >= len(moves):
            # kick: one deterministic step to change both fibres
            cur = tau_x(tau_y(cur))
            word += ["Y", "X"]
            spent += 2
            stall = 0
    raise SteerFailure("steer_t1 budget exhausted", budget)

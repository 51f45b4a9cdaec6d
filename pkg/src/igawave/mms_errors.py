"""Manufactured solutions, projections, and discretization-error norms.

The exact solution is e^t sin(3 pi x) in 1D (both diffusion coefficients)
and e^t sin(3 pi x) sin(3 pi y) in 2D with unit coefficient.  Both have
separable forcing f(x, t) = e^t * f_space(x), so load vectors are assembled
once and scaled per step inside time loops.
"""

from dataclasses import dataclass, field

import numpy as np

from .assembly_1d import assemble_load, assemble_mass, kappa_variant
from .quadrature import map_to_element
from .spline_basis import eval_basis_many, greville_points

__all__ = [
    "ManufacturedCase1D",
    "ManufacturedCase2D",
    "case_1d",
    "case_2d",
    "initial_coefficients",
    "l2_error",
    "h1_seminorm_error",
    "l2_error_2d",
    "h1_seminorm_error_2d",
    "observed_rates",
]

W = 3.0 * np.pi


@dataclass(frozen=True)
class ManufacturedCase1D:
    """Closed-form u, its derivatives, coefficient, and separable forcing."""

    kappa: object
    u: object = field(repr=False)
    u_t: object = field(repr=False)
    u_x: object = field(repr=False)
    f_space: object = field(repr=False)

    @staticmethod
    def f_time(t):
        return np.exp(t)

    def f(self, x, t):
        return np.exp(t) * self.f_space(x)


@dataclass(frozen=True)
class ManufacturedCase2D:
    """Tensor-product manufactured solution with unit coefficient.

    The forcing is f_const * e^t * profile(x) * profile(y), so its load
    vector is an outer product of two 1D sine loads.
    """

    kappa: object
    f_const: float

    @staticmethod
    def profile(x):
        return np.sin(W * x)

    @staticmethod
    def profile_dx(x):
        return W * np.cos(W * x)

    def u(self, x, y, t):
        return np.exp(t) * np.sin(W * x) * np.sin(W * y)

    def u_t(self, x, y, t):
        return self.u(x, y, t)

    def u_x(self, x, y, t):
        return np.exp(t) * W * np.cos(W * x) * np.sin(W * y)

    def u_y(self, x, y, t):
        return np.exp(t) * W * np.sin(W * x) * np.cos(W * y)

    def f(self, x, y, t):
        return self.f_const * np.exp(t) * np.sin(W * x) * np.sin(W * y)

    @staticmethod
    def f_time(t):
        return np.exp(t)


def case_1d(kappa="one"):
    """Manufactured 1D case for coefficient 'one' or 'exp'."""
    coeff = kappa_variant(kappa) if isinstance(kappa, str) else kappa

    def u(x, t):
        return np.exp(t) * np.sin(W * x)

    def u_x(x, t):
        return np.exp(t) * W * np.cos(W * x)

    if coeff.name == "one":

        def f_space(x):
            return (1.0 + W**2) * np.sin(W * x)

    elif coeff.name == "exp":
        # f = u_tt - (kappa u')' with kappa' = (1 - 2x) kappa.
        def f_space(x):
            k = coeff(x)
            return np.sin(W * x) * (1.0 + W**2 * k) - W * (1.0 - 2.0 * x) * k * np.cos(W * x)

    else:
        raise ValueError(f"no manufactured forcing for coefficient {coeff.name!r}")
    return ManufacturedCase1D(kappa=coeff, u=u, u_t=u, u_x=u_x, f_space=f_space)


def case_2d():
    return ManufacturedCase2D(kappa=kappa_variant("one"), f_const=1.0 + 2.0 * W**2)


def initial_coefficients(kv, rule, fn, method="project"):
    """Interior coefficients approximating fn on the spline space.

    'project' solves the plain-mass L2-projection; 'greville' interpolates
    at the interior Greville abscissae.  fn must vanish at the boundary.
    """
    if method == "project":
        M = assemble_mass(kv, rule)
        return M.factor()(assemble_load(kv, rule, fn))
    if method == "greville":
        pts = greville_points(kv)[1:-1]
        n = kv.interior_dim
        A = np.zeros((n, n))
        for i, x in enumerate(pts):
            first, ders = eval_basis_many(kv, [x], 0)
            lo = first[0]
            for a in range(kv.p + 1):
                j = lo + a - 1  # shift into interior numbering
                if 0 <= j < n:
                    A[i, j] = ders[0, 0, a]
        return np.linalg.solve(A, fn(pts))
    raise ValueError(f"unknown initialization {method!r}")


def _error_1d(kv, coeffs, exact, rule, deriv):
    full = np.zeros(kv.dim)
    full[1:-1] = coeffs
    bp = kv.breakpoints
    total = 0.0
    for e in range(kv.nelems):
        x, w = map_to_element(rule, bp[e], bp[e + 1])
        firsts, vals = eval_basis_many(kv, x, deriv)
        lo = firsts[0]
        uh = vals[:, deriv, :] @ full[lo : lo + kv.p + 1]
        total += float(w @ (uh - exact(x)) ** 2)
    return np.sqrt(total)


def l2_error(kv, coeffs, exact, rule):
    """L2 distance between the spline with given interior coefficients and exact(x)."""
    return _error_1d(kv, coeffs, exact, rule, 0)


def h1_seminorm_error(kv, coeffs, exact_dx, rule):
    """H1-seminorm distance; exact_dx is the derivative of the target."""
    return _error_1d(kv, coeffs, exact_dx, rule, 1)


def _axis_tables(kv, rule, max_deriv):
    bp = kv.breakpoints
    xs, ws, vals, los = [], [], [], []
    for e in range(kv.nelems):
        x, w = map_to_element(rule, bp[e], bp[e + 1])
        firsts, v = eval_basis_many(kv, x, max_deriv)
        xs.append(x)
        ws.append(w)
        vals.append(v)
        los.append(firsts[0])
    return xs, ws, vals, los


def _error_2d(kvx, kvy, coeffs, exact, rule, dx, dy):
    nx, ny = kvx.interior_dim, kvy.interior_dim
    C = np.zeros((kvx.dim, kvy.dim))
    C[1:-1, 1:-1] = np.asarray(coeffs).reshape(nx, ny)
    tx = _axis_tables(kvx, rule, dx)
    ty = _axis_tables(kvy, rule, dy)
    px, py = kvx.p, kvy.p
    total = 0.0
    for ex in range(kvx.nelems):
        x, wx, vx, lox = tx[0][ex], tx[1][ex], tx[2][ex], tx[3][ex]
        for ey in range(kvy.nelems):
            y, wy, vy, loy = ty[0][ey], ty[1][ey], ty[2][ey], ty[3][ey]
            block = C[lox : lox + px + 1, loy : loy + py + 1]
            uh = np.einsum("qa,rb,ab->qr", vx[:, dx, :], vy[:, dy, :], block)
            diff = uh - exact(x[:, None], y[None, :])
            total += float(np.einsum("q,r,qr->", wx, wy, diff**2))
    return total


def l2_error_2d(kvx, kvy, coeffs, exact, rule):
    """L2 error of a tensor-product spline against exact(x, y)."""
    return np.sqrt(_error_2d(kvx, kvy, coeffs, exact, rule, 0, 0))


def h1_seminorm_error_2d(kvx, kvy, coeffs, exact_dx, exact_dy, rule):
    """H1-seminorm error; needs both partial derivatives of the target."""
    ex = _error_2d(kvx, kvy, coeffs, exact_dx, rule, 1, 0)
    ey = _error_2d(kvx, kvy, coeffs, exact_dy, rule, 0, 1)
    return np.sqrt(ex + ey)


def observed_rates(errors, hs):
    """Pairwise convergence rates log(e_i/e_{i+1}) / log(h_i/h_{i+1})."""
    errors = np.asarray(errors, dtype=float)
    hs = np.asarray(hs, dtype=float)
    if errors.shape != hs.shape or errors.size < 2:
        raise ValueError("need matching sequences of length >= 2")
    if np.any(errors <= 0.0):
        raise ValueError("rates undefined for non-positive errors")
    return np.log(errors[:-1] / errors[1:]) / np.log(hs[:-1] / hs[1:])

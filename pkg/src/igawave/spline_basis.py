"""Open-uniform B-spline bases of maximal smoothness on [0, 1].

The knot vectors built here have (p+1)-fold end knots and simple interior
knots, so the basis spans piecewise polynomials of degree p with C^{p-1}
continuity across the N uniform elements.  Basis dimension is N + p; the
first and last basis functions are the only ones supported on the boundary,
which makes homogeneous Dirichlet elimination a matter of dropping global
indices 0 and N + p - 1.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "KnotVector",
    "open_uniform_knots",
    "find_span",
    "eval_basis",
    "eval_basis_many",
    "greville_points",
    "boundary_derivative_vectors",
]


@dataclass(frozen=True)
class KnotVector:
    """Degree, element count and the knot sequence itself."""

    p: int
    nelems: int
    knots: np.ndarray = field(repr=False)

    @property
    def dim(self):
        """Number of basis functions, N + p."""
        return self.nelems + self.p

    @property
    def interior_dim(self):
        """Dimension after removing the two boundary functions."""
        return self.nelems + self.p - 2

    @property
    def h(self):
        return 1.0 / self.nelems

    @property
    def breakpoints(self):
        return np.linspace(0.0, 1.0, self.nelems + 1)


def open_uniform_knots(p, N):
    """Build the open-uniform knot vector for degree p and N elements.

    Parameters
    ----------
    p : int
        Polynomial degree, at least 1.
    N : int
        Number of uniform elements, at least 2.

    Returns
    -------
    KnotVector
        Knot sequence of length N + 2p + 1 with (p+1)-fold end knots.
    """
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    if N < 2:
        raise ValueError(f"element count must be >= 2, got {N}")
    interior = np.linspace(0.0, 1.0, N + 1)[1:-1]
    knots = np.concatenate([np.zeros(p + 1), interior, np.ones(p + 1)])
    return KnotVector(p=p, nelems=N, knots=knots)


def find_span(kv, x):
    """Index s with knots[s] <= x < knots[s+1], one-sided from the right.

    At x = 1 the last non-empty span is returned, so derivative values
    there come from the final element.
    """
    if x < 0.0 or x > 1.0:
        raise ValueError(f"point {x} outside [0, 1]")
    p, N = kv.p, kv.nelems
    if x >= 1.0:
        return N + p - 1
    # Uniform interior knots let us index directly instead of bisecting.
    e = int(x * N)
    if kv.knots[p + e + 1] <= x:  # guard against float truncation at breakpoints
        e += 1
    elif kv.knots[p + e] > x:
        e -= 1
    return p + e


def _all_basis_derivatives(knots, span, x, p, n):
    # Triangular table of the Cox-de Boor recursion, then the derivative
    # sweep in terms of the inverse knot differences.
    ndu = np.empty((p + 1, p + 1))
    ndu[0, 0] = 1.0
    left = np.empty(p + 1)
    right = np.empty(p + 1)
    for j in range(1, p + 1):
        left[j] = x - knots[span + 1 - j]
        right[j] = knots[span + j] - x
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved

    ders = np.zeros((n + 1, p + 1))
    ders[0, :] = ndu[:, p]
    a = np.empty((2, p + 1))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, n + 1):
            d = 0.0
            rk = r - k
            pk = p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1

    fac = float(p)
    for k in range(1, n + 1):
        ders[k, :] *= fac
        fac *= p - k
    return ders


def eval_basis(kv, x, max_deriv=0):
    """Evaluate the p+1 active basis functions and derivatives at x.

    Parameters
    ----------
    kv : KnotVector
    x : float
        Point in [0, 1].  At interior knots the values are one-sided from
        the right; at x = 1 from the left.
    max_deriv : int
        Highest derivative order, 0 <= max_deriv <= p.

    Returns
    -------
    first : int
        Global index of the first active basis function.
    ders : ndarray, shape (max_deriv + 1, p + 1)
        ders[k, a] is the k-th derivative of basis function first + a.
    """
    p = kv.p
    if not 0 <= max_deriv <= p:
        raise ValueError(f"derivative order {max_deriv} outside 0..{p}")
    span = find_span(kv, x)
    ders = _all_basis_derivatives(kv.knots, span, x, p, max_deriv)
    return span - p, ders


def eval_basis_many(kv, xs, max_deriv=0):
    """Vector variant of eval_basis over a 1D array of points.

    Returns (firsts, ders) with shapes (len(xs),) and
    (len(xs), max_deriv + 1, p + 1).
    """
    xs = np.asarray(xs, dtype=float)
    firsts = np.empty(xs.shape[0], dtype=int)
    out = np.empty((xs.shape[0], max_deriv + 1, kv.p + 1))
    for i, x in enumerate(xs):
        firsts[i], out[i] = eval_basis(kv, x, max_deriv)
    return firsts, out


def greville_points(kv):
    """Knot averages; one collocation abscissa per basis function."""
    p, dim = kv.p, kv.dim
    t = kv.knots
    return np.array([t[i + 1 : i + p + 1].mean() for i in range(dim)])


def boundary_derivative_vectors(kv, order):
    """Values of the full basis's `order`-th derivative at x = 0 and x = 1.

    Only the first and last p+1 basis functions contribute.  Used by the
    endpoint penalty terms.
    """
    dim = kv.dim
    d0 = np.zeros(dim)
    d1 = np.zeros(dim)
    first, ders = eval_basis(kv, 0.0, order)
    d0[first : first + kv.p + 1] = ders[order]
    first, ders = eval_basis(kv, 1.0, order)
    d1[first : first + kv.p + 1] = ders[order]
    return d0, d1

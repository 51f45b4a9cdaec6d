"""Galerkin assembly of 1D mass, stiffness, load and penalty objects.

All matrices live on the interior degrees of freedom by default: the two
basis functions supported on the boundary are removed, which is exactly the
homogeneous Dirichlet condition for open knot vectors.  Storage is banded
symmetric (upper form, bandwidth p) with a cached dense view that the small
dense eigensolves and matvecs use.

The outlier-removal penalties come in two flavours:

* ``endpoint``: rank-two matrices built from the 2l-th basis derivatives at
  x = 0 and x = 1, scaled by h^(4l+1) in the mass and pi^2 h^(4l-1) in the
  stiffness.  This is the default; it pins the spurious top eigenvalues to
  about pi^2/h^2 uniformly in N.
* ``integral``: whole-domain products of 2l-th derivatives scaled by
  h^(6l-1) and pi^2 h^(6l-3).  Kept selectable for comparison; its top
  eigenvalue overshoots pi^2/h^2 by a margin that grows with N.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .quadrature import map_to_element
from .spline_basis import boundary_derivative_vectors, eval_basis_many

__all__ = [
    "Coefficient",
    "kappa_variant",
    "BandedSymMatrix",
    "alpha_of",
    "assemble_mass",
    "assemble_stiffness",
    "assemble_load",
    "assemble_penalty",
    "PenaltySet",
    "build_penalties",
    "penalized_forms",
]

PENALTY_VARIANTS = ("endpoint", "integral")


@dataclass(frozen=True)
class Coefficient:
    """Scalar diffusion field with positive bounds.

    ``smooth_polynomial`` marks coefficients for which the p+1-point rule is
    already exact (constants); anything else is assembled with p+3 points.
    """

    name: str
    fn: object
    lower: float
    upper: float
    smooth_polynomial: bool = False

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))

    def __post_init__(self):
        if not 0.0 < self.lower <= self.upper:
            raise ValueError("coefficient bounds must satisfy 0 < lower <= upper")


def kappa_variant(name):
    """Coefficient registry for the CLI names 'one' and 'exp'."""
    if name == "one":
        return Coefficient("one", lambda x: np.ones_like(x), 1.0, 1.0, smooth_polynomial=True)
    if name == "exp":
        # e^{x - x^2} on [0,1]: minimum 1 at the ends, maximum e^{1/4}.
        return Coefficient("exp", lambda x: np.exp(x - x * x), 1.0, float(np.exp(0.25)))
    raise ValueError(f"unknown coefficient variant {name!r}")


class BandedSymMatrix:
    """Symmetric banded matrix in scipy's upper banded layout.

    ab[u + i - j, j] holds entry (i, j) for j >= i with u = bandwidth.
    """

    def __init__(self, ab):
        self.ab = np.asarray(ab, dtype=float)
        self.bandwidth = self.ab.shape[0] - 1
        self.n = self.ab.shape[1]
        self._dense = None

    @classmethod
    def from_dense(cls, a, bandwidth):
        a = np.asarray(a, dtype=float)
        n = a.shape[0]
        u = bandwidth
        ab = np.zeros((u + 1, n))
        for j in range(n):
            i0 = max(0, j - u)
            ab[u + i0 - j : u + 1, j] = a[i0 : j + 1, j]
        return cls(ab)

    def to_dense(self):
        if self._dense is None:
            u, n = self.bandwidth, self.n
            a = np.zeros((n, n))
            for j in range(n):
                i0 = max(0, j - u)
                a[i0 : j + 1, j] = self.ab[u + i0 - j : u + 1, j]
            a += np.triu(a, 1).T
            a.setflags(write=False)
            self._dense = a
        return self._dense

    def matvec(self, x):
        return self.to_dense() @ x

    def add_scaled(self, other, coeff):
        """self + coeff * other, aligned on the larger bandwidth."""
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        u = max(self.bandwidth, other.bandwidth)
        ab = np.zeros((u + 1, self.n))
        ab[u - self.bandwidth :, :] = self.ab
        ab[u - other.bandwidth :, :] += coeff * other.ab
        return BandedSymMatrix(ab)

    def factor(self):
        """Banded Cholesky handle; solve() accepts one vector or a matrix of columns."""
        cb = cholesky_banded(self.ab, lower=False)

        def solve(b):
            return cho_solve_banded((cb, False), b)

        return solve


def alpha_of(p):
    """Number of penalty levels, floor((p-1)/2); zero through degree 2."""
    if p < 1:
        raise ValueError(f"degree must be >= 1, got {p}")
    return (p - 1) // 2


def _assemble_product(kv, rule, deriv, coeff=None, interior=True):
    # Generic  integral of c(x) B_k^(d) B_l^(d)  over all elements.
    p, N = kv.p, kv.nelems
    dim = kv.dim
    bp = kv.breakpoints
    full = np.zeros((dim, dim))
    for e in range(N):
        x, w = map_to_element(rule, bp[e], bp[e + 1])
        firsts, vals = eval_basis_many(kv, x, deriv)
        first = firsts[0]
        v = vals[:, deriv, :]
        wq = w if coeff is None else w * coeff(x)
        local = np.einsum("q,qa,qb->ab", wq, v, v)
        full[first : first + p + 1, first : first + p + 1] += local
    if interior:
        full = full[1:-1, 1:-1]
    return BandedSymMatrix.from_dense(full, p)


def assemble_mass(kv, rule, interior=True):
    """Mass matrix, entries ∫ B_k B_l, SPD."""
    return _assemble_product(kv, rule, 0, None, interior)


def assemble_stiffness(kv, rule, coeff, interior=True):
    """Stiffness matrix, entries ∫ κ B_k' B_l', SPD on interior DOFs."""
    return _assemble_product(kv, rule, 1, coeff, interior)


def assemble_load(kv, rule, f, interior=True):
    """Load vector F_k = ∫ f(x) B_k(x) dx for a callable f of x."""
    p, N = kv.p, kv.nelems
    bp = kv.breakpoints
    full = np.zeros(kv.dim)
    for e in range(N):
        x, w = map_to_element(rule, bp[e], bp[e + 1])
        firsts, vals = eval_basis_many(kv, x, 0)
        first = firsts[0]
        full[first : first + p + 1] += (w * f(x)) @ vals[:, 0, :]
    return full[1:-1] if interior else full


def assemble_penalty(kv, ell, variant="endpoint", rule=None, interior=True):
    """Penalty matrix for level ell (derivative order 2*ell).

    The endpoint variant is d0 d0^T + d1 d1^T with d0, d1 the 2l-th basis
    derivative values at the two boundary points; bandwidth stays p because
    the two outer products touch disjoint corner blocks.  The integral
    variant is the whole-domain product of 2l-th derivatives.
    """
    if not 1 <= ell <= alpha_of(kv.p):
        raise ValueError(f"penalty level {ell} outside 1..{alpha_of(kv.p)}")
    if variant == "endpoint":
        d0, d1 = boundary_derivative_vectors(kv, 2 * ell)
        if interior:
            d0, d1 = d0[1:-1], d1[1:-1]
        dense = np.outer(d0, d0) + np.outer(d1, d1)
        return BandedSymMatrix.from_dense(dense, kv.p)
    if variant == "integral":
        if rule is None:
            raise ValueError("integral penalty needs a quadrature rule")
        return _assemble_product(kv, rule, 2 * ell, None, interior)
    raise ValueError(f"unknown penalty variant {variant!r}")


@dataclass(frozen=True)
class PenaltySet:
    """Penalty matrices for levels 1..alpha plus their weights."""

    variant: str
    matrices: tuple
    eta_a: tuple
    eta_b: tuple

    @property
    def levels(self):
        return range(1, len(self.matrices) + 1)


def _eta_tuple(eta, nlevels):
    if np.isscalar(eta):
        return (float(eta),) * nlevels
    eta = tuple(float(v) for v in eta)
    if len(eta) != nlevels:
        raise ValueError(f"expected {nlevels} penalty weights, got {len(eta)}")
    return eta


def build_penalties(kv, variant="endpoint", rule=None, eta_a=1.0, eta_b=1.0):
    """Assemble all penalty levels for the knot vector; empty when p <= 2."""
    if variant not in PENALTY_VARIANTS:
        raise ValueError(f"unknown penalty variant {variant!r}")
    nlevels = alpha_of(kv.p)
    mats = tuple(assemble_penalty(kv, ell, variant, rule) for ell in range(1, nlevels + 1))
    return PenaltySet(
        variant=variant,
        matrices=mats,
        eta_a=_eta_tuple(eta_a, nlevels),
        eta_b=_eta_tuple(eta_b, nlevels),
    )


def penalized_forms(M, K, penalties, h):
    """Mass/stiffness pair with the outlier penalties folded in.

    Endpoint weights: mass h^(4l+1), stiffness pi^2 h^(4l-1).
    Integral weights: mass h^(6l-1), stiffness pi^2 h^(6l-3).
    With no penalty levels the input pair is returned unchanged.
    """
    if not penalties.matrices:
        return M, K
    Mt, Kt = M, K
    for ell, P, ea, eb in zip(penalties.levels, penalties.matrices, penalties.eta_a, penalties.eta_b):
        if penalties.variant == "endpoint":
            wm = h ** (4 * ell + 1)
            wk = np.pi**2 * h ** (4 * ell - 1)
        else:
            wm = h ** (6 * ell - 1)
            wk = np.pi**2 * h ** (6 * ell - 3)
        Mt = Mt.add_scaled(P, eb * wm)
        Kt = Kt.add_scaled(P, ea * wk)
    return Mt, Kt

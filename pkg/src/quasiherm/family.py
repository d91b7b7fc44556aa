"""First-order generalized-charge family on symmetric Dirichlet grids.

The charge is discretized as C = D1 + diag(sigma + i alpha) with sigma
even and alpha odd, the Hamiltonian as H = -D2 + diag(V), and the parity
P as index reversal.  Central stencils are used for both derivative
orders so that D1^dagger = -D1 and D2^dagger = D2 hold exactly: that
single choice keeps the whole conjugation algebra of the continuum exact
on the lattice.  Stencils treat samples beyond the ends as zero, so the
effective hard walls sit one spacing outside the sampled extent.

The forward map from a charge ansatz to the potential reads, per sample,

    S = sigma^2 - alpha^2 + omega        (even real part)
    Lambda = 2 sigma alpha               (odd imaginary part)

and the composition oracle below shows that a non-constant ansatz also
forces the derivative companions

    L = -sigma'                          (odd real part)
    Sigma = -alpha'                      (even imaginary part)

which close the compatibility exactly; compatible_split assembles all
four.  The inverse map solves the quadratic in sigma^2 with the
convention 2 sigma^2 = (S - omega) + sqrt((S - omega)^2 + Lambda^2),
the only sign that round-trips the forward map.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadGrid, DimensionMismatch, ParityViolation, SigmaVanishes
from .operators import parity_matrix

PARITY_ATOL = 1e-12

# below this |sigma| the inverse map is declared degenerate wherever the
# odd imaginary component does not vanish as well
SIGMA_FLOOR = 1e-6

# rows/columns within this margin of the ends are stencil-truncated and
# excluded from composed-operator residuals
BOUNDARY_MARGIN = 2


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid on [-L, L] with an odd point count.

    Points are built as (j - (N-1)/2) * h so the reflection
    x_j = -x_{N-1-j} is exact in floating point and x = 0 is a grid point.
    """

    half_width: float
    npoints: int
    spacing: float
    points: np.ndarray

    @property
    def interior(self) -> slice:
        return slice(1, self.npoints - 1)


def make_grid(half_width: float, npoints: int) -> Grid:
    if not (half_width > 0) or not np.isfinite(half_width):
        raise BadGrid(f"half-width must be positive and finite, got {half_width}")
    n = int(npoints)
    if n != npoints or n < 5 or n % 2 == 0:
        raise BadGrid(f"point count must be an odd integer >= 5, got {npoints}")
    h = 2.0 * half_width / (n - 1)
    x = (np.arange(n) - (n - 1) // 2) * h
    return Grid(float(half_width), n, h, x)


def _check_parity(name: str, f: np.ndarray, sign: int) -> None:
    scale = max(1.0, float(np.abs(f).max()))
    dev = float(np.abs(f - sign * f[::-1]).max())
    if dev > PARITY_ATOL * scale:
        kind = "even" if sign == 1 else "odd"
        raise ParityViolation(
            f"{name} is not {kind} on the grid (deviation {dev:.3e})")


def symmetrize(f, sign: int, *, warn_rtol: float = 1e-10,
               name: str = "samples") -> np.ndarray:
    """Project samples onto their even (+1) or odd (-1) part.

    Emits a warning when the discarded opposite-parity content exceeds
    warn_rtol relative to the sample scale.
    """
    ff = np.asarray(f, dtype=float)
    proj = 0.5 * (ff + sign * ff[::-1])
    lost = float(np.abs(ff - proj).max())
    scale = max(1.0, float(np.abs(ff).max()))
    if lost > warn_rtol * scale:
        import warnings

        warnings.warn(
            f"{name}: symmetrization discarded asymmetry {lost:.3e}",
            stacklevel=2)
    return proj


@dataclass(frozen=True)
class ChargeAnsatz:
    """Sampled first-order charge data: even sigma, odd alpha, constant omega."""

    sigma: np.ndarray
    alpha: np.ndarray
    omega: float

    @property
    def w(self) -> np.ndarray:
        return self.sigma + 1j * self.alpha


def make_ansatz(grid: Grid, sigma, alpha, omega: float = 0.0) -> ChargeAnsatz:
    s = np.asarray(sigma, dtype=float)
    a = np.asarray(alpha, dtype=float)
    if s.shape != (grid.npoints,) or a.shape != (grid.npoints,):
        raise DimensionMismatch(
            f"ansatz samples must have length {grid.npoints}")
    if not (np.isfinite(s).all() and np.isfinite(a).all() and np.isfinite(omega)):
        raise ValueError("ansatz samples must be finite")
    _check_parity("sigma", s, +1)
    _check_parity("alpha", a, -1)
    return ChargeAnsatz(s.copy(), a.copy(), float(omega))


@dataclass(frozen=True)
class PotentialSplit:
    """Potential split by reality and parity:
    V = real_even + real_odd + i*(imag_even + imag_odd)."""

    real_even: np.ndarray
    real_odd: np.ndarray
    imag_even: np.ndarray
    imag_odd: np.ndarray

    def potential(self) -> np.ndarray:
        return (self.real_even + self.real_odd
                + 1j * (self.imag_even + self.imag_odd))


def make_split(grid: Grid, real_even, real_odd, imag_even, imag_odd
               ) -> PotentialSplit:
    parts = {
        "real_even": (np.asarray(real_even, dtype=float), +1),
        "real_odd": (np.asarray(real_odd, dtype=float), -1),
        "imag_even": (np.asarray(imag_even, dtype=float), +1),
        "imag_odd": (np.asarray(imag_odd, dtype=float), -1),
    }
    for name, (f, sign) in parts.items():
        if f.shape != (grid.npoints,):
            raise DimensionMismatch(
                f"{name} must have length {grid.npoints}")
        if not np.isfinite(f).all():
            raise ValueError(f"{name} samples must be finite")
        _check_parity(name, f, sign)
    return PotentialSplit(*(parts[k][0].copy() for k in
                            ("real_even", "real_odd", "imag_even", "imag_odd")))


def first_difference(grid: Grid) -> np.ndarray:
    """Central first-difference matrix; exactly real antisymmetric."""
    n = grid.npoints
    c = 1.0 / (2.0 * grid.spacing)
    d = np.zeros((n, n))
    idx = np.arange(n - 1)
    d[idx, idx + 1] = c
    d[idx + 1, idx] = -c
    return d


def second_difference(grid: Grid) -> np.ndarray:
    """Central second-difference matrix; exactly real symmetric."""
    n = grid.npoints
    h2 = grid.spacing ** 2
    d = np.zeros((n, n))
    np.fill_diagonal(d, -2.0 / h2)
    idx = np.arange(n - 1)
    d[idx, idx + 1] = 1.0 / h2
    d[idx + 1, idx] = 1.0 / h2
    return d


def discretize_hamiltonian(grid: Grid, potential) -> np.ndarray:
    """H = -D2 + diag(V) with zero (Dirichlet) samples beyond the ends."""
    v = np.asarray(potential, dtype=complex).ravel()
    if v.shape != (grid.npoints,):
        raise DimensionMismatch(
            f"potential must have length {grid.npoints}, got {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("potential samples must be finite")
    return -second_difference(grid).astype(complex) + np.diag(v)


def discretize_charge(grid: Grid, sigma, alpha) -> np.ndarray:
    """C = D1 + diag(sigma + i alpha) with Dirichlet ends."""
    s = np.asarray(sigma, dtype=float).ravel()
    a = np.asarray(alpha, dtype=float).ravel()
    if s.shape != (grid.npoints,) or a.shape != (grid.npoints,):
        raise DimensionMismatch(
            f"charge samples must have length {grid.npoints}")
    return first_difference(grid).astype(complex) + np.diag(s + 1j * a)


def forward_family(a: ChargeAnsatz) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise potential components fixed by the ansatz:
    S = sigma^2 - alpha^2 + omega (even), Lambda = 2 sigma alpha (odd)."""
    s_even = a.sigma ** 2 - a.alpha ** 2 + a.omega
    lam_odd = 2.0 * a.sigma * a.alpha
    return s_even, lam_odd


def compatible_split(a: ChargeAnsatz, grid: Grid) -> PotentialSplit:
    """Full four-component potential split compatible with the ansatz.

    Besides the pointwise S and Lambda, the first-order coefficient of the
    composition residual forces real_odd = -sigma' and imag_even = -alpha'
    whenever the ansatz is not constant; derivatives are taken with
    second-order central differences (one-sided at the ends, which
    preserves the exact parity of the samples).
    """
    s_even, lam_odd = forward_family(a)
    ds = np.gradient(a.sigma, grid.spacing, edge_order=2)
    da = np.gradient(a.alpha, grid.spacing, edge_order=2)
    return make_split(grid, s_even, -ds, -da, lam_odd)


def _central(f: np.ndarray, h: float) -> np.ndarray:
    """Central first difference on interior points (length N-2)."""
    return (f[2:] - f[:-2]) / (2.0 * h)


def _central2(f: np.ndarray, h: float) -> np.ndarray:
    """Central second difference on interior points (length N-2)."""
    return (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)


def ode_pair_residual(a: ChargeAnsatz, s_even, lam_odd, grid: Grid
                      ) -> tuple[float, float]:
    """Max-norm residuals of the differentiated compatibility pair

        S' = 2 sigma' sigma - 2 alpha' alpha
        Lambda' = 2 sigma' alpha + 2 alpha' sigma

    with central differences on interior points; O(h^2) for smooth data
    produced by forward_family.
    """
    s_arr = np.asarray(s_even, dtype=float)
    lam_arr = np.asarray(lam_odd, dtype=float)
    if s_arr.shape != (grid.npoints,) or lam_arr.shape != (grid.npoints,):
        raise DimensionMismatch("potential components must match the grid")
    h = grid.spacing
    sig_i = a.sigma[1:-1]
    alp_i = a.alpha[1:-1]
    dsig = _central(a.sigma, h)
    dalp = _central(a.alpha, h)
    r1 = np.abs(_central(s_arr, h) - (2 * dsig * sig_i - 2 * dalp * alp_i))
    r2 = np.abs(_central(lam_arr, h) - (2 * dsig * alp_i + 2 * dalp * sig_i))
    return float(r1.max()), float(r2.max())


def inverse_family(s_even, lam_odd, omega: float, grid: Grid,
                   branch: int = +1, *, sigma_floor: float = SIGMA_FLOOR
                   ) -> ChargeAnsatz:
    """Recover (sigma, alpha) from (S, Lambda, omega).

    Solves sigma^4 + (omega - S) sigma^2 - Lambda^2/4 = 0 for the
    nonnegative root, 2 sigma^2 = (S - omega) + sqrt((S - omega)^2 +
    Lambda^2), then alpha = Lambda / (2 sigma).  ``branch`` flips the
    common sign of sigma and alpha; both branches map forward to the same
    potential.  Points with |sigma| below ``sigma_floor`` are tolerated
    only where Lambda vanishes too (alpha is set to 0 there); otherwise
    SigmaVanishes reports the offending indices.
    """
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 or -1")
    s_arr = np.asarray(s_even, dtype=float)
    lam_arr = np.asarray(lam_odd, dtype=float)
    if s_arr.shape != (grid.npoints,) or lam_arr.shape != (grid.npoints,):
        raise DimensionMismatch("potential components must match the grid")
    shifted = s_arr - omega
    # radicand >= shifted^2, so the root below is always real nonnegative
    sigma_sq = 0.5 * (shifted + np.sqrt(shifted * shifted + lam_arr * lam_arr))
    sigma = branch * np.sqrt(sigma_sq)
    small = np.abs(sigma) < sigma_floor
    lam_scale = max(1.0, float(np.abs(lam_arr).max()))
    degenerate = small & (np.abs(lam_arr) > 1e-12 * lam_scale)
    if np.any(degenerate):
        idx = np.nonzero(degenerate)[0]
        raise SigmaVanishes(
            f"sigma below {sigma_floor:g} at {idx.size} points with "
            "nonvanishing Lambda; inverse map degenerates", indices=idx)
    alpha = np.zeros_like(sigma)
    ok = ~small
    alpha[ok] = lam_arr[ok] / (2.0 * sigma[ok])
    return make_ansatz(grid, sigma, alpha, omega)


def compose_pct_residual(a: ChargeAnsatz, ps: PotentialSplit, grid: Grid
                         ) -> float:
    """Largest entry of H^dagger (P C) - (P C) H away from the boundary.

    Rows and columns within BOUNDARY_MARGIN of the ends carry truncated
    stencils and are excluded.  Exactly zero (to roundoff) for constant
    compatible data; bounded under refinement for a compatible smooth
    split; growing like 1/h when the first-order compatibility is violated.
    """
    v = ps.potential()
    if v.shape != (grid.npoints,) or a.sigma.shape != (grid.npoints,):
        raise DimensionMismatch("ansatz and split must live on the grid")
    hmat = discretize_hamiltonian(grid, v)
    cmat = discretize_charge(grid, a.sigma, a.alpha)
    pc = parity_matrix(grid.npoints) @ cmat
    resid = hmat.conj().T @ pc - pc @ hmat
    m = BOUNDARY_MARGIN
    core = resid[m:grid.npoints - m, m:grid.npoints - m]
    return float(np.abs(core).max())


@dataclass(frozen=True)
class CoefficientResiduals:
    """Per-order coefficient residuals of the composed third-order
    operators, sampled on the interior points."""

    x: np.ndarray
    d3: np.ndarray
    d2: np.ndarray
    d1: np.ndarray
    d0: np.ndarray

    def sup(self, order: int) -> float:
        arr = {3: self.d3, 2: self.d2, 1: self.d1, 0: self.d0}[order]
        return float(np.abs(arr).max())


def even_part(f: np.ndarray) -> np.ndarray:
    """Even projection on a reflection-symmetric sample array."""
    return 0.5 * (f + f[::-1])


def odd_part(f: np.ndarray) -> np.ndarray:
    """Odd projection on a reflection-symmetric sample array."""
    return 0.5 * (f - f[::-1])


def coefficient_match(a: ChargeAnsatz, ps: PotentialSplit, grid: Grid
                      ) -> CoefficientResiduals:
    """Coefficient-level comparison of H^dagger (P C) against (P C) H.

    Both compositions share the left parity factor: with u(x) =
    conj(V)(-x), the identity H^dagger P = P (-D^2 + u) reduces the
    comparison to the genuine differential compositions

        (-D^2 + u)(D + w)  versus  (D + w)(-D^2 + V),

    whose coefficient functions per derivative order are assembled with
    the product rule and sampled derivatives:

        order 3:  -1                | -1
        order 2:  -w                | -w
        order 1:  u - 2 w'          | V
        order 0:  u w - w''         | V' + w V

    The order-3 and order-2 residuals cancel identically; the order-1 and
    order-0 residuals are the compatibility conditions.  Their odd real
    and odd imaginary projections reproduce the differentiated pair tested
    by ode_pair_residual; the even projections vanish exactly when
    real_odd = -sigma' and imag_even = -alpha'.
    """
    v = ps.potential()
    if v.shape != (grid.npoints,) or a.sigma.shape != (grid.npoints,):
        raise DimensionMismatch("ansatz and split must live on the grid")
    h = grid.spacing
    n = grid.npoints
    w = a.w
    u = np.conj(v)[::-1]

    w_i = w[1:-1]
    u_i = u[1:-1]
    v_i = v[1:-1]
    dw = _central(w, h)
    ddw = _central2(w, h)
    dv = _central(v, h)

    lhs_d3 = np.full(n - 2, -1.0 + 0.0j)
    rhs_d3 = np.full(n - 2, -1.0 + 0.0j)
    lhs_d2 = -w_i
    rhs_d2 = -w_i
    lhs_d1 = u_i - 2.0 * dw
    rhs_d1 = v_i
    lhs_d0 = u_i * w_i - ddw
    rhs_d0 = dv + w_i * v_i

    return CoefficientResiduals(
        x=grid.points[1:-1].copy(),
        d3=lhs_d3 - rhs_d3,
        d2=lhs_d2 - rhs_d2,
        d1=lhs_d1 - rhs_d1,
        d0=lhs_d0 - rhs_d0,
    )


def charge_pg_hermiticity(a: ChargeAnsatz, grid: Grid) -> float:
    """Frobenius deviation of P C from Hermiticity.

    P D1 and P diag(w) are individually Hermitian exactly when the grid is
    symmetric, sigma is even and alpha is odd, so a valid ansatz gives
    machine zero.
    """
    cmat = discretize_charge(grid, a.sigma, a.alpha)
    pc = parity_matrix(grid.npoints) @ cmat
    return float(np.linalg.norm(pc - pc.conj().T))

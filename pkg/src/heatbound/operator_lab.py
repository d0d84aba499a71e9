"""Finite-difference lab for H = (-Delta)^m + V on a Dirichlet box [-L, L].

Eigenvectors are stored with the h-weighted normalisation
h * sum_i phi_j(i) phi_k(i) = delta_jk, so spectral sums such as
sum_j exp(-lambda_j t) phi_j(x)^2 approximate continuum kernel densities
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from heatbound.core import ProblemSpec, bracket

MAX_NODES = 4096
MIN_TRANSITION_NODES = 8


class SpectralError(RuntimeError):
    """The dense eigensolver did not converge."""


class SupportError(ValueError):
    """Test function support leaves the box or is under-resolved."""


@dataclass(frozen=True)
class Grid1D:
    L: float
    n: int

    def __post_init__(self):
        if not self.L > 0.0:
            raise ValueError(f"half width L must be > 0, got {self.L}")
        if self.n < 16:
            raise ValueError(f"need at least 16 nodes, got {self.n}")
        if self.n > MAX_NODES:
            raise ValueError(f"dense lab is capped at {MAX_NODES} nodes, got {self.n}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        # built from the symmetric index so that nodes[i] == -nodes[n-1-i] exactly
        k = np.arange(self.n) - (self.n - 1) / 2.0
        return k * self.h

    def nearest_index(self, x: float) -> int:
        return int(np.argmin(np.abs(self.nodes - x)))

    def padded(self, pad: int) -> "Grid1D":
        """Same spacing, ``pad`` extra nodes on each side."""
        return Grid1D(self.L + pad * self.h, self.n + 2 * pad)


@dataclass(frozen=True, eq=False)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # rows are nodes, columns are modes
    h: float = 1.0
    _sq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_sq", np.asarray(self.eigenvectors) ** 2)

    @classmethod
    def from_measure(cls, weights, rates) -> "SpectralData":
        """One-node spectral data with phi_j(0)^2 = weights[j].

        Any nonnegative spectral measure sum_j w_j delta_{rates_j} becomes a
        kernel diagonal k(t) = sum_j w_j exp(-rates_j t) at node 0.
        """
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise ValueError("spectral weights must be nonnegative")
        return cls(np.asarray(rates, dtype=float), np.sqrt(w)[None, :], 1.0)

    @property
    def size(self) -> int:
        return self.eigenvectors.shape[0]

    def weights(self, node: int) -> np.ndarray:
        return self._sq[node]


def potential_on_grid(grid: Grid1D, spec: ProblemSpec) -> np.ndarray:
    x = grid.nodes
    v = spec.potential_values(x)
    bound = spec.potential_bound(x)
    bad = np.nonzero(v > bound * (1 + 1e-12))[0]
    if bad.size:
        i = bad[0]
        raise ValueError(f"potential violates V <= c2 <x>^gamma at node x={x[i]:.6g} ({v[i]:.6g} > {bound[i]:.6g})")
    return v


def difference_power(n: int, h: float, m: int) -> sp.csr_matrix:
    """(D)^m for the Dirichlet second-difference matrix D = h^-2 tridiag(-1, 2, -1)."""
    d = sp.diags([-np.ones(n - 1), 2.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1], format="csr") / h**2
    out = d
    for _ in range(m - 1):
        out = out @ d
    return out.tocsr()


def assemble_operator(grid: Grid1D, spec: ProblemSpec) -> np.ndarray:
    """Dense symmetric matrix D^m + diag(V(nodes))."""
    if spec.N != 1:
        raise ValueError("the grid lab is one-dimensional (N = 1)")
    v = potential_on_grid(grid, spec)
    mat = difference_power(grid.n, grid.h, spec.m).toarray()
    mat[np.diag_indices_from(mat)] += v
    return mat


def spectral_decompose(hmat: np.ndarray, h: float) -> SpectralData:
    hmat = np.asarray(hmat, dtype=float)
    if hmat.ndim != 2 or hmat.shape[0] != hmat.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.allclose(hmat, hmat.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(hmat).max())):
        raise ValueError("matrix is not symmetric")
    try:
        evals, evecs = scipy.linalg.eigh(hmat, driver="evd")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SpectralError(f"eigensolver failed: {exc}") from exc
    rows = np.argmax(np.abs(evecs), axis=0)
    signs = np.sign(evecs[rows, np.arange(evecs.shape[1])])
    signs[signs == 0] = 1.0
    evecs = evecs * signs / math.sqrt(h)
    return SpectralData(evals, evecs, h)


def _fixed_sum(values: np.ndarray) -> float:
    # exactly rounded, so independent of evaluation order and thread count
    return math.fsum(values.tolist())


def heat_kernel_diag(sd: SpectralData, t: float, node_index: int) -> float:
    """k(t, x, x) = sum_j exp(-lambda_j t) phi_j(x)^2."""
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    return _fixed_sum(np.exp(-sd.eigenvalues * t) * sd.weights(node_index))


def heat_kernel_diag_many(sd: SpectralData, times, node_index: int) -> np.ndarray:
    return np.array([heat_kernel_diag(sd, float(t), node_index) for t in np.atleast_1d(times)])


def greens_diag(sd: SpectralData, t: float, node_index: int) -> float:
    """G_t(x, x) = sum_j phi_j(x)^2 / (t lambda_j + 1)."""
    if not t > 0.0:
        raise ValueError(f"t must be > 0, got {t}")
    return _fixed_sum(sd.weights(node_index) / (t * sd.eigenvalues + 1.0))


def semigroup_matrix(sd: SpectralData, t: float) -> np.ndarray:
    """Kernel density matrix k(t, x_i, x_j)."""
    q = sd.eigenvectors
    return (q * np.exp(-sd.eigenvalues * t)) @ q.T


def _glue(tau):
    return np.where(tau > 0.0, np.exp(-1.0 / np.where(tau > 0.0, tau, 1.0)), 0.0)


def bump_psi(s):
    """Smooth even cutoff: 1 on [-1, 1], 0 off (-2, 2)."""
    a = np.abs(np.asarray(s, dtype=float))
    tau = a - 1.0
    e0, e1 = _glue(tau), _glue(1.0 - tau)
    with np.errstate(invalid="ignore", divide="ignore"):
        theta = np.where(tau <= 0.0, 0.0, np.where(tau >= 1.0, 1.0, e0 / (e0 + e1)))
    out = 1.0 - theta
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class TestFunction:
    __test__ = False  # not a pytest class

    center: float
    center_index: int
    beta: float
    width: float
    values: np.ndarray

    @property
    def value_at_center(self) -> float:
        return float(self.values[self.center_index])


def build_test_function(x: float, beta: float, grid: Grid1D, rho: float) -> TestFunction:
    """Sample g_x(y) = psi((x - y) / <x>^beta) on the grid.

    ``x`` is snapped to the nearest node so that g_x(x) = 1 exactly.
    """
    if not beta < 1.0:
        raise ValueError(f"beta must be < 1, got {beta}")
    i = grid.nearest_index(x)
    xc = float(grid.nodes[i])
    width = bracket(xc, rho) ** beta
    if abs(xc) + 2.0 * width >= grid.L:
        raise SupportError(
            f"support [{xc - 2 * width:.4g}, {xc + 2 * width:.4g}] leaves [-{grid.L}, {grid.L}]: shrink beta or enlarge L"
        )
    if width / grid.h < MIN_TRANSITION_NODES:
        raise SupportError(f"transition band of width {width:.4g} holds fewer than {MIN_TRANSITION_NODES} nodes (h={grid.h:.4g})")
    values = bump_psi((xc - grid.nodes) / width)
    return TestFunction(xc, i, beta, width, values)


def quadratic_form(grid: Grid1D, spec: ProblemSpec, g) -> tuple[float, float]:
    """(q0, qv): discrete Q0(g) = h <D^m g, g> and h sum V g^2."""
    vals = g.values if isinstance(g, TestFunction) else np.asarray(g, dtype=float)
    dm = difference_power(grid.n, grid.h, spec.m)
    q0 = grid.h * float(vals @ (dm @ vals))
    qv = grid.h * float(np.sum(potential_on_grid(grid, spec) * vals**2))
    return q0, qv


def laplacian_power_sup(grid: Grid1D, spec: ProblemSpec, g: TestFunction) -> float:
    """max |(-Delta_h)^m g|."""
    return float(np.max(np.abs(difference_power(grid.n, grid.h, spec.m) @ g.values)))


def variational_green(t: float, g, q: tuple[float, float], norm_sq: float) -> float:
    """|g(x)|^2 / (t Q(g) + ||g||^2), a lower bound on G_t(x, x)."""
    center = g.value_at_center if isinstance(g, TestFunction) else float(g)
    if center == 0.0 or not norm_sq > 0.0:
        raise ValueError("test function vanishes")
    return center**2 / (t * (q[0] + q[1]) + norm_sq)


def norm_sq(grid: Grid1D, g) -> float:
    vals = g.values if isinstance(g, TestFunction) else np.asarray(g, dtype=float)
    return grid.h * float(np.sum(vals**2))

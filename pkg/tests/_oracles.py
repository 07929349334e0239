"""Independent numerical oracles used only by the tests.

These deliberately avoid the code paths they check: derivatives come from
finite differences, QSD exit rates from a spectral discretization of the
killed generator, and series from direct term-by-term summation.
"""

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.stats import poisson as poisson_dist


def central_first_diff(f, x, h=1e-5):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def central_second_diff(f, x, h=1e-4):
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)


def qsd_exit_oracle(potential, basin, beta, n_grid=20001):
    """Exact QSD exit rate and pathway split for a bounded 1D basin.

    The exit rate is the principal Dirichlet eigenvalue of the killed
    generator on (a, b); the symmetrizing change of variables turns it into
    a self-adjoint tridiagonal eigenproblem.  The pathway split comes from
    the probability flux of the quasistationary density at each boundary.

    Returns:
        (kappa, p_left, p_right).
    """
    a, b = basin.a, basin.b
    x = np.linspace(a, b, n_grid)
    h = x[1] - x[0]
    xi = x[1:-1]
    vp = potential.gradient(xi)
    vpp = potential.hessian(xi)
    w = beta * vp * vp / 4.0 - vpp / 2.0
    diag = 2.0 / (beta * h * h) + w
    off = np.full(n_grid - 3, -1.0 / (beta * h * h))
    vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    kappa = float(vals[0])
    u = vecs[:, 0]
    phi = np.zeros(n_grid)
    phi[1:-1] = u * np.exp(-beta * potential.evaluate(xi) / 2.0)
    if phi.sum() < 0.0:
        phi = -phi
    phi /= np.trapezoid(phi, x)
    flux_left = (phi[1] - phi[0]) / h / beta
    flux_right = -(phi[-1] - phi[-2]) / h / beta
    total = flux_left + flux_right
    return kappa, flux_left / total, flux_right / total


def p_hat_moments_bruteforce(lam, n_terms=None):
    """Direct Poisson-series moments of 1 - exp(-n_hat(N)), N ~ Poisson(lam)."""
    if n_terms is None:
        n_terms = max(50, int(lam + 12.0 * np.sqrt(lam) + 50))
    n = np.arange(n_terms + 1)
    pmf = poisson_dist.pmf(n, lam)
    f = np.where(n >= 2, 1.0 - np.exp(-n.astype(float)), 0.0)
    mean = float((f * pmf).sum())
    second = float((f * f * pmf).sum())
    var = second - mean * mean
    p = 1.0 - np.exp(-lam)
    bias = mean - p
    return mean, var, bias * bias + var

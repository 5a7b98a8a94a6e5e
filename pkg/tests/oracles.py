"""Independent oracles for pinning expected values.

These deliberately avoid the package's evolution kernels and solvers:
- the one-step operator is assembled as a dense matrix product F @ S @ C
  from matrix exponentials and explicit index maps;
- classical chains are iterated as Markov updates on (site, spin) populations;
- interval bounds come from scipy's beta quantiles;
- derivatives come from finite differences.
"""

import math

import numpy as np
from scipy.linalg import expm
from scipy.stats import beta as beta_dist

SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def coin_matrix(theta):
    """exp(-i theta sigma_y) via the matrix exponential."""
    return expm(-1j * theta * SIGMA_Y)


def dense_step_matrix(x_min, x_max, phi, theta):
    """F @ S @ C on the flattened (site, spin) space, index 2*(x-x_min)+s.

    The shift truncates at the window edge (amplitude that would leave is
    dropped), so comparisons are valid only while support stays interior.
    """
    L = x_max - x_min + 1
    dim = 2 * L
    C = np.kron(np.eye(L), coin_matrix(theta))
    S = np.zeros((dim, dim), dtype=complex)
    for i in range(L):
        if i + 1 < L:
            S[2 * (i + 1), 2 * i] = 1.0  # up moves right
        if i - 1 >= 0:
            S[2 * (i - 1) + 1, 2 * i + 1] = 1.0  # down moves left
    xs = np.arange(x_min, x_max + 1)
    F = np.kron(np.diag(np.exp(1j * phi * xs)), np.eye(2))
    return F @ S @ C


def dense_evolve(psi0, W, t):
    """Iterated matrix application; returns the list of state vectors."""
    out = [np.array(psi0, dtype=complex)]
    for _ in range(t):
        out.append(W @ out[-1])
    return out


def interleave(up, down):
    """Flatten spinor components into the (site, spin) vector layout."""
    psi = np.empty(2 * len(up), dtype=complex)
    psi[0::2] = up
    psi[1::2] = down
    return psi


def vector_distribution(psi):
    """Position probabilities of a flattened state vector."""
    p = np.abs(psi) ** 2
    return p[0::2] + p[1::2]


def binomial_distribution(t, x_min, x_max):
    """P(x) = C(t, (t+x)/2) / 2^t on parity-allowed sites, else 0."""
    p = np.zeros(x_max - x_min + 1)
    for x in range(x_min, x_max + 1):
        if (t + x) % 2 == 0 and -t <= x <= t:
            p[x - x_min] = math.comb(t, (t + x) // 2) / 2.0 ** t
    return p


def classical_coin_chain(t, theta, x_min, x_max):
    """Markov chain on (site, spin): coin flips spin with probability sin^2."""
    L = x_max - x_min + 1
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    up = np.zeros(L)
    down = np.zeros(L)
    up[-x_min] = 1.0  # walker starts at x=0, spin up
    for _ in range(t):
        new_up = c2 * up + s2 * down
        new_down = s2 * up + c2 * down
        up = np.zeros(L)
        down = np.zeros(L)
        up[1:] = new_up[:-1]
        down[:-1] = new_down[1:]
    return up + down


def beta_interval(k, n, confidence):
    """Clopper-Pearson bounds from the beta-quantile characterization."""
    alpha = 1.0 - confidence
    lower = 0.0 if k == 0 else float(beta_dist.ppf(alpha / 2.0, k, n - k + 1))
    upper = 1.0 if k == n else float(beta_dist.ppf(1.0 - alpha / 2.0, k + 1, n - k))
    return lower, upper


def fd_group_velocity(k, theta, band, h=1e-5):
    """Centered finite difference of the band dispersion."""
    def omega(kk):
        return band * math.acos(max(-1.0, min(1.0, math.cos(theta) * math.cos(kk))))

    return (omega(k + h) - omega(k - h)) / (2.0 * h)


def free_eigenphases(k, theta):
    """Sorted eigenphases of the expm-built free one-step matrix."""
    S = expm(-1j * k * SIGMA_Z)
    return np.sort(np.angle(np.linalg.eigvals(S @ coin_matrix(theta))))

"""
Spin, Dicke and three-level operators.

Qubit convention: site 1 is the most significant tensor factor and the
excited state |e> has index 0, so ``sigma_z = diag(1, -1)`` and
``sigma_- = |g><e|``. Dicke-ladder matrices (size ``L + 1``) are indexed by
``k = L/2 - m``, i.e. from the top of the ladder downwards.
"""

import itertools
from math import comb

import numpy as np

MAX_DENSE_L = 12

SIGMA = {
    'x': np.array([[0, 1], [1, 0]], dtype=float),
    'y': np.array([[0, -1j], [1j, 0]]),
    'z': np.array([[1, 0], [0, -1]], dtype=float),
}
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=float)
SIGMA_MINUS = SIGMA_PLUS.T.copy()


def _check_L(L, max_L=MAX_DENSE_L):
    if int(L) != L or L < 1:
        raise ValueError(f"particle count must be a positive integer, got {L}")
    if L > max_L:
        raise ValueError(f"L={L} exceeds the dense limit of {max_L} qubits")
    return int(L)


def embed(op, site, L, local_dim=2):
    """Place a single-site operator at ``site`` (1-based) of an L-site chain."""
    if not 1 <= site <= L:
        raise ValueError(f"site {site} out of range 1..{L}")
    left = np.eye(local_dim ** (site - 1))
    right = np.eye(local_dim ** (L - site))
    return np.kron(np.kron(left, op), right)


def pauli(axis, site, L):
    """Pauli matrix on one qubit of an L-qubit register."""
    L = _check_L(L)
    return embed(SIGMA[axis], site, L)


def _flip_masks(L):
    return [1 << (L - site) for site in range(1, L + 1)]


def _excitation_signs(L):
    """+1 where the qubit is excited (bit 0), -1 where it is in the ground state."""
    idx = np.arange(2 ** L)
    return [1 - 2 * ((idx >> (L - site)) & 1) for site in range(1, L + 1)]


def collective_j(axis, L):
    """Collective spin ``J_a = (1/2) sum_i sigma_a^(i)`` on 2^L dimensions.

    ``axis`` is one of ``x, y, z, +, -`` with ``J_+- = J_x +- i J_y``.
    """
    L = _check_L(L)
    d = 2 ** L
    idx = np.arange(d)
    if axis == 'z':
        return np.diag(0.5 * np.sum(_excitation_signs(L), axis=0)).astype(float)
    if axis in ('x', 'y'):
        out = np.zeros((d, d), dtype=float if axis == 'x' else complex)
        for mask, sign in zip(_flip_masks(L), _excitation_signs(L)):
            # sigma_y|e> = i|g>, sigma_y|g> = -i|e>
            val = 0.5 if axis == 'x' else 0.5j * sign
            out[idx ^ mask, idx] += val
        return out
    if axis in ('+', '-'):
        out = np.zeros((d, d))
        want = -1 if axis == '+' else 1
        for mask, sign in zip(_flip_masks(L), _excitation_signs(L)):
            src = idx[sign == want]
            out[src ^ mask, src] = 1.0
        return out
    raise ValueError(f"unknown axis {axis!r}")


def _two_m(L, m):
    two_m = round(2 * float(m))
    if abs(2 * float(m) - two_m) > 1e-9 or (two_m - L) % 2 or abs(two_m) > L:
        raise ValueError(f"m={m} is not on the Dicke ladder of L={L}")
    return two_m


def ladder_coefficient(L, m, sign):
    """``C_{m,+-} = sqrt((L/2 -+ m)(L/2 +- m + 1))`` for the l = L/2 ladder."""
    two_m = _two_m(L, m)
    if sign in ('+', +1):
        val = (L - two_m) * (L + two_m + 2)
    elif sign in ('-', -1):
        val = (L + two_m) * (L - two_m + 2)
    else:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    return float(np.sqrt(val / 4.0))


def ladder_m_values(L):
    """Magnetic numbers ``L/2, L/2 - 1, ..., -L/2``."""
    return L / 2 - np.arange(L + 1)


def dicke_state(L, M):
    """Dicke state |L/2, M> as a dense vector of length 2^L."""
    L = _check_L(L)
    two_m = _two_m(L, M)
    n_ground = (L - two_m) // 2
    idx = np.arange(2 ** L)
    popcount = np.array([bin(i).count('1') for i in idx])
    psi = (popcount == n_ground).astype(float)
    return psi / np.sqrt(comb(L, n_ground))


def dicke_basis(L):
    """Columns are the Dicke states ordered M = L/2 ... -L/2."""
    return np.column_stack([dicke_state(L, m) for m in ladder_m_values(L)])


def ladder_j(axis, L):
    """Collective spin restricted to the symmetric (l = L/2) sector, size L + 1."""
    if int(L) != L or L < 1:
        raise ValueError(f"particle count must be a positive integer, got {L}")
    ms = ladder_m_values(L)
    n = L + 1
    up = np.zeros((n, n))
    for k in range(1, n):
        up[k - 1, k] = ladder_coefficient(L, ms[k], '+')
    if axis == 'z':
        return np.diag(ms)
    if axis == '+':
        return up
    if axis == '-':
        return up.T.copy()
    if axis == 'x':
        return 0.5 * (up + up.T)
    if axis == 'y':
        return -0.5j * (up - up.T)
    raise ValueError(f"unknown axis {axis!r}")


def m_body_noise(L, m, g=1.0, max_L=MAX_DENSE_L):
    """m-body noise operator ``(g L / C(L, m)) sum_{|S| = m} prod_{i in S} sigma_x^(i)``.

    Its operator norm is ``g L``: |++...+> is a common top eigenvector of all
    the sigma_x strings.
    """
    L = _check_L(L, max_L)
    if not 1 <= m <= L:
        raise ValueError(f"m={m} must satisfy 1 <= m <= L={L}")
    d = 2 ** L
    idx = np.arange(d)
    out = np.zeros((d, d))
    masks = _flip_masks(L)
    for subset in itertools.combinations(masks, m):
        out[idx ^ sum(subset), idx] += 1.0
    return out * (g * L / comb(L, m))


# three-level particle, basis order (|1>, |0>, |-1>)
BATTERY_LEVELS = (1, 0, -1)


def battery_operators(E1, E0, Em1):
    """Single-particle Hamiltonian and the two transition operators.

    Returns ``(h, sigma_plus_x, sigma_minus_x)`` with
    ``sigma_{+-x} = |0><+-1| + |+-1><0|``.
    """
    if not Em1 < E1 < E0:
        raise ValueError(f"battery needs E_-1 < E_1 < E_0, got ({E1}, {E0}, {Em1})")
    h = np.diag([E1, E0, Em1]).astype(float)
    sp = np.zeros((3, 3))
    sp[0, 1] = sp[1, 0] = 1.0
    sm = np.zeros((3, 3))
    sm[1, 2] = sm[2, 1] = 1.0
    return h, sp, sm


def kron_power(op, L):
    out = np.ones((1, 1))
    for _ in range(L):
        out = np.kron(out, op)
    return out


def local_sum(op, L, local_dim):
    """``sum_i op^(i)`` over an L-site chain."""
    return sum(embed(op, i, L, local_dim) for i in range(1, L + 1))

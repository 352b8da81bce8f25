"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written along a different route than the
library: Hamiltonians via explicit Kronecker products of 2x2 matrices,
energies via nested Python loops, landscape detection via direct
neighbour comparison.  Tests freeze expected values computed from these.
"""

import numpy as np

# basis (|0>, |1>) with bit value 1 meaning sigma^z = +1
SZ = np.array([[-1.0, 0.0], [0.0, 1.0]])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
ID = np.eye(2)


def kron_site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """Embed a single-spin operator so that index bit i is spin i."""
    out = np.array([[1.0]])
    for k in range(n - 1, -1, -1):
        out = np.kron(out, op if k == site else ID)
    return out


def kron_hamiltonian(j: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Full Hamiltonian via operator sums: sum_{i<j} J sz sz + sum B sz + sum C sx."""
    n = len(b)
    dim = 2**n
    h = np.zeros((dim, dim))
    for i in range(n):
        for k in range(i + 1, n):
            h += j[i, k] * kron_site_operator(SZ, i, n) @ kron_site_operator(SZ, k, n)
    for i in range(n):
        h += b[i] * kron_site_operator(SZ, i, n)
        h += c[i] * kron_site_operator(SX, i, n)
    return h


def brute_energy(j: np.ndarray, b: np.ndarray, config: int) -> float:
    """Classical energy via nested loops over spin pairs."""
    n = len(b)
    s = [1.0 if (config >> i) & 1 else -1.0 for i in range(n)]
    total = 0.0
    for i in range(n):
        for k in range(i + 1, n):
            total += j[i, k] * s[i] * s[k]
    for i in range(n):
        total += b[i] * s[i]
    return total


def brute_landscape(j: np.ndarray, b: np.ndarray):
    """(global_config, {local minima}) by direct neighbour comparison."""
    n = len(b)
    energies = [brute_energy(j, b, x) for x in range(2**n)]
    global_config = min(range(2**n), key=lambda x: (energies[x], x))
    minima = set()
    for x in range(2**n):
        if x == global_config:
            continue
        if all(energies[x ^ (1 << i)] > energies[x] for i in range(n)):
            minima.add(x)
    return global_config, minima

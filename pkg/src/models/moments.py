"""
Exact blockmodel moments of rooted counts
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..counting.overlap import OverlapSet, cached_overlap_set, gluing_product
from ..utils.errors import InputError
from ..utils.motif_utils import RootedMotif, canonical_key, count_in_complete, falling_factorial
from .kernel import Kernel, stream

logger = logging.getLogger(__name__)

MAX_ASSIGNMENTS = 10 ** 8
ASSIGNMENT_CHUNK = 2 ** 20


@lru_cache(maxsize=4096)
def _density(kernel: Kernel, order: int, edges: Tuple, root_block: int) -> float:
    free = order - 1
    k = kernel.k
    total_assignments = k ** free
    if total_assignments > MAX_ASSIGNMENTS:
        raise InputError(
            f"{k}^{free} block assignments exceed {MAX_ASSIGNMENTS:.0e}; "
            f"use monte_carlo_density for this kernel")
    powers = k ** np.arange(free, dtype=np.int64)
    a = np.array([e[0] for e in edges], dtype=np.int64)
    b = np.array([e[1] for e in edges], dtype=np.int64)
    total = 0.0
    for start in range(0, total_assignments, ASSIGNMENT_CHUNK):
        idx = np.arange(start, min(start + ASSIGNMENT_CHUNK, total_assignments), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % k
        blocks = np.concatenate([np.full((len(idx), 1), root_block, dtype=np.int64), digits], axis=1)
        weight = np.prod(kernel.pi[digits], axis=1)
        weight = weight * np.prod(kernel.B[blocks[:, a], blocks[:, b]], axis=1)
        total += float(weight.sum())
    return total


def theoretical_density(kernel: Kernel, motif: RootedMotif, root_block: int) -> float:
    """
    s_x(F, kappa) for a root in ``root_block``: the sum over block assignments
    of the non-root vertices of prod pi_{b_v} prod_{pq in F} B_{b_p b_q}

    Raises:
        InputError: If k^(|F|-1) exceeds MAX_ASSIGNMENTS or the block is unknown
    """
    if not 0 <= root_block < kernel.k:
        raise InputError(f"root block {root_block} outside 0..{kernel.k - 1}")
    return _density(kernel, motif.order, motif.edges, int(root_block))


def monte_carlo_density(kernel_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
                        motif: RootedMotif, x: float, samples: int = 100_000,
                        seed: int = 0) -> Tuple[float, float]:
    """
    Monte Carlo estimate of s_x(F, kappa) for a general kernel function

    Returns:
        (estimate, standard error)
    """
    rng = stream(seed, 2, motif.order)
    latents = np.empty((samples, motif.order))
    latents[:, 0] = x
    latents[:, 1:] = rng.random((samples, motif.order - 1))
    values = np.ones(samples)
    for p, q in motif.edges:
        values *= np.asarray(kernel_fn(latents[:, p], latents[:, q]), dtype=float)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(samples))


def expected_count(kernel: Kernel, motif: RootedMotif, root_block: int, n: int, rho: float) -> float:
    """E X_F(G, i) = s_x(F, kappa) rho^e(F) X_F(K_n, i)"""
    return (theoretical_density(kernel, motif, root_block)
            * rho ** motif.edge_count * count_in_complete(motif, n))


def covariance_count(kernel: Kernel, f1: RootedMotif, f2: RootedMotif, root_block: int,
                     n: int, rho: float, exact: bool = False,
                     overlap: Optional[OverlapSet] = None) -> float:
    """
    Cov(X_{F1}(G,i), X_{F2}(G,i)) given the root's block.

    The leading-order value sums c_H E X_H over the overlap set without the
    gluing product. With ``exact`` the gluing pairs minus E X_{F1} E X_{F2}
    are added, which is exact for blockmodels.
    """
    overlap = overlap or cached_overlap_set(f1, f2)
    glued_key = canonical_key(overlap.gluing[0])
    total = 0.0
    for h, c in overlap.entries:
        if canonical_key(h) == glued_key:
            continue
        total += c * expected_count(kernel, h, root_block, n, rho)
    if exact:
        glued, c_glued = overlap.gluing
        bracket = (Fraction(c_glued * falling_factorial(n - 1, glued.order - 1), glued.aut)
                   - Fraction(falling_factorial(n - 1, f1.order - 1)
                              * falling_factorial(n - 1, f2.order - 1), f1.aut * f2.aut))
        s = theoretical_density(kernel, f1, root_block) * theoretical_density(kernel, f2, root_block)
        total += s * rho ** (f1.edge_count + f2.edge_count) * float(bracket)
    return total


def variance_count(kernel: Kernel, motif: RootedMotif, root_block: int, n: int, rho: float,
                   exact: bool = False, overlap: Optional[OverlapSet] = None) -> float:
    """
    Var X_F(G, i) given the root's block

    Leading order: sum over H in H_{F,F} without F^2 of
    c_H s_x(H) rho^e(H) (n-1)_{|H|-1}/aut(H). The (1 + O(1/n)) factor is
    dropped; ``exact`` restores it.
    """
    return covariance_count(kernel, motif, motif, root_block, n, rho, exact=exact, overlap=overlap)


def moment_vector(kernel: Kernel, motifs: Sequence[RootedMotif], root_block: int, n: int,
                  rho: float, exact: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """Mean vector and covariance matrix of the rooted counts of several motifs"""
    d = len(motifs)
    mean = np.array([expected_count(kernel, f, root_block, n, rho) for f in motifs])
    cov = np.zeros((d, d))
    for s in range(d):
        for t in range(s, d):
            cov[s, t] = cov[t, s] = covariance_count(
                kernel, motifs[s], motifs[t], root_block, n, rho, exact=exact)
    return mean, cov


def standardized_moment_targets(k: int) -> float:
    """k-th moment of a standard normal: (k-1)!! for even k, 0 for odd k"""
    if k < 1:
        raise InputError(f"moment order must be positive, got {k}")
    if k % 2:
        return 0.0
    result = 1
    for factor in range(k - 1, 0, -2):
        result *= factor
    return float(result)


def regime_scale(motif: RootedMotif, n: int, rho: float, averaged: bool = False) -> float:
    """n rho^m(F), or n rho^gamma(F) for the averaged statistic"""
    exponent = motif.gamma if averaged else motif.m
    if exponent is None:
        raise InputError(f"gamma is undefined for motif {motif.label}")
    return n * rho ** float(exponent)


def set_operation_bound(kernel: Kernel, f1: RootedMotif, f2: RootedMotif, union: RootedMotif,
                        intersection: RootedMotif, root_block: int, n: int, rho: float) -> float:
    """
    Ratio E X_{F1 u F2} / (E X_{F1} E X_{F2} / E X_{F1 n F2}); bounded above
    and below by constants when the copies overlap exactly in ``intersection``
    """
    num = expected_count(kernel, union, root_block, n, rho)
    den = (expected_count(kernel, f1, root_block, n, rho) * expected_count(kernel, f2, root_block, n, rho)
           / expected_count(kernel, intersection, root_block, n, rho))
    return num / den if den > 0 else float('nan')


def gluing_factorizes(kernel: Kernel, f1: RootedMotif, f2: RootedMotif, root_block: int) -> bool:
    """s_x(F1F2) == s_x(F1) s_x(F2) up to rounding"""
    glued = theoretical_density(kernel, gluing_product(f1, f2), root_block)
    product = theoretical_density(kernel, f1, root_block) * theoretical_density(kernel, f2, root_block)
    return bool(np.isclose(glued, product, rtol=1e-12, atol=0.0))


def block_densities(kernel: Kernel, motifs: Sequence[RootedMotif]) -> np.ndarray:
    """k x d table of s_x(F_t, kappa) per root block"""
    return np.array([[theoretical_density(kernel, f, b) for f in motifs] for b in range(kernel.k)])


def density_summary(kernel: Kernel, motifs: Sequence[RootedMotif], n: int, rho: float) -> List[Dict]:
    """Per block and motif: density, expected count, leading and exact variance"""
    rows = []
    for b in range(kernel.k):
        for f in motifs:
            rows.append({
                'block': b,
                'motif': f.label,
                'density': theoretical_density(kernel, f, b),
                'expected_count': expected_count(kernel, f, b, n, rho),
                'variance_leading': variance_count(kernel, f, b, n, rho),
                'variance_exact': variance_count(kernel, f, b, n, rho, exact=True),
            })
    return rows

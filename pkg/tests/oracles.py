"""Slow reference implementations, independent of the package code paths."""

import itertools
import math

import numpy as np


def brute_pi(vertex_arrays, n_vertices, edges, n_colours, incidence=None):
    """Sum over all edge colourings, one python-level product per colouring."""
    if incidence is None:
        incidence = [[i for i, e in enumerate(edges) if v in e] for v in range(n_vertices)]
    terms = []
    for phi in itertools.product(range(n_colours), repeat=len(edges)):
        prod = 1.0
        for v in range(n_vertices):
            prod *= float(vertex_arrays[v][tuple(phi[e] for e in incidence[v])])
        terms.append(prod)
    return math.fsum(terms)


def brute_hom(F_vertices, F_edges, G_adj):
    """Number of maps V(F) -> V(G) sending every edge of F to an edge of G."""
    nG = len(G_adj)
    count = 0
    for f in itertools.product(range(nG), repeat=F_vertices):
        if all(G_adj[f[u]][f[v]] for u, v in F_edges):
            count += 1
    return count


def brute_cut(mu, vals):
    """Max over all 4^q subset pairs, as exact sums."""
    q = len(mu)
    best = 0.0
    subsets = [s for r in range(q + 1) for s in itertools.combinations(range(q), r)]
    for S in subsets:
        for T in subsets:
            v = abs(math.fsum(mu[i] * mu[j] * vals[i][j] for i in S for j in T))
            best = max(best, v)
    return best


def random_symmetric(rng, order, dim):
    a = rng.standard_normal((dim,) * order)
    acc = np.zeros_like(a)
    perms = list(itertools.permutations(range(order)))
    for p in perms:
        acc += np.transpose(a, p)
    return acc / len(perms)

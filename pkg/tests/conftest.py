import itertools
from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=60, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile("ci")


def leibniz_det(rows):
    """Permutation expansion; independent of any elimination code."""
    n = len(rows)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if not term:
                break
        total += term
    return total


def fraction_det(rows):
    """Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    assert det.denominator == 1
    return int(det)


def count_spanning_trees(graph):
    """Enumerate (|V|-1)-edge subsets and keep the acyclic ones (union-find)."""
    verts = list(graph.vertices)
    edges = [(e.tail, e.head) for e in graph.edges]
    k = len(verts) - 1
    count = 0
    for subset in itertools.combinations(range(len(edges)), k):
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        ok = True
        for i in subset:
            x, y = find(edges[i][0]), find(edges[i][1])
            if x == y:
                ok = False
                break
            parent[x] = y
        count += ok
    return count


@pytest.fixture
def k4_rows():
    return [[3, -1, -1], [-1, 3, -1], [-1, -1, 3]]

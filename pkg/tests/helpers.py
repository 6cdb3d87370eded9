"""Shared oracles, generators, and fixtures for the test suite.

The oracles deliberately use the slow, definition-chasing route (subset
enumeration, window searches, path enumeration) so that the fast code paths
are checked against something independent of them.
"""

from __future__ import annotations

import itertools
import random

from detmod import (Box, GridModule, Matrix, NEG_INF, PosetDiagram,
                    PrimeField, is_invertible, leq, lt, mub)

F2 = PrimeField(2)
F5 = PrimeField(5)


# ---------------------------------------------------------------------------
# order-theory oracles

def window_ext_points(lo: int, hi: int, n: int):
    """All points of ({-inf} u [lo, hi])^n."""
    axis = (NEG_INF,) + tuple(range(lo, hi + 1))
    return list(itertools.product(axis, repeat=n))


def minimal_upper_bounds_bruteforce(points, candidates):
    """Minimal elements among the upper bounds found inside ``candidates``."""
    uppers = [w for w in candidates if all(leq(p, w) for p in points)]
    return {w for w in uppers if not any(lt(v, w) for v in uppers)}


def maximal_lower_bounds_bruteforce(points, candidates):
    lowers = [w for w in candidates if all(leq(w, p) for p in points)]
    return {w for w in lowers if not any(lt(w, v) for v in lowers)}


def join_closure_by_subsets(points):
    """Closure computed straight from the definition: one join per non-empty subset."""
    pts = list(points)
    out = set()
    for r in range(1, len(pts) + 1):
        for sub in itertools.combinations(pts, r):
            out.add(mub(sub))
    return frozenset(out)


def all_cover_paths(diagram: PosetDiagram, c, d):
    """Every covering chain from c to d inside the diagram's poset."""
    if c == d:
        return [[c]]
    paths = []
    for (x, y) in diagram.covers():
        if x == c and leq(y, d):
            for tail in all_cover_paths(diagram, y, d):
                paths.append([c] + tail)
    return paths


def path_commutativity_ok(diagram: PosetDiagram) -> bool:
    """Full path-enumeration commutativity check; only usable on small posets."""
    for c in diagram.points:
        for d in diagram.points:
            if not lt(c, d):
                continue
            composites = []
            for path in all_cover_paths(diagram, c, d):
                mat = Matrix.identity(diagram.field, diagram.dims[c])
                for x, y in zip(path, path[1:]):
                    mat = diagram.maps[(x, y)] @ mat
                composites.append(mat)
            if any(m != composites[0] for m in composites[1:]):
                return False
    return True


# ---------------------------------------------------------------------------
# module generators

def corner_module(field, top=(0, 0), box=None) -> GridModule:
    """Indicator of the downset of ``top``: one-dimensional below it, zero above."""
    if box is None:
        box = Box(top, tuple(t + 1 for t in top))
    dims = {p: (1 if leq(p, top) else 0) for p in box.integer_points()}
    return GridModule(field, box, dims, {})


def halfplane_table(p) -> int:
    """Dimension table of the open lower halfplane x + y < 0 (works with -inf)."""
    return 1 if p[0] + p[1] < 0 else 0


def interval_module(field, box: Box, starts, ends) -> GridModule:
    """Direct sum of indicator modules of the convex regions [g, not-above d).

    ``starts`` and ``ends`` are equal-length lists of points with g <= d; the
    k-th summand is one-dimensional exactly on the points above g_k and not
    above d_k, with identity maps inside.  Commutative by construction.
    """
    def member(k, p):
        return leq(starts[k], p) and not leq(ends[k], p)

    k_count = len(starts)
    dims = {}
    for p in box.integer_points():
        dims[p] = sum(1 for k in range(k_count) if member(k, p))
    steps = {}
    for p in box.integer_points():
        for axis in range(box.dim):
            if p[axis] + 1 > box.b[axis]:
                continue
            q = p[:axis] + (p[axis] + 1,) + p[axis + 1:]
            rows_k = [k for k in range(k_count) if member(k, q)]
            cols_k = [k for k in range(k_count) if member(k, p)]
            rows = [[field.one if rk == ck else field.zero for ck in cols_k]
                    for rk in rows_k]
            steps[(p, axis)] = Matrix(field, rows, ncols=len(cols_k), _coerce=False)
    return GridModule(field, box, dims, steps)


def random_invertible(field, n: int, rng: random.Random) -> Matrix:
    if field.kind == "prime":
        pool = range(field.p)
    else:
        pool = range(-2, 3)
    while True:
        rows = [[field.coerce(rng.choice(pool)) for _ in range(n)] for _ in range(n)]
        m = Matrix(field, rows, ncols=n)
        if is_invertible(m):
            return m


def twist_module(module: GridModule, rng: random.Random) -> GridModule:
    """Conjugate every pointwise space by a random basis change.

    Keeps dimensions and commutativity while making the step matrices
    generic instead of 0/1 diagonal.
    """
    from detmod import solve

    field = module.field
    basis = {p: random_invertible(field, module.dims[p], rng)
             for p in module.box.integer_points()}
    inverse = {}
    for p, b in basis.items():
        n = b.nrows
        inv = solve(b, Matrix.identity(field, n))
        inverse[p] = inv
    steps = {}
    for (p, axis), mat in module.steps.items():
        q = module._step_target(p, axis)
        steps[(p, axis)] = basis[q] @ mat @ inverse[p]
    return GridModule(field, module.box, dict(module.dims), steps)


def random_module(field, rng: random.Random, box: Box | None = None,
                  max_summands: int = 3, twist: bool = True) -> GridModule:
    """Random commutative grid module: a twisted sum of convex indicators."""
    if box is None:
        n = 2
        a = tuple(rng.randint(-1, 1) for _ in range(n))
        b = tuple(x + rng.randint(0, 2) for x in a)
        box = Box(a, b)
    starts, ends = [], []
    for _ in range(rng.randint(0, max_summands)):
        g = tuple(rng.randint(box.a[i] - 1, box.b[i]) for i in range(box.dim))
        d = tuple(rng.randint(g[i], box.b[i] + 1) for i in range(box.dim))
        starts.append(g)
        ends.append(d)
    mod = interval_module(field, box, starts, ends)
    if twist:
        mod = twist_module(mod, rng)
    return mod


def stabilization_window(view, c) -> Box:
    """Integer window over which the limit computes the extension's value.

    Per axis the window runs from the coordinate up to max(coordinate, one
    below the box); bottom coordinates start at one below the box, where the
    module has already become constant, making the truncation exact.
    """
    lo, hi = [], []
    for i, v in enumerate(c):
        edge = view.box.a[i] - 1
        hi_i = max(v, edge) if v != NEG_INF else edge
        lo_i = v if v != NEG_INF else edge
        lo.append(int(lo_i))
        hi.append(int(hi_i))
    return Box(tuple(lo), tuple(hi))


def canonical_set(module: GridModule) -> frozenset:
    """Default determining set for a stored module (mirrors the CLI default)."""
    from detmod import ext_box

    a, b = module.box.a, module.box.b
    shifted = tuple(x + 1 for x in a)
    if all(s <= y for s, y in zip(shifted, b)):
        return ext_box(Box(shifted, b)).points()
    return ext_box(Box(a, b)).points()


def random_ext_point(rng: random.Random, n: int, lo: int = -2, hi: int = 3,
                     bottom_prob: float = 0.3):
    return tuple(NEG_INF if rng.random() < bottom_prob else rng.randint(lo, hi)
                 for _ in range(n))


def random_point_set(rng: random.Random, n: int, max_size: int, lo: int = -2,
                     hi: int = 3) -> frozenset:
    size = rng.randint(0, max_size)
    return frozenset(random_ext_point(rng, n, lo, hi) for _ in range(size))

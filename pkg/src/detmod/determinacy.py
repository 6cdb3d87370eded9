"""Deciding when a finite point set determines an extended module.

The defining condition: whenever two comparable points see the same part of
the set below them, the structure map between them must be an isomorphism.
Checking it on the covering pairs of a finite critical grid suffices because
both the module data and the downset predicate are constant between
consecutive grid representatives; a brute-force window oracle is shipped
alongside so results can be certified independently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, NotDeterminedError
from .extgrid import (Box, CartesianSet, NEG_INF, as_point, critical_grid,
                      downset_of, ext_box, in_upset, join_below, min_point,
                      pointed_closure)
from .grid_module import EncodedView, ExtendedView, GridModule, restrict_view
from .linalg import PosetDiagram, diagrams_isomorphic, is_invertible

DEFAULT_MARGIN = 1


@dataclass(frozen=True)
class DeterminacyReport:
    """Outcome of a determinacy check.

    ``holds`` is the covering-pair condition alone; ``support_ok`` is the
    separate support condition (``None`` when it was skipped), and a failing
    ``witness`` is a covering pair with equal downsets whose map is not
    invertible.
    """

    holds: bool
    witness: tuple | None
    support_ok: bool | None
    method: str

    @property
    def determined(self) -> bool:
        return self.holds and self.support_ok is not False

    def __bool__(self) -> bool:
        return self.determined


def _normalize_set(view: ExtendedView, s) -> frozenset:
    pts = frozenset(as_point(p, dim=view.box.dim) for p in s)
    return pts


def _condition_on_grid(view, s: frozenset, grid: CartesianSet, method: str,
                       check_support: bool) -> DeterminacyReport:
    points = grid.sorted_points()
    downsets = {p: downset_of(s, p) for p in points}
    holds, witness = True, None
    for c, d in grid.covers():
        if downsets[c] == downsets[d] and not is_invertible(view.eval_map(c, d)):
            holds, witness = False, (c, d)
            break
    support_ok = None
    if check_support:
        if min_point(grid.dim) in s:
            support_ok = True
        else:
            support_ok = all(view.eval_space(p) == 0
                             for p in points if not in_upset(s, p))
    return DeterminacyReport(holds, witness, support_ok, method)


def is_S_determined(view: ExtendedView, s, check_support: bool = True,
                    margin: int = DEFAULT_MARGIN) -> DeterminacyReport:
    """Covering-pair condition on the critical grid, plus optional support check.

    The support check is skipped (reported True) when the bottom element
    belongs to the set, since then every point lies in its upset.
    """
    pts = _normalize_set(view, s)
    grid = critical_grid(view.box, pts, margin=margin)
    return _condition_on_grid(view, pts, grid, "critical-grid", check_support)


def default_oracle_window(box: Box, s) -> Box:
    """Smallest box containing the data box and all finite set coordinates."""
    lo, hi = list(box.a), list(box.b)
    for p in s:
        for i, v in enumerate(p):
            if v != NEG_INF:
                lo[i] = min(lo[i], v)
                hi[i] = max(hi[i], v)
    return Box(tuple(lo), tuple(hi))


def is_S_determined_oracle(view: ExtendedView, s, window: Box,
                           margin: int = DEFAULT_MARGIN,
                           check_support: bool = True) -> DeterminacyReport:
    """Brute force over every covering pair of an extended window.

    The window must contain the data box and all finite coordinates of the
    set; it is widened by ``margin`` and extended by the -inf faces before
    enumeration.  Exists so critical-grid results can be cross-certified.
    """
    pts = _normalize_set(view, s)
    if window.dim != view.box.dim:
        raise InputError("window dimension mismatch")
    if not (all(w <= a for w, a in zip(window.a, view.box.a))
            and all(w >= b for w, b in zip(window.b, view.box.b))):
        raise InputError("oracle window must contain the data box")
    for p in pts:
        for i, v in enumerate(p):
            if v != NEG_INF and not (window.a[i] <= v <= window.b[i]):
                raise InputError(f"oracle window must contain the set point {p!r}")
    factors = tuple((NEG_INF,) + tuple(range(window.a[i] - margin, window.b[i] + margin + 1))
                    for i in range(window.dim))
    grid = CartesianSet(factors)
    return _condition_on_grid(view, pts, grid, "oracle", check_support)


def canonical_map_check(view: ExtendedView, s,
                        margin: int = DEFAULT_MARGIN) -> DeterminacyReport:
    """Invertibility of the map from the collapsed reference point.

    For every critical point c the structure map from the join of the set
    elements below c into c must be an isomorphism.  Equivalent to the
    covering-pair condition.
    """
    pts = _normalize_set(view, s)
    grid = critical_grid(view.box, pts, margin=margin)
    for c in grid.sorted_points():
        a = join_below(pts, c)
        if not is_invertible(view.eval_map(a, c)):
            return DeterminacyReport(False, (a, c), None, "critical-grid")
    return DeterminacyReport(True, None, None, "critical-grid")


def encode(view: ExtendedView, s, margin: int = DEFAULT_MARGIN) -> PosetDiagram:
    """The finite model: the view restricted to the pointed join closure of the set.

    Refuses with the witness pair when the covering-pair condition fails, in
    which case no encoding on that closure can restrict back to the module.
    """
    pts = _normalize_set(view, s)
    report = is_S_determined(view, pts, check_support=False, margin=margin)
    if not report.holds:
        raise NotDeterminedError(report.witness)
    return view.restrict_diagram(pointed_closure(pts, dim=view.box.dim))


def check_encoding(view: ExtendedView, s, n: PosetDiagram,
                   margin: int = DEFAULT_MARGIN) -> bool:
    """Does restricting ``n`` along the collapse reproduce the module?

    Both sides are evaluated on the critical grid and compared up to natural
    isomorphism, built greedily along a linear extension of the grid.
    """
    pts = _normalize_set(view, s)
    closure = pointed_closure(pts, dim=view.box.dim)
    if frozenset(n.points) != closure:
        raise InputError("diagram is not defined on the pointed join closure of the set")
    grid = critical_grid(view.box, pts, margin=margin)
    candidate = restrict_view(EncodedView(n), grid)
    target = restrict_view(view, grid)
    return diagrams_isomorphic(candidate, target)


def finitely_determined_check(module: GridModule, candidate_box: Box,
                              margin: int = DEFAULT_MARGIN) -> bool:
    """Is the module already determined by the given (possibly smaller) box?

    True iff the extension is determined by the extended box with the lower
    corner shifted up by one in every axis.  A candidate where that shift
    crosses the upper corner is degenerate and rejected.
    """
    if candidate_box.dim != module.box.dim:
        raise InputError("candidate box dimension mismatch")
    shifted = tuple(a + 1 for a in candidate_box.a)
    if not all(s <= b for s, b in zip(shifted, candidate_box.b)):
        raise InputError(f"degenerate candidate box: {candidate_box.a!r} + 1 "
                         f"exceeds {candidate_box.b!r}")
    s = ext_box(Box(shifted, candidate_box.b)).points()
    view = ExtendedView(module)
    return is_S_determined(view, s, check_support=True, margin=margin).determined

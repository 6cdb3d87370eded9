"""Births, deaths, and finite presentations of determined modules.

A point is a birth when the canonical map from the colimit over its strict
downset (inside the encoding poset) fails to be surjective, and a death when
that map fails to be injective.  Generators of the presentation are placed at
births; relations are found by scanning the encoding poset and recording, at
each point, the new kernel vectors of the map from the free module on the
generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ConsistencyError, InputError
from .extgrid import (Point, as_point, critical_grid, join_closure, leq, lt,
                      min_point, sort_points)
from .grid_module import EncodedView, ExtendedView, GridModule, restrict_view
from .determinacy import DEFAULT_MARGIN, is_S_determined, encode
from .linalg import (Matrix, PosetDiagram, cokernel_projection, diagram_colimit,
                     diagrams_isomorphic, hstack, kernel_basis, poset_covers,
                     rank, solve)


@dataclass(frozen=True)
class BirthDeathReport:
    """Multiplicity of births and deaths per point; only non-zero entries listed."""

    births: dict
    deaths: dict


@dataclass(frozen=True)
class PresentationCheck:
    ok: bool
    point: Point | None = None
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Presentation:
    """Two-term graded presentation: relations -> generators -> module -> 0.

    Generators and relations are (point, multiplicity) pairs; ``blocks`` maps
    (relation point, generator point) to the corresponding coefficient block,
    of shape generator multiplicity by relation multiplicity.  A relation may
    only involve generators at points below it, so blocks outside the grading
    are not stored.
    """

    field: object
    dim: int
    generators: tuple
    relations: tuple
    blocks: dict

    def __post_init__(self):
        gen_mult = dict(self.generators)
        rel_mult = dict(self.relations)
        for pt, mult in list(self.generators) + list(self.relations):
            as_point(pt, dim=self.dim)
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
                raise InputError(f"multiplicity at {pt!r} must be a positive integer")
        for (d, b), block in self.blocks.items():
            if d not in rel_mult or b not in gen_mult:
                raise InputError(f"block ({d!r}, {b!r}) does not match a relation/generator pair")
            if not leq(b, d):
                raise InputError(f"block ({d!r}, {b!r}) violates the grading")
            if block.shape != (gen_mult[b], rel_mult[d]):
                raise InputError(f"block ({d!r}, {b!r}) has shape {block.shape}, expected "
                                 f"{(gen_mult[b], rel_mult[d])}")

    def block(self, d: Point, b: Point) -> Matrix:
        got = self.blocks.get((d, b))
        if got is not None:
            return got
        gen_mult = dict(self.generators)
        rel_mult = dict(self.relations)
        return Matrix.zeros(self.field, gen_mult[b], rel_mult[d])


def _colimit_with_quotient(sub: PosetDiagram):
    colim_dim, injections = diagram_colimit(sub)
    total = sum(sub.dims[p] for p in sub.points)
    quotient = hstack(sub.field, [injections[p] for p in sub.points], nrows=colim_dim) \
        if sub.points else Matrix.zeros(sub.field, colim_dim, total)
    return colim_dim, quotient


def predecessor_colimit_map(diagram: PosetDiagram, c: Point) -> Matrix:
    """Canonical map into c from the colimit over the strict downset of c.

    The downset is taken inside the diagram's own point set; when it is empty
    the map has a zero-dimensional source.  Failure to be surjective makes c
    a birth, failure to be injective a death.
    """
    if c not in diagram.dims:
        raise InputError(f"{c!r} is not a point of the diagram")
    below = [p for p in diagram.points if lt(p, c)]
    sub = diagram.restrict_downclosed(below)
    colim_dim, quotient = _colimit_with_quotient(sub)
    legs = [diagram.path_map(p, c) for p in sub.points]
    cone = hstack(diagram.field, legs, nrows=diagram.dims[c]) if legs \
        else Matrix.zeros(diagram.field, diagram.dims[c], 0)
    lam_t = solve(quotient.transpose(), cone.transpose())
    if lam_t is None:
        raise ConsistencyError("cone map does not factor through the colimit")
    return lam_t.transpose()


def diagram_births_deaths(diagram: PosetDiagram, points: Iterable[Point] | None = None
                          ) -> BirthDeathReport:
    """Births and deaths of a diagram, scanned over the given points (default all)."""
    scan = sort_points(points) if points is not None else list(diagram.points)
    births, deaths = {}, {}
    for c in scan:
        lam = predecessor_colimit_map(diagram, c)
        r = rank(lam)
        coker = lam.nrows - r
        ker = lam.ncols - r
        if coker > 0:
            births[c] = coker
        if ker > 0:
            deaths[c] = ker
    return BirthDeathReport(births, deaths)


def births_deaths(view: ExtendedView, s, margin: int = DEFAULT_MARGIN) -> BirthDeathReport:
    """Births and deaths of a determined module over its finite encoding."""
    enc = encode(view, s, margin=margin)
    return diagram_births_deaths(enc)


def _generator_lifts(lam: Matrix) -> Matrix:
    """Canonical representatives of a basis of the cokernel of ``lam``.

    The cokernel projection is in reduced echelon form, so the standard basis
    vectors at its pivot columns map exactly onto the standard basis of the
    cokernel; they are the lexicographically first choice.
    """
    q = cokernel_projection(lam)
    field = lam.field
    zero = field.zero
    pivots = []
    for row in q.rows:
        for j, x in enumerate(row):
            if x != zero:
                pivots.append(j)
                break
    columns = []
    for j in pivots:
        v = [zero] * lam.nrows
        v[j] = field.one
        columns.append(v)
    return Matrix.from_columns(field, columns, nrows=lam.nrows)


def build_presentation(view: ExtendedView, s, margin: int = DEFAULT_MARGIN) -> Presentation:
    """Construct a graded presentation of a determined module.

    Generators are lifts of cokernel bases of the predecessor colimit maps at
    births.  Scanning the encoding poset upward, the kernel of the evaluation
    map from the free module on all generators below a point, modulo kernels
    inherited from lower points, contributes that point's relations.
    """
    field = view.field
    enc = encode(view, s, margin=margin)
    lifts = {}
    generators = []
    for c in enc.points:
        lam = predecessor_colimit_map(enc, c)
        lift = _generator_lifts(lam)
        if lift.ncols > 0:
            lifts[c] = lift
            generators.append((c, lift.ncols))
    gen_points = [c for c, _ in generators]

    kernels = {}
    relations = []
    rel_vectors = {}
    for c in enc.points:
        active = [b for b in gen_points if leq(b, c)]
        blocks = [view.eval_map(b, c) @ lifts[b] for b in active]
        total = sum(lifts[b].ncols for b in active)
        ev = hstack(field, blocks, nrows=view.eval_space(c)) if blocks \
            else Matrix.zeros(field, view.eval_space(c), 0)
        ker = kernel_basis(ev)
        kernels[c] = (active, ker)

        inherited = []
        for p in enc.points:
            if lt(p, c):
                p_active, p_ker = kernels[p]
                embedded = _embed_rows(field, p_active, p_ker, active, lifts)
                inherited.extend(embedded.columns())
        base = Matrix.from_columns(field, inherited, nrows=total)
        base_rank = rank(base)
        chosen = []
        current = inherited[:]
        current_rank = base_rank
        for col in ker.columns():
            trial = Matrix.from_columns(field, current + [col], nrows=total)
            r = rank(trial)
            if r > current_rank:
                chosen.append(col)
                current.append(col)
                current_rank = r
        if chosen:
            relations.append((c, len(chosen)))
            rel_vectors[c] = (active, Matrix.from_columns(field, chosen, nrows=total))

    blocks = {}
    for d, (active, vectors) in rel_vectors.items():
        offset = 0
        for b in active:
            mult = lifts[b].ncols
            seg = Matrix(field, [vectors.rows[offset + i] for i in range(mult)],
                         ncols=vectors.ncols, _coerce=False)
            if not seg.is_zero():
                blocks[(d, b)] = seg
            offset += mult
    return Presentation(field, view.box.dim, tuple(generators), tuple(relations), blocks)


def _embed_rows(field, sub_points, mat: Matrix, full_points, lifts) -> Matrix:
    """Pad a generator-graded matrix from a smaller active set into a larger one."""
    rows = []
    offset = 0
    sub_offsets = {}
    for b in sub_points:
        sub_offsets[b] = offset
        offset += lifts[b].ncols
    for b in full_points:
        mult = lifts[b].ncols
        if b in sub_offsets:
            o = sub_offsets[b]
            rows.extend(mat.rows[o + i] for i in range(mult))
        else:
            rows.extend((field.zero,) * mat.ncols for _ in range(mult))
    return Matrix(field, rows, ncols=mat.ncols, _coerce=False)


def _free_complex_at(pres: Presentation, pt: Point):
    """Active generators/relations at a point and the induced block matrix."""
    gens = [(b, m) for b, m in pres.generators if leq(b, pt)]
    rels = [(d, m) for d, m in pres.relations if leq(d, pt)]
    nrows = sum(m for _, m in gens)
    blocks = []
    for d, dm in rels:
        col_block = []
        for b, bm in gens:
            col_block.append(pres.block(d, b))
        blocks.append(vstack_blocks(pres.field, col_block, dm))
    mat = hstack(pres.field, blocks, nrows=nrows) if blocks \
        else Matrix.zeros(pres.field, nrows, 0)
    return gens, rels, mat


def vstack_blocks(field, mats, ncols):
    rows = []
    for m in mats:
        rows.extend(m.rows)
    return Matrix(field, rows, ncols=ncols, _coerce=False)


def verify_presentation(view: ExtendedView, pres: Presentation,
                        test_points: Iterable[Point]) -> PresentationCheck:
    """Check exactness of a presentation against the module on test points.

    At each point the cokernel of the induced block matrix must have the
    module's dimension, and the induced maps between cokernels must agree
    with the module's structure maps up to a natural isomorphism.
    """
    if pres.field != view.field:
        raise InputError("presentation and module are over different fields")
    pts = sort_points(as_point(p, dim=view.box.dim) for p in test_points)
    if not pts:
        raise InputError("no test points given")
    field = view.field
    quotients = {}
    coker_dims = {}
    active_gens = {}
    for pt in pts:
        gens, _, mat = _free_complex_at(pres, pt)
        q = cokernel_projection(mat)
        quotients[pt] = q
        coker_dims[pt] = q.nrows
        active_gens[pt] = gens
        if q.nrows != view.eval_space(pt):
            return PresentationCheck(False, pt, f"cokernel dimension {q.nrows} differs from "
                                     f"module dimension {view.eval_space(pt)}")
    covers = poset_covers(pts)
    maps = {}
    for c, d in covers:
        incl = _generator_inclusion(field, active_gens[c], active_gens[d])
        rhs = quotients[d] @ incl
        mu_t = solve(quotients[c].transpose(), rhs.transpose())
        if mu_t is None:
            return PresentationCheck(False, d, "induced map does not descend to the cokernel")
        maps[(c, d)] = mu_t.transpose()
    candidate = PosetDiagram(field, pts, coker_dims, maps, covers=covers)
    target = restrict_view(view, pts)
    if not diagrams_isomorphic(candidate, target):
        return PresentationCheck(False, None, "structure maps do not match the module")
    return PresentationCheck(True)


def _generator_inclusion(field, gens_small, gens_large) -> Matrix:
    """Matrix of the free-module inclusion induced by enlarging the active set."""
    small_total = sum(m for _, m in gens_small)
    offsets = {}
    o = 0
    for b, m in gens_small:
        offsets[b] = o
        o += m
    rows = []
    for b, m in gens_large:
        for i in range(m):
            row = [field.zero] * small_total
            if b in offsets:
                row[offsets[b] + i] = field.one
            rows.append(row)
    return Matrix(field, rows, ncols=small_total, _coerce=False)


def _require_join_closed(l) -> list:
    pts = sort_points(l)
    if not pts:
        raise InputError("the lattice must be non-empty")
    if join_closure(pts) != frozenset(pts):
        raise InputError("the point set is not closed under joins")
    return pts


def zip_module(view: ExtendedView, l) -> PosetDiagram:
    """Restriction of the extended module to a join-closed point set."""
    pts = _require_join_closed(l)
    return view.restrict_diagram(pts)


def unzip_module(l, n: PosetDiagram) -> EncodedView:
    """Spread a diagram on a join-closed set back over the whole extended grid.

    The value at c is the diagram's value at the join of the lattice points
    below c, and zero when there are none; implemented by adjoining a
    zero-dimensional bottom and restricting along the collapse.
    """
    pts = _require_join_closed(l)
    if frozenset(n.points) != frozenset(pts):
        raise InputError("diagram points do not match the lattice")
    bottom = min_point(len(pts[0]))
    return EncodedView(n.with_bottom(bottom))


def is_admissible(module: GridModule, l, margin: int = DEFAULT_MARGIN) -> bool:
    """Does zipping then unzipping along the lattice reproduce the module?

    Computes both sides of the equivalence independently, the reconstruction
    comparison on the critical grid and the determinacy check with support,
    and insists that they agree before returning the shared verdict.
    """
    pts = _require_join_closed(l)
    view = ExtendedView(module)
    if len(pts[0]) != module.box.dim:
        raise InputError("lattice dimension mismatch")
    reconstructed = unzip_module(pts, zip_module(view, pts))
    grid = critical_grid(module.box, pts, margin=margin)
    via_unzip = diagrams_isomorphic(restrict_view(reconstructed, grid),
                                    restrict_view(view, grid))
    via_determinacy = is_S_determined(view, pts, check_support=True, margin=margin).determined
    if via_unzip != via_determinacy:
        raise ConsistencyError(f"admissibility checks disagree: reconstruction says "
                               f"{via_unzip}, determinacy says {via_determinacy}")
    return via_unzip

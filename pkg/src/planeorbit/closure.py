"""Zariski closure of an orbit of a finitely generated group acting on the plane.

The driver follows an eight-step decision procedure:

1. finite orbit?  (bounded breadth-first search, a semi-decision)
2. is the group conjugate into Aff or J?  if not, the closure is the plane
3. conjugate; split torsion / non-torsion generators (find an element of
   infinite order if needed)
4. a non-fibration generator: its invariant curves contain everything
5. two generators with different lattices: their common invariant curves
6. a shared affine fibration: descend to the line
7. a shared projective pencil: descend to the projective line
8. smallest invariant union of candidate curves through the point
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import asdict, dataclass, field as dc_field

from .amalgam import Verdict, conjugate_into_factor, factorize, inverse
from .errors import Inconclusive, PlaneOrbitError, PointOffVariety, PreconditionViolation
from .lattice import (
    Kind,
    Subvariety,
    affine_equivariant,
    classify,
    curve_image,
    equivalent_fibration,
    is_invariant,
    is_torsion,
    normalize_curve,
    projective_equivariant,
    span_intersection,
    support_intersection_dim1,
)
from .planeauto import PlaneAutomorphism, PlanePoint, apply, compose

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosureConfig:
    orbit_cap: int = 10000
    word_cap: int = 8
    multdep_bound: int = 64
    height_cap: int = 4096  # bit length of a coordinate before an orbit is declared infinite
    curve_orbit_cap: int = 512

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def to_json(self):
        return asdict(self)


@dataclass
class ClosureResult:
    closure: Subvariety
    certificate: list = dc_field(default_factory=list)
    caveats: list = dc_field(default_factory=list)
    config: ClosureConfig = dc_field(default_factory=ClosureConfig)

    @property
    def dimension(self) -> int:
        return self.closure.dimension

    def to_json(self, trace: bool = True):
        out = dict(self.closure.to_json())
        out["caveats"] = list(self.caveats)
        out["config"] = self.config.to_json()
        if trace:
            out["certificate"] = list(self.certificate)
        return out


# --- periodicity -----------------------------------------------------------------------

@dataclass(frozen=True)
class Periodicity:
    periodic: bool
    orbit: tuple = ()
    reason: str = ""  # why exploration stopped when not periodic

    def __bool__(self):
        return self.periodic


def _height(p: PlanePoint) -> int:
    h = 0
    for u in (p.x, p.y):
        for q in u.coeffs:
            h = max(h, q.numerator.bit_length(), q.denominator.bit_length())
    return h


def _bfs(start, step_fns, cap, too_big=None):
    seen = {start: None}
    queue = deque([start])
    while queue:
        q = queue.popleft()
        for fn in step_fns:
            r = fn(q)
            if r in seen:
                continue
            if len(seen) >= cap:
                return None, "cap"
            if too_big is not None and too_big(r):
                return None, "height"
            seen[r] = None
            queue.append(r)
    return list(seen), ""


def is_periodic(maps, p: PlanePoint, cap: int, height_cap: int | None = None,
                with_inverses: bool = True) -> Periodicity:
    """Breadth-first exploration of the orbit of p under the maps (and their inverses)."""
    if not maps:
        raise PreconditionViolation("need at least one map")
    maps = list(maps)
    if with_inverses:
        maps = maps + [inverse(g) for g in maps]
    fns = [lambda q, g=g: apply(g, q) for g in maps]
    too_big = None if height_cap is None else (lambda q: _height(q) > height_cap)
    orbit, reason = _bfs(p, fns, cap, too_big)
    if orbit is None:
        return Periodicity(False, (), reason)
    return Periodicity(True, tuple(orbit))


# --- dimension-one closures ------------------------------------------------------------

def _curve_orbit(f, pairs, cap):
    """Finite orbit of the curve V(f) under (g, g^-1) pairs, or None past cap."""
    f = normalize_curve(f)
    seen = {f: None}
    queue = deque([f])
    while queue:
        h = queue.popleft()
        for g, g_inv in pairs:
            for img in (curve_image(h, g_inv), curve_image(h, g)):
                if img not in seen:
                    if len(seen) >= cap:
                        return None
                    seen[img] = None
                    queue.append(img)
    return frozenset(seen)


def closure_in_union(components, gens, p: PlanePoint, cfg: ClosureConfig | None = None,
                     check_periodic: bool = True) -> Subvariety:
    """Orbit closure of p, given curves containing its 1-dimensional part.

    For every component c through p the union of the G-images of c is an
    invariant curve containing p when it is finite; the orbit closure is the
    smallest such union.  Returns the whole plane when none is finite.
    """
    cfg = cfg or ClosureConfig()
    gens = list(gens)
    through = [f for f in components if not f.is_constant() and not f.evaluate(p.x, p.y)]
    if not through:
        raise PointOffVariety(f"{p} lies on none of the components")
    if check_periodic:
        per = is_periodic(gens, p, cfg.orbit_cap, cfg.height_cap)
        if per:
            return Subvariety.build(points=per.orbit)
    pairs = [(g, inverse(g)) for g in gens]
    best = None
    for f in through:
        orbit = _curve_orbit(f, pairs, cfg.curve_orbit_cap)
        if orbit is None:
            continue
        if best is None or len(orbit) < len(best):
            best = orbit
    if best is None:
        return Subvariety.whole()
    return Subvariety.build(curves=best)


# --- searching for an element of infinite order ---------------------------------------------

@dataclass(frozen=True)
class WordSearch:
    element: PlaneAutomorphism | None
    word: tuple = ()
    closed: bool = False  # the generated group was enumerated completely (it is finite)
    elements: tuple = ()


def find_infinite_order_word(gens, word_cap: int, bound: int = 64) -> WordSearch:
    """Breadth-first search over products of generators for a non-torsion element."""
    gens = list(gens)
    K = gens[0].field
    ident = PlaneAutomorphism.identity(K)
    seen = {ident: ()}
    frontier = [ident]
    for depth in range(1, word_cap + 1):
        nxt = []
        for w in frontier:
            for i, g in enumerate(gens):
                m = compose(w, g)
                if m in seen:
                    continue
                seen[m] = seen[w] + (i,)
                if is_torsion(m, bound) is None:
                    return WordSearch(m, seen[m])
                nxt.append(m)
        if not nxt:
            return WordSearch(None, closed=True, elements=tuple(seen))
        frontier = nxt
    # one more layer decides whether the enumeration already closed up
    for w in frontier:
        for g in gens:
            if compose(w, g) not in seen:
                return WordSearch(None)
    return WordSearch(None, closed=True, elements=tuple(seen))


# --- the driver ------------------------------------------------------------------------------------

class _Done(Exception):
    def __init__(self, closure):
        self.closure = closure


def orbit_closure(gens, p: PlanePoint, cfg: ClosureConfig | None = None) -> ClosureResult:
    cfg = cfg or ClosureConfig()
    gens = list(gens)
    if not gens:
        raise PreconditionViolation("need at least one generator")
    run = _Run(gens, p, cfg)
    try:
        closure = run.execute()
    except PlaneOrbitError as e:
        if e.step is None:
            e.step = run.step
        raise
    return ClosureResult(closure, run.certificate, run.caveats, cfg)


class _Run:
    def __init__(self, gens, p, cfg):
        self.gens = gens
        self.p = p
        self.cfg = cfg
        self.certificate = []
        self.caveats = []
        self.step = None

    def note(self, step, **info):
        self.step = f"step {step}"
        entry = {"step": str(step)}
        entry.update(info)
        self.certificate.append(entry)
        log.debug("step %s: %s", step, info)

    def execute(self) -> Subvariety:
        for g in self.gens:
            factorize(g)  # certifies each generator
        try:
            return self._steps()
        except _Done as done:
            return done.closure

    # step 1-3 and the transport back to the input coordinates
    def _steps(self) -> Subvariety:
        cfg, p = self.cfg, self.p
        per = is_periodic(self.gens, p, cfg.orbit_cap, cfg.height_cap)
        if per:
            self.note(1, decision="finite orbit", size=len(per.orbit))
            return Subvariety.build(points=per.orbit)
        why = f"more than {cfg.orbit_cap} orbit points" if per.reason == "cap" else \
            f"an orbit point with coordinates above {cfg.height_cap} bits"
        self.caveats.append(f"orbit treated as infinite after exploring {why}")
        self.note(1, decision="orbit not shown finite", reason=per.reason)

        conj = conjugate_into_factor(self.gens)
        if conj.verdict is Verdict.NOT_CONJUGATE:
            self.note(2, decision="unbounded group", detail=conj.detail)
            return Subvariety.whole()
        c = conj.conjugator
        c_inv = inverse(c)
        self.note(2, decision=conj.verdict.value, conjugator=factorize(c).to_json())
        local = self._local(list(conj.conjugated_generators), apply(c_inv, p))
        return local.transport(c, c_inv)

    def _local(self, gs, q) -> Subvariety:
        cfg = self.cfg
        orders = [is_torsion(g, cfg.multdep_bound) for g in gs]
        nontorsion = [g for g, n in zip(gs, orders) if n is None]
        torsion = [g for g, n in zip(gs, orders) if n is not None]
        self.note(3, torsion_orders=[n for n in orders])
        if not nontorsion:
            search = find_infinite_order_word(gs, cfg.word_cap, cfg.multdep_bound)
            if search.element is not None:
                nontorsion = [search.element]
                self.note(3, decision="element of infinite order", word=list(search.word),
                          element=search.element.to_json())
            elif search.closed:
                orbit = {apply(g, q) for g in search.elements}
                self.note(3, decision="finite group", order=len(search.elements))
                self.caveats.clear()
                return Subvariety.build(points=orbit)
            else:
                raise Inconclusive(
                    f"no element of infinite order among words of length <= {cfg.word_cap}",
                    step="step 3",
                )
        descs = [classify(g, cfg.multdep_bound) for g in nontorsion]
        for d in descs:
            self.caveats.extend(c for c in d.caveats if c not in self.caveats)
        self.note(3, descriptors=[d.summary() for d in descs])

        # step 4
        for g, d in zip(nontorsion, descs):
            if d.kind is Kind.NON_FIBRATION:
                self.note(4, decision="non-fibration generator", curves=[str(f) for f in d.invariant_curves])
                return self._finish(list(d.invariant_curves), gs, q)

        # step 5
        for i in range(len(descs)):
            for j in range(i + 1, len(descs)):
                di, dj = descs[i], descs[j]
                if di.kind is not dj.kind or not equivalent_fibration(di, dj):
                    support = support_intersection_dim1(di, nontorsion[i], dj, nontorsion[j])
                    self.note(5, decision="distinct lattices", pair=[i, j],
                              support=[str(f) for f in support.curves])
                    return self._finish(list(support.curves), gs, q)

        if descs[0].kind is Kind.ORBIT_FIBRATION:
            return self._step6(gs, nontorsion, torsion, descs, q)
        return self._step7(gs, torsion, descs, q)

    def _finish(self, curves, gs, q) -> Subvariety:
        self.step = "step 8"
        through = [f for f in curves if not f.evaluate(q.x, q.y)]
        if not through:
            self.note(8, decision="point on no candidate curve")
            return Subvariety.whole()
        result = closure_in_union(curves, gs, q, self.cfg, check_periodic=False)
        if result.whole_plane:
            self.caveats.append("no finite invariant union of candidate curves contains the point")
        self.note(8, decision="smallest invariant union", curves=[str(f) for f in result.curves])
        return result

    def _step6(self, gs, nontorsion, torsion, descs, q) -> Subvariety:
        d1 = descs[0]
        pi = d1.pi_affine
        L1 = d1.transversal_curve
        Ls = [d.transversal_curve for d in descs]
        L = None
        if all(l is not None for l in Ls) and len({normalize_curve(l) for l in Ls}) == 1:
            L = L1
        for g in torsion:
            if affine_equivariant(pi, g) is None:
                if L1 is None:
                    self.note("6-1", decision="pi not equivariant and no transversal curve")
                    return Subvariety.whole()
                cands = [L1, curve_image(L1, inverse(g))]
                self.note("6-1", decision="pi not equivariant", candidates=[str(f) for f in cands])
                return self._finish(cands, gs, q)
        descents = [affine_equivariant(pi, g) for g in gs]
        if any(uv is None for uv in descents):  # pragma: no cover - equivalence guarantees this
            raise PreconditionViolation("shared fibration is not equivariant", step="step 6-2")
        fns = []
        for u, v in descents:
            fns.append(lambda t, u=u, v=v: u * t + v)
            fns.append(lambda t, u=u, v=v: (t - v) / u)
        t0 = pi.evaluate(q.x, q.y)
        orbit, reason = _bfs(t0, fns, self.cfg.orbit_cap)
        if orbit is not None:
            self.note("6-2", decision="periodic on the line", values=[str(t) for t in orbit])
            return self._finish([pi - t for t in orbit], gs, q)
        self.caveats.append(f"descended orbit treated as infinite after {self.cfg.orbit_cap} values")
        if L is not None and not L.evaluate(q.x, q.y) and all(is_invariant(g, Subvariety.build([L])) for g in gs):
            self.note("6-2", decision="transversal curve", curve=str(L))
            return Subvariety.build([L])
        self.note("6-2", decision="infinitely many fibers")
        return Subvariety.whole()

    def _step7(self, gs, torsion, descs, q) -> Subvariety:
        d1 = descs[0]
        num, den = d1.pi_projective
        base = None if d1.hyperbolic else d1.distinguished_point
        if base is not None:
            for g in torsion:
                if apply(g, base) != base:
                    pts = is_periodic([g], base, self.cfg.orbit_cap).orbit
                    cands = []
                    for r in pts:
                        if r != base:
                            cands.extend(d1.grouped_fiber_through(r))
                    self.note(7, decision="torsion generator moves the base point",
                              orbit=[r.to_json() for r in pts])
                    return self._finish(cands, gs, q)
        bad = [g for g in torsion if projective_equivariant(num, den, g) is None]
        if bad:
            xt, yt = d1.coords
            cands = [xt, yt]
            for g in bad:
                g_inv = inverse(g)
                cands.extend(curve_image(f, g_inv) for f in (xt, yt))
                cands.extend(curve_image(f, g) for f in (xt, yt))
                for h, h_inv in ((g, g_inv), (g_inv, g)):
                    moved = [h_inv.pullback(num), h_inv.pullback(den)]
                    for G in span_intersection(moved, [num, den]):
                        cands.extend(d1.fiber_components(G))
                        cands.extend(d1.fiber_components(h.pullback(G)))
            self.note("7-1", decision="pencil not equivariant", candidates=[str(f) for f in cands])
            return self._finish(cands, gs, q)
        mats = [projective_equivariant(num, den, g) for g in gs]
        K = q.field

        def normalize(t1, t2):
            return (t1 / t2, K.one) if t2 else (K.one, K.zero)

        fns = []
        for (a1, a2), (a3, a4) in mats:
            det = a1 * a4 - a2 * a3
            inv = ((a4 / det, -a2 / det), (-a3 / det, a1 / det))
            for (b1, b2), (b3, b4) in (((a1, a2), (a3, a4)), inv):
                fns.append(lambda t, b1=b1, b2=b2, b3=b3, b4=b4:
                           normalize(b1 * t[0] + b2 * t[1], b3 * t[0] + b4 * t[1]))
        t0 = normalize(num.evaluate(q.x, q.y), den.evaluate(q.x, q.y))
        orbit, reason = _bfs(t0, fns, self.cfg.orbit_cap)
        if orbit is None:
            self.caveats.append(f"descended orbit treated as infinite after {self.cfg.orbit_cap} values")
            self.note("7-2", decision="infinitely many fibers")
            return Subvariety.whole()
        cands = []
        for t1, t2 in orbit:
            cands.extend(d1.fiber_components(num.scale(t2) - den.scale(t1)))
        self.note("7-2", decision="periodic on the projective line",
                  values=[[str(a), str(b)] for a, b in orbit])
        return self._finish(cands, gs, q)

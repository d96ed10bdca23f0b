"""Newton polygon and the Newton-data invariants.

Everything here is exact: polygons are lower-left convex hulls of the Taylor
support plus the positive quadrant, the Newton distance d is the least alpha
with (alpha, alpha) on the polygon, and the height delta_0 is computed by the
adapted-coordinate iteration: while the coordinates are not adapted, shear
along the witness real root of the principal part and recompute.  For
rational input every witness root is rational (an irrational root drags its
conjugates onto the principal edge, forcing multiplicity <= d), so the whole
search stays in exact arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd

from .arith import BivariateFunction, BivariatePolynomial, format_rational
from .errors import FlatInput, IterationLimit, NonCompactFace


class FaceKind(Enum):
    VERTEX = "VERTEX"
    COMPACT_EDGE = "COMPACT_EDGE"
    UNBOUNDED_EDGE = "UNBOUNDED_EDGE"


VERTICAL_RAY = 0
HORIZONTAL_RAY = 1


@dataclass(frozen=True)
class FaceRef:
    kind: FaceKind
    index: int


@dataclass(frozen=True)
class Edge:
    """Compact edge between consecutive staircase vertices.

    (l1, l2) is the primitive inward normal; level = l1*j + l2*k on the edge.
    """

    start: tuple
    end: tuple
    l1: int
    l2: int
    level: int


class NewtonPolygon:
    """Gamma_+(f): vertices in staircase order plus compact edges and the two
    unbounded rays (vertical at the first vertex, horizontal at the last)."""

    def __init__(self, vertices, edges):
        self.vertices = list(vertices)
        self.edges = list(edges)
        # the polygon always owns both rays (it is stable under + R_+^2)
        self.has_vertical_ray = True
        self.has_horizontal_ray = True

    def __repr__(self):
        return "NewtonPolygon(vertices=%r)" % (self.vertices,)

    def contains(self, alpha, beta):
        """Membership test for a rational point."""
        v0 = self.vertices[0]
        vl = self.vertices[-1]
        if alpha < v0[0] or beta < vl[1]:
            return False
        for e in self.edges:
            if e.l1 * alpha + e.l2 * beta < e.level:
                return False
        return True

    def to_json_dict(self):
        return {
            "vertices": [[j, k] for j, k in self.vertices],
            "edges": [
                {
                    "start": list(e.start),
                    "end": list(e.end),
                    "normal": [e.l1, e.l2],
                    "level": e.level,
                }
                for e in self.edges
            ],
        }


def staircase_hull(points):
    """Vertices of the lower-left hull of ``points + R_+^2`` in staircase
    order (first coordinates strictly increasing, second strictly
    decreasing)."""
    best = {}
    for j, k in points:
        if j not in best or k < best[j]:
            best[j] = k
    stair = []
    min_k = None
    for j, k in sorted(best.items()):
        if min_k is None or k < min_k:
            stair.append((j, k))
            min_k = k
    hull = []
    for p in stair:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


@dataclass
class AdaptednessReport:
    principal_face: FaceRef
    d: Fraction
    adapted: bool
    clause: str
    # present when not adapted: the real root of f_P with multiplicity > d
    witness_root: Fraction | None = None
    witness_multiplicity: int | None = None
    witness_exponent: Fraction | None = None
    swapped: bool = False

    def to_json_dict(self):
        out = {
            "principal_face": {
                "kind": self.principal_face.kind.value,
                "index": self.principal_face.index,
            },
            "d": format_rational(self.d),
            "adapted": self.adapted,
            "clause": self.clause,
        }
        if not self.adapted:
            out["witness"] = {
                "root": format_rational(self.witness_root),
                "multiplicity": self.witness_multiplicity,
                "exponent": format_rational(self.witness_exponent),
                "swapped": self.swapped,
            }
        return out


def newton_polygon(f):
    """Lower-left convex hull of the Taylor support plus R_+^2.

    Flat terms are ignored by definition; a zero polynomial part raises
    FlatInput (the paper's Gamma_+(f) = empty set case).
    """
    if isinstance(f, BivariateFunction):
        f.require_nonflat()
        poly = f.polynomial
    else:
        poly = f
        if poly.is_zero():
            raise FlatInput("polynomial part is zero")
    hull = staircase_hull(poly.support())
    edges = []
    for a, b in zip(hull, hull[1:]):
        dj = b[0] - a[0]
        dk = a[1] - b[1]
        g = gcd(dj, dk)
        l1, l2 = dk // g, dj // g
        edges.append(Edge(a, b, l1, l2, l1 * a[0] + l2 * a[1]))
    return NewtonPolygon(hull, edges)


def newton_distance(np_):
    """Least alpha with (alpha, alpha) in the polygon; exact rational."""
    v0 = np_.vertices[0]
    vl = np_.vertices[-1]
    d = Fraction(max(v0[0], vl[1]))
    for e in np_.edges:
        d = max(d, Fraction(e.level, e.l1 + e.l2))
    return d


def kappa_part(f, np_, face):
    """Sum of the polynomial terms supported on a compact face."""
    poly = f.polynomial if isinstance(f, BivariateFunction) else f
    if face.kind is FaceKind.VERTEX:
        v = np_.vertices[face.index]
        return BivariatePolynomial({v: poly.terms[v]} if v in poly.terms else {})
    if face.kind is FaceKind.COMPACT_EDGE:
        e = np_.edges[face.index]
        terms = {}
        for (j, k), c in poly.terms.items():
            if e.l1 * j + e.l2 * k == e.level and e.start[0] <= j <= e.end[0]:
                terms[(j, k)] = c
        return BivariatePolynomial(terms)
    raise NonCompactFace("kappa part requires a compact face")


def principal_face(np_, d):
    """The unique minimal face of the polygon containing (d, d)."""
    for i, v in enumerate(np_.vertices):
        if Fraction(v[0]) == d and Fraction(v[1]) == d:
            return FaceRef(FaceKind.VERTEX, i)
    for i, e in enumerate(np_.edges):
        if e.l1 * d + e.l2 * d == e.level and Fraction(e.start[0]) < d < Fraction(e.end[0]):
            return FaceRef(FaceKind.COMPACT_EDGE, i)
    v0, vl = np_.vertices[0], np_.vertices[-1]
    if d == v0[0]:
        return FaceRef(FaceKind.UNBOUNDED_EDGE, VERTICAL_RAY)
    if d == vl[1]:
        return FaceRef(FaceKind.UNBOUNDED_EDGE, HORIZONTAL_RAY)
    raise AssertionError("(d, d) not on the polygon boundary")


def _multiple_real_nonzero_root(poly1d):
    """Exact test: does the univariate rational polynomial have a real
    nonzero root of multiplicity >= 2?  Decided by square-free decomposition
    plus real-root counting."""
    import sympy

    y = sympy.Symbol("y")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * y**k
        for k, c in enumerate(poly1d)
    )
    if expr == 0:
        return True  # identically zero on the restriction: degenerate
    _, factors = sympy.sqf_list(sympy.Poly(expr, y))
    for fac, mult in factors:
        if mult < 2:
            continue
        p = sympy.Poly(fac, y)
        # strip the root at zero; only nonzero real roots count
        n0 = 0
        coeffs = p.all_coeffs()[::-1]
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
            n0 += 1
        if not coeffs or len(coeffs) == 1:
            continue
        p = sympy.Poly(coeffs[::-1], y)
        if p.count_roots() > 0:
            return True
    return False


def _restrict_to_sigma(kpart, sigma):
    """One-variable restriction g(y) = f_kappa(sigma, y) as coefficient list."""
    degy = kpart.degree_y()
    out = [Fraction(0)] * (degy + 1)
    for (j, k), c in kpart.terms.items():
        out[k] += c * (sigma**j)
    return out


def degeneracy_report(f):
    """Convenience and R-nondegeneracy of the polynomial part.

    Convenient iff the polygon touches both coordinate axes.  The edge f_kappa
    is quasi-homogeneous, so a common zero of (f_kappa, grad f_kappa) on
    (R \\ 0)^2 exists iff f_kappa(+-1, y) has a multiple real nonzero root
    (Euler's identity reduces the gradient condition to a multiple root).
    """
    if isinstance(f, BivariateFunction):
        f.require_nonflat()
    np_ = newton_polygon(f)
    convenient = np_.vertices[0][0] == 0 and np_.vertices[-1][1] == 0
    nondegenerate = True
    for i in range(len(np_.edges)):
        kp = kappa_part(f, np_, FaceRef(FaceKind.COMPACT_EDGE, i))
        for sigma in (Fraction(1), Fraction(-1)):
            if _multiple_real_nonzero_root(_restrict_to_sigma(kp, sigma)):
                nondegenerate = False
                break
        if not nondegenerate:
            break
    return {"convenient": convenient, "r_nondegenerate": nondegenerate}


def _rational_real_roots_with_mult(coeffs):
    """(root, multiplicity) for the rational real roots of a rational
    univariate polynomial (irrational roots are reported via sympy count but
    only rational ones can drive the shear, see module docstring)."""
    import sympy

    y = sympy.Symbol("y")
    expr = sum(
        sympy.Rational(c.numerator, c.denominator) * y**k
        for k, c in enumerate(coeffs)
    )
    out = []
    irrational_real = []
    for fac, mult in sympy.factor_list(sympy.Poly(expr, y))[1]:
        if fac.degree() == 1:
            a1, a0 = fac.all_coeffs()
            root = Fraction(int(sympy.Rational(-a0, a1).p), int(sympy.Rational(-a0, a1).q))
            out.append((root, mult))
        elif fac.degree() >= 2 and fac.count_roots() > 0:
            irrational_real.append((fac, mult))
    return out, irrational_real


def is_adapted(f):
    """Adaptedness of the current coordinates.

    Vertex or unbounded principal face: adapted.  Compact-edge principal
    face: adapted iff mu_0 of the principal part is at most d.  When not
    adapted the report carries the witness real root of f_P whose
    multiplicity exceeds d (choosing the largest multiplicity, ties broken by
    the smaller root), together with the integer exponent ratio l2/l1 of the
    edge (after an x <-> y swap when l1 > l2).
    """
    if isinstance(f, BivariateFunction):
        f.require_nonflat()
        poly = f.polynomial
    else:
        poly = f
    np_ = newton_polygon(poly)
    d = newton_distance(np_)
    pf = principal_face(np_, d)
    if pf.kind is FaceKind.VERTEX:
        return AdaptednessReport(pf, d, True, "vertex")
    if pf.kind is FaceKind.UNBOUNDED_EDGE:
        return AdaptednessReport(pf, d, True, "unbounded")
    edge = np_.edges[pf.index]
    from .puiseux import mu0

    fP = kappa_part(poly, np_, pf)
    muP = mu0(BivariateFunction(fP))
    if isinstance(muP, tuple):
        muP = muP[1]  # conservative upper end of an unresolved range
    if Fraction(muP) <= d:
        return AdaptednessReport(pf, d, True, "edge-mu0")
    # not adapted: find the witness root on the +1 restriction, swapping so
    # that the branch exponent l2/l1 is an integer (Lemma 8.10 failure mode)
    swapped = False
    work = fP
    l1, l2 = edge.l1, edge.l2
    if l1 > l2:
        swapped = True
        work = fP.swap()
        l1, l2 = l2, l1
    theta = Fraction(l2, l1)
    assert theta.denominator == 1, "non-integer exponent ratio with mu0 > d"
    roots, irrational = _rational_real_roots_with_mult(
        _restrict_to_sigma(work, Fraction(1))
    )
    best = None
    for root, mult in roots:
        if root == 0 or Fraction(mult) <= d:
            continue
        if best is None or mult > best[1] or (mult == best[1] and root < best[0]):
            best = (root, mult)
    if best is None:
        # an irrational root of multiplicity > d cannot occur for rational
        # input (its conjugates would force d >= mult); treat as a defect
        raise AssertionError(
            "no rational witness root found; irrational candidates: %r" % irrational
        )
    return AdaptednessReport(
        pf,
        d,
        False,
        "edge-mu0",
        witness_root=best[0],
        witness_multiplicity=best[1],
        witness_exponent=theta,
        swapped=swapped,
    )


def _jet_candidates(branches):
    """Maximal real integer-exponent initial jets of the given branch
    expansions: the shears y -> y - psi(x) that can increase d.  Each jet is
    a tuple of (exponent, coefficient) pairs; the empty jet reproduces the
    original coordinates."""
    from .arith import RealStatus

    jets = [()]
    seen = set()
    for terms, _mult, _status in branches:
        jet = []
        for exp, coeff, status in terms:
            if exp.denominator != 1 or status is not RealStatus.REAL:
                break
            jet.append((exp, coeff))
        jet = tuple(jet)
        if not jet:
            continue
        key = tuple(
            (e, c) for e, c in jet if isinstance(c, Fraction)
        ) if all(isinstance(c, Fraction) for _e, c in jet) else None
        if key is not None:
            if key in seen:
                continue
            seen.add(key)
        jets.append(jet)
    return jets


def _contact_order(terms, jet):
    """ord_x(phi - psi) for a branch expansion phi and a jet psi; None means
    the branch *is* the (complete real unramified) jet, i.e. contact oo."""
    from .arith import coeff_is_nonzero, csub
    from .errors import PrecisionExhausted

    branch = {e: c for e, c, _s in terms}
    jpoly = {e: c for e, c in jet}
    exps = sorted(set(branch) | set(jpoly))
    for e in exps:
        a = branch.get(e, Fraction(0))
        b = jpoly.get(e, Fraction(0))
        diff = csub(a, b)
        if isinstance(diff, Fraction):
            if diff != 0:
                return e
        elif coeff_is_nonzero(diff):
            return e
        elif diff.rad > 1e-20:
            raise PrecisionExhausted(
                "contact order undecidable at exponent %s" % (e,)
            )
    return None


def _d_of_jet(m0, contacts):
    """Newton distance after the jet shear, from the Minkowski structure of
    the sheared polygon: d = max_w [m0 + sum_i m_i*min(w, o_i)] / (1 + w),
    the maximum running over the contact orders w = o_i (plus the w -> oo
    limit, which yields the straightened multiplicity)."""
    straightened = sum(m for o, m in contacts if o is None)
    best = Fraction(max(m0, straightened))
    for w, _m in contacts:
        if w is None:
            continue
        total = Fraction(m0)
        for o, m in contacts:
            if o is None or o >= w:
                total += m * w
            else:
                total += m * o
        best = max(best, total / (1 + w))
    return best


def height_delta0(f, max_iterations=32, T=None):
    """The height delta_0: supremum of d over smooth local coordinates.

    Computed exactly from Puiseux data: for each orientation (x <-> y swap
    and x -> -x flip) and each maximal real integer-exponent branch jet psi,
    the sheared Newton distance is

        d_psi = max_w [m0 + sum_i m_i min(w, o_i)] / (1 + w),

    with o_i the contact orders of the branches against psi; delta_0 is the
    overall maximum.  The empty jet gives d itself, so delta_0 >= d.  Shears
    by a single monomial (the textbook iteration) need not terminate when
    the optimal jet is an infinite real branch -- a smooth point already
    exhibits this -- which is why the jet limit is evaluated in closed form.
    """
    if isinstance(f, BivariateFunction):
        f.require_nonflat()
        poly = f.polynomial
    else:
        poly = f
        if poly.is_zero():
            raise FlatInput("polynomial part is zero")
    from .puiseux import expansions_with_mult

    if T is None:
        deg = poly.total_degree()
        T = max(40, deg * deg + 8)
    best = Fraction(0)
    for g in (poly, poly.negate_x(), poly.swap(), poly.swap().negate_x()):
        m0, branches = expansions_with_mult(g, T)
        for jet in _jet_candidates(branches):
            contacts = [
                (_contact_order(terms, jet), mult) for terms, mult, _s in branches
            ]
            best = max(best, _d_of_jet(m0, contacts))
    return best


def invariants_report(f):
    """Aggregate d, delta_0, mu_0, convenience, nondegeneracy, adaptedness."""
    from .puiseux import mu0

    if isinstance(f, BivariateFunction):
        fn = f
    else:
        fn = BivariateFunction(f)
    fn.require_nonflat()
    np_ = newton_polygon(fn)
    d = newton_distance(np_)
    rep = is_adapted(fn)
    deg = degeneracy_report(fn)
    mu = mu0(fn)
    out = {
        "newton_polygon": np_.to_json_dict(),
        "d": format_rational(d),
        "delta0": format_rational(height_delta0(fn)),
        "mu0": mu if not isinstance(mu, tuple) else {"lower": mu[0], "upper": mu[1]},
        "convenient": deg["convenient"],
        "nondegenerate": deg["r_nondegenerate"],
        "adapted": rep.to_json_dict(),
    }
    return out


def invariants_json(f):
    return json.dumps(invariants_report(f), indent=2)

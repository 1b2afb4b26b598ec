"""Levelwise-polynomial simplicial commutative algebras.

Each level is an ordinary polynomial algebra on weighted generators;
structure maps are algebra maps given on generators; a per-level relation
ideal is presented by finitely many weight-homogeneous generators and
closed under the simplicial operators lazily, one (level, weight) slice at
a time. Slices are finite-dimensional, so every computation here is exact
rational linear algebra.

This module houses the degreewise free functor, the left adjoint of
normalized chains with its multiplication relations, the shuffle product
on levels, unit-map certificates, connectivity of augmentation-ideal
powers, and the face-kernel ideal check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, TruncationError
from .cdga import FreeCDGA, GradedPolynomial, Monomial
from .linalg import (
    ChainComplex,
    GradedVectorSpace,
    Matrix,
    RowReducer,
    Vector,
    homology,
    kernel_basis,
    solve_columns,
    stack_vertical,
)
from .simplicial import (
    SimplicialVectorSpace,
    Surjection,
    compose_values,
    degeneracy_values,
    enumerate_shuffles,
    face_values,
    monotone_maps,
    surjections,
)

ZERO = Fraction(0)
ONE = Fraction(1)

#: Level element: polynomial over a level's generator indices, ordered tuples.
LevelPoly = dict[tuple[int, ...], Fraction]


def lp_zero() -> LevelPoly:
    return {}


def lp_unit() -> LevelPoly:
    return {(): ONE}


def lp_gen(i: int) -> LevelPoly:
    return {(i,): ONE}


def lp_add(p: LevelPoly, q: LevelPoly, scale: Fraction = ONE) -> LevelPoly:
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, ZERO) + scale * c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def lp_scale(p: LevelPoly, a: Fraction) -> LevelPoly:
    a = Fraction(a)
    return {m: a * c for m, c in p.items()} if a else {}


def lp_mul(p: LevelPoly, q: LevelPoly) -> LevelPoly:
    out: LevelPoly = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            m = tuple(sorted(ma + mb))
            s = out.get(m, ZERO) + ca * cb
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def lp_subst(p: LevelPoly, images: list[LevelPoly]) -> LevelPoly:
    """Apply the algebra map sending generator i to images[i]."""
    out: LevelPoly = {}
    for m, c in p.items():
        acc = lp_unit()
        for i in m:
            acc = lp_mul(acc, images[i])
            if not acc:
                break
        out = lp_add(out, acc, c)
    return out


@dataclass(frozen=True)
class _Slice:
    """One (level, weight) slice: the monomial basis of the free part, the
    reduced relation span, and coordinates for the quotient."""

    monomials: tuple[tuple[int, ...], ...]
    index: dict[tuple[int, ...], int]
    reducer: RowReducer
    qcols: tuple[int, ...]          # non-pivot monomial positions
    qpos: dict[int, int]            # monomial position -> quotient coordinate

    @property
    def free_dim(self) -> int:
        return len(self.monomials)

    @property
    def dim(self) -> int:
        return len(self.qcols)


@dataclass(frozen=True)
class NormalizedSlice:
    """The weight-w normalized chain complex of a simplicial algebra,
    with per-degree bases inside the quotient slices."""

    weight: int
    complex: ChainComplex
    bases: tuple[Matrix, ...]       # columns: normalized basis in quotient coords


class SimplicialPolynomialAlgebra:
    """Simplicial algebra with polynomial levels, truncated at level
    ``top`` and inspected up to weight ``max_weight``.

    ``face_images[n][i][g]`` and ``degeneracy_images[n][j][g]`` are the
    images of generator g as level polynomials; ``base_relations`` is a
    list of (level, weight-homogeneous polynomial) generating the
    simplicial relation ideal. Instances are immutable; the slice caches
    are pure memo tables.
    """

    def __init__(self, top: int, max_weight: int,
                 gen_labels: list[list[str]],
                 gen_weights: list[list[int]],
                 face_images, degeneracy_images,
                 base_relations: list[tuple[int, LevelPoly]] | None = None,
                 legends: list[list[str]] | None = None):
        self.top = top
        self.max_weight = max_weight
        self.gen_labels = [list(l) for l in gen_labels]
        self.gen_weights = [list(w) for w in gen_weights]
        self.legends = [list(l) for l in legends] if legends else self.gen_labels
        self.face_images = face_images
        self.degeneracy_images = degeneracy_images
        self.base_relations = list(base_relations or [])
        for n, ws in enumerate(self.gen_weights):
            if any(w < 1 for w in ws):
                raise PreconditionError(f"level {n} has a generator of weight < 1")
        for lvl, rel in self.base_relations:
            if rel and len({self.monomial_weight(lvl, m) for m in rel}) > 1:
                raise PreconditionError("relation generator is not weight-homogeneous")
        self._slices: dict[tuple[int, int], _Slice] = {}
        self._instances: dict[int, list[tuple[int, LevelPoly]]] = {}
        self._face_mats: dict[tuple[int, int, int], Matrix] = {}
        self._normalized: dict[int, NormalizedSlice] = {}

    # -- generalities ---------------------------------------------------------

    def n_gens(self, n: int) -> int:
        return len(self.gen_labels[n])

    def monomial_weight(self, n: int, m: tuple[int, ...]) -> int:
        ws = self.gen_weights[n]
        return sum(ws[i] for i in m)

    def is_reduced(self) -> bool:
        return self.n_gens(0) == 0

    # -- structure maps -------------------------------------------------------

    def apply_face(self, n: int, i: int, p: LevelPoly) -> LevelPoly:
        if not (1 <= n <= self.top and 0 <= i <= n):
            raise PreconditionError(f"no face d_{i} at level {n}")
        return lp_subst(p, self.face_images[n][i])

    def apply_degeneracy(self, n: int, j: int, p: LevelPoly) -> LevelPoly:
        if not (0 <= n <= self.top - 1 and 0 <= j <= n):
            raise PreconditionError(f"no degeneracy s_{j} at level {n}")
        return lp_subst(p, self.degeneracy_images[n][j])

    def apply_operator(self, from_level: int, values: tuple[int, ...], p: LevelPoly) -> LevelPoly:
        """Apply the operator of the monotone map values: [n] -> [from_level]
        to a level ``from_level`` element; result lives at level n.

        The epi-mono factorization is applied as faces for the missing
        indices (largest first) followed by degeneracies for the repeat
        indices (smallest first)."""
        n = len(values) - 1
        cur = p
        cur_level = from_level
        missing = sorted(set(range(from_level + 1)) - set(values), reverse=True)
        for idx in missing:
            cur = self.apply_face(cur_level, idx, cur)
            cur_level -= 1
        repeats = [t for t in range(n) if values[t] == values[t + 1]]
        for r in sorted(repeats):
            cur = self.apply_degeneracy(cur_level, r, cur)
            cur_level += 1
        if cur_level != n:
            raise PreconditionError("operator application lost track of levels")
        return cur

    # -- slices ----------------------------------------------------------------

    def _slice_monomials(self, n: int, w: int) -> list[tuple[int, ...]]:
        wts = self.gen_weights[n]
        out: list[tuple[int, ...]] = []

        def rec(i: int, rem: int, acc: list[int]):
            if rem == 0:
                out.append(tuple(acc))
                return
            if i == len(wts):
                return
            for e in range(rem // wts[i] + 1):
                rec(i + 1, rem - e * wts[i], acc + [i] * e)

        rec(0, w, [])
        out.sort()
        return out

    def _relation_instances(self, n: int) -> list[tuple[int, LevelPoly]]:
        """All simplicial-operator images of the base relations at level n,
        tagged with their weight."""
        if n in self._instances:
            return self._instances[n]
        found: list[tuple[int, LevelPoly]] = []
        for lvl, rel in self.base_relations:
            if not rel:
                continue
            for values in monotone_maps(n, lvl):
                img = self.apply_operator(lvl, values, rel)
                if img:
                    w = self.monomial_weight(n, next(iter(img)))
                    found.append((w, img))
        self._instances[n] = found
        return found

    def slice(self, n: int, w: int) -> _Slice:
        if not (0 <= n <= self.top and 0 <= w):
            raise PreconditionError("slice outside truncation")
        key = (n, w)
        if key in self._slices:
            return self._slices[key]
        monos = self._slice_monomials(n, w)
        index = {m: i for i, m in enumerate(monos)}
        red = RowReducer()
        if self.base_relations:
            for wr, rel in self._relation_instances(n):
                if wr > w:
                    continue
                for mult in self._slice_monomials(n, w - wr):
                    prod = lp_mul({mult: ONE}, rel)
                    red.insert({index[m]: c for m, c in prod.items()})
        pivots = set(red.pivot_columns())
        qcols = tuple(i for i in range(len(monos)) if i not in pivots)
        qpos = {c: i for i, c in enumerate(qcols)}
        sl = _Slice(tuple(monos), index, red, qcols, qpos)
        self._slices[key] = sl
        return sl

    def quotient_dimension(self, n: int, w: int) -> int:
        return self.slice(n, w).dim

    def quotient_basis(self, n: int, w: int) -> list[tuple[int, ...]]:
        sl = self.slice(n, w)
        return [sl.monomials[c] for c in sl.qcols]

    def project(self, n: int, w: int, p: LevelPoly) -> Vector:
        """Quotient coordinates of a weight-homogeneous level element."""
        sl = self.slice(n, w)
        vec: Vector = {}
        for m, c in p.items():
            if self.monomial_weight(n, m) != w:
                raise PreconditionError("element is not homogeneous of the slice weight")
            vec[sl.index[m]] = c
        res = sl.reducer.residual(vec)
        return {sl.qpos[i]: c for i, c in res.items()}

    def face_matrix(self, n: int, i: int, w: int) -> Matrix:
        """d_i on quotient coordinates, (n, w) -> (n-1, w)."""
        key = (n, i, w)
        if key in self._face_mats:
            return self._face_mats[key]
        sl = self.slice(n, w)
        tgt = self.slice(n - 1, w)
        entries = {}
        for col, pos in enumerate(sl.qcols):
            img = self.apply_face(n, i, {sl.monomials[pos]: ONE})
            for r, c in self.project(n - 1, w, img).items():
                entries[(r, col)] = c
        mat = Matrix(tgt.dim, sl.dim, entries)
        self._face_mats[key] = mat
        return mat

    # -- homotopy ---------------------------------------------------------------

    def normalized_weight_complex(self, w: int) -> NormalizedSlice:
        """Weight-w slice of the normalized chains: joint kernels of the
        faces d_1..d_k in the quotient, with d_0 as differential."""
        if w in self._normalized:
            return self._normalized[w]
        bases: list[Matrix] = []
        dims: list[int] = []
        for k in range(self.top + 1):
            qdim = self.quotient_dimension(k, w)
            if k == 0:
                bases.append(Matrix.identity(qdim))
                dims.append(qdim)
                continue
            if qdim == 0:
                bases.append(Matrix.zero(0, 0))
                dims.append(0)
                continue
            stacked = stack_vertical([self.face_matrix(k, i, w) for i in range(1, k + 1)])
            cols = kernel_basis(stacked)
            bases.append(Matrix.from_columns(cols, qdim))
            dims.append(len(cols))
        diffs = []
        for k in range(1, self.top + 1):
            inside = self.face_matrix(k, 0, w) * bases[k]
            diffs.append(solve_columns(bases[k - 1], inside))
        cx = ChainComplex(GradedVectorSpace(tuple(dims)), tuple(diffs))
        ns = NormalizedSlice(w, cx, tuple(bases))
        self._normalized[w] = ns
        return ns

    def moore_pi(self, k: int, w: int) -> int:
        """Homotopy by the kernel-intersection formula, computed in the
        quotient slices and independently of the normalized complex."""
        if not 0 <= k <= self.top - 1:
            raise PreconditionError(f"degree {k} outside 0..{self.top - 1}")
        qdim = self.quotient_dimension(k, w)
        if qdim == 0:
            return 0
        if k == 0:
            numerator = [{j: ONE} for j in range(qdim)]
        else:
            stacked = stack_vertical([self.face_matrix(k, i, w) for i in range(0, k + 1)])
            numerator = kernel_basis(stacked)
        red = RowReducer()
        if self.quotient_dimension(k + 1, w):
            up = stack_vertical([self.face_matrix(k + 1, i, w) for i in range(1, k + 2)])
            d0 = self.face_matrix(k + 1, 0, w)
            for z in kernel_basis(up):
                red.insert(d0.apply(z))
        base = red.rank
        for z in numerator:
            red.insert(z)
        return red.rank - base

    # -- shuffle product ----------------------------------------------------------

    def ez(self, x: LevelPoly, p: int, y: LevelPoly, q: int) -> LevelPoly:
        """Shuffle product of a level-p and a level-q element, landing at
        level p+q: the signed sum over (p,q)-shuffles of products of
        degeneracy spreads."""
        if p + q > self.top:
            raise TruncationError("shuffle product exceeds the level truncation")
        out = lp_zero()
        for sh in enumerate_shuffles(p, q):
            xs = x
            lvl = p
            for r in sh.q_set:
                xs = self.apply_degeneracy(lvl, r, xs)
                lvl += 1
            ys = y
            lvl = q
            for r in sh.p_set:
                ys = self.apply_degeneracy(lvl, r, ys)
                lvl += 1
            out = lp_add(out, lp_mul(xs, ys), Fraction(sh.sign))
        return out

    # -- filtration subspaces -------------------------------------------------------

    def power_span(self, n: int, w: int, power: int) -> Matrix:
        """Basis (columns, quotient coordinates) of the span of classes of
        monomials of word length >= power."""
        sl = self.slice(n, w)
        red = RowReducer()
        cols = []
        for m in sl.monomials:
            if len(m) >= power:
                v = self.project(n, w, {m: ONE})
                if red.insert(v):
                    cols.append(v)
        return Matrix.from_columns(cols, sl.dim)

    def pi_of_power(self, k: int, w: int, power: int) -> int:
        """Moore homotopy of the simplicial subspace spanned by classes of
        words of length >= power."""
        if not 0 <= k <= self.top - 1:
            raise PreconditionError(f"degree {k} outside 0..{self.top - 1}")
        bk = self.power_span(k, w, power)
        if bk.cols == 0:
            return 0
        stacked = stack_vertical([self.face_matrix(k, i, w) * bk for i in range(0, k + 1)]) \
            if k >= 1 else None
        if k == 0:
            numerator = [{j: ONE} for j in range(bk.cols)]
        else:
            numerator = kernel_basis(stacked)
        red = RowReducer()
        bk1 = self.power_span(k + 1, w, power)
        if bk1.cols:
            up = stack_vertical([self.face_matrix(k + 1, i, w) * bk1 for i in range(1, k + 2)])
            d0 = self.face_matrix(k + 1, 0, w) * bk1
            for z in kernel_basis(up):
                red.insert(d0.apply(z))
        base = red.rank
        for z in numerator:
            red.insert(bk.apply(z))
        # numerator vectors are in subspace coordinates; compare inside the
        # ambient quotient coordinates so the boundary span is compatible
        return red.rank - base

    def normalized_power_dim(self, k: int, w: int, power: int) -> int:
        """Dimension of (normalized chains) intersected with the span of
        length >= power words."""
        b = self.power_span(k, w, power)
        if b.cols == 0:
            return 0
        if k == 0:
            return b.cols
        stacked = stack_vertical([self.face_matrix(k, i, w) * b for i in range(1, k + 1)])
        return len(kernel_basis(stacked))

    def indecomposables_dimension(self, k: int, w: int) -> int:
        """dim of the degree-k, weight-w layer of (normalized chains of the
        augmentation ideal) modulo (normalized chains of its square), the
        word-length graded piece seen by the normalized chains functor."""
        if w < 1:
            return 0
        full = self.normalized_weight_complex(w).complex.dims[k]
        return full - self.normalized_power_dim(k, w, 2)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def free_simplicial_algebra(space: SimplicialVectorSpace, max_weight: int,
                            labels: list[list[str]] | None = None,
                            weights: list[list[int]] | None = None) -> SimplicialPolynomialAlgebra:
    """Degreewise polynomial algebra on a simplicial vector space: level n
    is the polynomial algebra on a basis of level n, structure maps are the
    multiplicative extensions of the linear ones, and there are no
    relations."""
    top = space.top
    labels = labels or [
        [f"g{n}_{b}" for b in range(space.dims[n])] for n in range(top + 1)
    ]
    weights = weights or [[1] * space.dims[n] for n in range(top + 1)]

    def linear_images(mat: Matrix) -> list[LevelPoly]:
        cols: list[LevelPoly] = [dict() for _ in range(mat.cols)]
        for (r, c), x in mat.entries.items():
            cols[c][(r,)] = x
        return cols

    face_images = {
        n: [linear_images(space.face(n, i)) for i in range(n + 1)]
        for n in range(1, top + 1)
    }
    degeneracy_images = {
        n: [linear_images(space.degeneracy(n, j)) for j in range(n + 1)]
        for n in range(0, top)
    }
    return SimplicialPolynomialAlgebra(
        top, max_weight, labels, weights, face_images, degeneracy_images, []
    )


class QAlgebra(SimplicialPolynomialAlgebra):
    """The left-adjoint image of a semifree DG algebra: the degreewise free
    algebra on the rebuilt simplicial vector space of the augmentation
    ideal, modulo the multiplication relations between shuffle products and
    rebuilt products."""

    def __init__(self, source: FreeCDGA, top: int, max_weight: int):
        if not source.weighted:
            raise PreconditionError("the left adjoint needs a weight-graded algebra")
        self.source = source
        self.gen_info: list[list[tuple[Monomial, Surjection]]] = []
        monomials_by_degree: dict[int, list[Monomial]] = {}
        for k in range(top + 1):
            ms: list[Monomial] = []
            for w in range(1, max_weight + 1):
                ms.extend(m for m in source.basis(k, w) if m)
            ms.sort(key=lambda m: (source.monomial_weight(m), m))
            monomials_by_degree[k] = ms
        gen_labels, gen_weights, legends = [], [], []
        index: list[dict[tuple[Monomial, tuple[int, ...]], int]] = []
        for n in range(top + 1):
            info: list[tuple[Monomial, Surjection]] = []
            for k in range(n + 1):
                for m in monomials_by_degree[k]:
                    for s in surjections(n, k):
                        info.append((m, s))
            info.sort(key=lambda t: (t[0], t[1].target, t[1].repeats))
            self.gen_info.append(info)
            gen_labels.append([f"q{n}_{i}" for i in range(len(info))])
            legends.append([_q_legend(m, s) for (m, s) in info])
            gen_weights.append([source.monomial_weight(m) for (m, _) in info])
            index.append({(m, s.repeats): i for i, (m, s) in enumerate(info)})
        self._gen_index = index

        def action(n_from: int, values: tuple[int, ...]) -> list[LevelPoly]:
            n_to = len(values) - 1
            images: list[LevelPoly] = []
            for (m, s) in self.gen_info[n_from]:
                composite = compose_values(s.values(), values)
                image = sorted(set(composite))
                k = s.target
                pos = {v: t for t, v in enumerate(image)}
                epi = tuple(pos[v] for v in composite)
                if len(image) == k + 1:
                    rep = tuple(t for t in range(n_to) if epi[t] == epi[t + 1])
                    images.append(lp_gen(index[n_to][(m, rep)]))
                elif len(image) == k and image == list(range(1, k + 1)):
                    dm = source.d(GradedPolynomial({m: ONE}))
                    rep = tuple(t for t in range(n_to) if epi[t] == epi[t + 1])
                    img: LevelPoly = {}
                    for mm, c in dm.terms.items():
                        img = lp_add(img, lp_gen(index[n_to][(mm, rep)]), c)
                    images.append(img)
                else:
                    images.append(lp_zero())
            return images

        face_images = {
            n: [action(n, face_values(n, i)) for i in range(n + 1)]
            for n in range(1, top + 1)
        }
        degeneracy_images = {
            n: [action(n, degeneracy_values(n, j)) for j in range(n + 1)]
            for n in range(0, top)
        }
        super().__init__(top, max_weight, gen_labels, gen_weights,
                         face_images, degeneracy_images, [], legends)
        self.base_relations = self._multiplication_relations()
        self._instances.clear()
        self._slices.clear()

    def gamma_generator(self, m: Monomial) -> tuple[int, int]:
        """(level, generator index) of the identity-surjection copy of an
        algebra monomial."""
        k = self.source.monomial_degree(m)
        return k, self._gen_index[k][(m, ())]

    def _multiplication_relations(self) -> list[tuple[int, LevelPoly]]:
        src = self.source
        rels: list[tuple[int, LevelPoly]] = []
        monos: list[Monomial] = []
        for k in range(self.top + 1):
            for w in range(1, self.max_weight + 1):
                monos.extend(m for m in src.basis(k, w) if m)
        monos.sort(key=lambda m: (src.monomial_degree(m), src.monomial_weight(m), m))
        for a, x in enumerate(monos):
            for y in monos[a:]:
                p = src.monomial_degree(x)
                q = src.monomial_degree(y)
                if p + q > self.top:
                    continue
                if src.monomial_weight(x) + src.monomial_weight(y) > self.max_weight:
                    continue
                shuffle_part = lp_zero()
                for sh in enumerate_shuffles(p, q):
                    gx = lp_gen(self._spread_index(x, p, sh.q_set))
                    gy = lp_gen(self._spread_index(y, q, sh.p_set))
                    shuffle_part = lp_add(shuffle_part, lp_mul(gx, gy), Fraction(sh.sign))
                prod = src.mul(GradedPolynomial({x: ONE}), GradedPolynomial({y: ONE}))
                gamma_part = lp_zero()
                for mm, c in prod.terms.items():
                    gamma_part = lp_add(
                        gamma_part, lp_gen(self._gen_index[p + q][(mm, ())]), c
                    )
                rel = lp_add(shuffle_part, gamma_part, Fraction(-1))
                if rel:
                    rels.append((p + q, rel))
        return rels

    def _spread_index(self, m: Monomial, level: int, degen_indices: tuple[int, ...]) -> int:
        """Generator index of the monomial spread by the ascending run of
        degeneracies with the given indices."""
        vals = tuple(range(level + 1))
        lvl = level
        for r in sorted(degen_indices):
            vals = compose_values(vals, degeneracy_values(lvl, r))
            lvl += 1
        rep = tuple(t for t in range(lvl) if vals[t] == vals[t + 1])
        return self._gen_index[lvl][(m, rep)]


def _q_legend(m: Monomial, s: Surjection) -> str:
    mono = "*".join(
        f"{name}^{c}" if c > 1 else name
        for name, c in _run_length(m)
    )
    if s.is_identity():
        return f"G[{mono}]"
    return f"G[{mono}]*s{list(s.repeats)}"


def _run_length(m: Monomial) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for f in m:
        if out and out[-1][0] == f:
            out[-1] = (f, out[-1][1] + 1)
        else:
            out.append((f, 1))
    return out


def q_functor(source: FreeCDGA, top: int, max_weight: int) -> QAlgebra:
    """The left adjoint of normalized chains on a weight-graded semifree
    algebra, materialized through the given level and weight bounds."""
    return QAlgebra(source, top, max_weight)


# ---------------------------------------------------------------------------
# the unit of the adjunction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitMapCertificate:
    """Machine-checkable record that the unit map into the normalized
    chains of the left-adjoint image is a quasi-isomorphism through the
    recorded bounds.

    ``matrices[(k, w)]`` is the unit in quotient coordinates;
    ``rows`` lists (degree, weight, dim H source, dim H target, induced
    rank) for degrees <= top-1 and weights <= max_weight.
    """

    top: int
    max_weight: int
    matrices: dict[tuple[int, int], Matrix]
    rows: tuple[tuple[int, int, int, int, int], ...]
    verdict: bool


def beta(source: FreeCDGA, top: int, max_weight: int,
         q_algebra: QAlgebra | None = None) -> UnitMapCertificate:
    """Certify the unit map on a weight-graded semifree algebra.

    Sends a basis monomial to the class of its identity-surjection copy,
    verifies the chain-map property exactly in every stored bidegree, and
    compares homology through degree top-1 and weight max_weight. A
    chain-map failure signals an implementation fault and raises."""
    qa = q_algebra if q_algebra is not None else q_functor(source, top, max_weight)
    matrices: dict[tuple[int, int], Matrix] = {}
    for w in range(max_weight + 1):
        for k in range(top + 1):
            basis = source.basis(k, w)
            entries = {}
            for col, m in enumerate(basis):
                if not m:
                    # the unit goes to the unit: class of the empty monomial
                    vec = qa.project(k, w, lp_unit())
                else:
                    lvl, gi = qa.gamma_generator(m)
                    assert lvl == k
                    vec = qa.project(k, w, lp_gen(gi))
                for r, c in vec.items():
                    entries[(r, col)] = c
            matrices[(k, w)] = Matrix(qa.quotient_dimension(k, w), len(basis), entries)
    # exact chain-map property: d_0 o beta = beta o d
    for w in range(max_weight + 1):
        cx = source.weight_complex(w)
        for k in range(1, top + 1):
            if k > cx.top:
                continue
            lhs = qa.face_matrix(k, 0, w) * matrices[(k, w)]
            rhs = matrices[(k - 1, w)] * cx.boundary(k)
            if lhs != rhs:
                raise PreconditionError(
                    f"unit map fails to commute with differentials at degree {k}, weight {w}"
                )
    rows = []
    verdict = True
    for w in range(max_weight + 1):
        src_cx = source.weight_complex(w)
        ns = qa.normalized_weight_complex(w)
        for k in range(top):
            h_src = src_cx and (homology(src_cx, k) if k <= src_cx.top else None)
            dim_src = h_src.dimension if h_src else 0
            h_tgt = homology(ns.complex, k)
            red = RowReducer()
            if k + 1 <= ns.complex.top:
                for col in ns.complex.boundary(k + 1).columns():
                    red.insert(col)
            base = red.rank
            if h_src:
                for rep in h_src.representative_vectors():
                    img = matrices[(k, w)].apply(rep)
                    red.insert(solve_to_basis(ns.bases[k], img))
            induced = red.rank - base
            rows.append((k, w, dim_src, h_tgt.dimension, induced))
            if not (dim_src == h_tgt.dimension == induced):
                verdict = False
    return UnitMapCertificate(top, max_weight, matrices, tuple(rows), verdict)


def solve_to_basis(basis: Matrix, vec: Vector) -> Vector:
    """Coordinates of a vector in the span of the basis columns."""
    target = Matrix(basis.rows, 1, {(r, 0): c for r, c in vec.items()})
    sol = solve_columns(basis, target)
    return {r: c for (r, _), c in sol.entries.items()}


# ---------------------------------------------------------------------------
# the adjunction bijection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InducedAlgebraMap:
    """An algebra map out of a left-adjoint image, presented by generator
    images and per-(level, weight) quotient matrices."""

    generator_images: tuple[tuple[LevelPoly, ...], ...]
    matrices: dict[tuple[int, int], Matrix]


def induced_theta(qa: QAlgebra, target: SimplicialPolynomialAlgebra,
                  phi: dict[Monomial, LevelPoly]) -> InducedAlgebraMap:
    """Build the algebra map matching a chain map into normalized chains.

    ``phi`` assigns to every source basis monomial (degree k, weight <= the
    shared bound) a level-k element of the target whose class is
    normalized. Checks, exactly: homogeneity, normalization, the chain-map
    identity against d_0, and multiplicativity of the shuffle product
    against rebuilt products (the relation generators must die). The
    resulting map sends a generator copy along a surjection to that
    surjection's degeneracy image."""
    src = qa.source
    if target.top < qa.top or target.max_weight < qa.max_weight:
        raise PreconditionError("target bounds too small for the requested map")
    monos: list[Monomial] = []
    for k in range(qa.top + 1):
        for w in range(1, qa.max_weight + 1):
            monos.extend(m for m in src.basis(k, w) if m)
    for m in monos:
        if m not in phi:
            raise PreconditionError(f"no image supplied for basis monomial {m}")
    # homogeneity, normalization, chain map
    for m in monos:
        k = src.monomial_degree(m)
        w = src.monomial_weight(m)
        img = phi[m]
        for mm in img:
            if target.monomial_weight(k, mm) != w:
                raise PreconditionError(f"image of {m} is not weight-homogeneous")
        for i in range(1, k + 1):
            if target.project(k - 1, w, target.apply_face(k, i, img)):
                raise PreconditionError(f"image of {m} is not normalized (face {i})")
        if k >= 1:
            lhs = target.apply_face(k, 0, img)
            rhs: LevelPoly = {}
            for mm, c in src.d(GradedPolynomial({m: ONE})).terms.items():
                rhs = lp_add(rhs, phi[mm], c)
            if target.project(k - 1, w, lp_add(lhs, rhs, Fraction(-1))):
                raise PreconditionError(f"chain-map identity fails on {m}")
    # multiplicativity: the relation generators must be annihilated
    for a, x in enumerate(monos):
        for y in monos[a:]:
            p = src.monomial_degree(x)
            q = src.monomial_degree(y)
            wxy = src.monomial_weight(x) + src.monomial_weight(y)
            if p + q > qa.top or wxy > qa.max_weight:
                continue
            lhs = target.ez(phi[x], p, phi[y], q)
            rhs: LevelPoly = {}
            for mm, c in src.mul(GradedPolynomial({x: ONE}), GradedPolynomial({y: ONE})).terms.items():
                rhs = lp_add(rhs, phi[mm], c)
            if target.project(p + q, wxy, lp_add(lhs, rhs, Fraction(-1))):
                raise PreconditionError(
                    f"images are not multiplicative on ({x}, {y}); relations not annihilated"
                )
    # generator images: spread phi along each surjection
    gen_images: list[list[LevelPoly]] = []
    for n in range(qa.top + 1):
        imgs = []
        for (m, s) in qa.gen_info[n]:
            imgs.append(target.apply_operator(s.target, s.values(), phi[m]))
        gen_images.append(imgs)
    matrices: dict[tuple[int, int], Matrix] = {}
    for n in range(qa.top + 1):
        for w in range(qa.max_weight + 1):
            sl_dim = qa.quotient_dimension(n, w)
            entries = {}
            for col, mono in enumerate(qa.quotient_basis(n, w)):
                img = lp_unit()
                for gi in mono:
                    img = lp_mul(img, gen_images[n][gi])
                for r, c in target.project(n, w, img).items():
                    entries[(r, col)] = c
            matrices[(n, w)] = Matrix(target.quotient_dimension(n, w), sl_dim, entries)
    return InducedAlgebraMap(
        tuple(tuple(g) for g in gen_images), matrices
    )


# ---------------------------------------------------------------------------
# connectivity of augmentation-ideal powers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectivityReport:
    power: int
    rows: tuple[tuple[int, int, int], ...]  # (degree, weight, homotopy dim)
    verdict: bool


def connectivity_check(algebra: SimplicialPolynomialAlgebra, power: int,
                       max_weight: int | None = None) -> ConnectivityReport:
    """Check that the span of words of length >= power has vanishing
    homotopy in degrees <= min(power - 1, top - 1), per weight.

    The algebra must be reduced (level 0 generated by the ground field
    alone), which makes the word-length filtration the augmentation-ideal
    filtration."""
    if power < 1:
        raise PreconditionError("ideal power must be >= 1")
    if not algebra.is_reduced():
        raise PreconditionError("connectivity check needs a reduced algebra")
    bound = max_weight if max_weight is not None else algebra.max_weight
    rows = []
    verdict = True
    top_q = min(power - 1, algebra.top - 1)
    for w in range(1, bound + 1):
        for q in range(top_q + 1):
            dim = algebra.pi_of_power(q, w, power)
            rows.append((q, w, dim))
            if dim:
                verdict = False
    return ConnectivityReport(power, tuple(rows), verdict)


# ---------------------------------------------------------------------------
# the face-kernel ideal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelIdealReport:
    sphere: int
    level: int
    face: int
    rows: tuple[tuple[int, int, int], ...]  # (weight, span dim, kernel dim)
    verdict: bool


def face_kernel_ideal_check(sphere: int, level: int, face: int,
                            max_weight: int) -> KernelIdealReport:
    """Verify, per weight slice, that the stated difference-and-avoidance
    words generate the kernel of one face map on the free algebra over the
    reduced chains of a simplicial sphere.

    Generators: for each strictly descending degeneracy word (a subset S of
    0..level-1 of size level-sphere) on the fundamental generator,
      - if face is in S and face-1 is not, the difference between the word
        and the word with face replaced by face-1;
      - if neither face nor face-1 is in S, the word itself.
    The span of (monomial times generator) inside each weight slice must
    equal the kernel of the face map there."""
    from .simplicial import reduced_sphere_chains

    n, k, i = sphere, level, face
    if not (1 <= k and 0 <= i <= k and n >= 1):
        raise PreconditionError("bad sphere/level/face data")
    if k < n:
        raise PreconditionError("no generators below the sphere dimension")
    space, labels = reduced_sphere_chains(n, k)
    alg = free_simplicial_algebra(space, max_weight)
    # generator index by degeneracy word (= surjection repeats)
    by_word: dict[tuple[int, ...], int] = {}
    for gi, values in enumerate(labels[k]):
        rep = tuple(t for t in range(k) if values[t] == values[t + 1])
        by_word[rep] = gi
    idents: list[LevelPoly] = []
    import itertools as _it

    for S in _it.combinations(range(k), k - n):
        sset = set(S)
        if i in sset and i >= 1 and (i - 1) not in sset:
            swapped = tuple(sorted(sset - {i} | {i - 1}))
            idents.append(lp_add(lp_gen(by_word[S]), lp_gen(by_word[swapped]), Fraction(-1)))
        if i not in sset and (i - 1) not in sset:
            idents.append(lp_gen(by_word[S]))
    rows = []
    verdict = True
    for w in range(max_weight + 1):
        sl = alg.slice(k, w)
        dmat = alg.face_matrix(k, i, w)
        kdim = len(kernel_basis(dmat))
        red = RowReducer()
        for g in idents:
            gvec_w = alg.monomial_weight(k, next(iter(g)))
            if gvec_w > w:
                continue
            for mult in alg._slice_monomials(k, w - gvec_w):
                prod = lp_mul({mult: ONE}, g)
                vec = {sl.index[m]: c for m, c in prod.items()}
                # every product must already be a kernel element
                if dmat.apply({sl.qpos[pos]: c for pos, c in vec.items()}):
                    verdict = False
                red.insert(vec)
        rows.append((w, red.rank, kdim))
        if red.rank != kdim:
            verdict = False
    return KernelIdealReport(n, k, i, tuple(rows), verdict)

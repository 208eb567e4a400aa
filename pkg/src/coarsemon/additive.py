"""Additive symmetric monoidal categories with a strict action of a finite group.

:class:`AddInstance` fixes the interface every downstream module uses; the
constraint morphisms ``alpha``, ``eta``, ``sigma``, ``epsilon`` and ``mu`` are
always asked for explicitly, even where they happen to be identities.

Conventions
-----------
* ``compose(f, g)`` is ``f o g``.
* ``alpha(A, B, C): (A*B)*C -> A*(B*C)``, ``eta(A): 1*A -> A``,
  ``sigma(A, B): A*B -> B*A``.
* ``epsilon(g): 1 -> g(1)`` and ``mu(g, A, B): g(A)*g(B) -> g(A*B)``.
* Kronecker products index rows as ``(i, k) -> i * rank(B) + k``.

Instances: :class:`MatCat` (ranks and matrices, trivial action),
:class:`ShiftCat` (rank tuples indexed by the group, acting by translation)
and :class:`FakeSigmaMatCat`, a deliberately broken variant whose symmetry is
the identity matrix.
"""

from __future__ import annotations

import itertools

from .errors import LawViolation, ShapeMismatch
from .groups import FiniteGroup
from .rings import Matrix, Ring


class AddInstance:
    group: FiniteGroup
    ring: Ring
    kind = "abstract"

    # objects -------------------------------------------------------------
    def is_object(self, A) -> bool: raise NotImplementedError
    def zero_object(self): raise NotImplementedError
    def unit(self): raise NotImplementedError
    def tensor_obj(self, A, B): raise NotImplementedError
    def biproduct(self, objs):
        """``(S, injections, projections)`` for the chosen biproduct."""
        raise NotImplementedError

    # morphisms -----------------------------------------------------------
    def identity(self, A): raise NotImplementedError
    def zero(self, A, B): raise NotImplementedError
    def compose(self, f, g): raise NotImplementedError
    def add(self, f, g): raise NotImplementedError
    def neg(self, f): raise NotImplementedError
    def is_zero(self, f) -> bool: raise NotImplementedError
    def dom(self, f): raise NotImplementedError
    def cod(self, f): raise NotImplementedError
    def tensor_mor(self, f, g): raise NotImplementedError
    def inverse(self, f): raise NotImplementedError

    # constraints ---------------------------------------------------------
    def alpha(self, A, B, C): raise NotImplementedError
    def eta(self, A): raise NotImplementedError
    def sigma(self, A, B): raise NotImplementedError

    # group action --------------------------------------------------------
    def act_obj(self, g, A): raise NotImplementedError
    def act_mor(self, g, f): raise NotImplementedError
    def epsilon(self, g): raise NotImplementedError
    def mu(self, g, A, B): raise NotImplementedError

    # random data / serialization ------------------------------------------
    def random_object(self, rng, max_rank=2, fixed_by=()): raise NotImplementedError
    def random_mor(self, rng, A, B): raise NotImplementedError
    def random_auto(self, rng, A): raise NotImplementedError
    def obj_to_json(self, A): raise NotImplementedError
    def obj_from_json(self, d): raise NotImplementedError
    def mor_to_json(self, f): raise NotImplementedError
    def mor_from_json(self, d): raise NotImplementedError
    def describe(self) -> dict: raise NotImplementedError

    # derived -------------------------------------------------------------
    def compose_all(self, *fs):
        out = fs[-1]
        for f in reversed(fs[:-1]):
            out = self.compose(f, out)
        return out

    def sub(self, f, g):
        return self.add(f, self.neg(g))

    def sum(self, fs, A, B):
        out = self.zero(A, B)
        for f in fs:
            out = self.add(out, f)
        return out

    def is_iso(self, f):
        return self.inverse(f) is not None

    def rho_right(self, A):
        """Right unitor ``A*1 -> A``, derived as ``eta o sigma``."""
        return self.compose(self.eta(A), self.sigma(A, self.unit()))

    def __str__(self):
        return self.name


# ---------------------------------------------------------------- helpers

def _commutation(ring, n, m):
    """Permutation ``P: n*m -> m*n`` with ``P[k*n + i, i*m + k] = 1``."""
    data = [0] * (n * m * n * m)
    for i in range(n):
        for k in range(m):
            data[(k * n + i) * (n * m) + (i * m + k)] = 1
    return Matrix(ring, n * m, n * m, tuple(ring.coerce(v) for v in data))


def _block_inj(ring, sizes, j):
    total = sum(sizes)
    off = sum(sizes[:j])
    data = [0] * (total * sizes[j])
    for k in range(sizes[j]):
        data[(off + k) * sizes[j] + k] = 1
    return Matrix(ring, total, sizes[j], tuple(ring.coerce(v) for v in data))


def _random_matrix(ring, rng, rows, cols, density=0.7):
    z = ring.coerce(0)
    return Matrix(ring, rows, cols, tuple(ring.random(rng) if rng.random() < density else z
                                          for _ in range(rows * cols)))


def _random_invertible(ring, rng, n, steps=None):
    """Product of a random unit diagonal and random elementary row operations."""
    M = Matrix.scalar(ring, n, 1)
    if n == 0:
        return M
    units = ring.units()
    diag = [rng.choice(units) for _ in range(n)]
    M = Matrix(ring, n, n, tuple(ring.coerce(diag[i]) if i == j else ring.coerce(0)
                                 for i in range(n) for j in range(n)))
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = ring.random(rng)
        rows = M.row_list()
        rows[i] = [ring.coerce(a + c * b) for a, b in zip(rows[i], rows[j])]
        M = Matrix.from_rows(ring, rows, n)
    return M


# ---------------------------------------------------------------- MatCat

class MatCat(AddInstance):
    """Objects are ranks ``n >= 0``; ``hom(n, m)`` is ``m x n`` matrices over ``ring``.

    The group acts trivially with identity ``epsilon`` and ``mu``.
    """

    kind = "mat"

    def __init__(self, ring: Ring, group: FiniteGroup):
        self.ring = ring
        self.group = group
        self.name = f"MatCat({ring})"

    def __eq__(self, other):
        return type(self) is type(other) and (self.ring, self.group) == (other.ring, other.group)

    def __hash__(self):
        return hash((type(self).__name__, self.ring, self.group))

    def is_object(self, A):
        return isinstance(A, int) and not isinstance(A, bool) and A >= 0

    def zero_object(self):
        return 0

    def unit(self):
        return 1

    def tensor_obj(self, A, B):
        return A * B

    def biproduct(self, objs):
        objs = list(objs)
        injs = [_block_inj(self.ring, objs, j) for j in range(len(objs))]
        return sum(objs), injs, [m.transpose() for m in injs]

    def identity(self, A):
        return Matrix.identity(self.ring, A)

    def zero(self, A, B):
        return Matrix.zeros(self.ring, B, A)

    def compose(self, f, g):
        return f @ g

    def add(self, f, g):
        return f + g

    def neg(self, f):
        return -f

    def is_zero(self, f):
        return f.is_zero()

    def dom(self, f):
        return f.cols

    def cod(self, f):
        return f.rows

    def tensor_mor(self, f, g):
        return f.kron(g)

    def inverse(self, f):
        return f.inverse()

    def alpha(self, A, B, C):
        return Matrix.identity(self.ring, A * B * C)

    def eta(self, A):
        return Matrix.identity(self.ring, A)

    def sigma(self, A, B):
        return _commutation(self.ring, A, B)

    def act_obj(self, g, A):
        return A

    def act_mor(self, g, f):
        return f

    def epsilon(self, g):
        return Matrix.identity(self.ring, 1)

    def mu(self, g, A, B):
        return Matrix.identity(self.ring, A * B)

    def random_object(self, rng, max_rank=2, fixed_by=()):
        return rng.randint(1, max_rank)

    def random_mor(self, rng, A, B):
        return _random_matrix(self.ring, rng, B, A)

    def random_auto(self, rng, A):
        return _random_invertible(self.ring, rng, A)

    def obj_to_json(self, A):
        return A

    def obj_from_json(self, d):
        return int(d)

    def mor_to_json(self, f):
        return f.to_json()

    def mor_from_json(self, d):
        return Matrix.from_json(self.ring, d)

    def describe(self):
        return {"instance": "mat", "ring": self.ring.to_json()}


class FakeSigmaMatCat(MatCat):
    """MatCat with ``sigma(n, m)`` replaced by the identity matrix (not natural)."""

    kind = "fake_sigma"

    def __init__(self, ring, group):
        super().__init__(ring, group)
        self.name = f"FakeSigmaMatCat({ring})"

    def sigma(self, A, B):
        return Matrix.identity(self.ring, A * B)

    def describe(self):
        return {"instance": "fake_sigma", "ring": self.ring.to_json()}


# ---------------------------------------------------------------- ShiftCat

class ShiftCat(AddInstance):
    """Objects are rank tuples indexed by the group (in element order);
    morphisms are tuples of matrices.  ``g`` acts by ``(gA)(h) = A(g^-1 h)``.
    Tensor, biproducts and constraints are pointwise; ``epsilon`` and ``mu``
    are identities after the translation.
    """

    kind = "shift"

    def __init__(self, group: FiniteGroup, ring: Ring):
        self.group = group
        self.ring = ring
        self.name = f"ShiftCat({group.name},{ring})"
        els = group.elements
        # perm[g][h] = index of g^-1 h
        self._perm = {g: tuple(group.index(group.mul(group.inv(g), h)) for h in els) for g in els}
        self._base = MatCat(ring, group)

    def __eq__(self, other):
        return type(self) is type(other) and (self.ring, self.group) == (other.ring, other.group)

    def __hash__(self):
        return hash(("ShiftCat", self.ring, self.group))

    def _n(self):
        return len(self.group)

    def is_object(self, A):
        return (isinstance(A, tuple) and len(A) == self._n()
                and all(self._base.is_object(a) for a in A))

    def zero_object(self):
        return (0,) * self._n()

    def unit(self):
        return (1,) * self._n()

    def tensor_obj(self, A, B):
        return tuple(a * b for a, b in zip(A, B))

    def biproduct(self, objs):
        objs = list(objs)
        parts = [self._base.biproduct([A[k] for A in objs]) for k in range(self._n())]
        S = tuple(p[0] for p in parts)
        injs = [tuple(p[1][j] for p in parts) for j in range(len(objs))]
        projs = [tuple(p[2][j] for p in parts) for j in range(len(objs))]
        return S, injs, projs

    def identity(self, A):
        return tuple(Matrix.identity(self.ring, a) for a in A)

    def zero(self, A, B):
        return tuple(Matrix.zeros(self.ring, b, a) for a, b in zip(A, B))

    def compose(self, f, g):
        return tuple(x @ y for x, y in zip(f, g))

    def add(self, f, g):
        return tuple(x + y for x, y in zip(f, g))

    def neg(self, f):
        return tuple(-x for x in f)

    def is_zero(self, f):
        return all(x.is_zero() for x in f)

    def dom(self, f):
        return tuple(x.cols for x in f)

    def cod(self, f):
        return tuple(x.rows for x in f)

    def tensor_mor(self, f, g):
        return tuple(x.kron(y) for x, y in zip(f, g))

    def inverse(self, f):
        out = []
        for x in f:
            y = x.inverse()
            if y is None:
                return None
            out.append(y)
        return tuple(out)

    def alpha(self, A, B, C):
        return tuple(Matrix.identity(self.ring, a * b * c) for a, b, c in zip(A, B, C))

    def eta(self, A):
        return self.identity(A)

    def sigma(self, A, B):
        return tuple(_commutation(self.ring, a, b) for a, b in zip(A, B))

    def act_obj(self, g, A):
        return tuple(A[k] for k in self._perm[g])

    def act_mor(self, g, f):
        return tuple(f[k] for k in self._perm[g])

    def epsilon(self, g):
        return self.identity(self.unit())

    def mu(self, g, A, B):
        return self.identity(self.act_obj(g, self.tensor_obj(A, B)))

    def random_object(self, rng, max_rank=2, fixed_by=()):
        """Random rank tuple, constant on the orbits of ``fixed_by`` (a subgroup)."""
        A = [None] * self._n()
        for k, h in enumerate(self.group.elements):
            if A[k] is None:
                r = rng.randint(0, max_rank)
                for s in fixed_by:
                    A[self.group.index(self.group.mul(s, h))] = r
                A[k] = r
        if not any(A):
            A = [max(1, a) for a in A]
        return tuple(A)

    def random_mor(self, rng, A, B):
        return tuple(_random_matrix(self.ring, rng, b, a) for a, b in zip(A, B))

    def random_auto(self, rng, A):
        return tuple(_random_invertible(self.ring, rng, a) for a in A)

    def obj_to_json(self, A):
        return list(A)

    def obj_from_json(self, d):
        return tuple(int(v) for v in d)

    def mor_to_json(self, f):
        return [x.to_json() for x in f]

    def mor_from_json(self, d):
        return tuple(Matrix.from_json(self.ring, x) for x in d)

    def describe(self):
        return {"instance": "shift", "group": self.group.name, "ring": self.ring.to_json()}


# ---------------------------------------------------------------- free-standing operations

def biproduct(inst: AddInstance, objs):
    return inst.biproduct(objs)


def matrix_from_blocks(inst: AddInstance, srcs, dsts, blocks):
    """The morphism ``+src_i -> +dst_k`` whose ``(k, i)`` block is ``blocks[(k, i)]``.

    Missing blocks are zero.  The result ``m`` satisfies
    ``proj_k o m o inj_i = blocks[(k, i)]``.
    """
    S, injs, _ = inst.biproduct(srcs)
    T, _, projs_t = inst.biproduct(dsts)
    _, injs_t, _ = inst.biproduct(dsts)
    _, _, projs_s = inst.biproduct(srcs)
    out = inst.zero(S, T)
    for (k, i), b in blocks.items():
        if inst.dom(b) != srcs[i] or inst.cod(b) != dsts[k]:
            raise ShapeMismatch(f"block ({k},{i}) has the wrong shape")
        out = inst.add(out, inst.compose_all(injs_t[k], b, projs_s[i]))
    return out


def extract_block(inst: AddInstance, srcs, dsts, m, k, i):
    _, injs, _ = inst.biproduct(srcs)
    _, _, projs = inst.biproduct(dsts)
    return inst.compose_all(projs[k], m, injs[i])


def tensor_mor(inst: AddInstance, f, g):
    return inst.tensor_mor(f, g)


# ---------------------------------------------------------------- law checking

def _eq(inst, law, lhs, rhs, witness):
    if lhs != rhs:
        raise LawViolation(law, f"sides differ on {witness!r}", witness={"inputs": witness})


def check_instance_laws(inst: AddInstance, rng, samples: int = 10, max_rank: int = 2) -> dict:
    """Check every structural law on ``samples`` random draws.

    Returns ``{law: instances_checked}``; raises :class:`LawViolation` on
    the first failure.
    """
    counts = {}

    def tick(law):
        counts[law] = counts.get(law, 0) + 1

    G = inst.group
    ob = lambda: inst.random_object(rng, max_rank)
    for _ in range(samples):
        A, B, C, D = ob(), ob(), ob(), ob()
        f, f2 = inst.random_mor(rng, A, B), inst.random_mor(rng, A, B)
        h = inst.random_mor(rng, B, C)
        w = (inst.obj_to_json(A), inst.obj_to_json(B), inst.obj_to_json(C))

        # abelian group structure and bilinearity
        _eq(inst, "hom_abelian", inst.add(f, f2), inst.add(f2, f), w)
        _eq(inst, "hom_abelian", inst.add(f, inst.neg(f)), inst.zero(A, B), w)
        _eq(inst, "hom_abelian", inst.add(f, inst.zero(A, B)), f, w)
        _eq(inst, "bilinear", inst.compose(h, inst.add(f, f2)),
            inst.add(inst.compose(h, f), inst.compose(h, f2)), w)
        _eq(inst, "identity", inst.compose(inst.identity(B), f), f, w)
        _eq(inst, "identity", inst.compose(f, inst.identity(A)), f, w)
        tick("hom_abelian")

        # biproducts
        objs = [A, B, C]
        S, injs, projs = inst.biproduct(objs)
        total = inst.zero(S, S)
        for j, X in enumerate(objs):
            for k, Y in enumerate(objs):
                want = inst.identity(X) if j == k else inst.zero(X, Y)
                _eq(inst, "biproduct", inst.compose(projs[k], injs[j]), want, w)
            total = inst.add(total, inst.compose(injs[j], projs[j]))
        _eq(inst, "biproduct", total, inst.identity(S), w)
        tick("biproduct")

        # bifunctor
        g1, g2 = inst.random_mor(rng, C, D), inst.random_mor(rng, D, A)
        _eq(inst, "tensor_bifunctor",
            inst.tensor_mor(inst.compose(h, f), inst.compose(g2, g1)),
            inst.compose(inst.tensor_mor(h, g2), inst.tensor_mor(f, g1)), w)
        _eq(inst, "tensor_bifunctor", inst.tensor_mor(inst.identity(A), inst.identity(B)),
            inst.identity(inst.tensor_obj(A, B)), w)
        _eq(inst, "tensor_additive", inst.tensor_mor(inst.add(f, f2), g1),
            inst.add(inst.tensor_mor(f, g1), inst.tensor_mor(f2, g1)), w)
        tick("tensor_bifunctor")

        T = inst.tensor_obj
        # naturality of the constraints
        fa, fb, fc = inst.random_mor(rng, A, B), inst.random_mor(rng, B, C), inst.random_mor(rng, C, D)
        _eq(inst, "alpha_natural",
            inst.compose(inst.alpha(B, C, D), inst.tensor_mor(inst.tensor_mor(fa, fb), fc)),
            inst.compose(inst.tensor_mor(fa, inst.tensor_mor(fb, fc)), inst.alpha(A, B, C)), w)
        _eq(inst, "eta_natural",
            inst.compose(inst.eta(B), inst.tensor_mor(inst.identity(inst.unit()), fa)),
            inst.compose(fa, inst.eta(A)), w)
        _eq(inst, "sigma_natural",
            inst.compose(inst.sigma(B, C), inst.tensor_mor(fa, fb)),
            inst.compose(inst.tensor_mor(fb, fa), inst.sigma(A, B)), w)
        tick("naturality")

        # pentagon, triangle, inverse relation, hexagon
        a = inst.alpha
        lhs = inst.compose(a(A, B, T(C, D)), a(T(A, B), C, D))
        rhs = inst.compose_all(inst.tensor_mor(inst.identity(A), a(B, C, D)),
                               a(A, T(B, C), D),
                               inst.tensor_mor(a(A, B, C), inst.identity(D)))
        _eq(inst, "pentagon", lhs, rhs, w)
        tick("pentagon")
        one = inst.unit()
        _eq(inst, "triangle",
            inst.compose(inst.tensor_mor(inst.identity(A), inst.eta(B)), a(A, one, B)),
            inst.tensor_mor(inst.rho_right(A), inst.identity(B)), w)
        tick("triangle")
        _eq(inst, "inverse_relation", inst.compose(inst.sigma(B, A), inst.sigma(A, B)),
            inst.identity(T(A, B)), w)
        tick("inverse_relation")
        s = inst.sigma
        lhs = inst.compose_all(a(B, C, A), s(A, T(B, C)), a(A, B, C))
        rhs = inst.compose_all(inst.tensor_mor(inst.identity(B), s(A, C)), a(B, A, C),
                               inst.tensor_mor(s(A, B), inst.identity(C)))
        _eq(inst, "hexagon", lhs, rhs, w)
        tick("hexagon")

        # each g is an additive symmetric monoidal functor preserving chosen biproducts
        for g in G:
            wg = w + (g,)
            _eq(inst, "g_functor", inst.act_mor(g, inst.compose(h, f)),
                inst.compose(inst.act_mor(g, h), inst.act_mor(g, f)), wg)
            _eq(inst, "g_functor", inst.act_mor(g, inst.identity(A)),
                inst.identity(inst.act_obj(g, A)), wg)
            _eq(inst, "g_additive", inst.act_mor(g, inst.add(f, f2)),
                inst.add(inst.act_mor(g, f), inst.act_mor(g, f2)), wg)
            gS, ginjs, gprojs = inst.biproduct([inst.act_obj(g, X) for X in objs])
            _eq(inst, "g_biproduct", inst.act_obj(g, S), gS, wg)
            _eq(inst, "g_biproduct", [inst.act_mor(g, m) for m in injs], ginjs, wg)
            _eq(inst, "g_biproduct", [inst.act_mor(g, m) for m in projs], gprojs, wg)
            gA, gB, gC = (inst.act_obj(g, X) for X in (A, B, C))
            mu = lambda X, Y: inst.mu(g, X, Y)
            _eq(inst, "mu_natural",
                inst.compose(mu(B, C), inst.tensor_mor(inst.act_mor(g, fa), inst.act_mor(g, fb))),
                inst.compose(inst.act_mor(g, inst.tensor_mor(fa, fb)), mu(A, B)), wg)
            _eq(inst, "monoidal_functor_assoc",
                inst.compose_all(inst.act_mor(g, a(A, B, C)), mu(T(A, B), C),
                                 inst.tensor_mor(mu(A, B), inst.identity(gC))),
                inst.compose_all(mu(A, T(B, C)), inst.tensor_mor(inst.identity(gA), mu(B, C)),
                                 a(gA, gB, gC)), wg)
            _eq(inst, "monoidal_functor_unit",
                inst.compose_all(inst.act_mor(g, inst.eta(A)), mu(one, A),
                                 inst.tensor_mor(inst.epsilon(g), inst.identity(gA))),
                inst.eta(gA), wg)
            _eq(inst, "monoidal_functor_symm",
                inst.compose(inst.act_mor(g, s(A, B)), mu(A, B)),
                inst.compose(mu(B, A), s(gA, gB)), wg)
            if inst.inverse(inst.epsilon(g)) is None or inst.inverse(mu(A, B)) is None:
                raise LawViolation("monoidal_functor_iso", f"epsilon/mu not invertible at {g!r}", witness=wg)
        tick("monoidal_functor")

    counts["strictness"] = check_strictness(inst, rng, samples, max_rank)
    return counts


def check_strictness(inst: AddInstance, rng, samples: int = 3, max_rank: int = 2) -> int:
    """``(g, eps^g, mu^g) o (h, eps^h, mu^h) = (gh, eps^gh, mu^gh)`` for every pair ``(g, h)``."""
    G = inst.group
    checked = 0
    e = G.unit
    for _ in range(max(1, samples)):
        A = inst.random_object(rng, max_rank)
        B = inst.random_object(rng, max_rank)
        f = inst.random_mor(rng, A, B)
        w = (inst.obj_to_json(A), inst.obj_to_json(B))
        _eq(inst, "strict_unit", inst.act_obj(e, A), A, w)
        _eq(inst, "strict_unit", inst.act_mor(e, f), f, w)
        _eq(inst, "strict_unit", inst.epsilon(e), inst.identity(inst.unit()), w)
        _eq(inst, "strict_unit", inst.mu(e, A, B), inst.identity(inst.tensor_obj(A, B)), w)
        for g, h in itertools.product(G, G):
            gh = G.mul(g, h)
            wg = w + (g, h)
            _eq(inst, "strictness", inst.act_obj(g, inst.act_obj(h, A)), inst.act_obj(gh, A), wg)
            _eq(inst, "strictness", inst.act_mor(g, inst.act_mor(h, f)), inst.act_mor(gh, f), wg)
            _eq(inst, "strictness", inst.epsilon(gh),
                inst.compose(inst.act_mor(g, inst.epsilon(h)), inst.epsilon(g)), wg)
            hA, hB = inst.act_obj(h, A), inst.act_obj(h, B)
            _eq(inst, "strictness", inst.mu(gh, A, B),
                inst.compose(inst.act_mor(g, inst.mu(h, A, B)), inst.mu(g, hA, hB)), wg)
            checked += 1
    return checked

"""U_q(sl_2) at generic q = s^2: weight modules, universal R, braiding,
ribbon scalars, duality maps and Clebsch-Gordan data.

Conventions (fixed for the whole package):

    Delta(E) = E (x) 1 + K (x) E
    Delta(F) = F (x) K^-1 + 1 (x) F
    Delta(K) = K (x) K
    S(E) = -K^-1 E,  S(F) = -F K,  S(K) = K^-1

    R = s^(H (x) H) * sum_n s^(n(n-1)) (s^2 - s^-2)^n / [n]! F^n (x) E^n

where H is the weight, so the Cartan factor is q^(H(x)H/2).  The series is
finite on any finite-dimensional module.  A dual module V* carries
(x.f)(v) = f(S(x) v), i.e. the matrix of x on V* is pi(S(x))^T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .linalg import SparseMat, compose, inverse, kernel, kron, permutation
from .scalars import RatFunc, qint

S = RatFunc.gen("s")
ONE = RatFunc.const(1)
ZERO = RatFunc.const(0)

GENERATORS = ("E", "F", "K", "Ki")

# Delta(x) = sum of (left, right) generator words; "1" is the unit.
COPRODUCT = {
    "E": (("E", "1"), ("K", "E")),
    "F": (("F", "Ki"), ("1", "F")),
    "K": (("K", "K"),),
    "Ki": (("Ki", "Ki"),),
}

COUNIT = {"E": 0, "F": 0, "K": 1, "Ki": 1}


def spow(e: int) -> RatFunc:
    return RatFunc.monomial(e)


@dataclass(frozen=True, eq=False)
class WeightModule:
    """A finite-dimensional type-1 module given on a weight basis."""

    label: str
    weights: tuple
    E: SparseMat
    F: SparseMat
    parts: tuple = field(default=())

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def K(self) -> SparseMat:
        return SparseMat.diag([spow(2 * w) for w in self.weights])

    @property
    def Kinv(self) -> SparseMat:
        return SparseMat.diag([spow(-2 * w) for w in self.weights])

    def identity(self) -> SparseMat:
        return SparseMat.identity(self.dim, ONE)

    def act(self, word: str) -> SparseMat:
        """Matrix of a generator ('E', 'F', 'K', 'Ki' or '1')."""
        if word == "1":
            return self.identity()
        if word == "E":
            return self.E
        if word == "F":
            return self.F
        if word == "K":
            return self.K
        if word == "Ki":
            return self.Kinv
        raise ValueError(f"unknown generator {word!r}")

    def __repr__(self):
        return f"WeightModule({self.label}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class IrrepData(WeightModule):
    m: int = 0

    @property
    def matE(self):
        return self.E

    @property
    def matF(self):
        return self.F

    @property
    def matK(self):
        return self.K


@lru_cache(maxsize=None)
def irrep(m: int) -> IrrepData:
    """V_m with basis v_0 (highest) ... v_m (lowest)."""
    if m < 0:
        raise ValueError("highest weight must be nonnegative")
    E = SparseMat(m + 1, m + 1, {(j - 1, j): qint(j) for j in range(1, m + 1)})
    F = SparseMat(m + 1, m + 1, {(j + 1, j): qint(m - j) for j in range(m)})
    return IrrepData(f"V{m}", tuple(m - 2 * j for j in range(m + 1)), E, F, m=m)


@lru_cache(maxsize=None)
def dual(mod: WeightModule) -> WeightModule:
    """V* on the dual basis; x acts by pi(S(x))^T."""
    E = (-compose(mod.Kinv, mod.E)).transpose()
    F = (-compose(mod.F, mod.K)).transpose()
    return WeightModule(f"{mod.label}*", tuple(-w for w in mod.weights), E, F)


@lru_cache(maxsize=None)
def tensor(a: WeightModule, b: WeightModule) -> WeightModule:
    Ia, Ib = a.identity(), b.identity()
    E = kron(a.E, Ib) + kron(a.K, b.E)
    F = kron(a.F, b.Kinv) + kron(Ia, b.F)
    weights = tuple(x + y for x in a.weights for y in b.weights)
    return WeightModule(f"({a.label}(x){b.label})", weights, E, F, parts=(a, b))


def tensor_all(mods) -> WeightModule:
    mods = list(mods)
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


def coproduct_action(x: str, a: WeightModule, b: WeightModule) -> SparseMat:
    """Delta(x) acting on a (x) b."""
    total = None
    for left, right in COPRODUCT[x]:
        term = kron(a.act(left), b.act(right))
        total = term if total is None else total + term
    return total


def flip(da: int, db: int) -> SparseMat:
    """tau: V_a (x) V_b -> V_b (x) V_a."""
    return permutation([j * da + i for i in range(da) for j in range(db)], ONE)


@lru_cache(maxsize=None)
def eval_R(a: WeightModule, b: WeightModule) -> SparseMat:
    """The universal R-matrix evaluated on a (x) b."""
    cartan = SparseMat.diag([spow(x * y) for x in a.weights for y in b.weights])
    total = kron(a.identity(), b.identity())
    Fa, Eb = a.identity(), b.identity()
    fact = ONE
    gap = spow(2) - spow(-2)
    for n in range(1, min(a.dim, b.dim)):
        Fa = compose(Fa, a.F)
        Eb = compose(Eb, b.E)
        if Fa.is_zero() or Eb.is_zero():
            break
        fact = fact * qint(n)
        total = total + kron(Fa, Eb).scale(spow(n * (n - 1)) * gap ** n / fact)
    return compose(cartan, total)


@lru_cache(maxsize=None)
def eval_R_inv(a: WeightModule, b: WeightModule) -> SparseMat:
    return inverse(eval_R(a, b))


@lru_cache(maxsize=None)
def braiding(a: WeightModule, b: WeightModule) -> SparseMat:
    """sigma_{a,b} = tau o R : a (x) b -> b (x) a."""
    return compose(flip(a.dim, b.dim), eval_R(a, b))


@lru_cache(maxsize=None)
def braiding_inv(a: WeightModule, b: WeightModule) -> SparseMat:
    """Inverse of sigma_{a,b}, a map b (x) a -> a (x) b."""
    return compose(eval_R_inv(a, b), flip(b.dim, a.dim))


@lru_cache(maxsize=None)
def double_braiding(a: WeightModule, b: WeightModule) -> SparseMat:
    """sigma_{b,a} o sigma_{a,b} = R_21 R_12 on a (x) b."""
    return compose(braiding(b, a), braiding(a, b))


# ---------------------------------------------------------------------------
# Clebsch-Gordan data


@dataclass(frozen=True)
class Decomposition:
    """V_a (x) V_b as a direct sum: inclusions iota[j]: V_j -> V_a(x)V_b and
    projections proj[j] with proj[j] iota[j'] = delta_{jj'} Id."""

    a: int
    b: int
    iota: dict
    proj: dict

    @property
    def components(self):
        return sorted(self.iota)


@lru_cache(maxsize=None)
def decompose(a: int, b: int) -> Decomposition:
    """Highest-weight vectors are anchored so that their first nonzero
    coordinate is 1; for the top component that is v_0 (x) v_0."""
    mod = tensor(irrep(a), irrep(b))
    iota = {}
    for j in range(a + b, abs(a - b) - 1, -2):
        idx = [i for i, w in enumerate(mod.weights) if w == j]
        target = [i for i, w in enumerate(mod.weights) if w == j + 2]
        block = mod.E.submatrix(target, idx) if target else SparseMat.zeros(0, len(idx))
        ker = kernel(block, ONE)
        assert len(ker) == 1, (a, b, j, len(ker))
        vec = {idx[k]: v for k, v in ker[0].items()}
        lead = vec[min(vec)]
        vec = {k: v / lead for k, v in vec.items()}
        cols = [vec]
        for k in range(j):
            nxt = mod.F.apply(cols[-1])
            cols.append({r: v / qint(j - k) for r, v in nxt.items()})
        iota[j] = SparseMat.from_columns(cols, mod.dim)
    order = sorted(iota)
    stacked = SparseMat.from_columns([c for j in order for c in iota[j].columns()], mod.dim)
    inv = inverse(stacked)
    proj = {}
    offset = 0
    for j in order:
        proj[j] = inv.submatrix(list(range(offset, offset + j + 1)), list(range(mod.dim)))
        offset += j + 1
    return Decomposition(a, b, iota, proj)


@dataclass(frozen=True)
class CGData:
    """V_m (x) V_1 = V_{m+1} (+) V_{m-1} (the second summand absent for m = 0)."""

    m: int
    iota: dict
    proj: dict


def cg(m: int) -> CGData:
    d = decompose(m, 1)
    return CGData(m, dict(d.iota), dict(d.proj))


# ---------------------------------------------------------------------------
# Ribbon data


def _eigenvalue_on(op: SparseMat, vec: dict) -> RatFunc:
    image = op.apply(vec)
    k = min(vec)
    lam = image.get(k, ZERO) / vec[k]
    for r in set(vec) | set(image):
        if image.get(r, ZERO) != lam * vec.get(r, ZERO):
            raise ArithmeticError("vector is not an eigenvector")
    return lam


def component_scalar(op: SparseMat, a: int, b: int, j: int) -> RatFunc:
    """Scalar by which an intertwiner of V_a (x) V_b acts on its V_j component."""
    return _eigenvalue_on(op, decompose(a, b).iota[j].column(0))


def _monomial_sqrt(x: RatFunc) -> RatFunc:
    """Square root of c * s^(2e) normalized to be 1 at s = 1."""
    num, den = x.num.coeffs(), x.den.coeffs()
    nz_num = [i for i, c in enumerate(num) if c]
    if len(nz_num) != 1 or len([c for c in den if c]) != 1:
        raise ArithmeticError(f"{x} is not a monomial")
    e = nz_num[0] - (len(den) - 1)
    if e % 2 or num[nz_num[0]] != den[-1]:
        raise ArithmeticError(f"{x} is not a square monomial")
    return spow(e // 2)


@lru_cache(maxsize=None)
def ribbon_scalar(m: int) -> RatFunc:
    """Twist theta_m on V_m, computed from double-braiding eigenvalues.

    theta is pinned by double_braiding = theta_j / (theta_a theta_b) on each
    component V_j of V_a (x) V_b, theta_0 = 1 and theta -> 1 at s = 1.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return ONE
    v1 = irrep(1)
    if m == 1:
        lam0 = component_scalar(double_braiding(v1, v1), 1, 1, 0)
        return _monomial_sqrt(lam0.inverse())
    prev = irrep(m - 1)
    lam = component_scalar(double_braiding(prev, v1), m - 1, 1, m)
    return lam * ribbon_scalar(m - 1) * ribbon_scalar(1)


def ribbon_candidates(m: int) -> tuple:
    """(theta_m, theta_m^-1): the two possible normalizations of the ribbon element on V_m."""
    t = ribbon_scalar(m)
    return t, t.inverse()


# ---------------------------------------------------------------------------
# Duality


def ev_coev(m: int):
    """ev: V_m* (x) V_m -> 1 and coev: 1 -> V_m (x) V_m*."""
    d = m + 1
    ev = SparseMat(1, d * d, {(0, i * d + i): ONE for i in range(d)})
    coev = SparseMat(d * d, 1, {(i * d + i, 0): ONE for i in range(d)})
    return ev, coev


def right_ev(m: int, twist_sign: int) -> SparseMat:
    """V_m (x) V_m* -> 1 built as ev o sigma_{V,V*} o (theta^sign (x) id)."""
    v = irrep(m)
    ev, _ = ev_coev(m)
    theta = ribbon_scalar(m) ** twist_sign
    return compose(ev, braiding(v, dual(v))).scale(theta)


def quantum_dimension(m: int, twist_sign: int) -> RatFunc:
    """Categorical trace of id_{V_m}: right evaluation after coevaluation."""
    _, coev = ev_coev(m)
    return compose(right_ev(m, twist_sign), coev)[0, 0]


def is_intertwiner(op: SparseMat, src: WeightModule, dst: WeightModule) -> bool:
    return all(compose(op, src.act(x)) == compose(dst.act(x), op) for x in ("E", "F", "K"))

"""Finite unital rings with exact integer-indexed arithmetic.

Elements of a ring of size n are the integers 0..n-1.  Small rings carry
dense numpy Cayley tables; the block upper-triangular construction S
(too large to tabulate) implements the same vectorized interface
structurally.  All add/mul/neg methods accept plain ints or numpy index
arrays and broadcast.

Ring axioms are checked on construction: exhaustively for small
carriers, by seeded sampling above `exhaustive_cap`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

DEFAULT_TABLE_BUDGET = 4096
# carriers up to this size get exhaustive triple sweeps at construction
DEFAULT_EXHAUSTIVE_CAP = 100
DEFAULT_SAMPLES = 100_000
_CHUNK = 1 << 20


class RingError(Exception):
    pass


class RingConstructionError(RingError):
    """A claimed ring violates an axiom; carries (law, witness)."""

    def __init__(self, ring_name: str, law: str, witness):
        self.law = law
        self.witness = witness
        super().__init__(f"{ring_name}: {law} fails at {witness}")


class BudgetError(RingError):
    pass


@dataclass
class LawReport:
    ring: str
    mode: str  # "exhaustive" or "sampled"
    triples_checked: int
    violation: tuple | None  # (law, witness) or None

    @property
    def ok(self) -> bool:
        return self.violation is None


def _scalar(x):
    if isinstance(x, np.ndarray) and x.ndim == 0:
        return int(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


class FiniteRing:
    """Base class; subclasses fill in add/mul/neg and naming."""

    name: str
    size: int
    zero: int = 0
    one: int

    def __init__(self):
        self._nil_mask: np.ndarray | None = None
        self.law_report: LawReport | None = None

    # arithmetic ------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, a: int, k: int) -> int:
        """a**k for k >= 1 by repeated multiplication."""
        if k < 1:
            raise ValueError("power expects k >= 1")
        p = a
        for _ in range(k - 1):
            p = self.mul(p, a)
        return _scalar(p)

    # carrier ---------------------------------------------------------
    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.int32)

    def element_name(self, a: int) -> str:
        raise NotImplementedError

    def element_index(self, name: str) -> int:
        raise NotImplementedError

    @property
    def is_table_backed(self) -> bool:
        return False

    # nilpotency ------------------------------------------------------
    def _compute_nil_mask(self) -> np.ndarray:
        raise NotImplementedError

    def nil_mask(self) -> np.ndarray:
        if self._nil_mask is None:
            self._nil_mask = self._compute_nil_mask()
            self._nil_mask.setflags(write=False)
        return self._nil_mask

    def is_nilpotent(self, a: int) -> bool:
        return bool(self.nil_mask()[a])

    def generating_set(self) -> np.ndarray:
        """Elements generating the ring; commuting with them means central.

        The default is the whole carrier; structured rings override this
        with a small set so centrality checks stay cheap.
        """
        return self.elements()

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} (size {self.size})>"


class TableRing(FiniteRing):
    """Ring given by dense add/mul tables plus element names."""

    def __init__(
        self,
        name: str,
        add_table: np.ndarray,
        mul_table: np.ndarray,
        one: int,
        names: list[str],
        exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
        samples: int = DEFAULT_SAMPLES,
        seed: int = 0,
    ):
        super().__init__()
        self.name = name
        self.add_table = np.ascontiguousarray(add_table, dtype=np.int32)
        self.mul_table = np.ascontiguousarray(mul_table, dtype=np.int32)
        self.size = int(self.add_table.shape[0])
        if self.size > DEFAULT_TABLE_BUDGET:
            raise BudgetError(
                f"{name}: table ring of size {self.size} exceeds the "
                f"budget {DEFAULT_TABLE_BUDGET}"
            )
        self.one = int(one)
        self.names = list(names)
        if len(self.names) != self.size:
            raise ValueError(f"{name}: {len(self.names)} names for {self.size} elements")
        self._index = {s: i for i, s in enumerate(self.names)}
        if len(self._index) != self.size:
            raise ValueError(f"{name}: element names are not unique")
        self.law_report = verify_ring_laws(
            self, exhaustive_cap=exhaustive_cap, samples=samples, seed=seed
        )
        if not self.law_report.ok:
            law, witness = self.law_report.violation
            raise RingConstructionError(name, law, witness)

    def add(self, a, b):
        return _scalar(self.add_table[a, b])

    def mul(self, a, b):
        return _scalar(self.mul_table[a, b])

    def neg(self, a):
        return _scalar(self._neg_table[a])

    @property
    def _neg_table(self) -> np.ndarray:
        tab = getattr(self, "_neg_cache", None)
        if tab is None:
            tab = np.argmax(self.add_table == self.zero, axis=1).astype(np.int32)
            self._neg_cache = tab
        return tab

    def element_name(self, a: int) -> str:
        return self.names[a]

    def element_index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"{self.name}: no element named {name!r}") from None

    @property
    def is_table_backed(self) -> bool:
        return True

    def _compute_nil_mask(self) -> np.ndarray:
        return kernels.nilpotent_mask(self.mul_table, self.zero)


class SRing(FiniteRing):
    """Block ring of triples (A | B | C) standing for [[A, B], [0, C]].

    A, B, C range over a 2x2 matrix ring over a base ring; the carrier
    has |M|^3 elements and is never tabulated.  Products follow the
    block rule (A|B|C)(A'|B'|C') = (AA' | AB'+BC' | CC'), and a triple
    is nilpotent exactly when both diagonal blocks are.
    """

    def __init__(self, block_ring: TableRing, name: str, seed: int = 0):
        super().__init__()
        self.block = block_ring
        self.bsize = block_ring.size
        self.size = self.bsize**3
        self.name = name
        self.one = self.encode(block_ring.one, 0, block_ring.one)
        self.law_report = verify_ring_laws(self, seed=seed)
        if not self.law_report.ok:
            law, witness = self.law_report.violation
            raise RingConstructionError(name, law, witness)

    # packing: index = (A * bsize + B) * bsize + C
    def encode(self, A, B, C):
        return _scalar((np.asarray(A) * self.bsize + B) * self.bsize + C)

    def decode(self, x):
        x = np.asarray(x)
        C = x % self.bsize
        AB = x // self.bsize
        return AB // self.bsize, AB % self.bsize, C

    def add(self, a, b):
        A1, B1, C1 = self.decode(a)
        A2, B2, C2 = self.decode(b)
        t = self.block.add_table
        return self.encode(t[A1, A2], t[B1, B2], t[C1, C2])

    def mul(self, a, b):
        A1, B1, C1 = self.decode(a)
        A2, B2, C2 = self.decode(b)
        ta, tm = self.block.add_table, self.block.mul_table
        return self.encode(
            tm[A1, A2], ta[tm[A1, B2], tm[B1, C2]], tm[C1, C2]
        )

    def neg(self, a):
        A, B, C = self.decode(a)
        t = self.block._neg_table
        return self.encode(t[A], t[B], t[C])

    def element_name(self, a: int) -> str:
        A, B, C = self.decode(a)
        bn = self.block.element_name
        return f"blk[{bn(int(A))};{bn(int(B))};{bn(int(C))}]"

    def element_index(self, name: str) -> int:
        if not (name.startswith("blk[") and name.endswith("]")):
            raise KeyError(f"{self.name}: bad element literal {name!r}")
        # split on semicolons at bracket depth zero; block names such as
        # [a,b;c,d] carry their own semicolons
        parts, depth, start = [], 0, 0
        body = name[4:-1]
        for pos, ch in enumerate(body):
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == ";" and depth == 0:
                parts.append(body[start:pos])
                start = pos + 1
        parts.append(body[start:])
        if len(parts) != 3:
            raise KeyError(f"{self.name}: bad element literal {name!r}")
        bi = self.block.element_index
        return self.encode(bi(parts[0]), bi(parts[1]), bi(parts[2]))

    def _compute_nil_mask(self) -> np.ndarray:
        bnil = self.block.nil_mask()
        out = np.empty(self.size, dtype=bool)
        for lo in range(0, self.size, _CHUNK):
            hi = min(lo + _CHUNK, self.size)
            A, _, C = self.decode(np.arange(lo, hi))
            out[lo:hi] = bnil[A] & bnil[C]
        return out

    def generating_set(self) -> np.ndarray:
        """Single-slot triples (X|0|0), (0|X|0), (0|0|X); every element is
        a sum of three of these, so their centralizer is the center."""
        x = np.arange(1, self.bsize, dtype=np.int64)
        b = self.bsize
        return np.concatenate([x * b * b, x * b, x])


# ---------------------------------------------------------------------------
# law verification


def _first_bad(mask: np.ndarray):
    flat = int(np.argmax(mask))
    return np.unravel_index(flat, mask.shape)


def verify_ring_laws(
    ring: FiniteRing,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
) -> LawReport:
    """Check the ring axioms; exhaustive when the carrier is small."""
    n = ring.size
    if ring.is_table_backed and n <= exhaustive_cap:
        return _verify_exhaustive_tables(ring)
    return _verify_sampled(ring, samples, seed)


def _verify_exhaustive_tables(ring: TableRing) -> LawReport:
    n = ring.size
    add, mul = ring.add_table, ring.mul_table
    idx = np.arange(n)

    def report(law, witness):
        return LawReport(ring.name, "exhaustive", n**3, (law, tuple(map(int, witness))))

    if add.shape != (n, n) or mul.shape != (n, n):
        return report("table_shape", (n,))
    if add.min() < 0 or add.max() >= n or mul.min() < 0 or mul.max() >= n:
        return report("table_range", (int(add.max()), int(mul.max())))
    if ring.zero == ring.one:
        return report("zero_ne_one", (ring.zero,))
    bad = add != add.T
    if bad.any():
        return report("add_commutative", _first_bad(bad))
    bad = add[ring.zero] != idx
    if bad.any():
        return report("zero_identity", (int(np.argmax(bad)),))
    bad = ~(add == ring.zero).any(axis=1)
    if bad.any():
        return report("negation_exists", (int(np.argmax(bad)),))
    bad = mul[ring.one] != idx
    if bad.any():
        return report("one_left_identity", (int(np.argmax(bad)),))
    bad = mul[:, ring.one] != idx
    if bad.any():
        return report("one_right_identity", (int(np.argmax(bad)),))
    w = kernels.associativity_witness(add)
    if w is not None:
        return report("add_associative", w)
    w = kernels.associativity_witness(mul)
    if w is not None:
        return report("mul_associative", w)
    w = kernels.distributivity_witness(add, mul)
    if w is not None:
        law, triple = w
        return report(f"distributive_{law}", triple)
    return LawReport(ring.name, "exhaustive", n**3, None)


def _verify_sampled(ring: FiniteRing, samples: int, seed: int) -> LawReport:
    rng = np.random.default_rng(seed)
    n = ring.size
    a = rng.integers(0, n, size=samples)
    b = rng.integers(0, n, size=samples)
    c = rng.integers(0, n, size=samples)

    def report(law, k):
        return LawReport(
            ring.name, "sampled", samples, (law, (int(a[k]), int(b[k]), int(c[k])))
        )

    if ring.zero == ring.one:
        return LawReport(ring.name, "sampled", samples, ("zero_ne_one", (ring.zero,)))
    bad = ring.add(a, b) != ring.add(b, a)
    if bad.any():
        return report("add_commutative", int(np.argmax(bad)))
    bad = ring.add(ring.zero, a) != a
    if bad.any():
        return report("zero_identity", int(np.argmax(bad)))
    bad = ring.add(a, ring.neg(a)) != ring.zero
    if bad.any():
        return report("negation_exists", int(np.argmax(bad)))
    bad = ring.mul(ring.one, a) != a
    if bad.any():
        return report("one_left_identity", int(np.argmax(bad)))
    bad = ring.mul(a, ring.one) != a
    if bad.any():
        return report("one_right_identity", int(np.argmax(bad)))
    bad = ring.add(ring.add(a, b), c) != ring.add(a, ring.add(b, c))
    if bad.any():
        return report("add_associative", int(np.argmax(bad)))
    bad = ring.mul(ring.mul(a, b), c) != ring.mul(a, ring.mul(b, c))
    if bad.any():
        return report("mul_associative", int(np.argmax(bad)))
    bad = ring.mul(a, ring.add(b, c)) != ring.add(ring.mul(a, b), ring.mul(a, c))
    if bad.any():
        return report("distributive_left", int(np.argmax(bad)))
    bad = ring.mul(ring.add(a, b), c) != ring.add(ring.mul(a, c), ring.mul(b, c))
    if bad.any():
        return report("distributive_right", int(np.argmax(bad)))
    return LawReport(ring.name, "sampled", samples, None)


# ---------------------------------------------------------------------------
# nilpotency: two independent routes


def nil_mask_power_bound(ring: FiniteRing, cap: int = 1 << 14) -> np.ndarray:
    """Mask of nilpotents via a^k for k up to |R| (pigeonhole bound)."""
    if ring.size > cap:
        raise BudgetError(
            f"{ring.name}: power-bound sweep over {ring.size} elements "
            f"exceeds cap {cap}; use ring.nil_mask()"
        )
    idx = ring.elements()
    cur = idx.copy()
    out = np.asarray(cur == ring.zero)
    for _ in range(ring.size - 1):
        if out.all():
            break
        cur = ring.mul(cur, idx)
        out = out | (cur == ring.zero)
    return out


def nil_mask_cycle_detect(ring: FiniteRing, cap: int = 1 << 14) -> np.ndarray:
    """Mask of nilpotents by following each power sequence to 0 or a repeat."""
    if ring.size > cap:
        raise BudgetError(
            f"{ring.name}: cycle-detection sweep over {ring.size} elements "
            f"exceeds cap {cap}; use ring.nil_mask()"
        )
    out = np.zeros(ring.size, dtype=bool)
    for a in range(ring.size):
        seen = set()
        p = a
        while p not in seen:
            if p == ring.zero:
                out[a] = True
                break
            seen.add(p)
            p = int(ring.mul(p, a))
        else:
            continue
    return out


def power_trajectory(ring: FiniteRing, a: int, cap: int | None = None):
    """Powers a, a^2, ... up to the first repeat or first zero.

    Returns (powers, reaches_zero).  If reaches_zero is False the list
    ends just before the power that closed a cycle, certifying that no
    power of a is ever zero.
    """
    limit = ring.size if cap is None else cap
    seen = {}
    powers = []
    p = int(a)
    for _ in range(limit + 1):
        if p == ring.zero:
            powers.append(p)
            return powers, True
        if p in seen:
            return powers, False
        seen[p] = len(powers)
        powers.append(p)
        p = int(ring.mul(p, a))
    return powers, False


def nil_set(ring: FiniteRing) -> np.ndarray:
    """Ascending indices of the nilpotent elements."""
    return np.nonzero(ring.nil_mask())[0].astype(np.int64)


def is_reduced(ring: FiniteRing) -> bool:
    """True when 0 is the only nilpotent element."""
    return int(ring.nil_mask().sum()) == 1


def ni_failure(ring: FiniteRing):
    """None if nil(R) is a two-sided ideal, else a closure violation.

    Violations are ("add", a, b) with a, b nilpotent and a+b not, or
    ("mul", r, a) / ("mul", a, r) with a nilpotent and the product not.
    """
    mask = ring.nil_mask()
    nil = np.nonzero(mask)[0]
    for a in nil:
        s = ring.add(int(a), nil)
        bad = ~mask[s]
        if bad.any():
            return ("add", int(a), int(nil[int(np.argmax(bad))]))
    every = ring.elements()
    for a in nil:
        left = ring.mul(every, int(a))
        bad = ~mask[left]
        if bad.any():
            return ("mul", int(np.argmax(bad)), int(a))
        right = ring.mul(int(a), every)
        bad = ~mask[right]
        if bad.any():
            return ("mul", int(a), int(np.argmax(bad)))
    return None


def is_ni(ring: FiniteRing) -> bool:
    """True when the set of nilpotents is a two-sided ideal."""
    return ni_failure(ring) is None


def idempotents(ring: FiniteRing) -> np.ndarray:
    """Ascending indices of elements with e*e = e."""
    out = []
    for lo in range(0, ring.size, _CHUNK):
        x = np.arange(lo, min(lo + _CHUNK, ring.size))
        hit = ring.mul(x, x) == x
        out.append(x[hit])
    return np.concatenate(out).astype(np.int64)


def noncommuting_witness(ring: FiniteRing, a: int):
    """First generator g (in generating-set order) with ag != ga, or None."""
    gens = ring.generating_set()
    for lo in range(0, len(gens), _CHUNK):
        g = gens[lo : lo + _CHUNK]
        bad = ring.mul(a, g) != ring.mul(g, a)
        if bad.any():
            return int(g[int(np.argmax(bad))])
    return None


def is_central(ring: FiniteRing, a: int) -> bool:
    return noncommuting_witness(ring, a) is None


def central_mask(ring: FiniteRing, candidates: np.ndarray) -> np.ndarray:
    """Boolean mask over candidates marking the central ones."""
    cand = np.asarray(candidates, dtype=np.int64)
    mask = np.ones(len(cand), dtype=bool)
    alive = np.arange(len(cand))
    gens = ring.generating_set()
    step = max(1, _CHUNK // max(len(cand), 1))
    for lo in range(0, len(gens), step):
        if not len(alive):
            break
        g = gens[lo : lo + step]
        cur = cand[alive][:, None]
        bad = (ring.mul(cur, g[None, :]) != ring.mul(g[None, :], cur)).any(axis=1)
        mask[alive[bad]] = False
        alive = alive[~bad]
    return mask


def central_idempotents(ring: FiniteRing) -> np.ndarray:
    """Ascending indices of central idempotents."""
    idem = idempotents(ring)
    return idem[central_mask(ring, idem)]


def abelian_failure(ring: FiniteRing):
    """None if every idempotent is central, else (e, r) with er != re."""
    for e in idempotents(ring):
        r = noncommuting_witness(ring, int(e))
        if r is not None:
            return (int(e), r)
    return None


def is_abelian(ring: FiniteRing) -> bool:
    """True when every idempotent commutes with everything."""
    return abelian_failure(ring) is None


def is_invertible(ring: FiniteRing, a: int) -> bool:
    """True when a has a two-sided multiplicative inverse."""
    every = ring.elements()
    left = ring.mul(a, every) == ring.one
    right = ring.mul(every, a) == ring.one
    return bool((left & right).any())


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class SubsetIdeal:
    """A verified two-sided ideal given by its ascending element indices."""

    ring: FiniteRing = field(compare=False)
    elements: tuple[int, ...]
    label: str = ""

    def __contains__(self, a: int) -> bool:
        return int(a) in self._set

    @property
    def _set(self):
        s = getattr(self, "_set_cache", None)
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_set_cache", s)
        return s


class NotAnIdealError(RingError):
    def __init__(self, label, reason, witness):
        self.reason = reason
        self.witness = witness
        super().__init__(f"{label}: not a two-sided ideal ({reason} at {witness})")


def make_ideal(ring: FiniteRing, elems, label: str = "") -> SubsetIdeal:
    """Wrap a subset after verifying ideal closure (raises if it fails)."""
    elems = np.unique(np.asarray(list(elems), dtype=np.int64))
    sset = set(int(x) for x in elems)
    if ring.zero not in sset:
        raise NotAnIdealError(label or "subset", "missing zero", (ring.zero,))
    for a in elems:
        s = ring.add(int(a), elems)
        for v in np.asarray(s).ravel():
            if int(v) not in sset:
                raise NotAnIdealError(label or "subset", "add closure", (int(a),))
    every = ring.elements()
    for a in elems:
        for prod in (ring.mul(every, int(a)), ring.mul(int(a), every)):
            for v in np.unique(np.asarray(prod)):
                if int(v) not in sset:
                    raise NotAnIdealError(label or "subset", "mul absorption", (int(a),))
    return SubsetIdeal(ring, tuple(int(x) for x in elems), label)


def principal_right_set(ring: FiniteRing, e: int) -> np.ndarray:
    """The set e*R as ascending indices (not verified as two-sided)."""
    return np.unique(np.asarray(ring.mul(int(e), ring.elements())))


# ---------------------------------------------------------------------------
# constructors


def make_zn(n: int) -> TableRing:
    if n < 2:
        raise ValueError("Z_n needs n >= 2")
    idx = np.arange(n)
    add = (idx[:, None] + idx[None, :]) % n
    mul = (idx[:, None] * idx[None, :]) % n
    return TableRing(f"Z{n}", add, mul, 1, [str(i) for i in range(n)])


def make_product(r1: TableRing, r2: TableRing) -> TableRing:
    """Direct product with componentwise operations; index = i1*|R2| + i2."""
    s1, s2 = r1.size, r2.size
    if s1 * s2 > DEFAULT_TABLE_BUDGET:
        raise BudgetError(f"product size {s1 * s2} exceeds {DEFAULT_TABLE_BUDGET}")
    idx = np.arange(s1 * s2)
    x1, x2 = idx // s2, idx % s2
    X1, Y1 = x1[:, None], x1[None, :]
    X2, Y2 = x2[:, None], x2[None, :]
    add = r1.add_table[X1, Y1] * s2 + r2.add_table[X2, Y2]
    mul = r1.mul_table[X1, Y1] * s2 + r2.mul_table[X2, Y2]
    names = [f"({r1.element_name(int(a))}|{r2.element_name(int(b))})" for a, b in zip(x1, x2)]
    one = r1.one * s2 + r2.one
    return TableRing(f"{r1.name}x{r2.name}", add, mul, one, names)


def _digits(idx: np.ndarray, base: int, width: int) -> np.ndarray:
    """Big-endian base-`base` digits, shape idx.shape + (width,)."""
    out = np.empty(idx.shape + (width,), dtype=np.int64)
    x = idx.copy()
    for k in range(width - 1, -1, -1):
        out[..., k] = x % base
        x //= base
    return out


def _undigits(dig: np.ndarray, base: int) -> np.ndarray:
    out = np.zeros(dig.shape[:-1], dtype=np.int64)
    for k in range(dig.shape[-1]):
        out = out * base + dig[..., k]
    return out


def make_matrix_ring(base: TableRing, k: int = 2) -> TableRing:
    """k x k matrices over a table ring, entries packed row-major."""
    m = base.size**(k * k)
    if m > DEFAULT_TABLE_BUDGET:
        raise BudgetError(f"M{k}({base.name}) has size {m} > {DEFAULT_TABLE_BUDGET}")
    idx = np.arange(m)
    dig = _digits(idx, base.size, k * k)  # (m, k*k)
    A = dig[:, None, :, ]  # broadcast over pairs
    B = dig[None, :, :]
    add = _undigits(base.add_table[A, B], base.size)
    ent = dig.reshape(m, k, k)
    prod = np.zeros((m, m, k, k), dtype=np.int64)
    for r in range(k):
        for c in range(k):
            acc = np.zeros((m, m), dtype=np.int64)
            for t in range(k):
                term = base.mul_table[ent[:, None, r, t], ent[None, :, t, c]]
                acc = base.add_table[acc, term]
            prod[:, :, r, c] = acc
    mul = _undigits(prod.reshape(m, m, k * k), base.size)
    eye = np.zeros((k, k), dtype=np.int64)
    for t in range(k):
        eye[t, t] = base.one
    one = int(_undigits(eye.reshape(k * k), base.size))
    names = []
    for i in range(m):
        rows = [
            ",".join(base.element_name(int(v)) for v in ent[i, r])
            for r in range(k)
        ]
        names.append("[" + ";".join(rows) + "]")
    return TableRing(f"M{k}({base.name})", add, mul, one, names)


def make_r3(base: TableRing) -> TableRing:
    """Upper-triangular 3x3 matrices a*I + b*E12 + c*E13 + d*E23 over a base ring.

    Element index packs the four free entries (a, b, c, d) big-endian;
    the product is (aa', ab'+ba', ac'+bd'+ca', ad'+da').
    """
    m = base.size**4
    if m > DEFAULT_TABLE_BUDGET:
        raise BudgetError(f"R3({base.name}) has size {m} > {DEFAULT_TABLE_BUDGET}")
    idx = np.arange(m)
    dig = _digits(idx, base.size, 4)
    X = dig[:, None, :]
    Y = dig[None, :, :]
    add = _undigits(base.add_table[X, Y], base.size)
    am, aa = base.mul_table, base.add_table
    a1, b1, c1, d1 = dig[:, 0][:, None], dig[:, 1][:, None], dig[:, 2][:, None], dig[:, 3][:, None]
    a2, b2, c2, d2 = dig[:, 0][None, :], dig[:, 1][None, :], dig[:, 2][None, :], dig[:, 3][None, :]
    pa = am[a1, a2]
    pb = aa[am[a1, b2], am[b1, a2]]
    pc = aa[aa[am[a1, c2], am[b1, d2]], am[c1, a2]]
    pd = aa[am[a1, d2], am[d1, a2]]
    mul = _undigits(np.stack([pa, pb, pc, pd], axis=-1), base.size)
    one = int(_undigits(np.array([base.one, 0, 0, 0]), base.size))
    names = [
        "ut3[{},{},{},{}]".format(*(base.element_name(int(v)) for v in dig[i]))
        for i in range(m)
    ]
    return TableRing(f"R3({base.name})", add, mul, one, names)


def make_s_ring(base: TableRing) -> SRing:
    """The block ring S over 2x2 matrices over `base` (structural carrier)."""
    block = make_matrix_ring(base, 2)
    return SRing(block, f"S({base.name})")

"""Generalized weight modules over finite support windows.

A ModuleWindow stores, for a product of integer intervals in orbit
coordinates, the dimension of every (generalized) weight space and exact
matrices for the generators d_i (lowering slot i by one), int_i (raising)
and H_i (endomorphism of each space).  All constructions and decompositions
are window-relative: answers certified on the window, with the window
requirements surfaced explicitly when transport room is missing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .linalg import (
    BlockSystem,
    Mat,
    column_space_basis,
    complete_basis,
    in_span,
    invert,
    kernel_basis,
    rank,
    rref,
    solve_linear,
)
from .local_ideals import LocalIdeal, MaxIdeal, QuotientBasis, quotient_basis
from .poly import MultiPoly
from .scalars import ONE, ZERO, Scalar

Point = Tuple[int, ...]
Window = Tuple[Tuple[int, int], ...]


class DomainError(ValueError):
    """A well-formed request whose mathematical preconditions fail."""


# -- orbits and degeneracy sets --------------------------------------------


class Orbit:
    """A coset lambda + Z^n of weights, stored by canonical representatives.

    Integer slots carry representative 0; other slots carry the input value
    shifted by an integer so the real part lies in [0, 1).
    """

    __slots__ = ("reps", "integer")

    def __init__(self, reps: Sequence[Scalar], integer: Sequence[bool]):
        self.reps = tuple(reps)
        self.integer = tuple(integer)
        if len(self.reps) != len(self.integer):
            raise ValueError("orbit slot mismatch")

    @staticmethod
    def from_reps(values: Sequence) -> "Orbit":
        reps = []
        flags = []
        for v in values:
            s = Scalar.of(v)
            if s.is_integer():
                reps.append(ZERO)
                flags.append(True)
            else:
                shift = s.re - (s.re.numerator // s.re.denominator)
                reps.append(Scalar(shift, s.im))
                flags.append(False)
        return Orbit(reps, flags)

    @property
    def n(self) -> int:
        return len(self.reps)

    def integer_slots(self) -> Tuple[int, ...]:
        return tuple(j for j, f in enumerate(self.integer, start=1) if f)

    def weight(self, slot: int, offset: int) -> Scalar:
        return self.reps[slot - 1] + Scalar(offset)

    def __eq__(self, other):
        return (
            isinstance(other, Orbit)
            and self.reps == other.reps
            and self.integer == other.integer
        )

    def __hash__(self):
        return hash((self.reps, self.integer))

    def __repr__(self):
        slots = ["Z" if f else str(r) for r, f in zip(self.reps, self.integer)]
        return f"Orbit({','.join(slots)})"


class DSet:
    """An orbit plus a chosen subset of its integer slots."""

    __slots__ = ("orbit", "D")

    def __init__(self, orbit: Orbit, D: Iterable[int]):
        self.orbit = orbit
        self.D = frozenset(D)
        allowed = set(orbit.integer_slots())
        if not self.D <= allowed:
            raise ValueError(
                f"degenerate slots {sorted(self.D - allowed)} are not integer slots"
            )

    @property
    def n(self) -> int:
        return self.orbit.n

    def complement(self) -> Tuple[int, ...]:
        return tuple(j for j in range(1, self.n + 1) if j not in self.D)

    def __eq__(self, other):
        return isinstance(other, DSet) and self.orbit == other.orbit and self.D == other.D

    def __hash__(self):
        return hash((self.orbit, self.D))

    def __repr__(self):
        return f"DSet({self.orbit!r}, D={sorted(self.D)})"


@dataclass(frozen=True)
class AnnihilatorLabel:
    """The annihilator prime: the sum of the slot primes listed."""

    prime_slots: Tuple[int, ...]

    @property
    def height(self) -> int:
        return len(self.prime_slots)

    def __repr__(self):
        if not self.prime_slots:
            return "Ann(0)"
        return "Ann(" + "+".join(f"p_{j}" for j in self.prime_slots) + ")"


class Fiber:
    """Finite-dimensional module over the polynomial part at one weight:
    commuting matrices A_j with A_j - mu_j nilpotent."""

    def __init__(self, slots: Sequence[int], center: Sequence, matrices: Sequence[Mat]):
        self.slots = tuple(slots)
        self.center = tuple(Scalar.of(c) for c in center)
        self.matrices = tuple(matrices)
        if not (len(self.slots) == len(self.center) == len(self.matrices)):
            raise ValueError("fiber slot data mismatch")
        d = self.matrices[0].rows if self.matrices else 1
        self.dim = d
        for A in self.matrices:
            if A.shape != (d, d):
                raise ValueError("fiber matrices must be square of equal size")
        for a in range(len(self.matrices)):
            for b in range(a + 1, len(self.matrices)):
                if self.matrices[a] @ self.matrices[b] != self.matrices[b] @ self.matrices[a]:
                    raise DomainError("fiber matrices do not commute")
        for A, mu in zip(self.matrices, self.center):
            N = A - Mat.identity(d).scale(mu)
            P = Mat.identity(d)
            for _ in range(d):
                P = P @ N
            if not P.is_zero():
                raise DomainError("fiber matrix is not nilpotent around its center")

    @property
    def k(self) -> int:
        return len(self.slots)

    def __repr__(self):
        return f"Fiber(slots={self.slots}, dim={self.dim})"


# -- module windows ---------------------------------------------------------


class ModuleWindow:
    """A generalized weight module restricted to a finite window."""

    def __init__(
        self,
        orbit: Orbit,
        window: Window,
        spaces: Dict[Point, int],
        maps: Dict[Tuple[str, int, Point], Mat],
        side: str = "left",
    ):
        if len(window) != orbit.n:
            raise ValueError("window arity mismatch")
        if side not in ("left", "right"):
            raise ValueError("side must be left or right")
        self.orbit = orbit
        self.window = tuple((int(a), int(b)) for a, b in window)
        for a, b in self.window:
            if a > b:
                raise ValueError("empty window interval")
        self.spaces = {tuple(p): int(d) for p, d in spaces.items() if d > 0}
        for p in self.spaces:
            if not self.in_window(p):
                raise ValueError(f"support point {p} outside window")
        self.maps = dict(maps)
        self.side = side
        self._validate_shapes()

    # -- geometry ------------------------------------------------------

    @property
    def n(self) -> int:
        return self.orbit.n

    def in_window(self, p: Point) -> bool:
        return all(a <= x <= b for x, (a, b) in zip(p, self.window))

    def points(self) -> Iterable[Point]:
        return product(*[range(a, b + 1) for a, b in self.window])

    def dim(self, p: Point) -> int:
        return self.spaces.get(tuple(p), 0)

    def support(self) -> List[Point]:
        return sorted(self.spaces)

    def total_dim(self) -> int:
        return sum(self.spaces.values())

    def weight(self, p: Point) -> Tuple[Scalar, ...]:
        return tuple(self.orbit.weight(j, p[j - 1]) for j in range(1, self.n + 1))

    @staticmethod
    def shift(p: Point, slot: int, d: int) -> Point:
        q = list(p)
        q[slot - 1] += d
        return tuple(q)

    def target(self, kind: str, slot: int, p: Point) -> Point:
        if kind == "H":
            return tuple(p)
        d = -1 if kind == "d" else 1
        if self.side == "right":
            d = -d
        return self.shift(p, slot, d)

    def map(self, kind: str, slot: int, p: Point) -> Mat:
        """Generator matrix at p; a shaped zero when nothing is stored."""
        p = tuple(p)
        m = self.maps.get((kind, slot, p))
        if m is not None:
            return m
        q = self.target(kind, slot, p)
        return Mat.zero(self.dim(q) if self.in_window(q) else 0, self.dim(p))

    def _validate_shapes(self):
        for (kind, slot, p), m in self.maps.items():
            if kind not in ("d", "int", "H"):
                raise ValueError(f"unknown generator kind {kind!r}")
            if not 1 <= slot <= self.n:
                raise ValueError(f"slot {slot} out of range")
            q = self.target(kind, slot, p)
            if not self.in_window(p) or not self.in_window(q):
                raise ValueError(f"map at {p} leaves the window")
            if m.shape != (self.dim(q), self.dim(p)):
                raise ValueError(
                    f"map {kind}_{slot} at {p}: shape {m.shape}, expected "
                    f"({self.dim(q)}, {self.dim(p)})"
                )

    # -- structural checks --------------------------------------------

    def relation_violations(self) -> List[str]:
        """Defining relations as matrix identities on interior points."""
        out = []
        if self.side != "left":
            return out
        for p in self.support():
            d = self.dim(p)
            idm = Mat.identity(d)
            for i in range(1, self.n + 1):
                up = self.shift(p, i, 1)
                dn = self.shift(p, i, -1)
                if self.in_window(up):
                    DI = self.map("d", i, up) @ self.map("int", i, p)
                    if DI != idm:
                        out.append(f"d_{i} int_{i} != id at {p}")
                    lhs = self.map("H", i, up) @ self.map("int", i, p) - self.map(
                        "int", i, p
                    ) @ self.map("H", i, p)
                    if lhs != self.map("int", i, p):
                        out.append(f"[H_{i}, int_{i}] != int_{i} at {p}")
                if self.in_window(dn):
                    lhs = self.map("H", i, dn) @ self.map("d", i, p) - self.map(
                        "d", i, p
                    ) @ self.map("H", i, p)
                    if lhs != -self.map("d", i, p):
                        out.append(f"[H_{i}, d_{i}] != -d_{i} at {p}")
                    proj = idm - self.map("int", i, dn) @ self.map("d", i, p)
                    if self.map("H", i, p) @ proj != proj or proj @ self.map(
                        "H", i, p
                    ) != proj:
                        out.append(f"H_{i}(1 - int_{i} d_{i}) != 1 - int_{i} d_{i} at {p}")
                # cross-slot commutation
                for j in range(i + 1, self.n + 1):
                    for ki in ("d", "int", "H"):
                        for kj in ("d", "int", "H"):
                            qi = self.target(ki, i, p)
                            qj = self.target(kj, j, p)
                            if not (self.in_window(qi) and self.in_window(qj)):
                                continue
                            a = self.map(ki, i, qj) @ self.map(kj, j, p)
                            b = self.map(kj, j, qi) @ self.map(ki, i, p)
                            if a != b:
                                out.append(f"{ki}_{i} and {kj}_{j} do not commute at {p}")
        return out

    def is_weight(self) -> Tuple[bool, Optional[Point]]:
        """True when every H_i acts as its weight scalar at every point."""
        for p in self.support():
            for i in range(1, self.n + 1):
                w = self.orbit.weight(i, p[i - 1])
                if self.map("H", i, p) != Mat.identity(self.dim(p)).scale(w):
                    return False, p
        return True, None

    def __eq__(self, other):
        if not isinstance(other, ModuleWindow):
            return NotImplemented
        if (
            self.orbit != other.orbit
            or self.window != other.window
            or self.spaces != other.spaces
            or self.side != other.side
        ):
            return False
        for p in self.support():
            for i in range(1, self.n + 1):
                for kind in ("d", "int", "H"):
                    q = self.target(kind, i, p)
                    if not self.in_window(q):
                        continue
                    if self.map(kind, i, p) != other.map(kind, i, p):
                        return False
        return True

    def __repr__(self):
        return (
            f"ModuleWindow(orbit={self.orbit!r}, window={self.window}, "
            f"total_dim={self.total_dim()}, side={self.side})"
        )


def _parse_window(window, n: int) -> Window:
    w = tuple((int(a), int(b)) for a, b in window)
    if len(w) != n:
        raise ValueError("window arity mismatch")
    return w


# -- constructions ----------------------------------------------------------


def induce(fiber: Fiber, dset: DSet, window) -> ModuleWindow:
    """Window slice of the module induced from a fiber: polynomial slots for
    the degenerate directions, identity transports elsewhere, and the fiber
    matrices (recentred per weight) for the H-action."""
    orbit = dset.orbit
    n = orbit.n
    w = _parse_window(window, n)
    deg = sorted(dset.D)
    nondeg = [j for j in range(1, n + 1) if j not in dset.D]
    if tuple(fiber.slots) != tuple(nondeg):
        raise DomainError(
            f"fiber slots {fiber.slots} do not match non-degenerate slots {tuple(nondeg)}"
        )
    offset0 = {}
    for j, mu in zip(fiber.slots, fiber.center):
        diff = mu - orbit.reps[j - 1]
        if not diff.is_integer():
            raise DomainError(f"fiber center at slot {j} is outside the orbit")
        offset0[j] = int(diff.re)
    d = fiber.dim
    spaces: Dict[Point, int] = {}
    for p in product(*[range(a, b + 1) for a, b in w]):
        if all(p[i - 1] >= 1 for i in deg):
            spaces[p] = d
    maps: Dict[Tuple[str, int, Point], Mat] = {}
    idm = Mat.identity(d)
    nil = {
        j: A - Mat.identity(d).scale(mu)
        for j, mu, A in zip(fiber.slots, fiber.center, fiber.matrices)
    }
    for p in spaces:
        for i in range(1, n + 1):
            up = ModuleWindow.shift(p, i, 1)
            dn = ModuleWindow.shift(p, i, -1)
            if i in dset.D:
                maps[("H", i, p)] = idm.scale(Scalar(p[i - 1]))
                if _inside(up, w):
                    maps[("int", i, p)] = idm
                if _inside(dn, w):
                    maps[("d", i, p)] = idm if dn[i - 1] >= 1 else Mat.zero(0, d)
            else:
                wgt = orbit.weight(i, p[i - 1])
                maps[("H", i, p)] = idm.scale(wgt) + nil[i]
                if _inside(up, w):
                    maps[("int", i, p)] = idm
                if _inside(dn, w):
                    maps[("d", i, p)] = idm
    return ModuleWindow(orbit, w, spaces, maps)


def _inside(p: Point, w: Window) -> bool:
    return all(a <= x <= b for x, (a, b) in zip(p, w))


def build_simple(dset: DSet, window) -> ModuleWindow:
    """The simple weight module labeled by a degeneracy set."""
    nondeg = [j for j in range(1, dset.n + 1) if j not in dset.D]
    center = [dset.orbit.reps[j - 1] for j in nondeg]
    fiber = Fiber(nondeg, center, [Mat.identity(1).scale(c) for c in center])
    return induce(fiber, dset, window)


def build_Ms(s: int, lam, window) -> ModuleWindow:
    """Arity-1 indecomposable generalized weight module of length s with
    every weight space s-dimensional."""
    if s <= 0:
        raise DomainError("length parameter must be positive")
    lam = Scalar.of(lam)
    orbit = Orbit.from_reps([lam])
    ideal = LocalIdeal.from_shifted(
        MaxIdeal([orbit.reps[0]]), s, [MultiPoly.var(1, 1) ** s]
    )
    return build_V(ideal, DSet(orbit, []), window)


def build_V(ideal: LocalIdeal, dset: DSet, window) -> ModuleWindow:
    """Induced module with fiber D_k/I (regular action)."""
    nondeg = [j for j in range(1, dset.n + 1) if j not in dset.D]
    if ideal.n != len(nondeg):
        raise DomainError(
            f"ideal arity {ideal.n} does not match {len(nondeg)} non-degenerate slots"
        )
    for j, mu in zip(nondeg, ideal.center.center):
        rep = dset.orbit.reps[j - 1]
        if not (mu - rep).is_integer():
            raise DomainError(f"ideal center at slot {j} is outside the orbit")
    qb = quotient_basis(ideal)
    mats = []
    for r, j in enumerate(nondeg, start=1):
        mu = ideal.center.center[r - 1]
        mats.append(qb.multiplication_matrix(r) + Mat.identity(qb.dim).scale(mu))
    fiber = Fiber(nondeg, ideal.center.center, mats)
    return induce(fiber, dset, window)


def support(M: ModuleWindow) -> List[Point]:
    return M.support()


def is_equidimensional(M: ModuleWindow) -> bool:
    dims = set(M.spaces.values())
    return len(dims) <= 1


@dataclass(frozen=True)
class SupportProfile:
    """Finite description of a module's support for generation tests:
    how many orbits meet the support, and a uniform weight-space bound."""

    orbit_count: Optional[int]  # None means infinitely many orbits
    dim_bound: Optional[int]  # None means unbounded dimensions


def finitely_generated(profile: SupportProfile) -> bool:
    return profile.orbit_count is not None and profile.dim_bound is not None


# -- annihilators and decomposition -----------------------------------------


def _socle_projector(M: ModuleWindow, slot: int, p: Point) -> Optional[Mat]:
    """Matrix of 1 - int_i d_i at p, or None when the window lacks room."""
    dn = ModuleWindow.shift(p, slot, -1)
    if not M.in_window(dn):
        return None
    d = M.dim(p)
    return Mat.identity(d) - M.map("int", slot, dn) @ M.map("d", slot, p)


def annihilator_dset(M: ModuleWindow, strict: bool = True) -> Tuple[FrozenSet[int], AnnihilatorLabel]:
    """Slots where the socle ideal acts nonzero, plus the annihilator label.

    With strict=True the per-slot behaviour must be block-consistent
    (projector equal to the identity exactly on first-layer points)."""
    active = set()
    for i in range(1, M.n + 1):
        seen = False
        nonzero = False
        for p in M.support():
            P = _socle_projector(M, i, p)
            if P is None:
                continue
            seen = True
            if not P.is_zero():
                nonzero = True
                if strict:
                    if not M.orbit.integer[i - 1]:
                        raise DomainError(
                            f"socle action on non-integer slot {i} at {p}"
                        )
                    if p[i - 1] != 1 or not P.is_identity():
                        raise DomainError(
                            f"inconsistent socle action in slot {i} at {p}: "
                            "module is not a single block"
                        )
        if not seen and M.support():
            lo = min(p[i - 1] for p in M.support())
            raise DomainError(
                f"window too small to probe slot {i}: extend slot interval "
                f"below {lo}"
            )
        if nonzero:
            active.add(i)
    if strict:
        for i in active:
            for p in M.support():
                if p[i - 1] < 1:
                    raise DomainError(
                        f"slot {i} has socle action but support below 1 at {p}"
                    )
    comp = tuple(j for j in range(1, M.n + 1) if j not in active)
    return frozenset(active), AnnihilatorLabel(comp)


def _restrict_to_bases(M: ModuleWindow, bases: Dict[Point, Mat]) -> ModuleWindow:
    """Submodule window in the coordinates of the given pointwise bases."""
    spaces = {p: B.cols for p, B in bases.items() if B.cols > 0}
    maps: Dict[Tuple[str, int, Point], Mat] = {}
    for p in spaces:
        Bp = bases[p]
        for i in range(1, M.n + 1):
            for kind in ("d", "int", "H"):
                q = M.target(kind, i, p)
                if not M.in_window(q):
                    continue
                img = M.map(kind, i, p) @ Bp
                Bq = bases.get(q, Mat.zero(M.dim(q), 0))
                X = _coords(Bq, img)
                if X is None:
                    raise DomainError(
                        f"bases are not stable under {kind}_{i} at {p}"
                    )
                maps[(kind, i, p)] = X
    return ModuleWindow(M.orbit, M.window, spaces, maps, M.side)


def _coords(B: Mat, V: Mat) -> Optional[Mat]:
    """Solve B @ X = V column by column; None when some column is outside."""
    cols = []
    for j in range(V.cols):
        b = Mat.col_vector(V.col(j))
        if B.cols == 0:
            if not b.is_zero():
                return None
            cols.append([])
            continue
        sol = solve_linear(B, b)
        if sol is None:
            return None
        cols.append([sol.particular.data[r][0] for r in range(B.cols)])
    return Mat(B.cols, V.cols, [[cols[j][r] for j in range(V.cols)] for r in range(B.cols)])


def _transported_projector(M: ModuleWindow, slot: int, p: Point) -> Mat:
    """Window matrix at p of the diagonal socle unit at layer p_slot."""
    c = p[slot - 1]
    d = M.dim(p)
    if c < 1:
        return Mat.zero(d, d)
    if M.window[slot - 1][0] > 0:
        raise DomainError(
            f"window too small for socle transport in slot {slot}: "
            f"extend the slot interval down to 0"
        )
    down = []
    cur = p
    for _ in range(c - 1):
        down.append(M.map("d", slot, cur))
        cur = ModuleWindow.shift(cur, slot, -1)
    E = _socle_projector(M, slot, cur)
    up = []
    for _ in range(c - 1):
        up.append(M.map("int", slot, cur))
        cur = ModuleWindow.shift(cur, slot, 1)
    comp = Mat.identity(d)
    for m in down:
        comp = m @ comp
    comp = E @ comp
    for m in up:
        comp = m @ comp
    return comp


def block_decompose(M: ModuleWindow) -> List[Tuple[DSet, ModuleWindow]]:
    """Split a window into its degeneracy-labeled blocks by exact projectors."""
    dd = M.orbit.integer_slots()
    proj: Dict[Tuple[int, Point], Mat] = {}
    for i in dd:
        for p in M.support():
            proj[(i, p)] = _transported_projector(M, i, p)
    blocks: List[Tuple[DSet, ModuleWindow]] = []
    covered = {p: 0 for p in M.support()}
    for r in range(len(dd) + 1):
        for D in combinations(dd, r):
            bases = {}
            nonzero = False
            for p in M.support():
                d = M.dim(p)
                P = Mat.identity(d)
                for i in dd:
                    Pi = proj[(i, p)]
                    P = P @ (Pi if i in D else Mat.identity(d) - Pi)
                cols = column_space_basis(
                    [Mat.col_vector(P.col(j)) for j in range(d)], d
                )
                if cols:
                    nonzero = True
                    bases[p] = Mat(
                        d, len(cols), [[c.data[rr][0] for c in cols] for rr in range(d)]
                    )
            if not nonzero:
                continue
            sub = _restrict_to_bases(M, bases)
            for p, B in bases.items():
                covered[p] += B.cols
            blocks.append((DSet(M.orbit, D), sub))
    for p, c in covered.items():
        if c != M.dim(p):
            raise DomainError(
                f"projector split does not exhaust the space at {p}: {c} of {M.dim(p)}"
            )
    return blocks


def decompose_weight(M: ModuleWindow) -> Dict[DSet, int]:
    """Multiset of simple labels of a weight module window."""
    ok, bad = M.is_weight()
    if not ok:
        raise DomainError(f"module is not a weight module at point {bad}")
    out: Dict[DSet, int] = {}
    for dset, sub in block_decompose(M):
        if not is_equidimensional(sub):
            raise DomainError(f"block {dset!r} is not equidimensional")
        if not sub.spaces:
            continue
        mult = next(iter(sub.spaces.values()))
        out[dset] = out.get(dset, 0) + mult
    return out


def fiber(M: ModuleWindow, p: Point) -> Fiber:
    """The finite-dimensional fiber datum at a support point.

    p must sit on the first layer (offset 1) of every degenerate slot."""
    p = tuple(p)
    if M.dim(p) == 0:
        raise DomainError(f"{p} is not a support point")
    active, _ = annihilator_dset(M)
    for i in active:
        if p[i - 1] != 1:
            raise DomainError(
                f"fiber point must have offset 1 in degenerate slot {i}"
            )
    nondeg = [j for j in range(1, M.n + 1) if j not in active]
    center = [M.orbit.weight(j, p[j - 1]) for j in nondeg]
    mats = [M.map("H", j, p) for j in nondeg]
    return Fiber(nondeg, center, mats)


def dualize(M: ModuleWindow) -> ModuleWindow:
    """The same spaces viewed as a right module: m * a := a-involuted * m.

    Generator maps swap roles (d acts by the stored int map and vice versa);
    supports are untouched and dualizing twice is the identity."""
    maps = {}
    swap = {"d": "int", "int": "d", "H": "H"}
    for (kind, slot, p), m in M.maps.items():
        maps[(swap[kind], slot, p)] = m
    side = "right" if M.side == "left" else "left"
    return ModuleWindow(M.orbit, M.window, M.spaces, maps, side)


# -- homomorphisms, extensions, isomorphism ---------------------------------


def _hom_system(M: ModuleWindow, N: ModuleWindow) -> Tuple[BlockSystem, List[Point]]:
    if M.orbit != N.orbit or M.window != N.window or M.side != N.side:
        raise DomainError("modules live on different windows")
    pts = sorted(M.points())
    sys = BlockSystem()
    for p in pts:
        sys.add_unknown(_vn(p), N.dim(p), M.dim(p))
    for p in pts:
        for i in range(1, M.n + 1):
            for kind in ("d", "int", "H"):
                q = M.target(kind, i, p)
                if not M.in_window(q):
                    continue
                # phi(q) f_M = f_N phi(p), both sides dimN(q) x dimM(p)
                sys.add_equation(
                    [
                        (_vn(q), None, M.map(kind, i, p), 1),
                        (_vn(p), N.map(kind, i, p), None, -1),
                    ]
                )
    return sys, pts


def _vn(p: Point) -> str:
    return "phi@" + ",".join(str(x) for x in p)


def hom_basis(M: ModuleWindow, N: ModuleWindow) -> List[Dict[Point, Mat]]:
    """Basis of the space of window module maps M -> N."""
    sys, pts = _hom_system(M, N)
    sol = sys.solve()
    if sol is None:
        raise AssertionError("homogeneous system cannot be inconsistent")
    _, kern = sol
    out = []
    for k in kern:
        out.append({p: k[_vn(p)] for p in pts})
    return out

def _invertible_combination(
    basis: List[Dict[Point, Mat]], pts: List[Point], dims: Dict[Point, int]
) -> Optional[Dict[Point, Mat]]:
    """Deterministic search for an everywhere-invertible combination."""
    if not basis:
        if all(d == 0 for d in dims.values()):
            return {}
        return None
    total = sum(dims.values())
    grid = range(total + 1)
    for coeffs in product(grid, repeat=len(basis)):
        if all(c == 0 for c in coeffs):
            continue
        cand = {}
        ok = True
        for p in pts:
            m = Mat.zero(dims[p], dims[p])
            for c, b in zip(coeffs, basis):
                if c:
                    m = m + b[p].scale(c)
            if dims[p] and rank(m) != dims[p]:
                ok = False
                break
            cand[p] = m
        if ok:
            return cand
    return None


def window_isomorphism(M: ModuleWindow, N: ModuleWindow) -> Optional[Dict[Point, Mat]]:
    """An invertible window module map M -> N, or None."""
    if M.orbit != N.orbit or M.window != N.window:
        return None
    if {p: M.dim(p) for p in M.support()} != {p: N.dim(p) for p in N.support()}:
        return None
    basis = hom_basis(M, N)
    pts = sorted(M.points())
    dims = {p: M.dim(p) for p in pts}
    return _invertible_combination(basis, pts, dims)


def split_extension(
    M: ModuleWindow, S: Dict[Point, Mat]
) -> Optional[Dict[Point, Mat]]:
    """Complement of a generator-stable submodule, or None when none exists.

    S maps support points to column bases of the subspaces.  The answer is a
    pointwise basis of an invariant complement found by solving for a module
    retraction onto S."""
    Ssub = {p: B for p, B in S.items() if B.cols > 0}
    restriction = {}
    for p, B in Ssub.items():
        if B.rows != M.dim(p):
            raise DomainError(f"submodule basis at {p} has wrong height")
    # stability and induced maps
    for p, B in Ssub.items():
        for i in range(1, M.n + 1):
            for kind in ("d", "int", "H"):
                q = M.target(kind, i, p)
                if not M.in_window(q):
                    continue
                img = M.map(kind, i, p) @ B
                Bq = Ssub.get(q, Mat.zero(M.dim(q), 0))
                X = _coords(Bq, img)
                if X is None:
                    raise DomainError(f"submodule is not stable under {kind}_{i} at {p}")
                restriction[(kind, i, p)] = X
    sys = BlockSystem()
    pts = sorted(M.points())
    for p in pts:
        s = Ssub[p].cols if p in Ssub else 0
        sys.add_unknown(_vn(p), s, M.dim(p))
    for p in pts:
        s = Ssub[p].cols if p in Ssub else 0
        if s:
            sys.add_equation([(_vn(p), None, Ssub[p], 1)], Mat.identity(s))
        for i in range(1, M.n + 1):
            for kind in ("d", "int", "H"):
                q = M.target(kind, i, p)
                if not M.in_window(q):
                    continue
                fS = restriction.get(
                    (kind, i, p),
                    Mat.zero(
                        Ssub[q].cols if q in Ssub else 0,
                        Ssub[p].cols if p in Ssub else 0,
                    ),
                )
                sys.add_equation(
                    [
                        (_vn(q), None, M.map(kind, i, p), 1),
                        (_vn(p), fS, None, -1),
                    ]
                )
    sol = sys.solve()
    if sol is None:
        return None
    part, _ = sol
    complement = {}
    for p in pts:
        rho = part[_vn(p)]
        if rho.rows == 0:
            complement[p] = Mat.identity(M.dim(p))
            continue
        kb = kernel_basis(rho)
        if len(kb) != M.dim(p) - rho.rows:
            return None
        if kb:
            complement[p] = Mat(
                M.dim(p), len(kb), [[k.data[r][0] for k in kb] for r in range(M.dim(p))]
            )
        else:
            complement[p] = Mat(M.dim(p), 0)
    return complement


# -- absolute primeness ------------------------------------------------------


def _cyclic_closure(M: ModuleWindow, p: Point, v: Mat) -> Dict[Point, Mat]:
    """Pointwise bases of the submodule generated by one vector."""
    spans: Dict[Point, List[Mat]] = {q: [] for q in M.support()}
    spans[p].append(v)
    changed = True
    while changed:
        changed = False
        for q in M.support():
            for i in range(1, M.n + 1):
                for kind in ("d", "int", "H"):
                    t = M.target(kind, i, q)
                    if not M.in_window(t) or M.dim(t) == 0:
                        continue
                    f = M.map(kind, i, q)
                    for vec_ in list(spans[q]):
                        img = f @ vec_
                        if img.is_zero():
                            continue
                        if not in_span(img, spans[t]):
                            spans[t].append(img)
                            changed = True
    out = {}
    for q, vs in spans.items():
        basis = column_space_basis(vs, M.dim(q))
        if basis:
            out[q] = Mat(
                M.dim(q),
                len(basis),
                [[b.data[r][0] for b in basis] for r in range(M.dim(q))],
            )
    return out


def _quotient_module(M: ModuleWindow, S: Dict[Point, Mat]) -> ModuleWindow:
    """Quotient of M by the stable pointwise subspaces S."""
    proj = {}
    spaces = {}
    for p in M.support():
        B = S.get(p, Mat(M.dim(p), 0))
        T = complete_basis(B) if B.cols < M.dim(p) else Mat(M.dim(p), 0)
        full = B.hstack(T)
        inv = invert(full)
        if inv is None:
            raise DomainError("submodule basis is degenerate")
        proj[p] = (T, Mat.from_rows(inv.data[B.cols :], M.dim(p)) if T.cols else Mat(0, M.dim(p)))
        if T.cols:
            spaces[p] = T.cols
    maps = {}
    for p in M.support():
        Tp, _ = proj[p]
        if Tp.cols == 0:
            continue
        for i in range(1, M.n + 1):
            for kind in ("d", "int", "H"):
                q = M.target(kind, i, p)
                if not M.in_window(q):
                    continue
                if M.dim(q) == 0:
                    maps[(kind, i, p)] = Mat.zero(0, Tp.cols)
                    continue
                _, piq = proj[q]
                maps[(kind, i, p)] = piq @ (M.map(kind, i, p) @ Tp)
    return ModuleWindow(M.orbit, M.window, spaces, maps, M.side)


def is_absolutely_prime_window(M: ModuleWindow) -> bool:
    """All window subfactors share the annihilator of M itself."""
    try:
        _, base = annihilator_dset(M)
    except DomainError:
        return False
    for p in M.support():
        for j in range(M.dim(p)):
            v = Mat.col_vector(
                [ONE if r == j else ZERO for r in range(M.dim(p))]
            )
            sub = _cyclic_closure(M, p, v)
            try:
                subw = _restrict_to_bases(M, sub)
                _, asub = annihilator_dset(subw)
            except DomainError:
                return False
            if asub != base:
                return False
            try:
                qw = _quotient_module(M, sub)
                if qw.spaces:
                    _, aq = annihilator_dset(qw)
                    if aq != base:
                        return False
            except DomainError:
                return False
    return True

"""Canonical-form arithmetic in the algebra of polynomial integro-differential
operators.

Arity-1 elements expand uniquely over the basis {H^k d^i, H^k, int^i H^k,
e[s,t]}; arity-n elements over n-fold tensor products of these.  Slot terms
are encoded as tuples:

    ('D', i, k)  with i >= 1   means  H^k * d^i
    ('H', k)                   means  H^k
    ('I', i, k)  with i >= 1   means  int^i * H^k
    ('E', s, t)  with s,t >= 0 means  e[s,t] = int^s*d^t - int^(s+1)*d^(t+1)

Products are computed by rewriting the right factor as a word in the
generators d, int, H and folding the word through the left factor one
generator at a time; every rewrite step is an exact identity in the algebra.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .poly import UniPoly
from .scalars import ONE, ZERO, Scalar

Slot = Tuple
TermN = Tuple[Slot, ...]

IDENT: Slot = ("H", 0)

_KIND_ORDER = {"D": 0, "H": 1, "I": 2, "E": 3}


def slot_sort_key(slot: Slot) -> Tuple:
    return (_KIND_ORDER[slot[0]],) + slot[1:]


def term_sort_key(term: TermN) -> Tuple:
    return tuple(slot_sort_key(s) for s in term)


def slot_degree(slot: Slot) -> int:
    kind = slot[0]
    if kind == "D":
        return -slot[1]
    if kind == "I":
        return slot[1]
    if kind == "E":
        return slot[1] - slot[2]
    return 0


def slot_index_bound(slot: Slot) -> int:
    kind = slot[0]
    if kind == "D" or kind == "I":
        return slot[1]
    if kind == "E":
        return max(slot[1], slot[2])
    return 0


def _check_slot(slot: Slot):
    kind = slot[0]
    if kind == "D" or kind == "I":
        if slot[1] < 1 or slot[2] < 0:
            raise ValueError(f"bad slot term {slot}")
    elif kind == "H":
        if slot[1] < 0:
            raise ValueError(f"bad slot term {slot}")
    elif kind == "E":
        if slot[1] < 0 or slot[2] < 0:
            raise ValueError(f"bad slot term {slot}")
    else:
        raise ValueError(f"unknown slot kind {slot}")


# -- arity-1 slot calculus ------------------------------------------------

SlotCombo = Dict[Slot, Scalar]


def _combo_add(dst: SlotCombo, slot: Slot, c: Scalar):
    if c.is_zero():
        return
    cur = dst.get(slot)
    if cur is None:
        dst[slot] = c
    else:
        s = cur + c
        if s.is_zero():
            del dst[slot]
        else:
            dst[slot] = s


def _int_pow_times_poly(i: int, poly: UniPoly) -> SlotCombo:
    """Canonical terms of int^i * poly(H), i >= 0."""
    out: SlotCombo = {}
    for k, c in poly.coeffs.items():
        if i == 0:
            _combo_add(out, ("H", k), c)
        else:
            _combo_add(out, ("I", i, k), c)
    return out


def _slot_times_generator(slot: Slot, g: str) -> SlotCombo:
    """Right-multiply one canonical slot term by a generator d / int / H."""
    kind = slot[0]
    out: SlotCombo = {}
    if g == "d":
        if kind == "D":
            _combo_add(out, ("D", slot[1] + 1, slot[2]), ONE)
        elif kind == "H":
            _combo_add(out, ("D", 1, slot[1]), ONE)
        elif kind == "I":
            # int^i H^k d = int^(i-1) (H-1)^k - [k=0] e[i-1,0]
            i, k = slot[1], slot[2]
            poly = UniPoly.linear_shifted(-1) ** k
            out = _int_pow_times_poly(i - 1, poly)
            if k == 0:
                _combo_add(out, ("E", i - 1, 0), -ONE)
        else:  # E
            _combo_add(out, ("E", slot[1], slot[2] + 1), ONE)
    elif g == "int":
        if kind == "D":
            i, k = slot[1], slot[2]
            if i > 1:
                _combo_add(out, ("D", i - 1, k), ONE)
            else:
                _combo_add(out, ("H", k), ONE)
        elif kind == "H":
            poly = UniPoly.linear_shifted(1) ** slot[1]
            out = _int_pow_times_poly(1, poly)
        elif kind == "I":
            i, k = slot[1], slot[2]
            poly = UniPoly.linear_shifted(1) ** k
            out = _int_pow_times_poly(i + 1, poly)
        else:  # E
            s, t = slot[1], slot[2]
            if t > 0:
                _combo_add(out, ("E", s, t - 1), ONE)
    elif g == "H":
        if kind == "D":
            # H^k d^i H = H^k (H+i) d^i
            i, k = slot[1], slot[2]
            _combo_add(out, ("D", i, k + 1), ONE)
            _combo_add(out, ("D", i, k), Scalar(i))
        elif kind == "H":
            _combo_add(out, ("H", slot[1] + 1), ONE)
        elif kind == "I":
            _combo_add(out, ("I", slot[1], slot[2] + 1), ONE)
        else:  # E
            s, t = slot[1], slot[2]
            _combo_add(out, ("E", s, t), Scalar(t + 1))
    else:
        raise ValueError(f"unknown generator {g!r}")
    return out


def _combo_times_word(combo: SlotCombo, word: Iterable[str]) -> SlotCombo:
    for g in word:
        nxt: SlotCombo = {}
        for slot, c in combo.items():
            for s2, c2 in _slot_times_generator(slot, g).items():
                _combo_add(nxt, s2, c * c2)
        combo = nxt
    return combo


_MUL1_CACHE: Dict[Tuple[Slot, Slot], SlotCombo] = {}


def mul_slot_terms(a: Slot, b: Slot) -> SlotCombo:
    """Structure constants: product of two canonical slot terms."""
    key = (a, b)
    hit = _MUL1_CACHE.get(key)
    if hit is not None:
        return hit
    kind = b[0]
    start: SlotCombo = {a: ONE}
    if kind == "D":
        out = _combo_times_word(start, ["H"] * b[2] + ["d"] * b[1])
    elif kind == "H":
        out = _combo_times_word(start, ["H"] * b[1])
    elif kind == "I":
        out = _combo_times_word(start, ["int"] * b[1] + ["H"] * b[2])
    else:  # E(s,t) = int^s d^t - int^(s+1) d^(t+1)
        s, t = b[1], b[2]
        pos = _combo_times_word(start, ["int"] * s + ["d"] * t)
        neg = _combo_times_word(start, ["int"] * (s + 1) + ["d"] * (t + 1))
        out = dict(pos)
        for slot, c in neg.items():
            _combo_add(out, slot, -c)
    _MUL1_CACHE[key] = out
    return out


# -- operators -------------------------------------------------------------


class Operator:
    """Element of the arity-n operator algebra in canonical form."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[TermN, Scalar] | None = None):
        if n < 1:
            raise ValueError("arity must be >= 1")
        self.n = n
        clean: Dict[TermN, Scalar] = {}
        if terms:
            for t, c in terms.items():
                t = tuple(t)
                if len(t) != n:
                    raise ValueError("term arity mismatch")
                for s in t:
                    _check_slot(s)
                c = Scalar.of(c)
                if not c.is_zero():
                    clean[t] = c
        self.terms = clean

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(n: int) -> "Operator":
        return Operator(n)

    @staticmethod
    def from_scalar(n: int, c) -> "Operator":
        return Operator(n, {(IDENT,) * n: Scalar.of(c)})

    @staticmethod
    def one(n: int) -> "Operator":
        return Operator.from_scalar(n, 1)

    @staticmethod
    def _single(n: int, slot_index: int, slot: Slot) -> "Operator":
        if not 1 <= slot_index <= n:
            raise ValueError(f"slot index {slot_index} out of range 1..{n}")
        term = tuple(slot if j == slot_index else IDENT for j in range(1, n + 1))
        return Operator(n, {term: ONE})

    @staticmethod
    def gen_H(n: int, slot_index: int = 1) -> "Operator":
        return Operator._single(n, slot_index, ("H", 1))

    @staticmethod
    def gen_d(n: int, slot_index: int = 1) -> "Operator":
        return Operator._single(n, slot_index, ("D", 1, 0))

    @staticmethod
    def gen_int(n: int, slot_index: int = 1) -> "Operator":
        return Operator._single(n, slot_index, ("I", 1, 0))

    @staticmethod
    def gen_x(n: int, slot_index: int = 1) -> "Operator":
        # x = int * H, already canonical
        return Operator._single(n, slot_index, ("I", 1, 1))

    @staticmethod
    def gen_e(n: int, s: int, t: int, slot_index: int = 1) -> "Operator":
        return Operator._single(n, slot_index, ("E", s, t))

    # -- ring operations ----------------------------------------------

    def _check(self, other: "Operator"):
        if self.n != other.n:
            raise ValueError("arity mismatch")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            cur = out.get(t, ZERO) + c
            if cur.is_zero():
                out.pop(t, None)
            else:
                out[t] = cur
        return Operator(self.n, out)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def __neg__(self) -> "Operator":
        return Operator(self.n, {t: -c for t, c in self.terms.items()})

    def scale(self, c) -> "Operator":
        c = Scalar.of(c)
        if c.is_zero():
            return Operator(self.n)
        return Operator(self.n, {t: c * x for t, x in self.terms.items()})

    def __mul__(self, other: "Operator") -> "Operator":
        self._check(other)
        out: Dict[TermN, Scalar] = {}
        for ta, ca in self.terms.items():
            for tb, cb in other.terms.items():
                base = ca * cb
                slot_combos = [mul_slot_terms(ta[j], tb[j]) for j in range(self.n)]
                # tensor-distribute the per-slot expansions
                partial: List[Tuple[TermN, Scalar]] = [((), base)]
                for combo in slot_combos:
                    nxt = []
                    for prefix, c in partial:
                        for slot, c2 in combo.items():
                            nxt.append((prefix + (slot,), c * c2))
                    partial = nxt
                for term, c in partial:
                    cur = out.get(term, ZERO) + c
                    if cur.is_zero():
                        out.pop(term, None)
                    else:
                        out[term] = cur
        return Operator(self.n, out)

    def __pow__(self, k: int) -> "Operator":
        if k < 0:
            raise ValueError("negative operator power")
        out = Operator.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def commutator(self, other: "Operator") -> "Operator":
        return self * other - other * self

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    # -- structure -----------------------------------------------------

    def degree_of_term(self, term: TermN) -> Tuple[int, ...]:
        return tuple(slot_degree(s) for s in term)

    def graded_components(self) -> Dict[Tuple[int, ...], "Operator"]:
        out: Dict[Tuple[int, ...], Dict[TermN, Scalar]] = {}
        for t, c in self.terms.items():
            out.setdefault(self.degree_of_term(t), {})[t] = c
        return {d: Operator(self.n, ts) for d, ts in out.items()}

    def is_homogeneous(self) -> bool:
        return len(self.graded_components()) <= 1

    def involution(self) -> "Operator":
        out: Dict[TermN, Scalar] = {}
        for t, c in self.terms.items():
            slots = []
            for s in t:
                kind = s[0]
                if kind == "D":
                    slots.append(("I", s[1], s[2]))
                elif kind == "I":
                    slots.append(("D", s[1], s[2]))
                elif kind == "E":
                    slots.append(("E", s[2], s[1]))
                else:
                    slots.append(s)
            out[tuple(slots)] = c
        return Operator(self.n, out)

    def index_bound(self) -> int:
        """Largest d/int power or e-index appearing in any slot."""
        b = 0
        for t in self.terms:
            for s in t:
                b = max(b, slot_index_bound(s))
        return b

    def max_poly_degree(self) -> int:
        """Largest power of H appearing in any slot term."""
        b = 0
        for t in self.terms:
            for s in t:
                if s[0] == "H":
                    b = max(b, s[1])
                elif s[0] in ("D", "I"):
                    b = max(b, s[2])
        return b

    def max_positive_degree(self) -> int:
        b = 0
        for t in self.terms:
            for s in t:
                b = max(b, slot_degree(s))
        return b

    # -- ideal calculus -----------------------------------------------

    def in_prime_ideal(self, slots: Iterable[int]) -> bool:
        """Membership in the sum of the height-1 primes indexed by `slots`."""
        chosen = set(slots)
        for j in chosen:
            if not 1 <= j <= self.n:
                raise ValueError(f"slot index {j} out of range 1..{self.n}")
        if not self.terms:
            return True
        for t in self.terms:
            if not any(t[j - 1][0] == "E" for j in chosen):
                return False
        return True

    def quotient_mod_socle(self) -> "Operator":
        """Image in the skew Laurent quotient: drop every term with an
        e-factor in any slot."""
        return Operator(
            self.n,
            {t: c for t, c in self.terms.items() if all(s[0] != "E" for s in t)},
        )

    # -- printing ------------------------------------------------------

    def __repr__(self):
        return f"Operator(n={self.n}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for term in sorted(self.terms, key=term_sort_key):
            c = self.terms[term]
            body = _term_str(term)
            sign, text = _coeff_term_str(c, body)
            pieces.append((sign, text))
        first_sign, first_text = pieces[0]
        s = ("-" if first_sign == "-" else "") + first_text
        for sign, text in pieces[1:]:
            s += f" {sign} {text}"
        return s


def _slot_str(slot: Slot, j: int) -> str:
    kind = slot[0]
    if kind == "H":
        k = slot[1]
        if k == 0:
            return ""
        return f"H_{j}" if k == 1 else f"H_{j}^{k}"
    if kind == "D":
        i, k = slot[1], slot[2]
        d = f"d_{j}" if i == 1 else f"d_{j}^{i}"
        if k == 0:
            return d
        h = f"H_{j}" if k == 1 else f"H_{j}^{k}"
        return f"{h}*{d}"
    if kind == "I":
        i, k = slot[1], slot[2]
        it = f"int_{j}" if i == 1 else f"int_{j}^{i}"
        if k == 0:
            return it
        h = f"H_{j}" if k == 1 else f"H_{j}^{k}"
        return f"{it}*{h}"
    return f"e[{slot[1]},{slot[2]}]_{j}"


def _term_str(term: TermN) -> str:
    parts = [p for p in (_slot_str(s, j) for j, s in enumerate(term, start=1)) if p]
    return "*".join(parts) if parts else "1"


def _coeff_term_str(c: Scalar, body: str) -> Tuple[str, str]:
    """Render coeff*body as (sign, text) with sign in {'+','-'}."""
    sign = "+"
    if c.im == 0:
        if c.re < 0:
            sign, c = "-", -c
        cs = str(c.re)
        trivial = c.re == 1
    elif c.re == 0:
        if c.im < 0:
            sign, c = "-", -c
        cs = "i" if c.im == 1 else f"{c.im}*i"
        trivial = False
    else:
        re, im = c.re, c.im
        op = "+" if im > 0 else "-"
        mag = abs(im)
        ims = "i" if mag == 1 else f"{mag}*i"
        cs = f"({re}{op}{ims})"
        trivial = False
    if body == "1":
        return sign, cs
    if trivial:
        return sign, body
    return sign, f"{cs}*{body}"


# -- expression trees ------------------------------------------------------

# AST nodes are tuples:
#   ('num', Scalar)
#   ('gen', name, slot)      name in {'H','d','int','x'}
#   ('e', s, t, slot)
#   ('add'|'sub'|'mul', left, right)
#   ('neg', child)
#   ('pow', base, k)


def from_expression(ast, n: int, field=None) -> Operator:
    """Evaluate a generator expression tree to a canonical Operator."""
    tag = ast[0]
    if tag == "num":
        c = Scalar.of(ast[1])
        if field is not None and not field.contains(c):
            raise ValueError(f"scalar {c} not in field {field.name}")
        return Operator.from_scalar(n, c)
    if tag == "gen":
        name, slot = ast[1], ast[2]
        maker = {
            "H": Operator.gen_H,
            "d": Operator.gen_d,
            "int": Operator.gen_int,
            "x": Operator.gen_x,
        }.get(name)
        if maker is None:
            raise ValueError(f"unknown generator {name!r}")
        return maker(n, slot)
    if tag == "e":
        return Operator.gen_e(n, ast[1], ast[2], ast[3])
    if tag == "add":
        return from_expression(ast[1], n, field) + from_expression(ast[2], n, field)
    if tag == "sub":
        return from_expression(ast[1], n, field) - from_expression(ast[2], n, field)
    if tag == "mul":
        return from_expression(ast[1], n, field) * from_expression(ast[2], n, field)
    if tag == "neg":
        return -from_expression(ast[1], n, field)
    if tag == "pow":
        k = ast[2]
        if k < 0:
            raise ValueError("negative powers are not operators")
        return from_expression(ast[1], n, field) ** k
    raise ValueError(f"unknown AST node {tag!r}")


# -- principal left ideals (arity 1) ---------------------------------------


def principal_left_ideal_membership(
    a: Operator, gen: Union[str, Tuple[str, Scalar]]
) -> Tuple[bool, Optional[Operator]]:
    """Decide membership of a in the left ideal generated by d or by H-lambda.

    Returns (member, witness) with witness*gen == a when member.
    """
    if a.n != 1:
        raise ValueError("principal left ideal calculus is arity-1 only")
    if gen == "d":
        g = Operator.gen_d(1)
        w = a * Operator.gen_int(1)
        if w * g == a:
            return True, w
        return False, None
    if isinstance(gen, tuple) and gen[0] == "H":
        lam = Scalar.of(gen[1])
        witness_terms: Dict[TermN, Scalar] = {}
        for deg, comp in a.graded_components().items():
            d = deg[0]
            poly = UniPoly()
            for term, c in comp.terms.items():
                slot = term[0]
                if slot[0] == "E":
                    s, t = slot[1], slot[2]
                    denom = Scalar(t + 1) - lam
                    if denom.is_zero():
                        return False, None
                    witness_terms[term] = c / denom
                elif slot[0] == "H":
                    poly = poly + UniPoly.monomial(slot[1], c)
                else:
                    poly = poly + UniPoly.monomial(slot[2], c)
            if poly.is_zero():
                continue
            # right factor H-lam commuted past d^i becomes H+i-lam
            shift = -d if d < 0 else 0
            divisor = UniPoly.linear_shifted(Scalar(shift) - lam)
            q, r = poly.divmod(divisor)
            if not r.is_zero():
                return False, None
            for k, c in q.coeffs.items():
                if d > 0:
                    witness_terms[(("I", d, k),)] = c
                elif d == 0:
                    witness_terms[(("H", k),)] = c
                else:
                    witness_terms[(("D", -d, k),)] = c
        w = Operator(1, witness_terms)
        g = Operator.gen_H(1) - Operator.from_scalar(1, lam)
        if w * g != a:
            raise AssertionError("witness verification failed")
        return True, w
    raise ValueError(f"unsupported principal generator {gen!r}")

"""Exact action of operators on truncated polynomial spaces.

The representation space is spanned by divided-power monomials
x^[alpha] = x^alpha / alpha!; on that basis every generator acts with
integer matrix entries:

    H_i   x^[a] = (a_i + 1) x^[a]
    d_i   x^[a] = x^[a - e_i]         (0 when a_i = 0)
    int_i x^[a] = x^[a + e_i]
    e[s,t]_i x^[a] = [a_i = t] * x^[a with slot i set to s]

This module is the verification oracle for the symbolic engine: a canonical
operator is zero iff its action matrix vanishes on a large enough window.
"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Mat
from .operators import Operator, Slot, TermN
from .scalars import ONE, ZERO, Scalar

Monomial = Tuple[int, ...]


class TruncatedSpace:
    """Divided-power monomials with every exponent in [0..N], lex ordered."""

    def __init__(self, n: int, N: int):
        if N < 0:
            raise ValueError("negative degree bound")
        self.n = n
        self.N = N
        self.basis: List[Monomial] = [
            tuple(a) for a in product(range(N + 1), repeat=n)
        ]
        self.index = {a: j for j, a in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)


def act_slot_term(slot: Slot, s: int) -> Optional[Tuple[int, Scalar]]:
    """Apply one slot term to x^[s]; returns (new exponent, coeff) or None."""
    kind = slot[0]
    if kind == "H":
        return s, Scalar(s + 1) ** slot[1]
    if kind == "D":
        i, k = slot[1], slot[2]
        if s < i:
            return None
        return s - i, Scalar(s - i + 1) ** k
    if kind == "I":
        i, k = slot[1], slot[2]
        return s + i, Scalar(s + 1) ** k
    # E(u, v)
    u, v = slot[1], slot[2]
    if s != v:
        return None
    return u, ONE


def act_term(term: TermN, alpha: Monomial) -> Optional[Tuple[Monomial, Scalar]]:
    out = []
    coeff = ONE
    for slot, s in zip(term, alpha):
        hit = act_slot_term(slot, s)
        if hit is None:
            return None
        s2, c = hit
        out.append(s2)
        coeff = coeff * c
    return tuple(out), coeff


def act_generator(name: str, slot_index: int, n: int, alpha: Monomial):
    """Apply a single generator to x^[alpha]; returns (beta, coeff) or None."""
    op = {
        "H": Operator.gen_H,
        "d": Operator.gen_d,
        "int": Operator.gen_int,
        "x": Operator.gen_x,
    }[name](n, slot_index)
    (term,) = op.terms
    return act_term(term, alpha)


def act_monomial(a: Operator, alpha: Monomial) -> Dict[Monomial, Scalar]:
    """Image of x^[alpha] under a, as a sparse monomial combination."""
    if len(alpha) != a.n:
        raise ValueError("monomial arity mismatch")
    out: Dict[Monomial, Scalar] = {}
    for term, c in a.terms.items():
        hit = act_term(term, alpha)
        if hit is None:
            continue
        beta, c2 = hit
        cur = out.get(beta, ZERO) + c * c2
        if cur.is_zero():
            out.pop(beta, None)
        else:
            out[beta] = cur
    return out


class ActionMatrix:
    """Exact matrix of an operator from bound N_in into bound N_out."""

    def __init__(self, domain: TruncatedSpace, codomain: TruncatedSpace, matrix: Mat):
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix

    @property
    def N_in(self) -> int:
        return self.domain.N

    @property
    def N_out(self) -> int:
        return self.codomain.N


def to_matrix(a: Operator, N: int) -> ActionMatrix:
    """Action matrix on exponents up to N; the codomain bound is enlarged by
    the operator's maximal positive degree so no image is truncated."""
    dom = TruncatedSpace(a.n, N)
    cod = TruncatedSpace(a.n, N + a.max_positive_degree())
    m = Mat(cod.dim, dom.dim)
    for j, alpha in enumerate(dom.basis):
        for beta, c in act_monomial(a, alpha).items():
            m.data[cod.index[beta]][j] = c
    return ActionMatrix(dom, cod, m)


def matrices_equal_on_overlap(p: ActionMatrix, q: ActionMatrix) -> bool:
    """Compare two action matrices on their common domain/codomain window."""
    if p.domain.n != q.domain.n:
        return False
    n = p.domain.n
    N_in = min(p.N_in, q.N_in)
    N_out = min(p.N_out, q.N_out)
    dom = TruncatedSpace(n, N_in)
    cod = TruncatedSpace(n, N_out)
    for alpha in dom.basis:
        for beta in cod.basis:
            va = p.matrix.data[p.codomain.index[beta]][p.domain.index[alpha]]
            vb = q.matrix.data[q.codomain.index[beta]][q.domain.index[alpha]]
            if va != vb:
                return False
    return True


def compose(outer: ActionMatrix, inner: ActionMatrix) -> Mat:
    """Matrix of outer applied after inner, restricting the middle bound."""
    if outer.N_in < inner.N_out:
        raise ValueError("composition window mismatch")
    if outer.N_in == inner.N_out:
        return outer.matrix @ inner.matrix
    # embed inner's codomain into outer's domain
    embed = Mat(outer.domain.dim, inner.codomain.dim)
    for j, beta in enumerate(inner.codomain.basis):
        embed.data[outer.domain.index[beta]][j] = ONE
    return outer.matrix @ (embed @ inner.matrix)


def is_zero_by_action(a: Operator) -> bool:
    """Faithfulness check on a finite window.

    Beyond the largest d/int/e index every graded component acts as a shift
    composed with a polynomial in the slot degrees, so probing one more point
    per polynomial degree decides vanishing exactly."""
    B = a.index_bound() + a.max_poly_degree() + 1
    return to_matrix(a, B).matrix.is_zero()

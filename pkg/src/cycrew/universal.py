"""Computation in the universal group of a finite pregroup.

Words handed to these operations are over Gamma = P minus epsilon, encoded
as indices into the context's alphabet.  Internally letters are converted
to pregroup element indices.

Equality of reduced words is decided by a dynamic program over interleaving
carries; this terminates for certain and costs O(n |P|^2), unlike a search
over the symmetric rules of S(P).
"""

from __future__ import annotations

import collections
from dataclasses import dataclass
from typing import Optional

from .pregroup import (
    Pregroup,
    check_axioms,
    derive_system,
    gamma_alphabet,
    gamma_to_p,
    p_to_gamma,
)
from .words import CyclicWord, Word, involute


@dataclass(frozen=True)
class ConjugacyAnswer:
    """Verdict plus, for positive answers, a conjugator word x over Gamma
    with x u inv(x) = v in U(P)."""

    verdict: bool
    certificate: Optional[Word] = None
    method: str = "quadratic"

    def __bool__(self):
        return self.verdict


class UniversalContext:
    """Immutable bundle of a validated pregroup, its alphabet and S(P)."""

    def __init__(self, pregroup: Pregroup):
        report = check_axioms(pregroup)
        if not report:
            bad = {k: v for k, v in report.violations.items() if v}
            raise ValueError(f"pregroup fails axioms: {bad}")
        self.pregroup = pregroup
        self.alphabet = gamma_alphabet(pregroup)
        self.system = derive_system(pregroup, "S_of_P")
        self._closure_cache = {}

    def to_p(self, w: Word) -> tuple:
        p = self.pregroup
        return tuple(gamma_to_p(i, p) for i in w)

    def to_gamma(self, pw) -> Word:
        p = self.pregroup
        return tuple(p_to_gamma(x, p) for x in pw)


def _stack_reduce(pw, p: Pregroup):
    """Left-to-right reduction over P indices; output has no adjacent
    defined products."""
    table = p.table
    eps = p.eps
    out = []
    for x in pw:
        out.append(x)
        while len(out) >= 2:
            q = table[out[-2]][out[-1]]
            if q is None:
                break
            out.pop()
            out.pop()
            if q != eps:
                out.append(q)
    return tuple(out)


def reduce_word(w: Word, ctx: UniversalContext) -> Word:
    """Greedy length reduction to a reduced (hence geodesic) word."""
    return ctx.to_gamma(_stack_reduce(ctx.to_p(w), ctx.pregroup))


def is_reduced_p(pw, p: Pregroup) -> bool:
    return all(p.table[pw[i]][pw[i + 1]] is None for i in range(len(pw) - 1))


def _interleaving_equal(pu, pv, p: Pregroup) -> bool:
    """Carry DP: pu equals pv in U(P), both reduced of equal length."""
    n = len(pu)
    if n != len(pv):
        return False
    if n == 0:
        return True
    table = p.table
    inv = p.inv
    size = len(p)
    carries = {p.eps}
    for a, b in zip(pu, pv):
        nxt = set()
        for cp in carries:
            x = inv[cp]
            m1 = table[x][a]
            if m1 is not None:
                row = table[m1]
                for c in range(size):
                    if row[c] == b:
                        nxt.add(c)
            else:
                arow = table[a]
                xrow = table[x]
                for c in range(size):
                    t = arow[c]
                    if t is not None and xrow[t] == b:
                        nxt.add(c)
        if not nxt:
            return False
        carries = nxt
    return p.eps in carries


def equal_in_U(u: Word, v: Word, ctx: UniversalContext) -> bool:
    """Word problem: reduce both sides, then run the interleaving DP."""
    p = ctx.pregroup
    return _interleaving_equal(
        _stack_reduce(ctx.to_p(u), p), _stack_reduce(ctx.to_p(v), p), p
    )


def _nf_carries(pw, p: Pregroup):
    """Shortlex normal form of a reduced P-index word, with one valid carry
    sequence.

    Every word of the same geodesic length equal to pw is an interleaving
    b_i = [inv(c_{i-1}) a_i c_i] with boundary carries epsilon, so the
    normal form is found greedily: at each position emit the least feasible
    letter, keeping only carries that achieve it and can still be completed
    (suffix feasibility sets are precomputed right to left).

    Returns (nf letters, carries c_1..c_n) with c_n = epsilon.
    """
    n = len(pw)
    if n == 0:
        return (), ()
    table = p.table
    inv = p.inv
    eps = p.eps
    size = len(p)

    def step_targets(cp, a):
        """letters [inv(cp) a c] by carry c, as dict c -> letter."""
        x = inv[cp]
        out = {}
        m1 = table[x][a]
        if m1 is not None:
            row = table[m1]
            for c in range(size):
                t = row[c]
                if t is not None and t != eps:
                    out[c] = t
        else:
            arow = table[a]
            xrow = table[x]
            for c in range(size):
                t = arow[c]
                if t is not None:
                    r = xrow[t]
                    if r is not None and r != eps:
                        out[c] = r
        return out

    feasible = [None] * (n + 1)
    feasible[n] = {eps}
    for i in range(n - 1, -1, -1):
        a = pw[i]
        nxt = feasible[i + 1]
        cur = set()
        for cp in range(size):
            targets = step_targets(cp, a)
            if any(c in nxt for c in targets):
                cur.add(cp)
        feasible[i] = cur
    assert eps in feasible[0]

    letters = []
    parents = []  # per position: dict carry -> previous carry
    frontier = {eps}
    for i in range(n):
        a = pw[i]
        nxt_feasible = feasible[i + 1]
        best = None
        best_carries = {}
        for cp in frontier:
            for c, letter in step_targets(cp, a).items():
                if c not in nxt_feasible:
                    continue
                if best is None or letter < best:
                    best = letter
                    best_carries = {c: cp}
                elif letter == best and c not in best_carries:
                    best_carries[c] = cp
        assert best is not None
        letters.append(best)
        parents.append(best_carries)
        frontier = set(best_carries)
    # backtrack one carry path ending at epsilon
    carries = [eps]
    c = eps
    for i in range(n - 1, 0, -1):
        c = parents[i][c]
        carries.append(c)
    carries.reverse()
    return tuple(letters), tuple(carries)


def shortlex_nf(w: Word, ctx: UniversalContext) -> Word:
    """The shortlex-least word equal to w in U(P)."""
    pw = _stack_reduce(ctx.to_p(w), ctx.pregroup)
    nf, _carries = _nf_carries(pw, ctx.pregroup)
    return ctx.to_gamma(nf)


def _cyclic_reduce_traced(w: Word, ctx: UniversalContext):
    """Cyclically reduce w.

    Returns (rep, z) where rep is a cyclically reduced P-index word and
    z is a Gamma word with rep = z w inv(z) in U(P).
    """
    p = ctx.pregroup
    cur = _stack_reduce(ctx.to_p(w), p)
    z = ()
    while len(cur) >= 2:
        if p.table[cur[-1]][cur[0]] is None:
            break
        # rotate the last letter to the front (conjugation by it), reduce
        z = (p_to_gamma(cur[-1], p),) + z
        cur = _stack_reduce((cur[-1],) + cur[:-1], p)
    return cur, z


def cyclic_reduce(w: Word, ctx: UniversalContext) -> CyclicWord:
    """Cyclically reduced form of w, as a canonical cyclic word over
    Gamma."""
    rep, _z = _cyclic_reduce_traced(w, ctx)
    return CyclicWord.of(ctx.to_gamma(rep))


def _canonical_traced(w: Word, ctx: UniversalContext):
    """(canonical cyclically reduced Gamma word, z) with canon = z w inv(z)
    in U(P)."""
    rep, z = _cyclic_reduce_traced(w, ctx)
    g = ctx.to_gamma(rep)
    canon = CyclicWord.of(g).canon
    if canon != g:
        k = next(i for i in range(len(g)) if g[i:] + g[:i] == canon)
        z = involute(g[:k], ctx.alphabet) + z
    return canon, z


def preconjugate(c: CyclicWord, b: int, ctx: UniversalContext) -> Optional[CyclicWord]:
    """Preconjugation of the canonical representative by pregroup element b.

    For |c| >= 2 the result is ([b a_1], a_2, ..., [a_n inv(b)]); for a
    single letter u it is [b u inv(b)].  None when a needed product is
    undefined (or would leave Gamma).
    """
    p = ctx.pregroup
    if b == p.eps or len(c) == 0:
        return c
    a = [gamma_to_p(i, p) for i in c.canon]
    if len(a) == 1:
        r = p.mul3(b, a[0], p.inv[b])
        if r is None or r == p.eps:
            return None
        return CyclicWord.of((p_to_gamma(r, p),))
    first = p.mul(b, a[0])
    last = p.mul(a[-1], p.inv[b])
    if first is None or last is None or first == p.eps or last == p.eps:
        return None
    out = [first] + a[1:-1] + [last]
    return CyclicWord.of(tuple(p_to_gamma(x, p) for x in out))


def letter_conjugacy_closure(letter: int, ctx: UniversalContext) -> frozenset:
    """All Gamma letters reachable from `letter` by preconjugations
    x -> [c x inv(c)]; cached per context."""
    closure, _parents = _letter_closure_traced(letter, ctx)
    return closure


def _letter_closure_traced(letter: int, ctx: UniversalContext):
    cached = ctx._closure_cache.get(letter)
    if cached is not None:
        return cached
    p = ctx.pregroup
    start = gamma_to_p(letter, p)
    parents = {start: None}  # P idx -> (previous P idx, conjugating c)
    queue = collections.deque([start])
    while queue:
        x = queue.popleft()
        for c in range(len(p)):
            y = p.mul3(c, x, p.inv[c])
            if y is None or y == p.eps or y in parents:
                continue
            parents[y] = (x, c)
            queue.append(y)
    closure = frozenset(p_to_gamma(x, p) for x in parents)
    result = (closure, parents)
    ctx._closure_cache[letter] = result
    return result


def _closure_conjugator(letter: int, target: int, ctx: UniversalContext) -> Word:
    """Gamma word x with x . letter . inv(x) = target, from the closure
    BFS tree."""
    p = ctx.pregroup
    _closure, parents = _letter_closure_traced(letter, ctx)
    node = gamma_to_p(target, p)
    cs = []
    while parents[node] is not None:
        prev, c = parents[node]
        cs.append(c)
        node = prev
    # target = c_k ( ... (c_1 . letter . inv(c_1)) ... ) inv(c_k)
    return tuple(p_to_gamma(c, p) for c in cs if c != p.eps)


def _certify(u, v, x, ctx) -> Word:
    cert = reduce_word(x, ctx)
    assert equal_in_U(cert + u + involute(cert, ctx.alphabet), v, ctx)
    return cert


def conjugate_quadratic(u: Word, v: Word, ctx: UniversalContext) -> ConjugacyAnswer:
    """Reference conjugacy decision: cyclic reduction, then rotations times
    preconjugators, each checked with the interleaving DP."""
    p = ctx.pregroup
    alphabet = ctx.alphabet
    g, zu = _canonical_traced(u, ctx)
    f, zv = _canonical_traced(v, ctx)
    zv_inv = involute(zv, alphabet)
    if len(g) != len(f):
        return ConjugacyAnswer(False, method="quadratic")
    n = len(g)
    if n == 0:
        return ConjugacyAnswer(True, _certify(u, v, (), ctx), "quadratic")
    if n == 1:
        closure = letter_conjugacy_closure(g[0], ctx)
        if f[0] not in closure:
            return ConjugacyAnswer(False, method="quadratic")
        x = zv_inv + _closure_conjugator(g[0], f[0], ctx) + zu
        return ConjugacyAnswer(True, _certify(u, v, x, ctx), "quadratic")
    f_p = tuple(gamma_to_p(i, p) for i in f)
    for i in range(n):
        rot = g[i:] + g[:i]
        prefix_inv = involute(g[:i], alphabet)
        for b in range(len(p)):
            cand = _preconjugate_rotation(rot, b, ctx)
            if cand is None:
                continue
            if _interleaving_equal(cand, f_p, p):
                b_word = (p_to_gamma(b, p),) if b != p.eps else ()
                x = zv_inv + b_word + prefix_inv + zu
                return ConjugacyAnswer(True, _certify(u, v, x, ctx), "quadratic")
    return ConjugacyAnswer(False, method="quadratic")


def _preconjugate_rotation(rot: Word, b: int, ctx: UniversalContext):
    """P-index word ([b a_1], a_2, ..., [a_n inv(b)]) for a fixed rotation,
    or None."""
    p = ctx.pregroup
    a = [gamma_to_p(i, p) for i in rot]
    if b == p.eps:
        return tuple(a)
    first = p.mul(b, a[0])
    last = p.mul(a[-1], p.inv[b])
    if first is None or last is None or first == p.eps or last == p.eps:
        return None
    return tuple([first] + a[1:-1] + [last])

"""Permutation groups given by generators.

Everything rests on a deterministic Schreier-Sims stabilizer chain whose base
points are, unless a prefix is requested, the first point moved by the
generator that forced a new level.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Iterator, Sequence

import numpy as np

from .perm import DegreeMismatch, Permutation, dtype_for

logger = logging.getLogger(__name__)


class CapExceeded(RuntimeError):
    """An enumeration outgrew its configured cap."""


class NotASubgroup(ValueError):
    pass


class NotTransitive(ValueError):
    pass


def _inv(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(a.shape[0], dtype=a.dtype)
    return out


def _is_id(a: np.ndarray, ident: np.ndarray) -> bool:
    return bool(np.array_equal(a, ident))


class _Level:
    __slots__ = ("base", "gens", "orbit", "index", "trans", "checked")

    def __init__(self, base: int, ident: np.ndarray):
        self.base = base
        self.gens: list[np.ndarray] = []
        self.orbit = [base]
        self.index = {base: 0}
        self.trans = [ident]
        self.checked: set[tuple[int, int]] = set()

    def extend_orbit(self, start_gen: int = 0) -> None:
        """Close the orbit under gens; transversal words for existing points are kept."""
        gens = self.gens
        orbit, index, trans = self.orbit, self.index, self.trans
        # new generators act on every known point, old ones only on new points
        pending = [(i, start_gen) for i in range(len(orbit))]
        pos = 0
        while pos < len(pending):
            i, g0 = pending[pos]
            pos += 1
            p = orbit[i]
            u = trans[i]
            for s in gens[g0:]:
                q = int(s[p])
                if q not in index:
                    index[q] = len(orbit)
                    orbit.append(q)
                    trans.append(s[u])
                    pending.append((len(orbit) - 1, 0))


class StabChain:
    """Base and strong generating set with explicit transversals."""

    def __init__(self, degree: int, gens: Sequence[np.ndarray], base_prefix: Sequence[int] = (),
                 order_bound: int | None = None):
        self.degree = degree
        self.ident = np.arange(degree, dtype=dtype_for(degree))
        self.levels: list[_Level] = []
        self.complete = False
        self._order_bound = order_bound
        for b in base_prefix:
            self._append_level(int(b))
        gens = [np.asarray(g, dtype=self.ident.dtype) for g in gens]
        gens = [g for g in gens if not _is_id(g, self.ident)]
        for g in gens:
            self._install(g, 0)
        self._run(len(self.levels) - 1)

    # -- construction ------------------------------------------------------

    def _append_level(self, b: int) -> _Level:
        lev = _Level(b, self.ident)
        self.levels.append(lev)
        return lev

    def _install(self, h: np.ndarray, start: int) -> int:
        """Add ``h`` as strong generator on levels ``start..j``; return j."""
        j = start
        while j < len(self.levels) and h[self.levels[j].base] == self.levels[j].base:
            j += 1
        if j == len(self.levels):
            moved = np.nonzero(h != self.ident)[0]
            self._append_level(int(moved[0]))
        for lev in self.levels[start:j + 1]:
            n_old = len(lev.gens)
            lev.gens.append(h)
            lev.extend_orbit(n_old)
        return j

    def _bound_reached(self) -> bool:
        return self._order_bound is not None and self.order() >= self._order_bound

    def _run(self, i: int) -> None:
        while i >= 0:
            if self._bound_reached():
                break
            lev = self.levels[i]
            added = False
            k = 0
            while k < len(lev.orbit) and not added:
                p = lev.orbit[k]
                u = lev.trans[k]
                for gi, s in enumerate(lev.gens):
                    if (p, gi) in lev.checked:
                        continue
                    q = int(s[p])
                    v = lev.trans[lev.index[q]]
                    # u*s*v^-1 fixes the base point of level i
                    sg = _inv(v)[s[u]]
                    if _is_id(sg, self.ident):
                        lev.checked.add((p, gi))
                        continue
                    h, j = self.strip(sg, i + 1)
                    if j == len(self.levels) and _is_id(h, self.ident):
                        lev.checked.add((p, gi))
                        continue
                    i = self._install(h, i + 1)
                    added = True
                    break
                k += 1
            if not added:
                i -= 1
        self.complete = True

    def add_generator(self, g: np.ndarray) -> bool:
        """Extend the chain by a new generator; return False if already a member."""
        g = np.asarray(g, dtype=self.ident.dtype)
        h, j = self.strip(g, 0)
        if j == len(self.levels) and _is_id(h, self.ident):
            return False
        j = self._install(g, 0)
        self._run(j)
        return True

    # -- queries -----------------------------------------------------------

    def strip(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for j in range(start, len(self.levels)):
            lev = self.levels[j]
            q = int(g[lev.base])
            idx = lev.index.get(q)
            if idx is None:
                return g, j
            if idx:
                g = _inv(lev.trans[idx])[g]
        return g, len(self.levels)

    def contains(self, g: np.ndarray) -> bool:
        h, j = self.strip(g)
        return j == len(self.levels) and _is_id(h, self.ident)

    def order(self, start: int = 0) -> int:
        return math.prod(len(lev.orbit) for lev in self.levels[start:])

    @property
    def base(self) -> list[int]:
        return [lev.base for lev in self.levels]

    def strong_generators(self, start: int = 0) -> list[np.ndarray]:
        if start >= len(self.levels):
            return []
        return list(self.levels[start].gens)

    def random_element(self, rng: random.Random) -> np.ndarray:
        g = self.ident
        for lev in self.levels:
            u = lev.trans[rng.randrange(len(lev.orbit))]
            g = u[g]
        return g

    def elements(self) -> Iterator[np.ndarray]:
        trans = [lev.trans for lev in self.levels]
        for combo in iproduct(*reversed(trans)):
            g = self.ident
            for u in combo:
                g = u[g]
            yield g


class PermGroup:
    """A permutation group given by generators, with a lazily built chain."""

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 name: str | None = None, order_hint: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in a group of degree {degree}")
        self.degree = degree
        self.generators: list[Permutation] = [g for g in gens if not g.is_identity()]
        self.name = name
        self._chain: StabChain | None = None
        self._order_hint = order_hint

    def __repr__(self) -> str:
        label = self.name or f"<{len(self.generators)} generators>"
        return f"PermGroup({label}, degree={self.degree})"

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.degree, [g.array for g in self.generators],
                                    order_bound=self._order_hint)
        return self._chain

    def chain_with_base(self, prefix: Sequence[int]) -> StabChain:
        return StabChain(self.degree, [g.array for g in self.generators], base_prefix=prefix)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def order(self) -> int:
        return self.chain.order()

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise DegreeMismatch(f"element of degree {g.degree}, group of degree {self.degree}")
        return self.chain.contains(g.array)

    def is_trivial(self) -> bool:
        return not self.generators

    def orbit(self, point: int) -> set[int]:
        return orbit(self, point)

    def is_transitive(self) -> bool:
        return is_transitive(self)

    def random_element(self, seed: int | random.Random = 0) -> Permutation:
        return random_element(self, seed)

    def elements(self) -> Iterator[Permutation]:
        for a in self.chain.elements():
            yield Permutation._raw(a)

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_normal_in(self, other: "PermGroup") -> bool:
        return all(self.contains(g ^ x) for g in self.generators for x in other.generators)

    def is_perfect(self) -> bool:
        return derived_subgroup(self).order() == self.order()

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermGroup":
        pts = list(dict.fromkeys(int(p) for p in points))
        ch = self.chain_with_base(pts)
        k = len(pts)
        gens = [Permutation._raw(a) for a in ch.strong_generators(k)]
        sub = PermGroup(gens, self.degree)
        sub._chain = _subchain(ch, k, self.degree)
        return sub

    def stabilizer(self, point: int) -> "PermGroup":
        return self.pointwise_stabilizer([point])


def _subchain(ch: StabChain, start: int, degree: int) -> StabChain:
    """The tail of a chain from ``start``, truncated to the first ``degree`` points."""
    sub = StabChain.__new__(StabChain)
    sub.degree = degree
    sub.ident = np.arange(degree, dtype=dtype_for(degree))
    sub.complete = True
    sub._order_bound = None
    sub.levels = []
    for lev in ch.levels[start:]:
        if len(lev.orbit) == 1 and not lev.gens:
            continue
        if lev.base >= degree:
            raise ValueError("chain tail moves points beyond the requested degree")
        new = _Level(lev.base, sub.ident)
        new.gens = [g[:degree].astype(sub.ident.dtype) for g in lev.gens]
        new.orbit = list(lev.orbit)
        new.index = dict(lev.index)
        new.trans = [u[:degree].astype(sub.ident.dtype) for u in lev.trans]
        sub.levels.append(new)
    return sub


# ---------------------------------------------------------------------------
# basic operations


def group_order(G: PermGroup) -> int:
    return G.order()


def contains(G: PermGroup, g: Permutation) -> bool:
    return G.contains(g)


def generates(X: PermGroup, elems: Sequence[Permutation]) -> bool:
    """Whether ``elems`` (assumed to lie in X) generate all of X."""
    target = X.order()
    H = PermGroup(elems, X.degree, order_hint=target)
    return H.order() == target


def orbit(G: PermGroup, point: int) -> set[int]:
    seen = {point}
    stack = [point]
    arrays = [g.array for g in G.generators]
    while stack:
        p = stack.pop()
        for a in arrays:
            q = int(a[p])
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def orbits(G: PermGroup) -> list[list[int]]:
    done: set[int] = set()
    out = []
    for p in range(G.degree):
        if p not in done:
            o = sorted(orbit(G, p))
            done.update(o)
            out.append(o)
    return out


def is_transitive(G: PermGroup) -> bool:
    return len(orbit(G, 0)) == G.degree


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.blocks)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    def is_trivial(self) -> bool:
        return self.count == 1 or self.block_size == 1


def minimal_blocks(G: PermGroup, pair: tuple[int, int]) -> BlockSystem:
    """Finest block system in which the two points share a block."""
    if not is_transitive(G):
        raise NotTransitive("block systems need a transitive group")
    n = G.degree
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue: list[int] = []

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra == rb:
            return
        if rb < ra:
            ra, rb = rb, ra
        parent[rb] = ra
        queue.append(rb)

    union(*pair)
    arrays = [g.array.tolist() for g in G.generators]
    i = 0
    while i < len(queue):
        gamma = queue[i]
        i += 1
        for a in arrays:
            union(a[gamma], a[find(gamma)])
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    blocks = tuple(sorted(tuple(c) for c in classes.values()))
    return BlockSystem(blocks)


def is_primitive(G: PermGroup) -> bool:
    if not is_transitive(G):
        return False
    return all(minimal_blocks(G, (0, b)).count == 1 for b in range(1, G.degree))


# ---------------------------------------------------------------------------
# subgroups built from others


def _checked_subgroup(parent: PermGroup, sub: PermGroup) -> PermGroup:
    if parent.order() % sub.order():
        raise AssertionError(f"subgroup order {sub.order()} does not divide {parent.order()}")
    return sub


def subgroup_generated(X: PermGroup, elems: Sequence[Permutation]) -> PermGroup:
    for g in elems:
        if not X.contains(g):
            raise NotASubgroup(f"{g} is not in the parent group")
    return _checked_subgroup(X, PermGroup(elems, X.degree))


def normal_closure(X: PermGroup, S: Sequence[Permutation]) -> PermGroup:
    """Smallest subgroup containing S and normalized by the generators of X."""
    degree = X.degree
    gens = [g for g in S if not g.is_identity()]
    if not gens:
        return PermGroup([], degree)
    ch = StabChain(degree, [g.array for g in gens])
    todo = list(gens)
    while todo:
        g = todo.pop()
        for x in X.generators:
            c = g ^ x
            if ch.add_generator(c.array):
                gens.append(c)
                todo.append(c)
    N = PermGroup(gens, degree)
    N._chain = ch
    return N


def derived_subgroup(X: PermGroup) -> PermGroup:
    comms = []
    gens = X.generators
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            c = ~a * ~b * a * b
            if not c.is_identity():
                comms.append(c)
    D = normal_closure(X, comms)
    return _checked_subgroup(X, D)


def random_element(X: PermGroup, seed: int | random.Random = 0) -> Permutation:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return Permutation._raw(X.chain.random_element(rng))


def find_element_of_order(X: PermGroup, n: int, seed: int = 0, attempts: int = 2000) -> Permutation | None:
    """Random search with powering; None when the attempts run out."""
    rng = random.Random(seed)
    for _ in range(attempts):
        g = random_element(X, rng)
        k = g.order()
        if k % n == 0:
            return g ** (k // n)
    return None


# ---------------------------------------------------------------------------
# conjugacy


def conjugacy_class(X: PermGroup, g: Permutation, cap: int = 2_000_000) -> list[Permutation]:
    """All conjugates of g under X, in breadth-first order from g."""
    return [Permutation._raw(a) for a in _class_arrays(X, g, cap)[0]]


def _class_arrays(X: PermGroup, g: Permutation, cap: int, parents: bool = False):
    gens = [(x.array, _inv(x.array)) for x in X.generators]
    start = g.array
    seen = {start.tobytes(): 0}
    elems = [start]
    par: list[tuple[int, int]] = [(-1, -1)]
    pos = 0
    while pos < len(elems):
        a = elems[pos]
        for gi, (h, hinv) in enumerate(gens):
            c = h[a[hinv]]
            key = c.tobytes()
            if key not in seen:
                seen[key] = len(elems)
                elems.append(c)
                if parents:
                    par.append((pos, gi))
                if len(elems) > cap:
                    raise CapExceeded(f"conjugacy class exceeds cap {cap} (reached {len(elems)})")
        pos += 1
    return elems, seen, par


def centralizer_order(X: PermGroup, g: Permutation, cap: int = 2_000_000) -> int:
    return X.order() // len(_class_arrays(X, g, cap)[0])


def centralizer(X: PermGroup, g: Permutation, cap: int = 2_000_000) -> PermGroup:
    """Centralizer of an element, from Schreier generators of the conjugation action."""
    elems, seen, par = _class_arrays(X, g, cap, parents=True)
    target = X.order() // len(elems)
    degree = X.degree
    gens = [x.array for x in X.generators]
    ident = np.arange(degree, dtype=dtype_for(degree))

    def transporter(i: int) -> np.ndarray:
        word = []
        while i > 0:
            i, gi = par[i]
            word.append(gi)
        u = ident
        for gi in reversed(word):
            u = gens[gi][u]
        return u

    ch = StabChain(degree, [])
    found: list[Permutation] = []
    cache: dict[int, np.ndarray] = {}
    for i, a in enumerate(elems):
        if ch.order() == target:
            break
        u = cache.pop(i, None)
        if u is None:
            u = transporter(i)
        for gi, s in enumerate(gens):
            c = s[a[_inv(s)]]
            j = seen[c.tobytes()]
            if par[j] == (i, gi):
                cache[j] = s[u]
                continue
            v = cache.get(j)
            if v is None:
                v = transporter(j)
            z = _inv(v)[s[u]]
            if ch.add_generator(z):
                found.append(Permutation._raw(z))
            if ch.order() == target:
                break
    C = PermGroup(found, degree)
    C._chain = ch
    if ch.order() != target:
        raise AssertionError("centralizer construction fell short of the orbit-stabilizer order")
    return _checked_subgroup(X, C)


def conjugating_element(X: PermGroup, g: Permutation, h: Permutation,
                        cap: int = 2_000_000) -> Permutation | None:
    """Some x in X with g^x == h, or None."""
    elems, seen, par = _class_arrays(X, g, cap, parents=True)
    j = seen.get(h.array.tobytes())
    if j is None:
        return None
    word = []
    while j > 0:
        j, gi = par[j]
        word.append(gi)
    x = X.identity()
    for gi in reversed(word):
        x = x * X.generators[gi]
    return x


# ---------------------------------------------------------------------------
# cosets and cores


def _canonical_coset_rep(G_chain: StabChain, x: np.ndarray) -> np.ndarray:
    """Canonical element of the right coset G*x: lexicographically least base images."""
    for lev in G_chain.levels:
        orb = lev.orbit
        vals = x[np.asarray(orb)]
        k = int(np.argmin(vals))
        if k:
            x = x[lev.trans[k]]
    return x


def coset_action(X: PermGroup, G: PermGroup, cap: int = 1_000_000) -> tuple[list[np.ndarray], list[Permutation]]:
    """Right cosets of G in X and the action of X's generators on them."""
    Gc = G.chain
    start = _canonical_coset_rep(Gc, X.chain.ident)
    reps = [start]
    index = {start.tobytes(): 0}
    gens = [x.array for x in X.generators]
    images = [[] for _ in gens]
    pos = 0
    while pos < len(reps):
        r = reps[pos]
        for gi, s in enumerate(gens):
            c = _canonical_coset_rep(Gc, s[r])
            key = c.tobytes()
            j = index.get(key)
            if j is None:
                j = len(reps)
                if j >= cap:
                    raise CapExceeded(f"index exceeds cap {cap}")
                index[key] = j
                reps.append(c)
            images[gi].append(j)
        pos += 1
    return reps, [Permutation(img) for img in images]


def kernel_of_action(X: PermGroup, images: Sequence[Permutation]) -> PermGroup:
    """Kernel of the homomorphism sending X.generators[i] to images[i]."""
    n = X.degree
    m = images[0].degree if images else 0
    combined = [np.concatenate([x.array.astype(np.int64), a.array.astype(np.int64) + n])
                for x, a in zip(X.generators, images)]
    ch = StabChain(n + m, combined, base_prefix=range(n, n + m))
    k = m
    gens = [Permutation._raw(a[:n]) for a in ch.strong_generators(k)]
    K = PermGroup(gens, n)
    K._chain = _subchain(ch, k, n)
    return _checked_subgroup(X, K)


def core_of_subgroup(X: PermGroup, G: PermGroup, cap: int = 1_000_000) -> PermGroup:
    """Largest normal subgroup of X inside G: the kernel of X on the cosets of G."""
    for g in G.generators:
        if not X.contains(g):
            raise NotASubgroup(f"generator {g} of the subgroup is not in the parent group")
    if X.order() // G.order() > cap:
        raise CapExceeded(f"index {X.order() // G.order()} exceeds cap {cap}")
    _, action = coset_action(X, G, cap)
    core = kernel_of_action(X, action)
    if not core.is_subgroup_of(G):
        raise AssertionError("core is not contained in the subgroup")
    return core

"""Exact decision and enumeration for k-order instances.

Two complete engines:

- ``exhaustive``: scan all multisets of k full orderings, with per-ordering
  satisfied-constraint bitmasks so the inner loop is a word OR.
- ``branch_and_bound``: build the k orderings position-by-position in
  parallel; each constraint stays "alive" on an ordering until its three
  variables' placements rule out every pattern there; prune as soon as some
  constraint is dead on all k orderings.

Solutions are multisets of orderings (size exactly k; "at most k" instances
are covered because members may repeat).  Enumeration output is canonical:
each multiset sorted lexicographically, the list of multisets likewise.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional

from ._sat import Solver as _CnfSolver
from .orderings import (
    Instance, LinearOrdering, Triple, pattern_matches, reversal, satisfies,
    var_key,
)


class BudgetExceeded(Exception):
    """Search stopped at the node limit; the answer is unknown."""


@dataclass(frozen=True)
class SolverConfig:
    mode: str = "branch_and_bound"  # or "exhaustive"
    symmetry_breaking: bool = False
    enumerate_all: bool = False
    node_limit: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("exhaustive", "branch_and_bound"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.enumerate_all and self.symmetry_breaking:
            raise ValueError("enumeration requires symmetry_breaking=False")


class Solution:
    """A multiset of orderings, stored in canonical (lexicographic) order."""

    __slots__ = ("orderings",)

    def __init__(self, orderings):
        ords = tuple(sorted(orderings, key=LinearOrdering.sort_key))
        object.__setattr__(self, "orderings", ords)

    def __setattr__(self, name, value):
        raise AttributeError("Solution is immutable")

    def __eq__(self, other):
        return isinstance(other, Solution) and self.orderings == other.orderings

    def __hash__(self):
        return hash(self.orderings)

    def __repr__(self):
        return "{" + ", ".join(map(repr, self.orderings)) + "}"

    def sort_key(self):
        return tuple(o.sort_key() for o in self.orderings)

    def to_lists(self):
        return [list(o.seq) for o in self.orderings]


def check_solution(inst: Instance, sol: Solution) -> bool:
    """Every constraint pi-satisfied by at least one member ordering."""
    if len(sol.orderings) > inst.k:
        return False
    for o in sol.orderings:
        if o.domain() != inst.vars:
            raise ValueError("solution ordering domain differs from instance")
    return all(
        any(satisfies(inst.pi, o, c) for o in sol.orderings)
        for c in inst.constraints
    )


def _reversal_closed(pi) -> bool:
    return {p[::-1] for p in pi.perms} == set(pi.perms)


# ---------------------------------------------------------------------------
# Exhaustive engine


def _constraint_masks(inst: Instance, perms):
    """Bitmask of satisfied constraints for each full ordering."""
    masks = []
    for alpha in perms:
        m = 0
        for ci, c in enumerate(inst.constraints):
            if satisfies(inst.pi, alpha, c):
                m |= 1 << ci
        masks.append(m)
    return masks


def _exhaustive(inst: Instance, cfg: SolverConfig, want_all: bool):
    perms = [LinearOrdering(p) for p in permutations(inst.sorted_vars())]
    masks = _constraint_masks(inst, perms)
    full = (1 << len(inst.constraints)) - 1
    n = len(perms)
    found = []
    nodes = 0

    def rec(start, chosen, acc):
        nonlocal nodes
        if len(chosen) == inst.k:
            if acc == full:
                found.append(Solution([perms[i] for i in chosen]))
            return want_all or acc != full
        for i in range(start, n):
            nodes += 1
            if cfg.node_limit is not None and nodes > cfg.node_limit:
                raise BudgetExceeded(nodes)
            if not rec(i, chosen + [i], acc | masks[i]):
                return False
        return True

    rec(0, [], 0)
    return found


# ---------------------------------------------------------------------------
# Branch-and-bound engine

_DEAD, _OPEN, _SAT = 0, 1, 2


def _chain_status(chain, pos):
    """Feasibility of one pattern chain against a partial ordering.

    ``pos`` maps placed variables to positions.  Unplaced variables will land
    strictly after every placed one, so a chain is still feasible iff its
    placed members form a position-increasing prefix of the chain.
    """
    prev = 0
    unplaced = False
    for v in chain:
        p = pos.get(v)
        if p is None:
            unplaced = True
        else:
            if unplaced or p <= prev:
                return _DEAD
            prev = p
    return _OPEN if unplaced else _SAT


class _BnB:
    def __init__(self, inst: Instance, cfg: SolverConfig, want_all: bool):
        self.inst = inst
        self.cfg = cfg
        self.want_all = want_all
        self.k = inst.k
        self.vars = inst.sorted_vars()
        self.m = len(self.vars)
        self.chains = [
            [tuple(c[s - 1] for s in p) for p in inst.pi.perms]
            for c in inst.constraints
        ]
        self.by_var: dict = {v: [] for v in self.vars}
        for ci, c in enumerate(inst.constraints):
            for v in set(c):
                self.by_var[v].append(ci)
        nC = len(inst.constraints)
        self.status = [[_OPEN] * self.k for _ in range(nC)]
        self.possible = [self.k] * nC  # orderings where not dead
        self.sat = [0] * nC            # orderings where fully satisfied
        self.seqs = [[] for _ in range(self.k)]
        self.pos = [dict() for _ in range(self.k)]
        self.nodes = 0
        self.found: list[Solution] = []
        self.stop = False
        # decision-mode symmetry breaking for pattern-reversal-closed
        # families: the two smallest variables keep a fixed relative order
        # in ordering 0
        self.sym_pair = None
        if cfg.symmetry_breaking and _reversal_closed(inst.pi) and self.m >= 2:
            self.sym_pair = (self.vars[0], self.vars[1])

    def _place(self, t, v):
        self.seqs[t].append(v)
        self.pos[t][v] = len(self.seqs[t])
        undo = []
        ok = True
        for ci in self.by_var[v]:
            old = self.status[ci][t]
            if old == _DEAD:
                continue
            st = _DEAD
            for chain in self.chains[ci]:
                cs = _chain_status(chain, self.pos[t])
                if cs == _SAT:
                    st = _SAT
                    break
                if cs == _OPEN:
                    st = _OPEN
            if st != old:
                undo.append((ci, old))
                self.status[ci][t] = st
                if st == _DEAD:
                    self.possible[ci] -= 1
                    if self.possible[ci] == 0:
                        ok = False
                elif st == _SAT:
                    self.sat[ci] += 1
        return undo, ok

    def _unplace(self, t, v, undo):
        for ci, old in undo:
            cur = self.status[ci][t]
            if cur == _DEAD:
                self.possible[ci] += 1
            elif cur == _SAT:
                self.sat[ci] -= 1
            self.status[ci][t] = old
        del self.pos[t][v]
        self.seqs[t].pop()

    def _pick_ordering(self):
        best, best_len = None, None
        for t in range(self.k):
            l = len(self.seqs[t])
            if l < self.m and (best is None or l < best_len):
                best, best_len = t, l
        return best

    def _candidates(self, t):
        placed = self.pos[t]
        cand = [v for v in self.vars if v not in placed]
        weight = {v: 0 for v in cand}
        for v in cand:
            for ci in self.by_var[v]:
                if self.status[ci][t] == _OPEN and self.sat[ci] == 0:
                    weight[v] += 1
        cand.sort(key=lambda v: (-weight[v], var_key(v)))
        return cand

    def run(self):
        self._search()
        return self.found

    def _search(self):
        if self.stop:
            return
        t = self._pick_ordering()
        if t is None:
            # complete assignment; pruning guarantees every constraint is
            # satisfied somewhere, but assert cheaply anyway
            assert all(s > 0 for s in self.sat) or not self.sat
            self.found.append(Solution(LinearOrdering(s) for s in self.seqs))
            if not self.want_all:
                self.stop = True
            return
        for v in self._candidates(t):
            if self.sym_pair is not None and t == 0 and v == self.sym_pair[1] \
                    and self.sym_pair[0] not in self.pos[0]:
                continue
            self.nodes += 1
            if self.cfg.node_limit is not None and self.nodes > self.cfg.node_limit:
                raise BudgetExceeded(self.nodes)
            undo, ok = self._place(t, v)
            if ok:
                self._search()
            self._unplace(t, v, undo)
            if self.stop:
                return


# ---------------------------------------------------------------------------
# Decision engine over pairwise order relations
#
# For yes/no questions the positional search above is outclassed by
# branching on "u precedes v in ordering t" Booleans with clause learning:
# a linear order per slot is a transitively closed orientation of the
# variable pairs, and each constraint must match an allowed pattern in at
# least one slot.  Enumeration keeps the positional engine, which yields
# the solution multisets directly.


def _cnf_decide(inst: Instance, cfg: SolverConfig) -> Optional[Solution]:
    vars_ = inst.sorted_vars()
    n, k = len(vars_), inst.k
    vidx = {v: i for i, v in enumerate(vars_)}
    npairs = n * (n - 1) // 2
    pair_id = {p: i for i, p in enumerate(combinations(range(n), 2))}

    def before(u: int, v: int, t: int) -> int:
        # literal for "position of u < position of v" in slot t
        if u < v:
            return 1 + pair_id[(u, v)] * k + t
        return -(1 + pair_id[(v, u)] * k + t)

    sat = _CnfSolver(npairs * k + len(inst.constraints) * k)

    def selector(ci: int, t: int) -> int:
        return npairs * k + ci * k + t + 1

    for i, j, l in combinations(range(n), 3):
        for t in range(k):
            ij, jl, il = before(i, j, t), before(j, l, t), before(i, l, t)
            sat.add_clause([-ij, -jl, il])
            sat.add_clause([ij, jl, -il])
    allowed = {tuple(p) for p in inst.pi.perms}
    for ci, c in enumerate(inst.constraints):
        for p in permutations((1, 2, 3)):
            if p in allowed:
                continue
            u, v, w = (vidx[c[s - 1]] for s in p)
            for t in range(k):
                sat.add_clause([-selector(ci, t), -before(u, v, t),
                                -before(v, w, t)])
        sat.add_clause([selector(ci, t) for t in range(k)])
    if cfg.symmetry_breaking and _reversal_closed(inst.pi) and n >= 2:
        sat.add_clause([before(0, 1, 0)])

    res = sat.solve(conflict_limit=cfg.node_limit)
    if res is None:
        raise BudgetExceeded(cfg.node_limit)
    if not res:
        return None
    model = sat.model()
    orderings = []
    for t in range(k):
        rank = {v: sum(model[abs(before(u, w, t))] == (before(u, w, t) > 0)
                       for u in range(n) if u != w)
                for w, v in enumerate(vars_)}
        # rank counts predecessors, so sorting by it linearizes the slot
        orderings.append(LinearOrdering(
            sorted(vars_, key=lambda v: rank[v])))
    sol = Solution(orderings)
    assert check_solution(inst, sol)
    return sol


# ---------------------------------------------------------------------------
# Public API


def solve(inst: Instance, cfg: SolverConfig = SolverConfig()) -> Optional[Solution]:
    """A satisfying Solution, or None (a proof of unsatisfiability).

    Raises BudgetExceeded when node_limit is hit before an answer.
    """
    if cfg.mode == "exhaustive":
        found = _exhaustive(inst, cfg, want_all=False)
        return found[0] if found else None
    return _cnf_decide(inst, cfg)


def enumerate_solutions(inst: Instance, cfg: SolverConfig) -> list[Solution]:
    """The complete, canonically ordered list of satisfying multisets."""
    if not cfg.enumerate_all:
        raise ValueError("enumerate_solutions requires enumerate_all=True")
    if cfg.mode == "exhaustive":
        found = _exhaustive(inst, cfg, want_all=True)
    else:
        found = _BnB(inst, cfg, want_all=True).run()
    uniq = sorted(set(found), key=Solution.sort_key)
    return uniq


def trivial_pair_solution(inst: Instance, alpha: LinearOrdering) -> Solution:
    """The {alpha, reversal(alpha)} witness for the always-satisfiable
    2-order families (indices 2, 3, 7, 8, 10)."""
    return Solution([alpha, reversal(alpha)])

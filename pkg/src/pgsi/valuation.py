"""Strategy valuation: dominating cycle nodes, loopless-path values, the
exhaustive oracle and the production evaluator, plus improvement-arena tests.

The production evaluator works region by region.  Dominating cycle nodes are
claimed in ascending reward order; each claims the nodes that can still reach
it.  Inside a region the relevant-set component is fixed by processing
relevant nodes in descending relevance: an even node splits the region into
avoiders and nodes forced through it, an odd node captures everything that
can detour through it (within a region such a detour can never collide with
the continuation, since a collision would close a cycle through the odd node
and eject it into an earlier region).  Path lengths fall out of a BFS or a
DAG longest-path pass once no relevant nodes remain.
"""

from __future__ import annotations

from dataclasses import dataclass

from .game import GameError, ParityGame, Strategy, restrict
from .orderings import GameValuation, NodeValuation, tables


class EnumerationGuardError(GameError):
    """Brute-force enumeration would exceed its budget."""


class ValuationError(GameError):
    """Evaluation failed (invalid strategy or internal invariant breach)."""


LooplessPath = tuple[int, ...]


# -- dominating cycle nodes -------------------------------------------------


def _scc_masks(succs: list[tuple[int, ...]], sub: int) -> list[int]:
    """Strongly connected components (as bitmasks) of the induced subgraph."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack = 0
    stack: list[int] = []
    comps: list[int] = []
    counter = 0
    m = sub
    while m:
        bit = m & -m
        m ^= bit
        root = bit.bit_length() - 1
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack |= 1 << v
            advanced = False
            succ = succs[v]
            while pi < len(succ):
                u = succ[pi]
                pi += 1
                if not (sub >> u) & 1:
                    continue
                if u not in index:
                    work[-1] = (v, pi)
                    work.append((u, 0))
                    advanced = True
                    break
                if (on_stack >> u) & 1 and index[u] < low[v]:
                    low[v] = index[u]
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on_stack &= ~(1 << w)
                    comp |= 1 << w
                    if w == v:
                        break
                comps.append(comp)
            if work:
                p, _ = work[-1]
                if low[v] < low[p]:
                    low[p] = low[v]
    return comps


def _cycle_ranks(succs: list[tuple[int, ...]], full: int) -> int:
    """Mask of nodes that carry the maximal priority on some cycle.

    Nodes must already be rank-indexed (higher index = more relevant), so the
    top of every component is simply its highest bit.
    """
    result = 0
    pending = [full]
    while pending:
        sub = pending.pop()
        if not sub:
            continue
        for comp in _scc_masks(succs, sub):
            top_bit = 1 << (comp.bit_length() - 1)
            rest = comp ^ top_bit
            top = top_bit.bit_length() - 1
            if rest or top in succs[top]:
                result |= top_bit
                pending.append(rest)
    return result


def dominating_cycle_nodes(game: ParityGame) -> frozenset[int]:
    """Nodes v lying on a cycle whose maximal priority is exactly their own."""
    t = tables(game)
    n = len(game)
    succ_rank: list[tuple[int, ...]] = [()] * n
    for v in game.nodes():
        succ_rank[t.rank_of[v]] = tuple(t.rank_of[u] for u in game.successors(v))
    mask = _cycle_ranks(succ_rank, t.full)
    return frozenset(t.by_rank[r] for r in _bits(mask))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def path_valuation(game: ParityGame, pi: LooplessPath) -> NodeValuation:
    """Valuation induced by a loopless path ending at a dominating cycle node."""
    if not pi:
        raise ValuationError("empty path")
    if len(set(pi)) != len(pi):
        raise ValuationError("path repeats a node")
    for a, b in zip(pi, pi[1:]):
        if b not in game.successors(a):
            raise ValuationError(f"({a},{b}) is not an edge")
    last = pi[-1]
    if last not in dominating_cycle_nodes(game):
        raise ValuationError(f"path ends at {last}, not a dominating cycle node")
    cutoff = game.priority(last)
    relevant = frozenset(v for v in pi if game.priority(v) > cutoff)
    return NodeValuation(last, relevant, len(pi) - 1)


# -- brute-force oracle ------------------------------------------------------


def evaluate_bruteforce(
    game: ParityGame, sigma: Strategy, *, max_steps: int = 5_000_000
) -> GameValuation:
    """Literal definition: minimize over every loopless path to a cycle node.

    Guarded: games beyond 12 nodes are only accepted when the player-1
    branching product stays within 10**6, and the walk counter aborts at
    ``max_steps`` extensions regardless.
    """
    n = len(game)
    if n > 12:
        prod = 1
        for v in game.nodes():
            if game.owner(v) == 1:
                prod *= len(game.successors(v))
                if prod > 1_000_000:
                    raise EnumerationGuardError(
                        "game too large for exhaustive path enumeration"
                    )
    sub = restrict(game, sigma)
    t = tables(sub)
    succ_rank: list[tuple[int, ...]] = [()] * n
    for v in sub.nodes():
        succ_rank[t.rank_of[v]] = tuple(t.rank_of[u] for u in sub.successors(v))
    cyc = _cycle_ranks(succ_rank, t.full)
    rew_rank = [t.rew[t.by_rank[r]] for r in range(n)]

    steps = 0
    best_cycle = [-1] * n
    best_mask = [0] * n
    best_len = [0] * n
    for start in range(n):
        best = None
        # stack of (node, visited-mask, length, path-mask)
        stack = [(start, 1 << start, 0, 1 << start)]
        while stack:
            v, seen, length, setmask = stack.pop()
            steps += 1
            if steps > max_steps:
                raise EnumerationGuardError("path enumeration budget exceeded")
            if (cyc >> v) & 1:
                rc = rew_rank[v]
                above = ~((1 << (v + 1)) - 1)
                cand = (rc, t.set_key(setmask & above), length if rc < 0 else -length)
                if best is None or cand < best[0]:
                    best = (cand, v, setmask & above, length)
            for u in succ_rank[v]:
                if not (seen >> u) & 1:
                    stack.append((u, seen | 1 << u, length + 1, setmask | 1 << u))
        if best is None:
            raise ValuationError(
                f"no loopless path from node {t.by_rank[start]} reaches a cycle node"
            )
        node = t.by_rank[start]
        best_cycle[node] = t.by_rank[best[1]]
        best_mask[node] = best[2]
        best_len[node] = best[3]
    return GameValuation(game, tuple(best_cycle), tuple(best_mask), tuple(best_len))


# -- production evaluator ----------------------------------------------------


class _EvalStatics:
    """Per-game precomputation shared by every evaluate() call."""

    __slots__ = (
        "n",
        "succ_rank_p1",
        "pred_p1",
        "succ_mask_p1",
        "p0",
        "rew_rank",
        "reward_order",
    )

    def __init__(self, game: ParityGame):
        t = tables(game)
        n = len(game)
        rank_of = t.rank_of
        succ_rank: list[tuple[int, ...] | None] = [None] * n
        pred = [0] * n
        succ_mask = [0] * n
        p0: list[tuple[int, int, tuple[int, ...]]] = []
        for v in game.nodes():
            r = rank_of[v]
            if game.owner(v) == 1:
                sr = tuple(rank_of[u] for u in game.successors(v))
                succ_rank[r] = sr
                rb = 1 << r
                sm = 0
                for u in sr:
                    pred[u] |= rb
                    sm |= 1 << u
                succ_mask[r] = sm
            else:
                p0.append((v, r, game.successors(v)))
        self.n = n
        self.succ_rank_p1 = succ_rank
        self.pred_p1 = pred
        self.succ_mask_p1 = succ_mask
        self.p0 = tuple(p0)
        self.rew_rank = tuple(t.rew[t.by_rank[r]] for r in range(n))
        self.reward_order = tuple(sorted(range(n), key=self.rew_rank.__getitem__))


def _statics(game: ParityGame) -> _EvalStatics:
    st = game._eval_cache
    if st is None:
        st = _EvalStatics(game)
        game._eval_cache = st
    return st


def evaluate(game: ParityGame, sigma: Strategy) -> GameValuation:
    """Valuation of a strategy; agrees with the brute-force oracle exactly."""
    if sigma.player != 0:
        raise ValuationError("evaluate expects a player-0 strategy")
    st = _statics(game)
    t = tables(game)
    n = st.n
    rank_of, by_rank = t.rank_of, t.by_rank
    even_ranks, odd_ranks = t.even_ranks, t.odd_ranks
    choices = sigma.choices
    succ_rank = list(st.succ_rank_p1)
    pred_mask = list(st.pred_p1)
    succ_mask = list(st.succ_mask_p1)
    for v, r, succs in st.p0:
        u = choices[v]
        if u < 0 or u not in succs:
            raise ValuationError(f"invalid strategy choice at node {v}")
        ur = rank_of[u]
        succ_rank[r] = (ur,)
        pred_mask[ur] |= 1 << r
        succ_mask[r] = 1 << ur

    full = t.full
    rew_rank = st.rew_rank

    res_cycle = [-1] * n
    res_mask = [0] * n
    res_len = [0] * n
    dag_state = [0] * n

    def breach(seed: int, allowed: int) -> int:
        """Backward closure of seed inside allowed (seed included)."""
        reached = seed
        frontier = seed
        while frontier:
            acc = 0
            m = frontier
            while m:
                low = m & -m
                acc |= pred_mask[low.bit_length() - 1]
                m ^= low
            frontier = acc & allowed & ~reached
            reached |= frontier
        return reached

    def value_pivot(r: int, rb: int, cont_from: int, composed: int, neg: bool) -> None:
        """Set the pivot's value from its best continuation, then push it onto
        every node whose paths are forced through the pivot."""
        best_s = -1
        best_k = 0
        best_l = 0
        for s in succ_rank[r]:
            if (cont_from >> s) & 1:
                m = res_mask[s]
                k = (m & even_ranks) | (~m & odd_ranks)
                l = res_len[s]
                if (
                    best_s < 0
                    or k < best_k
                    or (k == best_k and (l < best_l if neg else l > best_l))
                ):
                    best_s, best_k, best_l = s, k, l
        if best_s < 0:
            raise ValuationError("internal: pivot has no continuation")
        add_mask = rb | res_mask[best_s]
        add_len = res_len[best_s] + 1
        res_mask[r] = add_mask
        res_len[r] = add_len
        m = composed
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            res_mask[v] |= add_mask
            res_len[v] += add_len

    def solve(h: int, target: int, above: int, neg: bool) -> None:
        """Fill res_mask/res_len with the minimal (set, length) of loopless
        paths to ``target`` inside ``h`` (target excluded from reported sets).

        Pivots that split nothing off (nobody is forced through an even pivot,
        nobody can detour through an odd one) are deferred and valued on the
        way back out; genuine splits recurse on both sides.
        """
        tb = 1 << target
        res_mask[target] = 0
        res_len[target] = 0
        pending: list[tuple[int, int]] = []
        while True:
            interior = h & ~tb
            rel = interior & above
            if not rel:
                _base_lengths(h, target, interior, neg)
                break
            r = rel.bit_length() - 1
            rb = 1 << r
            if not pred_mask[r] & (interior & ~rb):
                # unreferenced pivot: no path routes through it at all
                h &= ~rb
                pending.append((r, h))
                continue
            if rew_rank[r] >= 0:
                # even: avoiders recurse without r; the rest is forced through
                a = breach(tb, h & ~rb)
                b = interior & ~a & ~rb
                if not b:
                    pending.append((r, a))
                    h = a
                    continue
                solve(a, target, above, neg)
                solve(b | rb, r, above, neg)
                value_pivot(r, rb, a, b, neg)
                break
            else:
                # odd: everything that can reach r detours through it
                reach_r = breach(rb, interior)
                pre = reach_r & ~rb
                rest = h & ~reach_r
                if not pre:
                    pending.append((r, rest))
                    h = rest
                    continue
                solve(rest, target, above, neg)
                solve(reach_r, r, above, neg)
                value_pivot(r, rb, rest, pre, neg)
                break
        # deferred pivots, deepest first: continuations are final by now
        for i in range(len(pending) - 1, -1, -1):
            r, cont_from = pending[i]
            succ = succ_rank[r]
            if len(succ) == 1:
                s = succ[0]
                if not (cont_from >> s) & 1:
                    raise ValuationError("internal: pivot has no continuation")
                res_mask[r] = (1 << r) | res_mask[s]
                res_len[r] = res_len[s] + 1
            else:
                value_pivot(r, 1 << r, cont_from, 0, neg)

    def _base_lengths(h: int, target: int, interior: int, neg: bool) -> None:
        if neg:
            # shortest paths: backward BFS levels from the target
            reached = 1 << target
            frontier = reached
            dist = 0
            while frontier:
                dist += 1
                acc = 0
                m = frontier
                while m:
                    low = m & -m
                    acc |= pred_mask[low.bit_length() - 1]
                    m ^= low
                frontier = acc & interior & ~reached
                m = frontier
                while m:
                    low = m & -m
                    v = low.bit_length() - 1
                    m ^= low
                    res_mask[v] = 0
                    res_len[v] = dist
                reached |= frontier
            if reached != h | 1 << target:
                raise ValuationError("internal: region node cannot reach its target")
        else:
            # longest paths: the interior must be acyclic here
            order: list[int] = []
            m = interior
            while m:
                low = m & -m
                root = low.bit_length() - 1
                m ^= low
                if dag_state[root]:
                    continue
                work = [(root, 0)]
                dag_state[root] = 1
                while work:
                    v, pi = work[-1]
                    succ = succ_rank[v]
                    advanced = False
                    while pi < len(succ):
                        u = succ[pi]
                        pi += 1
                        if not (interior >> u) & 1:
                            continue
                        stt = dag_state[u]
                        if stt == 1:
                            raise ValuationError(
                                "internal: cycle in even-region residue"
                            )
                        if stt == 0:
                            work[-1] = (v, pi)
                            dag_state[u] = 1
                            work.append((u, 0))
                            advanced = True
                            break
                    if advanced:
                        continue
                    work.pop()
                    dag_state[v] = 2
                    order.append(v)
            for v in order:  # reverse topological: successors already final
                dist = -1
                for u in succ_rank[v]:
                    if u == target:
                        d = 1
                    elif (interior >> u) & 1:
                        d = res_len[u] + 1
                    else:
                        continue
                    if d > dist:
                        dist = d
                if dist < 0:
                    raise ValuationError("internal: region node cannot reach its target")
                res_mask[v] = 0
                res_len[v] = dist

    def find_root(sub: int) -> int:
        """Reward-minimal node of `sub` that tops a cycle of the subgraph.

        One Tarjan pass; an odd-topped component contributes its top (the
        component's reward-minimal cycle dominator), an even-topped one is
        peeled internally for possible odd dominators.
        """
        index = [-1] * n
        low_ = [0] * n
        on = 0
        order_stack: list[int] = []
        work_v: list[int] = []
        work_i: list[int] = []
        counter = 0
        best = -1
        best_rew = 0
        m = sub
        while m:
            lowbit = m & -m
            m ^= lowbit
            root = lowbit.bit_length() - 1
            if index[root] >= 0:
                continue
            work_v.append(root)
            work_i.append(0)
            index[root] = low_[root] = counter
            counter += 1
            order_stack.append(root)
            on |= lowbit
            while work_v:
                v = work_v[-1]
                pi = work_i[-1]
                succ = succ_rank[v]
                advanced = False
                while pi < len(succ):
                    u = succ[pi]
                    pi += 1
                    if not (sub >> u) & 1:
                        continue
                    if index[u] < 0:
                        work_i[-1] = pi
                        work_v.append(u)
                        work_i.append(0)
                        index[u] = low_[u] = counter
                        counter += 1
                        order_stack.append(u)
                        on |= 1 << u
                        advanced = True
                        break
                    if (on >> u) & 1 and index[u] < low_[v]:
                        low_[v] = index[u]
                if advanced:
                    continue
                work_v.pop()
                work_i.pop()
                lv = low_[v]
                if lv == index[v]:
                    comp = 0
                    while True:
                        w = order_stack.pop()
                        on &= ~(1 << w)
                        comp |= 1 << w
                        if w == v:
                            break
                    top = comp.bit_length() - 1
                    if comp & (comp - 1) or succ_mask[top] & (1 << top):
                        if rew_rank[top] < 0:
                            # an odd top is its component's reward minimum
                            if best < 0 or rew_rank[top] < best_rew:
                                best, best_rew = top, rew_rank[top]
                        else:
                            # strip the rest: only a surviving cycle can hide
                            # further dominators below an even top
                            rest = comp ^ (1 << top)
                            while rest:
                                strip = 0
                                mm = rest
                                while mm:
                                    lb = mm & -mm
                                    if not succ_mask[lb.bit_length() - 1] & rest:
                                        strip |= lb
                                    mm ^= lb
                                if not strip:
                                    break
                                rest &= ~strip
                            if rest:
                                cands = _cycle_ranks(succ_rank, comp)
                            else:
                                cands = 1 << top
                            for c in _bits(cands):
                                if best < 0 or rew_rank[c] < best_rew:
                                    best, best_rew = c, rew_rank[c]
                elif work_v:
                    p = work_v[-1]
                    if lv < low_[p]:
                        low_[p] = lv
        if best < 0:
            raise ValuationError("internal: no cycle in a total subgame")
        return best

    assigned = 0
    while assigned != full:
        sub = full & ~assigned
        wr = find_root(sub)
        region = breach(1 << wr, sub)
        above = full & ~((1 << (wr + 1)) - 1)
        solve(region, wr, above, rew_rank[wr] < 0)
        w_node = by_rank[wr]
        m = region
        while m:
            low = m & -m
            res_cycle[low.bit_length() - 1] = w_node
            m ^= low
        assigned |= region

    cycle = [0] * n
    mask = [0] * n
    length = [0] * n
    for r in range(n):
        v = by_rank[r]
        cycle[v] = res_cycle[r]
        mask[v] = res_mask[r]
        length[v] = res_len[r]
    return GameValuation(game, tuple(cycle), tuple(mask), tuple(length))


# -- improvement arena --------------------------------------------------------


@dataclass(frozen=True)
class ImprovementArena:
    """Admissible successors per player-0 node: at least as good as sigma's pick."""

    admissible: tuple[tuple[int, ...] | None, ...]

    def edges(self, v: int) -> tuple[int, ...]:
        adm = self.admissible[v]
        if adm is None:
            raise KeyError(f"node {v} is not a player-0 node")
        return adm


def improvement_arena(
    game: ParityGame, sigma: Strategy, valuation: GameValuation
) -> ImprovementArena:
    keys = valuation.keys()
    out: list[tuple[int, ...] | None] = [None] * len(game)
    for v in game.nodes():
        if game.owner(v) != 0:
            continue
        base = keys[sigma[v]]
        out[v] = tuple(u for u in game.successors(v) if keys[u] >= base)
    return ImprovementArena(tuple(out))


def is_improvable(game: ParityGame, sigma: Strategy, valuation: GameValuation) -> bool:
    """True iff some player-0 node has a strictly better successor."""
    keys = valuation.keys()
    owners = game.owners
    choices = sigma.choices
    for v in game.nodes():
        if owners[v] != 0:
            continue
        base = keys[choices[v]]
        for u in game.successors(v):
            if keys[u] > base:
                return True
    return False

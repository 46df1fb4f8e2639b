"""The quadratic-size game family on which strategy iteration is exponential.

``generate(n)`` builds the game exactly per its defining table: a long
deceleration lane (s, t, b_i, a_i, c, d, x), n stubborn cycles (e_i, f_i,
g_i, h_i) with their associated structures (k_i, l_i, m_i, z_i), the final
sink pair (p, q) and the two lane entry nodes y and w.  The three strategy
families below describe the full improvement run: 11 initialization steps,
gamma+3 counting steps per counter state, and 3n+3 finalization steps,
13*2^n - 9 strategies in total (the initial strategy is the first family
member).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .game import GameError, NodeRecord, ParityGame, Strategy, make_strategy
from .improvement import improve_locally, run


def expected_counts(n: int) -> tuple[int, int, int]:
    """(nodes, edges, max priority) of generate(n), in closed form."""
    if n < 1:
        raise GameError("n must be >= 1")
    return 14 * n + 11, 3 * n * n + 28 * n + 17, 16 * n + 16


def expected_iterations(n: int) -> int:
    """Closed-form strategy count of the improvement run on generate(n)."""
    if n < 1:
        raise GameError("n must be >= 1")
    return 13 * 2**n - 9


# -- bit-state calculus -------------------------------------------------------


@dataclass(frozen=True)
class BitState:
    """n-bit counter value; ``bits[j]`` is bit j (lowest first)."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) < 1 or any(b not in (0, 1) for b in self.bits):
            raise GameError("bits must be a non-empty 0/1 tuple")

    @classmethod
    def zero(cls, n: int) -> BitState:
        return cls((0,) * n)

    @classmethod
    def ones(cls, n: int) -> BitState:
        return cls((1,) * n)

    @classmethod
    def from_int(cls, value: int, n: int) -> BitState:
        if not 0 <= value < 2**n:
            raise GameError(f"{value} does not fit in {n} bits")
        return cls(tuple((value >> j) & 1 for j in range(n)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        return sum(b << j for j, b in enumerate(self.bits))

    def bit(self, j: int) -> int:
        return self.bits[j]

    def mu(self) -> int:
        """Index of the lowest zero bit."""
        for j, b in enumerate(self.bits):
            if b == 0:
                return j
        raise GameError("mu undefined on the all-ones state")

    def nu(self) -> int:
        """Count of trailing zero bits (n when all bits are zero)."""
        for j, b in enumerate(self.bits):
            if b == 1:
                return j
        return self.n

    def gamma(self) -> int:
        """Round length contribution: 3*mu + 7."""
        return 3 * self.mu() + 7

    def restrict_above(self, j: int) -> BitState:
        """Zero out bits at positions <= j (j = -1 keeps everything)."""
        if not -1 <= j < self.n:
            raise GameError(f"restriction index {j} out of range")
        return BitState(tuple(0 if k <= j else b for k, b in enumerate(self.bits)))

    def increment(self) -> BitState:
        if all(self.bits):
            raise GameError("increment overflows the all-ones state")
        return BitState.from_int(self.value + 1, self.n)

    def decrement(self) -> BitState:
        if not any(self.bits):
            raise GameError("decrement underflows the all-zero state")
        return BitState.from_int(self.value - 1, self.n)

    def __str__(self) -> str:
        return "".join(str(b) for b in reversed(self.bits))


# -- generator ----------------------------------------------------------------


class _Index:
    """Role-name to node-id bijection for a fixed n (table order, frozen)."""

    def __init__(self, n: int):
        self.n = n
        names: list[str] = ["s", "t", "y", "w"]
        names += [f"b{i}" for i in range(3 * n + 1)]
        names += [f"a{i}" for i in range(3 * n + 1)]
        names += ["c", "d", "x"]
        for role in "efghlzkm":
            names += [f"{role}{i}" for i in range(n)]
        names += ["q", "p"]
        self.names = names
        self.id = {name: i for i, name in enumerate(names)}
        self.s = self.id["s"]
        self.t = self.id["t"]
        self.y = self.id["y"]
        self.w = self.id["w"]
        self.c = self.id["c"]
        self.d = self.id["d"]
        self.x = self.id["x"]
        self.q = self.id["q"]
        self.p = self.id["p"]
        self.b = [self.id[f"b{i}"] for i in range(3 * n + 1)]
        self.a = [self.id[f"a{i}"] for i in range(3 * n + 1)]
        self.e = [self.id[f"e{i}"] for i in range(n)]
        self.f = [self.id[f"f{i}"] for i in range(n)]
        self.g = [self.id[f"g{i}"] for i in range(n)]
        self.h = [self.id[f"h{i}"] for i in range(n)]
        self.l = [self.id[f"l{i}"] for i in range(n)]
        self.z = [self.id[f"z{i}"] for i in range(n)]
        self.k = [self.id[f"k{i}"] for i in range(n)]
        self.m = [self.id[f"m{i}"] for i in range(n)]


@lru_cache(maxsize=None)
def _gn(n: int) -> tuple[ParityGame, _Index]:
    if n < 1:
        raise GameError("n must be >= 1")
    ix = _Index(n)
    records: list[NodeRecord | None] = [None] * len(ix.names)

    def put(node: int, owner: int, priority: int, succ: list[int]):
        records[node] = NodeRecord(owner, priority, tuple(succ), ix.names[node])

    put(ix.s, 0, 2, [ix.p] + ix.k)
    put(ix.t, 0, 3, [ix.x, ix.s])
    put(ix.y, 0, 5, [ix.l[0], ix.w])
    put(ix.w, 0, 7, [ix.p, ix.y] + [ix.l[j] for j in range(1, n)])
    put(ix.b[0], 0, 6 * n + 9, [ix.s, ix.x, ix.d])
    for i in range(1, 3 * n + 1):
        put(ix.b[i], 0, 6 * n + 2 * i + 9, [ix.s, ix.x, ix.b[i - 1]])
    for i in range(3 * n + 1):
        put(ix.a[i], 1, 6 * n + 2 * i + 10, [ix.b[i]])
    put(ix.c, 1, 12 * n + 11, [ix.d])
    put(ix.d, 0, 12 * n + 12, [ix.t, ix.x])
    put(ix.x, 0, 12 * n + 14, [ix.w, ix.y])
    for i in range(n):
        put(
            ix.e[i], 0, 6 * i + 9,
            [ix.s, ix.f[i], ix.c] + [ix.a[3 * j + 2] for j in range(i + 1)],
        )
        put(
            ix.f[i], 0, 6 * i + 11,
            [ix.g[i]] + [ix.a[3 * j + 1] for j in range(i + 1)] + ix.k,
        )
        put(
            ix.g[i], 0, 6 * i + 13,
            [ix.h[i]] + [ix.a[3 * j] for j in range(i + 2)],
        )
        put(ix.h[i], 1, 6 * i + 14, [ix.e[i], ix.m[i]])
        put(ix.l[i], 0, 6 * i + 10, [ix.k[i], ix.z[i]])
        put(
            ix.z[i], 0, 12 * n + 4 * i + 15,
            [ix.p] + [ix.l[j] for j in range(i + 1, n)],
        )
        put(ix.k[i], 1, 12 * n + 4 * i + 17, [ix.h[i]])
        put(ix.m[i], 1, 12 * n + 4 * i + 18, [ix.z[i]])
    put(ix.q, 1, 1, [ix.q])
    put(ix.p, 1, 16 * n + 16, [ix.q])
    return ParityGame(records), ix


def generate(n: int) -> ParityGame:
    """The lower-bound game; node ids follow the defining table's row order."""
    return _gn(n)[0]


def node_ids(n: int) -> dict[str, int]:
    """Role-name (e.g. ``"b3"``, ``"q"``) to node-id table for generate(n)."""
    return dict(_gn(n)[1].id)


# -- strategy families ----------------------------------------------------------


def sigma_init(n: int, beta: int) -> Strategy:
    """Initialization family, beta in [-2, 8]; beta = -2 is the initial strategy."""
    if not -2 <= beta <= 8:
        raise GameError(f"initialization beta {beta} out of range")
    game, ix = _gn(n)
    ch: dict[int, int] = {}

    ch[ix.b[0]] = ix.s if beta in (-1, 8) else ix.x if beta == -2 else ix.d
    for j in range(1, 3 * n + 1):
        if beta in (-1, 8):
            ch[ix.b[j]] = ix.s
        elif beta != -1 and beta < j:
            ch[ix.b[j]] = ix.x
        else:
            ch[ix.b[j]] = ix.b[j - 1]
    for j in range(n):
        ch[ix.l[j]] = ix.k[j] if (j == 0 and beta >= 7) else ix.z[j]
    ch[ix.s] = ix.k[0] if beta >= 7 else ix.p
    ch[ix.t] = ix.s if beta in (-1, 8) else ix.x
    ch[ix.x] = ix.y if beta == -2 else ix.w
    ch[ix.y] = ix.l[0] if beta in (-2, 8) else ix.w
    for j in range(n):
        if beta == -2:
            ch[ix.e[j]] = ix.a[3 * j + 2]
        elif beta == -1 or (beta == 8 and j > 0):
            ch[ix.e[j]] = ix.s
        elif beta in (0, 1):
            ch[ix.e[j]] = ix.c
        elif beta in (3, 4):
            ch[ix.e[j]] = ix.a[2]
        elif beta in (6, 7) and j > 0:
            ch[ix.e[j]] = ix.a[5]
        else:
            ch[ix.e[j]] = ix.f[j]
        if beta in (7, 8) and j > 0:
            ch[ix.f[j]] = ix.k[0]
        elif beta == -2:
            ch[ix.f[j]] = ix.a[3 * j + 1]
        elif beta in (2, 3):
            ch[ix.f[j]] = ix.a[1]
        elif beta in (5, 6) and j > 0:
            ch[ix.f[j]] = ix.a[4]
        else:
            ch[ix.f[j]] = ix.g[j]
        if beta < 1:
            ch[ix.g[j]] = ix.a[3 * j + 3]
        elif beta in (1, 2):
            ch[ix.g[j]] = ix.a[0]
        elif beta in (4, 5):
            ch[ix.g[j]] = ix.a[3]
        elif beta >= 7 and j > 0:
            ch[ix.g[j]] = ix.a[6]
        else:
            ch[ix.g[j]] = ix.h[j]
    ch[ix.d] = ix.x
    ch[ix.w] = ix.p
    for j in range(n):
        ch[ix.z[j]] = ix.p
    return make_strategy(game, ch)


def sigma_count(n: int, alpha: BitState, beta: int) -> Strategy:
    """Counting family for counter state alpha (not all-zero, not all-ones)."""
    if alpha.n != n:
        raise GameError("bit-state width differs from n")
    if not any(alpha.bits) or all(alpha.bits):
        raise GameError("counting strategies exclude the all-zero/all-one states")
    mu = alpha.mu()
    nu = alpha.nu()
    gamma = alpha.gamma()
    if not -2 <= beta <= gamma:
        raise GameError(f"counting beta {beta} out of range (gamma={gamma})")
    up = alpha.increment()
    down = alpha.decrement()
    # the previous round's length paces what the lane handed over at beta = -2
    down_gamma = down.gamma()
    game, ix = _gn(n)
    ch: dict[int, int] = {}

    ch[ix.b[0]] = ix.s if beta in (-2, gamma) else ix.x if beta == -1 else ix.d
    for j in range(1, 3 * n + 1):
        if beta in (-2, gamma):
            ch[ix.b[j]] = ix.s
        elif -2 < beta < j:
            ch[ix.b[j]] = ix.x
        else:
            ch[ix.b[j]] = ix.b[j - 1]
    ch[ix.d] = ix.t if beta == -2 else ix.x
    for j in range(n):
        if alpha.bit(j) == 1 or (beta >= gamma - 1 and j == mu):
            ch[ix.l[j]] = ix.k[j]
        else:
            ch[ix.l[j]] = ix.z[j]
    ch[ix.s] = ix.k[nu] if beta < gamma - 1 else ix.k[mu]
    ch[ix.t] = ix.s if beta in (-2, gamma) else ix.x
    if alpha.bit(0) == 1:
        ch[ix.w] = ix.y if beta < gamma else ix.l[mu]
    else:
        ch[ix.w] = ix.l[nu]
    ch[ix.x] = ix.y if alpha.bit(0) == 1 else ix.w
    ch[ix.y] = ix.l[0] if (alpha.bit(0) == 1 or beta == gamma) else ix.w
    for j in range(n):
        nu_above = alpha.restrict_above(j).nu()
        if beta == gamma and j < mu:
            ch[ix.z[j]] = ix.l[mu]
        elif j < nu_above < n and (beta < gamma or mu <= j):
            ch[ix.z[j]] = ix.l[nu_above]
        else:
            ch[ix.z[j]] = ix.p
    for j in range(n):
        aj = alpha.bit(j)
        if aj == 0 and beta in (-1, 0):
            ch[ix.e[j]] = ix.c
        elif up.bit(j) == 0 and beta == gamma:
            ch[ix.e[j]] = ix.s
        elif aj == 0 and beta == -2:
            ch[ix.e[j]] = ix.a[3 * j + 2]
        elif beta > 0 and beta % 3 == 0 and aj == 0 and (beta < gamma - 1 or mu < j):
            ch[ix.e[j]] = ix.a[beta - 1]
        else:
            ch[ix.e[j]] = ix.f[j]
        if beta == -2 and aj == 0 and (
            down.bit(j) == 1 or (down.bit(j) == 0 and down_gamma <= 3 * j + 1)
        ):
            ch[ix.f[j]] = ix.a[3 * j + 1]
        elif beta > 0 and beta % 3 == 2 and aj == 0 and (beta < gamma - 2 or mu < j):
            ch[ix.f[j]] = ix.a[beta - 1]
        elif up.bit(j) == 0 and beta >= gamma - 1:
            ch[ix.f[j]] = ix.k[mu]
        else:
            ch[ix.f[j]] = ix.g[j]
        if aj == 0 and beta < 0:
            ch[ix.g[j]] = ix.a[3 * j + 3]
        elif beta > 0 and beta % 3 == 1 and aj == 0 and (beta < gamma or mu < j):
            ch[ix.g[j]] = ix.a[beta - 1]
        else:
            ch[ix.g[j]] = ix.h[j]
    return make_strategy(game, ch)


def sigma_final(n: int, beta: int) -> Strategy:
    """Finalization family, beta in [-2, 3n]; beta = 3n is the fixpoint."""
    if not -2 <= beta <= 3 * n:
        raise GameError(f"finalization beta {beta} out of range")
    game, ix = _gn(n)
    ch: dict[int, int] = {}

    ch[ix.b[0]] = ix.s if beta == -2 else ix.x if beta == -1 else ix.d
    for j in range(1, 3 * n + 1):
        if beta == -2:
            ch[ix.b[j]] = ix.s
        elif -2 < beta < j:
            ch[ix.b[j]] = ix.x
        else:
            ch[ix.b[j]] = ix.b[j - 1]
    for j in range(n):
        ch[ix.z[j]] = ix.p if j == n - 1 else ix.l[j + 1]
    ch[ix.d] = ix.t if beta == -2 else ix.x
    ch[ix.t] = ix.s if beta == -2 else ix.x
    for j in range(n):
        ch[ix.l[j]] = ix.k[j]
        ch[ix.e[j]] = ix.f[j]
        ch[ix.f[j]] = ix.g[j]
        ch[ix.g[j]] = ix.h[j]
    ch[ix.s] = ix.k[0]
    ch[ix.w] = ix.y
    ch[ix.x] = ix.y
    ch[ix.y] = ix.l[0]
    return make_strategy(game, ch)


def counter_walk(n: int) -> list[BitState]:
    """Counter states of the counting phase: from 0..01 up to 1..10."""
    return [BitState.from_int(v, n) for v in range(1, 2**n - 1)]


def expected_trace(n: int) -> list[Strategy]:
    """Every strategy of the full run, in order; the first one is the initial
    strategy and the last one the fixpoint.  Defined for n >= 2 (at n = 1 the
    counting phase is empty and only the iteration count is predicted)."""
    if n < 2:
        raise GameError("expected_trace requires n >= 2")
    out = [sigma_init(n, beta) for beta in range(-2, 9)]
    for alpha in counter_walk(n):
        gamma = alpha.gamma()
        out.extend(sigma_count(n, alpha, beta) for beta in range(-2, gamma + 1))
    out.extend(sigma_final(n, beta) for beta in range(-2, 3 * n + 1))
    return out


# -- macro-state diagnostics -----------------------------------------------------


def macro_state(n: int, sigma: Strategy) -> str:
    """Deceleration-lane summary of a strategy: T, S, X, a chain digit, or
    "mixed" when no pattern applies.  Diagnostic only."""
    _, ix = _gn(n)
    if sigma[ix.d] == ix.t:
        return "T"
    bs = [sigma[b] for b in ix.b]
    if all(c == ix.s for c in bs):
        return "S"
    if all(c == ix.x for c in bs):
        return "X"
    if bs[0] == ix.d:
        k = 0
        for j in range(1, 3 * n + 1):
            if bs[j] == ix.b[j - 1]:
                k = j
            else:
                break
        return str(k)
    return "mixed"


def bit_pattern(n: int, sigma: Strategy) -> BitState:
    """Closed-cycle flags of a strategy (cycle j closed = bit j set)."""
    _, ix = _gn(n)
    return BitState(
        tuple(
            int(
                sigma[ix.e[j]] == ix.f[j]
                and sigma[ix.f[j]] == ix.g[j]
                and sigma[ix.g[j]] == ix.h[j]
            )
            for j in range(n)
        )
    )


# -- end-to-end verification -------------------------------------------------------


@dataclass(frozen=True)
class Lemma7Report:
    """Strategy-by-strategy comparison of a real run against the family trace."""

    n: int
    iterations: int
    expected_iterations: int
    steps_checked: int
    matched: int
    first_divergence: tuple[int, str] | None

    @property
    def count_ok(self) -> bool:
        return self.iterations == self.expected_iterations

    @property
    def full_match(self) -> bool:
        return self.count_ok and self.first_divergence is None

    def to_text(self) -> str:
        lines = []
        for i in range(self.steps_checked):
            if self.first_divergence is not None and i == self.first_divergence[0]:
                lines.append(f"step {i}: DIVERGED ({self.first_divergence[1]})")
                break
            lines.append(f"step {i}: OK")
        lines.append(
            f"summary: n={self.n} steps={self.iterations} "
            f"expected={self.expected_iterations} matched={self.matched}"
        )
        return "\n".join(lines) + "\n"


def _describe_divergence(game: ParityGame, got: Strategy, want: Strategy) -> str:
    diffs = []
    for v in game.player_nodes(0):
        if got[v] != want[v]:
            diffs.append(
                f"{game.display(v)}: got {game.display(got[v])}, "
                f"expected {game.display(want[v])}"
            )
    return "; ".join(diffs[:4]) + ("; ..." if len(diffs) > 4 else "")


def verify_lemma7(n: int) -> Lemma7Report:
    """Run the solver on generate(n) and check the recorded trace against the
    three families, element by element."""
    if n < 2:
        raise GameError("trace verification requires n >= 2")
    game = generate(n)
    result = run(game, improve_locally, record_trace=True)
    expected = expected_trace(n)
    trace = [sigma for sigma, _ in result.trace]
    matched = 0
    first_div: tuple[int, str] | None = None
    for i, want in enumerate(expected):
        if i >= len(trace):
            first_div = (i, "run ended early")
            break
        if trace[i] == want:
            matched += 1
        else:
            first_div = (i, _describe_divergence(game, trace[i], want))
            break
    else:
        if len(trace) > len(expected):
            first_div = (len(expected), "run has extra strategies")
    return Lemma7Report(
        n=n,
        iterations=result.iteration_count,
        expected_iterations=expected_iterations(n),
        steps_checked=min(len(trace), len(expected)),
        matched=matched,
        first_divergence=first_div,
    )


def verify_count(n: int) -> tuple[int, int]:
    """(actual, expected) iteration count on generate(n); works for n = 1 too."""
    result = run(generate(n))
    return result.iteration_count, expected_iterations(n)


__all__ = [
    "BitState",
    "Lemma7Report",
    "bit_pattern",
    "counter_walk",
    "expected_counts",
    "expected_iterations",
    "expected_trace",
    "generate",
    "macro_state",
    "node_ids",
    "sigma_count",
    "sigma_final",
    "sigma_init",
    "verify_count",
    "verify_lemma7",
]

"""Hardness-reduction constructors and their independent validation oracles.

Both reductions come with the combinatorial oracle for the source problem
(exact minimum vertex cover, exact subset-sum), so the claimed equivalences
can be checked instance by instance with exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .model import (
    Action,
    CapExceededError,
    CorrelatedInstance,
    IndependentInstance,
    InvalidInstanceError,
    Profile,
)
from .xnum import IOTA, XNum


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with 1-indexed vertices."""

    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertices < 1:
            raise InvalidInstanceError("graph needs at least one vertex")
        seen = set()
        canonical = []
        for u, v in self.edges:
            if not (1 <= u <= self.vertices and 1 <= v <= self.vertices):
                raise InvalidInstanceError(f"edge ({u}, {v}) endpoint out of range")
            if u == v:
                raise InvalidInstanceError(f"self-loop at vertex {u}")
            edge = (min(u, v), max(u, v))
            if edge in seen:
                raise InvalidInstanceError(f"duplicate edge {edge}")
            seen.add(edge)
            canonical.append(edge)
        object.__setattr__(self, "edges", tuple(canonical))

    @property
    def max_degree(self) -> int:
        degree = [0] * (self.vertices + 1)
        for u, v in self.edges:
            degree[u] += 1
            degree[v] += 1
        return max(degree)


def parse_graph(text: str, vertices: int | None = None) -> Graph:
    """Parse edge-list text: one "u v" pair per line, 1-indexed.

    Blank lines and lines starting with '#' are skipped.  The vertex count
    defaults to the largest endpoint; pass ``vertices`` to keep isolated
    vertices.
    """
    edges = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInstanceError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InvalidInstanceError(f"line {lineno}: non-integer endpoint") from exc
        edges.append((u, v))
    if vertices is None:
        if not edges:
            raise InvalidInstanceError("empty edge list; pass an explicit vertex count")
        vertices = max(max(e) for e in edges)
    return Graph(vertices, tuple(edges))


def min_vertex_cover(g: Graph, cap_n: int = 20) -> int:
    """Exact minimum vertex cover size by subset enumeration."""
    if g.vertices > cap_n:
        raise CapExceededError(f"graph has {g.vertices} vertices, cap is {cap_n}")
    if not g.edges:
        return 0
    for size in range(1, g.vertices + 1):
        for combo in combinations(range(1, g.vertices + 1), size):
            chosen = set(combo)
            if all(u in chosen or v in chosen for u, v in g.edges):
                return size
    raise AssertionError("unreachable: the full vertex set covers everything")


def reduce_vertex_cover(g: Graph) -> CorrelatedInstance:
    """Delegation instance whose optimum encodes the minimum vertex cover.

    Actions 1..n correspond to vertices (bias 0); action n+1 is a default the
    agent only takes as a last resort: it pays the principal 3 in every
    profile but carries bias -2, leaving the agent utility 1.  Uniformly
    likely profiles: one per edge {i, j} paying 5 to both endpoint actions,
    and one per vertex i paying 2 to action i.

    The best menu is a minimum vertex cover plus the default, worth exactly
    (5*edges + 3*vertices - cover) / (edges + vertices): covered edges pay 5,
    vertices in the cover pay 2, and the rest fall through to the default
    for 3.
    """
    n, m = g.vertices, len(g.edges)
    prob = Fraction(1, m + n)
    zero = XNum(Fraction(0))
    default_value = XNum(Fraction(3))
    profiles = []
    for u, v in g.edges:
        values = [zero] * (n + 1)
        values[u - 1] = XNum(Fraction(5))
        values[v - 1] = XNum(Fraction(5))
        values[n] = default_value
        profiles.append(Profile(prob, tuple(values)))
    for i in range(1, n + 1):
        values = [zero] * (n + 1)
        values[i - 1] = XNum(Fraction(2))
        values[n] = default_value
        profiles.append(Profile(prob, tuple(values)))
    biases = tuple([zero] * n + [XNum(Fraction(-2))])
    labels = tuple([f"v{i}" for i in range(1, n + 1)] + ["default"])
    return CorrelatedInstance(biases, tuple(profiles), None, labels)


# ---------------------------------------------------------------------------
# Integer partition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartitionInstance:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise InvalidInstanceError("partition instance is empty")
        if any(c <= 0 for c in self.values):
            raise InvalidInstanceError("partition values must be positive integers")

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def max_value(self) -> int:
        return max(self.values)


def has_partition(p: PartitionInstance) -> bool:
    """True iff some subset sums to half the total (bitset subset-sum DP)."""
    if p.total % 2:
        return False
    target = p.total // 2
    reachable = 1
    for c in p.values:
        reachable |= reachable << c
    return bool(reachable >> target & 1)


def minimal_valid_m(p: PartitionInstance) -> int:
    """Smallest M accepted by :func:`reduce_integer_partition`."""
    n, c_max = len(p.values), p.max_value
    return max(2 * p.total, 4 * n * c_max, 128 * n**3 * c_max**3)


def reduce_integer_partition(
    p: PartitionInstance, M: int
) -> tuple[IndependentInstance, Fraction]:
    """Delegation instance whose optimum crosses a threshold iff a partition exists.

    Integer c_i becomes action i with bias B = M^2*(1 - C/2M) and value
    1 + 2*iota with probability p_i = c_i/M^3 + c_i^2/(2M^4*(1 - C/2M)),
    value 1 with probability q_i = c_i/M, and 0 otherwise.  Action n+1
    (bias 0) is worth 0 half the time and B + 1 + iota otherwise.

    Any useful menu is S + {n+1}; writing s for the sum of the c_i with
    i in S, its exact utility is (B+1)/2 + s(C-s)/(4M^2) + D with
    |D| <= 2C^3/M^3: the q_i drive a concave product term while the p_i's
    second-order component cancels the sum-of-squares left over from the
    pairwise low-realization collisions.  Requiring M >= 2C, M >= 4n*c_max,
    and M >= 128*n^3*c_max^3 caps |D| at 1/(64M^2), half the 1/(32M^2) slack
    between an even split (s(C-s) = C^2/4) and the best uneven one
    (s(C-s) <= (C^2-1)/4).

    Returns the instance and the decision threshold
    (B+1)/2 + C^2/(16M^2) - 1/(32M^2): the optimal menu's standard part
    reaches it iff the integers split evenly.
    """
    n, C, c_max = len(p.values), p.total, p.max_value
    for name, lower in (
        ("2*C", 2 * C),
        ("4*n*c_max", 4 * n * c_max),
        ("128*n^3*c_max^3", 128 * n**3 * c_max**3),
    ):
        if M < lower:
            raise InvalidInstanceError(f"M={M} violates M >= {name} = {lower}")

    big_bias = Fraction(M**2) * (1 - Fraction(C, 2 * M))
    actions = []
    for i, c in enumerate(p.values, start=1):
        p_high = Fraction(c, M**3) + Fraction(c**2, 2 * M**4 - C * M**3)
        q_low = Fraction(c, M)
        if not (0 < p_high and 0 < q_low and p_high + q_low < 1):
            raise InvalidInstanceError(
                f"action {i}: probabilities p={p_high}, q={q_low} not a distribution"
            )
        actions.append(
            Action(
                XNum(big_bias),
                (
                    (XNum(Fraction(1), Fraction(2)), p_high),
                    (XNum(Fraction(1)), q_low),
                    (XNum(Fraction(0)), 1 - p_high - q_low),
                ),
                f"c{i}",
            )
        )
    half = Fraction(1, 2)
    actions.append(
        Action(
            XNum(Fraction(0)),
            ((XNum(Fraction(0)), half), (XNum(big_bias + 1) + IOTA, half)),
            f"a{n + 1}",
        )
    )
    threshold = (big_bias + 1) / 2 + Fraction(C**2, 16 * M**2) - Fraction(1, 32 * M**2)
    return IndependentInstance(tuple(actions)), threshold

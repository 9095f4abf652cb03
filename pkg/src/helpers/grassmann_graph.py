"""
Grassmann graphs over prime fields.

Vertices are the k-subspaces of GF(p)^n in enumeration order; two vertices
are adjacent when they meet in a (k-1)-subspace. Neighbourhoods and
opposite sets are Python ints used as bitsets, which keeps clique search
and the opposite-based adjacency test to a few word operations per step.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .reports import CheckResult, witness_of
from .subspaces import (
    SizeCapExceededError,
    Subspace,
    annihilator,
    contains,
    enumerate_subspaces,
    gaussian_binomial,
    intersect,
    meet_dim,
    span,
    subspace_sum,
)

logger = logging.getLogger(__name__)

DEFAULT_BUILD_CAP = 10 ** 5
DEFAULT_STORED_CAP = 10 ** 4


class GraphAssumptionError(Exception):
    """Custom exception for graph operations outside their valid range."""


class UnclassifiableCliqueError(Exception):
    """Custom exception for a maximal clique that is neither a star nor a top."""


class CliqueKind(Enum):
    STAR = "star"
    TOP = "top"


@dataclass(frozen=True)
class MaximalClique:
    """
    A star [S>_k (all vertices containing S) or a top <U]_k (all vertices
    inside U), with members as sorted vertex indices.
    """

    kind: CliqueKind
    anchor: Subspace
    members: tuple

    @property
    def size(self):
        return len(self.members)

    def to_json(self):
        return {
            "kind": self.kind.value,
            "anchor": self.anchor.to_json(),
            "members": list(self.members),
        }


def iter_bits(mask):
    """Indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_of(indices):
    """Bitset with the given indices set."""
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


class GrassmannGraph:
    """
    The Grassmann graph of k-subspaces of GF(p)^n.

    Attributes:
        n (int): ambient dimension.
        k (int): vertex dimension.
        p (int): field characteristic.
        vertices (list): the k-subspaces in enumeration order.
        stored (bool): whether adjacency bitsets are materialised.
    """

    def __init__(self, n, k, p, vertices, max_stored=DEFAULT_STORED_CAP):
        self.n = n
        self.k = k
        self.p = p
        self.vertices = vertices
        self.index = {vertex: i for i, vertex in enumerate(vertices)}
        self.stored = len(vertices) <= max_stored
        self._adjacency = None
        self._opposites = None
        if self.stored:
            self._build_relations()

    @property
    def order(self):
        """Number of vertices."""
        return len(self.vertices)

    def vertex_index(self, x):
        """Position of ``x`` in the vertex list."""
        try:
            return self.index[x]
        except KeyError as error:
            raise GraphAssumptionError(f"{x!r} is not a vertex") from error

    def _meet_dim(self, i, j):
        return meet_dim(self.vertices[i], self.vertices[j])

    def _build_relations(self):
        far = self.k - diameter(self)
        adjacency = [0] * self.order
        opposites = [0] * self.order
        for i in range(self.order):
            for j in range(i + 1, self.order):
                common = self._meet_dim(i, j)
                if common == self.k - 1:
                    adjacency[i] |= 1 << j
                    adjacency[j] |= 1 << i
                if common == far:
                    opposites[i] |= 1 << j
                    opposites[j] |= 1 << i
        self._adjacency = adjacency
        self._opposites = opposites
        logger.info(
            "Built adjacency of Grassmann graph (n=%d, k=%d, p=%d): %d vertices",
            self.n,
            self.k,
            self.p,
            self.order,
        )

    @property
    def adjacency_masks(self):
        """Neighbour bitsets of every vertex, or None if not stored."""
        if not self.stored:
            return None
        return tuple(self._adjacency)

    def adjacent(self, i, j):
        """Adjacency of two vertex indices."""
        if self.stored:
            return bool(self._adjacency[i] >> j & 1)
        return i != j and self._meet_dim(i, j) == self.k - 1

    def neighbour_mask(self, i):
        """Bitset of the neighbours of vertex i."""
        if self.stored:
            return self._adjacency[i]
        return bits_of(j for j in range(self.order) if self.adjacent(i, j))

    def edges(self):
        """Sorted (i, j) pairs with i < j."""
        return [
            (i, j)
            for i in range(self.order)
            for j in iter_bits(self.neighbour_mask(i))
            if i < j
        ]

    def opposite_masks(self):
        """Per vertex, the bitset of vertices opposite to it."""
        if self._opposites is None:
            far = self.k - diameter(self)
            self._opposites = [
                bits_of(j for j in range(self.order) if self._meet_dim(i, j) == far)
                for i in range(self.order)
            ]
        return self._opposites

    def to_json(self):
        """Vertices in canonical form and the edge list."""
        return {
            "n": self.n,
            "k": self.k,
            "p": self.p,
            "vertices": [vertex.to_json() for vertex in self.vertices],
            "edges": [list(edge) for edge in self.edges()],
        }

    def to_dot(self):
        """Graphviz text; vertex labels are the RREF rows."""
        lines = [f"graph grassmann_n{self.n}_k{self.k}_p{self.p} {{"]
        for i, vertex in enumerate(self.vertices):
            label = " | ".join(
                "".join(str(value.residue) for value in row) for row in vertex.rows
            )
            lines.append(f'  {i} [label="{label}"];')
        for i, j in self.edges():
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build(n, k, p, max_vertices=DEFAULT_BUILD_CAP, max_stored=DEFAULT_STORED_CAP):
    """
    Enumerate the Grassmann graph of k-subspaces of GF(p)^n.

    Raises:
        GraphAssumptionError: unless 1 <= k < n.
        SizeCapExceededError: if there are more than ``max_vertices`` vertices.
    """
    if not 1 <= k < n:
        raise GraphAssumptionError(f"Need 1 <= k < n, got n={n}, k={k}")
    count = gaussian_binomial(n, k, p)
    if count > max_vertices:
        raise SizeCapExceededError(f"{count} vertices exceed the cap {max_vertices}")
    vertices = enumerate_subspaces(n, k, p, cap=max_vertices)
    return GrassmannGraph(n, k, p, vertices, max_stored=max_stored)


def distance_forms(graph, x, y):
    """The two closed forms k - dim(X cap Y) and dim(X + Y) - k."""
    return graph.k - intersect(x, y).dim, subspace_sum(x, y).dim - graph.k


def distance(graph, x, y):
    """
    Path distance between two vertices from the closed forms.

    Raises:
        GraphAssumptionError: if the closed forms disagree.
    """
    by_meet, by_join = distance_forms(graph, x, y)
    if by_meet != by_join:
        raise GraphAssumptionError(f"Distance forms disagree: {by_meet} != {by_join}")
    return by_meet


def bfs_distances(graph, source):
    """Breadth-first distances from vertex ``source``; -1 marks unreachable."""
    dist = [-1] * graph.order
    dist[source] = 0
    queue = deque([source])
    while queue:
        current = queue.popleft()
        for neighbour in iter_bits(graph.neighbour_mask(current)):
            if dist[neighbour] == -1:
                dist[neighbour] = dist[current] + 1
                queue.append(neighbour)
    return dist


def connected(graph):
    """True when BFS from vertex 0 reaches every vertex."""
    return -1 not in bfs_distances(graph, 0)


def diameter(graph):
    """min(k, n - k)."""
    return min(graph.k, graph.n - graph.k)


def bfs_diameter(graph):
    """Largest BFS eccentricity."""
    return max(max(bfs_distances(graph, i)) for i in range(graph.order))


def is_opposite(graph, x, y):
    """Opposite vertices are at maximal distance."""
    return distance(graph, x, y) == diameter(graph)


def opposite_criteria(graph, x, y):
    """
    The three opposite criteria for one pair.

    Returns:
        tuple: (by distance, X cap Y = 0 or None when n < 2k,
        X + Y = V or None when n > 2k).
    """
    by_distance = is_opposite(graph, x, y)
    by_meet = intersect(x, y).is_zero() if graph.n >= 2 * graph.k else None
    by_join = subspace_sum(x, y).is_full() if graph.n <= 2 * graph.k else None
    return by_distance, by_meet, by_join


def adjacency_via_opposites(graph, x, y):
    """
    Adjacency of distinct X, Y read off the opposite relation: some third
    vertex Z has every vertex opposite to Z opposite to X or to Y.
    """
    i, j = graph.vertex_index(x), graph.vertex_index(y)
    if i == j:
        raise GraphAssumptionError("Adjacency test needs two distinct vertices")
    opposites = graph.opposite_masks()
    covered = opposites[i] | opposites[j]
    return any(
        opposites[z] & ~covered == 0
        for z in range(graph.order)
        if z != i and z != j
    )


def _bron_kerbosch(clique, candidates, excluded, adjacency, out):
    if not candidates and not excluded:
        out.append(clique)
        return
    pivot = max(
        iter_bits(candidates | excluded),
        key=lambda u: (adjacency[u] & candidates).bit_count(),
    )
    for v in iter_bits(candidates & ~adjacency[pivot]):
        _bron_kerbosch(
            clique | (1 << v),
            candidates & adjacency[v],
            excluded & adjacency[v],
            adjacency,
            out,
        )
        candidates &= ~(1 << v)
        excluded |= 1 << v


def _sum_of(members, n, field):
    total = Subspace.zero(n, field)
    for member in members:
        total = subspace_sum(total, member)
    return total


def _meet_of(members, n, field):
    total = Subspace.full(n, field)
    for member in members:
        total = intersect(total, member)
    return total


def classify_clique(graph, members):
    """
    Star or top, by the dimension of the common meet or of the span.

    Raises:
        UnclassifiableCliqueError: if the members are neither a full star
        nor a full top.
    """
    subspaces = [graph.vertices[i] for i in members]
    field = subspaces[0].field
    meet = _meet_of(subspaces, graph.n, field)
    if meet.dim == graph.k - 1 and len(members) == star_size(graph):
        return MaximalClique(CliqueKind.STAR, meet, tuple(members))
    join = _sum_of(subspaces, graph.n, field)
    if join.dim == graph.k + 1 and len(members) == top_size(graph):
        return MaximalClique(CliqueKind.TOP, join, tuple(members))
    raise UnclassifiableCliqueError(
        f"Clique of {len(members)} vertices: meet dim {meet.dim}, span dim {join.dim}"
    )


def maximal_cliques(graph):
    """
    All maximal cliques, by Bron-Kerbosch with pivoting, classified.

    Raises:
        GraphAssumptionError: unless 1 < k < n - 1.
        SizeCapExceededError: if adjacency is not stored.
    """
    if not 1 < graph.k < graph.n - 1:
        raise GraphAssumptionError("Clique classification needs 1 < k < n - 1")
    if not graph.stored:
        raise SizeCapExceededError("Clique search needs stored adjacency")
    found = []
    _bron_kerbosch(0, (1 << graph.order) - 1, 0, graph.adjacency_masks, found)
    cliques = [classify_clique(graph, sorted(iter_bits(mask))) for mask in found]
    cliques.sort(key=lambda clique: clique.members)
    logger.info("Found %d maximal cliques", len(cliques))
    return cliques


def star_size(graph):
    """|[S>_k| = number of lines of V/S."""
    return gaussian_binomial(graph.n - graph.k + 1, 1, graph.p)


def top_size(graph):
    """|<U]_k| = number of hyperplanes of U."""
    return gaussian_binomial(graph.k + 1, 1, graph.p)


def star(graph, center):
    """The star of all vertices containing the (k-1)-subspace ``center``."""
    if center.dim != graph.k - 1:
        raise GraphAssumptionError("A star centre must have dimension k - 1")
    members = tuple(i for i, v in enumerate(graph.vertices) if contains(v, center))
    return MaximalClique(CliqueKind.STAR, center, members)


def top(graph, cover):
    """The top of all vertices inside the (k+1)-subspace ``cover``."""
    if cover.dim != graph.k + 1:
        raise GraphAssumptionError("A top cover must have dimension k + 1")
    members = tuple(i for i, v in enumerate(graph.vertices) if contains(cover, v))
    return MaximalClique(CliqueKind.TOP, cover, members)


def star_top_families(graph):
    """
    All stars and all tops, built from their anchors.

    Returns:
        tuple: (list of stars, list of tops).
    """
    centers = enumerate_subspaces(graph.n, graph.k - 1, graph.p)
    covers = enumerate_subspaces(graph.n, graph.k + 1, graph.p)
    stars = [star(graph, center) for center in centers]
    tops = [top(graph, cover) for cover in covers]
    return stars, tops


def clique_intersection_check(graph):
    """
    Distinct stars share at most one vertex, so do distinct tops, and a star
    meets a top exactly when its centre lies in the cover, in p + 1 vertices.
    """
    stars, tops = star_top_families(graph)
    result = CheckResult("star_top_intersections", "stars and tops meet in lines")
    for family in (stars, tops):
        for a in range(len(family)):
            members_a = set(family[a].members)
            for b in range(a + 1, len(family)):
                common = members_a.intersection(family[b].members)
                result.record(
                    len(common) <= 1,
                    witness_of(first=family[a].anchor, second=family[b].anchor),
                )
    for s in stars:
        star_members = set(s.members)
        for t in tops:
            common = star_members.intersection(t.members)
            if contains(t.anchor, s.anchor):
                ok = len(common) == graph.p + 1
            else:
                ok = not common
            result.record(ok, witness_of(center=s.anchor, cover=t.anchor))
    return result


def dual_isomorphism_check(graph, dual_graph):
    """
    The annihilator X -> X^0 from the k-graph to the (n-k)-graph is a
    bijection preserving adjacency both ways and exchanging stars and tops.

    Returns:
        list[CheckResult]: bijection, adjacency, stars-to-tops, tops-to-stars.
    """
    if dual_graph.n != graph.n or dual_graph.k != graph.n - graph.k:
        raise GraphAssumptionError("Dual graph must be the (n-k)-Grassmann graph")
    image = [dual_graph.vertex_index(annihilator(v)) for v in graph.vertices]

    bijection = CheckResult("annihilator_bijection", "X -> X^0 is a bijection")
    bijection.record(
        sorted(image) == list(range(dual_graph.order)),
        witness_of(image_size=len(set(image)), target=dual_graph.order),
    )

    adjacency = CheckResult("annihilator_adjacency", "X ~ Y iff X^0 ~ Y^0")
    for i in range(graph.order):
        for j in range(i + 1, graph.order):
            adjacency.record(
                graph.adjacent(i, j) == dual_graph.adjacent(image[i], image[j]),
                witness_of(x=graph.vertices[i], y=graph.vertices[j]),
            )

    stars, tops = star_top_families(graph)
    stars_to_tops = CheckResult("stars_to_tops", "[S>_k maps onto <S^0]_{n-k}")
    for s in stars:
        mapped = sorted(image[i] for i in s.members)
        stars_to_tops.record(
            tuple(mapped) == top(dual_graph, annihilator(s.anchor)).members,
            witness_of(center=s.anchor),
        )
    tops_to_stars = CheckResult("tops_to_stars", "<U]_k maps onto [U^0>_{n-k}")
    for t in tops:
        mapped = sorted(image[i] for i in t.members)
        tops_to_stars.record(
            tuple(mapped) == star(dual_graph, annihilator(t.anchor)).members,
            witness_of(cover=t.anchor),
        )
    return [bijection, adjacency, stars_to_tops, tops_to_stars]


def image_under(matrix, x):
    """A(X) for a subspace X (basis rows taken as column vectors)."""
    return span((matrix @ row for row in x.rows), x.ambient_dim, x.field)


def _automorphism_check(graph, mapping, name, anchor):
    image = [graph.vertex_index(mapping(v)) for v in graph.vertices]
    result = CheckResult(name, anchor)
    distinct = len(set(image))
    result.record(distinct == graph.order, witness_of(image_size=distinct))
    for i in range(graph.order):
        for j in range(i + 1, graph.order):
            result.record(
                graph.adjacent(i, j) == graph.adjacent(image[i], image[j]),
                witness_of(x=graph.vertices[i], y=graph.vertices[j]),
            )
    return result


def induced_map_check(graph, matrix):
    """An invertible matrix induces an adjacency-preserving bijection."""
    return _automorphism_check(
        graph,
        lambda x: image_under(matrix, x),
        "induced_automorphism",
        "X -> A(X) is an automorphism",
    )


def duality_map_check(graph, matrix):
    """For n = 2k, X -> A(X)^0 is an automorphism of the graph."""
    if graph.n != 2 * graph.k:
        raise GraphAssumptionError("Duality maps need n = 2k")
    return _automorphism_check(
        graph,
        lambda x: annihilator(image_under(matrix, x)),
        "duality_automorphism",
        "X -> A(X)^0 is an automorphism when n = 2k",
    )


def clique_summary(cliques):
    """Counts by (kind, size), sorted."""
    summary = {}
    for clique in cliques:
        key = (clique.kind.value, clique.size)
        summary[key] = summary.get(key, 0) + 1
    return sorted(summary.items())
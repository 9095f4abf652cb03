"""
Verification suites behind ``qlogic verify``.

Each suite draws from its own SplitMix64 stream forked off the run seed by
suite name, so a suite's samples and witnesses do not depend on which other
suites ran or on the process that ran it. Internal-consistency errors such
as two criteria disagreeing are recorded as failing checks instead of
aborting the run.
"""

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

from . import apartments as apt
from . import grassmann_graph as gg
from . import hilbert_logic as hl
from . import transforms as tf
from .cache import DiskCache
from .generators import (
    random_invertible_matrix,
    random_nested_pair,
    random_subspace,
    random_subspace_within,
)
from .linalg import Matrix
from .reports import CheckResult, RunReport, SuiteReport, witness_of
from .rng import SplitMix64
from .scalars import GAUSSIAN, prime_field
from .subspaces import gaussian_binomial, intersect, span, subspace_sum

logger = logging.getLogger(__name__)

INTERNAL_ERRORS = (
    hl.CriterionDisagreementError,
    gg.UnclassifiableCliqueError,
    apt.CountMismatchError,
    apt.WitnessValidationError,
)

GRASSMANN_INSTANCES = ((4, 2, 2), (5, 2, 2), (4, 2, 3))
DUALITY_INSTANCES = ((4, 2, 2), (3, 1, 2))
EXHAUSTIVE_INSTANCE = (4, 2, 2)
DICHOTOMY_KS = (2, 3, 4)
TRANSFORM_KINDS = ("unitary", "dual", "pi", "factor")
CLASSIFICATION = "clique_classification"
CLASSIFICATION_ANCHOR = "maximal cliques are stars or tops"


def _guarded(report, name, anchor, build):
    """Add the checks ``build`` returns, or one failing check if it breaks."""
    try:
        checks = build()
    except INTERNAL_ERRORS as error:
        logger.error("%s/%s: %s", report.suite, name, error)
        checks = CheckResult(name, anchor)
        checks.record(
            False,
            witness_of(
                error=type(error).__name__,
                message=str(error),
                x=getattr(error, "x", None),
                y=getattr(error, "y", None),
            ),
        )
    if isinstance(checks, CheckResult):
        checks = [checks]
    for check in checks:
        report.add(check)


def _merge_by_name(batches):
    merged = {}
    for batch in batches:
        for check in batch:
            if check.name in merged:
                merged[check.name].merge(check)
            else:
                merged[check.name] = check
    return list(merged.values())


def _dims(config, default, quick):
    if config.n is not None:
        return [config.n]
    return list(quick if config.quick else default)


def _graph_instances(config, default, quick):
    if config.n is not None:
        k = config.k if config.k is not None else config.n // 2
        return [(config.n, k, config.p or 2)]
    return list(quick if config.quick else default)


def _random_pair(n, rng):
    return random_subspace(n, GAUSSIAN, rng), random_subspace(n, GAUSSIAN, rng)


def _random_triple(n, rng):
    return tuple(random_subspace(n, GAUSSIAN, rng) for _ in range(3))


def _adjacent_pair(n, rng):
    """Two k-subspaces meeting in dimension k - 1, for n >= 2."""
    rows = random_invertible_matrix(n, GAUSSIAN, rng).entries
    d = rng.randint(0, n - 2)
    base = list(rows[:d])
    return (
        span(base + [rows[d]], n, GAUSSIAN),
        span(base + [rows[d + 1]], n, GAUSSIAN),
    )


def run_logic(config, rng):
    """Lattice axioms, orthomodularity, De Morgan and projection algebra."""
    dims = _dims(config, (2, 3, 4, 5, 6), (2, 3, 4))
    samples = config.samples_for("logic")
    report = SuiteReport("logic", {"n": dims, "samples_per_n": samples})

    def axioms():
        batches = []
        for n in dims:
            sample = hl.LogicSample(
                singles=[random_subspace(n, GAUSSIAN, rng) for _ in range(samples)],
                pairs=[_random_pair(n, rng) for _ in range(samples)],
                nested_pairs=[
                    random_nested_pair(n, GAUSSIAN, rng) for _ in range(samples)
                ],
                triples=[_random_triple(n, rng) for _ in range(samples)],
            )
            batches.append(hl.verify_logic_axioms(sample))
        return _merge_by_name(batches)

    def projections():
        algebra = CheckResult(
            "projection_algebra", "P^2 = P = P*, P(H) = X and ker P = X^perp"
        )
        involution = CheckResult(
            "projection_involution", "S = Id - 2P is an involution, P = (Id - S)/2"
        )
        for n in dims:
            identity = Matrix.identity(n, GAUSSIAN)
            for _ in range(samples):
                x = random_subspace(n, GAUSSIAN, rng)
                projection = hl.projection_of(x)
                algebra.record(
                    projection.is_idempotent()
                    and projection.is_self_adjoint()
                    and hl.column_space(projection.matrix) == x
                    and projection.kernel() == hl.orthocomplement(x),
                    witness_of(x=x),
                )
                if x.is_zero():
                    continue
                s = hl.involution_of(projection)
                involution.record(
                    s @ s == identity
                    and hl.projection_from_involution(s).matrix == projection.matrix,
                    witness_of(x=x),
                )
        return [algebra, involution]

    _guarded(report, "logic_axioms", "orthocomplemented lattice axioms", axioms)
    _guarded(report, "projection_algebra", "orthogonal projections", projections)
    return report


def run_compat(config, rng):
    """Both compatibility criteria, orthogonality routes and frame extension."""
    dims = _dims(config, (3, 4, 5, 6), (3, 4))
    samples = config.samples_for("compat")
    report = SuiteReport("compat", {"n": dims, "samples_per_n": samples})

    def criteria():
        agreement = CheckResult(
            "criteria_agree", "P_X P_Y = P_Y P_X iff X, Y split over X cap Y"
        )
        constructed = CheckResult(
            "constructed_compatible", "subspaces spanned from one frame commute"
        )
        meet = CheckResult("meet_projection", "P_{X cap Y} = P_X P_Y when compatible")
        orthogonality = CheckResult(
            "orthogonality_routes", "X <= Y^perp iff P_X P_Y = 0"
        )
        for n in dims:
            for index in range(samples):
                kind = index % 3
                if kind == 0:
                    x, y = _random_pair(n, rng)
                elif kind == 1:
                    x, y = hl.random_compatible_pair(n, rng)
                else:
                    x = random_subspace(n, GAUSSIAN, rng)
                    y = random_subspace_within(hl.orthocomplement(x), rng)
                try:
                    verdict = hl.is_compatible(x, y)
                except hl.CriterionDisagreementError:
                    agreement.record(False, witness_of(x=x, y=y))
                    continue
                agreement.record(True)
                if kind:
                    constructed.record(verdict, witness_of(x=x, y=y))
                if verdict:
                    meet.record(hl.pieces_commute_check(x, y), witness_of(x=x, y=y))
                orthogonality.record(
                    hl.is_orthogonal(x, y) == hl.projections_annihilate(x, y),
                    witness_of(x=x, y=y),
                )
        return [agreement, constructed, meet, orthogonality]

    def frames():
        result = CheckResult(
            "orthogonal_frame_extension",
            "a compatible family is spanned by subsets of one orthogonal frame",
        )
        for n in dims:
            for _ in range(samples):
                family = _perturbed_compatible_family(n, rng)
                frame = hl.extend_to_orthogonal_frame(family, n=n)
                result.record(
                    len(frame) == n
                    and hl.is_orthogonal_frame(frame)
                    and all(hl.spanned_by_subset(frame, x) for x in family),
                    witness_of(family=family),
                )
        return result

    _guarded(report, "criteria_agree", "compatibility criteria", criteria)
    _guarded(report, "orthogonal_frame_extension", "frame extension", frames)
    return report


def _perturbed_compatible_family(n, rng):
    """Spans of frame subsets, then one member dropped or one more added."""
    frame = hl.random_orthogonal_frame(n, rng)

    def member():
        return hl.frame_span(frame, [i for i in range(n) if rng.randbelow(2)])

    family = [member() for _ in range(rng.randint(1, 4))]
    if rng.randbelow(2) and len(family) > 1:
        family.pop(rng.randbelow(len(family)))
    else:
        family.append(member())
    return family


def _frame_from_unitary(n, rng):
    return list(tf.random_scaled_unitary(n, rng, rotations=n).matrix.entries)


def run_cc(config, rng):
    """Sizes of {X, Y}^cc and its k-dimensional members."""
    dims = _dims(config, (3, 4, 5, 6), (3, 4))
    samples = config.samples_for("cc")
    ks = [config.k] if config.k is not None else list(
        DICHOTOMY_KS[:1] if config.quick else DICHOTOMY_KS
    )
    report = SuiteReport(
        "cc", {"n": dims, "dichotomy_k": ks, "samples": samples}
    )

    def extreme_counts():
        result = CheckResult(
            "cc_size_line_or_hyperplane",
            "|{X,Y}^cc| in {4, 8} for X of dim 1 or n-1, 4 iff Y = X^perp",
        )
        for n in dims:
            for _ in range(samples):
                x = random_subspace(n, GAUSSIAN, rng, dim=rng.choice([1, n - 1]))
                y = _compatible_partner(x, rng)
                size = len(hl.double_commutant_set(x, y))
                result.record(
                    size in (4, 8) and (size == 4) == (y == hl.orthocomplement(x)),
                    witness_of(x=x, y=y, size=size),
                )
        return result

    def generic_counts():
        result = CheckResult(
            "cc_size_generic", "|{X,Y}^cc| = 16 when all four pieces are nonzero"
        )
        for n in dims:
            if n < 4:
                continue
            for _ in range(samples):
                x = random_subspace(n, GAUSSIAN, rng, dim=rng.randint(2, n - 2))
                x_perp = hl.orthocomplement(x)
                y = subspace_sum(
                    random_subspace_within(x, rng, dim=rng.randint(1, x.dim - 1)),
                    random_subspace_within(
                        x_perp, rng, dim=rng.randint(1, x_perp.dim - 1)
                    ),
                )
                size = len(hl.double_commutant_set(x, y))
                result.record(size == 16, witness_of(x=x, y=y, size=size))
        return result

    def dichotomy():
        result = CheckResult(
            "cc_grassmann_dichotomy",
            "for n = 3k + 1 the k-members are {X, Y}, plus one more iff "
            "dim(X cap Y) = k/2",
        )
        for k in ks:
            n = 3 * k + 1
            for index in range(samples):
                m = index % k
                frame = _frame_from_unitary(n, rng)
                positions = rng.sample(range(n), 2 * k - m)
                x = hl.frame_span(frame, positions[:k])
                y = hl.frame_span(frame, positions[k - m:])
                expected = {x, y}
                if 2 * m == k:
                    expected.add(
                        hl.frame_span(frame, positions[: k - m] + positions[k:])
                    )
                members = hl.cc_grassmann_members(x, y, k)
                result.record(
                    members == expected,
                    witness_of(x=x, y=y, meet_dim=m, found=len(members)),
                )
        return result

    def definitional():
        batches = []
        for n in dims:
            for _ in range(max(1, samples // 20)):
                x, y = hl.random_compatible_pair(n, rng)
                try:
                    batches.append(
                        [hl.falsify_double_commutant(x, y, rng, samples=5)]
                    )
                except hl.DegeneratePairError:
                    continue
        return _merge_by_name(batches)

    _guarded(report, "cc_size_line_or_hyperplane", "cc sizes", extreme_counts)
    _guarded(report, "cc_size_generic", "cc sizes", generic_counts)
    _guarded(report, "cc_grassmann_dichotomy", "cc dichotomy", dichotomy)
    _guarded(report, "double_commutant_sampled", "cc definition", definitional)
    return report


def _compatible_partner(x, rng):
    """A random Y compatible with X, with Y not in {0, H, X}."""
    n = x.ambient_dim
    x_perp = hl.orthocomplement(x)
    if rng.randbelow(4) == 0:
        return x_perp
    while True:
        y = subspace_sum(
            random_subspace_within(x, rng), random_subspace_within(x_perp, rng)
        )
        if 0 < y.dim < n and y != x:
            return y


def run_grassmann(config, rng):
    """Counts, distances, opposites and annihilator duality."""
    instances = _graph_instances(config, GRASSMANN_INSTANCES, GRASSMANN_INSTANCES[:1])
    if config.n is not None:
        dual_instances = instances
    else:
        dual_instances = list(DUALITY_INSTANCES)
    report = SuiteReport(
        "grassmann", {"instances": instances, "duality_instances": dual_instances}
    )
    batches = []
    for n, k, p in instances:
        graph = gg.build(n, k, p, max_stored=config.max_vertices)
        batches.append(_graph_checks(graph, rng))
    for n, k, p in dual_instances:
        graph = gg.build(n, k, p, max_stored=config.max_vertices)
        dual_graph = gg.build(n, n - k, p, max_stored=config.max_vertices)
        batches.append(gg.dual_isomorphism_check(graph, dual_graph))
    for check in _merge_by_name(batches):
        report.add(check)
    return report


def _graph_checks(graph, rng):
    n, k, p = graph.n, graph.k, graph.p
    instance = {"n": n, "k": k, "p": p}

    counts = CheckResult("vertex_count", "|G_k(GF(p)^n)| is the Gaussian binomial")
    counts.record(
        graph.order == gaussian_binomial(n, k, p)
        and len(set(graph.vertices)) == graph.order,
        witness_of(order=graph.order, **instance),
    )

    distances = CheckResult(
        "distance_closed_form", "d(X, Y) = k - dim(X cap Y) = dim(X + Y) - k"
    )
    opposites = CheckResult(
        "opposite_criteria", "opposite iff X cap Y = 0 (n >= 2k), X + Y = V (n <= 2k)"
    )
    via_opposites = CheckResult(
        "adjacency_via_opposites",
        "X ~ Y iff some Z has all its opposites opposite to X or Y",
    )
    for i in range(graph.order):
        bfs = gg.bfs_distances(graph, i)
        for j in range(i + 1, graph.order):
            x, y = graph.vertices[i], graph.vertices[j]
            try:
                closed = gg.distance(graph, x, y)
            except gg.GraphAssumptionError:
                closed = None
            distances.record(closed == bfs[j], witness_of(x=x, y=y, bfs=bfs[j]))
            by_distance, by_meet, by_join = gg.opposite_criteria(graph, x, y)
            opposites.record(
                by_meet in (None, by_distance) and by_join in (None, by_distance),
                witness_of(x=x, y=y),
            )
            via_opposites.record(
                gg.adjacency_via_opposites(graph, x, y) == graph.adjacent(i, j),
                witness_of(x=x, y=y),
            )

    shape = CheckResult("diameter", "diameter = min(k, n - k), graph connected")
    shape.record(
        gg.connected(graph) and gg.bfs_diameter(graph) == gg.diameter(graph),
        witness_of(**instance),
    )

    field_tag = prime_field(p)
    induced = gg.induced_map_check(graph, random_invertible_matrix(n, field_tag, rng))
    checks = [counts, distances, shape, opposites, via_opposites, induced]
    if n == 2 * k:
        checks.append(
            gg.duality_map_check(graph, random_invertible_matrix(n, field_tag, rng))
        )
    checks.append(gg.clique_intersection_check(graph))
    return checks


def run_cliques(config, rng):
    """Every maximal clique is a full star or a full top."""
    del rng
    instances = _graph_instances(config, GRASSMANN_INSTANCES, GRASSMANN_INSTANCES[:1])
    report = SuiteReport("cliques", {"instances": instances})

    def classify(n, k, p):
        graph = gg.build(n, k, p, max_stored=config.max_vertices)
        cliques = gg.maximal_cliques(graph)
        classified = CheckResult(CLASSIFICATION, CLASSIFICATION_ANCHOR)
        for _ in cliques:
            classified.record(True)
        stars = [c for c in cliques if c.kind is gg.CliqueKind.STAR]
        tops = [c for c in cliques if c.kind is gg.CliqueKind.TOP]
        counts = CheckResult(
            "clique_counts", "stars and tops are counted by Gaussian binomials"
        )
        counts.record(
            len(stars) == gaussian_binomial(n, k - 1, p)
            and len(tops) == gaussian_binomial(n, k + 1, p)
            and all(c.size == gg.star_size(graph) for c in stars)
            and all(c.size == gg.top_size(graph) for c in tops),
            witness_of(
                n=n,
                k=k,
                p=p,
                summary=[[*key, v] for key, v in gg.clique_summary(cliques)],
            ),
        )
        anchors = CheckResult(
            "clique_anchors", "the maximal cliques are exactly the stars and tops"
        )
        built_stars, built_tops = gg.star_top_families(graph)
        found = {(c.kind, c.members) for c in cliques}
        built = {(c.kind, c.members) for c in built_stars + built_tops}
        anchors.record(found == built, witness_of(n=n, k=k, p=p))
        return [classified, counts, anchors]

    batches = []
    for n, k, p in instances:
        try:
            batches.append(classify(n, k, p))
        except gg.UnclassifiableCliqueError as error:
            logger.error("cliques: %s", error)
            failed = CheckResult(CLASSIFICATION, CLASSIFICATION_ANCHOR)
            failed.record(False, witness_of(n=n, k=k, p=p, message=str(error)))
            batches.append([failed])
    for check in _merge_by_name(batches):
        report.add(check)
    return report


def apartment_count(n, p):
    """|GL(n, p)| / ((p - 1)^n n!): bases up to order and scaling."""
    order = math.prod(p ** n - p ** i for i in range(n))
    return order // ((p - 1) ** n * math.factorial(n))


def run_apartments(config, rng):
    """Linear apartments: inexactness certificates and complementary subsets."""
    p = config.p or 2
    k = config.k if config.k is not None else 2
    field_tag = prime_field(p)
    dims = _dims(config, (4, 5, 6), (4,))
    samples = config.samples_for("apartments")
    exhaustive = config.n is None or (config.n, k, p) == EXHAUSTIVE_INSTANCE
    report = SuiteReport(
        "apartments",
        {"n": dims, "k": k, "p": p, "samples": samples, "exhaustive": exhaustive},
    )

    if exhaustive:

        def enumeration():
            n0, k0, p0 = EXHAUSTIVE_INSTANCE
            outcome = apt.exhaustive_inexact_analysis(
                n0, k0, p0, cache=DiskCache(config.cache_dir)
            )
            count = CheckResult("apartment_count", "apartments = bases up to order")
            count.record(
                outcome.apartment_count == apartment_count(n0, p0),
                witness_of(found=outcome.apartment_count),
            )
            return [count] + outcome.checks

        _guarded(report, "maximal_inexact_exhaustive", "enumeration", enumeration)

    for n in dims:
        standard = apt.standard_apartment(n, k, field_tag)
        _guarded(
            report,
            "maximal_inexact_linear",
            "maximal inexact subsets",
            lambda standard=standard: apt.verify_maximal_inexact_linear(standard),
        )
        _guarded(
            report,
            "complementary_subsets",
            "opposites and adjacency via complementary subsets",
            lambda standard=standard: _complementary_checks(standard),
        )
        report.add(apt.johnson_adjacency_check(standard))
        _guarded(
            report,
            "linear_certificate_witness",
            "inexact subsets ship a validated witness",
            lambda n=n: _random_linear_certificates(n, k, field_tag, rng, samples),
        )
        report.add(_pair_apartments(n, k, field_tag, rng, samples))

    report.add(apt.noncollinear_check(3, p))
    return report


def _complementary_checks(apartment):
    opposite = CheckResult(
        "opposite_via_complementary",
        "opposite iff no complementary subset holds both",
    )
    adjacency = CheckResult(
        "adjacency_via_complementary",
        "adjacent iff the complementary count is (k-1)(n-k-1)",
    )
    subsets = apt.complementary_subsets(apartment)
    top_count = apt.max_complementary_count(apartment)
    for a, b in itertools.combinations(apartment.index_sets, 2):
        meet_is_zero = intersect(apartment.member(a), apartment.member(b)).is_zero()
        via_subsets = apt.opposite_via_complementary(apartment, a, b)
        disjoint = not a & b
        opposite.record(
            via_subsets == disjoint and disjoint == meet_is_zero,
            witness_of(first=sorted(a), second=sorted(b)),
        )
        try:
            count = apt.complementary_count(apartment, a, b, subsets=subsets)
        except apt.CountMismatchError as error:
            adjacency.record(False, witness_of(message=str(error)))
            continue
        adjacency.record(
            (count == top_count) == (len(a & b) == apartment.k - 1),
            witness_of(first=sorted(a), second=sorted(b), count=count),
        )
    return [opposite, adjacency]


def _random_subset(apartment, rng):
    return [index_set for index_set in apartment.index_sets if rng.randbelow(2)]


def _random_linear_certificates(n, k, field_tag, rng, samples):
    result = CheckResult(
        "linear_certificate_witness", "inexact subsets ship a validated witness"
    )
    for _ in range(samples):
        frame = random_invertible_matrix(n, field_tag, rng).entries
        apartment = apt.Apartment(frame, k)
        subset = _random_subset(apartment, rng)
        certificate = apt.inexactness_certificate_linear(apartment, subset)
        if certificate.is_exact:
            ok = all(dim == 1 for dim in certificate.s_dims)
        else:
            witness = certificate.witness
            ok = witness != apartment and all(
                witness.contains(apartment.member(index_set)) for index_set in subset
            )
        result.record(ok, witness_of(apartment=apartment, subset=subset))
    return result


def _pair_apartments(n, k, field_tag, rng, samples):
    result = CheckResult(
        "apartment_of_pair", "any two k-subspaces share an apartment"
    )
    for _ in range(samples):
        x = random_subspace(n, field_tag, rng, dim=k)
        y = random_subspace(n, field_tag, rng, dim=k)
        apartment = apt.apartment_of_pair(x, y)
        result.record(
            apartment.contains(x) and apartment.contains(y), witness_of(x=x, y=y)
        )
    return result


def run_ortho_apartments(config, rng):
    """Orthogonal apartments over Q(i): certificates, rotations and counts."""
    dims = _dims(config, (4, 5, 6, 7, 8), (4, 5))
    ks = [config.k] if config.k is not None else [2, 3]
    count = max(10, config.samples_for("ortho-apartments") // 2)
    count_dims = _dims(config, range(4, 11), range(4, 7))
    report = SuiteReport(
        "ortho-apartments",
        {"n": dims, "k": ks, "apartments": count, "count_n": count_dims},
    )

    def certificates():
        witness_check = CheckResult(
            "ortho_certificate_witness",
            "inexact subsets ship an orthogonal witness apartment",
        )
        rotation = CheckResult(
            "rotated_pair_intersection",
            "A(+i,+j) u A(-i,-j) is inexact and is the trace of the rotated frame",
        )
        maximal = []
        for index in range(count):
            n = dims[index % len(dims)]
            k = ks[(index // len(dims)) % len(ks)]
            if k >= n:
                continue
            if n <= 5 and index % 5 == 0:
                apartment = apt.random_orthogonal_apartment(n, k, rng)
            else:
                apartment = apt.Apartment(_frame_from_unitary(n, rng), k, ortho=True)
            subset = rng.sample(apartment.index_sets, rng.randint(1, 3))
            certificate = apt.inexactness_certificate_ortho(apartment, subset)
            if certificate.is_exact:
                ok = all(dim == 1 for dim in certificate.s_dims)
            else:
                witness = certificate.witness
                ok = (
                    witness.ortho
                    and witness != apartment
                    and all(witness.contains(apartment.member(s)) for s in subset)
                )
            witness_check.record(ok, witness_of(apartment=apartment, subset=subset))

            i, j = rng.sample(range(1, n + 1), 2)
            chosen = frozenset(
                apt.selectors(apartment, (i, j)) + apt.selectors(apartment, (-i, -j))
            )
            rotated = apt.rotated_pair_apartment(apartment, i, j)
            verdict = apt.inexactness_certificate_ortho(apartment, chosen)
            rotation.record(
                not verdict.is_exact
                and apt.shared_members(apartment, rotated) == chosen,
                witness_of(apartment=apartment, i=i, j=j),
            )
            if n <= 5 and index % 10 == 0:
                candidates = [
                    random_subspace(n, GAUSSIAN, rng, dim=k) for _ in range(3)
                ]
                maximal.append([apt.maximality_check(apartment, candidates)])
        return [witness_check, rotation] + _merge_by_name(maximal)

    def counts():
        result = CheckResult(
            "orthocomplementary_counts",
            "(type1, type2) = (|I_X - I_Y| |I_Y - I_X|, |I_X n I_Y| (n - |I_X u I_Y|))",
        )
        orthogonality = CheckResult(
            "type2_orthogonality", "for n > 2k, type2 = 0 iff X and Y are orthogonal"
        )
        for n in count_dims:
            for k in range(2, 5):
                if 2 * k > n:
                    continue
                apartment = apt.standard_apartment(n, k, GAUSSIAN)
                subsets = apt.orthocomplementary_subsets(apartment)
                for a, b in itertools.combinations(apartment.index_sets, 2):
                    try:
                        found = apt.count_containing(
                            apartment, a, b, subsets=subsets
                        )
                    except apt.CountMismatchError as error:
                        result.record(False, witness_of(message=str(error)))
                        continue
                    result.record(True)
                    if n > 2 * k:
                        orthogonal = hl.is_orthogonal(
                            apartment.member(a), apartment.member(b)
                        )
                        orthogonality.record(
                            (found.type2 == 0) == orthogonal,
                            witness_of(n=n, first=sorted(a), second=sorted(b)),
                        )
        return [result, orthogonality]

    _guarded(
        report, "ortho_certificate_witness", "orthogonal certificates", certificates
    )
    _guarded(report, "orthocomplementary_counts", "orthocomplementary counts", counts)
    return report


def _transform_unitary(config, rng):
    dims = _dims(config, (2, 3, 4), (2, 3))
    samples = config.samples_for("transforms")
    certified = CheckResult(
        "scaled_unitary_certified", "A* A = c Id for multiples of (anti-)unitaries"
    )
    rejected = CheckResult(
        "non_unitary_rejected", "no scalar c, and an orthogonal pair is broken"
    )
    lattice = CheckResult(
        "apply_lattice", "L(X cap Y) = L(X) cap L(Y), L(X + Y) = L(X) + L(Y)"
    )
    preserved = []
    for n in dims:
        for index in range(samples):
            sigma = tf.Sigma.CONJUGATION if index % 2 else tf.Sigma.IDENTITY
            good = tf.random_scaled_unitary(n, rng, sigma)
            c = tf.unitary_up_to_scalar(good)
            certified.record(c is not None and c > 0, witness_of(map=good))
            if index % 10 == 0:
                x = random_subspace(n, GAUSSIAN, rng)
                pairs = [
                    (x, random_subspace_within(hl.orthocomplement(x), rng)),
                    _random_pair(n, rng),
                    random_nested_pair(n, GAUSSIAN, rng),
                ]
                if n > 1:
                    pairs.append(_adjacent_pair(n, rng))
                domain = list(dict.fromkeys(s for pair in pairs for s in pair))
                mapping = tf.induced_map(good, domain)
                preserved.append(
                    [tf.preserves(relation, mapping, pairs) for relation in tf.Relation]
                )

            # 1 x 1 matrices are always scalar multiples of a unitary
            if n > 1:
                bad = tf.random_non_unitary(n, rng, sigma)
                violation = tf.orthogonality_violation(bad)
                ok = tf.unitary_up_to_scalar(bad) is None and violation is not None
                if ok:
                    x, y = violation
                    ok = hl.is_orthogonal(x, y) and not hl.is_orthogonal(
                        tf.apply(bad, x), tf.apply(bad, y)
                    )
                rejected.record(ok, witness_of(map=bad))

            x, y = _random_pair(n, rng)
            image_x, image_y = tf.apply(good, x), tf.apply(good, y)
            lattice.record(
                tf.apply(good, intersect(x, y)) == intersect(image_x, image_y)
                and tf.apply(good, subspace_sum(x, y)) == subspace_sum(image_x, image_y)
                and image_x.dim == x.dim,
                witness_of(map=good, x=x, y=y),
            )
    return [certified, rejected, lattice] + _merge_by_name(preserved)


def _transform_dual(config, rng):
    dims = _dims(config, (2, 3, 4, 5), (2, 3))
    batches = []
    for n in dims:
        for _ in range(config.samples_for("transforms")):
            matrix = random_invertible_matrix(n, GAUSSIAN, rng)
            batches.append(
                tf.dual_action_check(matrix, [random_subspace(n, GAUSSIAN, rng)])
            )
    return _merge_by_name(batches)


def _transform_pi(config, rng):
    dims = _dims(config, (2, 3, 4), (2, 3))
    batches = []
    for n in dims:
        for _ in range(max(1, config.samples_for("transforms") // 10)):
            x = random_subspace(n, GAUSSIAN, rng)
            others = [random_subspace(n, GAUSSIAN, rng) for _ in range(10)]
            mapping = tf.pi_transform({x, hl.orthocomplement(x)}, others)
            pairs = [(x, other) for other in others]
            pairs += list(itertools.combinations(others, 2))
            batches.append([tf.preserves("compatibility", mapping, pairs)])

    breaks = CheckResult(
        "pi_breaks_inclusion",
        "complementing {X, X^perp} breaks X <= Y for every X < Y < H",
    )
    for n in dims:
        if n < 3:
            continue
        for _ in range(max(1, config.samples_for("transforms") // 10)):
            x = random_subspace(n, GAUSSIAN, rng, dim=rng.randint(1, n - 2))
            line = random_subspace_within(hl.orthocomplement(x), rng, dim=1)
            y = subspace_sum(x, line)
            mapping = tf.pi_transform({x, hl.orthocomplement(x)}, [y])
            inclusion = tf.preserves("inclusion", mapping, [(x, y)])
            breaks.record(
                inclusion.failure_count == 1 and bool(inclusion.witnesses),
                witness_of(x=x, y=y),
            )
    if breaks.samples:
        batches.append([breaks])

    lines =[random_subspace(2, GAUSSIAN, rng, dim=1) for _ in range(8)]
    lines += [hl.orthocomplement(line) for line in lines[:4]]
    plane = tf.pair_permutation_map(lines, rng)
    plane_pairs = list(itertools.combinations(plane.domain, 2))
    plane_checks = [
        tf.preserves("orthogonality", plane, plane_pairs),
        tf.preserves("compatibility", plane, plane_pairs),
    ]
    for check in plane_checks:
        check.name = f"plane_pairs_{check.name}"
        check.notes.append(tf.PLANE_NOTE)
    return _merge_by_name(batches) + plane_checks


def _transform_factor(config, rng):
    dims = _dims(config, (2, 3, 4), (2, 3))
    batches = []
    shapes = CheckResult(
        "factor_flip_shape", "AsIs outside the flipped family, Flipped inside"
    )
    for n in dims:
        for index in range(max(1, config.samples_for("transforms") // 10)):
            sigma = tf.Sigma.CONJUGATION if index % 2 else tf.Sigma.IDENTITY
            g = tf.random_scaled_unitary(n, rng, sigma)
            domain = list(
                dict.fromkeys(random_subspace(n, GAUSSIAN, rng) for _ in range(8))
            )
            induced = tf.induced_map(g, domain)
            flipped = induced(domain[0])
            family = {flipped, hl.orthocomplement(flipped)}
            pi = tf.pi_transform(family, [induced(x) for x in domain])
            check, verdicts = tf.factor_flip_check(pi.compose(induced), g)
            batches.append([check])
            expected_flips = sum(1 for x in domain if induced(x) in family)
            shapes.record(
                verdicts[tf.FactorVerdict.FLIPPED] == expected_flips
                and verdicts[tf.FactorVerdict.NEITHER] == 0,
                witness_of(map=g, domain=domain),
            )
    return _merge_by_name(batches) + [shapes]


TRANSFORM_PARTS = {
    "unitary": _transform_unitary,
    "dual": _transform_dual,
    "pi": _transform_pi,
    "factor": _transform_factor,
}


def run_transforms(config, rng):
    """Semilinear maps and preservation checkers, per selected kind."""
    kinds = [config.kind] if config.kind else list(TRANSFORM_KINDS)
    report = SuiteReport("transforms", {"kinds": kinds})
    for kind in kinds:
        part, stream = TRANSFORM_PARTS[kind], rng.fork(kind)
        _guarded(
            report,
            f"transforms_{kind}",
            f"{kind} checks",
            lambda part=part, stream=stream: part(config, stream),
        )
    return report


SUITE_RUNNERS = {
    "logic": run_logic,
    "compat": run_compat,
    "cc": run_cc,
    "grassmann": run_grassmann,
    "cliques": run_cliques,
    "apartments": run_apartments,
    "ortho-apartments": run_ortho_apartments,
    "transforms": run_transforms,
}


def run_suite(config, name):
    """Run one suite on its own forked stream."""
    rng = SplitMix64(config.seed).fork(name)
    logger.info("Suite %s started", name)
    start = time.perf_counter()
    report = SUITE_RUNNERS[name](config, rng)
    logger.info(
        "Suite %s finished: %d checks, passed=%s, %.2fs",
        name,
        len(report.checks),
        report.passed,
        time.perf_counter() - start,
    )
    return report


def run_verification(config, command=None):
    """
    Run the selected suites, in worker processes when ``config.jobs > 1``,
    and merge their reports in suite order.
    """
    names = config.selected_suites()
    started_at = datetime.now(timezone.utc)
    start = time.perf_counter()
    if config.jobs > 1 and len(names) > 1:
        workers = min(config.jobs, len(names))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            suites = list(pool.map(run_suite, [config] * len(names), names))
    else:
        suites = [run_suite(config, name) for name in names]
    report = RunReport(
        command=command or f"verify {config.suite}",
        config=config.echo(),
        suites=suites,
        started_at=started_at,
    )
    report.wall_clock_seconds = time.perf_counter() - start
    return report

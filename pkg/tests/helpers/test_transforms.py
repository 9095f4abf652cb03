"""Testing suite for semilinear maps and preservation checks"""

import unittest

from src.helpers.hilbert_logic import is_orthogonal_frame, orthocomplement
from src.helpers.linalg import DimensionMismatchError, Matrix
from src.helpers.rng import SplitMix64
from src.helpers.scalars import (
    GAUSSIAN,
    RATIONAL,
    FieldMismatchError,
    GaussianRational,
)
from src.helpers.subspaces import span
from src.helpers.transforms import (
    PLANE_NOTE,
    SAMPLE_SCOPE_NOTE,
    FactorVerdict,
    NotComplementClosedError,
    NotInvertibleError,
    NotLogicAutomorphismError,
    Relation,
    SemilinearMap,
    Sigma,
    SubspaceMap,
    apply,
    dual_action_check,
    factor_flip_check,
    induced_map,
    is_antiunitary,
    is_unitary,
    orthocomplement_map,
    orthogonality_violation,
    pair_permutation_map,
    pi_transform,
    preserves,
    random_non_unitary,
    random_scaled_unitary,
    unitary_up_to_scalar,
)


def _gaussian(rows):
    return Matrix.from_ints(rows, GAUSSIAN)


def _line(*values):
    vector = tuple(
        v if isinstance(v, GaussianRational) else GAUSSIAN.from_int(v) for v in values
    )
    return span([vector], len(vector), GAUSSIAN)


class TestSemilinearMap(unittest.TestCase):
    """Unit tests for SemilinearMap and the unitarity tests."""

    def setUp(self):
        """Set up a few maps on Q(i)^2."""
        self.i = GaussianRational(0, 1)
        self.identity = SemilinearMap(Matrix.identity(2, GAUSSIAN))
        self.conjugation = SemilinearMap(
            Matrix.identity(2, GAUSSIAN), Sigma.CONJUGATION
        )

    def test_scaled_identity(self):
        """Test c = 9 for 3 Id"""
        self.assertEqual(
            unitary_up_to_scalar(SemilinearMap(_gaussian([[3, 0], [0, 3]]))), 9
        )

    def test_hadamard_like(self):
        """Test c = 2 for [[1, 1], [1, -1]]"""
        self.assertEqual(
            unitary_up_to_scalar(SemilinearMap(_gaussian([[1, 1], [1, -1]]))), 2
        )

    def test_unitary_flags(self):
        """Test is_unitary and is_antiunitary"""
        self.assertTrue(is_unitary(self.identity))
        self.assertFalse(is_antiunitary(self.identity))
        self.assertTrue(is_antiunitary(self.conjugation))

    def test_shear_not_unitary(self):
        """Test that a shear has no scalar and breaks orthogonality"""
        shear = SemilinearMap(_gaussian([[1, 1], [0, 1]]))
        self.assertIsNone(unitary_up_to_scalar(shear))
        x, y = orthogonality_violation(shear)
        self.assertEqual((x, y), (_line(1, 0), _line(0, 1)))

    def test_scaled_unitary_has_no_violation(self):
        """Test that scaled unitaries preserve orthogonality"""
        self.assertIsNone(
            orthogonality_violation(SemilinearMap(_gaussian([[1, 1], [1, -1]])))
        )

    def test_conjugation_moves_line(self):
        """Test span{(1, i)} -> span{(1, -i)} under conjugation"""
        moved = apply(self.conjugation, _line(1, self.i))
        self.assertEqual(moved, _line(1, -self.i))

    def test_construction_errors(self):
        """Test singular matrices and conjugation over Q"""
        with self.assertRaises(NotInvertibleError):
            SemilinearMap(_gaussian([[1, 2], [2, 4]]))
        with self.assertRaises(FieldMismatchError):
            SemilinearMap(Matrix.identity(2, RATIONAL), Sigma.CONJUGATION)

    def test_dual_action(self):
        """Test that diag(2, 1) acts on span{(1, 1)} dually as span{(1, 2)}"""
        matrix = _gaussian([[2, 0], [0, 1]])
        adjoint_check, action_check = dual_action_check(matrix, [_line(1, 1)])
        self.assertTrue(adjoint_check.passed)
        self.assertTrue(action_check.passed)
        dual = SemilinearMap(matrix.conj_transpose().inverse())
        self.assertEqual(apply(dual, _line(1, 1)), _line(1, 2))


class TestRandomMaps(unittest.TestCase):
    """Unit tests for the random map generators."""

    def setUp(self):
        """Set up a random stream."""
        self.rng = SplitMix64(31)

    def test_random_scaled_unitary(self):
        """Test that generated maps are scaled (anti-)unitaries"""
        for sigma in Sigma:
            for _ in range(5):
                semilinear = random_scaled_unitary(3, self.rng, sigma, rotations=2)
                self.assertIsNotNone(unitary_up_to_scalar(semilinear))
                self.assertIsNone(orthogonality_violation(semilinear))
                self.assertTrue(is_orthogonal_frame(semilinear.matrix.entries))

    def test_random_non_unitary(self):
        """Test that non-unitary maps have a violation"""
        semilinear = random_non_unitary(3, self.rng)
        self.assertIsNone(unitary_up_to_scalar(semilinear))
        self.assertIsNotNone(orthogonality_violation(semilinear))


class TestSubspaceMaps(unittest.TestCase):
    """Unit tests for finite maps and the preservation checks."""

    def setUp(self):
        """Set up lines of Q(i)^2."""
        self.e1, self.e2 = _line(1, 0), _line(0, 1)
        self.d, self.d_perp = _line(1, 1), _line(1, -1)
        self.lines = [self.e1, self.e2, self.d, self.d_perp]

    def test_pi_transform_empty_family(self):
        """Test that the empty family gives the identity"""
        mapping = pi_transform([], self.lines)
        self.assertEqual(len(mapping), 4)
        self.assertTrue(all(mapping(x) == x for x in self.lines))

    def test_pi_transform_swaps_family(self):
        """Test that the family is complemented and the rest fixed"""
        mapping = pi_transform([self.e1, self.e2], [self.d])
        self.assertEqual(mapping(self.e1), self.e2)
        self.assertEqual(mapping(self.d), self.d)
        self.assertTrue(mapping.is_injective())

    def test_pi_transform_needs_complements(self):
        """Test a family missing an orthocomplement"""
        with self.assertRaises(NotComplementClosedError):
            pi_transform([self.e1], self.lines)

    def test_swap_breaks_orthogonality(self):
        """Test that swapping e1 and the diagonal breaks orthogonality"""
        mapping = SubspaceMap(
            {self.e1: self.d, self.d: self.e1, self.e2: self.e2}
        )
        result = preserves(Relation.ORTHOGONALITY, mapping, [(self.e1, self.e2)])
        self.assertFalse(result.passed)
        self.assertIn(SAMPLE_SCOPE_NOTE, result.notes)

    def test_induced_map_preserves_relations(self):
        """Test that a unitary preserves all four relations"""
        semilinear = SemilinearMap(_gaussian([[1, 1], [1, -1]]))
        mapping = induced_map(semilinear, self.lines)
        pairs = [(x, y) for x in self.lines for y in self.lines]
        for relation in Relation:
            with self.subTest(relation=relation):
                result = preserves(relation, mapping, pairs)
                self.assertTrue(result.passed)
                self.assertEqual(result.samples, 16)
        # distinct lines of the plane are adjacent
        adjacent = preserves(Relation.ADJACENCY, mapping, [(self.e1, self.d)])
        self.assertEqual(adjacent.name, "preserves_adjacency")
        self.assertTrue(Relation.ADJACENCY.holds(self.e1, self.d))

    def test_pi_transform_breaks_inclusion(self):
        """Test that complementing {X, X^perp} keeps compatibility only"""
        x = span([_gaussian([[1, 0, 0]]).row(0)], 3, GAUSSIAN)
        plane = span(_gaussian([[1, 0, 0], [0, 1, 0]]).entries, 3, GAUSSIAN)
        line = span([_gaussian([[0, 1, 0]]).row(0)], 3, GAUSSIAN)
        mapping = pi_transform({x, orthocomplement(x)}, [plane, line])
        self.assertEqual(mapping(x), orthocomplement(x))
        self.assertEqual(mapping(plane), plane)
        pairs = [(x, plane), (x, line), (line, plane)]
        inclusion = preserves(Relation.INCLUSION, mapping, pairs)
        self.assertFalse(inclusion.passed)
        self.assertEqual(inclusion.failure_count, 1)
        witness = inclusion.witnesses[0]
        self.assertTrue(witness["before"])
        self.assertFalse(witness["after"])
        self.assertTrue(preserves(Relation.COMPATIBILITY, mapping, pairs).passed)

    def test_non_unitary_map_breaks_orthogonality(self):
        """Test a fixed shear: orthogonal lines stop being orthogonal"""
        shear = SemilinearMap(_gaussian([[1, 1], [0, 1]]))
        mapping = induced_map(shear, self.lines)
        result = preserves(Relation.ORTHOGONALITY, mapping, [(self.e1, self.e2)])
        self.assertFalse(result.passed)
        self.assertEqual(result.witnesses[0]["before"], True)

    def test_compose(self):
        """Test that complementing twice is the identity"""
        complement = orthocomplement_map(self.lines)
        twice = complement.compose(complement)
        self.assertTrue(all(twice(x) == x for x in self.lines))

    def test_factor_flip_verdicts(self):
        """Test AS_IS for g itself and FLIPPED for its orthocomplement"""
        g = SemilinearMap(Matrix.identity(2, GAUSSIAN))
        result, verdicts = factor_flip_check(induced_map(g, self.lines), g)
        self.assertTrue(result.passed)
        self.assertEqual(verdicts[FactorVerdict.AS_IS], 4)
        self.assertIn(PLANE_NOTE, result.notes)
        result, verdicts = factor_flip_check(orthocomplement_map(self.lines), g)
        self.assertTrue(result.passed)
        self.assertEqual(verdicts[FactorVerdict.FLIPPED], 4)

    def test_factor_flip_neither(self):
        """Test that an unrelated image is reported"""
        g = SemilinearMap(Matrix.identity(2, GAUSSIAN))
        mapping = SubspaceMap({self.e1: self.d})
        result, verdicts = factor_flip_check(mapping, g)
        self.assertFalse(result.passed)
        self.assertEqual(verdicts[FactorVerdict.NEITHER], 1)

    def test_factor_flip_needs_unitary(self):
        """Test that g must be a scaled (anti-)unitary"""
        shear = SemilinearMap(_gaussian([[1, 1], [0, 1]]))
        with self.assertRaises(NotLogicAutomorphismError):
            factor_flip_check(orthocomplement_map(self.lines), shear)

    def test_pair_permutation_map(self):
        """Test that plane pair permutations keep orthogonality"""
        rng = SplitMix64(2)
        with self.assertLogs("src.helpers.transforms", level="WARNING"):
            mapping = pair_permutation_map(self.lines, rng)
        self.assertEqual(len(mapping), 4)
        for x in self.lines:
            self.assertEqual(mapping(orthocomplement(x)), orthocomplement(mapping(x)))

    def test_pair_permutation_needs_plane(self):
        """Test lines of Q(i)^3 are rejected"""
        with self.assertRaises(DimensionMismatchError):
            pair_permutation_map([_line(1, 0, 0)], SplitMix64(2))


if __name__ == "__main__":
    unittest.main()

"""Testing suite for run configuration and the environment layer"""

import os
import unittest
from unittest.mock import patch

from src.helpers.config import (
    DEFAULT_CACHE_DIR,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    SUITE_SAMPLES,
    SUITES,
    ConfigError,
    Environment,
    RunConfig,
    build_config,
    load_environment,
    scaled_samples,
)


class TestEnvironment(unittest.TestCase):
    """Unit tests for load_environment."""

    @patch("src.helpers.config.load_dotenv")
    @patch.dict(os.environ, {}, clear=True)
    def test_defaults(self, mock_load_dotenv):
        """Test the defaults with an empty environment"""
        environment = load_environment()
        mock_load_dotenv.assert_called_once()
        self.assertEqual(environment, Environment())
        self.assertEqual(environment.seed, DEFAULT_SEED)
        self.assertEqual(environment.cache_dir, DEFAULT_CACHE_DIR)

    @patch("src.helpers.config.load_dotenv")
    @patch.dict(
        os.environ,
        {
            "QLOGIC_SEED": "42",
            "QLOGIC_JOBS": "3",
            "QLOGIC_LOG_LEVEL": "debug",
            "QLOGIC_CACHE_DIR": "/tmp/qlogic",
        },
        clear=True,
    )
    def test_overrides(self, _mock_load_dotenv):
        """Test that QLOGIC_* variables override the defaults"""
        environment = load_environment()
        self.assertEqual(environment.seed, 42)
        self.assertEqual(environment.jobs, 3)
        self.assertEqual(environment.log_level, "DEBUG")
        self.assertEqual(environment.cache_dir, "/tmp/qlogic")

    @patch("src.helpers.config.load_dotenv")
    @patch.dict(os.environ, {"QLOGIC_SEED": "seven"}, clear=True)
    def test_non_integer(self, _mock_load_dotenv):
        """Test a non-integer seed"""
        with self.assertRaisesRegex(ConfigError, "QLOGIC_SEED"):
            load_environment()


class TestRunConfig(unittest.TestCase):
    """Unit tests for RunConfig and build_config."""

    def setUp(self):
        """Set up a non-default environment."""
        self.environment = Environment(seed=99, jobs=2)

    def test_flags_override_environment(self):
        """Test that explicit flags win and None falls back"""
        config = build_config("verify", self.environment, suite="logic", seed=5)
        self.assertEqual(config.seed, 5)
        self.assertEqual(config.jobs, 2)
        fallback = build_config("verify", self.environment, seed=None)
        self.assertEqual(fallback.seed, 99)

    def test_quick_scaling(self):
        """Test samples // 10 with a minimum of 10"""
        self.assertEqual(scaled_samples(200, True), 20)
        self.assertEqual(scaled_samples(50, True), 10)
        self.assertEqual(scaled_samples(50, False), 50)
        config = RunConfig(command="verify", samples=300, quick=True)
        self.assertEqual(config.samples_for("logic"), 30)

    def test_validation(self):
        """Test the rejected values"""
        bad = (
            {"suite": "nope"},
            {"seed": -1},
            {"seed": 2 ** 64},
            {"samples": 0},
            {"jobs": 0},
            {"n": 3, "k": 4},
            {"k": -1},
            {"p": 4},
        )
        for flags in bad:
            with self.assertRaises(ConfigError):
                build_config("verify", self.environment, **flags)

    def test_per_suite_default_samples(self):
        """Test 500 logic and 1000 compat samples unless --samples is given"""
        config = build_config("verify", self.environment)
        self.assertIsNone(config.samples)
        self.assertEqual(config.samples_for("logic"), 500)
        self.assertEqual(config.samples_for("compat"), 1000)
        self.assertEqual(config.samples_for("cc"), DEFAULT_SAMPLES)
        self.assertEqual(SUITE_SAMPLES, {"logic": 500, "compat": 1000})
        quick = build_config("verify", self.environment, quick=True)
        self.assertEqual(quick.samples_for("logic"), 50)
        self.assertEqual(quick.samples_for("compat"), 100)
        fixed = build_config("verify", self.environment, samples=7)
        self.assertEqual(fixed.samples_for("compat"), 7)

    def test_cc_parameters(self):
        """Test the cc suite rejects k < 1, n < 2 and k >= n"""
        bad = (
            {"suite": "cc", "k": 0},
            {"suite": "cc", "n": 1},
            {"suite": "cc", "n": 3, "k": 3},
            {"suite": "all", "k": 0},
            {"suite": "all", "n": 1},
        )
        for flags in bad:
            with self.assertRaisesRegex(ConfigError, "cc needs"):
                build_config("verify", self.environment, **flags)
        build_config("verify", self.environment, suite="cc", n=2, k=1)
        build_config("verify", self.environment, suite="logic", n=1)

    def test_listing_commands_skip_suite_checks(self):
        """Test that subspaces may ask for k = 0 and runs no suites"""
        config = build_config(
            "subspaces", self.environment, n=3, k=0, field_name="GF(2)"
        )
        self.assertEqual(config.selected_suites(), [])

    def test_unknown_flag(self):
        """Test that an unknown flag becomes a ConfigError"""
        with self.assertRaises(ConfigError):
            build_config("verify", self.environment, colour="blue")

    def test_echo_drops_paths(self):
        """Test the report echo of the configuration"""
        config = build_config(
            "verify", self.environment, out="report.json", quick=True, samples=100
        )
        echo = config.echo()
        self.assertNotIn("out", echo)
        self.assertNotIn("cache_dir", echo)
        self.assertNotIn("extra", echo)
        self.assertEqual(echo["effective_samples"]["logic"], 10)
        self.assertEqual(set(echo["effective_samples"]), set(SUITES))


if __name__ == "__main__":
    unittest.main()

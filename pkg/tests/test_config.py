import math

import numpy as np
import pytest

from qlbench.config import (
    ConfigSemanticError,
    ConfigSyntaxError,
    DEFAULT_SEED,
    parse_experiment_config,
)
from qlbench.hilbert import named_state, same_ray


class TestStateParsing:
    def test_preset(self):
        config = parse_experiment_config("state z+\ncontext x\n")
        assert same_ray(config.state, named_state("z+"))

    def test_amplitude_list(self):
        config = parse_experiment_config("state 0.6 0.8\n")
        assert np.allclose(config.state.amplitudes, [0.6, 0.8])

    def test_complex_amplitudes(self):
        config = parse_experiment_config("state 0.6 0.8j\n")
        assert np.allclose(config.state.amplitudes, [0.6, 0.8j])

    def test_angle_form(self):
        config = parse_experiment_config(f"state angles {math.pi / 2} 0\n")
        assert same_ray(config.state, [2 ** -0.5, 2 ** -0.5])

    def test_non_normalized_is_semantic_error(self):
        with pytest.raises(ConfigSemanticError, match="not normalized"):
            parse_experiment_config("state 1 1\n")

    def test_malformed_amplitude_is_syntax_error(self):
        with pytest.raises(ConfigSyntaxError, match="complex"):
            parse_experiment_config("state 1 oops\n")


class TestContextParsing:
    def test_named_axes(self):
        config = parse_experiment_config("context z\ncontext x\n")
        assert [name for name, _ in config.contexts] == ["z", "x"]

    def test_angles(self):
        config = parse_experiment_config("context angles 1.5707963267948966 0\n")
        name, basis = config.contexts[0]
        assert name.startswith("dir(")
        assert basis.dim == 2

    def test_explicit_vectors(self):
        config = parse_experiment_config("context vectors 1 0 ; 0 1\n")
        _, basis = config.contexts[0]
        assert basis.dim == 2

    def test_non_orthogonal_vectors_are_semantic_error(self):
        with pytest.raises(ConfigSemanticError, match="vectors invalid"):
            parse_experiment_config("context vectors 1 0 ; 1 1\n")

    def test_unknown_axis_is_syntax_error(self):
        with pytest.raises(ConfigSyntaxError):
            parse_experiment_config("context w\n")


class TestUniversesAndAtoms:
    def test_universes(self):
        config = parse_experiment_config("universe left l1 l2\nuniverse right r1 r2\n")
        assert [u.name for u in config.universes] == ["left", "right"]
        assert config.universes[0].outcomes == ("l1", "l2")

    def test_duplicate_labels_across_universes(self):
        with pytest.raises(ConfigSemanticError, match="already used"):
            parse_experiment_config("universe left x\nuniverse right x\n")

    def test_atoms(self):
        config = parse_experiment_config("atoms a b\n")
        assert config.atoms == ("a", "b")

    def test_atoms_arity(self):
        with pytest.raises(ConfigSyntaxError):
            parse_experiment_config("atoms a\n")


class TestRunParameters:
    def test_defaults(self):
        config = parse_experiment_config("")
        assert config.trials == 100_000
        assert config.seed == DEFAULT_SEED == 0xC0FFEE
        assert config.tol == 1e-9
        assert config.target == 0

    def test_overrides(self):
        text = "trials 500\nseed 0x2A\ntol 1e-6\ntarget 1\nsamples 50\n"
        config = parse_experiment_config(text)
        assert config.trials == 500
        assert config.seed == 42
        assert config.tol == 1e-6
        assert config.target == 1
        assert config.samples == 50

    def test_paths(self):
        config = parse_experiment_config("family builtin:triads-d3\nmodel /tmp/m.txt\n")
        assert config.family == "builtin:triads-d3"
        assert config.model == "/tmp/m.txt"

    def test_nonpositive_trials_rejected(self):
        with pytest.raises(ConfigSemanticError):
            parse_experiment_config("trials 0\n")


class TestErrorReporting:
    def test_unknown_key_location(self):
        with pytest.raises(ConfigSyntaxError) as info:
            parse_experiment_config("state z+\n  frobnicate 3\n")
        assert info.value.line == 2
        assert info.value.column == 3
        assert "frobnicate" in str(info.value)

    def test_malformed_number_location(self):
        with pytest.raises(ConfigSyntaxError) as info:
            parse_experiment_config("seed abc\n")
        assert info.value.line == 1
        assert info.value.column == 6

    def test_comments_and_blank_lines_ignored(self):
        config = parse_experiment_config("# a comment\n\nstate z+  # trailing\n")
        assert config.state is not None

"""Unit tests for flownet.config: tolerance, integrator and cover settings."""

import textwrap

import pytest

from flownet.config.defaults import get_default_config, merge_configs
from flownet.config.parser import ConfigParser, apply_env_overrides, load_config
from flownet.config.schema import CoverConfig, FlownetConfig, IntegratorDefaults, ToleranceConfig

# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

FULL_YAML = textwrap.dedent("""\
    tolerances:
      consensus: 1.0e-5
      steady_rate: 1.0e-7
      divergence_bound: 1.0e9

    integrator:
      step: 0.05
      horizon: 250
      stride: 20

    cover:
      exact_max_edges: 12
      brute_force_max_bidirectional: 10
""")

PARTIAL_YAML = textwrap.dedent("""\
    tolerances:
      consensus: 0.001
""")


@pytest.fixture
def parser() -> ConfigParser:
    return ConfigParser()


# ---------------------------------------------------------------------------
# Schema dataclass tests
# ---------------------------------------------------------------------------


class TestSchemaDefaults:
    """Verify default values on all schema dataclasses."""

    def test_tolerance_defaults(self) -> None:
        tol = ToleranceConfig()
        assert tol.consensus == 1e-4
        assert tol.steady_rate == 1e-6
        assert tol.equilibrium == 1e-8
        assert tol.matching_rank == 1e-10
        assert tol.matching_residual == 1e-10
        assert tol.permission_margin == 1e-12
        assert tol.divergence_bound == 1e12

    def test_integrator_defaults(self) -> None:
        integ = IntegratorDefaults()
        assert integ.step == 0.01
        assert integ.horizon == 100.0
        assert integ.stride == 10

    def test_cover_defaults(self) -> None:
        cover = CoverConfig()
        assert cover.exact_max_edges == 16
        assert cover.brute_force_max_bidirectional == 20

    def test_default_factory_matches_constructor(self) -> None:
        assert get_default_config() == FlownetConfig()


# ---------------------------------------------------------------------------
# Environment variable resolution
# ---------------------------------------------------------------------------


class TestResolveEnvVars:
    """resolve_env_vars handles ${VAR} and ${VAR:-default} patterns."""

    def test_simple_var(self, parser: ConfigParser, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("STEP_SIZE", "0.02")
        assert parser.resolve_env_vars("${STEP_SIZE}") == "0.02"

    def test_var_with_default_absent(self, parser: ConfigParser, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("MISSING_VAR", raising=False)
        assert parser.resolve_env_vars("${MISSING_VAR:-0.5}") == "0.5"

    def test_missing_var_no_default_returns_empty(self, parser: ConfigParser, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("ABSENT_VAR", raising=False)
        assert parser.resolve_env_vars("${ABSENT_VAR}") == ""

    def test_no_interpolation_needed(self, parser: ConfigParser) -> None:
        assert parser.resolve_env_vars("plain") == "plain"

    def test_expanded_in_section_values(self, parser: ConfigParser, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("FLOWNET_STEP", "0.025")
        config = parser.parse("integrator:\n  step: ${FLOWNET_STEP}\n")
        assert config.integrator.step == 0.025


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class TestParseFullConfig:
    """parse() hydrates every section of the full YAML example."""

    @pytest.fixture
    def config(self, parser: ConfigParser) -> FlownetConfig:
        return parser.parse(FULL_YAML)

    def test_tolerances(self, config: FlownetConfig) -> None:
        assert config.tolerances.consensus == 1e-5
        assert config.tolerances.steady_rate == 1e-7
        assert config.tolerances.divergence_bound == 1e9

    def test_untouched_tolerance_keeps_default(self, config: FlownetConfig) -> None:
        assert config.tolerances.matching_residual == 1e-10

    def test_integrator(self, config: FlownetConfig) -> None:
        assert config.integrator.step == 0.05
        assert config.integrator.horizon == 250.0
        assert config.integrator.stride == 20
        assert isinstance(config.integrator.stride, int)
        assert isinstance(config.integrator.horizon, float)

    def test_cover(self, config: FlownetConfig) -> None:
        assert config.cover.exact_max_edges == 12
        assert config.cover.brute_force_max_bidirectional == 10

    def test_valid(self, parser: ConfigParser, config: FlownetConfig) -> None:
        assert parser.validate(config) == []


class TestParseEdgeCases:
    """Empty documents, partial sections and malformed input."""

    def test_empty_document_gives_defaults(self, parser: ConfigParser) -> None:
        assert parser.parse("") == FlownetConfig()

    def test_partial_section(self, parser: ConfigParser) -> None:
        config = parser.parse(PARTIAL_YAML)
        assert config.tolerances.consensus == 0.001
        assert config.tolerances.steady_rate == 1e-6
        assert config.integrator == IntegratorDefaults()

    def test_none_raises_type_error(self, parser: ConfigParser) -> None:
        with pytest.raises(TypeError):
            parser.parse(None)  # type: ignore[arg-type]

    def test_invalid_yaml_raises(self, parser: ConfigParser) -> None:
        with pytest.raises(ValueError, match="Invalid YAML"):
            parser.parse("tolerances: [unclosed")

    def test_non_mapping_top_level_raises(self, parser: ConfigParser) -> None:
        with pytest.raises(ValueError, match="mapping"):
            parser.parse("- a\n- b\n")

    def test_unknown_section_raises(self, parser: ConfigParser) -> None:
        with pytest.raises(ValueError, match="Unknown configuration sections"):
            parser.parse("plotting:\n  dpi: 100\n")

    def test_unknown_key_raises(self, parser: ConfigParser) -> None:
        with pytest.raises(ValueError, match="tolerances.speed"):
            parser.parse("tolerances:\n  speed: 1\n")

    def test_non_numeric_value_raises(self, parser: ConfigParser) -> None:
        with pytest.raises(ValueError, match="integrator.step"):
            parser.parse("integrator:\n  step: fast\n")

    def test_fractional_stride_raises(self, parser: ConfigParser) -> None:
        with pytest.raises(ValueError, match="integrator.stride"):
            parser.parse("integrator:\n  stride: 2.5\n")

    def test_parse_file(self, parser: ConfigParser, tmp_path) -> None:
        path = tmp_path / "flownet.yml"
        path.write_text(FULL_YAML)
        assert parser.parse_file(str(path)).cover.exact_max_edges == 12

    def test_parse_missing_file_raises(self, parser: ConfigParser, tmp_path) -> None:
        with pytest.raises(FileNotFoundError):
            parser.parse_file(str(tmp_path / "absent.yml"))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


class TestValidate:
    """validate() reports every problem at once."""

    def test_defaults_are_valid(self, parser: ConfigParser) -> None:
        assert parser.validate(FlownetConfig()) == []

    def test_non_positive_tolerance(self, parser: ConfigParser) -> None:
        config = FlownetConfig(tolerances=ToleranceConfig(consensus=0.0))
        errors = parser.validate(config)
        assert any("tolerances.consensus" in e for e in errors)

    def test_several_errors_collected(self, parser: ConfigParser) -> None:
        config = FlownetConfig(
            integrator=IntegratorDefaults(step=-1.0, horizon=-5.0, stride=0),
            cover=CoverConfig(exact_max_edges=0),
        )
        errors = parser.validate(config)
        assert len(errors) == 4

    def test_zero_horizon_is_valid(self, parser: ConfigParser) -> None:
        config = FlownetConfig(integrator=IntegratorDefaults(horizon=0.0))
        assert parser.validate(config) == []


# ---------------------------------------------------------------------------
# Environment overrides and loading
# ---------------------------------------------------------------------------


class TestEnvOverrides:
    """FLOWNET_TOL_* variables override tolerances."""

    def test_consensus_override(self) -> None:
        config = apply_env_overrides(FlownetConfig(), {"FLOWNET_TOL_CONSENSUS": "1e-3"})
        assert config.tolerances.consensus == 1e-3

    def test_steady_override(self) -> None:
        config = apply_env_overrides(FlownetConfig(), {"FLOWNET_TOL_STEADY": "1e-9"})
        assert config.tolerances.steady_rate == 1e-9

    def test_empty_value_ignored(self) -> None:
        config = apply_env_overrides(FlownetConfig(), {"FLOWNET_TOL_CONSENSUS": ""})
        assert config.tolerances.consensus == 1e-4

    def test_unparseable_value_raises(self) -> None:
        with pytest.raises(ValueError, match="FLOWNET_TOL_CONSENSUS"):
            apply_env_overrides(FlownetConfig(), {"FLOWNET_TOL_CONSENSUS": "tight"})


class TestLoadConfig:
    """load_config combines file, default file and environment."""

    def test_explicit_path(self, tmp_path) -> None:
        path = tmp_path / "custom.yml"
        path.write_text(PARTIAL_YAML)
        assert load_config(str(path), environ={}).tolerances.consensus == 0.001

    def test_default_file_in_working_directory(self, tmp_path, monkeypatch: pytest.MonkeyPatch) -> None:
        (tmp_path / ".flownet.yml").write_text("integrator:\n  stride: 5\n")
        monkeypatch.chdir(tmp_path)
        assert load_config(environ={}).integrator.stride == 5

    def test_no_file_gives_defaults(self, tmp_path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.chdir(tmp_path)
        assert load_config(environ={}) == FlownetConfig()

    def test_environment_wins_over_file(self, tmp_path) -> None:
        path = tmp_path / "custom.yml"
        path.write_text(PARTIAL_YAML)
        config = load_config(str(path), environ={"FLOWNET_TOL_CONSENSUS": "0.01"})
        assert config.tolerances.consensus == 0.01

    def test_invalid_values_rejected(self, tmp_path) -> None:
        path = tmp_path / "bad.yml"
        path.write_text("integrator:\n  step: 0\n")
        with pytest.raises(ValueError, match="Invalid configuration"):
            load_config(str(path), environ={})


# ---------------------------------------------------------------------------
# Merging
# ---------------------------------------------------------------------------


class TestMergeConfigs:
    """merge_configs layers non-default override fields onto a base."""

    def test_override_wins(self) -> None:
        base = FlownetConfig(integrator=IntegratorDefaults(step=0.05))
        override = FlownetConfig(tolerances=ToleranceConfig(consensus=1e-3))
        merged = merge_configs(base, override)
        assert merged.integrator.step == 0.05
        assert merged.tolerances.consensus == 1e-3

    def test_originals_untouched(self) -> None:
        base = FlownetConfig()
        override = FlownetConfig(cover=CoverConfig(exact_max_edges=8))
        merge_configs(base, override)
        assert base.cover.exact_max_edges == 16
        assert override.cover.exact_max_edges == 8

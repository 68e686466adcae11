import pytest

from kslab.config import ConfigError, RunConfig, load_config, parse_config_text


class TestParsing:
    def test_defaults(self, tmp_path):
        cfg = load_config(None, environ={})
        assert cfg == RunConfig()
        assert cfg.domain_half_length == 16.0
        assert cfg.checks_slack == 0.05

    def test_file_values(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text(
            """
            # comment line
            domain.half_length = 8.0
            domain.modes = 32
            noise.sigma = 0.2
            solver.dt = 0.01
            checks.slack = 0.0
            """,
            encoding="utf-8",
        )
        cfg = load_config(p, environ={})
        assert cfg.domain_half_length == 8.0
        assert cfg.domain_modes == 32
        assert cfg.noise_sigma == 0.2
        assert cfg.solver_dt == 0.01
        assert cfg.checks_slack == 0.0

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="domain.widthh"):
            parse_config_text("domain.widthh = 2.0")

    def test_unparseable_value_named(self):
        with pytest.raises(ConfigError, match="domain.modes"):
            parse_config_text("domain.modes = many")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="key = value"):
            parse_config_text("domain.modes 12")

    def test_env_override(self, tmp_path):
        p = tmp_path / "run.cfg"
        p.write_text("domain.half_length = 8.0\n", encoding="utf-8")
        cfg = load_config(p, environ={"KSLAB_DOMAIN__HALF_LENGTH": "4.0", "KSLAB_NOISE__SIGMA": "0"})
        assert cfg.domain_half_length == 4.0
        assert cfg.noise_sigma == 0.0


class TestValidation:
    @pytest.mark.parametrize(
        "text,key",
        [
            ("domain.half_length = 0", "domain.half_length"),
            ("domain.shift = 0.1", "domain.shift"),
            ("domain.modes = 0", "domain.modes"),
            ("noise.sigma = -0.5", "noise.sigma"),
            ("noise.decay_rate = 1.0", "noise.decay_rate"),
            ("initial.mode = 65", "initial.mode"),
            ("solver.dt = 0", "solver.dt"),
            ("solver.t_final = -1", "solver.t_final"),
            ("solver.picard_tol = 0", "solver.picard_tol"),
            ("solver.picard_max_iters = 0", "solver.picard_max_iters"),
            ("solver.save_stride = 0", "solver.save_stride"),
            ("solver.quad_substeps = 0", "solver.quad_substeps"),
            ("checks.slack = -0.1", "checks.slack"),
            ("checks.samples = 10", "checks.samples"),
            ("checks.sweep_paths = 0", "checks.sweep_paths"),
        ],
    )
    def test_each_constraint_rejected_with_named_key(self, tmp_path, text, key):
        p = tmp_path / "bad.cfg"
        p.write_text(text + "\n", encoding="utf-8")
        with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
            load_config(p, environ={})


class TestDerivedObjects:
    def test_round_trip_dict(self):
        cfg = RunConfig()
        d = cfg.as_dict()
        assert d["domain.half_length"] == 16.0
        assert d["solver.picard_max_iters"] == 50
        assert len(d) == 16

    def test_initial_field(self):
        cfg = load_config(None, environ={"KSLAB_INITIAL__MODE": "3", "KSLAB_INITIAL__AMPLITUDE": "0.5"})
        u0 = cfg.initial_field()
        assert u0[2] == 0.5
        assert u0.sum() == 0.5

    def test_spec_objects(self):
        cfg = RunConfig()
        assert cfg.domain().modes == 64
        assert cfg.noise().sigma == 0.1
        assert cfg.solver().dt == 1e-3

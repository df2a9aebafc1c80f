"""Engine unit tests: frozen examples for every operation."""

from dataclasses import replace

import pytest

from ecolabel import engine
from ecolabel.defaults import DEFAULT_BOUNDARIES, default_config, default_metrics
from ecolabel.errors import EmptyPopulation, NoRatableMetrics, NonFiniteInput, PhaseMismatch
from ecolabel.types import (
    DerivationRule,
    EfficiencyConfig,
    GradeScale,
    MetricDefinition,
    MetricDirection,
    Phase,
    PhaseReport,
    Provenance,
    RatedMetric,
    RecommendationRule,
)


def metric(metric_id="m", direction=MetricDirection.LOWER_BETTER, weight=1.0,
           reference=1.0, boundaries=DEFAULT_BOUNDARIES, phases=(Phase.TRAINING,),
           derivation=None):
    return MetricDefinition(
        id=metric_id,
        name=metric_id,
        unit="u",
        direction=direction,
        weight=weight,
        reference=reference,
        boundaries=tuple(boundaries),
        phases=phases,
        derivation=derivation or DerivationRule.none(),
    )


def config_of(*metrics, phase=Phase.TRAINING, scale=None):
    return EfficiencyConfig(
        version=1,
        phase=phase,
        scale=scale or GradeScale(),
        metrics=tuple(metrics),
    )


def report_of(values, phase=Phase.TRAINING, model_id="m1"):
    return PhaseReport(
        model_id=model_id, phase=phase, raw_values=values, provenance=Provenance.FORM
    )


class TestValidateConfig:
    def test_default_configs_are_valid(self):
        assert engine.validate_config(default_config(Phase.TRAINING)) == []
        assert engine.validate_config(default_config(Phase.INFERENCE)) == []

    def test_non_decreasing_boundaries_rejected(self):
        bad = config_of(metric(boundaries=(0.5, 0.8, 1.25, 2.0)))
        assert any("not strictly decreasing" in v for v in engine.validate_config(bad))

    def test_all_zero_weights_rejected(self):
        bad = config_of(metric("a", weight=0.0), metric("b", weight=0.0))
        assert any("weight > 0" in v for v in engine.validate_config(bad))

    def test_boundary_count_must_match_scale(self):
        bad = config_of(metric(boundaries=(2.0, 1.0)))
        assert any("expected 4 boundaries" in v for v in engine.validate_config(bad))

    def test_duplicate_metric_ids_rejected(self):
        bad = config_of(metric("a"), metric("a"))
        assert any("duplicate metric id" in v for v in engine.validate_config(bad))

    def test_phase_mismatch_rejected(self):
        bad = config_of(metric(phases=(Phase.INFERENCE,)), phase=Phase.TRAINING)
        assert any("does not apply to phase" in v for v in engine.validate_config(bad))

    def test_ratio_fields_must_differ(self):
        bad = config_of(metric(derivation=DerivationRule.ratio("x", "x")))
        assert any("must be distinct" in v for v in engine.validate_config(bad))

    def test_tiny_scale_rejected(self):
        bad = config_of(
            metric(boundaries=()), scale=GradeScale(grades=("A",))
        )
        assert any("at least 2 grades" in v for v in engine.validate_config(bad))


class TestDeriveMetrics:
    def test_ratio(self):
        cfg = config_of(
            metric("size_efficiency", derivation=DerivationRule.ratio("model_size_mb", "co2e_kg"))
        )
        values, issues = engine.derive_metrics(
            report_of({"model_size_mb": 100.0, "co2e_kg": 2.0}), cfg
        )
        assert values["size_efficiency"] == 50.0
        assert issues == {}

    def test_harmonic_mean_of_equal_values(self):
        cfg = config_of(
            metric("performance_score", derivation=DerivationRule.harmonic_mean(("accuracy", "f1")))
        )
        values, _ = engine.derive_metrics(report_of({"accuracy": 0.5, "f1": 0.5}), cfg)
        assert values["performance_score"] == pytest.approx(0.5)

    def test_harmonic_mean_mixed(self):
        cfg = config_of(
            metric("performance_score", derivation=DerivationRule.harmonic_mean(("accuracy", "f1")))
        )
        values, _ = engine.derive_metrics(report_of({"accuracy": 0.2, "f1": 0.8}), cfg)
        assert values["performance_score"] == pytest.approx(0.32)

    def test_harmonic_mean_zero_term(self):
        cfg = config_of(
            metric("performance_score", derivation=DerivationRule.harmonic_mean(("accuracy", "f1")))
        )
        values, _ = engine.derive_metrics(report_of({"accuracy": 0.0, "f1": 0.9}), cfg)
        assert values["performance_score"] == 0.0

    def test_harmonic_mean_uses_present_sources_only(self):
        cfg = config_of(
            metric(
                "performance_score",
                derivation=DerivationRule.harmonic_mean(("accuracy", "f1", "rouge")),
            )
        )
        values, _ = engine.derive_metrics(report_of({"accuracy": 0.4}), cfg)
        assert values["performance_score"] == pytest.approx(0.4)

    def test_ratio_division_by_zero_reported(self):
        cfg = config_of(
            metric("size_efficiency", derivation=DerivationRule.ratio("model_size_mb", "co2e_kg"))
        )
        values, issues = engine.derive_metrics(
            report_of({"model_size_mb": 100.0, "co2e_kg": 0.0}), cfg
        )
        assert "size_efficiency" not in values
        assert issues == {"size_efficiency": engine.DIVISION_BY_ZERO}

    def test_absent_inputs_stay_absent(self):
        cfg = config_of(
            metric("size_efficiency", derivation=DerivationRule.ratio("model_size_mb", "co2e_kg"))
        )
        values, issues = engine.derive_metrics(report_of({"model_size_mb": 100.0}), cfg)
        assert "size_efficiency" not in values
        assert issues == {}

    def test_direct_value_for_derived_metric_honored_when_inputs_absent(self):
        cfg = config_of(
            metric("size_efficiency", derivation=DerivationRule.ratio("model_size_mb", "co2e_kg"))
        )
        values, _ = engine.derive_metrics(report_of({"size_efficiency": 42.0}), cfg)
        assert values["size_efficiency"] == 42.0

    def test_direct_metrics_pass_through(self):
        cfg = config_of(metric("co2e_kg"))
        values, _ = engine.derive_metrics(report_of({"co2e_kg": 3.5, "other": 1.0}), cfg)
        assert values == {"co2e_kg": 3.5, "other": 1.0}


class TestComputeIndex:
    @pytest.mark.parametrize("direction", list(MetricDirection))
    def test_identity_at_reference(self, direction):
        assert engine.compute_index(7.3, 7.3, direction) == 1.0

    def test_lower_better_halved(self):
        assert engine.compute_index(10.0, 20.0, MetricDirection.LOWER_BETTER) == 2.0

    def test_higher_better_ratio(self):
        assert engine.compute_index(30.0, 20.0, MetricDirection.HIGHER_BETTER) == 1.5

    def test_zero_consumption_is_capped_perfect(self):
        assert engine.compute_index(0.0, 5.0, MetricDirection.LOWER_BETTER) == engine.INDEX_CAP

    def test_zero_higher_better_clamps_to_floor(self):
        assert engine.compute_index(0.0, 5.0, MetricDirection.HIGHER_BETTER) == engine.INDEX_FLOOR

    def test_cap_applies_to_extreme_ratios(self):
        assert engine.compute_index(1e-12, 1.0, MetricDirection.LOWER_BETTER) == engine.INDEX_CAP

    @pytest.mark.parametrize("bad", [float("nan"), float("inf")])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(NonFiniteInput):
            engine.compute_index(bad, 1.0, MetricDirection.LOWER_BETTER)
        with pytest.raises(NonFiniteInput):
            engine.compute_index(1.0, bad, MetricDirection.LOWER_BETTER)


class TestGradeIndex:
    SCALE = GradeScale()

    @pytest.mark.parametrize(
        "index,expected_grade,expected_position",
        [
            (1.0, "C", 2),
            (2.0, "A", 0),
            (0.1, "E", 4),
            (1.9999, "B", 1),
            (1.25, "B", 1),
            (0.8, "C", 2),
            (0.7999, "D", 3),
            (0.5, "D", 3),
            (0.4999, "E", 4),
        ],
    )
    def test_default_boundary_table(self, index, expected_grade, expected_position):
        assert engine.grade_index(index, DEFAULT_BOUNDARIES, self.SCALE) == (
            expected_grade,
            expected_position,
        )

    def test_two_grade_scale(self):
        scale = GradeScale(grades=("good", "bad"))
        assert engine.grade_index(1.0, (1.0,), scale) == ("good", 0)
        assert engine.grade_index(0.99, (1.0,), scale) == ("bad", 1)


def rated(metric_id, position, weight=1.0):
    return RatedMetric(
        metric_id=metric_id,
        value=1.0,
        index=1.0,
        grade=GradeScale().grades[position],
        grade_position=position,
        weight_used=weight,
        missing=False,
    )


class TestAggregateLabel:
    def test_all_best(self):
        score, grade = engine.aggregate_label([rated("a", 0), rated("b", 0)], GradeScale())
        assert (score, grade) == (0.0, "A")

    def test_equal_weights_mean(self):
        score, grade = engine.aggregate_label([rated("a", 0), rated("b", 2)], GradeScale())
        assert (score, grade) == (1.0, "B")

    def test_missing_renormalizes(self):
        metrics = [
            RatedMetric.absent("a"),
            rated("b", 1, weight=1.0),
            rated("c", 3, weight=1.0),
        ]
        score, grade = engine.aggregate_label(metrics, GradeScale())
        assert (score, grade) == (2.0, "C")

    def test_half_rounds_toward_worse(self):
        score, grade = engine.aggregate_label([rated("a", 0), rated("b", 3)], GradeScale())
        assert (score, grade) == (1.5, "C")

    def test_weighted(self):
        score, _ = engine.aggregate_label(
            [rated("a", 0, weight=3.0), rated("b", 4, weight=1.0)], GradeScale()
        )
        assert score == 1.0

    def test_nothing_ratable(self):
        with pytest.raises(NoRatableMetrics):
            engine.aggregate_label([RatedMetric.absent("a")], GradeScale())
        with pytest.raises(NoRatableMetrics):
            engine.aggregate_label([rated("a", 1, weight=0.0)], GradeScale())


def all_at_reference_report(config: EfficiencyConfig) -> PhaseReport:
    """Raw values that put every default training metric exactly at its reference."""
    raw = {}
    for m in config.metrics:
        if m.derivation.kind == "none":
            raw[m.id] = m.reference
    # co2e is 10 at reference; choose ratio inputs to land exactly on references
    raw["model_size_mb"] = config.metric("size_efficiency").reference * raw["co2e_kg"]
    raw["dataset_size_mb"] = config.metric("dataset_efficiency").reference * raw["co2e_kg"]
    perf = config.metric("performance_score").reference
    raw.update({"accuracy": perf, "f1": perf, "rouge": perf})
    return report_of(raw)


class TestComputeLabel:
    def test_all_at_reference_grades_c(self):
        config = default_config(Phase.TRAINING)
        label = engine.compute_label(all_at_reference_report(config), config)
        assert label.overall_grade == "C"
        assert label.overall_score == 2.0
        assert all(r.grade == "C" for r in label.rated_metrics)

    def test_empty_report_not_ratable(self):
        config = default_config(Phase.TRAINING)
        with pytest.raises(NoRatableMetrics):
            engine.compute_label(report_of({}), config)

    def test_missing_metric_marked_and_renormalized(self):
        config = default_config(Phase.TRAINING)
        report = all_at_reference_report(config)
        raw = dict(report.raw_values)
        del raw["downloads"]
        label = engine.compute_label(report_of(raw), config)
        by_id = {r.metric_id: r for r in label.rated_metrics}
        assert by_id["downloads"].missing
        assert by_id["downloads"].weight_used == 0.0
        assert by_id["downloads"].value is None
        assert label.overall_score == 2.0  # remaining metrics still all at reference
        assert len(label.rated_metrics) == len(config.metrics)

    def test_phase_mismatch(self):
        config = default_config(Phase.TRAINING)
        with pytest.raises(PhaseMismatch):
            engine.compute_label(report_of({"co2e_kg": 1.0}, phase=Phase.INFERENCE), config)

    def test_recommendations_trigger_on_bad_grades(self):
        config = default_config(Phase.TRAINING)
        catalog = [
            RecommendationRule("co2e_kg", 3, "cut emissions"),
            RecommendationRule("downloads", 3, "publish the model"),
        ]
        # co2e 10x the reference grades E; downloads at reference grades C.
        label = engine.compute_label(
            report_of({"co2e_kg": 100.0, "downloads": 10_000.0}), config, catalog
        )
        assert [r.text for r in label.recommendations] == ["cut emissions"]

    def test_deterministic_modulo_id_and_timestamp(self):
        config = default_config(Phase.TRAINING)
        report = all_at_reference_report(config)
        a = engine.compute_label(report, config)
        b = engine.compute_label(report, config)
        assert a.rated_metrics == b.rated_metrics
        assert (a.overall_score, a.overall_grade) == (b.overall_score, b.overall_grade)
        assert a.label_id != b.label_id


class TestCalibrateReferences:
    def population(self, values, metric_id="co2e_kg"):
        return [report_of({metric_id: v}) for v in values]

    def config(self):
        return config_of(metric("co2e_kg", reference=99.0))

    def test_odd_population_median(self):
        updated = engine.calibrate_references(self.population([1.0, 2.0, 3.0]), self.config())
        assert updated.metric("co2e_kg").reference == 2.0

    def test_even_population_median(self):
        updated = engine.calibrate_references(
            self.population([1.0, 2.0, 3.0, 4.0]), self.config()
        )
        assert updated.metric("co2e_kg").reference == 2.5

    def test_absent_metric_keeps_reference(self):
        updated = engine.calibrate_references([report_of({"other": 1.0})], self.config())
        assert updated.metric("co2e_kg").reference == 99.0

    def test_zero_values_ignored(self):
        updated = engine.calibrate_references(
            self.population([0.0, 2.0, 4.0]), self.config()
        )
        assert updated.metric("co2e_kg").reference == 3.0

    def test_version_bumped_and_input_untouched(self):
        config = self.config()
        updated = engine.calibrate_references(self.population([5.0]), config)
        assert updated.version == config.version + 1
        assert config.metric("co2e_kg").reference == 99.0

    def test_derived_values_participate(self):
        config = config_of(
            metric("size_efficiency", derivation=DerivationRule.ratio("model_size_mb", "co2e_kg"))
        )
        population = [
            report_of({"model_size_mb": 100.0, "co2e_kg": 2.0}),  # 50
            report_of({"model_size_mb": 100.0, "co2e_kg": 1.0}),  # 100
            report_of({"model_size_mb": 300.0, "co2e_kg": 2.0}),  # 150
        ]
        updated = engine.calibrate_references(population, config)
        assert updated.metric("size_efficiency").reference == 100.0

    def test_empty_population(self):
        with pytest.raises(EmptyPopulation):
            engine.calibrate_references([], self.config())

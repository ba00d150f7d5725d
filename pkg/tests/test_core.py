import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fidelity_models.core import (
    VOCABULARY,
    CostProfile,
    FeatureSet,
    FidelityRelation,
    GrayBoxSpec,
    IncreaseKind,
    InputGroup,
    ModelDescriptor,
    Output,
    Relation,
    Scenario,
    ValidityFrame,
    ValidityPredicate,
    check_registry,
    classify_increase,
    compare_fidelity,
    is_valid,
    render_gray_box,
    select_model,
)
from fidelity_models.errors import (
    MissingParameter,
    NoValidModel,
    ParameterError,
    PreconditionViolation,
    UnknownTag,
)
from fidelity_models.registry import MODELS, REGISTRY, get_model

H, L, E, I = (FidelityRelation.HIGHER, FidelityRelation.LOWER,
              FidelityRelation.EQUAL, FidelityRelation.INCOMPARABLE)
TAGS = sorted(VOCABULARY)


def make_model(id, features, rank=1, inputs=1, frame=(), extends=None):
    gb = GrayBoxSpec(inputs=[InputGroup("x", inputs, "")], relations=[], outputs=[Output("y", "-")])
    return ModelDescriptor(
        id=id, features=FeatureSet(features), gray_box=gb,
        frame=ValidityFrame([ValidityPredicate(*p) for p in frame]),
        cost=CostProfile(inputs, rank), extends=extends,
    )


def beam_scenario(s, required=("bending-deflection",)):
    return Scenario({"slenderness": s}, FeatureSet(required))


feature_sets = st.sets(st.sampled_from(TAGS)).map(FeatureSet)


class TestCompareFidelity:
    def test_beam_models(self):
        assert compare_fidelity(get_model("beam.eb").features, get_model("beam.te").features) is L

    def test_equal_and_disjoint(self):
        x = FeatureSet(["bending-deflection"])
        assert compare_fidelity(x, x) is E
        assert compare_fidelity(x, FeatureSet(["coulomb-friction"])) is I

    def test_registry_pairs(self):
        expected = {
            ("beam.te", "beam.eb"): H,
            ("smd.numeric", "smd.heuristic"): H,
            ("grade.spring", "grade.rigid"): H,
            ("grade.dynamic", "grade.spring"): H,
            ("grade.dynamic", "grade.rigid"): H,
            ("beam.eb", "smd.heuristic"): I,
        }
        for (a, b), rel in expected.items():
            assert compare_fidelity(get_model(a).features, get_model(b).features) is rel

    def test_unknown_tag_rejected(self):
        with pytest.raises(UnknownTag):
            FeatureSet(["bending-deflexion"])


def _all_sets(n_random, seed=7):
    rng = random.Random(seed)
    sets = [m.features for m in MODELS]
    for _ in range(n_random):
        sets.append(FeatureSet(rng.sample(TAGS, rng.randint(0, len(TAGS)))))
    return sets


class TestPartialOrder:
    def test_enumerated_properties(self):
        sets = _all_sets(200)
        for a in sets:
            assert compare_fidelity(a, a) is E
        for a, b in itertools.product(sets, repeat=2):
            ab, ba = compare_fidelity(a, b), compare_fidelity(b, a)
            assert (ab is H) == (ba is L)
            assert (ab is E) == (ba is E) == (a == b)
            assert (ab is I) == (ba is I)

    def test_enumerated_transitivity(self):
        sets = _all_sets(60, seed=11)
        for a, b, c in itertools.product(sets, repeat=3):
            if compare_fidelity(b, a) is H and compare_fidelity(c, b) is H:
                assert compare_fidelity(c, a) is H

    @given(feature_sets, feature_sets)
    def test_antisymmetry(self, a, b):
        rel = compare_fidelity(a, b)
        if rel in (H, L):
            assert compare_fidelity(b, a) is not rel
        if a != b:
            assert rel is not E

    @given(feature_sets, st.sets(st.sampled_from(TAGS)), st.sets(st.sampled_from(TAGS)))
    def test_chain_transitivity(self, a, extra1, extra2):
        b = FeatureSet(a | extra1)
        c = FeatureSet(b | extra2)
        if a < b < c:
            assert compare_fidelity(c, a) is H
            assert compare_fidelity(a, c) is L


class TestClassifyIncrease:
    @pytest.mark.parametrize(
        "lower, higher, kind",
        [
            ("beam.eb", "beam.te", IncreaseKind.ALGEBRAIC_EXTENSION),
            ("smd.heuristic", "smd.numeric", IncreaseKind.REPLACEMENT),
            ("grade.rigid", "grade.spring", IncreaseKind.ALGEBRAIC_EXTENSION),
            ("grade.spring", "grade.dynamic", IncreaseKind.REPLACEMENT),
            ("grade.rigid", "grade.dynamic", IncreaseKind.REPLACEMENT),
        ],
    )
    def test_registry_examples(self, lower, higher, kind):
        assert classify_increase(get_model(lower), get_model(higher)) is kind

    @pytest.mark.parametrize("pair", [("beam.te", "beam.eb"), ("beam.eb", "beam.eb"), ("beam.eb", "smd.numeric")])
    def test_precondition(self, pair):
        with pytest.raises(PreconditionViolation):
            classify_increase(get_model(pair[0]), get_model(pair[1]))

    def test_extension_implies_strict_subset(self):
        for lo, hi in itertools.permutations(MODELS, 2):
            try:
                kind = classify_increase(lo, hi)
            except PreconditionViolation:
                continue
            if kind is IncreaseKind.ALGEBRAIC_EXTENSION:
                assert lo.features < hi.features


class TestIsValid:
    def test_long_beam_valid(self):
        assert is_valid(get_model("beam.eb"), beam_scenario(10))

    def test_short_beam_invalid(self):
        v = is_valid(get_model("beam.eb"), beam_scenario(1))
        assert not v
        assert [p.describe() for p in v.failed_predicates] == ["slenderness >= 10.0"]

    def test_vacuous(self):
        for model in MODELS:
            if not model.frame.predicates:
                assert is_valid(model, Scenario())

    def test_missing_feature_listed(self):
        v = is_valid(get_model("beam.eb"), beam_scenario(20, ["bending-deflection", "shear-deflection"]))
        assert not v and v.missing_features == ("shear-deflection",)

    def test_every_violation_listed(self):
        v = is_valid(get_model("smd.heuristic"), Scenario({"zeta": 2.0, "forcing": "impulse"}))
        assert len(v.failed_predicates) == 2

    def test_missing_parameter_is_error(self):
        with pytest.raises(MissingParameter):
            is_valid(get_model("beam.eb"), Scenario({}))

    def test_set_membership_predicate(self):
        m = make_model("m", [], frame=[("forcing", "in", ["step", "ramp"])])
        assert is_valid(m, Scenario({"forcing": "ramp"}))
        assert not is_valid(m, Scenario({"forcing": "impulse"}))


class TestSelectModel:
    beams = [get_model("beam.eb"), get_model("beam.te")]

    def test_long_beam(self):
        assert select_model(self.beams, beam_scenario(10)).id == "beam.eb"

    def test_short_beam(self):
        assert select_model(self.beams, beam_scenario(1)).id == "beam.te"

    def test_no_valid_model(self):
        with pytest.raises(NoValidModel):
            select_model([get_model("beam.eb")], beam_scenario(20, ["shear-deflection"]))

    def test_empty_registry(self):
        with pytest.raises(PreconditionViolation):
            select_model([], Scenario())

    def test_single_valid_model_wins_regardless_of_cost(self):
        cheap = make_model("cheap", ["bending-deflection"], rank=1, frame=[("s", ">=", 10)])
        dear = make_model("dear", ["coulomb-friction"], rank=3, inputs=40)
        assert select_model([cheap, dear], Scenario({"s": 1})).id == "dear"

    def test_incomparable_broken_by_cost_then_id(self):
        a = make_model("b-model", ["bending-deflection"], rank=2, inputs=1)
        b = make_model("a-model", ["coulomb-friction"], rank=1, inputs=9)
        c = make_model("c-model", ["torque-limit"], rank=1, inputs=9)
        assert select_model([a, b, c], Scenario()).id == "a-model"

    def test_minimality_beats_cost(self):
        low = make_model("low", ["bending-deflection"], rank=3, inputs=30)
        high = make_model("high", ["bending-deflection", "shear-deflection"], rank=1, inputs=1)
        assert select_model([high, low], Scenario()).id == "low"

    @given(st.floats(0.1, 100), st.permutations(list(range(7))), st.sampled_from(["step", "ramp"]),
           st.floats(0.01, 10))
    @settings(max_examples=100)
    def test_valid_and_permutation_invariant(self, s, perm, forcing, zeta):
        scenario = Scenario({"slenderness": s, "zeta": zeta, "forcing": forcing})
        models = list(MODELS)
        chosen = select_model(models, scenario)
        assert is_valid(chosen, scenario)
        assert select_model([models[i] for i in perm], scenario) is chosen


class TestRegistry:
    def test_seven_models(self):
        assert sorted(REGISTRY) == [
            "beam.eb", "beam.te", "grade.dynamic", "grade.rigid", "grade.spring",
            "smd.heuristic", "smd.numeric",
        ]

    def test_duplicate_ids(self):
        with pytest.raises(ParameterError):
            check_registry([get_model("beam.eb"), get_model("beam.eb")])

    def test_extends_must_be_strict_subset(self):
        base = make_model("base", ["bending-deflection"])
        bad = make_model("bad", ["bending-deflection"], extends="base")
        with pytest.raises(ParameterError):
            check_registry([base, bad])

    def test_relation_tags_within_features(self):
        gb = GrayBoxSpec([InputGroup("x", 1, "")], [Relation("r", ("shear-deflection",))], [Output("y", "m")])
        with pytest.raises(ParameterError):
            ModelDescriptor("m", FeatureSet(["bending-deflection"]), gb, cost=CostProfile(1, 1))

    def test_cost_matches_arity(self):
        for model in MODELS:
            assert model.cost.input_count == model.gray_box.input_count


class TestRenderGrayBox:
    def test_te_relations_reference_both_tags(self):
        doc = json.loads(render_gray_box(get_model("beam.te"), "structured"))
        tags = {t for r in doc["relations"] for t in r["tags"]}
        assert {"bending-deflection", "shear-deflection"} <= tags

    def test_rigid_drivetrain_group(self):
        doc = json.loads(render_gray_box(get_model("grade.rigid"), "json"))
        assert {"label": "Drivetrain", "arity": 3} in [
            {"label": g["label"], "arity": g["arity"]} for g in doc["inputs"]
        ]

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.id)
    @pytest.mark.parametrize("fmt", ["text", "json"])
    def test_deterministic(self, model, fmt):
        assert render_gray_box(model, fmt) == render_gray_box(model, fmt)

    @pytest.mark.parametrize("model", MODELS, ids=lambda m: m.id)
    def test_structured_shape(self, model):
        doc = json.loads(render_gray_box(model, "json"))
        assert set(doc) == {"id", "features", "inputs", "relations", "outputs",
                            "validity_frame", "cost", "extends"}
        assert doc["features"] == sorted(doc["features"])
        assert all(set(g) == {"label", "arity", "description"} for g in doc["inputs"])
        assert all(set(r) == {"text", "tags"} for r in doc["relations"])
        assert all(set(o) == {"label", "units"} for o in doc["outputs"])
        assert all(set(p) == {"parameter", "relation", "threshold"} for p in doc["validity_frame"])
        assert set(doc["cost"]) == {"input_count", "compute_rank"}
        assert doc["extends"] is None or doc["extends"] in REGISTRY

    def test_text_mentions_frame(self):
        assert "slenderness >= 10" in render_gray_box(get_model("beam.eb"))

import pytest

from cv_schemes import (
    Fold,
    FoldPlan,
    Mode,
    SchemeSpec,
    make_plan,
    plan_to_frame,
    require_valid,
    scheme_from_dict,
    scheme_label,
    scheme_to_dict,
    selection_indices,
    validate_plan,
)
from errors import InfeasibleSchemeError, InvalidArgumentError


def test_loo_plan():
    plan = make_plan(SchemeSpec.loo(), 5)

    assert plan.K == 5
    assert plan.mode == Mode.POINTWISE
    assert plan.folds[1] == Fold(test=(2,), train=(1, 3, 4, 5))


def test_h_block_removes_halo():
    plan = make_plan(SchemeSpec.h_block(1), 6)

    assert plan.folds[2] == Fold(test=(3,), train=(1, 5, 6))
    assert plan.folds[0].train == (3, 4, 5, 6)


def test_kfold_contiguous_blocks_absorb_remainder_first():
    plan = make_plan(SchemeSpec.kfold(3), 10)

    assert [f.test for f in plan.folds] == [(1, 2, 3, 4), (5, 6, 7), (8, 9, 10)]
    assert plan.folds[1].train == (1, 2, 3, 4, 8, 9, 10)
    assert plan.mode == Mode.JOINT


def test_hv_block_tiles_and_halos():
    plan = make_plan(SchemeSpec.hv_block(1, 1), 9)

    assert [f.test for f in plan.folds] == [(1, 2, 3), (4, 5, 6), (7, 8, 9)]
    assert plan.folds[1].train == (1, 2, 8, 9)
    assert plan.folds[0].train == (5, 6, 7, 8, 9)


def test_hv_block_clips_last_tile():
    plan = make_plan(SchemeSpec.hv_block(0, 1), 7)

    assert [f.test for f in plan.folds] == [(1, 2, 3), (4, 5, 6), (7,)]


def test_lfo_trains_on_the_past_only():
    plan = make_plan(SchemeSpec.lfo(h=1, v=0, w=3), 6)

    assert [f.test for f in plan.folds] == [(4,), (5,), (6,)]
    assert [f.train for f in plan.folds] == [(1, 2), (1, 2, 3), (1, 2, 3, 4)]


def test_infeasible_schemes_report_fold():
    with pytest.raises(InfeasibleSchemeError) as info:
        make_plan(SchemeSpec.hv_block(5, 2), 5)
    assert info.value.fold == 1

    with pytest.raises(InfeasibleSchemeError):
        make_plan(SchemeSpec.lfo(0, 0, 6), 6)

    with pytest.raises(InfeasibleSchemeError) as info:
        make_plan(SchemeSpec.lfo(h=2, v=0, w=1), 5)
    assert info.value.fold == 1


def test_scheme_validation():
    with pytest.raises(InvalidArgumentError):
        SchemeSpec("bootstrap")
    with pytest.raises(InvalidArgumentError):
        SchemeSpec.kfold(1)
    with pytest.raises(InvalidArgumentError):
        SchemeSpec.hv_block(-1, 2)
    with pytest.raises(InvalidArgumentError):
        SchemeSpec.lfo(0, 0, 0)


def test_singleton_schemes_are_pointwise():
    assert SchemeSpec.loo().with_mode(Mode.JOINT).mode == Mode.POINTWISE
    assert SchemeSpec.kfold(5).with_mode("pointwise").mode == Mode.POINTWISE


def test_scheme_labels():
    assert scheme_label(SchemeSpec.loo()) == "loo/pointwise"
    assert scheme_label(SchemeSpec.hv_block(3, 3)) == "hv-block(3,3)/joint"
    assert scheme_label(SchemeSpec.lfo(1, 2, 10, "pointwise")) == "lfo(1,2,10)/pointwise"


def test_scheme_dict_conversion():
    lfo = SchemeSpec.lfo(1, 2, 10, Mode.POINTWISE)

    assert scheme_to_dict(lfo) == {"kind": "lfo", "mode": "pointwise", "h": 1, "v": 2, "w": 10}
    assert scheme_from_dict(scheme_to_dict(lfo)) == lfo
    assert scheme_from_dict({"kind": "kfold", "K": 5}) == SchemeSpec.kfold(5)
    with pytest.raises(InvalidArgumentError):
        scheme_from_dict({"kind": "kfold", "k": 5})
    with pytest.raises(InvalidArgumentError):
        scheme_from_dict({"mode": "joint"})


def test_validate_plan_finds_violations():
    plan = FoldPlan(T=4, folds=(Fold((1, 2), (2, 3)), Fold((4,), ())), mode=Mode.JOINT)

    problems = validate_plan(plan)

    assert "overlap in fold 1: [2]" in problems
    assert "empty train in fold 2" in problems
    with pytest.raises(InfeasibleSchemeError) as info:
        require_valid(plan)
    assert info.value.fold == 1


def test_generated_plans_are_valid():
    for scheme in (
        SchemeSpec.loo(),
        SchemeSpec.h_block(2),
        SchemeSpec.kfold(4),
        SchemeSpec.hv_block(2, 1),
        SchemeSpec.lfo(1, 1, 4),
    ):
        assert validate_plan(make_plan(scheme, 17)) == []


def test_selection_indices_and_frame():
    plan = make_plan(SchemeSpec.kfold(2), 4)

    assert selection_indices(plan.folds[0]) == ((3, 4), (1, 2))
    frame = plan_to_frame(plan)
    assert list(frame.columns) == ["fold", "role", "index"]
    assert len(frame) == 8
    assert frame.query("fold == 2 and role == 'test'")["index"].tolist() == [3, 4]

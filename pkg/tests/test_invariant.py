"""Tower construction and the chart-level Mahowald invariant driver."""

import json

import pytest

from mahowald.f2linalg import BitMatrix
from mahowald.gradedmod import Field
from mahowald.invariant import (
    DETECTION_TABLE,
    N_MAX_DEFAULT,
    STATUS_DEGENERATE,
    STATUS_EXCEEDS,
    STATUS_NO_COMPLETION,
    STATUS_OK,
    MahowaldQuery,
    Recipe,
    ResourceLimitError,
    TowerWindow,
    algebraic_mahowald,
    build_tower,
    evaluate_recipe,
    parse_class_name,
    pr_classes,
    resolve_cached,
    table_window,
    verify_table,
)
from mahowald.resolution import ExtMap


@pytest.fixture(scope="session")
def tower_C():
    return build_tower(Field.C, N_MAX_DEFAULT[Field.C], table_window(Field.C),
                       threads=4)


@pytest.fixture(scope="session")
def tower_H():
    return build_tower(Field.H, N_MAX_DEFAULT[Field.H], table_window(Field.H),
                       threads=4)


@pytest.fixture(scope="session")
def tower_R():
    # (3,4) is the per-query default window for h2, the widest query below
    return build_tower(Field.R, 6, TowerWindow(3, 4), threads=4)


# ------------------------------------------------------------------ registry


def test_parse_class_name():
    assert parse_class_name("h2") == Recipe("h2", (2,))
    assert parse_class_name("h2^3").factors == (2, 2, 2)
    assert parse_class_name("h0*h2").factors == (0, 2)
    # factor order is immaterial
    assert parse_class_name("h2*h0").factors == (0, 2)
    assert parse_class_name("h0^2*h2").factors == (0, 0, 2)
    assert parse_class_name("h0^0").is_unit()


def test_recipe_bidegrees():
    r = parse_class_name("h2^3")
    assert (r.s, r.t, r.stem) == (3, 12, 9)
    r = parse_class_name("h0^2*h2")
    assert (r.s, r.t, r.stem) == (3, 6, 3)
    assert parse_class_name("h0^0").stem == 0


@pytest.mark.parametrize("bad", ["h4", "g1", "h1^", "h-1", "", "h1**h2", "2"])
def test_parse_rejects_junk(bad):
    with pytest.raises(ValueError, match="registry"):
        parse_class_name(bad)


def test_evaluate_recipe_on_shifted_sphere(tower_C):
    # h1 on the S^{-2} chart sits at (1, 0); products are recomputed, and a
    # zero product is reported as such rather than silently dropped
    x = evaluate_recipe(parse_class_name("h1"), tower_C.sres[1], tower_C.base0)
    assert (x.s, x.t) == (1, 0) and not x.is_zero()
    z = evaluate_recipe(parse_class_name("h0*h1"), tower_C.sres[1],
                        tower_C.base0)
    assert z.is_zero()


def test_evaluate_recipe_rejects_multicell(tower_C):
    with pytest.raises(ValueError, match="one-cell"):
        evaluate_recipe(parse_class_name("h1"), tower_C.res[1], tower_C.base0)


# --------------------------------------------------------------------- tower


def test_tower_stage_modules(tower_C):
    x2 = tower_C.modules[2]
    assert x2.degrees[0] == -4 and x2.degrees[-1] == 2 * tower_C.top
    assert x2.truncation_degree == 2 * tower_C.top
    assert tower_C.t_max == 14 and tower_C.top == 7


def test_tower_ladder_collapses_to_cut(tower_C):
    # q_1 = id forces push-to-stage-1 == q_{N_max}; spot-check matrices
    nmax = tower_C.N_max
    for s, t in [(1, 0), (2, 2), (3, 10)]:
        assert tower_C.push_maps[1].matrix(s, t) == tower_C.q_maps[nmax].matrix(s, t)


def test_tower_restriction_kills_bottom_cell(tower_R):
    # the stage-3 bottom cell generates Ext^{0,-3}; X_2 has nothing there
    assert tower_R.res[3].ext_dim(0, -3) == 1
    assert tower_R.res[2].ext_dim(0, -3) == 0
    m = tower_R.r_maps[2].matrix(0, -3)
    assert m.nrows == 0 and m.ncols == 1


def test_build_tower_input_validation():
    with pytest.raises(ValueError, match="N_max"):
        build_tower(Field.R, 0, TowerWindow(2, 1))
    with pytest.raises(ValueError, match="truncates"):
        build_tower(Field.C, 2, TowerWindow(3, 5), top=1)
    with pytest.raises(ResourceLimitError):
        build_tower(Field.R, 200, TowerWindow(40, 400))


def test_resolve_cached_round_trip(tmp_path, tower_R):
    mod = tower_R.modules[1]
    cold = resolve_cached(mod, 3, 4, cache_dir=str(tmp_path))
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    warm = resolve_cached(mod, 3, 4, cache_dir=str(tmp_path))
    assert warm.to_json_dict() == cold.to_json_dict()
    # garbage in the cache is ignored with a warning, never an error
    files[0].write_text("{not json")
    with pytest.warns(UserWarning, match="ignoring cache"):
        redo = resolve_cached(mod, 3, 4, cache_dir=str(tmp_path))
    assert redo.to_json_dict() == cold.to_json_dict()


# --------------------------------------------------------------- pr families


def test_pr_family_mechanics(tower_C):
    fam = pr_classes(tower_C, "h1")
    assert fam.bidegree == (1, 0)
    # the cut chart is empty in this bidegree, so the placement condition
    # is vacuous and the completions are the full kernel of q
    assert fam.jprime.is_zero()
    assert not fam.empty and fam.particular.is_zero()
    assert fam.stages[1].is_zero()
    assert not fam.stages[2].is_zero()
    # nonzero push persists upward once it appears
    assert all(not fam.stages[n].is_zero() for n in range(2, tower_C.N_max + 1))
    assert fam.minimal_nonzero_stage() == 2


def test_pr_family_stage_classes(tower_C):
    fam = pr_classes(tower_C, "h1")
    assert [c.is_zero() for c in fam.stage_classes(tower_C, 1)] == [True]
    vals = fam.stage_classes(tower_C, 2)
    assert len(vals) == 1 and not vals[0].is_zero()


def test_pr_classes_window_guard(tower_R):
    with pytest.raises(ValueError, match="window"):
        pr_classes(tower_R, "h3")  # stem 7 >> stem_max 1
    with pytest.raises(ValueError, match="zero in sphere Ext"):
        pr_classes(tower_R, "h0*h1")


# -------------------------------------------------------------------- driver


def test_real_h0_detects_h1(tower_R):
    res = algebraic_mahowald(MahowaldQuery(Field.R, "h0"), tower=tower_R)
    assert res.status == STATUS_OK and res.N == 2
    assert res.contains("h1") and not res.contains("h0")
    assert res.indeterminacy_dim == 0 and len(res.coset_reps) == 1
    assert (res.stem, res.filtration) == (1, 2)
    assert res.interference == []


def test_complex_h1_detects_h2(tower_C):
    res = algebraic_mahowald(MahowaldQuery(Field.C, "h1"), tower=tower_C)
    assert res.status == STATUS_OK and res.N == 2
    assert res.contains("h2")
    assert not res.contains("h1^2")  # wrong bidegree is never a member
    assert (res.stem, res.filtration) == (3, 4)


FROZEN_EXTRA = [
    # classical squaring values the driver reproduces beyond the main tables
    (Field.R, "h1", 3),
    (Field.R, "h2", 5),
    (Field.R, "h1^2", 5),
    (Field.R, "h0^2", 3),
    (Field.R, "h0^3", 4),
]


@pytest.mark.parametrize("K,alpha,n", FROZEN_EXTRA)
def test_frozen_extra_stages(tower_R, K, alpha, n):
    # interference is not asserted here: unlike the headline rows, some of
    # these sit one page-turn away from other chart classes (h1 vs h0^3)
    res = algebraic_mahowald(MahowaldQuery(K, alpha), tower=tower_R)
    assert res.status == STATUS_OK and res.N == n
    assert len(res.coset_reps) == 1 and res.indeterminacy_dim == 0


def test_complex_h3_lands_on_next_hopf_spot(tower_C):
    # bidegree (1,6) on S^{-10} is (1,16) on the sphere: the unique class
    # one Hopf step up, outside the h0..h3 registry but pinned by position
    res = algebraic_mahowald(MahowaldQuery(Field.C, "h3"), tower=tower_C)
    assert res.status == STATUS_OK and res.N == 5
    assert res.tower.sres[5].ext_dim(1, 6) == 1
    assert len(res.coset_reps) == 1 and not res.coset_reps[0].is_zero()
    assert res.stem == 7 + 2 * 4


def test_degenerate_unit(tower_C):
    res = algebraic_mahowald(MahowaldQuery(Field.C, "h0^0"), tower=tower_C)
    assert res.status == STATUS_DEGENERATE
    assert res.N is None and res.stem is None and res.filtration is None
    assert not res.contains("h0^0")


def test_exceeds_nmax():
    res = algebraic_mahowald(MahowaldQuery(Field.C, "h1", N_max=1))
    assert res.status == STATUS_EXCEEDS and res.N is None
    assert res.coset_reps == [] and res.pushed_values == []


def test_no_completion_when_placement_unsolvable():
    # force j'(alpha) outside the image of q by zeroing the q matrix at the
    # query bidegree; the empty completion set is distinct from a zero push
    tower = build_tower(Field.C, 2, TowerWindow(3, 1))
    fam = pr_classes(tower, "h0")
    assert not fam.jprime.is_zero()  # stage 1 alone would detect h0
    s, t = fam.bidegree
    q = tower.q_maps[2]
    mats = dict(q._mats)
    mats[(s, t)] = BitMatrix.zeros(q.matrix(s, t).nrows, q.matrix(s, t).ncols)
    tower.q_maps[2] = ExtMap(q.source, q.target, mats, q.s_max, q.t_max)
    res = algebraic_mahowald(MahowaldQuery(Field.C, "h0"), tower=tower)
    assert res.status == STATUS_NO_COMPLETION and res.N is None


def test_no_completion_when_bottom_chart_misses():
    # zeroing j at the detection bidegree leaves a nonzero pushed family
    # that no sphere class maps onto: stage is kept, coset is empty
    tower = build_tower(Field.R, 3, TowerWindow(3, 1))
    base = algebraic_mahowald(MahowaldQuery(Field.R, "h0"), tower=tower)
    assert base.N == 2
    s, t = base.bidegree
    j = tower.j_maps[2]
    mats = dict(j._mats)
    mats[(s, t)] = BitMatrix.zeros(j.matrix(s, t).nrows, j.matrix(s, t).ncols)
    tower.j_maps[2] = ExtMap(j.source, j.target, mats, j.s_max, j.t_max)
    res = algebraic_mahowald(MahowaldQuery(Field.R, "h0"), tower=tower)
    assert res.status == STATUS_NO_COMPLETION and res.N == 2
    assert res.coset_reps == []


def test_minimality_is_two_sided(tower_C):
    # the reported stage has a nonzero push AND the stage below does not
    for alpha, n in [("h1", 2), ("h2", 3), ("h1^2", 3)]:
        fam = pr_classes(tower_C, alpha)
        assert fam.minimal_nonzero_stage() == n
        assert fam.stages[n - 1].is_zero()
        assert not fam.stages[n].is_zero()


def test_result_json_shape(tower_C):
    res = algebraic_mahowald(MahowaldQuery(Field.C, "h1"), tower=tower_C)
    d = res.to_json_dict()
    assert list(d)[:10] == [
        "K", "alpha", "N", "coset", "indeterminacy_dim", "interference",
        "window", "status", "filtration", "stem",
    ]
    assert d["K"] == "C" and d["alpha"] == "h1" and d["N"] == 2
    assert d["coset"][0]["stem"] == 3
    assert d["window"]["bidegree"] == [1, 0]
    json.dumps(d)  # must be serializable as-is


# --------------------------------------------------------- detection tables


def test_detection_table_complex(tower_C):
    rep = verify_table(Field.C, tower=tower_C)
    assert [r["N"] for r in rep["rows"]] == [2, 3, 3, 4, 5, 7]
    assert rep["all_pass"], [r for r in rep["rows"] if not r["pass"]]


def test_detection_table_quaternionic(tower_H):
    rep = verify_table(Field.H, tower=tower_H)
    assert [r["N"] for r in rep["rows"]] == [2, 2, 2, 3, 4]
    assert rep["all_pass"], [r for r in rep["rows"] if not r["pass"]]


def test_detection_table_real(tower_R):
    rep = verify_table(Field.R, tower=tower_R)
    assert rep["all_pass"] and rep["rows"][0]["N"] == 2


def test_table_rows_have_empty_interference(tower_C, tower_H):
    for K, tower in [(Field.C, tower_C), (Field.H, tower_H)]:
        for alpha, _, _ in DETECTION_TABLE[K]:
            res = algebraic_mahowald(MahowaldQuery(K, alpha), tower=tower)
            assert res.interference == [], (K, alpha)


def test_quaternionic_h0_multiples_share_stage(tower_H):
    # h0-multiplication is visible in the invariant: all three land at N=2
    # and the cosets are h0-multiples of each other on the S^{-8} chart
    outs = {}
    for alpha in ["h2", "h0*h2", "h0^2*h2"]:
        res = algebraic_mahowald(MahowaldQuery(Field.H, alpha), tower=tower_H)
        assert res.N == 2
        outs[alpha] = res
    assert outs["h0*h2"].contains("h0*h3")
    assert not outs["h0*h2"].contains("h3")

import effalg


def rat(v):
    if isinstance(v, dict):
        return float(v["num"]) / float(v["den"])
    return float(v)


def test_validate_and_classify():
    diamond = effalg.fixture("diamond")
    rep = effalg.validate(diamond)
    assert rep["valid"] is True
    assert rep["kind"] == "effect-algebra"

    cls = effalg.classify(diamond)
    assert cls["lattice"] and cls["orthomodular"] and cls["mv_effect_algebra"]
    assert len(cls["state_space"]["vertices"]) == 2

    mv = effalg.validate(effalg.fixture("luk3"))
    assert mv["valid"] is True and mv["kind"] == "mv-algebra"


def test_broken_table_reports_axiom():
    broken = effalg.fixture("diamond")
    broken["sum"][2][1] = 2  # breaks commutativity of the partial sum
    rep = effalg.validate(broken)
    assert rep["valid"] is False
    assert any(v["axiom"] == "EA1" for v in rep["violations"])


def test_enumerate_check_and_quotient():
    diamond = effalg.fixture("diamond")
    ops = effalg.enumerate_state_operators(diamond)
    assert len(ops) == 3
    assert [op["tau"] for op in ops] == [[0, 0, 3, 3], [0, 1, 2, 3], [0, 3, 0, 3]]
    assert sum(op["faithful"] for op in ops) == 1

    chk = effalg.check_state_operator(
        effalg.fixture("luk3_squared_ea"), effalg.fixture("first_coordinate")
    )
    assert chk["state_operator"] is True
    assert chk["strong"] is True
    assert chk["faithful"] is False
    assert chk["kernel"] == [0, 1, 2]

    q = effalg.quotient(diamond, {"tau": [0, 0, 3, 3]})
    assert q["algebra"]["n"] == 2
    assert q["class_of"] == [0, 0, 1, 1]
    assert q["tau"] == [0, 1]


def test_pinching_and_gaps():
    m = effalg.pinching(effalg.fixture("pinching2"))
    a = {"dim": 2, "re": [[0.5, 0.3], [0.3, 0.5]]}
    img = effalg.apply_map(m, a)
    assert abs(img["re"][0][0] - 0.5) < 1e-9
    assert abs(img["re"][0][1]) < 1e-9
    gaps = effalg.square_gaps(m, a)
    assert abs(gaps["lhs_gap"]) < 1e-9
    assert abs(gaps["rhs_gap"] - 0.09) < 1e-9
    assert effalg.check_map(m)["ok"] is True


def test_corner_decomposition():
    corner = {"dim": 2, "matrix": [[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}
    assert effalg.is_ce(corner)["conditional_expectation"] is True
    sup = effalg.support(corner)
    assert abs(sup["re"][0][0] - 1.0) < 1e-8
    assert abs(sup["re"][1][1]) < 1e-8
    dec = effalg.decompose(corner)
    assert dec["domain_dimension"] == 2
    assert dec["recomposition_residual"] < 1e-8


def test_strong_versus_ce():
    assert effalg.is_strong(effalg.fixture("collapse2"))["strong"] is True
    rep = effalg.is_strong(effalg.fixture("straddle3"))
    assert rep["strong"] is False
    assert [rat(x) for x in rep["witness"]["min"]] == [0.0, 0.0, 0.5]
    assert effalg.is_ce(effalg.fixture("straddle3"))["conditional_expectation"] is False


def test_conditional_average_with_null_blocks():
    payload = dict(effalg.fixture("halfnull4"))
    payload["values"] = [1, 0, 1, 1]
    rep = effalg.mvce(payload)
    assert rep["identity"] is True
    assert [rat(x) for x in rep["expectation"]] == [0.5, 0.5, 0.0, 0.0]


def test_reduced_suite_passes():
    rep = effalg.run_suite(seed=42, samples=40, mutations=10, composites=5)
    assert rep["pass"] is True
    assert len(rep["results"]) == 13
    assert all(r["status"] == "pass" for r in rep["results"])

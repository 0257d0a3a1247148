import pytest

import hindsum


def test_fs_sums_of_powers_fill_the_range():
    assert hindsum.fs_sums([1, 2, 4, 8], bound=16) == list(range(1, 16))


def test_frechet_membership_verdicts():
    # min_tail 2 keeps the base filter honest: a lone top generator is not
    # allowed to settle a query by itself
    f = hindsum.frechet(hindsum.Horizon(bound=4096, min_tail=2))
    evens = list(range(2, 4096, 2))
    v = hindsum.member(f, evens)
    assert v.polarity == hindsum.Verdict.UNDECIDED
    cofinite = list(range(10, 4096))
    assert hindsum.member(f, cofinite).polarity == hindsum.Verdict.IN
    assert hindsum.member(f, []).polarity == hindsum.Verdict.OUT


def test_filter_construction_validates():
    h = hindsum.Horizon(bound=64)
    f = hindsum.Filter([2, 4, 6], horizon=h)
    assert f.generators == [2, 4, 6]
    with pytest.raises(hindsum.EngineError):
        hindsum.Filter([4, 2], horizon=h)


def test_solver_finds_even_triple():
    parity = hindsum.Coloring.residue(2, bound=64)
    r = hindsum.solve_ht(parity, list(range(1, 21)), 3, horizon=64)
    assert r["status"] == "found"
    assert r["values"] == [2, 4, 6]
    assert r["colors"] == [0]


def test_extract_tail_and_monotone():
    f = hindsum.Filter([1, 10, 100, 1000], horizon=hindsum.Horizon(bound=4096))
    m, tail = hindsum.extract_tail(f, list(range(50, 4096)))
    assert m == 2
    assert tail == [100, 1000]
    assert hindsum.extract_tail(f, []) is None
    assert hindsum.hat_monotone([5, 1, 7]) == [5, 6, 7]


def test_run_program_round_trip():
    text = "t0(j) = { n : n % 2 == j }\ngoal = U(t0(0))\n"
    doc = hindsum.run_program(text)
    assert doc["goal"] == {"kind": "verdict", "value": "in"}
    assert doc["final"]["generators"] == [2, 4, 6, 8]
    assert all(doc["reports"][k]["ok"] for k in ("pnu", "dta", "stability"))

    ss = hindsum.run_program(text, ss=True)
    assert [t["entry"] for t in ss["tails"]] == ["t0[j=0]"]
    assert ss["final"]["generators"] == [2, 4, 6, 8, 10]

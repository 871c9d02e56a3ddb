import pytest

from bitrades.core import intercalate
from bitrades.perm import Permutation
from bitrades.tau import (
    GenusError,
    TauRepresentation,
    compute_beta,
    compute_tau,
    genus,
    is_separated,
    tau_orbits,
    verify_Q_properties,
)
from oracles import genus_naive, group_bitrades, random_bitrades, tau_naive


def test_intercalate_taus():
    rep = compute_tau(intercalate())
    assert [t.to_cycle_string() for t in rep.taus] == ["(0,1)(2,3)", "(0,2)(1,3)", "(0,3)(1,2)"]


def test_c3c3_taus_match_printed_cycles_with_offset(c3c3):
    rep = compute_tau(c3c3)
    assert rep.tau1.to_cycle_string(offset=1) == "(1,3,2)(4,6,5)(7,9,8)"
    assert rep.tau2.to_cycle_string(offset=1) == "(1,4,7)(2,5,8)(3,6,9)"


def test_remark_tau1_cycles(remark5):
    # on the first two rows: (a,b,c,d,e)(f,i,j)(g,h) with a..j the entries 0..9
    rep = compute_tau(remark5)
    cycles = [c for c in rep.tau1.cycles() if max(c) < 10]
    assert sorted(cycles) == [(0, 1, 2, 3, 4), (5, 8, 9), (6, 7)]


def test_betas_change_one_coordinate(example1):
    circ, star = example1.t_circ.entries, example1.t_star.entries
    for r in (1, 2, 3):
        beta = compute_beta(example1, r)
        assert sorted(beta) == list(range(len(star)))
        for k, x in enumerate(beta):
            diff = [i for i in range(3) if circ[x][i] != star[k][i]]
            assert diff == [r - 1]


def test_beta_rejects_bad_coordinate(example1):
    with pytest.raises(ValueError):
        compute_beta(example1, 4)


@pytest.mark.parametrize("name", ["example1", "example2", "c3c3", "remark5", "inter"])
def test_tau_against_oracle(name, request):
    b = request.getfixturevalue(name)
    assert [list(t.images) for t in compute_tau(b).taus] == tau_naive(b)


def test_tau_against_oracle_on_group_bitrades():
    for _, _, b in group_bitrades(10):
        assert [list(t.images) for t in compute_tau(b).taus] == tau_naive(b)


def test_q_properties_detect_each_failure():
    n = 4
    ident = Permutation.identity(n)
    a = Permutation.parse("(0,1)(2,3)", n)
    q = verify_Q_properties(TauRepresentation.from_perms(a, a, a))
    assert q.q3 is not None and q.q1 is not None and q.q2 is None
    q = verify_Q_properties(TauRepresentation.from_perms(ident, a, a))
    assert q.q2 == (1, 0)
    assert verify_Q_properties(compute_tau(intercalate())).ok


def test_q_properties_on_random_isotopes():
    for _, b in random_bitrades(60, seed=11):
        assert verify_Q_properties(compute_tau(b)).ok


def test_separation_values(example1, example2, c3c3, remark5):
    assert is_separated(example1).separated
    assert is_separated(example1).cycle_totals == (3, 3, 4)
    assert is_separated(example2).separated
    assert is_separated(c3c3).separated
    rep = is_separated(remark5)
    assert not rep.separated
    assert rep.cycle_totals == (9, 6, 6)
    assert any(v > 1 for v in rep.row_counts.values())


def test_genus_values(example1, example2, c3c3, inter):
    assert genus(example1) == 0
    assert genus(example2) == 1
    assert genus(c3c3) == 1
    assert genus(inter) == 0
    for b in (example1, example2, c3c3, inter):
        assert genus(b) == genus_naive(b)


def test_genus_refused(remark5, two_inter):
    with pytest.raises(GenusError, match="not separated"):
        genus(remark5)
    with pytest.raises(GenusError) as exc:
        genus(two_inter)
    assert exc.value.orbit_genera == [0, 0]
    assert len(tau_orbits(compute_tau(two_inter))) == 2


def test_genus_matches_euler_formula_on_group_bitrades():
    for _, _, b in group_bitrades(12, require_g3=True):
        if is_separated(b).separated:
            assert genus(b) == genus_naive(b) >= 0


def test_to_json_shape(inter):
    js = compute_tau(inter).to_json()
    assert js["m"] == 4 and js["tau1"] == "(0,1)(2,3)"
    assert verify_Q_properties(compute_tau(inter)).to_json() == {"q1": "ok", "q2": "ok", "q3": "ok"}

import random

import pytest

from ocasync import corpus
from ocasync.errors import BudgetExceededError, StepCapExceededError
from ocasync.formula import TRUE, atom, au, eu, parse_formula, ua, ue
from ocasync.mc import (
    Kripke, KripkeBuilder, check_oca, check_ua_on_kripke, check_ue_on_kripke,
    counter_class, label_ctl, mask_of, nodes_of, unfold_kripke,
)
from ocasync.oca import Configuration, successors
from ocasync.periodicity import TpPair
from conftest import random_total_oca

COUNTDOWN = corpus.load("countdown")


def label_tree(kripke, f):
    """Bottom-up labeling helper over frozenset node sets."""
    from ocasync.formula import Kind, subformulas

    sat = {}
    for g in subformulas(f):
        if g.kind in (Kind.UA, Kind.UE):
            fn = check_ua_on_kripke if g.kind is Kind.UA else check_ue_on_kripke
            s1 = mask_of(sat[g.children[0]])
            s2 = mask_of(sat[g.children[1]])
            sat[g] = frozenset(
                node for node in range(kripke.n)
                if fn(kripke, node, s1, s2, 500).holds
            )
        else:
            sat[g] = label_ctl(kripke, g, sat)
    return sat


class TestUnfold:
    def test_size_formula(self):
        two = corpus.load("asym-fork")
        assert unfold_kripke(two, 1, 1).n == two.n_states * 2
        assert unfold_kripke(COUNTDOWN, 3, 2).n == 10

    def test_wraparound_identifies_congruent_values(self):
        inc = corpus.load("increment-loop")
        k = unfold_kripke(inc, 2, 3)
        # value 4 steps to 5 = t + p, which is congruent to 2 in the window
        assert counter_class(5, 2, 3) == 2
        assert k.successors[4] == (2,)

    def test_labels_inherited_from_states(self):
        k = unfold_kripke(COUNTDOWN, 2, 2)
        width = 4
        for node in range(k.n):
            state, c = k.provenance[node]
            assert k.labels[node] == COUNTDOWN.labels[state]
            assert node == state * width + c

    def test_edges_commute_with_classing_off_seam(self, rng):
        # for every represented value, stepping then classing equals classing
        # then stepping -- except from the bottom seam class, where a single
        # node cannot imitate both its smallest member and the high ones
        for name in corpus.names():
            oca = corpus.load(name)
            for (t, p) in [(1, 1), (2, 3), (4, 2)]:
                k = unfold_kripke(oca, t, p)
                width = t + p
                for s in range(oca.n_states):
                    for v in range(t + 3 * p + 1):
                        if v >= width and v % p == t % p:
                            continue  # bottom seam
                        node = s * width + counter_class(v, t, p)
                        got = set(k.successors[node])
                        expected = {
                            d.state * width + counter_class(d.counter, t, p)
                            for d in successors(oca, Configuration(s, v))
                        }
                        assert got == expected, (name, t, p, s, v)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            unfold_kripke(COUNTDOWN, 0, 0)
        with pytest.raises(ValueError):
            unfold_kripke(COUNTDOWN, -1, 2)


class TestLabelCtl:
    def test_ex_true_is_everything(self):
        k, _ = corpus.tree_synchronized()
        from ocasync.formula import ex

        sat = label_tree(k, ex(TRUE))
        assert sat[ex(TRUE)] == frozenset(range(k.n))

    def test_au_on_both_trees(self):
        f = parse_formula("A true U black")
        for builder in (corpus.tree_synchronized, corpus.tree_staggered):
            k, root = builder()
            assert root in label_tree(k, f)[f]

    def test_eu_separates_the_trees(self):
        f = parse_formula("E white U stripes")
        k, root = corpus.tree_synchronized()
        assert root in label_tree(k, f)[f]
        k2, root2 = corpus.tree_staggered()
        assert root2 not in label_tree(k2, f)[f]

    def test_booleans(self):
        k, _ = corpus.tree_synchronized()
        f = parse_formula("white & !stripes")
        sat = label_tree(k, f)[f]
        for node in range(k.n):
            expect = "white" in k.labels[node] and "stripes" not in k.labels[node]
            assert (node in sat) == expect


class TestSyncChecks:
    def test_synchronized_tree_has_uniform_bound_three(self):
        k, root = corpus.tree_synchronized()
        sat = label_tree(k, TRUE)
        res = check_ua_on_kripke(k, root, k.full_mask, k.atom_mask("black"))
        assert res.holds and res.witness_k == 3

    def test_staggered_tree_never_synchronizes(self):
        k, root = corpus.tree_staggered()
        res = check_ua_on_kripke(k, root, k.full_mask, k.atom_mask("black"))
        assert not res.holds

    def test_init_in_goal_gives_bound_zero(self):
        k, root = corpus.tree_synchronized()
        everything = k.full_mask
        res = check_ua_on_kripke(k, root, everything, everything)
        assert res.holds and res.witness_k == 0
        res2 = check_ue_on_kripke(k, root, everything, everything, 50)
        assert res2.holds and res2.witness_k == 0

    def test_staggered_tree_level_witnesses_at_six(self):
        k, root = corpus.tree_staggered()
        res = check_ue_on_kripke(k, root, k.atom_mask("white"), k.atom_mask("stripes"), 200)
        assert res.holds and res.witness_k == 6

    def test_empty_goal_is_false_for_ue(self):
        k, root = corpus.tree_staggered()
        res = check_ue_on_kripke(k, root, k.full_mask, 0, 200)
        assert not res.holds

    def test_step_cap_raises_undecided(self):
        k, root = corpus.tree_staggered()
        with pytest.raises(StepCapExceededError) as exc:
            check_ue_on_kripke(k, root, k.atom_mask("white"), k.atom_mask("stripes"), 3)
        assert exc.value.partial_horizon == 3

    def test_ua_termination_without_cap_on_fuzzed_structures(self, rng):
        for _ in range(60):
            n = rng.randint(1, 10)
            succ = tuple(
                tuple(sorted(rng.sample(range(n), rng.randint(1, min(3, n)))))
                for _ in range(n)
            )
            labels = tuple(
                frozenset(a for a in ("p",) if rng.random() < 0.4) for _ in range(n)
            )
            k = Kripke(succ, labels)
            res = check_ua_on_kripke(k, rng.randrange(n), k.full_mask, k.atom_mask("p"))
            assert res.iterations <= 2**n + 1

    def test_sync_implies_plain_until_on_trees(self):
        for builder in (corpus.tree_synchronized, corpus.tree_staggered):
            k, _ = builder()
            for a, b in [(TRUE, atom("black")), (atom("white"), atom("stripes"))]:
                sat = label_tree(k, au(a, b))
                sat.update(label_tree(k, ua(a, b)))
                sat.update(label_tree(k, eu(a, b)))
                sat.update(label_tree(k, ue(a, b)))
                assert sat[ua(a, b)] <= sat[au(a, b)]
                assert sat[eu(a, b)] <= sat[ue(a, b)]


class TestCheckOca:
    def test_countdown_synchronized_eventually(self):
        res = check_oca(COUNTDOWN, parse_formula("FA p"), Configuration(0, 2))
        assert res.holds and res.witness_k == 3
        assert res.caveats  # empirical mode always carries one

    def test_true_yields_full_satisfaction_sets(self):
        res = check_oca(COUNTDOWN, TRUE, Configuration(0, 0))
        assert res.holds
        for u in res.per_state.values():
            assert all(u.member(v) for v in range(40))

    def test_asymmetric_fork_separates_until_flavors(self):
        af = corpus.load("asym-fork")
        init = Configuration(0, 1)
        assert check_oca(af, parse_formula("A true U p"), init).holds
        assert not check_oca(af, parse_formula("FA p"), init).holds

    def test_supplied_mode_uses_given_pair(self):
        res = check_oca(
            COUNTDOWN, parse_formula("EX p"), Configuration(0, 1),
            "supplied", supplied=TpPair(1, 1),
        )
        assert not res.holds
        assert res.constants_used["t"] == 1 and res.constants_used["p"] == 1
        res0 = check_oca(
            COUNTDOWN, parse_formula("EX p"), Configuration(0, 0),
            "supplied", supplied=TpPair(1, 1),
        )
        assert res0.holds

    def test_paper_mode_ctl_formula(self):
        res = check_oca(COUNTDOWN, parse_formula("EX p"), Configuration(0, 0), "paper")
        assert res.holds
        assert res.constants_used["p"] == 2  # K = lcm(1,2)

    def test_paper_mode_ua_exceeds_any_reasonable_budget(self):
        af = corpus.load("asym-fork")
        with pytest.raises(BudgetExceededError) as exc:
            check_oca(af, parse_formula("FA p"), Configuration(0, 0), "paper")
        assert exc.value.required is not None

    def test_paper_mode_rejects_ue(self):
        af = corpus.load("asym-fork")
        with pytest.raises(ValueError):
            check_oca(af, parse_formula("true UE p"), Configuration(0, 0), "paper")

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            check_oca(COUNTDOWN, TRUE, Configuration(0, 0), "psychic")

    def test_invalid_automaton_rejected(self):
        from ocasync.oca import Oca, Transition

        broken = Oca(("s",), frozenset({"p"}), (frozenset(),),
                     (Transition(0, "=0", 0, 0),))
        with pytest.raises(ValueError):
            check_oca(broken, TRUE, Configuration(0, 0))

    def test_unbound_atoms_rejected(self):
        with pytest.raises(ValueError):
            check_oca(COUNTDOWN, atom("nosuch"), Configuration(0, 0))

    def test_deterministic_results(self):
        a = check_oca(COUNTDOWN, parse_formula("FA p"), Configuration(0, 2))
        b = check_oca(COUNTDOWN, parse_formula("FA p"), Configuration(0, 2))
        assert a.to_json() == b.to_json()

    def test_per_state_sets_match_init_verdicts(self):
        fork = corpus.load("fork")
        f = parse_formula("E true U p")
        res = check_oca(fork, f, Configuration(0, 0))
        for v in range(10):
            again = check_oca(fork, f, Configuration(0, v))
            assert again.holds == res.per_state["s"].member(v)


class TestWitnessReporting:
    def test_wrapped_initial_counter_suppresses_witness(self):
        res = check_oca(COUNTDOWN, parse_formula("FA p"), Configuration(0, 9))
        assert res.holds
        assert res.witness_k is None
        assert any("wrapped" in c for c in res.caveats)

    def test_exact_initial_counters_report_true_bounds(self):
        # within the exact window the quotient's levels track the real ones
        for v in (0, 1, 2):
            res = check_oca(COUNTDOWN, parse_formula("FA p"), Configuration(0, v))
            assert res.holds and res.witness_k == v + 1

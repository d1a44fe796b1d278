"""End-to-end behaviour on the reference knowledge bases.

Tests cover:
- Situs inversus: left hearts by default, overriding for SI, inherited noses
- Nixon diamond: the inconsistent prototype and both repairs
- Military service: exceptions for minors
- Ranked birds and penguins
- Linearization independence across the whole corpus
"""

from __future__ import annotations

import pytest

from dln.constants import PRIORITY_RANK
from dln.models import Atomic, DefeasibleCI, Exists, Normal, NormalitySet, lower_axiom, signature
from dln.schemas.options import ReasoningOptions
from dln.services.defeasible import all_linearizations
from dln.services.parser import parse_queries
from tests.conftest import load_kb, q

NOSE_DI = DefeasibleCI(Atomic("Human"), Exists("has_organ", Atomic("Nose")))


class TestSitusInversus:
    def test_normal_humans_have_left_hearts(self, reasoner, situs_inversus):
        assert reasoner.entails(situs_inversus, q("N(Human) <= some has_heart.LH"))

    def test_situs_inversus_people_are_not_normal_humans(self, reasoner, situs_inversus):
        assert reasoner.entails(situs_inversus, q("SI <= not N(Human)"))

    def test_normal_situs_inversus_people(self, reasoner, situs_inversus):
        entailed, result = reasoner.n_entails(situs_inversus, q("N(SI) <= SI"))
        assert entailed
        assert result.sigma == NormalitySet.of([Normal(Atomic("SI"))])
        assert [str(t.di) for t, _ in result.overridden] == ["Human <~ some has_heart.LH"]
        assert reasoner.entails(situs_inversus, q("N(SI) <= some has_heart.RH"))
        assert not reasoner.entails(situs_inversus, q("N(SI) <= some has_heart.LH"))

    def test_check_count(self, reasoner, classical, situs_inversus):
        prio = reasoner.priority_relation(situs_inversus)
        classical.reset_stats()
        reasoner.build_kb_sigma(situs_inversus, NormalitySet.of([Normal(Atomic("Human"))]), prio)
        assert classical.stats().consistency_checks == 1

    def test_closed_under_classical_consequence(self, reasoner, situs_inversus):
        premises = [q("SI <= some has_heart.RH"), q("N(Human) <= some has_heart.LH")]
        assert all(reasoner.entails(situs_inversus, p) for p in premises)
        assert reasoner.entails(situs_inversus, q("SI <= not N(Human)"))

    def test_noses_are_inherited(self, reasoner, situs_inversus):
        kb = situs_inversus.with_axioms(NOSE_DI)
        assert reasoner.entails(kb, q("N(Human) <= some has_organ.Nose"))
        assert reasoner.entails(kb, q("N(SI) <= some has_organ.Nose"))
        assert not reasoner.entails(kb, q("N(SI) <= some has_heart.LH"))

    def test_query_file(self, reasoner, situs_inversus, data_dir):
        queries = parse_queries((data_dir / "queries.txt").read_text())
        assert [reasoner.entails(situs_inversus, query) for query in queries] == [True, True, False]


class TestNixonDiamond:
    def test_republican_quakers_are_an_inconsistent_prototype(self, reasoner, nixon):
        assert reasoner.entails(nixon, q("N(RepQuaker) <= Bot"))
        report = reasoner.inconsistent_prototypes(nixon)
        assert report.inconsistent == (Normal(Atomic("RepQuaker")),)
        assert {Normal(Atomic("Quaker")), Normal(Atomic("Republican"))} <= set(report.consistent)

    def test_neither_default_is_overridden(self, reasoner, nixon):
        _, result = reasoner.n_entails(nixon, q("N(RepQuaker) <= Bot"))
        assert result.overridden == ()
        assert len(result.selected) == 2

    @pytest.mark.parametrize(
        ("repair", "expected", "rejected"),
        [
            ("Pacifist", "N(RepQuaker) <= Pacifist", "N(RepQuaker) <= not Pacifist"),
            ("not Pacifist", "N(RepQuaker) <= not Pacifist", "N(RepQuaker) <= Pacifist"),
        ],
    )
    def test_repairs(self, reasoner, nixon, repair, expected, rejected):
        kb = nixon.with_axioms(DefeasibleCI(Atomic("RepQuaker"), q(f"A <= {repair}").rhs))
        assert reasoner.inconsistent_prototypes(kb).inconsistent == ()
        assert reasoner.entails(kb, q(expected))
        assert not reasoner.entails(kb, q(rejected))

    def test_plain_quakers_stay_pacifists(self, reasoner, nixon):
        assert reasoner.entails(nixon, q("N(Quaker) <= Pacifist"))
        assert reasoner.entails(nixon, q("N(Republican) <= not Pacifist"))


class TestMilitaryService:
    def test_male_citizens_are_reservists(self, reasoner, reservist):
        assert reasoner.entails(reservist, q("N(MaleCitizen) <= HasMilitaryTraining"))
        assert reasoner.entails(reservist, q("N(MaleCitizen) <= Reservist"))

    def test_minors_are_not(self, reasoner, reservist):
        entailed, result = reasoner.n_entails(reservist, q("N(MinorMaleCitizen) <= Reservist"))
        assert not entailed
        assert [str(t.di) for t, _ in result.overridden] == ["MaleCitizen <~ HasMilitaryTraining"]

    def test_linearization(self, reasoner, reservist):
        _, result = reasoner.n_entails(reservist, q("N(MaleCitizen) <= Reservist"))
        assert [str(d) for d in result.linearization] == [
            "MaleCitizen and HasMilitaryTraining <~ Reservist",
            "MaleCitizen <~ HasMilitaryTraining",
        ]


class TestRankedDefaults:
    def test_penguins_do_not_fly(self, reasoner, ranked):
        options = ReasoningOptions(priority_mode=PRIORITY_RANK)
        assert reasoner.entails(ranked, q("N(Penguin) <= not Flies"), options)
        assert not reasoner.entails(ranked, q("N(Penguin) <= Flies"), options)

    def test_birds_fly(self, reasoner, ranked):
        options = ReasoningOptions(priority_mode=PRIORITY_RANK)
        assert reasoner.entails(ranked, q("N(Bird) <= Flies"), options)


CORPUS = ["situs_inversus.kb", "nixon.kb", "reservist.kb", "ranked.kb"]


class TestLinearizationIndependence:
    """Incomparable DIs never see each other, so tie breaking is immaterial."""

    @pytest.mark.parametrize("name", CORPUS + ["nose"])
    def test_same_partition_for_every_order(self, reasoner, name):
        kb = load_kb("situs_inversus.kb").with_axioms(NOSE_DI) if name == "nose" else load_kb(name)
        prio = reasoner.priority_relation(kb)
        sigma = NormalitySet.of([Normal(Atomic(c)) for c in signature(kb).concepts])
        orders = list(all_linearizations(kb, prio))
        assert orders
        results = [reasoner.build_kb_sigma(kb, sigma, prio, order) for order in orders]
        assert len({r.partition() for r in results}) == 1
        query = lower_axiom(q(f"N({sorted(signature(kb).concepts)[0]}) <= Bot"))
        answers = {reasoner.classical.entails(r.kb_sigma, query) for r in results}
        assert len(answers) == 1

    @pytest.mark.parametrize("name", CORPUS)
    def test_partition_covers_every_translated_di(self, reasoner, name):
        kb = load_kb(name)
        sigma = NormalitySet.of([Normal(Atomic(c)) for c in signature(kb).concepts])
        result = reasoner.build_kb_sigma(kb, sigma, reasoner.priority_relation(kb))
        kept, dropped = result.partition()
        assert not kept & dropped
        assert len(kept) + len(dropped) == len(kb.defeasible) * len(sigma)

    @pytest.mark.parametrize("name", CORPUS)
    def test_strong_part_is_entailed(self, reasoner, name):
        kb = load_kb(name)
        assert all(reasoner.entails(kb, axiom) for axiom in kb.strong)

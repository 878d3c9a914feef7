#!/usr/bin/env python3
"""
Unit tests for harness module.

Run with: pytest test_harness.py -v
"""

import json
from fractions import Fraction

import pytest

from errors import FixtureParse, InvalidConfig, Mismatch, NotInW
from harness import (
    PROPERTIES,
    CampaignConfig,
    Trial,
    evaluate_fixture,
    random_positive,
    random_stable,
    random_v,
    random_w,
    random_w_alpha,
    random_w_beta,
    replay_witness,
    run_campaign,
    run_fixtures,
    run_property,
    trial_rng,
)
from poly_core import lambdas
from stability import ConstantTag, below_constant, is_hurwitz_stable
from utils import to_json

HEADER = "fixture_id,check,polynomial,argument,expected,provenance\n"


def fixture_row(check, polynomial, argument, expected, provenance='[DERIVED]'):
    return {
        'fixture_id': 'X1',
        'check': check,
        'polynomial': polynomial,
        'argument': argument,
        'expected': expected,
        'provenance': provenance,
    }


class TestSamplers:
    """Tests for the random polynomial samplers."""

    @pytest.mark.parametrize('n', range(1, 11))
    def test_random_stable_is_stable(self, n):
        for seed in range(5):
            f = random_stable(n, seed)
            assert f.degree == n
            assert f.is_positive
            assert is_hurwitz_stable(f)

    @pytest.mark.parametrize('n', [17, 20, 30])
    def test_random_stable_more_linear_factors_than_grid(self, n):
        for seed in range(40):
            f = random_stable(n, seed)
            assert f.degree == n
            assert is_hurwitz_stable(f)

    def test_random_stable_deterministic(self):
        assert random_stable(7, 42) == random_stable(7, 42)

    def test_random_stable_rejects_degree_zero(self):
        with pytest.raises(ValueError):
            random_stable(0, 1)

    @pytest.mark.parametrize('n', [3, 5, 8])
    def test_random_w(self, n):
        for seed in range(5):
            f = random_w(n, seed)
            assert f.degree == n
            assert lambdas(f).maximum < 1

    @pytest.mark.parametrize('n', [3, 6, 10])
    def test_random_w_alpha_is_stable(self, n):
        for seed in range(5):
            f = random_w_alpha(n, seed)
            assert below_constant(lambdas(f).maximum, ConstantTag.ALPHA_STAR)
            assert is_hurwitz_stable(f)

    def test_random_w_beta(self):
        for seed in range(5):
            f = random_w_beta(6, seed)
            assert below_constant(lambdas(f).maximum, ConstantTag.BETA_STAR)

    @pytest.mark.parametrize('n', [3, 5, 9])
    def test_random_v(self, n):
        for seed in range(5):
            f = random_v(n, seed)
            assert lambdas(f).total < 1
            assert is_hurwitz_stable(f)

    def test_random_positive(self):
        f = random_positive(6, 3)
        assert f.is_positive
        assert f.degree == 6

    def test_low_degree_classes_are_stable(self):
        for sampler in (random_w, random_w_alpha, random_v):
            assert is_hurwitz_stable(sampler(2, 11))


class TestEvaluateFixture:
    """Tests for evaluate_fixture function."""

    def test_passing_fact(self):
        outcome = evaluate_fixture(fixture_row('minors', '10 7 3 1', '', '3 11 110'))
        assert outcome.passed
        assert outcome.computed == '3 11 110'

    def test_whitespace_insensitive(self):
        outcome = evaluate_fixture(fixture_row('lambdas', '3 2 4 2 2', '', ' 3/4   1/2 '))
        assert outcome.passed

    def test_failing_fact(self):
        outcome = evaluate_fixture(fixture_row('rh', '3 2 4 2 2', '', 'true'))
        assert not outcome.passed
        assert outcome.computed == 'false'

    def test_library_error_is_a_failed_fact(self):
        outcome = evaluate_fixture(fixture_row('lambdas', '1 1 1', '', '1'))
        assert not outcome.passed
        assert outcome.computed.startswith('error:')

    def test_standalone_check(self):
        outcome = evaluate_fixture(fixture_row('constant', '', 'GammaStar', '0.21676'))
        assert outcome.passed

    def test_constant_outside_enclosure(self):
        outcome = evaluate_fixture(fixture_row('constant', '', 'AlphaStar', '0.46600'))
        assert not outcome.passed

    def test_power_argument_with_precision(self):
        outcome = evaluate_fixture(fixture_row('power_verdict', '10 7 3 1', '2@256', 'stable'))
        assert outcome.passed

    def test_unknown_check(self):
        with pytest.raises(FixtureParse, match="unknown check"):
            evaluate_fixture(fixture_row('roots', '1 1', '', ''))

    def test_bad_provenance(self):
        with pytest.raises(FixtureParse, match="provenance"):
            evaluate_fixture(fixture_row('rh', '1 1', '', 'true', provenance='[GUESS]'))

    def test_missing_polynomial(self):
        with pytest.raises(FixtureParse, match="needs a polynomial"):
            evaluate_fixture(fixture_row('rh', '', '', 'true'))

    def test_bad_polynomial(self):
        with pytest.raises(FixtureParse):
            evaluate_fixture(fixture_row('rh', '1 x', '', 'true'))

    def test_bad_argument(self):
        with pytest.raises(FixtureParse, match="bad argument"):
            evaluate_fixture(fixture_row('minor', '10 7 3 1', 'three', '3'))

    def test_wrong_argument_count(self):
        with pytest.raises(FixtureParse):
            evaluate_fixture(fixture_row('window', '10 7 3 1', '2', '10 7 3'))


class TestRunFixtures:
    """Tests for run_fixtures function."""

    def test_shipped_fixtures_pass(self):
        report = run_fixtures()
        failed = [(o.fixture_id, o.check, o.expected, o.computed) for o in report.failures]
        assert report.passed, failed
        assert len(report.outcomes) > 50

    def test_every_fact_is_tagged(self):
        report = run_fixtures()
        assert {o.provenance for o in report.outcomes} == {'[WORKED]', '[TRIVIAL]', '[DERIVED]'}

    def test_mismatch(self, tmp_path):
        path = tmp_path / "facts.csv"
        path.write_text(HEADER + "E1,rh,3 2 4 2 2,,true,[DERIVED]\nE2,rh,10 7 3 1,,true,[DERIVED]\n")
        report = run_fixtures(str(path))

        assert not report.passed
        assert [o.fixture_id for o in report.failures] == ['E1']
        with pytest.raises(Mismatch, match="E1:rh"):
            report.raise_for_mismatch()

    def test_to_dict(self, tmp_path):
        path = tmp_path / "facts.csv"
        path.write_text(HEADER + "E2,rh,10 7 3 1,,true,[DERIVED]\n")
        data = run_fixtures(str(path)).to_dict()
        assert data['total'] == 1
        assert data['failed'] == 0

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            run_fixtures(str(tmp_path / "missing.csv"))

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "facts.csv"
        path.write_text("fixture_id,check\nE1,rh\n")
        with pytest.raises(FixtureParse):
            run_fixtures(str(path))


class TestCampaignConfig:
    """Tests for CampaignConfig validation."""

    def test_defaults_validate(self):
        CampaignConfig().validate()

    @pytest.mark.parametrize('changes', [
        {'trials': 0},
        {'workers': 0},
        {'degrees': (0, 5)},
        {'degrees': (6, 5)},
        {'degrees': (1, 13)},
        {'quasi_tolerance': 0},
        {'properties': ['no_such_property']},
    ])
    def test_invalid(self, changes):
        with pytest.raises(InvalidConfig):
            CampaignConfig(**changes).validate()

    def test_property_ids(self):
        assert CampaignConfig().property_ids == list(PROPERTIES)
        assert CampaignConfig(properties=['v_subset_h']).property_ids == ['v_subset_h']


class TestTrialRng:
    """Tests for trial_rng function."""

    def test_depends_only_on_inputs(self):
        assert trial_rng(1, 'v_subset_h', 3).random() == trial_rng(1, 'v_subset_h', 3).random()

    def test_streams_differ(self):
        draws = {trial_rng(1, pid, 0).random() for pid in ('a', 'b', 'c')}
        assert len(draws) == 3


class TestRunProperty:
    """Tests for run_property function."""

    @pytest.mark.parametrize('property_id', sorted(PROPERTIES))
    def test_no_failures(self, property_id):
        config = CampaignConfig(degrees=(1, 6), trials=5, seed=7)
        result = run_property(property_id, config)
        assert result.failed == 0, result.failures
        assert result.passed + result.skipped == 5

    def test_power_above_p_star(self):
        result = run_property('power_above_p_star', CampaignConfig(degrees=(3, 8), trials=10))
        assert result.passed == 10

    def test_oracle_agrees_on_default_campaign(self):
        result = run_property('oracle_agreement', CampaignConfig())
        assert result.failed == 0, result.failures

    def test_error_keeps_recorded_witnesses(self, monkeypatch):
        def check(rng, config, witnesses):
            witnesses['f'] = '10 7 3 1'
            raise NotInW("max lambda too large")

        monkeypatch.setitem(PROPERTIES, 'h_subset_w', check)
        result = run_property('h_subset_w', CampaignConfig(trials=2))
        assert result.failed == 2
        assert result.failures[0]['witnesses'] == {'f': '10 7 3 1'}
        assert result.failures[0]['detail'].startswith('NotInW')

    def test_false_keeps_recorded_witnesses(self, monkeypatch):
        def check(rng, config, witnesses):
            witnesses['g'] = '1 1'
            return Trial(ok=False, detail='forced')

        monkeypatch.setitem(PROPERTIES, 'h_subset_w', check)
        failure = run_property('h_subset_w', CampaignConfig(trials=1)).failures[0]
        assert failure == {'trial': 0, 'witnesses': {'g': '1 1'}, 'detail': 'forced'}

    def test_skips_below_minimum_degree(self):
        config = CampaignConfig(degrees=(1, 2), trials=4)
        result = run_property('v_subset_w', config)
        assert result.skipped == 4
        assert result.passed == 0


class TestRunCampaign:
    """Tests for run_campaign function."""

    CONFIG = dict(degrees=(1, 5), trials=3, seed=123,
                  properties=['hadamard_closure', 'end_elements_stable', 'uniform_stabilizer'])

    def test_deterministic(self):
        first = run_campaign(CampaignConfig(**self.CONFIG))
        second = run_campaign(CampaignConfig(**self.CONFIG))
        assert to_json(first.to_dict()) == to_json(second.to_dict())

    def test_workers_do_not_change_report(self):
        serial = run_campaign(CampaignConfig(**self.CONFIG))
        parallel = run_campaign(CampaignConfig(workers=3, **self.CONFIG))
        assert to_json(serial.to_dict()) == to_json(parallel.to_dict())

    def test_report_order_follows_properties(self):
        report = run_campaign(CampaignConfig(**self.CONFIG))
        assert [r.property_id for r in report.results] == self.CONFIG['properties']
        assert report.total_failures == 0

    def test_writes_report(self, tmp_path):
        path = tmp_path / "campaign.json"
        run_campaign(CampaignConfig(report_path=str(path), **self.CONFIG))
        data = json.loads(path.read_text())
        assert data['seed'] == 123
        assert set(data['properties']) == set(self.CONFIG['properties'])

    def test_invalid_config(self):
        with pytest.raises(InvalidConfig):
            run_campaign(CampaignConfig(trials=0))


class TestReplayWitness:
    """Tests for replay_witness function."""

    def test_rebuilds_polynomial(self):
        f = random_stable(6, 99)
        assert replay_witness(str(f)) == f

    def test_rational_coefficients(self):
        assert replay_witness("1 1 1 1/4 1/16")[4] == Fraction(1, 16)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])

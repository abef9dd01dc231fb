"""Distributions, likelihoods, the global measure, shadows and sampling."""

import collections
import math
import random

import pytest

from eventstruct import fixtures as fx
from eventstruct.cells import Analyzer
from eventstruct.errors import (
    NotRStoppedError,
    TruncatedStructureError,
    ValidationError,
)
from eventstruct.nets import unfold_net
from eventstruct.probability import (
    attach_distributions,
    global_measure,
    likelihood,
    sample_run,
    shadow_probability,
)

TOL = 1e-9

CONF_TABLE = {
    frozenset({"a", "b", "c"}): {frozenset({"a", "c"}): 0.6, frozenset({"b"}): 0.4}
}


def conf_weighted():
    return attach_distributions(fx.confusion(), table=CONF_TABLE)


class TestAttach:
    def test_uniform_two_cells(self):
        lres = attach_distributions(fx.two_cells(), uniform=True)
        for dist in lres.dists.values():
            assert [p for _, p in dist.weights] == [0.5, 0.5]

    def test_explicit_table_accepted(self):
        lres = conf_weighted()
        dist = lres.dists[frozenset({"a", "b", "c"})]
        assert dist.weight(frozenset({"b"})) == 0.4

    def test_non_maximal_config_rejected(self):
        with pytest.raises(ValidationError, match="not maximal"):
            attach_distributions(
                fx.confusion(),
                table={frozenset({"a", "b", "c"}): {frozenset({"a"}): 0.5, frozenset({"b"}): 0.5}},
            )

    def test_missing_cell_rejected(self):
        with pytest.raises(ValidationError, match="no distribution"):
            attach_distributions(fx.two_cells(), table={})

    def test_bad_sum_rejected(self):
        with pytest.raises(ValidationError, match="sum"):
            attach_distributions(
                fx.confusion(),
                table={frozenset({"a", "b", "c"}): {frozenset({"a", "c"}): 0.6, frozenset({"b"}): 0.5}},
            )

    def test_truncated_refused(self):
        es = unfold_net(fx.loop_net(), 4).es
        assert es.truncated
        with pytest.raises(TruncatedStructureError):
            attach_distributions(es, uniform=True)
        attach_distributions(es, uniform=True, allow_truncated=True)


class TestLikelihood:
    def test_two_cells(self):
        lres = attach_distributions(fx.two_cells(), uniform=True)
        assert abs(likelihood(lres, {"a1", "b2"}) - 0.25) < TOL

    def test_confusion_weighted(self):
        assert abs(likelihood(conf_weighted(), {"b"}) - 0.4) < TOL

    def test_empty_configuration(self):
        for lres in (conf_weighted(), attach_distributions(fx.alt_causes(), uniform=True)):
            assert likelihood(lres, frozenset()) == 1.0

    def test_domain_is_r_stopped(self):
        with pytest.raises(NotRStoppedError):
            likelihood(conf_weighted(), {"a"})


class TestGlobalMeasure:
    def test_two_cells_uniform(self):
        m = global_measure(attach_distributions(fx.two_cells(), uniform=True))
        assert len(m) == 4
        assert all(abs(p - 0.25) < TOL for p in m.values())

    def test_confusion_weighted(self):
        m = global_measure(conf_weighted())
        assert abs(m[frozenset({"a", "c"})] - 0.6) < TOL
        assert abs(m[frozenset({"b"})] - 0.4) < TOL

    def test_empty_structure(self):
        m = global_measure(attach_distributions(fx.empty_es(), uniform=True))
        assert m == {frozenset(): 1.0}

    def test_alt_causes_uniform(self):
        m = global_measure(attach_distributions(fx.alt_causes(), uniform=True))
        assert abs(sum(m.values()) - 1.0) < TOL
        assert abs(m[frozenset({"e1", "e3", "ea"})] - 1 / 6) < TOL
        assert abs(m[frozenset({"e2", "e4", "ea"})] - 1 / 3) < TOL


class TestShadow:
    def test_values(self):
        lres = attach_distributions(fx.two_cells(), uniform=True)
        assert abs(shadow_probability(lres, {"a1"}) - 0.5) < TOL
        assert abs(shadow_probability(conf_weighted(), {"a"}) - 0.6) < TOL
        assert shadow_probability(lres, frozenset()) == 1.0

    def test_matches_likelihood_on_r_stopped(self):
        for lres in (
            attach_distributions(fx.two_cells(), uniform=True),
            conf_weighted(),
            attach_distributions(fx.alt_causes(), uniform=True),
            attach_distributions(fx.alt_causes_relaxed(), uniform=True),
        ):
            an = lres.analyzer
            for v in an.r_stopped():
                assert abs(likelihood(lres, v) - shadow_probability(lres, v)) < TOL


class TestChainRule:
    def test_product_over_concatenation(self):
        for lres in (
            attach_distributions(fx.two_cells(), uniform=True),
            attach_distributions(fx.alt_causes(), uniform=True),
            conf_weighted(),
        ):
            an = lres.analyzer
            for u in an.r_stopped():
                fut = an.future(u)
                fan = Analyzer(fut)
                for w in fan.r_stopped():
                    p_future = 1.0
                    for cell in fan.covering(w):
                        p_future *= lres.dists[cell.events].weight(w & cell.events)
                    total = likelihood(lres, u | w)
                    assert abs(total - likelihood(lres, u) * p_future) < TOL


class TestSampling:
    def test_support(self):
        lres = attach_distributions(fx.two_cells(), uniform=True)
        outcomes = {sample_run(lres, s)[0] for s in range(40)}
        assert outcomes <= set(lres.analyzer.maximal_configurations())

    def test_degenerate_distribution(self):
        lres = attach_distributions(
            fx.confusion(),
            table={frozenset({"a", "b", "c"}): {frozenset({"a", "c"}): 1.0, frozenset({"b"}): 0.0}},
        )
        for s in range(25):
            assert sample_run(lres, s)[0] == frozenset({"a", "c"})

    def test_reproducible(self):
        lres = conf_weighted()
        assert sample_run(lres, 123) == sample_run(lres, 123)

    def test_trace_records_steps(self):
        lres = attach_distributions(fx.alt_causes(), uniform=True)
        outcome, trace = sample_run(lres, 5)
        rebuilt = frozenset().union(*(w for _, w in trace)) if trace else frozenset()
        assert rebuilt == outcome

    def test_cell_order_independence(self):
        # two canonical orders must both converge to the exact measure
        lres = attach_distributions(fx.two_cells(), uniform=True)
        exact = global_measure(lres)
        n = 20000
        for order in ("first", "last"):
            counts = collections.Counter(
                sample_run(lres, 9000 + i, cell_order=order)[0] for i in range(n)
            )
            for omega, p in exact.items():
                bound = 3 * math.sqrt(p * (1 - p) / n)
                assert abs(counts[omega] / n - p) <= bound

    def test_frequencies_converge(self):
        lres = conf_weighted()
        n = 20000
        counts = collections.Counter(sample_run(lres, 31 + i)[0] for i in range(n))
        p = 0.4
        bound = 3 * math.sqrt(p * (1 - p) / n)
        assert abs(counts[frozenset({"b"})] / n - p) <= bound

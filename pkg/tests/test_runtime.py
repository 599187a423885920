"""Wall-clock bounds for the catalog checks"""
import time
from contextlib import contextmanager

import numpy as np

from src.classify.certification import certify_iid, classify_iid
from src.classify.necessary import hk_check, necessary_condition
from src.classify.pseudo_identity import classify_smooth, replay_witness
from src.models.partitions import TerminalPartition
from src.models.results import Answer
from src.oracle.sampling import random_distribution
from src.rates.independence import ci_factorization_deviation
from src.structure.conditions import induced_partitions


@contextmanager
def within(seconds):
    start = time.perf_counter()
    yield
    assert time.perf_counter() - start < seconds


def test_table1_markov_chain(table1):
    with within(1):
        assert hk_check(table1).holds
        part = TerminalPartition.parse("{1}/{2}", 2)
        rng = np.random.default_rng(0)
        for _ in range(100):
            P = random_distribution(rng, table1.alphabet_sizes)
            assert ci_factorization_deviation(P, table1, part) <= 1e-12


def test_table2_induced_partitions(table2):
    with within(1):
        assert induced_partitions(table2).partitions == {1: ((0,), (1, 2)), 2: ((0,), (1,), (2,))}


def test_table4_depth_one_certificate(table4):
    with within(1):
        certificate = certify_iid(table4)
        assert certificate.depth == 1
        assert certificate.steps[0].terminal_partition.describe() == "{1,2}/{3,4}"
        assert necessary_condition(table4).holds


def test_mod2sum_refuted_for_both_classes(mod2sum):
    with within(1):
        assert not necessary_condition(mod2sum).holds
        assert classify_iid(mod2sum).answer == Answer.NOT_IN_SW_CLASS
        smooth = classify_smooth(mod2sum)
        assert smooth.answer == Answer.NOT_IN_SW_CLASS
        assert replay_witness(mod2sum, smooth.witness)


def test_table1_separates_smooth_from_iid(table1):
    with within(1):
        assert classify_iid(table1).answer == Answer.IN_SW_CLASS
        assert classify_smooth(table1).answer == Answer.NOT_IN_SW_CLASS

"""Pseudo-primality testing over cyclic extensions of Z/nZ."""
from .evidence import CompositeDetected, CompositeEvidence
from .galois_test import TestConfig, TestResult, galois_test, replay_evidence, theoretical_test
from .miller_rabin import Verdict, mr_map, mr_test, vee
from .params import CostModel, ParamChoice, crossover, enumerate_candidates, select

__all__ = [
    "CompositeDetected", "CompositeEvidence", "CostModel", "ParamChoice", "TestConfig",
    "TestResult", "Verdict", "crossover", "enumerate_candidates", "galois_test", "mr_map",
    "mr_test", "replay_evidence", "select", "theoretical_test", "vee",
]
__version__ = "0.1.0"

"""Conformance testing of reactive systems against LTL requirements.

Typical use::

    from ltlconform import parse_spec, TestModel, GdfsConfig, gdfs
    spec = parse_spec(open("grant.ltl").read())
    suite = gdfs(TestModel.build(spec), GdfsConfig(kmin=5), machine.session())
"""
from .generator import Algorithm, GdfsConfig, TestModel, TestResult, TestSuite, gdfs, run_algorithm, run_baseline
from .harness import CampaignConfig, CampaignReport, SutFactory, run_campaign, write_report
from .ltl import Spec, eval_fltl, eval_ltl_lasso, parse_ltl, parse_spec, pretty
from .oracle import Kind, Outcome, Verdict, evaluate
from .sut import MealyMachine, mutate, parse_mealy, subprocess_session
from .verify import mealy_satisfies

__version__ = "0.1.0"

"""Nonadaptive group-testing matrices from q-ary codes.

Pipeline: plan parameters for a target (N, t, epsilon), build a
Reed-Solomon or greedy Gilbert-Varshamov code over GF(q), concatenate it
into a constant-weight binary test matrix, certify recovery guarantees
from its distance statistics, and validate them by exhaustive checking or
Monte Carlo simulation.
"""

from .analysis import DistanceStats, cover_margin, distance_stats, \
    estimate_epsilon, is_covered, is_t_disjunct, wilson_interval
from .backend import BACKEND_NAME
from .bounds import GuaranteeReport, PlanResult, UNBOUNDED, check_model1, \
    check_model2, check_model2_d2, classical_t, gv_length, max_t, plan, \
    realize_plan
from .codes import LinearCode, binomial_tail, code_from_text, code_to_text, \
    gv_construct, min_distance_exact, rs_generate
from .concat import TestMatrix, concatenate, content_hash, phi, read_matrix, \
    truncate, write_matrix
from .errors import BudgetExceeded, DivisionByZero, GTCodesError, Infeasible, \
    InvalidInput, InvalidParams, NotConstantWeight, NotPrimePower, ParseError
from .field import FieldSpec, build_field, build_field_cached, \
    is_supported_prime_power
from .simulate import DefectiveModel, TrialReport, draw_defectives, \
    naive_decode, run_experiment, test_outcomes

__version__ = "0.1.0"

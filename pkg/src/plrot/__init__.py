"""Exact rotation numbers of PL circle maps with slopes in n^Z, via train tracks."""

from .errors import *  # noqa: F401,F403
from .flows import AbstractTrack, FlowReport, analyze_flow, element_from_trees, gen_example, gen_random
from .markov import MarkovTable, height, is_markov, markov_table
from .plmap import (
    PLCircleMap,
    compose,
    evaluate,
    evaluate_lift,
    fixed_point_set,
    from_intervals,
    identity,
    invert,
    power,
    rotation,
    rotation_number_float,
    rotation_number_oracle,
    validate_map,
)
from .traintrack import DynamicsReport, build_track, classify, extract_dynamics, resolve, rotation_number_exact, run_pipeline, split_all

__version__ = "0.1.0"

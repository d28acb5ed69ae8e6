"""Dialgebraic semantics of the asynchronous CCS.

Operational semantics, the (F, B)-dialgebra built on top of it, and three
independently computed equivalences: strong bisimilarity, back-and-forth
(dialgebraic) bisimilarity and asynchronous bisimilarity.
"""
from .ccs_dialgebra import (Run, Send, async_bisim_dialgebraic, build_ccs_dialgebra,
                            dialgebra_step, experiment_channels)
from .dialgebra import (UNIT, Experiment, FiniteDialgebra, InteractionSignature, QuotientError,
                        Shape, SignatureMismatch, StateMap, bff_bisim_naive, bff_bisim_pr,
                        bff_bisim_relation, induced_lts, is_bff_bisimulation, is_homomorphism,
                        kernel, quotient)
from .errors import StateCapExceeded
from .lts import TAU, In, LtsGraph, Out, reachable, step, strong_bisim
from .mealy import MealyMachine, mealy_bisim, mealy_to_dialgebra
from .oracle import async_bisim_oracle, async_check_pair_trace
from .partition import Partition
from .syntax import (NIL, CcsSyntaxError, Input, Nil, Output, Par, Process, Sum, Tau, channels,
                     parse, prefix_measure, render)

__version__ = "0.1.0"

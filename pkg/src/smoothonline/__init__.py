"""Online learning of smooth functions on unbounded domains: games, learners, adversaries, checks."""
from .pwl import BreakpointFunction, evaluate, insert_point, q_action, scale
from .classes import Finite, Gq, Gqd, Ginf, TruncatedLinear, is_member
from .weights import WeightFunction, parse_weight, ratio_constant, sup_z_times_g
from .engine import GameConfig, Scenario, Transcript, run_game
from .learners import make_learner
from .adversaries import make_adversary

__version__ = "0.1.0"

"""Numerical evaluation of inner bounds for two-receiver broadcast channels."""

from .channel import BroadcastChannel, compose_degraded, load_channel, smooth
from .errors import (InvalidChannelError, InvalidDistributionError,
                     MartonkitError, NumericalError, ResourceLimitError)
from .mappings import (MappingTable, admissible_mappings, check_less_noisy,
                       check_stationarity, check_support_positivity,
                       enumerate_mappings, profile, relabeling_classes)
from .optimize import AscentConfig, golden_section_min, gradient_check, maximize
from .probkit import (JointTable, ProbVector, conditional_mutual_information,
                      entropy, grouped_conditional_mi,
                      grouped_mutual_information, mutual_information)
from .regions import (Direction, RateTriple, TwoLetterBounds, TwoLetterInput,
                      degraded_support_d1, degraded_support_d2,
                      directional_optimality_check, lift_markov_kernel,
                      marton_caps, marton_support, two_letter_bounds,
                      two_letter_reduction_check)
from .sumrate import (SearchOptions, SumRateWitness, binary_inequality_check,
                      claim1_parts, inner_T, marton_sum_rate,
                      marton_sum_rate_direct, t_lambda, t_lambda_sweep,
                      weighted_no_w_max)

__version__ = "0.1.0"

__all__ = [
    "AscentConfig",
    "BroadcastChannel",
    "Direction",
    "InvalidChannelError",
    "InvalidDistributionError",
    "JointTable",
    "MappingTable",
    "MartonkitError",
    "NumericalError",
    "ProbVector",
    "RateTriple",
    "ResourceLimitError",
    "SearchOptions",
    "SumRateWitness",
    "TwoLetterBounds",
    "TwoLetterInput",
    "admissible_mappings",
    "binary_inequality_check",
    "check_less_noisy",
    "check_stationarity",
    "check_support_positivity",
    "claim1_parts",
    "compose_degraded",
    "conditional_mutual_information",
    "degraded_support_d1",
    "degraded_support_d2",
    "directional_optimality_check",
    "entropy",
    "enumerate_mappings",
    "golden_section_min",
    "gradient_check",
    "grouped_conditional_mi",
    "grouped_mutual_information",
    "inner_T",
    "lift_markov_kernel",
    "load_channel",
    "marton_caps",
    "marton_sum_rate",
    "marton_sum_rate_direct",
    "marton_support",
    "maximize",
    "mutual_information",
    "profile",
    "relabeling_classes",
    "smooth",
    "t_lambda",
    "t_lambda_sweep",
    "two_letter_bounds",
    "two_letter_reduction_check",
    "weighted_no_w_max",
]

"""causet: simulation and analysis toolkit for causal sets and random
partial orders.

Height convention used throughout: a chain x0 < ... < xh has height h
(edge count), so antichains have height 0.
"""

__version__ = "0.1.0"

from .poset import (LabelledPoset, Poset, density, enumerate_posets,  # noqa: F401
                    from_relations, is_isomorphic, poset_classes)
from .sprinkle import (CubeRegion, DiamondRegion, Event, SprinkledSet,  # noqa: F401
                       causal_leq, induced_order, lorentz_boost, map_m2_to_r2,
                       midpoint_dimension_stat, proper_time, spacelike_distance,
                       sprinkle_cube, sprinkle_diamond)
from .growth import (CsgParams, GrowthState, check_bell_causality,  # noqa: F401
                     check_general_covariance, csg_step, grow, post_frequency,
                     random_binary_order, random_forest, random_graph_order,
                     transitive_percolation_params, tp_labelled_probability,
                     transition_probability)
from .invariance import (GoldenRatioProcess, PHI, exchangeable_antichain,  # noqa: F401
                         finite_uniform_stem_probability, ladder_poset,
                         ladder_sampler, nu_k, stem_probability_mc)
from .uniform import (PermutationPair, SemiorderPoson, is_k_layer,  # noqa: F401
                      poset_count_estimate, random_kd_order,
                      rgo_semiorder_limit_experiment, sample_from_poson,
                      swappable_pairs, three_layer_random)

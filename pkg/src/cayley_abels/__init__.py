"""Cayley-Abels graphs of totally disconnected locally compact groups,
modelled through finite permutation groups and tree-acting groups."""

from .errors import (CayleyAbelsError, DepthExceeded, HypothesisUnmet, Inconclusive, SpecError,
                     ValidationError)
from .graph import Graph, GraphMorphism, ball, build_graph, distance, graph_difference, quotient_graph
from .perm import Perm, PermGroup
from .camodel import (FinitePermModel, build_ca_construction1, build_ca_construction2, check_ca,
                      equivariant_iso, local_action, quotient_by_normal, validate_construction2)
from .trees import (OrientedTreeModel, TreePortrait, UFModel, classify_element, end_stabilizer,
                    is_tidy_up_to, scale_coprime, translation)
from .localdata import (extract_local_data, local_prime_content_bound, local_prime_content_exact,
                        min_valency_bound, modular_along_path, modular_image)
from .covering import deck_transformations, lift_automorphism, universal_cover
from .asymptotics import LazyGraph, ball_sizes, end_classification, growth_class, min_separator

__version__ = "0.1.0"

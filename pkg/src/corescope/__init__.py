"""Descriptors, detectors, comparisons and views for unlabelled graphs."""

__version__ = "0.1.0"

from .canonical import CanonicalCode, canonical_code, enumerate_connected, graph_from_code
from .census import (BMatrix, CensusVector, DistanceSummary, KCoreDecomposition, all_censuses, bmatrix,
                     distance_summary, kcore, node_census, stub_census)
from .classify import CategoryReport, ClassifierConfig, categorize_graph
from .detectors import (ElementSet, bottlenecks, chains, clusters, core_periphery, cut_elements, cycles,
                        degree_targets, eccentricity_targets, geodesic_analysis, lacunae, maximal_cliques,
                        stars)
from .errors import (ArityError, ChainError, CorescopeError, GraphError, LimitError, ParseError,
                     PermutationError, ScopeActionError, ScopeTargetError, TaskError)
from .graph import CoreGraph, RawNetwork, fingerprint, normalize_to_core, parse_edge_list, permute_nodes
from .similarity import (CompareReport, Grouping, SimilarityMatrix, census_distance, compare_report,
                         group_graphs, portrait_divergence, rank_medoid, similarity_matrix)
from .tasks import ChainStep, TaskResult, TaskTriplet, chain_tasks, parse_chain, run_task, validate_triplet

"""Bounded-confidence opinion dynamics with stubborn agents on weighted networks."""

from ._core import (
    CentralityError,
    ConfigError,
    Graph,
    GraphError,
    ParameterError,
    centrality,
    count_clusters,
    edge_salience,
    effective_config,
    fraction_near,
    generate_lfr,
    high_salience_skeleton,
    histogram,
    hk_step,
    load_edge_list,
    mean_opinion,
    network_stats,
    save_communities,
    save_edge_list,
    select_stubborn,
    simulate,
    sweep,
    SweepError,
)

MEASURES = ("degree", "strength", "betweenness", "pagerank", "k_coreness", "s_coreness", "salience", "random", "none")

__all__ = [
    "CentralityError",
    "ConfigError",
    "Graph",
    "GraphError",
    "MEASURES",
    "ParameterError",
    "centrality",
    "count_clusters",
    "edge_salience",
    "effective_config",
    "fraction_near",
    "generate_lfr",
    "high_salience_skeleton",
    "histogram",
    "hk_step",
    "load_edge_list",
    "mean_opinion",
    "network_stats",
    "save_communities",
    "save_edge_list",
    "select_stubborn",
    "simulate",
    "sweep",
    "SweepError",
]

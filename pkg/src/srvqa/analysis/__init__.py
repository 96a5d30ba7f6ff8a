from .bsq import BsqResult, RDCurve, average_bsq, bsq_rate
from .clustering import KMeansSelection, kmeans_select
from .correlation import CorrelationReport, correlate_metric, pearson, spearman
from .ranking import ASCENDING_METRICS, RankEntry, RankedRow, rank_table

__all__ = [
    "ASCENDING_METRICS",
    "BsqResult",
    "CorrelationReport",
    "KMeansSelection",
    "RDCurve",
    "RankEntry",
    "RankedRow",
    "average_bsq",
    "bsq_rate",
    "correlate_metric",
    "kmeans_select",
    "pearson",
    "rank_table",
    "spearman",
]

from gatework.stats.bootstrap import bootstrap_median_se
from gatework.stats.dataset import (
    Dataset,
    RELEASED_AREA_TOTALS,
    RELEASED_DISTRIBUTION,
    RELEASED_TOTAL,
    load_benchmark,
)
from gatework.stats.normal import normal_cdf
from gatework.stats.records import LabeledResult, read_results_file, write_results_file
from gatework.stats.shares import ShareEstimate, quality_shares
from gatework.stats.summary import FrontierPoint, MetricSummary, SummaryRow, frontier_points, summarize_time_price
from gatework.stats.ztest import ZTestResult, two_prop_z_one_sided

__all__ = [
    "Dataset",
    "FrontierPoint",
    "LabeledResult",
    "MetricSummary",
    "RELEASED_AREA_TOTALS",
    "RELEASED_DISTRIBUTION",
    "RELEASED_TOTAL",
    "ShareEstimate",
    "SummaryRow",
    "ZTestResult",
    "bootstrap_median_se",
    "frontier_points",
    "load_benchmark",
    "normal_cdf",
    "quality_shares",
    "read_results_file",
    "summarize_time_price",
    "two_prop_z_one_sided",
    "write_results_file",
]

"""Trivariate mutual information (Triple Helix) indicators from Boolean hit counts."""

__version__ = "0.1.0"

from .contingency import (  # noqa: E402
    ContingencyTable,
    CountRecord,
    NonePolicy,
    contingency_from_counts,
    counts_from_table,
    distribution_from_table,
    share_series,
    validate_counts,
)
from .infotheory import (  # noqa: E402
    JointDistribution,
    TransmissionValue,
    Unit,
    convert_units,
    entropy,
    marginalize,
    transmission2,
    transmission3_direct_form,
    transmission3_entropy_form,
)
from .ingest import builtin_dataset, parse_count_csv, render_csv  # noqa: E402
from .timeseries import moving_average, transmission_series, trend_summary  # noqa: E402

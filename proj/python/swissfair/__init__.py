"""Swiss-system pairing, tournament simulation and colour-fairness audits.

Thin Python layer over the C++ core. JSON documents use the same formats as
the ``swissfair`` command-line tool.
"""

import json
import os

from ._swissfair import (
    DELTA_GRID,
    DataError,
    InfeasiblePairingError,
    StatsError,
    SwissfairError,
    ValidationError,
    expected_points,
    max_weight_matching,
    win_probability,
)
from . import _swissfair as _core

__all__ = [
    "DELTA_GRID",
    "DataError",
    "InfeasiblePairingError",
    "StatsError",
    "SwissfairError",
    "ValidationError",
    "audit",
    "expected_points",
    "ingest",
    "max_weight_matching",
    "pair_next_round",
    "simulate",
    "win_probability",
]


def _as_text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def pair_next_round(state, seed):
    """Pair the next round of a tournament state.

    ``state`` is a state document (dict or JSON text). Returns a dict with
    ``boards`` as (white, black) id pairs, ``bye`` (id or None) and ``state``,
    the document with the new round appended and results pending.
    """
    boards, bye, updated = _core.pair_next_round(_as_text(state), seed)
    return {"boards": boards, "bye": bye, "state": json.loads(updated)}


def simulate(config, seed, base_dir=None):
    """Run a simulation experiment.

    ``config`` is an experiment document (dict, JSON text, or a path to a
    JSON file). Relative field files resolve against ``base_dir``, which
    defaults to the config file's directory or the working directory.
    """
    if isinstance(config, (str, os.PathLike)) and os.path.isfile(config):
        base_dir = base_dir or os.path.dirname(os.path.abspath(config))
        with open(config, encoding="utf-8") as fh:
            config = fh.read()
    records, csv_text, float_pairs = _core.run_experiment(_as_text(config), seed, base_dir or ".")
    return {"records": records, "csv": csv_text, "float_pairs": float_pairs}


def audit(csv_text, *, rounds=0, min_points=None, thresholds=(), top=(),
          deltas=(10, 20, 30, 40, 50), points=True, surprise=True):
    """Run the regression batteries on player records in CSV form.

    Returns the parsed JSON report; the formatted tables are under ``"text"``.
    """
    json_text, table = _core.audit_csv(csv_text, rounds, min_points, list(thresholds), list(top),
                                       list(deltas), points, surprise)
    report = json.loads(json_text)
    report["text"] = table
    return report


def ingest(text):
    """Clean a crosstable given as text.

    Returns ``records`` (valid players), their ``csv`` and the ``summary``
    descriptive statistics.
    """
    records, csv_text, summary = _core.ingest_crosstable(text)
    return {"records": records, "csv": csv_text, "summary": json.loads(summary)}

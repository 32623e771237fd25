"""Weak-measurement parameter estimation: weak values, Fisher information, coupling MLE."""

import json

from ._weakmeas import *  # noqa: F401,F403
from ._weakmeas import run_command as _run_command


def report(command, document, **kwargs):
    """Run a CLI command on a problem document (str or dict) and return the report as a dict."""
    if not isinstance(document, str):
        document = json.dumps(document)
    return json.loads(_run_command(command, document, **kwargs))

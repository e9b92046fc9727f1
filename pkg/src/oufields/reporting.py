"""Verification reports shared by the deterministic and statistical checks."""

import json
from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of one named check.

    ``tolerance`` holds whatever bands the check used (a float for exact
    identity checks, a dict for statistical gates); ``residual_location``
    points at the argmax residual when one exists.
    """

    check_name: str
    passed: bool
    max_residual: float = 0.0
    residual_location: dict | None = None
    n_entries_tested: int = 0
    n_entries_outside_band: int = 0
    tolerance: object = None
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "check_name": self.check_name,
            "pass": bool(self.passed),
            "max_residual": float(self.max_residual),
            "residual_location": self.residual_location,
            "n_entries_tested": int(self.n_entries_tested),
            "n_entries_outside_band": int(self.n_entries_outside_band),
            "tolerance": self.tolerance,
            "metadata": self.metadata,
        }


def reports_to_json(suite_name, reports):
    """Serialize a suite of reports with stable field names and key order."""
    payload = {
        "suite": suite_name,
        "pass": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"

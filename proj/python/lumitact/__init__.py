"""Python bindings for the lumitact simulator and analysis core."""

import json

from . import _core
from ._core import (
    DegenerateError,
    DomainError,
    analyze,
    containment_diameter,
    derivative_series,
    displacement_stats,
    f_sf,
    illuminance,
    landing_axis_regression,
    paired_t_test,
    photocurrent,
    reg_inc_beta,
    rm_anova_one_way,
    rm_anova_two_way,
    simulate,
    t_two_tailed_p,
)


class Session:
    """Interactive session speaking the wire protocol as Python dicts."""

    def __init__(self, session_id="py", stream_rate_hz=50.0, expose_altitude=False):
        self._s = _core.Session(session_id, stream_rate_hz, expose_altitude)

    def send(self, message):
        return [json.loads(m) for m in self._s.handle(json.dumps(message))]

    def tick(self):
        return [json.loads(m) for m in self._s.tick()]

    @property
    def phase(self):
        return self._s.phase

    @property
    def steps_per_message(self):
        return self._s.steps_per_message

    def log_text(self):
        return self._s.log_text()


__all__ = [
    "DegenerateError",
    "DomainError",
    "Session",
    "analyze",
    "containment_diameter",
    "derivative_series",
    "displacement_stats",
    "f_sf",
    "illuminance",
    "landing_axis_regression",
    "paired_t_test",
    "photocurrent",
    "reg_inc_beta",
    "rm_anova_one_way",
    "rm_anova_two_way",
    "simulate",
    "t_two_tailed_p",
]

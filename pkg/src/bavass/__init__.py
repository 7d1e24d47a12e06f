"""Vector addition systems with states: semantics, ambiguity and the
constructions behind bounded-ambiguity separation results."""

from .errors import *  # noqa: F401,F403
from .model import (
    EPS,
    OMEGA,
    Configuration,
    Lcm,
    LcmTransition,
    Run,
    Transition,
    Vass,
    format_word,
    make_vass,
    parse_word,
)
from .semantics import (
    accepting_runs,
    ambiguity_profile,
    compare_bounded,
    count_accepting_runs,
    fire,
    is_member,
    sample_language,
)
from .textio import parse_lcm, parse_skeleton, parse_vass, read_lcm, read_vass, render

__version__ = "0.1.0"

"""Runtime guard sensors: command filtering, render audits, interface
and cross-run verification."""

from .audit import (
    FINDING_KINDS,
    AuditFinding,
    load_host_denylist,
    parse_host_denylist,
    render_audit,
)
from .crossrun import (
    DEFAULT_BAND,
    DEFAULT_K_REQUIRED,
    CrossRunReport,
    CrossRunRow,
    cross_run_verify,
    delta_tenths,
    format_delta,
)
from .filter import (
    RULE_KINDS,
    VERDICTS,
    FilterDecision,
    FilterRule,
    RuleSyntaxError,
    default_rules,
    load_rules,
    parse_rules,
    pre_action_filter,
    tokenize,
)
from .interface import (
    InterfaceMismatch,
    InterfaceReport,
    interface_verify,
)

__all__ = [
    "AuditFinding",
    "CrossRunReport",
    "CrossRunRow",
    "DEFAULT_BAND",
    "DEFAULT_K_REQUIRED",
    "FINDING_KINDS",
    "FilterDecision",
    "FilterRule",
    "InterfaceMismatch",
    "InterfaceReport",
    "RULE_KINDS",
    "RuleSyntaxError",
    "VERDICTS",
    "cross_run_verify",
    "default_rules",
    "delta_tenths",
    "format_delta",
    "interface_verify",
    "load_host_denylist",
    "load_rules",
    "parse_host_denylist",
    "parse_rules",
    "pre_action_filter",
    "render_audit",
    "tokenize",
]

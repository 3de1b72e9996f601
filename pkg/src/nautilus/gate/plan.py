"""Adapter plans: ordered rule applications with a canonical text form.

The global rule order is fixed: key_rename, chunk_split, dim_slice,
dim_pad, image_preprocess. Within one rule the applications sort by
their argument tuple, so a plan has exactly one canonical rendering,
and parsing that rendering reproduces the same ordered list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

RULE_ORDER = ("key_rename", "chunk_split", "dim_slice", "dim_pad", "image_preprocess")

_LINE_RE = re.compile(r"^(?P<rule>[a-z_]+)\((?P<args>[^()]*)\)$")
_ARG_RE = re.compile(r"^(?P<name>[a-z_]+)=(?P<value>[^,=]+)$")


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class RuleApplication:
    rule: str
    args: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if self.rule not in RULE_ORDER:
            raise PlanError(f"unknown rule {self.rule!r}")

    def arg(self, name: str) -> str:
        for key, value in self.args:
            if key == name:
                return value
        raise KeyError(name)

    @property
    def subject_key(self) -> str | None:
        """The observation key this application touches, if any."""
        for name in ("key", "to"):
            for arg_name, value in self.args:
                if arg_name == name:
                    return value
        return None

    def to_text(self) -> str:
        rendered = ", ".join(f"{name}={value}" for name, value in self.args)
        return f"{self.rule}({rendered})"

    @classmethod
    def from_text(cls, line: str) -> "RuleApplication":
        match = _LINE_RE.match(line.strip())
        if not match:
            raise PlanError(f"unparseable rule line {line!r}")
        args = []
        raw = match.group("args").strip()
        if raw:
            for piece in raw.split(","):
                arg = _ARG_RE.match(piece.strip())
                if not arg:
                    raise PlanError(f"unparseable argument {piece!r} in {line!r}")
                args.append((arg.group("name"), arg.group("value")))
        return cls(rule=match.group("rule"), args=tuple(args))


def key_rename(src: str, dst: str) -> RuleApplication:
    return RuleApplication("key_rename", (("from", src), ("to", dst)))


def chunk_split(horizon: int, execute: int) -> RuleApplication:
    return RuleApplication("chunk_split", (("horizon", str(horizon)), ("execute", str(execute))))


def dim_slice(keep: int) -> RuleApplication:
    return RuleApplication("dim_slice", (("keep", str(keep)),))


def dim_pad(key: str, target: int) -> RuleApplication:
    return RuleApplication("dim_pad", (("key", key), ("target", str(target)), ("pad_value", "0")))


def image_preprocess(key: str) -> RuleApplication:
    return RuleApplication(
        "image_preprocess",
        (("key", key), ("layout", "HWC->CHW"), ("scale", "1/255")),
    )


@dataclass(frozen=True)
class AdapterPlan:
    applications: tuple[RuleApplication, ...] = ()

    def __post_init__(self):
        ordered = canonical_order(self.applications)
        if tuple(self.applications) != ordered:
            raise PlanError("applications not in canonical rule order")
        seen = set()
        for app in self.applications:
            token = (app.rule, app.subject_key)
            if token in seen:
                raise PlanError(f"duplicate application of {app.rule} for key {app.subject_key!r}")
            seen.add(token)

    def __len__(self) -> int:
        return len(self.applications)

    def __iter__(self):
        return iter(self.applications)

    def rules_used(self) -> tuple[str, ...]:
        out = []
        for app in self.applications:
            if app.rule not in out:
                out.append(app.rule)
        return tuple(out)

    def chunk_params(self) -> tuple[int, int] | None:
        for app in self.applications:
            if app.rule == "chunk_split":
                return int(app.arg("horizon")), int(app.arg("execute"))
        return None

    def to_text(self) -> str:
        if not self.applications:
            return "(none)"
        return "\n".join(app.to_text() for app in self.applications)

    @classmethod
    def from_text(cls, text: str) -> "AdapterPlan":
        stripped = text.strip()
        if not stripped or stripped == "(none)":
            return cls(())
        apps = tuple(RuleApplication.from_text(line) for line in stripped.splitlines() if line.strip())
        return cls(apps)


def canonical_order(applications) -> tuple[RuleApplication, ...]:
    return tuple(sorted(applications, key=lambda app: (RULE_ORDER.index(app.rule), app.args)))


def make_plan(applications) -> AdapterPlan:
    return AdapterPlan(canonical_order(applications))

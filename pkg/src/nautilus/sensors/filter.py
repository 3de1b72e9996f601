"""Pre-action shell-command filter.

Rules are whole-token aware, not naive substrings: a token-sequence rule
matches one simple command (a run of tokens between shell separators such
as ';', '&&' or '|'), with each rule token a regex that must fully match
one shell token and ".." spanning any run of tokens. That is what keeps
"rm -rf ./build" allowed while "sudo rm -rf /" is blocked. Fork bombs,
which defeat tokenization by construction, use raw-regex rules instead.

The filter itself never raises: tokenization falls back to plain
whitespace splitting on malformed quoting, and every input string gets a
decision. Rule sets are immutable after parse, so sharing them across
threads is safe.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

VERDICTS = ("allow", "block")
RULE_KINDS = ("tokens", "regex")

GAP = ".."
_SEPARATOR_RE = re.compile(r"^[();<>|&]+$")
_NAME_RE = re.compile(r"^[a-z0-9-]+$")


class RuleSyntaxError(ValueError):
    """A rule line does not parse; names the line number."""


@dataclass(frozen=True)
class FilterDecision:
    verdict: str
    matched_pattern: str
    command: str

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "block" and not self.matched_pattern:
            raise ValueError("a block decision must name the matched pattern")

    @property
    def allowed(self) -> bool:
        return self.verdict == "allow"


@dataclass(frozen=True)
class FilterRule:
    name: str
    kind: str
    spec: str

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if not _NAME_RE.fullmatch(self.name):
            raise ValueError(f"rule name must be lowercase kebab case, got {self.name!r}")
        if self.kind == "regex":
            compiled = (re.compile(self.spec),)
        else:
            parts = self.spec.split()
            if not parts:
                raise ValueError(f"rule {self.name!r} has an empty token sequence")
            compiled = tuple(token if token == GAP else re.compile(token) for token in parts)
        object.__setattr__(self, "_compiled", compiled)

    def matches(self, command: str, segments: list[list[str]]) -> bool:
        if self.kind == "regex":
            return self._compiled[0].search(command) is not None
        return any(_match_sequence(self._compiled, segment) for segment in segments)


def _match_sequence(patterns: tuple, tokens: list[str]) -> bool:
    def advance(pi: int, ti: int) -> bool:
        if pi == len(patterns):
            return ti == len(tokens)
        pattern = patterns[pi]
        if pattern == GAP:
            # collapse consecutive gaps, then try every split point
            while pi < len(patterns) and patterns[pi] == GAP:
                pi += 1
            if pi == len(patterns):
                return True
            return any(advance(pi, tj) for tj in range(ti, len(tokens)))
        if ti >= len(tokens):
            return False
        if pattern.fullmatch(tokens[ti]) is None:
            return False
        return advance(pi + 1, ti + 1)

    return advance(0, 0)


def tokenize(command: str) -> list[list[str]]:
    """Split a command into simple-command segments of shell tokens.

    Backslash continuations fold into one line; each line is tokenized
    separately (a newline separates commands like ';' does). Separator
    tokens themselves never appear in the output segments.
    """
    folded = command.replace("\\\n", " ")
    segments: list[list[str]] = []
    for line in folded.splitlines() or [""]:
        segments.extend(_segment_line(line))
    return segments


def _segment_line(line: str) -> list[list[str]]:
    lexer = shlex.shlex(line, posix=True, punctuation_chars=True)
    lexer.whitespace_split = True
    try:
        tokens = list(lexer)
    except ValueError:  # unbalanced quotes or a trailing escape
        tokens = line.split()
    segments: list[list[str]] = []
    current: list[str] = []
    for token in tokens:
        if _SEPARATOR_RE.fullmatch(token):
            if current:
                segments.append(current)
                current = []
        else:
            current.append(token)
    if current:
        segments.append(current)
    return segments


def parse_rules(text: str) -> tuple[FilterRule, ...]:
    """Parse a rules document: one rule per line, '#' lines are comments."""
    rules: list[FilterRule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if " := " in line:
            name, _, spec = line.partition(" := ")
            kind = "tokens"
        elif " ~= " in line:
            name, _, spec = line.partition(" ~= ")
            kind = "regex"
        else:
            raise RuleSyntaxError(f"line {lineno}: expected '<name> := <tokens>' or '<name> ~= <regex>'")
        try:
            rules.append(FilterRule(name=name.strip(), kind=kind, spec=spec.strip()))
        except (ValueError, re.error) as exc:
            raise RuleSyntaxError(f"line {lineno}: {exc}") from exc
    return tuple(rules)


def load_rules(path: str | Path | None = None) -> tuple[FilterRule, ...]:
    """Load rules from a file; with no path, the packaged defaults."""
    if path is None:
        text = resources.files("nautilus.sensors").joinpath("data/default.rules").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_rules(text)


_DEFAULT_RULES: tuple[FilterRule, ...] | None = None


def default_rules() -> tuple[FilterRule, ...]:
    global _DEFAULT_RULES
    if _DEFAULT_RULES is None:
        _DEFAULT_RULES = load_rules()
    return _DEFAULT_RULES


def pre_action_filter(command: str, patterns: tuple[FilterRule, ...] | None = None) -> FilterDecision:
    """Decide allow or block for one shell command.

    First matching rule wins and is named in the decision. Adding rules
    can only grow the blocked set (the filter is monotone in the rule
    set). Enforcement is the caller's job.
    """
    rules = default_rules() if patterns is None else tuple(patterns)
    segments = tokenize(command)
    for rule in rules:
        if rule.matches(command, segments):
            return FilterDecision(verdict="block", matched_pattern=rule.name, command=command)
    return FilterDecision(verdict="allow", matched_pattern="", command=command)

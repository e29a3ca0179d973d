"""Prompt templates.

Template bodies are plain UTF-8 files with ``{placeholder}`` slots
(lowercase identifiers); everything else, including literal JSON braces in
the formatting instructions, passes through untouched.  Rendering is a
single substitution pass: placeholder-like text inside bound values is
never re-expanded, and molecule strings are inserted without escaping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import RenderError

__all__ = ["PromptTemplate", "TEMPLATE_IDS", "load_template", "render"]

TEMPLATE_IDS = (
    "scientist_system",
    "proposal",
    "critique_self",
    "critique_cross",
    "voting",
    "role_generation",
    "keyword_extraction",
    "llm_profile_pub",
    "llm_profile_mol",
    "task_protein_target",
    "task_bioactivity",
    "task_lead_optimization",
)

_PLACEHOLDER = re.compile(r"\{([a-z][a-z0-9_]*)\}")


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    body: str

    def placeholders(self) -> set[str]:
        return set(_PLACEHOLDER.findall(self.body))


def load_template(template_id: str, directory: str | Path | None = None) -> PromptTemplate:
    """Load a template by id, from ``directory`` or the packaged defaults."""
    if directory is not None:
        path = Path(directory) / f"{template_id}.txt"
        return PromptTemplate(template_id, path.read_text(encoding="utf-8"))
    if template_id not in TEMPLATE_IDS:
        raise KeyError(f"unknown template id {template_id!r}")
    body = (
        resources.files("moldebate.backend")
        .joinpath("templates", f"{template_id}.txt")
        .read_text(encoding="utf-8")
    )
    return PromptTemplate(template_id, body)


def render(template: PromptTemplate, bindings: dict[str, object]) -> str:
    """Substitute every placeholder; unbound placeholders are errors."""
    missing = sorted(template.placeholders() - set(bindings))
    if missing:
        raise RenderError(
            f"template {template.template_id!r}: unbound placeholder(s) "
            + ", ".join(repr(name) for name in missing)
        )
    return _PLACEHOLDER.sub(lambda match: str(bindings[match.group(1)]), template.body)

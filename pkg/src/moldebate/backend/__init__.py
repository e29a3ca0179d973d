"""LLM backends: request model, templates, reply parsing, mock and HTTP."""

from .base import Backend, ChatRequest, RequestTag
from .http import HttpBackend
from .mock import MockBackend
from .parsing import CritiqueEntry, parse_ballot, parse_critiques, parse_proposals
from .templates import TEMPLATE_IDS, PromptTemplate, load_template, render

__all__ = [
    "Backend",
    "ChatRequest",
    "RequestTag",
    "HttpBackend",
    "MockBackend",
    "CritiqueEntry",
    "parse_ballot",
    "parse_critiques",
    "parse_proposals",
    "TEMPLATE_IDS",
    "PromptTemplate",
    "load_template",
    "render",
]

"""Python bindings for the layered controlled-language grammar engine."""

import json

from ._lcnl import LcnlError, Pack, load_pack, tokenize

__all__ = ["LcnlError", "Pack", "load_pack", "tokenize", "translate"]


def translate(pack, text, src, tgt, k=5):
    """TranslationResult as a dict, same shape as the HTTP API."""
    return json.loads(pack.translate_json(text, src, tgt, k))

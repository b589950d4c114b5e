"""Per-character next-token entropy export for causal language models."""

from .exporter import DEFAULT_MODEL, ExportConfig, build_sequence, export_traces, main

__all__ = ["DEFAULT_MODEL", "ExportConfig", "build_sequence", "export_traces", "main"]

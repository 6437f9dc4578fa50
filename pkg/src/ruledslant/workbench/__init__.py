"""Fixtures, file formats, exporters and the command-line interface."""
from .cli import main
from .report import REPORT_SCHEMA, report_document, report_text
from .surfaces import (builtin, builtin_document, builtin_names, document_hash, export_obj,
                       load_input, obj_text, parse_number, parse_range, read_csv,
                       surface_from_document, write_csv)

__all__ = ["main", "REPORT_SCHEMA", "report_document", "report_text", "builtin",
           "builtin_document", "builtin_names", "document_hash", "export_obj", "load_input",
           "obj_text", "parse_number", "parse_range", "read_csv", "surface_from_document",
           "write_csv"]

# storage/__init__.py
"""JSON document storage."""
from storage.json_store import JsonStore, json_store

__all__ = ["JsonStore", "json_store"]

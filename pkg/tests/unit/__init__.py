"""Unit tests for thermosmc."""

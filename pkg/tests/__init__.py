"""Tests for the operator moment toolkit."""

"""Test suite for redmod."""

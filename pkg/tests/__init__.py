"""Tests for interval-catalog."""

"""Scripts for running parsing tasks."""

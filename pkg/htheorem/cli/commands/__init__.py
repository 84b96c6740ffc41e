# htheorem/cli/commands/__init__.py
"""
CLI commands package for htheorem.
"""

# htheorem/cli/__init__.py
"""
htheorem CLI package initialization.
"""

# services/__init__.py
"""
Library services.

Provides:
- groups, based_cat, soergel: based categories and their builders
- cells, matrep, pfexact: cell theory, matrix representations, Perron-Frobenius checks
- classify, obstruction: enumeration-driven classification
- export_service: report rendering
"""

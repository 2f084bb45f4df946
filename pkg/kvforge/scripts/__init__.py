# kvforge/scripts/__init__.py
# Engine modules: algebra, solvers, serialization and settings

"""Fat-graph categories, graph homology of algebras and graph K-theory, in exact arithmetic."""

__version__ = "0.1.0"

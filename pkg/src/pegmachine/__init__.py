"""pegmachine: parsing expression grammars, pointer pushdown automata,
their mutual translation, a linear-time memoizing simulator, and language
closure constructions, with a command-line front end."""

__version__ = "0.1.0"

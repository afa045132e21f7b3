"""Doris: explore an annotated corpus of historical political texts.

The package covers the whole pipeline: parsing JSONL corpora and RDF-style
annotation files, maintaining a topic taxonomy (a DAG with keyword rules),
expanding keywords from corpus statistics, annotating documents, and
serving a searchable, facetable index over HTTP and a CLI.
"""

__version__ = "0.1.0"

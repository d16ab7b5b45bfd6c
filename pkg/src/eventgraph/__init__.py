"""Event-centric knowledge retrieval over news and social documents.

Pipeline: ingest -> prepare -> cluster -> extract -> graph-build -> index,
then serve query/graph/timeline retrieval over HTTP.
"""

__version__ = "0.1.0"

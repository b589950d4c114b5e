"""Entropy-guided pre-tokenization and boundary-constrained BPE.

The toolkit segments unsegmented text (e.g. Chinese) with unsupervised
information-theoretic cues, feeds the resulting boundaries into a BPE
trainer whose merges never cross them, and scores the induced tokens
against gold word boundaries.
"""

__version__ = "0.1.0"

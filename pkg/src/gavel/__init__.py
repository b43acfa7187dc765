"""gavel: congressional-hearing transcript segmentation and Q&A analytics."""

__version__ = "0.1.0"

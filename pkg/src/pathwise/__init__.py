"""Pathwise: discussion pathways, aspect sentiment, and emotion analytics
for exported social-media and review data."""

__version__ = "0.1.0"
